//! Published lists of non-commuting pairs of involutory coset
//! representatives, and their comparison against the computed pairs.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::InvolutionCosets;
use crate::catalog::Family;
use crate::error::{Error, Result};
use crate::group::{ElementCode, GroupInstance};
use crate::involutions::{expand_rows, CountExpr};

const TABLE_TEXT: &str = include_str!("../../data/coset_pairs.tbl");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum IndexKind {
    Any,
    Odd,
    OneMod4,
    ThreeMod4,
    Even,
}

impl IndexKind {
    fn admits(self, v: i64) -> bool {
        match self {
            IndexKind::Any => true,
            IndexKind::Odd => v % 2 == 1,
            IndexKind::OneMod4 => v % 4 == 1,
            IndexKind::ThreeMod4 => v % 4 == 3,
            IndexKind::Even => v % 2 == 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Index {
    primes: u8,
    kind: IndexKind,
    fresh: bool,
}

impl Index {
    fn parse(text: &str) -> Option<Index> {
        let (fresh, rest) = match text.strip_prefix('~') {
            Some(r) => (true, r),
            None => (false, text),
        };
        let name = rest.trim_end_matches('\'');
        let primes = (rest.len() - name.len()) as u8;
        let kind = match name {
            "i" => IndexKind::Any,
            "j" => IndexKind::Odd,
            "j1" => IndexKind::OneMod4,
            "j2" => IndexKind::ThreeMod4,
            "k" => IndexKind::Even,
            _ => return None,
        };
        (primes <= 2 && !(fresh && primes > 0)).then_some(Index { primes, kind, fresh })
    }

    fn base(self) -> Index {
        Index { primes: 0, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Exponent {
    Fixed(CountExpr),
    Indexed(Index),
}

/// A word such as `p^j1' q^3 r` whose exponents may be indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementPattern {
    text: String,
    factors: Vec<(String, Exponent)>,
}

type Binding = HashMap<Index, i64>;

impl ElementPattern {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Data(format!("bad element pattern `{text}`"));
        let factors = text
            .split_whitespace()
            .map(|tok| {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => (n, e),
                    None => (tok, "1"),
                };
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) {
                    return Err(bad());
                }
                let exp = if let Some(inner) = exp.strip_prefix('(').and_then(|e| e.strip_suffix(')')) {
                    Exponent::Fixed(CountExpr::parse(inner)?)
                } else if let Some(ix) = Index::parse(exp) {
                    Exponent::Indexed(ix)
                } else {
                    Exponent::Fixed(CountExpr::parse(exp).map_err(|_| bad())?)
                };
                Ok((name.to_string(), exp))
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(bad());
        }
        Ok(ElementPattern { text: text.to_string(), factors })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    fn indices(&self) -> impl Iterator<Item = Index> + '_ {
        self.factors.iter().filter_map(|(_, e)| match e {
            Exponent::Indexed(ix) => Some(*ix),
            Exponent::Fixed(_) => None,
        })
    }

    fn eval(&self, g: &GroupInstance, binding: &Binding) -> Result<ElementCode> {
        let mut acc = ElementCode::IDENTITY;
        for (name, exp) in &self.factors {
            let e = match exp {
                Exponent::Fixed(c) => c.eval(g.m()),
                Exponent::Indexed(ix) => binding[ix],
            };
            acc = g.mul(acc, g.pow(g.generator(name)?, e));
        }
        Ok(acc)
    }
}

/// Index ranges shared by a block of patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IndexRange {
    span: CountExpr,
    modulus: CountExpr,
}

impl IndexRange {
    pub(crate) fn new(span: CountExpr, modulus: CountExpr) -> Self {
        IndexRange { span, modulus }
    }

    /// Every admissible binding of the indices occurring in `patterns`.
    fn bindings(&self, m: u32, patterns: &[&ElementPattern]) -> Vec<Binding> {
        let mut indices: Vec<Index> = patterns.iter().flat_map(|p| p.indices()).collect();
        indices.sort();
        indices.dedup();
        let span = self.span.eval(m);
        let modulus = self.modulus.eval(m);
        let mut out = Vec::new();
        let mut current = Binding::new();
        extend_binding(&indices, span, modulus, &mut current, &mut out);
        out
    }

    /// Evaluates every instance of the patterns.
    pub(crate) fn instances(&self, g: &GroupInstance, patterns: &[&ElementPattern]) -> Result<Vec<Vec<ElementCode>>> {
        self.bindings(g.m(), patterns).iter().map(|b| patterns.iter().map(|p| p.eval(g, b)).collect()).collect()
    }
}

fn extend_binding(indices: &[Index], span: i64, modulus: i64, current: &mut Binding, out: &mut Vec<Binding>) {
    let Some((&ix, rest)) = indices.split_first() else {
        out.push(current.clone());
        return;
    };
    let base = current.get(&ix.base()).copied();
    for v in (0..span).filter(|&v| ix.kind.admits(v)) {
        let ok = match (ix.primes, base) {
            (1, Some(b)) => (v - b).rem_euclid(modulus) != 0,
            (2, Some(b)) => (v - b - modulus / 2).rem_euclid(modulus) != 0,
            _ => true,
        };
        if ok {
            current.insert(ix, v);
            extend_binding(rest, span, modulus, current, out);
        }
    }
    current.remove(&ix);
}

/// One block of the published pair lists.
#[derive(Clone, Debug)]
pub struct PairPattern {
    pub family: Family,
    pub rows: Vec<u32>,
    range: IndexRange,
    lines: Vec<(ElementPattern, Vec<ElementPattern>)>,
}

impl PairPattern {
    pub fn line_count(&self) -> usize {
        self.lines.len()
    }
}

fn parse_header(line: &str) -> Result<(Family, Vec<u32>, IndexRange)> {
    let bad = || Error::Data(format!("bad block header `{line}`"));
    let mut parts = line.split_whitespace();
    let family: Family = parts.next().ok_or_else(bad)?.parse()?;
    let rows = expand_rows(parts.next().ok_or_else(bad)?)?;
    let mut span = None;
    let mut modulus = None;
    for kv in parts {
        match kv.split_once('=') {
            Some(("span", v)) => span = Some(CountExpr::parse(v)?),
            Some(("mod", v)) => modulus = Some(CountExpr::parse(v)?),
            _ => return Err(bad()),
        }
    }
    Ok((family, rows, IndexRange::new(span.ok_or_else(bad)?, modulus.ok_or_else(bad)?)))
}

fn parse_table(text: &str) -> Result<Vec<PairPattern>> {
    let mut blocks: Vec<PairPattern> = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let (family, rows, range) = parse_header(h)?;
            blocks.push(PairPattern { family, rows, range, lines: Vec::new() });
            continue;
        }
        let block = blocks.last_mut().ok_or_else(|| Error::Data("pair row before block header".into()))?;
        let (t0, t1s) = line.split_once('|').ok_or_else(|| Error::Data(format!("missing `|` in `{line}`")))?;
        let t1s = t1s.split(',').map(|t| ElementPattern::parse(t.trim())).collect::<Result<_>>()?;
        block.lines.push((ElementPattern::parse(t0.trim())?, t1s));
    }
    Ok(blocks)
}

fn table() -> &'static [PairPattern] {
    static TABLE: OnceLock<Vec<PairPattern>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(TABLE_TEXT).expect("embedded pair table is well formed"))
}

/// The published pair block covering a group, if any.
pub fn coset_pair_table(family: Family, n: u32) -> Option<&'static PairPattern> {
    table().iter().find(|b| b.family == family && b.rows.contains(&n))
}

/// Every family row with a published pair block.
pub fn coset_pair_groups() -> Vec<(Family, u32)> {
    table().iter().flat_map(|b| b.rows.iter().map(move |&n| (b.family, n))).collect()
}

/// Published against computed coset pairs, as sets of unordered pairs of
/// cosets, each coset named by its least involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPairMatch {
    pub group: String,
    pub computed_pairs: usize,
    pub published_pairs: usize,
    /// Computed but not published.
    pub missing: Vec<[String; 2]>,
    /// Published but not a non-commuting pair of involution cosets.
    pub extra: Vec<[String; 2]>,
    pub not_involutions: Vec<String>,
}

impl CosetPairMatch {
    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.not_involutions.is_empty()
    }
}

pub fn match_coset_pairs(g: &GroupInstance, block: &PairPattern) -> Result<CosetPairMatch> {
    let cosets = InvolutionCosets::new(g);
    let reps = &cosets.reps;
    let mut computed = BTreeSet::new();
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            if !g.commutes(reps[a], reps[b]) {
                computed.insert((a, b));
            }
        }
    }
    let mut published = BTreeSet::new();
    let mut published_raw = BTreeSet::new();
    let mut not_involutions = BTreeSet::new();
    for (t0, t1s) in &block.lines {
        for t1 in t1s {
            for inst in block.range.instances(g, &[t0, t1])? {
                match (cosets.coset_of(inst[0]), cosets.coset_of(inst[1])) {
                    (Some(a), Some(b)) => {
                        published.insert((a.min(b), a.max(b)));
                    }
                    (a, b) => {
                        for (c, x) in [(a, inst[0]), (b, inst[1])] {
                            if c.is_none() {
                                not_involutions.insert(g.format(x));
                            }
                        }
                        published_raw.insert([g.format(inst[0]), g.format(inst[1])]);
                    }
                }
            }
        }
    }
    let name = |(a, b): &(usize, usize)| [g.format(reps[*a]), g.format(reps[*b])];
    let mut extra: Vec<[String; 2]> = published.difference(&computed).map(name).collect();
    extra.extend(published_raw);
    Ok(CosetPairMatch {
        group: g.label().to_string(),
        computed_pairs: computed.len(),
        published_pairs: published.len(),
        missing: computed.difference(&published).map(name).collect(),
        extra,
        not_involutions: not_involutions.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_parses() {
        let groups = coset_pair_groups();
        assert_eq!(groups.len(), 17);
        assert_eq!(coset_pair_table(Family::MIIF, 9).unwrap().line_count(), 11);
        assert!(coset_pair_table(Family::MIID, 3).is_none());
    }

    #[test]
    fn primed_indices() {
        let range = IndexRange::new(CountExpr::parse("8").unwrap(), CountExpr::parse("4").unwrap());
        let a = ElementPattern::parse("p^j").unwrap();
        let b = ElementPattern::parse("p^j' q").unwrap();
        let c = ElementPattern::parse("p^j'' q").unwrap();
        let pairs: Vec<(i64, i64)> = range
            .bindings(7, &[&a, &b])
            .iter()
            .map(|bd| (bd[&a.indices().next().unwrap()], bd[&b.indices().next().unwrap()]))
            .collect();
        assert_eq!(pairs.len(), 8);
        assert!(pairs.iter().all(|(x, y)| (x - y).rem_euclid(4) == 2));
        assert_eq!(range.bindings(7, &[&a, &c]).len(), 8);
        assert_eq!(range.bindings(7, &[&a, &ElementPattern::parse("p^~j").unwrap()]).len(), 16);
    }
}

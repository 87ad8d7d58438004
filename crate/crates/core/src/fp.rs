//! Finitely presented groups and Todd–Coxeter coset enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementCode, GroupInstance};
use crate::verdict::Verdict;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl FpPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        FpPresentation { generators, relators }
    }

    /// Parses one relator (or relation `lhs = rhs`) per line. Blank lines and
    /// `#` comments are skipped. An optional `gens: a b c` line fixes the
    /// generator order; otherwise generators are taken in order of appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let mut generators: Vec<String> = Vec::new();
        let mut declared = false;
        let mut relators = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                generators = rest.split_whitespace().map(str::to_string).collect();
                declared = true;
                continue;
            }
            let w = Word::parse_relator(line)?;
            for g in w.generators() {
                if !generators.iter().any(|x| x == g) {
                    if declared {
                        return Err(Error::UnknownGenerator(g.to_string()));
                    }
                    generators.push(g.to_string());
                }
            }
            relators.push(w);
        }
        if relators.is_empty() {
            return Err(Error::Data("presentation has no relators".into()));
        }
        Ok(FpPresentation { generators, relators })
    }

    /// The rank-3 presentation with `(s0 s1)^4`, `(s1 s2)^(2^(m-3))` and
    /// `(s0 s1 s2 s1)^2 (s2 s1)^(2^(m-4) e)`.
    pub fn coxeter_quotient(m: u32, e: u32) -> Result<Self> {
        if !(5..=12).contains(&m) {
            return Err(Error::UnsupportedM { m, min: 5, max: 12 });
        }
        let text = format!(
            "gens: s0 s1 s2\ns0^2\ns1^2\ns2^2\n(s0 s1)^4\n(s0 s2)^2\n(s1 s2)^{}\n(s0 s1 s2 s1)^2 (s2 s1)^{}\n",
            1u64 << (m - 3),
            (1u64 << (m - 4)) * e as u64
        );
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gens: {}\n", self.generators.join(" "));
        for r in &self.relators {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

/// A complete coset table: `action[c][g]` is the coset `c · g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub generators: Vec<String>,
    pub action: Vec<Vec<u32>>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.action.len()
    }

    /// For an enumeration over the trivial subgroup, the group itself with
    /// cosets as elements.
    pub fn to_group(&self, label: &str, relators: Vec<Word>) -> Result<GroupInstance> {
        let n = self.index();
        if n as u64 > crate::pc::MAX_ORDER {
            return Err(Error::TooLarge(n as u64));
        }
        // BFS tree: each coset c != 0 is parent[c] * gen[c].
        let mut parent = vec![(u32::MAX, 0usize); n];
        let mut order = vec![0usize];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for (g, row) in self.action[c].iter().enumerate() {
                let d = *row as usize;
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = (c as u32, g);
                    order.push(d);
                }
            }
        }
        let mut table = vec![0u32; n * n];
        for c in 0..n {
            table[c * n] = c as u32;
            for &d in &order[1..] {
                let (p, g) = parent[d];
                let prev = table[c * n + p as usize] as usize;
                table[c * n + d] = self.action[prev][g];
            }
        }
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(g, name)| (name.clone(), ElementCode(self.action[0][g])))
            .collect();
        GroupInstance::from_table(label, table, generators, relators)
    }
}

const NONE: u32 = u32::MAX;

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    limit: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.cols + x] = d;
    }

    fn inv(x: usize) -> usize {
        x ^ 1
    }

    fn dead(&self, c: u32) -> bool {
        self.parent[c as usize] != c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<()> {
        if self.live >= self.limit {
            return Err(Error::CosetLimit(self.limit));
        }
        let n = self.parent.len() as u32;
        self.parent.push(n);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.live += 1;
        self.set(c, x, n);
        self.set(n, Self::inv(x), c);
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                if self.get(f, Self::inv(x)) == e {
                    self.set(f, Self::inv(x), NONE);
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                let ex = self.get(e1, x);
                let fx = self.get(f1, Self::inv(x));
                if ex != NONE {
                    self.merge(f1, ex);
                } else if fx != NONE {
                    self.merge(e1, fx);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, Self::inv(x), e1);
                }
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0isize;
        let mut j = w.len() as isize - 1;
        loop {
            while i <= j && self.get(f, w[i as usize]) != NONE {
                f = self.get(f, w[i as usize]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, Self::inv(w[j as usize])) != NONE {
                b = self.get(b, Self::inv(w[j as usize]));
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.set(f, x, b);
                self.set(b, Self::inv(x), f);
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

fn letters(w: &Word, gens: &[String]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (name, e) in w.syllables() {
        let g = gens.iter().position(|x| x == name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        let col = if *e > 0 { 2 * g } else { 2 * g + 1 };
        out.extend(std::iter::repeat_n(col, e.unsigned_abs() as usize));
    }
    Ok(out)
}

/// Enumerates the cosets of the subgroup generated by `subgroup` (HLT order:
/// cosets processed in definition order, each relator scanned and filled).
///
/// Fails with [`Error::CosetLimit`] when more than `max_cosets` cosets are
/// alive at once; that outcome is inconclusive.
pub fn coset_enumerate(pres: &FpPresentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::CosetLimit(0));
    }
    let cols = 2 * pres.generators.len();
    let rels: Vec<Vec<usize>> = pres.relators.iter().map(|r| letters(r, &pres.generators)).collect::<Result<_>>()?;
    let subs: Vec<Vec<usize>> = subgroup.iter().map(|r| letters(r, &pres.generators)).collect::<Result<_>>()?;
    let mut en =
        Enumerator { cols, table: vec![NONE; cols], parent: vec![0], live: 1, limit: max_cosets, queue: Vec::new() };
    for w in &subs {
        en.scan_and_fill(0, w)?;
    }
    let mut c = 0u32;
    while (c as usize) < en.parent.len() {
        for w in &rels {
            if en.dead(c) {
                break;
            }
            en.scan_and_fill(c, w)?;
        }
        if !en.dead(c) {
            for x in 0..cols {
                if en.dead(c) {
                    break;
                }
                if en.get(c, x) == NONE {
                    en.define(c, x)?;
                }
            }
        }
        c += 1;
    }

    // Compact: renumber live cosets in BFS order from the subgroup coset.
    let mut number = vec![NONE; en.parent.len()];
    let mut order = vec![0u32];
    number[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for x in 0..cols {
            let raw = en.get(c, x);
            if raw == NONE {
                return Err(Error::Data("coset table left incomplete".into()));
            }
            let d = en.rep(raw);
            if number[d as usize] == NONE {
                number[d as usize] = order.len() as u32;
                order.push(d);
            }
        }
    }
    let ngens = pres.generators.len();
    let action =
        order.iter().map(|&c| (0..ngens).map(|g| number[en.rep(en.get(c, 2 * g)) as usize]).collect()).collect();
    Ok(CosetTable { generators: pres.generators.clone(), action })
}

/// Order of a finitely presented group, by enumeration over the trivial
/// subgroup.
pub fn group_order(pres: &FpPresentation, max_cosets: usize) -> Result<usize> {
    Ok(coset_enumerate(pres, &[], max_cosets)?.index())
}

/// Default coset limit `2^(m+4)` for an expected order `2^m`.
pub fn default_limit(m: u32) -> usize {
    1usize << (m + 4)
}

/// Checks that `ord(s_j s_{j+1})` equals the Coxeter label `ty[j]` for each
/// `j` and that non-adjacent generators commute.
pub fn verify_smooth_quotient(g: &GroupInstance, tuple: &[ElementCode], ty: &[u32]) -> Verdict {
    let mut v = Verdict::new(format!("{} smooth quotient of [{}]", g.label(), join(ty)));
    if ty.len() + 1 != tuple.len() {
        v.check("one label per edge", false, format!("{} generators, {} labels", tuple.len(), ty.len()));
        return v;
    }
    v.check("involutions", tuple.iter().all(|&s| g.is_involution(s)), "");
    for (j, &label) in ty.iter().enumerate() {
        let found = g.element_order(g.mul(tuple[j], tuple[j + 1]));
        v.check(format!("ord(s{j} s{})", j + 1), found == label, format!("{found} vs {label}"));
    }
    for j in 0..tuple.len() {
        for k in j + 2..tuple.len() {
            let found = g.element_order(g.mul(tuple[j], tuple[k]));
            v.check(format!("ord(s{j} s{k})"), found == 2, found.to_string());
        }
    }
    v
}

/// Checks that the generators of `pres`, sent to `tuple`, satisfy every
/// relator in `g` and that `pres` defines a group of order `|g|`.
pub fn verify_alternative_presentation(
    g: &GroupInstance,
    tuple: &[ElementCode],
    pres: &FpPresentation,
    max_cosets: usize,
) -> Verdict {
    let mut v = Verdict::new(format!("{} = ⟨{}⟩", g.label(), pres.generators.join(", ")));
    if tuple.len() != pres.generators.len() {
        v.check("one image per generator", false, format!("{} vs {}", tuple.len(), pres.generators.len()));
        return v;
    }
    v.check("images generate", g.closure_size(tuple) == g.order(), "");
    for r in &pres.relators {
        let value = g.eval_with(r, &pres.generators, tuple);
        let detail = match &value {
            Ok(x) => g.format(*x),
            Err(e) => e.to_string(),
        };
        v.check(format!("{r} = 1"), value == Ok(ElementCode::IDENTITY), detail);
    }
    match group_order(pres, max_cosets) {
        Ok(n) => v.check("enumerated order", n == g.order(), format!("{n} vs {}", g.order())),
        Err(e) => v.check("enumerated order", false, format!("inconclusive: {e}")),
    };
    v
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_two() {
        let p = FpPresentation::parse("g^2").unwrap();
        assert_eq!(group_order(&p, 16).unwrap(), 2);
    }

    #[test]
    fn dihedral_orders() {
        let p = FpPresentation::parse("a^2\nb^2\n(a b)^8").unwrap();
        assert_eq!(group_order(&p, 1000).unwrap(), 16);
    }

    #[test]
    fn quaternion() {
        let p = FpPresentation::parse("a^4\na^2 = b^2\nb^-1 a b = a^-1").unwrap();
        assert_eq!(group_order(&p, 1000).unwrap(), 8);
    }

    #[test]
    fn limit_is_reported() {
        let p = FpPresentation::parse("a^2\nb^2\n(a b)^64").unwrap();
        assert_eq!(group_order(&p, 8), Err(Error::CosetLimit(8)));
    }

    #[test]
    fn subgroup_index() {
        let p = FpPresentation::parse("a^2\nb^2\n(a b)^8").unwrap();
        let t = coset_enumerate(&p, &[Word::gen("a", 1)], 1000).unwrap();
        assert_eq!(t.index(), 8);
    }

    #[test]
    fn smooth_dihedral() {
        let d = crate::catalog::build_dihedral(8).unwrap();
        let t = [d.element("b").unwrap(), d.element("a b").unwrap()];
        assert!(verify_smooth_quotient(&d, &t, &[8]).pass());
        assert!(!verify_smooth_quotient(&d, &t, &[4]).pass());
        let collapsed = [d.element("b").unwrap(), d.element("a^4 b").unwrap()];
        assert!(!verify_smooth_quotient(&d, &collapsed, &[8]).pass());
    }

    #[test]
    fn trivial_presentation() {
        let p = FpPresentation::parse("g").unwrap();
        let one =
            GroupInstance::from_table("1", vec![0], vec![("g".into(), ElementCode::IDENTITY)], Vec::new()).unwrap();
        assert!(verify_alternative_presentation(&one, &[ElementCode::IDENTITY], &p, 4).pass());
    }

    #[test]
    fn group_from_table() {
        let p = FpPresentation::parse("a^2\nb^2\n(a b)^4").unwrap();
        let t = coset_enumerate(&p, &[], 100).unwrap();
        let g = t.to_group("D4", p.relators.clone()).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
        assert!(g.permutation_oracle());
        assert!(g.check_associativity(None, 0).failure.is_none());
    }
}

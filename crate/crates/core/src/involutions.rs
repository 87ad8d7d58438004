//! Involutions, the sign homomorphisms `φ_X`, and generation by involutions.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, Family, FamilySpec};
use crate::error::{Error, Result};
use crate::group::{ElementCode, GroupInstance};
use crate::subgroups::{span, FrattiniQuotient};

const TABLE_TEXT: &str = include_str!("../data/involutions.tbl");

pub fn involutions(g: &GroupInstance) -> Vec<ElementCode> {
    g.elements().filter(|&x| g.is_involution(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionReport {
    pub central: Vec<ElementCode>,
    pub noncentral: Vec<ElementCode>,
    pub total: usize,
    pub generated_by_involutions: bool,
    /// Generator names `X` with `φ_X(⟨inv(G)⟩) = 1`.
    pub phi_witness: Option<Vec<String>>,
}

pub fn enumerate_involutions(g: &GroupInstance) -> InvolutionReport {
    let (central, noncentral): (Vec<_>, Vec<_>) = involutions(g).into_iter().partition(|&x| g.is_central(x));
    let total = central.len() + noncentral.len();
    let mut all = central.clone();
    all.extend(&noncentral);
    let generated = span(g, &all).is_whole();
    let phi_witness = if generated { None } else { find_phi_certificate(g) };
    InvolutionReport { central, noncentral, total, generated_by_involutions: generated, phi_witness }
}

/// Outcome of evaluating `φ_X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiVerdict {
    /// Some involution maps to `-1`.
    Generates,
    /// Every involution maps to `+1`, so `⟨inv(G)⟩ ≠ G`.
    CertifiesNot,
    /// The sign assignment does not extend to a homomorphism.
    Invalid { reason: String },
}

/// Sign of `φ_X` on every element (`true` for `-1`), or the reason the
/// assignment is not a homomorphism.
pub fn phi_signs(g: &GroupInstance, x: &[&str]) -> std::result::Result<Vec<bool>, String> {
    for name in x {
        if g.generator(name).is_err() {
            return Err(format!("`{name}` is not a generator"));
        }
    }
    let odd_in_x = |w: &crate::word::Word| x.iter().map(|n| w.exponent_sum(n)).sum::<i64>().rem_euclid(2) == 1;
    for r in g.relators() {
        if odd_in_x(r) {
            return Err(format!("relator `{r}` maps to -1"));
        }
    }
    let signs: Vec<bool> = g.elements().map(|a| odd_in_x(&g.word_of(a))).collect();
    // Independent route: the signs must respect the Cayley table.
    for a in g.elements() {
        for (name, s) in g.generators() {
            let expected = signs[a.idx()] ^ x.contains(&name.as_str());
            if signs[g.mul(a, *s).idx()] != expected {
                return Err(format!("sign of {} * {name} is inconsistent", g.format(a)));
            }
        }
    }
    Ok(signs)
}

pub fn phi_test(g: &GroupInstance, x: &[&str]) -> PhiVerdict {
    if x.is_empty() {
        return PhiVerdict::Invalid { reason: "X must be nonempty".into() };
    }
    match phi_signs(g, x) {
        Err(reason) => PhiVerdict::Invalid { reason },
        Ok(signs) => {
            if involutions(g).iter().any(|i| signs[i.idx()]) {
                PhiVerdict::Generates
            } else {
                PhiVerdict::CertifiesNot
            }
        }
    }
}

/// First certifying `X` in order of size, then generator order. The
/// generators must form a minimal generating set.
pub fn find_phi_certificate(g: &GroupInstance) -> Option<Vec<String>> {
    let names: Vec<&str> = g.generators().iter().map(|x| x.0.as_str()).collect();
    let fq = FrattiniQuotient::new(g);
    if names.len() != fq.dim() {
        return None;
    }
    for size in 1..=names.len() {
        for subset in names.iter().copied().combinations(size) {
            if phi_test(g, &subset) == PhiVerdict::CertifiesNot {
                return Some(subset.iter().map(|s| s.to_string()).collect());
            }
        }
    }
    None
}

pub fn generated_by_involutions(g: &GroupInstance) -> bool {
    span(g, &involutions(g)).is_whole()
}

/// The groups of the catalog generated by involutions, as published.
pub const PUBLISHED_GAMMA: [(Family, u32); 22] = [
    (Family::NII, 3),
    (Family::NII, 4),
    (Family::NII, 5),
    (Family::MIIA, 39),
    (Family::MIIA, 40),
    (Family::MIIB, 19),
    (Family::MIIB, 20),
    (Family::MIIC, 5),
    (Family::MIID, 3),
    (Family::MIID, 17),
    (Family::MIID, 18),
    (Family::MIID, 19),
    (Family::MIIE, 1),
    (Family::MIIF, 8),
    (Family::MIIF, 9),
    (Family::MIII, 3),
    (Family::MIII, 4),
    (Family::MIII, 5),
    (Family::MIII, 10),
    (Family::MIII, 11),
    (Family::MIII, 13),
    (Family::MIII, 14),
];

/// Computes the set of catalog groups generated by involutions at `m`.
pub fn gamma(m: u32) -> Result<Vec<(FamilySpec, GroupInstance)>> {
    let all = catalog::catalog_enumerate(m)?;
    Ok(all.into_par_iter().filter(|(_, g)| generated_by_involutions(g)).collect())
}

/// A count of the form `sum c_i 2^(m - k_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountExpr {
    /// `(c, None)` for a constant, `(c, Some(k))` for `c * 2^(m-k)`.
    pub terms: Vec<(i64, Option<u32>)>,
}

impl CountExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Data(format!("bad count expression `{text}`"));
        let terms = text
            .split('+')
            .map(|t| {
                let t = t.trim();
                let (coef, rest) = match t.split_once('*') {
                    Some((c, r)) => (c.parse().map_err(|_| bad())?, r),
                    None if t.starts_with("2^") => (1, t),
                    None => return t.parse().map(|c| (c, None)).map_err(|_| bad()),
                };
                let k = rest
                    .strip_prefix("2^(m-")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(bad)?;
                Ok((coef, Some(k)))
            })
            .collect::<Result<_>>()?;
        Ok(CountExpr { terms })
    }

    pub fn eval(&self, m: u32) -> i64 {
        self.terms
            .iter()
            .map(|&(c, k)| match k {
                None => c,
                Some(k) => c << (m - k),
            })
            .sum()
    }
}

impl fmt::Display for CountExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(c, k)| match (c, k) {
                (c, None) => c.to_string(),
                (1, Some(k)) => format!("2^(m-{k})"),
                (c, Some(k)) => format!("{c}*2^(m-{k})"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Published involution data for one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedInvolutions {
    pub central: CountExpr,
    pub noncentral: CountExpr,
    /// `None` when the group is generated by its involutions.
    pub phi: Option<Vec<String>>,
    /// The split as printed, where it is wrong.
    pub erratum: Option<(CountExpr, CountExpr)>,
}

impl PublishedInvolutions {
    /// `central + (noncentral)` in the published notation.
    pub fn shape(&self) -> String {
        let nc = self.noncentral.to_string();
        if self.noncentral.terms.len() > 1 {
            format!("{} + ({nc})", self.central)
        } else {
            format!("{} + {nc}", self.central)
        }
    }
}

pub(crate) fn expand_rows(spec: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (
                    a.parse().map_err(|_| Error::Data(format!("bad row range `{spec}`")))?,
                    b.parse().map_err(|_| Error::Data(format!("bad row range `{spec}`")))?,
                );
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| Error::Data(format!("bad row `{spec}`")))?),
        }
    }
    Ok(out)
}

fn parse_table(text: &str) -> Result<HashMap<(Family, u32), PublishedInvolutions>> {
    let mut out = HashMap::new();
    let mut family = None;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            family = Some(name.parse::<Family>()?);
            continue;
        }
        let fam = family.ok_or_else(|| Error::Data("row before table header".into()))?;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 && cols.len() != 5 {
            return Err(Error::Data(format!("expected 4 or 5 columns in `{line}`")));
        }
        let erratum = match cols.get(4) {
            None => None,
            Some(col) => {
                let (c, n) = col
                    .strip_prefix("erratum=")
                    .and_then(|e| e.split_once(','))
                    .ok_or_else(|| Error::Data(format!("bad erratum `{col}`")))?;
                Some((CountExpr::parse(c)?, CountExpr::parse(n)?))
            }
        };
        let entry = PublishedInvolutions {
            central: CountExpr::parse(cols[1])?,
            noncentral: CountExpr::parse(cols[2])?,
            phi: (cols[3] != "-").then(|| cols[3].split(',').map(str::to_string).collect()),
            erratum,
        };
        for n in expand_rows(cols[0])? {
            out.insert((fam, n), entry.clone());
        }
    }
    Ok(out)
}

fn published_table() -> &'static HashMap<(Family, u32), PublishedInvolutions> {
    static TABLE: OnceLock<HashMap<(Family, u32), PublishedInvolutions>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(TABLE_TEXT).expect("embedded involution table is well formed"))
}

pub fn published(family: Family, n: u32) -> Option<&'static PublishedInvolutions> {
    published_table().get(&(family, n))
}

/// One row of the involution report in the published table's shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionRow {
    pub group: String,
    pub central: Vec<String>,
    pub noncentral: Vec<String>,
    pub central_count: usize,
    pub noncentral_count: usize,
    pub count: String,
    pub phi: Option<String>,
}

pub fn involution_row(spec: &FamilySpec, g: &GroupInstance) -> InvolutionRow {
    let rep = enumerate_involutions(g);
    InvolutionRow {
        group: spec.label(),
        central: rep.central.iter().map(|&x| g.format(x)).collect(),
        noncentral: rep.noncentral.iter().map(|&x| g.format(x)).collect(),
        central_count: rep.central.len(),
        noncentral_count: rep.noncentral.len(),
        count: format!("{} + {}", rep.central.len(), rep.noncentral.len()),
        phi: rep.phi_witness.map(|x| format!("phi_{{{}}}", x.join(", "))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, build_dihedral, spec};

    #[test]
    fn count_expressions() {
        let e = CountExpr::parse("6+2^(m-3)+3*2^(m-6)").unwrap();
        assert_eq!(e.eval(7), 6 + 16 + 6);
        assert_eq!(e.to_string(), "6 + 2^(m-3) + 3*2^(m-6)");
        assert!(CountExpr::parse("2^(n-3)").is_err());
    }

    #[test]
    fn table_covers_every_row() {
        for f in Family::CLASSIFIED {
            for r in catalog::rows(f) {
                assert!(published(f, r.n).is_some(), "{f} {}", r.n);
            }
        }
        let d3 = published(Family::MIID, 3).unwrap();
        assert_eq!(d3.shape(), "1 + (6 + 2^(m-2))");
    }

    #[test]
    fn dihedral_is_generated() {
        let d = build_dihedral(16).unwrap();
        assert!(generated_by_involutions(&d));
        assert_eq!(involutions(&d).len(), 17);
    }

    #[test]
    fn n_ii_9_counts() {
        let g = build(&spec(Family::NII, 9, 7, false).unwrap()).unwrap();
        let rep = enumerate_involutions(&g);
        assert_eq!((rep.central.len(), rep.noncentral.len()), (7, 0));
        assert!(!rep.generated_by_involutions);
        assert_eq!(rep.phi_witness, Some(vec!["p".to_string()]));
    }

    #[test]
    fn phi_identity_sign() {
        let g = build(&spec(Family::NII, 7, 7, false).unwrap()).unwrap();
        let signs = phi_signs(&g, &["p"]).unwrap();
        assert!(!signs[0]);
        assert_eq!(phi_test(&g, &["p"]), PhiVerdict::CertifiesNot);
        assert!(matches!(phi_test(&g, &[]), PhiVerdict::Invalid { .. }));
    }
}

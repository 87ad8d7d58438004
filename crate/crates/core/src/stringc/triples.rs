//! The published short list of triples in `M_II-E,1(m)` that escape the
//! shared-central-power test.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::pairs::{ElementPattern, IndexRange};
use super::{power_hits, InvolutionCosets};
use crate::error::Result;
use crate::group::{ElementCode, GroupInstance};
use crate::involutions::CountExpr;

/// `(s0, s1 options, s2 options)`; every index occurrence is independent.
const ROWS: [(&str, &[&str], &[&str]); 4] = [
    ("p^j r", &["p^j q r", "p^j q^3 r"], &["p^j r", "p^j q^2 r"]),
    ("p^j q r", &["p^j r", "p^j q^2 r"], &["p^j q r", "p^j q^3 r"]),
    ("p^j q^2 r", &["p^j q r", "p^j q^3 r"], &["p^j q^2 r"]),
    ("p^j q^3 r", &["p^j r", "p^j q^2 r"], &["p^j q^3 r"]),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplesReport {
    pub group: String,
    /// Instances of the listed rows with a connected string pattern.
    pub listed: usize,
    /// Listed instances where `zeta` is not a shared power of both products.
    pub escaping: usize,
    /// Escaping instances where `s0 s1 s0 = s2 s1 s2`.
    pub equal_conjugates: usize,
    /// Coset triples escaping the shared power test that are not listed,
    /// even up to reversal.
    pub unlisted: Vec<[String; 3]>,
}

impl TriplesReport {
    pub fn pass(&self) -> bool {
        self.escaping > 0 && self.equal_conjugates == self.escaping && self.unlisted.is_empty()
    }
}

fn connected_pattern(g: &GroupInstance, t: &[ElementCode]) -> bool {
    !g.commutes(t[0], t[1]) && !g.commutes(t[1], t[2]) && g.commutes(t[0], t[2])
}

/// Checks the listed triples of `g = M_II-E,1(m)` against a fixed central
/// involution `zeta = p^(2^(m-4))`.
pub fn triples_report(g: &GroupInstance) -> Result<TriplesReport> {
    let m = g.m();
    let zeta = g.pow(g.generator("p")?, 1 << (m - 4));
    let range = IndexRange::new(CountExpr::parse("2^(m-3)")?, CountExpr::parse("2^(m-4)")?);
    let expand = |text: &str| -> Result<Vec<ElementCode>> {
        let pat = ElementPattern::parse(text)?;
        Ok(range.instances(g, &[&pat])?.into_iter().map(|v| v[0]).collect())
    };
    let cosets = InvolutionCosets::new(g);
    let mut report = TriplesReport {
        group: g.label().to_string(),
        listed: 0,
        escaping: 0,
        equal_conjugates: 0,
        unlisted: Vec::new(),
    };
    let mut listed = BTreeSet::new();
    for (s0, s1s, s2s) in ROWS {
        let s0s = expand(s0)?;
        let s1s = s1s.iter().map(|t| expand(t)).collect::<Result<Vec<_>>>()?.concat();
        let s2s = s2s.iter().map(|t| expand(t)).collect::<Result<Vec<_>>>()?.concat();
        for &a in &s0s {
            for &b in &s1s {
                for &c in &s2s {
                    let t = [a, b, c];
                    if !connected_pattern(g, &t) {
                        continue;
                    }
                    report.listed += 1;
                    let key: Option<Vec<usize>> = t.iter().map(|&x| cosets.coset_of(x)).collect();
                    if let Some(key) = key {
                        listed.insert(key.clone());
                        listed.insert(key.into_iter().rev().collect());
                    }
                    if power_hits(g, a, b, zeta) && power_hits(g, b, c, zeta) {
                        continue;
                    }
                    report.escaping += 1;
                    if g.mul(g.mul(a, b), a) == g.mul(g.mul(c, b), c) {
                        report.equal_conjugates += 1;
                    }
                }
            }
        }
    }
    let reps = &cosets.reps;
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            for (k, &c) in reps.iter().enumerate() {
                let t = [a, b, c];
                if !connected_pattern(g, &t) || (power_hits(g, a, b, zeta) && power_hits(g, b, c, zeta)) {
                    continue;
                }
                if !listed.contains(&vec![i, j, k]) {
                    report.unlisted.push(t.map(|x| g.format(x)));
                }
            }
        }
    }
    Ok(report)
}

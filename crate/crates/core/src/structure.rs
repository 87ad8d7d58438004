//! Subgroup isomorphisms and product decompositions of the catalog groups,
//! and the decompositions of the two string C-groups.

use serde::{Deserialize, Serialize};

use crate::catalog::{build, spec, Family};
use crate::error::{Error, Result};
use crate::fp::{default_limit, verify_alternative_presentation, verify_smooth_quotient, FpPresentation};
use crate::group::{ElementCode, GroupInstance};
use crate::subgroups::{
    span, verify_decomposition, verify_decomposition_within, verify_subgroup_isomorphism, DecompositionKind,
};
use crate::verdict::Verdict;

/// `(n, n')` with `⟨p, r, s⟩ ≅ N_II,n'(m-1)` through `p, r, s -> p', q', r'`.
pub const EMBEDDED_PRS: [(u32, u32); 9] = [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (7, 7), (8, 8), (9, 9)];
/// `(n, n')` with `⟨p, q, r⟩ ≅ N_II,n'(m-1)` through `p, q, r -> p', q', r'`.
pub const EMBEDDED_PQR: [(u32, u32); 5] = [(10, 5), (11, 6), (12, 8), (13, 8), (14, 7)];

fn row(family: Family, n: u32, m: u32) -> Result<GroupInstance> {
    build(&spec(family, n, m, false)?)
}

fn codes(g: &GroupInstance, words: &[&str]) -> Result<Vec<ElementCode>> {
    words.iter().map(|w| g.element(w)).collect()
}

/// Checks the embedding of `N_II,n'(m-1)` in `M_III,n(m)`.
pub fn verify_embedding(n: u32, m: u32) -> Result<Verdict> {
    let (target_n, sources) = match EMBEDDED_PRS.iter().chain(&EMBEDDED_PQR).find(|(a, _)| *a == n) {
        Some(&(a, b)) if a <= 9 => (b, ["p", "r", "s"]),
        Some(&(_, b)) => (b, ["p", "q", "r"]),
        None => return Err(Error::UnknownRow { family: "M_III".into(), index: n }),
    };
    let g = row(Family::MIII, n, m)?;
    let target = row(Family::NII, target_n, m - 1)?;
    let sub = codes(&g, &sources)?;
    let images = codes(&target, &["p", "q", "r"])?;
    let subject = format!("⟨{}⟩ ≤ {} ≅ {}", sources.join(", "), g.label(), target.label());
    Ok(verify_subgroup_isomorphism(&g, &sub, &target, &images, &subject))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    /// `⟨p, r, s⟩ × ⟨q⟩`
    PrsTimesQ,
    /// `⟨p, q, r⟩⟨s⟩`
    PqrTimesS,
    /// `⟨p, q, r⟩ ⋊ ⟨s⟩`
    PqrSemiS,
}

pub fn miii_shape(n: u32) -> Shape {
    match n {
        1..=9 => Shape::PrsTimesQ,
        10 | 11 => Shape::PqrTimesS,
        _ => Shape::PqrSemiS,
    }
}

/// Checks the product decomposition of `M_III,n(m)`.
pub fn verify_miii_decomposition(n: u32, m: u32) -> Result<Verdict> {
    let g = row(Family::MIII, n, m)?;
    let (kind, a, b) = match miii_shape(n) {
        Shape::PrsTimesQ => (DecompositionKind::Direct, ["p", "r", "s"], ["q"]),
        Shape::PqrTimesS => (DecompositionKind::Product, ["p", "q", "r"], ["s"]),
        Shape::PqrSemiS => (DecompositionKind::Semidirect, ["p", "q", "r"], ["s"]),
    };
    let subject = format!("{} as {:?}", g.label(), miii_shape(n));
    Ok(verify_decomposition(&g, kind, &[codes(&g, &a)?, codes(&g, &b[..])?], &subject))
}

/// The generator triple `(r, q^3 r, p^-1 q^3 r)` of `M_II-D,3(m)` and
/// `M_II-D,19(m)`.
pub const WINNER_TUPLE: [&str; 3] = ["r", "q^3 r", "p^-1 q^3 r"];

fn winner(n: u32, m: u32) -> Result<(GroupInstance, [ElementCode; 3])> {
    if n != 3 && n != 19 {
        return Err(Error::UnknownRow { family: "M_II-D".into(), index: n });
    }
    let g = row(Family::MIID, n, m)?;
    let t = codes(&g, &WINNER_TUPLE)?;
    Ok((g, [t[0], t[1], t[2]]))
}

/// Checks `(H2 ⋊ H0) ⋊ ⟨s1⟩` for `n = 3` and `(H2 × H0) ⋊ ⟨s1⟩` for
/// `n = 19`, where `H0 = ⟨s0, s1 s0 s1⟩` and `H2 = ⟨s2, s1 s2 s1⟩`.
pub fn verify_winner_decomposition(n: u32, m: u32) -> Result<Verdict> {
    let (g, [s0, s1, s2]) = winner(n, m)?;
    let mut v = Verdict::new(format!("{} over H2, H0, ⟨s1⟩", g.label()));
    let h0 = vec![s0, g.conj(s0, s1)];
    let h2 = vec![s2, g.conj(s2, s1)];
    let (len0, len2) = (span(&g, &h0).len(), span(&g, &h2).len());
    v.check("|H0| = 4", len0 == 4, len0.to_string());
    v.check("|H2| = 2^(m-3)", len2 == 1 << (m - 3), len2.to_string());
    v.check("H0 is dihedral", h0.iter().all(|&x| g.is_involution(x)), "");
    v.check("H2 is dihedral", h2.iter().all(|&x| g.is_involution(x)), "");

    let inner: Vec<ElementCode> = h2.iter().chain(&h0).copied().collect();
    let kind = if n == 3 { DecompositionKind::Semidirect } else { DecompositionKind::Direct };
    v.absorb(verify_decomposition_within(&g, &inner, kind, &[h2.clone(), h0.clone()], "inner"));
    v.absorb(verify_decomposition(&g, DecompositionKind::Semidirect, &[inner.clone(), vec![s1]], "outer"));

    let s1s2s1 = h2[1];
    if n == 3 {
        v.check("s0 s2 s0 = s2", g.conj(s2, s0) == s2, "");
        let twist = g.pow(g.mul(s2, s1s2s1), 1 << (m - 5));
        let rhs = g.mul(s1s2s1, twist);
        v.check(
            "s0 (s1 s2 s1) s0 = s1 s2 s1 (s2 s1 s2 s1)^(2^(m-5))",
            g.conj(s1s2s1, s0) == rhs,
            g.format(g.conj(s1s2s1, s0)),
        );
        v.check("s0 does not centralize H2", !g.commutes(s0, s1s2s1), "");
    } else {
        v.check("s0 s2 = s2 s0", g.commutes(s0, s2), "");
        v.check("s0 (s1 s2 s1) = (s1 s2 s1) s0", g.commutes(s0, s1s2s1), "");
    }
    Ok(v)
}

/// The Coxeter-quotient presentation with `e6` as its last exponent.
pub fn winner_presentation(m: u32, e6: u32) -> Result<FpPresentation> {
    FpPresentation::coxeter_quotient(m, e6)
}

/// `e6` of the alternative presentation of `M_II-D,n`.
pub fn winner_e6(n: u32) -> u32 {
    u32::from(n == 3)
}

/// Checks the alternative presentation of `M_II-D,n(m)` with the given `e6`,
/// together with smoothness over `[4, 2^(m-3)]`.
pub fn verify_winner_presentation(n: u32, m: u32, e6: u32) -> Result<Verdict> {
    let (g, t) = winner(n, m)?;
    let mut v = Verdict::new(format!("{} with e6 = {e6}", g.label()));
    v.absorb(verify_smooth_quotient(&g, &t, &[4, 1 << (m - 3)]));
    let [s0, s1, s2] = t;
    v.check("p = s1 s2", g.mul(s1, s2) == g.generator("p")?, "");
    v.check("q = s0 s1", g.mul(s0, s1) == g.generator("q")?, "");
    v.check("r = s0", s0 == g.generator("r")?, "");
    v.absorb(verify_alternative_presentation(&g, &t, &winner_presentation(m, e6)?, default_limit(m)));
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub m: u32,
    pub embeddings: Vec<Verdict>,
    pub decompositions: Vec<Verdict>,
    pub winners: Vec<Verdict>,
    pub presentations: Vec<Verdict>,
}

impl StructureReport {
    pub fn pass(&self) -> bool {
        [&self.embeddings, &self.decompositions, &self.winners, &self.presentations]
            .iter()
            .all(|vs| vs.iter().all(Verdict::pass))
    }
}

/// Every structure claim at `m`.
pub fn structure_report(m: u32) -> Result<StructureReport> {
    let embeddings =
        EMBEDDED_PRS.iter().chain(&EMBEDDED_PQR).map(|&(n, _)| verify_embedding(n, m)).collect::<Result<_>>()?;
    let decompositions = (1..=14).map(|n| verify_miii_decomposition(n, m)).collect::<Result<_>>()?;
    let winners = [3, 19].iter().map(|&n| verify_winner_decomposition(n, m)).collect::<Result<_>>()?;
    let presentations =
        [3, 19].iter().map(|&n| verify_winner_presentation(n, m, winner_e6(n))).collect::<Result<_>>()?;
    Ok(StructureReport { m, embeddings, decompositions, winners, presentations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_e6_fails_for_d3() {
        let v = verify_winner_presentation(3, 7, 0).unwrap();
        assert!(!v.pass());
        let failed: Vec<&str> = v.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed.len(), 1, "{v}");
        assert!(failed[0].contains("s0 s1 s2 s1 s0 s1 s2 s1 = 1"));
    }

    #[test]
    fn d19_presentation_holds() {
        let v = verify_winner_presentation(19, 7, 0).unwrap();
        assert!(v.pass(), "{v}");
    }

    #[test]
    fn unknown_embedding() {
        assert!(verify_embedding(15, 7).is_err());
    }
}

//! Whole-catalog reports: build integrity, published involution data, the
//! set of groups generated by involutions, and the classification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{rows, spec, Family, FamilySpec, Provenance};
use crate::error::{Error, Result};
use crate::group::GroupInstance;
use crate::involutions::{enumerate_involutions, phi_test, published, PhiVerdict, PUBLISHED_GAMMA};
use crate::stringc::{default_ranks, search, type_string, SearchMode, ViolationSummary};
use crate::subgroups::rank;
use crate::verdict::Verdict;

/// The catalog rows whose original parameters give a group of half the
/// claimed order.
pub fn historical_rows() -> Vec<(Family, u32)> {
    Family::CLASSIFIED
        .iter()
        .flat_map(|&f| rows(f).iter().filter(|r| r.meta.provenance == Provenance::Historical).map(move |r| (f, r.n)))
        .collect()
}

/// Orders, exponents and ranks of every built group, and the historical rows.
pub fn catalog_integrity(m: u32, groups: &[(FamilySpec, GroupInstance)]) -> Result<Verdict> {
    let mut v = Verdict::new(format!("catalog at m = {m}"));
    v.check("146 rows", groups.len() == 146, groups.len().to_string());
    for (s, g) in groups {
        let ok = g.order() == 1 << m && g.exponent() == s.expected_exponent() && rank(g) == s.family.rank();
        v.check(s.label(), ok, format!("order {}, exponent {}, rank {}", g.order(), g.exponent(), rank(g)));
    }
    for (f, n) in historical_rows() {
        let result = crate::catalog::build(&spec(f, n, m, true)?);
        let label = spec(f, n, m, true)?.label();
        let half = 1u64 << (m - 1);
        match result {
            Err(Error::OrderMismatch { found, .. }) => v.check(label, found == half, format!("order {found}")),
            Err(e) => v.check(label, false, e.to_string()),
            Ok(g) => v.check(label, false, format!("built with order {}", g.order())),
        };
    }
    Ok(v)
}

/// Involution counts and `φ_X` columns against the published table.
pub fn involution_table_check(groups: &[(FamilySpec, GroupInstance)]) -> Verdict {
    let mut v = Verdict::new("involution table");
    let checks: Vec<(String, bool, String)> = groups
        .par_iter()
        .map(|(s, g)| {
            let label = s.label();
            let Some(row) = published(s.family, s.n) else {
                return (label, false, "no published row".to_string());
            };
            let rep = enumerate_involutions(g);
            let m = s.m;
            let (c, n) = (row.central.eval(m) as usize, row.noncentral.eval(m) as usize);
            let mut ok = rep.central.len() == c && rep.noncentral.len() == n;
            let mut detail = format!("{} + {} vs {}", rep.central.len(), rep.noncentral.len(), row.shape());
            if let Some((pc, pn)) = &row.erratum {
                let printed_total = (pc.eval(m) + pn.eval(m)) as usize;
                ok &= printed_total == rep.total;
                detail.push_str(&format!(" (printed as {pc} + {pn})"));
            }
            ok &= rep.generated_by_involutions == row.phi.is_none();
            if let Some(x) = &row.phi {
                let names: Vec<&str> = x.iter().map(String::as_str).collect();
                let verdict = phi_test(g, &names);
                ok &= verdict == PhiVerdict::CertifiesNot;
                detail.push_str(&format!(", phi_{{{}}}: {verdict:?}", x.join(",")));
            }
            (label, ok, detail)
        })
        .collect();
    for (label, ok, detail) in checks {
        v.check(label, ok, detail);
    }
    v
}

/// The computed set of groups generated by involutions against the
/// published list, with its exponent and rank counts.
pub fn gamma_check(m: u32, groups: &[(FamilySpec, GroupInstance)]) -> Verdict {
    let mut v = Verdict::new(format!("groups generated by involutions at m = {m}"));
    let generated: Vec<&(FamilySpec, GroupInstance)> =
        groups.par_iter().filter(|(_, g)| enumerate_involutions(g).generated_by_involutions).collect();
    let mut computed: Vec<(Family, u32)> = generated.iter().map(|(s, _)| (s.family, s.n)).collect();
    computed.sort();
    let mut expected = PUBLISHED_GAMMA.to_vec();
    expected.sort();
    v.check("22 groups as published", computed == expected, format!("{} groups", computed.len()));
    let gap2 = generated.iter().filter(|(s, _)| s.family.exponent_gap() == 2).count();
    let rank3 = generated.iter().filter(|(s, g)| s.family.exponent_gap() == 3 && rank(g) == 3).count();
    let rank4 = generated.iter().filter(|(s, g)| s.family.exponent_gap() == 3 && rank(g) == 4).count();
    v.check("three of exponent 2^(m-2)", gap2 == 3, gap2.to_string());
    v.check("twelve of rank 3", rank3 == 12, rank3.to_string());
    v.check("seven of rank 4", rank4 == 7, rank4.to_string());
    let excluded_ok = groups.par_iter().filter(|(s, _)| !PUBLISHED_GAMMA.contains(&(s.family, s.n))).all(|(s, g)| {
        published(s.family, s.n)
            .and_then(|row| row.phi.as_ref())
            .map(|x| phi_test(g, &x.iter().map(String::as_str).collect::<Vec<_>>()) == PhiVerdict::CertifiesNot)
            .unwrap_or(false)
    });
    v.check("every excluded group has a valid published φ_X", excluded_ok, "");
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionCounts {
    pub central: usize,
    pub noncentral: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub family: Family,
    pub n: u32,
    pub m: u32,
    pub order: usize,
    pub exponent: u32,
    pub rank: usize,
    pub involutions: InvolutionCounts,
    pub generated_by_involutions: bool,
    pub phi: Option<Vec<String>>,
    /// Present for groups generated by involutions.
    pub violations: Option<ViolationSummary>,
    pub certificates: usize,
    pub canonical: Option<Vec<String>>,
    pub schlafli_types: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub groups: usize,
    pub generated_by_involutions: usize,
    pub winners: Vec<String>,
    pub expected_winners: Vec<String>,
    pub matches_expected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub m: u32,
    pub records: Vec<ClassificationRecord>,
    pub summary: ClassificationSummary,
}

pub fn expected_winners(m: u32) -> Vec<String> {
    vec![format!("M_II-D,3({m})"), format!("M_II-D,19({m})")]
}

/// Classifies every given group of order `2^m`.
pub fn classify(m: u32, groups: &[(FamilySpec, GroupInstance)]) -> ClassificationReport {
    let records: Vec<ClassificationRecord> = groups
        .par_iter()
        .map(|(s, g)| {
            let inv = enumerate_involutions(g);
            let (violations, certificates, canonical, schlafli_types) = if inv.generated_by_involutions {
                let report = search(g, default_ranks(g), SearchMode::Pruned);
                let types = report.types_up_to_duality().iter().map(|t| type_string(t)).collect();
                let canonical = report.canonical().map(|c| c.words.clone());
                (Some(report.summary), report.certificates.len(), canonical, types)
            } else {
                (None, 0, None, Vec::new())
            };
            ClassificationRecord {
                family: s.family,
                n: s.n,
                m,
                order: g.order(),
                exponent: g.exponent(),
                rank: rank(g),
                involutions: InvolutionCounts {
                    central: inv.central.len(),
                    noncentral: inv.noncentral.len(),
                    total: inv.total,
                },
                generated_by_involutions: inv.generated_by_involutions,
                phi: inv.phi_witness,
                violations,
                certificates,
                canonical,
                schlafli_types,
            }
        })
        .collect();
    let winners: Vec<String> =
        groups.iter().zip(&records).filter(|(_, r)| r.certificates > 0).map(|((s, _), _)| s.label()).collect();
    let expected = expected_winners(m);
    let summary = ClassificationSummary {
        groups: records.len(),
        generated_by_involutions: records.iter().filter(|r| r.generated_by_involutions).count(),
        matches_expected: winners == expected,
        winners,
        expected_winners: expected,
    };
    ClassificationReport { m, records, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_historical_rows() {
        assert_eq!(historical_rows(), vec![(Family::MIIA, 27), (Family::MIIE, 4), (Family::MIIE, 7)]);
    }
}

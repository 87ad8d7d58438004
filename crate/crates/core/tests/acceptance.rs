//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every criterion is an exact check; the only tolerances are wall-clock
//! budgets. Criteria listed in `EXPECTED_FAIL` are known not to hold and
//! must keep failing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use stringc_core::catalog::{build, catalog_enumerate, spec, Family, FamilySpec};
use stringc_core::involutions::gamma;
use stringc_core::iso::{known_maps, parameter_sweep, verify_known_map};
use stringc_core::pc::Collector;
use stringc_core::report::{catalog_integrity, gamma_check, involution_table_check};
use stringc_core::stringc::{
    central_power_knockout, coset_pair_groups, coset_pair_table, default_ranks, match_coset_pairs, search,
    triples_report, verify_theorem, SearchMode,
};
use stringc_core::structure::structure_report;
use stringc_core::subgroups::rank;
use stringc_core::{GroupInstance, Result, Verdict};

const CATALOG_BUDGET: Duration = Duration::from_secs(120);
const THEOREM_BUDGET_M9: Duration = Duration::from_secs(600);
const SWEEP_BUDGET: Duration = Duration::from_secs(1800);

/// Published pair tables that omit non-commuting coset pairs. Every other
/// block must match exactly, and these must still differ only by omissions.
const PAIR_TABLE_OMISSIONS: [(Family, u32); 5] =
    [(Family::NII, 4), (Family::MIIE, 1), (Family::MIIF, 9), (Family::MIII, 11), (Family::MIII, 13)];

/// Criterion 6 fails because of the omissions above.
const EXPECTED_FAIL: [u32; 1] = [6];

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    ok: bool,
    detail: String,
    /// Fails, and only for the pinned reason.
    pinned_failure: bool,
}

impl Outcome {
    fn from_checks(checks: Vec<(String, bool)>) -> Self {
        let failed: Vec<String> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect();
        Outcome {
            ok: failed.is_empty() && !checks.is_empty(),
            detail: if failed.is_empty() {
                format!("{} checks", checks.len())
            } else {
                format!("failed: {}", failed.join("; "))
            },
            pinned_failure: false,
        }
    }
}

fn verdict_check(v: &Verdict) -> (String, bool) {
    let detail: Vec<String> = v.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
    (format!("{} [{}]", v.subject, detail.join(", ")), v.pass())
}

fn row(family: Family, n: u32, m: u32) -> Result<GroupInstance> {
    build(&spec(family, n, m, false)?)
}

fn budget(name: &str, start: Instant, limit: Duration) -> (String, bool) {
    let took = start.elapsed();
    (format!("{name} took {took:.1?} (budget {limit:?})"), took <= limit)
}

fn catalog_integrity_criterion() -> Result<Outcome> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for m in [7, 8, 9] {
        let groups = catalog_enumerate(m)?;
        checks.push(verdict_check(&catalog_integrity(m, &groups)?));
    }
    checks.push(budget("catalog", start, CATALOG_BUDGET));
    Ok(Outcome::from_checks(checks))
}

fn involution_table_criterion() -> Result<Outcome> {
    let mut checks = Vec::new();
    for m in [7, 8] {
        let groups = catalog_enumerate(m)?;
        checks.push(verdict_check(&involution_table_check(&groups)));
        let g = row(Family::NII, 4, m)?;
        let inv = stringc_core::involutions::enumerate_involutions(&g);
        let want = 2 + (1 << (m - 3)) + (1 << (m - 2));
        checks.push((format!("N_II,4({m}) is 1 + {want}"), (inv.central.len(), inv.noncentral.len()) == (1, want)));
        let g = row(Family::MIID, 19, m)?;
        let inv = stringc_core::involutions::enumerate_involutions(&g);
        let want = 4 + (1 << (m - 3)) + (1 << (m - 2));
        checks.push((format!("M_II-D,19({m}) is 3 + {want}"), (inv.central.len(), inv.noncentral.len()) == (3, want)));
    }
    Ok(Outcome::from_checks(checks))
}

fn gamma_criterion() -> Result<Outcome> {
    let mut checks = Vec::new();
    for m in [7, 8] {
        let groups = catalog_enumerate(m)?;
        checks.push(verdict_check(&gamma_check(m, &groups)));
    }
    Ok(Outcome::from_checks(checks))
}

fn theorem_criterion() -> Result<Outcome> {
    let mut checks = Vec::new();
    for m in [5, 6, 7, 8] {
        let report = verify_theorem(m)?;
        checks.extend(report.parts.iter().map(verdict_check));
        if let Some(small) = &report.small {
            let want = if m == 5 { 1 } else { 2 };
            checks.push((
                format!("m = {m}: {want} group(s) of type {{4, {}}}", 1 << (m - 3)),
                small.distinct_groups == want && small.types == [vec![4, 1 << (m - 3)]],
            ));
        }
    }
    let start = Instant::now();
    let report = verify_theorem(9)?;
    checks.extend(report.parts.iter().map(verdict_check));
    checks.push(("m = 9 winners".into(), report.winners == ["M_II-D,3(9)".to_string(), "M_II-D,19(9)".to_string()]));
    checks.push(budget("m = 9", start, THEOREM_BUDGET_M9));
    Ok(Outcome::from_checks(checks))
}

fn pruning_criterion() -> Result<Outcome> {
    let groups = gamma(7)?;
    let checks = groups
        .par_iter()
        .map(|(s, g)| {
            let pruned = search(g, default_ranks(g), SearchMode::Pruned);
            let full = search(g, default_ranks(g), SearchMode::Exhaustive);
            let same =
                pruned.certificates.iter().map(|c| &c.generators).eq(full.certificates.iter().map(|c| &c.generators));
            (format!("{} ({} certificates)", s.label(), full.certificates.len()), same)
        })
        .collect();
    Ok(Outcome::from_checks(checks))
}

fn knockout_criterion() -> Result<Outcome> {
    let m = 7;
    let mut checks = Vec::new();
    let mut knockout = |family, n, exponent: u32| -> Result<()> {
        let g = row(family, n, m)?;
        let zeta = g.pow(g.generator("p")?, 1 << exponent);
        let central = g.is_central(zeta) && g.is_involution(zeta);
        checks.push((format!("{}: p^{}", g.label(), 1 << exponent), central && central_power_knockout(&g, zeta)));
        Ok(())
    };
    for n in [3, 4, 5] {
        knockout(Family::NII, n, m - 3)?;
    }
    let ten = [
        (Family::MIIC, 5),
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
    for (family, n) in ten {
        knockout(family, n, m - 4)?;
    }

    let triples = triples_report(&row(Family::MIIE, 1, m)?)?;
    checks.push((
        format!(
            "listed triples: {} escaping, {} with equal conjugates, {} unlisted",
            triples.escaping,
            triples.equal_conjugates,
            triples.unlisted.len()
        ),
        triples.pass(),
    ));

    let mut matched = 0;
    let mut omissions_as_pinned = true;
    let blocks = coset_pair_groups();
    let mut unmatched = Vec::new();
    for &(family, n) in &blocks {
        let g = row(family, n, m)?;
        let table = coset_pair_table(family, n).expect("listed block");
        let result = match_coset_pairs(&g, table)?;
        if result.matches() {
            matched += 1;
            omissions_as_pinned &= !PAIR_TABLE_OMISSIONS.contains(&(family, n));
        } else {
            unmatched.push(format!("{} ({}/{})", result.group, result.computed_pairs, result.published_pairs));
            omissions_as_pinned &= PAIR_TABLE_OMISSIONS.contains(&(family, n))
                && result.extra.is_empty()
                && result.not_involutions.is_empty()
                && !result.missing.is_empty();
        }
    }
    let detail = format!("pair tables: {matched}/{} blocks match, omissions in {}", blocks.len(), unmatched.join(", "));
    checks.push((detail.clone(), matched == blocks.len()));
    let others_hold = checks[..checks.len() - 1].iter().all(|(_, ok)| *ok);
    let mut outcome = Outcome::from_checks(checks);
    if others_hold && omissions_as_pinned && !outcome.ok {
        outcome.detail = format!("{detail}; every other check holds");
        outcome.pinned_failure = true;
    }
    Ok(outcome)
}

fn structure_criterion() -> Result<Outcome> {
    let mut checks = Vec::new();
    for m in [7, 8] {
        let r = structure_report(m)?;
        for v in r.embeddings.iter().chain(&r.decompositions).chain(&r.winners).chain(&r.presentations) {
            checks.push(verdict_check(v));
        }
    }
    Ok(Outcome::from_checks(checks))
}

fn dedup_criterion() -> Result<Outcome> {
    let mut checks = Vec::new();
    for m in [7, 8] {
        for map in known_maps(m) {
            checks.push(verdict_check(&verify_known_map(&map, m)?));
        }
    }
    let start = Instant::now();
    let expected = [
        (Family::MIIC, 5),
        (Family::MIIE, 8),
        (Family::MIIF, 9),
        (Family::MIIG, 7),
        (Family::MIID, 22),
        (Family::MIIB, 28),
        (Family::MIII, 14),
    ];
    for (family, count) in expected {
        let r = parameter_sweep(family, 7)?;
        checks.push((
            format!("{family}: {} new classes, want {count}", r.new_classes()),
            r.new_classes() == count && r.perfect_matching(),
        ));
    }
    checks.push(budget("sweeps", start, SWEEP_BUDGET));
    Ok(Outcome::from_checks(checks))
}

fn collect_idempotent(s: &FamilySpec, g: &GroupInstance) -> bool {
    let Some(pres) = g.presentation() else { return false };
    let Ok(collector) = Collector::new(pres) else { return false };
    g.elements().all(|x| {
        let w = g.word_of(x);
        collector.collect(&w).ok() == Some(x.0) && g.eval(&w).ok() == Some(x)
    }) && s.family.rank() == rank(g)
}

fn engine_criterion() -> Result<Outcome> {
    let groups = catalog_enumerate(7)?;
    let checks = groups
        .par_iter()
        .map(|(s, g)| {
            let assoc = g.check_associativity(None, 0);
            let ok = assoc.exhaustive && assoc.failure.is_none() && g.permutation_oracle() && collect_idempotent(s, g);
            (s.label(), ok)
        })
        .collect();
    Ok(Outcome::from_checks(checks))
}

fn disconnected_criterion() -> Result<Outcome> {
    let report = verify_theorem(7)?;
    let checks = report
        .parts
        .iter()
        .filter(|v| v.subject == "exponent 2^(m-2)" || v.subject == "exponent 2^(m-3), disconnected")
        .map(verdict_check)
        .collect::<Vec<_>>();
    let found = checks.len() == 2;
    let mut outcome = Outcome::from_checks(checks);
    outcome.ok &= found;
    Ok(outcome)
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Criterion); 10] = [
        (1, "catalog integrity at m = 7, 8, 9", catalog_integrity_criterion),
        (2, "published involution table at m = 7, 8", involution_table_criterion),
        (3, "groups generated by involutions at m = 7, 8", gamma_criterion),
        (4, "classification at m = 5..9", theorem_criterion),
        (5, "pruned search equals exhaustive search on Γ at m = 7", pruning_criterion),
        (6, "non-existence mechanics at m = 7", knockout_criterion),
        (7, "embeddings, decompositions and presentations at m = 7, 8", structure_criterion),
        (8, "duplicate maps and parameter sweeps", dedup_criterion),
        (9, "engine soundness on the catalog at m = 7", engine_criterion),
        (10, "disconnected string C-groups at m = 7", disconnected_criterion),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome =
            run().unwrap_or_else(|e| Outcome { ok: false, detail: format!("error: {e}"), pinned_failure: false });
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        let note = if EXPECTED_FAIL.contains(&id) { " (expected)" } else { "" };
        println!("{tag} {id:>2} {name}{note}: {} [{:.1?}]", outcome.detail, start.elapsed());
        let as_expected = if EXPECTED_FAIL.contains(&id) { outcome.pinned_failure } else { outcome.ok };
        if !as_expected {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}

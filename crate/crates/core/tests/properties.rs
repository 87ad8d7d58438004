use std::sync::OnceLock;

use proptest::prelude::*;
use stringc_core::cache::TableCache;
use stringc_core::catalog::{build, catalog_enumerate, spec, Family, FamilySpec};
use stringc_core::iso::find_isomorphism;
use stringc_core::pc::Collector;
use stringc_core::stringc::{search, SearchMode};
use stringc_core::subgroups::{intersect, product_size, span, FrattiniQuotient};
use stringc_core::{ElementCode, GroupInstance, Word};

fn catalog() -> &'static [(FamilySpec, GroupInstance)] {
    static GROUPS: OnceLock<Vec<(FamilySpec, GroupInstance)>> = OnceLock::new();
    GROUPS.get_or_init(|| catalog_enumerate(7).unwrap())
}

fn group(ix: usize) -> &'static GroupInstance {
    let groups = catalog();
    &groups[ix % groups.len()].1
}

fn code(g: &GroupInstance, x: u32) -> ElementCode {
    ElementCode(x % g.order() as u32)
}

fn codes(g: &GroupInstance, xs: &[u32]) -> Vec<ElementCode> {
    xs.iter().map(|&x| code(g, x)).collect()
}

fn winners() -> &'static [GroupInstance] {
    static WINNERS: OnceLock<Vec<GroupInstance>> = OnceLock::new();
    WINNERS.get_or_init(|| [3, 19].iter().map(|&n| build(&spec(Family::MIID, n, 7, false).unwrap()).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiplication_is_associative(ix in 0usize..146, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let g = group(ix);
        let (a, b, c) = (code(g, a), code(g, b), code(g, c));
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
    }

    #[test]
    fn collection_agrees_with_the_table(ix in 0usize..146, a in any::<u32>(), b in any::<u32>()) {
        let g = group(ix);
        let collector = Collector::new(g.presentation().unwrap()).unwrap();
        let (a, b) = (code(g, a), code(g, b));
        let wa = g.word_of(a);
        prop_assert_eq!(collector.collect(&wa).unwrap(), a.0);
        let wab = wa.concat(&g.word_of(b));
        prop_assert_eq!(collector.collect(&wab).unwrap(), g.mul(a, b).0);
        let exps: Vec<i64> = collector.exponents(a.0).iter().map(|&e| e as i64).collect();
        prop_assert_eq!(g.code_of(&exps).unwrap(), a);
    }

    #[test]
    fn words_round_trip_through_text(ix in 0usize..146, a in any::<u32>(), b in any::<u32>(), k in -9i64..9) {
        let g = group(ix);
        let w = g.word_of(code(g, a)).concat(&g.word_of(code(g, b)).pow(k));
        let parsed = Word::parse(&w.to_string()).unwrap();
        prop_assert_eq!(g.eval(&parsed).unwrap(), g.eval(&w).unwrap());
    }

    #[test]
    fn subgroup_orders_divide(ix in 0usize..146, xs in prop::collection::vec(any::<u32>(), 1..4)) {
        let g = group(ix);
        let h = span(g, &codes(g, &xs));
        prop_assert_eq!(g.order() % h.len(), 0);
        prop_assert!(h.len().is_power_of_two());
        for &x in h.elements() {
            for &y in h.elements().iter().take(8) {
                prop_assert!(h.contains(g.mul(x, y)));
            }
        }
    }

    #[test]
    fn intersections(ix in 0usize..146, xs in prop::collection::vec(any::<u32>(), 1..3),
                     ys in prop::collection::vec(any::<u32>(), 1..3), zs in prop::collection::vec(any::<u32>(), 1..3)) {
        let g = group(ix);
        let (a, b, c) = (span(g, &codes(g, &xs)), span(g, &codes(g, &ys)), span(g, &codes(g, &zs)));
        let ab = intersect(&a, &b).unwrap();
        prop_assert!(ab.is_subset_of(&a) && ab.is_subset_of(&b));
        let left = intersect(&ab, &c).unwrap();
        let right = intersect(&a, &intersect(&b, &c).unwrap()).unwrap();
        prop_assert!(left.same_as(&right));
        prop_assert_eq!(product_size(&a, &b).unwrap() * ab.len(), a.len() * b.len());
    }

    #[test]
    fn frattini_generation_matches_closure(ix in 0usize..146, xs in prop::collection::vec(any::<u32>(), 1..5)) {
        let g = group(ix);
        let fq = FrattiniQuotient::new(g);
        let xs = codes(g, &xs);
        prop_assert_eq!(fq.generates(&xs), g.closure_size(&xs) == g.order());
        prop_assert_eq!(fq.span_dim(&xs) == xs.len(), fq.independent(&xs));
    }

    #[test]
    fn isomorphism_is_symmetric(i in 0usize..146, j in 0usize..146) {
        let (a, b) = (group(i), group(j));
        let ab = find_isomorphism(a, b);
        let ba = find_isomorphism(b, a);
        prop_assert_eq!(ab.is_some(), ba.is_some());
        prop_assert_eq!(ab.is_some(), i % 146 == j % 146);
        if let Some(w) = ab {
            prop_assert!(w.recheck(a, b).pass());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_certificates_verify(which in 0usize..2, k in any::<prop::sample::Index>()) {
        let g = &winners()[which];
        let report = search(g, 3..=3, SearchMode::Pruned);
        let cert = k.get(&report.certificates);
        let dual = cert.dual(g);
        prop_assert!(cert.verify(g).pass());
        prop_assert!(dual.verify(g).pass());
        prop_assert_eq!(&dual.dual(g), cert);
        let mut rev = cert.schlafli_type.clone();
        rev.reverse();
        prop_assert_eq!(dual.schlafli_type, rev);
    }

    #[test]
    fn cache_is_transparent(ix in 0usize..146) {
        let (s, g) = &catalog()[ix];
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let cold = cache.build(s).unwrap();
        let warm = cache.build(s).unwrap();
        prop_assert_eq!(cache.hits(), 1);
        prop_assert_eq!(cold.table(), g.table());
        prop_assert_eq!(warm.table(), g.table());
        prop_assert!(g.elements().all(|x| warm.format(x) == g.format(x)));
    }
}

/// Corrupts one product in a table and checks that both table checks notice.
#[test]
fn corrupted_table_is_detected() {
    let g = build(&spec(Family::MIID, 3, 7, false).unwrap()).unwrap();
    assert!(g.permutation_oracle());
    let n = g.order();
    let mut tried = 0;
    for a in 5..n {
        let (b, c) = (1 + a % 7, 2 + a % 11);
        if b == c {
            continue;
        }
        let mut table = g.table().to_vec();
        table.swap(a * n + b, a * n + c);
        if table[a * n + b] == 0 || table[a * n + c] == 0 {
            continue;
        }
        let Ok(bad) = GroupInstance::from_table("corrupt", table, g.generators().to_vec(), Vec::new()) else {
            continue;
        };
        tried += 1;
        assert!(!bad.permutation_oracle(), "row {a}");
        assert!(bad.check_associativity(None, 0).failure.is_some(), "row {a}");
    }
    assert!(tried > 0);
}

#[test]
fn corrupted_generator_row_is_detected() {
    let g = build(&spec(Family::MIID, 19, 7, false).unwrap()).unwrap();
    let n = g.order();
    let gens = g.generator_codes();
    let mut tried = 0;
    for &a in &gens {
        let a = a.idx();
        let cols: Vec<usize> = (1..n).filter(|c| !gens.iter().any(|x| x.idx() == *c)).take(12).collect();
        for pair in cols.windows(2) {
            let mut table = g.table().to_vec();
            table.swap(a * n + pair[0], a * n + pair[1]);
            let Ok(bad) = GroupInstance::from_table("corrupt", table, g.generators().to_vec(), Vec::new()) else {
                continue;
            };
            tried += 1;
            assert!(!bad.permutation_oracle());
        }
    }
    assert!(tried > 0);
}

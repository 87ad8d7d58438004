//! Independent routes to values the library computes one way.

use rayon::prelude::*;
use stringc_core::catalog::{build, catalog_specs, spec, Family};
use stringc_core::fp::{coset_enumerate, FpPresentation};
use stringc_core::involutions::enumerate_involutions;
use stringc_core::iso::{are_isomorphic, fingerprint};
use stringc_core::stringc::{search, SearchMode};
use stringc_core::GroupInstance;

fn by_coset_enumeration(g: &GroupInstance) -> GroupInstance {
    let names: Vec<String> = g.generators().iter().map(|(n, _)| n.clone()).collect();
    let pres = FpPresentation::new(names, g.relators().to_vec());
    let table = coset_enumerate(&pres, &[], 1 << 16).unwrap();
    table.to_group("enumerated", pres.relators.clone()).unwrap()
}

/// Enumerating cosets of each row's relators gives a group of the same order
/// that passes the same isomorphism test as the polycyclic build.
#[test]
fn coset_enumeration_rebuilds_the_catalog() {
    let specs = catalog_specs(7, false).unwrap();
    let failures: Vec<String> = specs
        .par_iter()
        .filter_map(|s| {
            let g = build(s).unwrap();
            let h = by_coset_enumeration(&g);
            let (a, b) = (enumerate_involutions(&g), enumerate_involutions(&h));
            let same = h.order() == g.order()
                && fingerprint(&g) == fingerprint(&h)
                && (a.central.len(), a.noncentral.len()) == (b.central.len(), b.noncentral.len())
                && are_isomorphic(&g, &h);
            (!same).then(|| s.label())
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

/// Brute force over all ordered triples of involutions, checking the string
/// and intersection conditions from subgroup closures alone.
fn naive_rank3_structures(g: &GroupInstance) -> Vec<[u32; 3]> {
    let inv: Vec<_> = g.elements().filter(|&x| g.is_involution(x)).collect();
    let closure = |gens: &[_]| -> Vec<bool> {
        let mut seen = vec![false; g.order()];
        seen[0] = true;
        let mut stack = vec![g.identity()];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = g.mul(x, s);
                if !seen[y.idx()] {
                    seen[y.idx()] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let mut out = Vec::new();
    for &s0 in &inv {
        for &s2 in &inv {
            if s0 == s2 || g.mul(s0, s2) != g.mul(s2, s0) {
                continue;
            }
            for &s1 in &inv {
                if g.mul(s0, s1) == g.mul(s1, s0) || g.mul(s1, s2) == g.mul(s2, s1) {
                    continue;
                }
                if closure(&[s0, s1, s2]).iter().any(|x| !x) {
                    continue;
                }
                let (a, b) = (closure(&[s0, s1]), closure(&[s1, s2]));
                let meet = a.iter().zip(&b).filter(|(x, y)| **x && **y).count();
                if meet == 2 {
                    out.push([s0.0, s1.0, s2.0]);
                }
            }
        }
    }
    out.sort();
    out
}

/// Certificate counts of the two winners, frozen from the brute force above.
#[test]
fn winner_certificates_match_brute_force() {
    for (n, frozen) in [(3, 1024), (19, 4096)] {
        let g = build(&spec(Family::MIID, n, 7, false).unwrap()).unwrap();
        let naive = naive_rank3_structures(&g);
        let found: Vec<[u32; 3]> = search(&g, 3..=3, SearchMode::Pruned)
            .certificates
            .iter()
            .map(|c| [c.generators[0].0, c.generators[1].0, c.generators[2].0])
            .collect();
        assert_eq!(found, naive, "M_II-D,{n}");
        assert_eq!(naive.len(), frozen, "M_II-D,{n}");
    }
}

/// No other group generated by involutions at m = 7 has a connected rank-3
/// structure, by brute force.
#[test]
fn brute_force_finds_no_other_rank3_structures() {
    let specs = catalog_specs(7, false).unwrap();
    let hits: Vec<String> = specs
        .par_iter()
        .filter(|s| s.family.rank() == 3 && !(s.family == Family::MIID && (s.n == 3 || s.n == 19)))
        .filter_map(|s| {
            let g = build(s).unwrap();
            (!naive_rank3_structures(&g).is_empty()).then(|| s.label())
        })
        .collect();
    assert!(hits.is_empty(), "{hits:?}");
}

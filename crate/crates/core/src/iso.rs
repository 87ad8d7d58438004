//! Isomorphism invariants, backtracking isomorphism search, explicit maps,
//! and parameter sweeps that split a family into isomorphism classes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{build, catalog_specs, extend_homomorphism, spec_from_params, specs, Family};
use crate::error::Result;
use crate::group::{ElementCode, GroupInstance};
use crate::subgroups::{span, FrattiniQuotient};
use crate::verdict::Verdict;

/// Per-element invariant used to restrict candidate images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementSignature {
    pub order: u32,
    pub class_size: u32,
    pub square_roots: u32,
    pub in_frattini: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub exponent: u32,
    pub rank: usize,
    /// `(element order, count)`, increasing.
    pub element_orders: Vec<(u32, usize)>,
    pub center_order: usize,
    /// `(class size, number of classes)`, increasing.
    pub class_sizes: Vec<(u32, usize)>,
    /// Invariant factors of `G/G'`, decreasing.
    pub abelianization: Vec<u32>,
    pub derived_order: usize,
    pub squares: usize,
    /// `(signature, count)`, increasing.
    pub signatures: Vec<(ElementSignature, usize)>,
}

fn counts<T: Ord + Copy>(xs: impl Iterator<Item = T>) -> Vec<(T, usize)> {
    let mut map = BTreeMap::new();
    for x in xs {
        *map.entry(x).or_insert(0) += 1;
    }
    map.into_iter().collect()
}

pub fn element_signatures(g: &GroupInstance) -> Vec<ElementSignature> {
    let n = g.order();
    let mut roots = vec![0u32; n];
    for x in g.elements() {
        roots[g.mul(x, x).idx()] += 1;
    }
    let phi = FrattiniQuotient::new(g);
    g.elements()
        .map(|x| {
            let centralizer = g.elements().filter(|&y| g.commutes(x, y)).count();
            ElementSignature {
                order: g.element_order(x),
                class_size: (n / centralizer) as u32,
                square_roots: roots[x.idx()],
                in_frattini: phi.vector(x) == 0,
            }
        })
        .collect()
}

pub fn fingerprint(g: &GroupInstance) -> Fingerprint {
    let sigs = element_signatures(g);
    let commutators: Vec<ElementCode> = {
        let mut c: Vec<ElementCode> =
            g.elements().flat_map(|x| g.elements().map(move |y| (x, y))).map(|(x, y)| g.commutator(x, y)).collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let derived = span(g, &commutators);
    let squares = {
        let mut s: Vec<ElementCode> = g.elements().map(|x| g.mul(x, x)).collect();
        s.sort_unstable();
        s.dedup();
        s.len()
    };
    let class_sizes = counts(sigs.iter().map(|s| s.class_size))
        .into_iter()
        .map(|(size, elems)| (size, elems / size as usize))
        .collect();
    Fingerprint {
        order: g.order(),
        exponent: g.exponent(),
        rank: FrattiniQuotient::new(g).dim(),
        element_orders: counts(sigs.iter().map(|s| s.order)),
        center_order: g.center().len(),
        class_sizes,
        abelianization: abelian_invariants(g, &derived),
        derived_order: derived.len(),
        squares,
        signatures: counts(sigs.iter().copied()),
    }
}

/// Invariant factors of `G/N` for normal `N` with abelian quotient, from the
/// sizes of its `2^k`-torsion subgroups.
fn abelian_invariants(g: &GroupInstance, n: &crate::subgroups::Subgroup<'_>) -> Vec<u32> {
    // at_least[k-1] = number of cyclic factors of order >= 2^k
    let mut at_least = Vec::new();
    let mut prev = 1usize;
    for k in 1..=g.m() {
        let torsion = g.elements().filter(|&x| n.contains(g.pow(x, 1 << k))).count() / n.len();
        at_least.push((torsion / prev).trailing_zeros() as usize);
        prev = torsion;
    }
    let mut out = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        out.extend(std::iter::repeat_n(1u32 << k, exact));
    }
    out
}

/// A verified isomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub source: String,
    pub target: String,
    pub images: Vec<ElementCode>,
    pub image_words: Vec<String>,
    pub relators_checked: usize,
    pub bijective: bool,
}

impl IsoWitness {
    pub fn recheck(&self, a: &GroupInstance, b: &GroupInstance) -> Verdict {
        check_map(a, b, &self.images)
    }
}

/// Checks that generator images define an isomorphism `a -> b`.
pub fn check_map(a: &GroupInstance, b: &GroupInstance, images: &[ElementCode]) -> Verdict {
    let mut v = Verdict::new(format!("{} -> {}", a.label(), b.label()));
    let names: Vec<String> = a.generators().iter().map(|(n, _)| n.clone()).collect();
    v.check("orders agree", a.order() == b.order(), format!("{} vs {}", a.order(), b.order()));
    let broken: Vec<String> = a
        .relators()
        .iter()
        .filter(|w| b.eval_with(w, &names, images) != Ok(ElementCode::IDENTITY))
        .map(|w| w.to_string())
        .collect();
    v.check("relators preserved", broken.is_empty(), format!("{} relators, broken: {broken:?}", a.relators().len()));
    v.check("images generate", b.closure_size(images) == b.order(), "");
    match extend_homomorphism(a, b, images) {
        Some(map) => {
            let mut seen = vec![false; b.order()];
            let injective = map.iter().all(|x| !std::mem::replace(&mut seen[x.idx()], true));
            v.check("homomorphism", true, "");
            v.check("bijective", injective, "");
        }
        None => {
            v.check("homomorphism", false, "images do not extend along the Cayley graph");
        }
    }
    v
}

/// Checks a map given by words in the target's generators, e.g.
/// `[("p", "p"), ("q", "p^2 q")]`.
pub fn verify_map(a: &GroupInstance, b: &GroupInstance, images: &[(&str, &str)]) -> Result<Verdict> {
    let mut codes = Vec::new();
    for (name, _) in a.generators() {
        let text = images
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| *w)
            .ok_or_else(|| crate::error::Error::UnknownGenerator(name.clone()))?;
        codes.push(b.element(text)?);
    }
    Ok(check_map(a, b, &codes))
}

struct Search<'a> {
    a: &'a GroupInstance,
    b: &'a GroupInstance,
    sources: Vec<ElementCode>,
    names: Vec<String>,
    candidates: Vec<Vec<ElementCode>>,
    /// Relators whose last generator is at each depth.
    relators_at: Vec<Vec<usize>>,
    fq_b: FrattiniQuotient,
    /// Frattini rank of the first `d + 1` source generators.
    source_dims: Vec<usize>,
    relators_checked: usize,
}

impl Search<'_> {
    fn run(&mut self, images: &mut Vec<ElementCode>) -> Option<Vec<ElementCode>> {
        let depth = images.len();
        if depth == self.sources.len() {
            let map = extend_homomorphism(self.a, self.b, images)?;
            let mut seen = vec![false; self.b.order()];
            return map.iter().all(|x| !std::mem::replace(&mut seen[x.idx()], true)).then(|| images.clone());
        }
        let x = self.sources[depth];
        for ci in 0..self.candidates[depth].len() {
            let y = self.candidates[depth][ci];
            let pairwise = (0..depth).all(|j| {
                let xj = self.sources[j];
                let yj = images[j];
                self.a.element_order(self.a.mul(x, xj)) == self.b.element_order(self.b.mul(y, yj))
                    && self.a.element_order(self.a.commutator(x, xj)) == self.b.element_order(self.b.commutator(y, yj))
            });
            if !pairwise {
                continue;
            }
            images.push(y);
            let independent = self.fq_b.span_dim(images) == self.source_dims[depth];
            let relators_ok = independent
                && self.relators_at[depth].iter().all(|&ri| {
                    let w = &self.a.relators()[ri];
                    self.b.eval_with(w, &self.names[..=depth], images) == Ok(ElementCode::IDENTITY)
                });
            if relators_ok {
                self.relators_checked += self.relators_at[depth].len();
                if let Some(found) = self.run(images) {
                    return Some(found);
                }
            }
            images.pop();
        }
        None
    }
}

/// Searches for an isomorphism `a -> b` by images of `a`'s generators.
pub fn find_isomorphism(a: &GroupInstance, b: &GroupInstance) -> Option<IsoWitness> {
    if a.order() != b.order() || fingerprint(a) != fingerprint(b) {
        return None;
    }
    find_isomorphism_unchecked(a, b)
}

fn find_isomorphism_unchecked(a: &GroupInstance, b: &GroupInstance) -> Option<IsoWitness> {
    let sig_a = element_signatures(a);
    let sig_b = element_signatures(b);
    let sources = a.generator_codes();
    let names: Vec<String> = a.generators().iter().map(|(n, _)| n.clone()).collect();
    let candidates =
        sources.iter().map(|&x| b.elements().filter(|&y| sig_b[y.idx()] == sig_a[x.idx()]).collect()).collect();
    let mut relators_at = vec![Vec::new(); sources.len()];
    for (ri, w) in a.relators().iter().enumerate() {
        let last = w.generators().filter_map(|n| names.iter().position(|m| m == n)).max().unwrap_or(0);
        relators_at[last].push(ri);
    }
    let source_dims = {
        let fq_a = FrattiniQuotient::new(a);
        (1..=sources.len()).map(|d| fq_a.span_dim(&sources[..d])).collect()
    };
    let mut search = Search {
        a,
        b,
        sources,
        names,
        candidates,
        relators_at,
        fq_b: FrattiniQuotient::new(b),
        source_dims,
        relators_checked: 0,
    };
    let images = search.run(&mut Vec::new())?;
    Some(IsoWitness {
        source: a.label().to_string(),
        target: b.label().to_string(),
        image_words: images.iter().map(|&y| b.format(y)).collect(),
        images,
        relators_checked: search.relators_checked,
        bijective: true,
    })
}

pub fn are_isomorphic(a: &GroupInstance, b: &GroupInstance) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Splits groups into isomorphism classes; returns indices into `groups`,
/// each class in increasing order and classes ordered by first member.
pub fn partition(groups: &[GroupInstance]) -> Vec<Vec<usize>> {
    let prints: Vec<Fingerprint> = groups.par_iter().map(fingerprint).collect();
    let mut buckets: BTreeMap<&Fingerprint, Vec<usize>> = BTreeMap::new();
    for (i, f) in prints.iter().enumerate() {
        buckets.entry(f).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = buckets
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|bucket| {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for i in bucket {
                match classes.iter_mut().find(|c| find_isomorphism_unchecked(&groups[c[0]], &groups[i]).is_some()) {
                    Some(c) => c.push(i),
                    None => classes.push(vec![i]),
                }
            }
            classes
        })
        .collect();
    classes.sort();
    classes
}

/// Parameter ranges swept for a family: one value list per parameter.
pub fn sweep_ranges(family: Family) -> Vec<Vec<i64>> {
    let z2 = || vec![0, 1];
    let z4 = || vec![0, 1, 2, 3];
    let sign = || vec![-1, 1];
    match family {
        Family::NIOmitted => Vec::new(),
        Family::NII => vec![sign(), z2(), z2(), z2(), z2()],
        Family::MIIA => vec![z2(), z2(), z2(), z2(), z2(), z4(), z4(), sign()],
        Family::MIIB => vec![z2(), z2(), z2(), z2(), z2(), z4(), sign()],
        Family::MIIC => vec![z4(), z2()],
        Family::MIID => vec![z2(), z2(), z2(), z2(), z2(), z2(), z2(), sign()],
        Family::MIIE => vec![sign(), z4(), z4(), z2()],
        Family::MIIF => vec![z2(), z2(), z4(), z2(), z2()],
        Family::MIIG => vec![z2(), z2(), z2(), z2()],
        Family::MIII => vec![sign(), sign(), z2(), z2(), z2(), z2(), z2(), z2()],
    }
}

/// Values of the exponent parameter `u` swept with a family.
pub fn sweep_u(family: Family, m: u32) -> Vec<u32> {
    match family {
        Family::MIIB | Family::MIID if m > 5 => vec![1, m - 4],
        _ => vec![m - 4],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SweepTuple {
    pub params: Vec<i64>,
    pub u: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepClass {
    pub representative: SweepTuple,
    pub members: Vec<SweepTuple>,
    /// Catalog row isomorphic to this class.
    pub catalog_row: Option<u32>,
    /// A row of another family isomorphic to this class, when no row of the
    /// swept family is.
    pub elsewhere: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub m: u32,
    pub tuples: usize,
    pub valid: usize,
    pub classes: Vec<SweepClass>,
    /// Catalog rows matching no class.
    pub unmatched_rows: Vec<u32>,
}

impl SweepReport {
    /// Classes not isomorphic to a group of another family.
    pub fn new_classes(&self) -> usize {
        self.classes.iter().filter(|c| c.elsewhere.is_none()).count()
    }

    /// The new classes and the catalog rows correspond one-for-one.
    pub fn perfect_matching(&self) -> bool {
        let mut rows: Vec<u32> = self.classes.iter().filter_map(|c| c.catalog_row).collect();
        let all_matched = rows.len() == self.new_classes();
        rows.sort_unstable();
        rows.dedup();
        all_matched && rows.len() == self.new_classes() && self.unmatched_rows.is_empty()
    }
}

/// Builds every tuple in the family's ranges, keeps those of order `2^m` and
/// the family exponent, and splits them into isomorphism classes.
pub fn parameter_sweep(family: Family, m: u32) -> Result<SweepReport> {
    let ranges = sweep_ranges(family);
    let mut tuples = vec![Vec::new()];
    for range in &ranges {
        tuples = tuples
            .into_iter()
            .flat_map(|t: Vec<i64>| {
                range.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    let all: Vec<SweepTuple> = tuples
        .into_iter()
        .flat_map(|params| sweep_u(family, m).into_iter().map(move |u| SweepTuple { params: params.clone(), u }))
        .collect();
    let exponent = 1u32 << (m - family.exponent_gap());
    let built: Vec<(SweepTuple, GroupInstance)> = all
        .par_iter()
        .filter_map(|t| {
            let spec = spec_from_params(family, &t.params, m, t.u).ok()?;
            let g = build(&spec).ok()?;
            (g.order() == 1 << m && g.exponent() == exponent).then(|| (t.clone(), g))
        })
        .collect();
    let groups: Vec<GroupInstance> = built.iter().map(|(_, g)| g.clone()).collect();
    let catalog: Vec<(u32, GroupInstance)> =
        specs(family, m, false)?.into_iter().filter_map(|s| build(&s).ok().map(|g| (s.n, g))).collect();
    let mut others: Option<Vec<(String, GroupInstance)>> = None;
    let mut claimed = vec![false; catalog.len()];
    let classes: Vec<SweepClass> = partition(&groups)
        .into_iter()
        .map(|class| {
            let rep = &groups[class[0]];
            let fp = fingerprint(rep);
            let row = catalog
                .par_iter()
                .position_first(|(_, h)| fingerprint(h) == fp && find_isomorphism_unchecked(rep, h).is_some());
            let mut elsewhere = None;
            match row {
                Some(i) => claimed[i] = true,
                None => {
                    let others = others.get_or_insert_with(|| other_families(family, m));
                    elsewhere = others
                        .par_iter()
                        .find_first(|(_, h)| fingerprint(h) == fp && find_isomorphism_unchecked(rep, h).is_some())
                        .map(|(label, _)| label.clone());
                }
            }
            SweepClass {
                representative: built[class[0]].0.clone(),
                members: class.iter().map(|&i| built[i].0.clone()).collect(),
                catalog_row: row.map(|i| catalog[i].0),
                elsewhere,
            }
        })
        .collect();
    let unmatched_rows = catalog.iter().zip(&claimed).filter(|(_, &c)| !c).map(|((n, _), _)| *n).collect();
    Ok(SweepReport { family: family.to_string(), m, tuples: all.len(), valid: built.len(), classes, unmatched_rows })
}

/// A published isomorphism `family,source -> family,target` given by the
/// images of `p, q, r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownMap {
    pub family: Family,
    pub source: u32,
    pub target: u32,
    pub images: Vec<(String, String)>,
}

/// The isomorphisms that remove the duplicate rows A21, A23 and D15.
pub fn known_maps(m: u32) -> Vec<KnownMap> {
    let map = |family, source, target, images: [String; 3]| KnownMap {
        family,
        source,
        target,
        images: ["p", "q", "r"].iter().map(|n| n.to_string()).zip(images).collect(),
    };
    vec![
        map(Family::MIIA, 21, 22, ["p".into(), format!("p^{} q", 1u32 << (m - 5)), "p q r".into()]),
        map(Family::MIIA, 23, 24, ["p".into(), "q".into(), "p q r".into()]),
        map(Family::MIID, 15, 10, ["q r".into(), "q".into(), "q p r".into()]),
    ]
}

/// Checks a known map between rows built at `m`.
pub fn verify_known_map(map: &KnownMap, m: u32) -> Result<Verdict> {
    let a = build(&crate::catalog::spec(map.family, map.source, m, false)?)?;
    let b = build(&crate::catalog::spec(map.family, map.target, m, false)?)?;
    let images: Vec<(&str, &str)> = map.images.iter().map(|(n, w)| (n.as_str(), w.as_str())).collect();
    verify_map(&a, &b, &images)
}

fn other_families(family: Family, m: u32) -> Vec<(String, GroupInstance)> {
    catalog_specs(m, false)
        .unwrap_or_default()
        .into_par_iter()
        .filter(|s| s.family != family)
        .filter_map(|s| build(&s).ok().map(|g| (s.label(), g)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_dihedral, direct_product, spec};

    fn row(f: Family, n: u32, m: u32) -> GroupInstance {
        build(&spec(f, n, m, false).unwrap()).unwrap()
    }

    #[test]
    fn abelianization_of_products() {
        let g = direct_product(&crate::catalog::build_cyclic(8).unwrap(), &crate::catalog::build_cyclic(2).unwrap())
            .unwrap();
        assert_eq!(fingerprint(&g).abelianization, vec![8, 2]);
        let d = build_dihedral(8).unwrap();
        let f = fingerprint(&d);
        assert_eq!(f.abelianization, vec![2, 2]);
        assert_eq!(f.derived_order, 4);
        assert_eq!(f.center_order, 2);
    }

    #[test]
    fn identity_map_is_found() {
        let g = row(Family::MIID, 19, 7);
        let w = find_isomorphism(&g, &g).unwrap();
        assert!(w.recheck(&g, &g).pass());
    }

    #[test]
    fn known_maps_verify() {
        for map in known_maps(7) {
            let v = verify_known_map(&map, 7).unwrap();
            assert!(v.pass(), "{v}");
        }
    }

    #[test]
    fn perturbed_map_fails() {
        let mut map = known_maps(7).remove(1);
        map.images[2].1 = "q r".into();
        assert!(!verify_known_map(&map, 7).unwrap().pass());
    }

    #[test]
    fn distinct_winners() {
        assert_ne!(fingerprint(&row(Family::MIID, 3, 7)), fingerprint(&row(Family::MIID, 19, 7)));
    }
}

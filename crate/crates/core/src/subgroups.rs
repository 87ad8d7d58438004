//! Explicit subgroups of a materialized group, the Frattini quotient, and
//! checks of product decompositions and subgroup isomorphisms.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::catalog::extend_homomorphism;
use crate::error::{Error, Result};
use crate::group::{ElementCode, GroupInstance};
use crate::verdict::Verdict;

#[derive(Clone, Debug)]
pub struct Subgroup<'g> {
    parent: &'g GroupInstance,
    members: Vec<bool>,
    elements: Vec<ElementCode>,
    generators: Vec<ElementCode>,
}

impl<'g> Subgroup<'g> {
    fn from_members(parent: &'g GroupInstance, members: Vec<bool>, generators: Vec<ElementCode>) -> Self {
        let elements = members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| ElementCode(i as u32)).collect();
        Subgroup { parent, members, elements, generators }
    }

    pub fn parent(&self) -> &'g GroupInstance {
        self.parent
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn contains(&self, x: ElementCode) -> bool {
        self.members[x.idx()]
    }

    /// Elements in increasing code order.
    pub fn elements(&self) -> &[ElementCode] {
        &self.elements
    }

    pub fn generators(&self) -> &[ElementCode] {
        &self.generators
    }

    pub fn is_subset_of(&self, other: &Subgroup<'_>) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Whether `self` and `other` are the same subgroup of the same parent.
    pub fn same_as(&self, other: &Subgroup<'_>) -> bool {
        self.parent.id() == other.parent.id() && self.elements == other.elements
    }

    /// The subgroup as a standalone group, with generators named `names`.
    pub fn to_group(&self, label: &str, names: &[&str]) -> Result<GroupInstance> {
        let n = self.elements.len();
        let mut pos = vec![u32::MAX; self.parent.order()];
        for (i, x) in self.elements.iter().enumerate() {
            pos[x.idx()] = i as u32;
        }
        let mut table = vec![0u32; n * n];
        for (i, &x) in self.elements.iter().enumerate() {
            for (j, &y) in self.elements.iter().enumerate() {
                table[i * n + j] = pos[self.parent.mul(x, y).idx()];
            }
        }
        if names.len() != self.generators.len() {
            return Err(Error::Data("one name per subgroup generator is required".into()));
        }
        let gens =
            names.iter().zip(&self.generators).map(|(name, g)| (name.to_string(), ElementCode(pos[g.idx()]))).collect();
        GroupInstance::from_table(label, table, gens, Vec::new())
    }
}

/// Smallest subgroup containing `gens`.
pub fn span<'g>(g: &'g GroupInstance, gens: &[ElementCode]) -> Subgroup<'g> {
    let mut members = vec![false; g.order()];
    members[0] = true;
    let mut queue = VecDeque::from([ElementCode::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !members[y.idx()] {
                members[y.idx()] = true;
                queue.push_back(y);
            }
        }
    }
    Subgroup::from_members(g, members, gens.to_vec())
}

pub fn intersect<'g>(a: &Subgroup<'g>, b: &Subgroup<'g>) -> Result<Subgroup<'g>> {
    if a.parent.id() != b.parent.id() {
        return Err(Error::MixedParents);
    }
    let members = a.members.iter().zip(&b.members).map(|(&x, &y)| x && y).collect();
    Ok(Subgroup::from_members(a.parent, members, Vec::new()))
}

pub fn is_normal(g: &GroupInstance, sub: &Subgroup<'_>) -> bool {
    normalized_by(g, sub, &g.generator_codes())
}

pub fn center(g: &GroupInstance) -> Subgroup<'_> {
    let members = g.elements().map(|x| g.is_central(x)).collect();
    Subgroup::from_members(g, members, Vec::new())
}

pub fn centralizer(g: &GroupInstance, x: ElementCode) -> Subgroup<'_> {
    let members = g.elements().map(|y| g.commutes(x, y)).collect();
    Subgroup::from_members(g, members, Vec::new())
}

/// `|HK| = |H| |K| / |H ∩ K|`.
pub fn product_size(a: &Subgroup<'_>, b: &Subgroup<'_>) -> Result<usize> {
    let i = intersect(a, b)?;
    Ok(a.len() * b.len() / i.len())
}

/// The Frattini subgroup of a 2-group, generated by the squares.
pub fn frattini(g: &GroupInstance) -> Subgroup<'_> {
    let mut squares: Vec<ElementCode> = g.elements().map(|x| g.mul(x, x)).collect();
    squares.sort_unstable();
    squares.dedup();
    let mut s = span(g, &squares);
    s.generators.clear();
    s
}

/// `G / Φ(G)` as an `F_2` vector space with coordinates attached to every
/// element.
#[derive(Clone, Debug)]
pub struct FrattiniQuotient {
    dim: usize,
    basis: Vec<ElementCode>,
    coords: Vec<u32>,
}

impl FrattiniQuotient {
    pub fn new(g: &GroupInstance) -> Self {
        let phi = frattini(g);
        let mut basis: Vec<ElementCode> = Vec::new();
        let mut acc: Vec<ElementCode> = phi.elements().to_vec();
        let candidates: Vec<ElementCode> = g.generator_codes().into_iter().chain(g.elements()).collect();
        let mut current = span(g, &acc);
        for c in candidates {
            if current.is_whole() {
                break;
            }
            if !current.contains(c) {
                basis.push(c);
                acc.push(c);
                current = span(g, &acc);
            }
        }
        let dim = basis.len();
        let mut coords = vec![u32::MAX; g.order()];
        for mask in 0u32..(1 << dim) {
            let rep = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(ElementCode::IDENTITY, |a, (_, &b)| g.mul(a, b));
            for &z in phi.elements() {
                coords[g.mul(rep, z).idx()] = mask;
            }
        }
        FrattiniQuotient { dim, basis, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[ElementCode] {
        &self.basis
    }

    pub fn vector(&self, x: ElementCode) -> u32 {
        self.coords[x.idx()]
    }

    /// Rank over `F_2` of the images of `xs`.
    pub fn span_dim(&self, xs: &[ElementCode]) -> usize {
        let mut rows: Vec<u32> = Vec::new();
        for &x in xs {
            let mut v = self.vector(x);
            for &r in &rows {
                v = v.min(v ^ r);
            }
            if v != 0 {
                rows.push(v);
                rows.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        rows.len()
    }

    /// Burnside basis theorem: `xs` generates iff its image spans `G/Φ`.
    pub fn generates(&self, xs: &[ElementCode]) -> bool {
        self.span_dim(xs) == self.dim
    }

    pub fn independent(&self, xs: &[ElementCode]) -> bool {
        self.span_dim(xs) == xs.len()
    }
}

pub fn rank(g: &GroupInstance) -> usize {
    FrattiniQuotient::new(g).dim()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionKind {
    /// Internal direct product of all factors.
    Direct,
    /// First factor normal, second a complement.
    Semidirect,
    /// `G = HK` by the product formula, nothing more.
    Product,
}

fn normalized_by(g: &GroupInstance, sub: &Subgroup<'_>, by: &[ElementCode]) -> bool {
    let conj_gens: Vec<ElementCode> =
        if sub.generators.is_empty() { sub.elements.clone() } else { sub.generators.clone() };
    by.iter().all(|&x| conj_gens.iter().all(|&h| sub.contains(g.conj(h, x))))
}

/// Checks that the subgroups spanned by `factors` decompose `g` as `kind`.
pub fn verify_decomposition(
    g: &GroupInstance,
    kind: DecompositionKind,
    factors: &[Vec<ElementCode>],
    subject: &str,
) -> Verdict {
    verify_decomposition_within(g, &g.generator_codes(), kind, factors, subject)
}

/// Checks that the factors decompose the subgroup `⟨ambient⟩` of `g` as
/// `kind`.
pub fn verify_decomposition_within(
    g: &GroupInstance,
    ambient: &[ElementCode],
    kind: DecompositionKind,
    factors: &[Vec<ElementCode>],
    subject: &str,
) -> Verdict {
    let mut v = Verdict::new(subject);
    let whole = span(g, ambient);
    let subs: Vec<Subgroup<'_>> = factors.iter().map(|f| span(g, f)).collect();
    let sizes: Vec<String> = subs.iter().map(|s| s.len().to_string()).collect();
    let all: Vec<ElementCode> = factors.iter().flatten().copied().collect();
    v.check(
        "factors generate",
        span(g, &all).same_as(&whole),
        format!("factor orders {}, ambient order {}", sizes.join(", "), whole.len()),
    );
    v.check("factors are proper", subs.iter().all(|s| s.len() < whole.len()), "");
    match kind {
        DecompositionKind::Direct => {
            let product: usize = subs.iter().map(Subgroup::len).product();
            v.check("orders multiply", product == whole.len(), format!("{product} vs {}", whole.len()));
            v.check("every factor is normal", subs.iter().all(|s| normalized_by(g, s, ambient)), "");
            let mut commuting = true;
            for (i, a) in factors.iter().enumerate() {
                for b in factors.iter().skip(i + 1) {
                    commuting &= a.iter().all(|&x| b.iter().all(|&y| g.commutes(x, y)));
                }
            }
            v.check("distinct factors commute", commuting, "");
        }
        DecompositionKind::Semidirect | DecompositionKind::Product => {
            if subs.len() != 2 {
                v.check("two factors", false, format!("got {}", subs.len()));
                return v;
            }
            let inter = intersect(&subs[0], &subs[1]).expect("same parent");
            let size = subs[0].len() * subs[1].len() / inter.len();
            v.check("|HK| = |G|", size == whole.len(), format!("{size} vs {}", whole.len()));
            if kind == DecompositionKind::Semidirect {
                v.check("first factor is normal", normalized_by(g, &subs[0], ambient), "");
                v.check("trivial intersection", inter.is_trivial(), format!("|H ∩ K| = {}", inter.len()));
            }
        }
    }
    v
}

/// Checks that `sub_gens[i] -> images[i]` extends to an isomorphism from
/// `⟨sub_gens⟩ ≤ g` onto `target`.
pub fn verify_subgroup_isomorphism(
    g: &GroupInstance,
    sub_gens: &[ElementCode],
    target: &GroupInstance,
    images: &[ElementCode],
    subject: &str,
) -> Verdict {
    let mut v = Verdict::new(subject);
    let sub = span(g, sub_gens);
    v.check("orders agree", sub.len() == target.order(), format!("{} vs {}", sub.len(), target.order()));
    v.check("images generate the target", span(target, images).is_whole(), "");
    // von Dyck: the relators of the target, pulled back along the inverse
    // assignment, must hold in the subgroup.
    if !target.relators().is_empty() && images.iter().zip(target.generator_codes()).all(|(a, b)| *a == b) {
        let names: Vec<String> = target.generators().iter().map(|x| x.0.clone()).collect();
        let ok = target
            .relators()
            .iter()
            .all(|r| g.eval_with(r, &names, sub_gens).map(|x| x == ElementCode::IDENTITY).unwrap_or(false));
        v.check("target relators hold on the preimages", ok, format!("{} relators", target.relators().len()));
    }
    let names: Vec<String> = (0..sub_gens.len()).map(|i| format!("x{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    match sub.to_group("sub", &name_refs) {
        Ok(h) => match extend_homomorphism(&h, target, images) {
            Some(map) => {
                v.check("map is a homomorphism", true, "");
                let mut seen = vec![false; target.order()];
                let injective = map.iter().all(|x| !std::mem::replace(&mut seen[x.idx()], true));
                v.check("map is injective", injective, "");
            }
            None => {
                v.check("map is a homomorphism", false, "inconsistent along the Cayley graph");
            }
        },
        Err(e) => {
            v.check("subgroup table", false, e.to_string());
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_cyclic, build_dihedral, direct_product};

    #[test]
    fn spans_and_intersections() {
        let d = build_dihedral(8).unwrap();
        let a = d.generator("a").unwrap();
        let b = d.generator("b").unwrap();
        assert_eq!(span(&d, &[ElementCode::IDENTITY]).len(), 1);
        let rot = span(&d, &[a]);
        let refl = span(&d, &[b]);
        assert_eq!(rot.len(), 8);
        assert!(is_normal(&d, &rot));
        assert!(!is_normal(&d, &refl));
        assert!(intersect(&rot, &refl).unwrap().is_trivial());
        assert!(intersect(&rot, &rot).unwrap().same_as(&rot));
        assert_eq!(center(&d).len(), 2);
        assert_eq!(centralizer(&d, b).len(), 4);
        let other = build_dihedral(8).unwrap();
        assert!(matches!(intersect(&rot, &span(&other, &[])), Err(Error::MixedParents)));
    }

    #[test]
    fn frattini_ranks() {
        assert_eq!(rank(&build_cyclic(16).unwrap()), 1);
        assert_eq!(rank(&build_dihedral(8).unwrap()), 2);
        let d = direct_product(&build_dihedral(4).unwrap(), &build_cyclic(2).unwrap()).unwrap();
        assert_eq!(rank(&d), 3);
        let fq = FrattiniQuotient::new(&d);
        assert!(fq.generates(&d.generator_codes()));
        assert!(!fq.generates(&d.generator_codes()[..2]));
    }

    #[test]
    fn dihedral_decomposes() {
        let d = build_dihedral(8).unwrap();
        let a = d.generator("a").unwrap();
        let b = d.generator("b").unwrap();
        let v = verify_decomposition(&d, DecompositionKind::Semidirect, &[vec![a], vec![b]], "D8");
        assert!(v.pass(), "{v}");
        let v = verify_decomposition(&d, DecompositionKind::Direct, &[vec![a], vec![b]], "D8");
        assert!(!v.pass());
    }

    #[test]
    fn identity_is_subgroup_isomorphism() {
        let d = build_dihedral(4).unwrap();
        let gens = d.generator_codes();
        assert!(verify_subgroup_isomorphism(&d, &gens, &d, &gens, "id").pass());
        let bad = [gens[0], gens[0]];
        assert!(!verify_subgroup_isomorphism(&d, &gens, &d, &bad, "bad").pass());
    }
}

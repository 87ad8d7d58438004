//! Polycyclic presentations and collection.
//!
//! Generators are listed bottom first, so the normal form of an element is
//! `g0^e0 g1^e1 ... gk^ek` with `0 <= ei < relative_order(gi)`. Relations are
//! given in the usual form `g^-1 x g = w` for `x` below `g` and `g^ro = w`.
//!
//! Internally the group is built as a tower of cyclic extensions `H < <H, g>`.
//! Each extension is described by the automorphism `sigma(h) = g^-1 h g` of
//! `H`, so that `g^a h = sigma^-a(h) g^a`, and by the power `g^ro in H`. A
//! generator whose conjugation words mention its own square (for instance
//! `q^-1 p q = q^2 p^-1`) is split into two levels, `g^2` and then `g`, using
//! the supplied `g^-2 x g^2` relations for the lower one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// Hard cap on the order of a materialized group.
pub const MAX_ORDER: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PcGenerator {
    pub name: String,
    pub relative_order: u32,
    /// `g^relative_order` as a word in lower generators.
    pub power: Word,
    /// `(x, w)` meaning `g^-1 x g = w`. Missing pairs commute.
    pub conj: Vec<(String, Word)>,
    /// `(x, w)` meaning `g^-2 x g^2 = w`.
    pub square_conj: Vec<(String, Word)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PcPresentation {
    pub generators: Vec<PcGenerator>,
}

/// A defining relation `lhs = rhs` with a short label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn relator(&self) -> Word {
        self.lhs.concat(&self.rhs.inverse())
    }
}

impl PcPresentation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a generator on top of the current ones.
    pub fn push(&mut self, name: &str, relative_order: u32, power: Word) -> &mut Self {
        self.generators.push(PcGenerator {
            name: name.to_string(),
            relative_order,
            power,
            conj: Vec::new(),
            square_conj: Vec::new(),
        });
        self
    }

    /// Sets `g^-1 x g = image`.
    pub fn conj(&mut self, g: &str, x: &str, image: Word) -> &mut Self {
        let gen = self.generator_mut(g);
        gen.conj.retain(|(y, _)| y != x);
        gen.conj.push((x.to_string(), image));
        self
    }

    /// Sets `g^-2 x g^2 = image`.
    pub fn square_conj(&mut self, g: &str, x: &str, image: Word) -> &mut Self {
        let gen = self.generator_mut(g);
        gen.square_conj.retain(|(y, _)| y != x);
        gen.square_conj.push((x.to_string(), image));
        self
    }

    fn generator_mut(&mut self, g: &str) -> &mut PcGenerator {
        self.generators.iter_mut().find(|x| x.name == g).unwrap_or_else(|| panic!("no generator {g}"))
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Product of the relative orders.
    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.relative_order as u64).product()
    }

    /// All defining relations, including the implicit commutations.
    pub fn relations(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            out.push(Relation {
                label: format!("{}^{} = {}", g.name, g.relative_order, g.power),
                lhs: Word::gen(&g.name, g.relative_order as i64),
                rhs: g.power.clone(),
            });
            for x in &self.generators[..i] {
                let image = g
                    .conj
                    .iter()
                    .find(|(y, _)| *y == x.name)
                    .map(|(_, w)| w.clone())
                    .unwrap_or_else(|| Word::gen(&x.name, 1));
                let lhs = Word::conjugate(&Word::gen(&x.name, 1), &Word::gen(&g.name, 1));
                out.push(Relation { label: format!("{} = {}", lhs, image), lhs, rhs: image });
            }
            for (x, image) in &g.square_conj {
                let lhs = Word::conjugate(&Word::gen(x, 1), &Word::gen(&g.name, 2));
                out.push(Relation { label: format!("{} = {}", lhs, image), lhs, rhs: image.clone() });
            }
        }
        out
    }

    pub fn relators(&self) -> Vec<Word> {
        self.relations().iter().map(Relation::relator).collect()
    }

    /// Stable text form, used for cache keys.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            s.push_str(&format!("{}:{}:{}", g.name, g.relative_order, g.power));
            for (x, w) in &g.conj {
                s.push_str(&format!(";{x}->{w}"));
            }
            for (x, w) in &g.square_conj {
                s.push_str(&format!(";{x}=>{w}"));
            }
            s.push('\n');
        }
        s
    }
}

/// One cyclic extension step of the tower.
#[derive(Clone, Debug)]
struct Level {
    /// Index of the presentation generator this level belongs to.
    gen: usize,
    /// True for the `g^2` half of a split generator.
    square: bool,
    relative_order: u32,
    /// Order of the subgroup below this level.
    below: u32,
    /// `g^relative_order` as a code of the subgroup below.
    power: u32,
    /// `sigma^-a` on the subgroup below, for `a` in `0..relative_order`.
    sigma_inv: Vec<Vec<u32>>,
}

/// Multiplication tables of the proper subgroups of the tower.
#[derive(Clone, Debug)]
struct Subtable {
    order: u32,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl Subtable {
    fn trivial() -> Self {
        Subtable { order: 1, table: vec![0], inverse: vec![0] }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[(a * self.order + b) as usize]
    }

    fn pow(&self, a: u32, e: i64) -> u32 {
        let base = if e < 0 { self.inverse[a as usize] } else { a };
        let mut acc = 0;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }
}

/// Collector for a consistent polycyclic presentation.
#[derive(Clone, Debug)]
pub struct Collector {
    presentation: PcPresentation,
    levels: Vec<Level>,
    /// `subs[l]` is the group generated by levels `0..l`.
    subs: Vec<Subtable>,
    order: u32,
    step_bound: u64,
}

fn stride(levels: &[Level], k: usize) -> u32 {
    levels[k].below
}

impl Collector {
    pub fn new(pres: &PcPresentation) -> Result<Self> {
        let order = pres.order();
        if order > MAX_ORDER {
            return Err(Error::TooLarge(order));
        }
        let m = order.trailing_zeros() as u64;
        let step_bound = 1u64 << (m + 6).max(12);

        let mut plan: Vec<(usize, bool, u32)> = Vec::new();
        for (i, g) in pres.generators.iter().enumerate() {
            if g.relative_order < 2 {
                return Err(Error::Inconsistent {
                    generator: g.name.clone(),
                    reason: "relative order must be at least 2".into(),
                });
            }
            let self_ref = g.conj.iter().any(|(_, w)| w.generators().any(|n| n == g.name));
            if self_ref || !g.square_conj.is_empty() {
                if g.relative_order % 2 != 0 || g.relative_order < 4 {
                    return Err(Error::Inconsistent {
                        generator: g.name.clone(),
                        reason: "only generators of relative order >= 4 may conjugate into their own square".into(),
                    });
                }
                plan.push((i, true, g.relative_order / 2));
                plan.push((i, false, 2));
            } else {
                plan.push((i, false, g.relative_order));
            }
        }

        let mut coll = Collector {
            presentation: pres.clone(),
            levels: Vec::new(),
            subs: vec![Subtable::trivial()],
            order: order as u32,
            step_bound,
        };
        for (idx, &(gen, square, ro)) in plan.iter().enumerate() {
            let level = coll.extend(gen, square, ro)?;
            coll.levels.push(level);
            if idx + 1 < plan.len() {
                let sub = coll.tabulate_top();
                coll.subs.push(sub);
            }
        }
        Ok(coll)
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.presentation
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn step_bound(&self) -> u64 {
        self.step_bound
    }

    /// Builds the table of the current top group (levels pushed so far).
    fn tabulate_top(&self) -> Subtable {
        let l = self.levels.len() - 1;
        let n = self.levels[l].below * self.levels[l].relative_order;
        let mut table = vec![0u32; (n * n) as usize];
        for a in 0..n {
            for b in 0..n {
                table[(a * n + b) as usize] = self.mul_at(l, a, b);
            }
        }
        let mut inverse = vec![0u32; n as usize];
        for a in 0..n {
            for b in 0..n {
                if table[(a * n + b) as usize] == 0 {
                    inverse[a as usize] = b;
                    break;
                }
            }
        }
        Subtable { order: n, table, inverse }
    }

    /// Multiplication in the group generated by levels `0..=l`.
    fn mul_at(&self, l: usize, x: u32, y: u32) -> u32 {
        let lev = &self.levels[l];
        let sub = &self.subs[l];
        let (h1, a) = (x % lev.below, x / lev.below);
        let (h2, b) = (y % lev.below, y / lev.below);
        let moved = lev.sigma_inv[a as usize][h2 as usize];
        let mut h = sub.mul(h1, moved);
        let mut e = a + b;
        if e >= lev.relative_order {
            h = sub.mul(h, lev.power);
            e -= lev.relative_order;
        }
        h + lev.below * e
    }

    /// Code of a presentation generator in the subgroup of levels `0..upto`,
    /// or `None` when only its square lives there.
    fn generator_code(&self, gen: usize, upto: usize) -> GenCode {
        let mut sq = None;
        let mut full = None;
        for (k, lev) in self.levels[..upto].iter().enumerate() {
            if lev.gen == gen {
                if lev.square {
                    sq = Some(stride(&self.levels, k));
                } else {
                    full = Some(stride(&self.levels, k));
                }
            }
        }
        match (full, sq) {
            (Some(c), _) => GenCode::Full(c),
            (None, Some(c)) => GenCode::SquareOnly(c),
            (None, None) => GenCode::Absent,
        }
    }

    /// Evaluates a word in the subgroup of levels `0..upto`.
    fn eval_below(&self, w: &Word, upto: usize, whose: &str) -> Result<u32> {
        let sub = &self.subs[upto];
        let mut acc = 0u32;
        for (name, e) in w.syllables() {
            let gen = self.presentation.index_of(name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            let term = match self.generator_code(gen, upto) {
                GenCode::Full(c) => sub.pow(c, *e),
                GenCode::SquareOnly(c) if e % 2 == 0 => sub.pow(c, e / 2),
                _ => {
                    return Err(Error::Inconsistent {
                        generator: whose.to_string(),
                        reason: format!("word `{w}` is not in the subgroup below"),
                    })
                }
            };
            acc = sub.mul(acc, term);
        }
        Ok(acc)
    }

    /// Images of the level generators below under `x -> g^-1 x g`, where `g`
    /// is the presentation generator `gen` (not its square).
    fn conj_images(&self, gen: usize, upto: usize) -> Result<Vec<u32>> {
        let g = &self.presentation.generators[gen];
        let sub = &self.subs[upto];
        let mut images = Vec::with_capacity(upto);
        for (k, lev) in self.levels[..upto].iter().enumerate() {
            let own = stride(&self.levels, k);
            if lev.gen == gen {
                images.push(own);
                continue;
            }
            let x = &self.presentation.generators[lev.gen].name;
            let img = match g.conj.iter().find(|(y, _)| y == x) {
                Some((_, w)) => self.eval_below(w, upto, &g.name)?,
                None => self.generator_code_full(lev.gen, upto),
            };
            images.push(if lev.square { sub.mul(img, img) } else { img });
        }
        Ok(images)
    }

    fn generator_code_full(&self, gen: usize, upto: usize) -> u32 {
        match self.generator_code(gen, upto) {
            GenCode::Full(c) | GenCode::SquareOnly(c) => c,
            GenCode::Absent => 0,
        }
    }

    /// Extends a generator-image assignment to a map on the whole subgroup
    /// below, via normal forms.
    fn extend_map(&self, upto: usize, images: &[u32]) -> Vec<u32> {
        let sub = &self.subs[upto];
        let powers: Vec<Vec<u32>> = images
            .iter()
            .zip(&self.levels[..upto])
            .map(|(&img, lev)| {
                let mut v = vec![0u32];
                for _ in 1..lev.relative_order {
                    let last = *v.last().unwrap();
                    v.push(sub.mul(last, img));
                }
                v
            })
            .collect();
        (0..sub.order)
            .map(|h| {
                let mut acc = 0u32;
                let mut rest = h;
                for (k, lev) in self.levels[..upto].iter().enumerate() {
                    let e = rest % lev.relative_order;
                    rest /= lev.relative_order;
                    acc = sub.mul(acc, powers[k][e as usize]);
                }
                acc
            })
            .collect()
    }

    fn extend(&self, gen: usize, square: bool, ro: u32) -> Result<Level> {
        let upto = self.levels.len();
        let g = &self.presentation.generators[gen];
        let name = if square { format!("{}^2", g.name) } else { g.name.clone() };
        let inconsistent = |reason: String| Error::Inconsistent { generator: name.clone(), reason };
        let sub = &self.subs[upto];

        let images: Vec<u32> = if square {
            let mut imgs = Vec::with_capacity(upto);
            let single = if g.conj.iter().all(|(_, w)| !w.generators().any(|n| n == g.name)) {
                Some(self.extend_map(upto, &self.conj_images(gen, upto)?))
            } else {
                None
            };
            for (k, lev) in self.levels[..upto].iter().enumerate() {
                let x = &self.presentation.generators[lev.gen].name;
                let own = stride(&self.levels, k);
                let img = match g.square_conj.iter().find(|(y, _)| y == x) {
                    Some((_, w)) => {
                        let v = self.eval_below(w, upto, &name)?;
                        if lev.square {
                            sub.mul(v, v)
                        } else {
                            v
                        }
                    }
                    None => match &single {
                        Some(sigma) => sigma[sigma[own as usize] as usize],
                        None if g.conj.iter().any(|(y, _)| y == x) => {
                            return Err(inconsistent(format!("missing relation for {}^-2 {x} {}^2", g.name, g.name)))
                        }
                        None => own,
                    },
                };
                imgs.push(img);
            }
            imgs
        } else {
            self.conj_images(gen, upto)?
        };

        let power = if square {
            self.eval_below(&g.power, upto, &name)?
        } else if upto > 0 && self.levels[upto - 1].gen == gen && self.levels[upto - 1].square {
            stride(&self.levels, upto - 1)
        } else {
            self.eval_below(&g.power, upto, &name)?
        };

        let sigma = self.extend_map(upto, &images);
        let n = sub.order;
        let gen_codes: Vec<u32> = (0..upto).map(|k| stride(&self.levels, k)).collect();

        for h in 0..n {
            for (k, &c) in gen_codes.iter().enumerate() {
                if sigma[sub.mul(h, c) as usize] != sub.mul(sigma[h as usize], images[k]) {
                    return Err(inconsistent("conjugation does not define a homomorphism".into()));
                }
            }
        }
        let mut seen = vec![false; n as usize];
        for &v in &sigma {
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(inconsistent("conjugation is not injective".into()));
            }
        }
        if sigma[power as usize] != power {
            return Err(inconsistent("generator does not commute with its power".into()));
        }
        let mut iterate: Vec<u32> = (0..n).collect();
        for _ in 0..ro {
            iterate = iterate.iter().map(|&x| sigma[x as usize]).collect();
        }
        let pinv = sub.inverse[power as usize];
        for &c in &gen_codes {
            if iterate[c as usize] != sub.mul(sub.mul(pinv, c), power) {
                return Err(inconsistent("power of the conjugation is not conjugation by the power".into()));
            }
        }

        let inverse = self.invert_by_iteration(&sigma, &name)?;
        let mut sigma_inv = vec![(0..n).collect::<Vec<u32>>()];
        for a in 1..ro as usize {
            let prev = &sigma_inv[a - 1];
            let next = prev.iter().map(|&x| inverse[x as usize]).collect();
            sigma_inv.push(next);
        }
        Ok(Level { gen, square, relative_order: ro, below: n, power, sigma_inv })
    }

    /// `sigma^-1 = sigma^(o-1)` where `o` is the order of `sigma`.
    fn invert_by_iteration(&self, sigma: &[u32], name: &str) -> Result<Vec<u32>> {
        let identity: Vec<u32> = (0..sigma.len() as u32).collect();
        let mut prev = identity.clone();
        let mut cur = sigma.to_vec();
        let mut steps = 0u64;
        while cur != identity {
            prev = cur.clone();
            cur = cur.iter().map(|&x| sigma[x as usize]).collect();
            steps += 1;
            if steps > self.step_bound {
                return Err(Error::Inconsistent {
                    generator: name.to_string(),
                    reason: "conjugation has no finite order within the step bound".into(),
                });
            }
        }
        Ok(prev)
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        match self.levels.len() {
            0 => 0,
            n => self.mul_at(n - 1, x, y),
        }
    }

    pub fn inverse(&self, x: u32) -> u32 {
        let Some(l) = self.levels.len().checked_sub(1) else { return 0 };
        let lev = &self.levels[l];
        let sub = &self.subs[l];
        let (h, a) = (x % lev.below, x / lev.below);
        // g^-1 = power^-1 g^(ro-1)
        let ginv = sub.inverse[lev.power as usize] + lev.below * (lev.relative_order - 1);
        let mut acc = sub.inverse[h as usize];
        for _ in 0..a {
            acc = self.mul(ginv, acc);
        }
        acc
    }

    /// Code of a presentation generator.
    pub fn generator(&self, name: &str) -> Result<u32> {
        let gen = self.presentation.index_of(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.generator_code_full(gen, self.levels.len()))
    }

    /// Collects a word to its normal-form code.
    pub fn collect(&self, w: &Word) -> Result<u32> {
        let mut steps = 0u64;
        let mut acc = 0u32;
        for (name, e) in w.syllables() {
            let g = self.generator(name)?;
            let base = if *e < 0 { self.inverse(g) } else { g };
            let mut rem = e.unsigned_abs();
            let mut sq = base;
            let mut term = 0u32;
            while rem > 0 {
                if rem & 1 == 1 {
                    term = self.mul(term, sq);
                }
                sq = self.mul(sq, sq);
                rem >>= 1;
                steps += 2;
            }
            acc = self.mul(acc, term);
            steps += 1;
            if steps > self.step_bound {
                return Err(Error::NonTerminatingCollection { bound: self.step_bound });
            }
        }
        Ok(acc)
    }

    /// Exponents of the presentation generators in the normal form of `code`.
    pub fn exponents(&self, code: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.presentation.generators.len()];
        let mut rest = code;
        for lev in &self.levels {
            let e = rest % lev.relative_order;
            rest /= lev.relative_order;
            out[lev.gen] += if lev.square { 2 * e } else { e };
        }
        out
    }

    /// Inverse of [`Collector::exponents`].
    pub fn code_of(&self, exps: &[u32]) -> u32 {
        let mut code = 0u32;
        for (k, lev) in self.levels.iter().enumerate().rev() {
            let total = exps.get(lev.gen).copied().unwrap_or(0) % self.presentation.generators[lev.gen].relative_order;
            let e = if lev.square {
                total / 2
            } else if k > 0 && self.levels[k - 1].gen == lev.gen {
                total % 2
            } else {
                total
            };
            code = code * lev.relative_order + e;
        }
        code
    }

    /// Full multiplication table, row-major.
    pub fn table(&self) -> Vec<u32> {
        let n = self.order;
        let mut t = vec![0u32; (n as usize) * (n as usize)];
        for a in 0..n {
            for b in 0..n {
                t[(a * n + b) as usize] = self.mul(a, b);
            }
        }
        t
    }
}

enum GenCode {
    Full(u32),
    SquareOnly(u32),
    Absent,
}

/// Collects a word in the group given by `pres`.
pub fn collect(w: &Word, pres: &PcPresentation) -> Result<u32> {
    Collector::new(pres)?.collect(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral(n: u32) -> PcPresentation {
        let mut p = PcPresentation::new();
        p.push("a", n, Word::identity()).push("b", 2, Word::identity());
        p.conj("b", "a", Word::gen("a", -1));
        p
    }

    #[test]
    fn dihedral_multiplication() {
        let p = dihedral(8);
        let c = Collector::new(&p).unwrap();
        let w = Word::parse("b a b").unwrap();
        assert_eq!(c.collect(&w).unwrap(), c.collect(&Word::gen("a", -1)).unwrap());
        assert_eq!(c.collect(&Word::identity()).unwrap(), 0);
        assert_eq!(c.exponents(c.collect(&Word::parse("a^3 b").unwrap()).unwrap()), vec![3, 1]);
    }

    #[test]
    fn inconsistent_is_reported() {
        let mut p = PcPresentation::new();
        p.push("a", 8, Word::identity()).push("b", 2, Word::identity());
        p.conj("b", "a", Word::gen("a", 2));
        assert!(matches!(Collector::new(&p), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn split_generator() {
        // Q16-like: b^-1 a b = b^2 a^-1 style relation, with b^2 central.
        let mut p = PcPresentation::new();
        p.push("a", 4, Word::identity()).push("b", 4, Word::identity());
        p.conj("b", "a", Word::from_syllables([("b", 2), ("a", -1)]));
        p.square_conj("b", "a", Word::gen("a", 1));
        let c = Collector::new(&p).unwrap();
        let lhs = c.collect(&Word::parse("b^-1 a b").unwrap()).unwrap();
        let rhs = c.collect(&Word::parse("b^2 a^-1").unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let code = c.collect(&Word::parse("a^3 b^3").unwrap()).unwrap();
        assert_eq!(c.exponents(code), vec![3, 3]);
        assert_eq!(c.code_of(&[3, 3]), code);
    }

    #[test]
    fn negative_exponents_normalize() {
        let p = dihedral(16);
        let c = Collector::new(&p).unwrap();
        let x = c.collect(&Word::gen("a", -3)).unwrap();
        assert_eq!(c.exponents(x), vec![13, 0]);
        let y = c.collect(&Word::parse("b^-1").unwrap()).unwrap();
        assert_eq!(c.exponents(y), vec![0, 1]);
    }

    #[test]
    fn inverse_by_iteration_matches_direct() {
        let mut p = PcPresentation::new();
        p.push("a", 16, Word::identity()).push("b", 2, Word::identity());
        p.conj("b", "a", Word::gen("a", 7));
        let c = Collector::new(&p).unwrap();
        let sigma: Vec<u32> = (0..16).map(|i| (i * 5) % 16).collect();
        let inv = c.invert_by_iteration(&sigma, "b").unwrap();
        for x in 0..16u32 {
            assert_eq!(sigma[inv[x as usize] as usize], x);
        }
    }
}

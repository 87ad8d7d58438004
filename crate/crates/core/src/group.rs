//! Finite groups held as full Cayley tables.

use std::collections::VecDeque;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{coset_enumerate, FpPresentation};
use crate::pc::{Collector, PcPresentation};
use crate::word::Word;

/// Dense index of an element, `0` is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementCode(pub u32);

impl ElementCode {
    pub const IDENTITY: ElementCode = ElementCode(0);

    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// How elements are named when printed.
#[derive(Clone, Debug)]
enum Naming {
    /// Normal form `p^i q^j ...` over the presentation generators.
    Pc { names: Vec<String>, radix: Vec<u32>, exps: Vec<Vec<u32>> },
    /// Shortest words in the generators.
    Words(Vec<Word>),
}

#[derive(Clone, Debug)]
pub struct GroupInstance {
    id: u64,
    label: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    central: Vec<bool>,
    exponent: u32,
    generators: Vec<(String, ElementCode)>,
    relators: Vec<Word>,
    naming: Naming,
    presentation: Option<PcPresentation>,
}

/// Result of the associativity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociativityReport {
    pub triples_checked: u64,
    pub exhaustive: bool,
    pub failure: Option<(u32, u32, u32)>,
}

impl GroupInstance {
    /// Builds the group of a polycyclic presentation and checks it.
    ///
    /// An inconsistent presentation is reported as [`Error::OrderMismatch`]
    /// carrying the true order, found by coset enumeration.
    pub fn materialize(label: &str, pres: &PcPresentation) -> Result<Self> {
        let expected = pres.order();
        let coll = match Collector::new(pres) {
            Ok(c) => c,
            Err(Error::Inconsistent { generator, reason }) => {
                let fp = FpPresentation::new(pres.names(), pres.relators());
                let limit = (expected as usize) << 4;
                return match coset_enumerate(&fp, &[], limit) {
                    Ok(table) if table.index() as u64 != expected => {
                        Err(Error::OrderMismatch { found: table.index() as u64, expected })
                    }
                    _ => Err(Error::Inconsistent { generator, reason }),
                };
            }
            Err(e) => return Err(e),
        };
        let table = coll.table();
        let generators: Vec<(String, ElementCode)> = pres
            .generators
            .iter()
            .map(|g| Ok((g.name.clone(), ElementCode(coll.generator(&g.name)?))))
            .collect::<Result<_>>()?;
        let exps = (0..coll.order()).map(|c| coll.exponents(c)).collect();
        Self::from_pc_table(label, pres, table, generators, exps)
    }

    /// Rebuilds a group from a stored table and normal forms, checking the
    /// order and every defining relation again.
    pub(crate) fn from_pc_table(
        label: &str,
        pres: &PcPresentation,
        table: Vec<u32>,
        generators: Vec<(String, ElementCode)>,
        exps: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let expected = pres.order();
        if exps.len() as u64 != expected || table.len() as u64 != expected * expected {
            return Err(Error::OrderMismatch { found: exps.len() as u64, expected });
        }
        let naming =
            Naming::Pc { names: pres.names(), radix: pres.generators.iter().map(|g| g.relative_order).collect(), exps };
        let g = Self::from_parts(label, table, generators, pres.relators(), naming, Some(pres.clone()))?;

        let closure = g.closure_size(&g.generator_codes());
        if closure as u64 != expected {
            return Err(Error::OrderMismatch { found: closure as u64, expected });
        }
        for rel in pres.relations() {
            let lhs = g.eval(&rel.lhs)?;
            let rhs = g.eval(&rel.rhs)?;
            if lhs != rhs {
                return Err(Error::RelationViolated(rel.label));
            }
        }
        Ok(g)
    }

    /// Normal-form exponent vectors of every element, if any.
    pub(crate) fn all_exponents(&self) -> Option<&[Vec<u32>]> {
        match &self.naming {
            Naming::Pc { exps, .. } => Some(exps),
            Naming::Words(_) => None,
        }
    }

    /// Wraps a multiplication table. Elements are named by shortest words.
    pub fn from_table(
        label: &str,
        table: Vec<u32>,
        generators: Vec<(String, ElementCode)>,
        relators: Vec<Word>,
    ) -> Result<Self> {
        let n = (table.len() as f64).sqrt() as usize;
        if n * n != table.len() || n == 0 {
            return Err(Error::Data("table is not square".into()));
        }
        let words = shortest_words(n, &table, &generators);
        Self::from_parts(label, table, generators, relators, Naming::Words(words), None)
    }

    fn from_parts(
        label: &str,
        table: Vec<u32>,
        generators: Vec<(String, ElementCode)>,
        relators: Vec<Word>,
        naming: Naming,
        presentation: Option<PcPresentation>,
    ) -> Result<Self> {
        let n = (table.len() as f64).sqrt() as usize;
        if n as u64 > crate::pc::MAX_ORDER {
            return Err(Error::TooLarge(n as u64));
        }
        for a in 0..n {
            if table[a] != a as u32 || table[a * n] != a as u32 {
                return Err(Error::Data("element 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
            if inverse[a] == u32::MAX {
                return Err(Error::Data(format!("element {a} has no inverse")));
            }
        }
        let mut orders = vec![1u32; n];
        for a in 1..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
                if k > n as u32 + 1 {
                    return Err(Error::Data(format!("element {a} has no finite order")));
                }
            }
            orders[a] = k;
        }
        let central = (0..n).map(|a| (0..n).all(|b| table[a * n + b] == table[b * n + a])).collect();
        let exponent = orders.iter().fold(1u32, |acc, &o| lcm(acc, o));
        Ok(GroupInstance {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            label: label.to_string(),
            order: n,
            table,
            inverse,
            orders,
            central,
            exponent,
            generators,
            relators,
            naming,
            presentation,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `log2 |G|`.
    pub fn m(&self) -> u32 {
        self.order.trailing_zeros()
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn presentation(&self) -> Option<&PcPresentation> {
        self.presentation.as_ref()
    }

    pub fn identity(&self) -> ElementCode {
        ElementCode::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementCode> {
        (0..self.order as u32).map(ElementCode)
    }

    #[inline]
    pub fn mul(&self, a: ElementCode, b: ElementCode) -> ElementCode {
        ElementCode(self.table[a.idx() * self.order + b.idx()])
    }

    #[inline]
    pub fn inv(&self, a: ElementCode) -> ElementCode {
        ElementCode(self.inverse[a.idx()])
    }

    pub fn pow(&self, a: ElementCode, e: i64) -> ElementCode {
        let o = self.orders[a.idx()] as i64;
        let k = e.rem_euclid(o);
        let mut acc = ElementCode::IDENTITY;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `b^-1 a b`
    pub fn conj(&self, a: ElementCode, b: ElementCode) -> ElementCode {
        self.mul(self.mul(self.inv(b), a), b)
    }

    /// `a^-1 b^-1 a b`
    pub fn commutator(&self, a: ElementCode, b: ElementCode) -> ElementCode {
        self.mul(self.inv(a), self.conj(a, b))
    }

    pub fn commutes(&self, a: ElementCode, b: ElementCode) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn element_order(&self, a: ElementCode) -> u32 {
        self.orders[a.idx()]
    }

    pub fn is_involution(&self, a: ElementCode) -> bool {
        self.orders[a.idx()] == 2
    }

    pub fn is_central(&self, a: ElementCode) -> bool {
        self.central[a.idx()]
    }

    pub fn center(&self) -> Vec<ElementCode> {
        self.elements().filter(|&a| self.is_central(a)).collect()
    }

    pub fn generators(&self) -> &[(String, ElementCode)] {
        &self.generators
    }

    pub fn generator_codes(&self) -> Vec<ElementCode> {
        self.generators.iter().map(|g| g.1).collect()
    }

    pub fn generator(&self, name: &str) -> Result<ElementCode> {
        self.generators
            .iter()
            .find(|g| g.0 == name)
            .map(|g| g.1)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Evaluates a word over the distinguished generators.
    pub fn eval(&self, w: &Word) -> Result<ElementCode> {
        let mut acc = ElementCode::IDENTITY;
        for (name, e) in w.syllables() {
            let g = self.generator(name)?;
            acc = self.mul(acc, self.pow(g, *e));
        }
        Ok(acc)
    }

    /// Parses and evaluates a word such as `p^-1 q^3 r`.
    pub fn element(&self, text: &str) -> Result<ElementCode> {
        self.eval(&Word::parse(text)?)
    }

    /// Evaluates a word with the generators replaced by `images`.
    pub fn eval_with(&self, w: &Word, names: &[String], images: &[ElementCode]) -> Result<ElementCode> {
        let mut acc = ElementCode::IDENTITY;
        for (name, e) in w.syllables() {
            let i = names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            acc = self.mul(acc, self.pow(images[i], *e));
        }
        Ok(acc)
    }

    /// Normal-form word of an element.
    pub fn word_of(&self, a: ElementCode) -> Word {
        match &self.naming {
            Naming::Pc { names, exps, .. } => {
                Word::from_syllables(names.iter().zip(&exps[a.idx()]).map(|(n, &e)| (n.as_str(), e as i64)))
            }
            Naming::Words(words) => words[a.idx()].clone(),
        }
    }

    /// Exponent vector over the presentation generators, if the group came
    /// from a polycyclic presentation.
    pub fn exponents(&self, a: ElementCode) -> Option<&[u32]> {
        match &self.naming {
            Naming::Pc { exps, .. } => Some(&exps[a.idx()]),
            Naming::Words(_) => None,
        }
    }

    /// Looks up the code of a normal-form exponent vector.
    pub fn code_of(&self, exps: &[i64]) -> Result<ElementCode> {
        match &self.naming {
            Naming::Pc { names, radix, .. } => {
                let w = Word::from_syllables(
                    names.iter().zip(radix).zip(exps).map(|((n, &r), &e)| (n.as_str(), e.rem_euclid(r as i64))),
                );
                self.eval(&w)
            }
            Naming::Words(_) => Err(Error::Data("group has no normal form".into())),
        }
    }

    pub fn format(&self, a: ElementCode) -> String {
        let w = self.word_of(a);
        if w.is_identity() {
            return "1".into();
        }
        w.syllables()
            .iter()
            .map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
            .collect::<Vec<_>>()
            .join("")
    }

    pub fn closure_size(&self, gens: &[ElementCode]) -> usize {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([ElementCode::IDENTITY]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.idx()] {
                    seen[y.idx()] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }

    /// Checks `(ab)c = a(bc)`. Exhaustive when `samples` is `None`, otherwise
    /// on that many random triples.
    pub fn check_associativity(&self, samples: Option<u64>, seed: u64) -> AssociativityReport {
        let n = self.order as u32;
        let check = |a: u32, b: u32, c: u32| {
            let (a, b, c) = (ElementCode(a), ElementCode(b), ElementCode(c));
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        match samples {
            None => {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            if !check(a, b, c) {
                                return AssociativityReport {
                                    triples_checked: 0,
                                    exhaustive: true,
                                    failure: Some((a, b, c)),
                                };
                            }
                        }
                    }
                }
                AssociativityReport { triples_checked: (n as u64).pow(3), exhaustive: true, failure: None }
            }
            Some(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..k {
                    let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                    if !check(a, b, c) {
                        return AssociativityReport { triples_checked: k, exhaustive: false, failure: Some((a, b, c)) };
                    }
                }
                AssociativityReport { triples_checked: k, exhaustive: false, failure: None }
            }
        }
    }

    /// Associativity check at the default depth: exhaustive up to order 256,
    /// a million random triples above.
    pub fn check_associativity_default(&self, seed: u64) -> AssociativityReport {
        if self.order <= 256 {
            self.check_associativity(None, seed)
        } else {
            self.check_associativity(Some(1_000_000), seed)
        }
    }

    /// Regular permutation oracle.
    ///
    /// Each element's left- and right-multiplication permutations are rebuilt
    /// from the generator permutations using its normal-form word, then
    /// compared against the corresponding table row and column. The two sides
    /// cover each other: a corrupted generator row shows up in a column.
    pub fn permutation_oracle(&self) -> bool {
        self.regular_oracle(true) && self.regular_oracle(false)
    }

    fn regular_oracle(&self, left: bool) -> bool {
        let n = self.order;
        let act = |g: ElementCode, x: ElementCode| if left { self.mul(g, x) } else { self.mul(x, g) };
        let gen_perm = |g: ElementCode| -> Vec<u32> { (0..n as u32).map(|x| act(g, ElementCode(x)).0).collect() };
        let names: Vec<String> = self.generators.iter().map(|g| g.0.clone()).collect();
        let perms: Vec<Vec<u32>> = self.generators.iter().map(|g| gen_perm(g.1)).collect();
        let inv_perms: Vec<Vec<u32>> = perms.iter().map(|p| invert(p)).collect();
        for a in self.elements() {
            let w = self.word_of(a);
            let mut perm: Vec<u32> = (0..n as u32).collect();
            // left multiplication by g1 g2 ... is pi_g1 o pi_g2 o ..., right
            // multiplication composes the other way round
            let syllables: Vec<&(String, i64)> =
                if left { w.syllables().iter().rev().collect() } else { w.syllables().iter().collect() };
            for (name, e) in syllables {
                let Some(i) = names.iter().position(|x| x == name) else { return false };
                let step = if *e < 0 { &inv_perms[i] } else { &perms[i] };
                for _ in 0..e.unsigned_abs() {
                    perm = perm.iter().map(|&x| step[x as usize]).collect();
                }
            }
            let expected: Vec<u32> = (0..n as u32).map(|x| act(a, ElementCode(x)).0).collect();
            if perm != expected {
                return false;
            }
        }
        true
    }
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn shortest_words(n: usize, table: &[u32], gens: &[(String, ElementCode)]) -> Vec<Word> {
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (name, g) in gens {
            let y = table[x * n + g.idx()] as usize;
            if words[y].is_none() {
                let mut w = words[x].clone().unwrap();
                w.push(name, 1);
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    words.into_iter().map(|w| w.unwrap_or_default()).collect()
}

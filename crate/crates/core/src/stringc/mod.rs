//! String diagrams, the intersection condition, and the search for
//! connected string C-group structures.

mod pairs;
mod theorem;
mod triples;

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementCode, GroupInstance};
use crate::involutions::involutions;
use crate::subgroups::{rank, span, FrattiniQuotient};
use crate::verdict::Verdict;

pub use pairs::{coset_pair_groups, coset_pair_table, match_coset_pairs, CosetPairMatch, ElementPattern, PairPattern};
pub use theorem::{verify_theorem, SmallOrderReport, TheoremReport};
pub use triples::{triples_report, TriplesReport};

/// The matrix `p_{j,k} = ord(s_j s_k)` of a tuple of involutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    labels: Vec<Vec<u32>>,
}

impl Diagram {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, j: usize, k: usize) -> u32 {
        self.labels[j][k]
    }

    /// All non-adjacent nodes commute.
    pub fn is_string(&self) -> bool {
        let n = self.n();
        (0..n).all(|j| (j + 2..n).all(|k| self.labels[j][k] == 2))
    }

    pub fn is_connected_string(&self) -> bool {
        self.is_string() && (0..self.n().saturating_sub(1)).all(|j| self.labels[j][j + 1] > 2)
    }

    /// `(p_{0,1}, ..., p_{n-2,n-1})`.
    pub fn schlafli_type(&self) -> Vec<u32> {
        (0..self.n().saturating_sub(1)).map(|j| self.labels[j][j + 1]).collect()
    }
}

pub fn diagram(g: &GroupInstance, tuple: &[ElementCode]) -> Result<Diagram> {
    if let Some(i) = tuple.iter().position(|&s| !g.is_involution(s)) {
        return Err(Error::NotInvolution(i));
    }
    let labels = tuple.iter().map(|&a| tuple.iter().map(|&b| g.element_order(g.mul(a, b))).collect()).collect();
    Ok(Diagram { labels })
}

/// Schläfli type written `{4, 16}`.
pub fn type_string(t: &[u32]) -> String {
    format!("{{{}}}", t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntersectionEvidence {
    /// Ranks 0 and 1.
    Vacuous,
    /// `<s0,s1> ∩ <s1,s2> = <s1>`, with the orders of the two subgroups.
    Rank3 { h01: usize, h12: usize },
    /// Every pair of generator subsets was compared.
    Lattice { pairs: usize },
}

/// A pair of generator subsets whose subgroups meet in more than the
/// subgroup of their common generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionFailure {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
    pub element: ElementCode,
}

impl fmt::Display for IntersectionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<s_{:?}> ∩ <s_{:?}> contains {}", self.j, self.k, self.element)
    }
}

fn bits(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// The intersection condition. Rank 3 compares only `<s0,s1>` and `<s1,s2>`;
/// other ranks run the full subset lattice.
pub fn check_intersection_condition(
    g: &GroupInstance,
    tuple: &[ElementCode],
) -> std::result::Result<IntersectionEvidence, IntersectionFailure> {
    if tuple.len() == 3 {
        let h01 = span(g, &tuple[..2]);
        let h12 = span(g, &tuple[1..]);
        let extra =
            h01.elements().iter().copied().find(|&x| x != ElementCode::IDENTITY && x != tuple[1] && h12.contains(x));
        return match extra {
            Some(element) => Err(IntersectionFailure { j: vec![0, 1], k: vec![1, 2], element }),
            None => Ok(IntersectionEvidence::Rank3 { h01: h01.len(), h12: h12.len() }),
        };
    }
    check_intersection_full(g, tuple)
}

/// `<s_J> ∩ <s_K> = <s_{J∩K}>` for every pair of subsets `J, K`.
pub fn check_intersection_full(
    g: &GroupInstance,
    tuple: &[ElementCode],
) -> std::result::Result<IntersectionEvidence, IntersectionFailure> {
    let n = tuple.len();
    if n < 2 {
        return Ok(IntersectionEvidence::Vacuous);
    }
    let spans: Vec<_> = (0..1usize << n)
        .map(|mask| {
            let gens: Vec<ElementCode> = bits(mask, n).into_iter().map(|i| tuple[i]).collect();
            span(g, &gens)
        })
        .collect();
    let mut pairs = 0;
    for a in 0..spans.len() {
        for b in a + 1..spans.len() {
            pairs += 1;
            let common = &spans[a & b];
            let small = if spans[a].len() <= spans[b].len() { (a, b) } else { (b, a) };
            if let Some(&element) =
                spans[small.0].elements().iter().find(|&&x| spans[small.1].contains(x) && !common.contains(x))
            {
                return Err(IntersectionFailure { j: bits(a, n), k: bits(b, n), element });
            }
        }
    }
    Ok(IntersectionEvidence::Lattice { pairs })
}

/// Why a tuple (or the whole group) cannot carry a connected string C-group
/// structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `(s0 s1)^(2 x1) = (s1 s2)^(2 x2) = zeta` for a central involution.
    SharedCentralPower { tuple: [ElementCode; 3], zeta: ElementCode, x1: u64, x2: u64 },
    /// `s0 s1 s0 = s2 s1 s2`.
    EqualConjugates { tuple: [ElementCode; 3], conjugate: ElementCode },
    /// Every non-commuting pair of involutions has `zeta` in `<(t0 t1)^2>`.
    GlobalCentralPower { zeta: ElementCode },
    /// The intersection condition fails directly.
    IntersectionTooLarge { tuple: Vec<ElementCode>, failure: IntersectionFailure },
}

impl Violation {
    /// Re-checks the witness against `g`.
    pub fn recheck(&self, g: &GroupInstance) -> bool {
        match self {
            Violation::SharedCentralPower { tuple: [s0, s1, s2], zeta, x1, x2 } => {
                let a = g.mul(*s0, *s1);
                let b = g.mul(*s1, *s2);
                g.is_central(*zeta)
                    && g.is_involution(*zeta)
                    && g.pow(a, 2 * *x1 as i64) == *zeta
                    && g.pow(b, 2 * *x2 as i64) == *zeta
            }
            Violation::EqualConjugates { tuple: [s0, s1, s2], conjugate } => {
                g.conj(*s1, *s0) == *conjugate && g.conj(*s1, *s2) == *conjugate
            }
            Violation::GlobalCentralPower { zeta } => {
                g.is_central(*zeta) && g.is_involution(*zeta) && central_power_knockout_exhaustive(g, *zeta)
            }
            Violation::IntersectionTooLarge { tuple, failure } => {
                let part = |ix: &[usize]| span(g, &ix.iter().map(|&i| tuple[i]).collect::<Vec<_>>());
                let common: Vec<usize> = failure.j.iter().copied().filter(|i| failure.k.contains(i)).collect();
                part(&failure.j).contains(failure.element)
                    && part(&failure.k).contains(failure.element)
                    && !part(&common).contains(failure.element)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Violation::SharedCentralPower { .. } => "shared_central_power",
            Violation::EqualConjugates { .. } => "equal_conjugates",
            Violation::GlobalCentralPower { .. } => "global_central_power",
            Violation::IntersectionTooLarge { .. } => "intersection_too_large",
        }
    }
}

/// Least `x >= 0` with `base^(c x) = target`, by solving `c x = t` modulo
/// `ord(base)` where `base^t = target`.
pub fn solve_power_equation(g: &GroupInstance, base: ElementCode, c: i64, target: ElementCode) -> Option<u64> {
    let n = g.element_order(base) as i64;
    let t = discrete_log(g, base, target)? as i64;
    let c = c.rem_euclid(n);
    let d = gcd(c, n);
    if t % d != 0 {
        return None;
    }
    let (c, t, n) = (c / d, t / d, n / d);
    let x = if n == 1 { 0 } else { (t * mod_inverse(c, n)?).rem_euclid(n) };
    debug_assert_eq!(g.pow(base, (c * d) * x), target);
    Some(x as u64)
}

/// The same equation by scanning `x` over one period.
pub fn solve_power_equation_scan(g: &GroupInstance, base: ElementCode, c: i64, target: ElementCode) -> Option<u64> {
    let n = g.element_order(base) as u64;
    (0..n).find(|&x| g.pow(base, c * x as i64) == target)
}

fn discrete_log(g: &GroupInstance, base: ElementCode, target: ElementCode) -> Option<u64> {
    let mut x = ElementCode::IDENTITY;
    for t in 0..g.element_order(base) as u64 {
        if x == target {
            return Some(t);
        }
        x = g.mul(x, base);
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    let (mut r0, mut r1, mut t0, mut t1) = (n, a.rem_euclid(n), 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n))
}

/// The involution of the cyclic group `<x>`, if it has one.
fn cyclic_involution(g: &GroupInstance, x: ElementCode) -> Option<ElementCode> {
    let n = g.element_order(x);
    n.is_multiple_of(2).then(|| g.pow(x, (n / 2) as i64))
}

/// Whether the central involution `zeta` lies in `<(t0 t1)^2>`.
fn power_hits(g: &GroupInstance, t0: ElementCode, t1: ElementCode, zeta: ElementCode) -> bool {
    let sq = g.pow(g.mul(t0, t1), 2);
    cyclic_involution(g, sq) == Some(zeta)
}

/// The two per-triple obstructions for involutions with a connected string
/// diagram.
pub fn shared_power_check(
    g: &GroupInstance,
    s0: ElementCode,
    s1: ElementCode,
    s2: ElementCode,
) -> Result<Option<Violation>> {
    let d = diagram(g, &[s0, s1, s2])?;
    if !d.is_connected_string() {
        return Err(Error::Precondition("tuple does not have a connected string diagram of rank 3".into()));
    }
    Ok(triple_violation(g, s0, s1, s2))
}

fn triple_violation(g: &GroupInstance, s0: ElementCode, s1: ElementCode, s2: ElementCode) -> Option<Violation> {
    let a = g.mul(s0, s1);
    let b = g.mul(s1, s2);
    if let (Some(za), Some(zb)) = (cyclic_involution(g, g.pow(a, 2)), cyclic_involution(g, g.pow(b, 2))) {
        if za == zb && g.is_central(za) {
            let x1 = solve_power_equation(g, a, 2, za)?;
            let x2 = solve_power_equation(g, b, 2, zb)?;
            return Some(Violation::SharedCentralPower { tuple: [s0, s1, s2], zeta: za, x1, x2 });
        }
    }
    let c0 = g.conj(s1, s0);
    (c0 == g.conj(s1, s2)).then_some(Violation::EqualConjugates { tuple: [s0, s1, s2], conjugate: c0 })
}

/// Involutions grouped into cosets of the center.
#[derive(Clone, Debug)]
pub struct InvolutionCosets {
    /// Least involution of each coset, increasing.
    pub reps: Vec<ElementCode>,
    /// Central elements of order at most 2, identity first.
    pub omega: Vec<ElementCode>,
    rep_of: Vec<Option<usize>>,
}

impl InvolutionCosets {
    pub fn new(g: &GroupInstance) -> Self {
        let omega: Vec<ElementCode> =
            g.elements().filter(|&z| g.is_central(z) && g.mul(z, z) == ElementCode::IDENTITY).collect();
        let mut rep_of = vec![None; g.order()];
        let mut reps = Vec::new();
        for t in involutions(g) {
            if rep_of[t.idx()].is_some() {
                continue;
            }
            let ix = reps.len();
            reps.push(t);
            for &z in &omega {
                rep_of[g.mul(t, z).idx()] = Some(ix);
            }
        }
        InvolutionCosets { reps, omega, rep_of }
    }

    /// Index into `reps` of the coset of an involution.
    pub fn coset_of(&self, t: ElementCode) -> Option<usize> {
        self.rep_of[t.idx()]
    }
}

/// Whether `zeta ∈ <(t0 t1)^2>` for every non-commuting pair of involutions,
/// checked on coset representatives.
pub fn central_power_knockout(g: &GroupInstance, zeta: ElementCode) -> bool {
    let cosets = InvolutionCosets::new(g);
    central_power_knockout_on(g, &cosets, zeta)
}

fn central_power_knockout_on(g: &GroupInstance, cosets: &InvolutionCosets, zeta: ElementCode) -> bool {
    let reps = &cosets.reps;
    reps.iter()
        .enumerate()
        .all(|(i, &t0)| reps[i + 1..].iter().all(|&t1| g.commutes(t0, t1) || power_hits(g, t0, t1, zeta)))
}

/// The same test over every pair of involutions.
pub fn central_power_knockout_exhaustive(g: &GroupInstance, zeta: ElementCode) -> bool {
    let inv = involutions(g);
    inv.iter()
        .enumerate()
        .all(|(i, &t0)| inv[i + 1..].iter().all(|&t1| g.commutes(t0, t1) || power_hits(g, t0, t1, zeta)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringCCertificate {
    pub generators: Vec<ElementCode>,
    pub words: Vec<String>,
    pub schlafli_type: Vec<u32>,
    pub evidence: IntersectionEvidence,
}

impl StringCCertificate {
    /// Checks generation, the string condition and the full intersection
    /// condition from scratch.
    pub fn verify(&self, g: &GroupInstance) -> Verdict {
        let mut v = Verdict::new(format!("{} certificate {:?}", g.label(), self.words));
        let size = g.closure_size(&self.generators);
        v.check("generates", size == g.order(), format!("closure {size} of {}", g.order()));
        match diagram(g, &self.generators) {
            Ok(d) => {
                v.check("string diagram", d.is_string(), "");
                v.check("connected", d.is_connected_string(), "");
                v.check("type", d.schlafli_type() == self.schlafli_type, type_string(&d.schlafli_type()));
            }
            Err(e) => {
                v.check("involutions", false, e.to_string());
            }
        }
        match check_intersection_full(g, &self.generators) {
            Ok(_) => v.check("intersection condition", true, ""),
            Err(f) => v.check("intersection condition", false, f.to_string()),
        };
        v
    }

    pub fn dual(&self, g: &GroupInstance) -> StringCCertificate {
        let generators: Vec<ElementCode> = self.generators.iter().rev().copied().collect();
        StringCCertificate {
            words: generators.iter().map(|&s| g.format(s)).collect(),
            schlafli_type: self.schlafli_type.iter().rev().copied().collect(),
            evidence: self.evidence.clone(),
            generators,
        }
    }
}

fn certificate(g: &GroupInstance, tuple: &[ElementCode], evidence: IntersectionEvidence) -> StringCCertificate {
    let schlafli_type = (0..tuple.len() - 1).map(|j| g.element_order(g.mul(tuple[j], tuple[j + 1]))).collect();
    StringCCertificate {
        generators: tuple.to_vec(),
        words: tuple.iter().map(|&s| g.format(s)).collect(),
        schlafli_type,
        evidence,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Coset representatives, the global and per-triple obstructions, then
    /// direct checks on the expansions.
    Pruned,
    /// Every tuple of involutions, direct checks only.
    Exhaustive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationSummary {
    pub global: Option<ElementCode>,
    pub shared_central_power: u64,
    pub equal_conjugates: u64,
    pub not_generating: u64,
    pub intersection_too_large: u64,
    /// Tuples that reached the direct checks.
    pub examined: u64,
}

impl ViolationSummary {
    fn merge(mut self, o: ViolationSummary) -> ViolationSummary {
        self.global = self.global.or(o.global);
        self.shared_central_power += o.shared_central_power;
        self.equal_conjugates += o.equal_conjugates;
        self.not_generating += o.not_generating;
        self.intersection_too_large += o.intersection_too_large;
        self.examined += o.examined;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: SearchMode,
    pub ranks: Vec<usize>,
    pub summary: ViolationSummary,
    /// Sorted by generator tuple; the first is the canonical one.
    pub certificates: Vec<StringCCertificate>,
}

impl SearchReport {
    pub fn canonical(&self) -> Option<&StringCCertificate> {
        self.certificates.first()
    }

    /// Distinct types, each normalized so it reads no larger than its reverse.
    pub fn types_up_to_duality(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self
            .certificates
            .iter()
            .map(|c| {
                let rev: Vec<u32> = c.schlafli_type.iter().rev().copied().collect();
                c.schlafli_type.clone().min(rev)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// All connected string C-group structures of `g` with ranks in `ranks`.
pub fn search_connected_stringc(g: &GroupInstance, ranks: RangeInclusive<usize>) -> Vec<StringCCertificate> {
    search(g, ranks, SearchMode::Pruned).certificates
}

/// The ranks worth searching by default: the rank of `g` itself.
pub fn default_ranks(g: &GroupInstance) -> RangeInclusive<usize> {
    let r = rank(g);
    r..=r
}

pub fn search(g: &GroupInstance, ranks: RangeInclusive<usize>, mode: SearchMode) -> SearchReport {
    let fq = FrattiniQuotient::new(g);
    let mut summary = ViolationSummary::default();
    let mut certificates = Vec::new();
    let ranks: Vec<usize> = ranks.collect();
    for &n in &ranks {
        if n < fq.dim() || n < 2 {
            continue;
        }
        let (s, c) = match mode {
            SearchMode::Pruned => search_pruned(g, &fq, n),
            SearchMode::Exhaustive => search_exhaustive(g, &fq, n),
        };
        summary = summary.merge(s);
        certificates.extend(c);
    }
    certificates.sort_by(|a, b| a.generators.cmp(&b.generators));
    SearchReport { mode, ranks, summary, certificates }
}

/// Extends partial tuples one generator at a time, keeping only those whose
/// new entry fails to commute with its predecessor and commutes with all
/// earlier ones.
fn extend_string(
    g: &GroupInstance,
    pool: &[ElementCode],
    prefix: &[ElementCode],
    n: usize,
    out: &mut dyn FnMut(&[ElementCode]),
) {
    if prefix.len() == n {
        out(prefix);
        return;
    }
    let mut next = prefix.to_vec();
    next.push(ElementCode::IDENTITY);
    let last = *prefix.last().unwrap();
    for &t in pool {
        if g.commutes(last, t) {
            continue;
        }
        if !prefix[..prefix.len() - 1].iter().all(|&s| g.commutes(s, t)) {
            continue;
        }
        *next.last_mut().unwrap() = t;
        extend_string(g, pool, &next, n, out);
    }
}

fn search_exhaustive(
    g: &GroupInstance,
    fq: &FrattiniQuotient,
    n: usize,
) -> (ViolationSummary, Vec<StringCCertificate>) {
    let inv = involutions(g);
    let shards: Vec<_> = inv
        .par_iter()
        .map(|&first| {
            let mut summary = ViolationSummary::default();
            let mut certs = Vec::new();
            extend_string(g, &inv, &[first], n, &mut |tuple| {
                if tuple.iter().enumerate().any(|(i, s)| tuple[i + 1..].contains(s)) {
                    return;
                }
                summary.examined += 1;
                if !fq.generates(tuple) || g.closure_size(tuple) != g.order() {
                    summary.not_generating += 1;
                    return;
                }
                match check_intersection_condition(g, tuple) {
                    Ok(ev) => certs.push(certificate(g, tuple, ev)),
                    Err(_) => summary.intersection_too_large += 1,
                }
            });
            (summary, certs)
        })
        .collect();
    merge_shards(shards)
}

fn merge_shards(
    shards: Vec<(ViolationSummary, Vec<StringCCertificate>)>,
) -> (ViolationSummary, Vec<StringCCertificate>) {
    shards.into_iter().fold((ViolationSummary::default(), Vec::new()), |(s, mut c), (s2, c2)| {
        c.extend(c2);
        (s.merge(s2), c)
    })
}

fn search_pruned(g: &GroupInstance, fq: &FrattiniQuotient, n: usize) -> (ViolationSummary, Vec<StringCCertificate>) {
    let cosets = InvolutionCosets::new(g);
    if n >= 3 {
        if let Some(&zeta) = cosets.omega[1..].iter().find(|&&z| central_power_knockout_on(g, &cosets, z)) {
            let summary = ViolationSummary { global: Some(zeta), ..Default::default() };
            return (summary, Vec::new());
        }
    }
    let reps = &cosets.reps;
    let shards: Vec<_> = reps
        .par_iter()
        .map(|&first| {
            let mut summary = ViolationSummary::default();
            let mut certs = Vec::new();
            extend_string(g, reps, &[first], n, &mut |pattern| {
                for w in pattern.windows(3) {
                    match triple_violation(g, w[0], w[1], w[2]) {
                        Some(Violation::SharedCentralPower { .. }) => {
                            summary.shared_central_power += 1;
                            return;
                        }
                        Some(_) => {
                            summary.equal_conjugates += 1;
                            return;
                        }
                        None => {}
                    }
                }
                expand(g, fq, &cosets.omega, pattern, &mut summary, &mut certs);
            });
            (summary, certs)
        })
        .collect();
    merge_shards(shards)
}

/// Every tuple `(r_0 z_0, ..., r_{n-1} z_{n-1})` with `z_i` central of order
/// at most 2.
fn expand(
    g: &GroupInstance,
    fq: &FrattiniQuotient,
    omega: &[ElementCode],
    pattern: &[ElementCode],
    summary: &mut ViolationSummary,
    certs: &mut Vec<StringCCertificate>,
) {
    let n = pattern.len();
    let mut shift = vec![0usize; n];
    let mut tuple = pattern.to_vec();
    loop {
        for i in 0..n {
            tuple[i] = g.mul(pattern[i], omega[shift[i]]);
        }
        if !tuple.iter().enumerate().any(|(i, s)| tuple[i + 1..].contains(s)) {
            summary.examined += 1;
            if !fq.generates(&tuple) {
                summary.not_generating += 1;
            } else {
                let verdict =
                    if n == 3 { dihedral_intersection(g, &tuple) } else { check_intersection_full(g, &tuple) };
                match verdict {
                    Ok(ev) => certs.push(certificate(g, &tuple, ev)),
                    Err(_) => summary.intersection_too_large += 1,
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            shift[i] += 1;
            if shift[i] < omega.len() {
                break;
            }
            shift[i] = 0;
            i += 1;
        }
    }
}

/// `<s0,s1> ∩ <s1,s2> = <s1>` using the normal forms `ρ^k` and `ρ^k s1` of
/// the two dihedral subgroups.
fn dihedral_intersection(
    g: &GroupInstance,
    tuple: &[ElementCode],
) -> std::result::Result<IntersectionEvidence, IntersectionFailure> {
    let (s0, s1, s2) = (tuple[0], tuple[1], tuple[2]);
    let rho = g.mul(s0, s1);
    let sigma = g.mul(s1, s2);
    let mut rotations: Vec<ElementCode> = std::iter::successors(Some(sigma), |&x| Some(g.mul(x, sigma)))
        .take_while(|&x| x != ElementCode::IDENTITY)
        .collect();
    rotations.push(ElementCode::IDENTITY);
    rotations.sort_unstable();
    let in_h12 = |x: ElementCode| rotations.binary_search(&x).is_ok() || rotations.binary_search(&g.mul(x, s1)).is_ok();
    let ord_rho = g.element_order(rho);
    let mut x = ElementCode::IDENTITY;
    for _ in 0..ord_rho {
        for y in [x, g.mul(x, s1)] {
            if y != ElementCode::IDENTITY && y != s1 && in_h12(y) {
                return Err(IntersectionFailure { j: vec![0, 1], k: vec![1, 2], element: y });
            }
        }
        x = g.mul(x, rho);
    }
    Ok(IntersectionEvidence::Rank3 { h01: 2 * ord_rho as usize, h12: 2 * rotations.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, build_dihedral, direct_product, spec, Family};

    fn d19(m: u32) -> GroupInstance {
        build(&spec(Family::MIID, 19, m, false).unwrap()).unwrap()
    }

    fn canonical_triple(g: &GroupInstance) -> [ElementCode; 3] {
        let c = |w: &str| g.element(w).unwrap();
        [c("r"), c("q^3 r"), c("p^-1 q^3 r")]
    }

    #[test]
    fn canonical_triple_diagram() {
        let g = d19(7);
        let [s0, s1, s2] = canonical_triple(&g);
        let d = diagram(&g, &[s0, s1, s2]).unwrap();
        assert_eq!(d.schlafli_type(), vec![4, 16]);
        assert_eq!(d.label(0, 2), 2);
        assert!(d.is_connected_string());
        assert!(shared_power_check(&g, s0, s1, s2).unwrap().is_none());
        assert!(check_intersection_condition(&g, &[s0, s1, s2]).is_ok());
        assert!(dihedral_intersection(&g, &[s0, s1, s2]).is_ok());
    }

    #[test]
    fn not_involution_is_reported() {
        let g = d19(7);
        let p = g.generator("p").unwrap();
        let r = g.generator("r").unwrap();
        assert_eq!(diagram(&g, &[r, p]), Err(Error::NotInvolution(1)));
    }

    #[test]
    fn disconnected_product() {
        let g = direct_product(&build_dihedral(32).unwrap(), &build_dihedral(1).unwrap()).unwrap();
        let t = [
            g.generator("b").unwrap(),
            g.mul(g.generator("a").unwrap(), g.generator("b").unwrap()),
            g.generator("b_2").unwrap(),
        ];
        let d = diagram(&g, &t).unwrap();
        assert_eq!(d.schlafli_type(), vec![32, 2]);
        assert!(d.is_string() && !d.is_connected_string());
        assert!(check_intersection_full(&g, &t).is_ok());
    }

    #[test]
    fn power_equation() {
        let g = crate::catalog::build_cyclic(16).unwrap();
        let a = g.generator("a").unwrap();
        let target = g.pow(a, 8);
        assert_eq!(solve_power_equation(&g, a, 6, target), Some(4));
        assert_eq!(solve_power_equation_scan(&g, a, 6, target), Some(4));
        assert_eq!(solve_power_equation(&g, a, 16, target), None);
        for c in 1..40 {
            for t in 0..16 {
                let target = g.pow(a, t);
                assert_eq!(solve_power_equation(&g, a, c, target), solve_power_equation_scan(&g, a, c, target));
            }
        }
    }

    #[test]
    fn winner_escapes_central_power_knockout() {
        let g = d19(7);
        let zeta = g.pow(g.generator("p").unwrap(), 8);
        assert!(!central_power_knockout(&g, zeta));
        assert!(!central_power_knockout_exhaustive(&g, zeta));
    }

    #[test]
    fn vacuous_central_power_knockout() {
        let g = build_dihedral(1).unwrap();
        assert!(central_power_knockout(&g, g.generator("b").unwrap()));
    }
}

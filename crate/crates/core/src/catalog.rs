//! The embedded family tables, presentation templates and generic
//! constructors (cyclic, dihedral, direct and semidirect products).

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementCode, GroupInstance};
use crate::pc::PcPresentation;
use crate::word::Word;

const TABLE_TEXT: &str = include_str!("../data/families.tbl");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "N_I")]
    NIOmitted,
    #[serde(rename = "N_II")]
    NII,
    #[serde(rename = "M_II-A")]
    MIIA,
    #[serde(rename = "M_II-B")]
    MIIB,
    #[serde(rename = "M_II-C")]
    MIIC,
    #[serde(rename = "M_II-D")]
    MIID,
    #[serde(rename = "M_II-E")]
    MIIE,
    #[serde(rename = "M_II-F")]
    MIIF,
    #[serde(rename = "M_II-G")]
    MIIG,
    #[serde(rename = "M_III")]
    MIII,
}

impl Family {
    pub const CLASSIFIED: [Family; 9] = [
        Family::NII,
        Family::MIIA,
        Family::MIIB,
        Family::MIIC,
        Family::MIID,
        Family::MIIE,
        Family::MIIF,
        Family::MIIG,
        Family::MIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::NIOmitted => "N_I",
            Family::NII => "N_II",
            Family::MIIA => "M_II-A",
            Family::MIIB => "M_II-B",
            Family::MIIC => "M_II-C",
            Family::MIID => "M_II-D",
            Family::MIIE => "M_II-E",
            Family::MIIF => "M_II-F",
            Family::MIIG => "M_II-G",
            Family::MIII => "M_III",
        }
    }

    fn table_key(self) -> &'static str {
        match self {
            Family::NIOmitted => "N_I",
            Family::NII => "N_II",
            Family::MIIA => "M_II_A",
            Family::MIIB => "M_II_B",
            Family::MIIC => "M_II_C",
            Family::MIID => "M_II_D",
            Family::MIIE => "M_II_E",
            Family::MIIF => "M_II_F",
            Family::MIIG => "M_II_G",
            Family::MIII => "M_III",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            Family::NIOmitted => 0,
            Family::NII => 5,
            Family::MIIA | Family::MIID | Family::MIII => 8,
            Family::MIIB => 7,
            Family::MIIC => 2,
            Family::MIIE | Family::MIIG => 4,
            Family::MIIF => 5,
        }
    }

    /// `log2` of the exponent, relative to `m`: 2 for `exp = 2^(m-2)`.
    pub fn exponent_gap(self) -> u32 {
        match self {
            Family::NIOmitted | Family::NII => 2,
            _ => 3,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Family::NIOmitted => 2,
            Family::MIII => 4,
            _ => 3,
        }
    }

    pub fn min_m(self) -> u32 {
        match self {
            Family::NIOmitted => 5,
            Family::NII => 6,
            _ => 7,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_").to_ascii_uppercase();
        let fam = match key.as_str() {
            "N_I" | "N_I_OMITTED" => Family::NIOmitted,
            "N_II" => Family::NII,
            "M_II_A" => Family::MIIA,
            "M_II_B" => Family::MIIB,
            "M_II_C" => Family::MIIC,
            "M_II_D" => Family::MIID,
            "M_II_E" => Family::MIIE,
            "M_II_F" => Family::MIIF,
            "M_II_G" => Family::MIIG,
            "M_III" => Family::MIII,
            _ => return Err(Error::UnknownFamily(s.to_string())),
        };
        Ok(fam)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Original,
    Added,
    Corrected,
    Historical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowMeta {
    pub provenance: Provenance,
    /// Row this one duplicates up to isomorphism; such rows are skipped.
    pub duplicate_of: Option<u32>,
    /// Row that duplicates this one.
    pub partner: Option<u32>,
    /// `u = 1` instead of `m - 4`.
    pub u_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    pub params: Vec<i64>,
    pub meta: TableRowMeta,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: u32,
    pub params: Vec<i64>,
    pub m: u32,
    /// Exponent parameter for the `p^(2^u e4)` terms of M_II-B and M_II-D.
    pub u: u32,
    pub meta: TableRowMeta,
}

impl FamilySpec {
    pub fn label(&self) -> String {
        let hist = if self.meta.provenance == Provenance::Historical { "*" } else { "" };
        if self.n == 0 {
            format!("{}({})", self.family, self.m)
        } else {
            format!("{},{}{}({})", self.family, self.n, hist, self.m)
        }
    }

    pub fn expected_exponent(&self) -> u32 {
        1 << (self.m - self.family.exponent_gap())
    }
}

fn parse_tables(text: &str) -> Result<HashMap<String, Vec<TableRow>>> {
    let mut out: HashMap<String, Vec<TableRow>> = HashMap::new();
    let mut current: Option<(String, usize)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Data(format!("line {}: {msg}", lineno + 1));
        if let Some(rest) = line.strip_prefix('[') {
            let (name, cols) = rest.split_once(']').ok_or_else(|| bad("unterminated header"))?;
            let ncols = cols.split_whitespace().count();
            current = Some((name.to_string(), ncols));
            out.entry(name.to_string()).or_default();
            continue;
        }
        let (name, ncols) = current.clone().ok_or_else(|| bad("row before any table header"))?;
        let mut tokens = line.split_whitespace();
        let n: u32 = tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad row index"))?;
        let mut params = Vec::with_capacity(ncols);
        let mut meta =
            TableRowMeta { provenance: Provenance::Original, duplicate_of: None, partner: None, u_one: false };
        for tok in tokens {
            if params.len() < ncols {
                params.push(tok.parse::<i64>().map_err(|_| bad("bad parameter"))?);
                continue;
            }
            match tok.split_once('=') {
                Some(("dup", k)) => meta.duplicate_of = Some(k.parse().map_err(|_| bad("bad dup"))?),
                Some(("pair", k)) => meta.partner = Some(k.parse().map_err(|_| bad("bad pair"))?),
                Some(("u", "1")) => meta.u_one = true,
                None if tok == "added" => meta.provenance = Provenance::Added,
                None if tok == "corrected" => meta.provenance = Provenance::Corrected,
                None if tok == "historical" => meta.provenance = Provenance::Historical,
                _ => return Err(bad(&format!("unknown flag `{tok}`"))),
            }
        }
        if params.len() != ncols {
            return Err(bad("wrong number of parameters"));
        }
        out.get_mut(&name).expect("table exists").push(TableRow { n, params, meta });
    }
    Ok(out)
}

fn tables() -> &'static HashMap<String, Vec<TableRow>> {
    static TABLES: OnceLock<HashMap<String, Vec<TableRow>>> = OnceLock::new();
    TABLES.get_or_init(|| parse_tables(TABLE_TEXT).expect("embedded family table is well formed"))
}

/// All rows of a family table, including duplicates and historical rows.
pub fn rows(family: Family) -> &'static [TableRow] {
    tables().get(family.table_key()).map(Vec::as_slice).unwrap_or(&[])
}

fn check_m(family: Family, m: u32) -> Result<()> {
    let max = 12;
    if m < family.min_m() || m > max {
        return Err(Error::UnsupportedM { m, min: family.min_m(), max });
    }
    Ok(())
}

/// The canonical (or, with `historical`, the original faulty) row `n`.
pub fn spec(family: Family, n: u32, m: u32, historical: bool) -> Result<FamilySpec> {
    check_m(family, m)?;
    if family == Family::NIOmitted {
        return Ok(FamilySpec {
            family,
            n: 0,
            params: Vec::new(),
            m,
            u: m - 4,
            meta: TableRowMeta { provenance: Provenance::Original, duplicate_of: None, partner: None, u_one: false },
        });
    }
    let row = rows(family)
        .iter()
        .filter(|r| r.n == n)
        .find(|r| (r.meta.provenance == Provenance::Historical) == historical)
        .ok_or(Error::UnknownRow { family: family.to_string(), index: n })?;
    Ok(FamilySpec {
        family,
        n,
        params: row.params.clone(),
        m,
        u: if row.meta.u_one { 1 } else { m - 4 },
        meta: row.meta.clone(),
    })
}

/// A spec for an arbitrary parameter tuple (used by sweeps).
pub fn spec_from_params(family: Family, params: &[i64], m: u32, u: u32) -> Result<FamilySpec> {
    check_m(family, m)?;
    if params.len() != family.param_count() {
        return Err(Error::ParamCount {
            family: family.to_string(),
            expected: family.param_count(),
            got: params.len(),
        });
    }
    Ok(FamilySpec {
        family,
        n: 0,
        params: params.to_vec(),
        m,
        u,
        meta: TableRowMeta { provenance: Provenance::Original, duplicate_of: None, partner: None, u_one: u == 1 },
    })
}

/// Specs for every canonical row at `m`; duplicates are kept only on request.
pub fn specs(family: Family, m: u32, include_duplicates: bool) -> Result<Vec<FamilySpec>> {
    rows(family)
        .iter()
        .filter(|r| r.meta.provenance != Provenance::Historical)
        .filter(|r| include_duplicates || r.meta.duplicate_of.is_none())
        .map(|r| spec(family, r.n, m, false))
        .collect()
}

/// Specs for the whole classified catalog (146 rows, or 149 with duplicates).
pub fn catalog_specs(m: u32, include_duplicates: bool) -> Result<Vec<FamilySpec>> {
    let mut out = Vec::new();
    for fam in Family::CLASSIFIED {
        out.extend(specs(fam, m, include_duplicates)?);
    }
    Ok(out)
}

/// Builds every catalog group at `m`, in table order.
pub fn catalog_enumerate(m: u32) -> Result<Vec<(FamilySpec, GroupInstance)>> {
    let specs = catalog_specs(m, false)?;
    specs.into_par_iter().map(|s| build(&s).map(|g| (s, g))).collect()
}

struct Template {
    m: u32,
    pres: PcPresentation,
    p_order: i64,
}

impl Template {
    fn new(m: u32, p_gap: u32) -> Self {
        let mut pres = PcPresentation::new();
        let p_order = 1i64 << (m - p_gap);
        pres.push("p", p_order as u32, Word::identity());
        Template { m, pres, p_order }
    }

    /// `2^(m-k)`
    fn pw(&self, k: u32) -> i64 {
        1i64 << (self.m - k)
    }

    /// `p^e` with `e` reduced to the symmetric range.
    fn p(&self, e: i64) -> Word {
        let mut e = e.rem_euclid(self.p_order);
        if e > self.p_order / 2 {
            e -= self.p_order;
        }
        Word::gen("p", e)
    }

    /// `q^e` verbatim: `q^4` need not be trivial.
    fn q(&self, e: i64) -> Word {
        Word::gen("q", e)
    }
}

/// The polycyclic presentation of a spec.
pub fn presentation(spec: &FamilySpec) -> Result<PcPresentation> {
    let f = spec.family;
    if spec.params.len() != f.param_count() {
        return Err(Error::ParamCount { family: f.to_string(), expected: f.param_count(), got: spec.params.len() });
    }
    let e = |i: usize| spec.params[i - 1];
    let m = spec.m;
    let mut t = Template::new(m, f.exponent_gap());
    let u = 1i64 << spec.u;
    match f {
        Family::NIOmitted => {
            let q4 = t.p(t.pw(3));
            t.pres.push("q", 4, q4);
            let c = t.q(2).concat(&t.p(-1 + t.pw(3)));
            let c2 = t.p(1 + t.pw(3));
            t.pres.conj("q", "p", c).square_conj("q", "p", c2);
        }
        Family::NII => {
            t.pres.push("q", 2, Word::identity());
            let r2 = t.p(t.pw(3) * e(5));
            t.pres.push("r", 2, r2);
            let qp = t.p(1 + t.pw(3) * e(2));
            let rp = t.p(e(1) + t.pw(3) * e(3));
            let rq = Word::gen("q", 1).concat(&t.p(t.pw(3) * e(4)));
            t.pres.conj("q", "p", qp).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIIA => {
            t.pres.push("q", 4, Word::identity());
            let r2 = t.q(2 * e(3)).concat(&t.p(t.pw(4) * e(4)));
            t.pres.push("r", 2, r2);
            let qp = t.p(1 + t.pw(5) * e(7));
            let rp = t.q(2 * e(1)).concat(&t.p(e(8) + t.pw(4) * e(5)));
            let rq = t.q(1 + 2 * e(2)).concat(&t.p(t.pw(5) * e(6)));
            t.pres.conj("q", "p", qp).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIIB => {
            t.pres.push("q", 4, Word::identity());
            let r2 = t.q(2 * e(3));
            t.pres.push("r", 2, r2);
            let qp = t.p(-1 + t.pw(5) * e(6));
            let rp = t.q(2 * e(1)).concat(&t.p(e(7) + t.pw(4) * e(5)));
            let rq = t.q(1 + 2 * e(2)).concat(&t.p(u * e(4)));
            t.pres.conj("q", "p", qp).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIIC => {
            let q4 = t.p(t.pw(4));
            t.pres.push("q", 4, q4);
            t.pres.push("r", 2, Word::identity());
            let qp = t.p(-1);
            let rp = t.p(1 + t.pw(4) * e(2));
            let rq = t.q(1 + 2 * e(1));
            t.pres.conj("q", "p", qp).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIID => {
            t.pres.push("q", 4, Word::identity());
            let r2 = t.q(2 * e(3));
            t.pres.push("r", 2, r2);
            let qp = t.q(2).concat(&t.p(-1 + t.pw(4) * e(7)));
            let q2p = t.p(1 + t.pw(4) * e(6));
            let rp = t.q(2 * e(1)).concat(&t.p(e(8) + t.pw(4) * e(5)));
            let rq = t.q(1 + 2 * e(2)).concat(&t.p(u * e(4)));
            t.pres.conj("q", "p", qp).square_conj("q", "p", q2p).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIIE => {
            t.pres.push("q", 4, Word::identity());
            t.pres.push("r", 2, Word::identity());
            let qp = t.q(2).concat(&t.p(1 - t.pw(5) * e(2)));
            let q2p = t.p(1 + t.pw(4) * e(2));
            let rp = t.p(e(1) + t.pw(4) * e(4));
            let rq = Word::gen("q", 1).concat(&t.p(t.pw(5) * e(3)));
            t.pres.conj("q", "p", qp).square_conj("q", "p", q2p).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIIF => {
            let q4 = t.p(t.pw(4));
            t.pres.push("q", 4, q4);
            t.pres.push("r", 2, Word::identity());
            let qp = t.q(2).concat(&t.p(-1 + t.pw(4) * e(5)));
            let q2p = t.p(1 + t.pw(4) * e(1));
            let rp = t.q(2 * e(3)).concat(&t.p(1 + t.pw(4) * e(2)));
            let rq = t.q(1 + 2 * e(3)).concat(&t.p(t.pw(4) * e(4)));
            t.pres.conj("q", "p", qp).square_conj("q", "p", q2p).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIIG => {
            let q4 = t.p(4);
            t.pres.push("q", 4, q4);
            t.pres.push("r", 2, Word::identity());
            let qp = t.q(2).concat(&t.p(-1 + t.pw(5) * e(4)));
            let q2p = t.p(1 + t.pw(4) * e(1));
            let rp = t.p(1 + t.pw(4) * e(3));
            let rq = Word::gen("q", 1).concat(&t.p(t.pw(4) * e(2)));
            t.pres.conj("q", "p", qp).square_conj("q", "p", q2p).conj("r", "p", rp).conj("r", "q", rq);
        }
        Family::MIII => {
            t.pres.push("q", 2, Word::identity());
            let r2 = t.p(t.pw(4) * e(8));
            t.pres.push("r", 2, r2);
            let s2 = t.p(t.pw(4) * e(5));
            t.pres.push("s", 2, s2);
            let qp = Word::gen("p", 1);
            let rp = t.p(e(2) + t.pw(4) * e(3));
            let sp = t.p(e(1) + t.pw(4) * e(6));
            let rq = Word::gen("q", 1);
            let sq = Word::gen("q", 1).concat(&t.p(t.pw(4) * e(4)));
            let sr = Word::gen("r", 1).concat(&t.p(t.pw(4) * e(7)));
            t.pres
                .conj("q", "p", qp)
                .conj("r", "p", rp)
                .conj("s", "p", sp)
                .conj("r", "q", rq)
                .conj("s", "q", sq)
                .conj("s", "r", sr);
        }
    }
    Ok(t.pres)
}

/// Instantiates and materializes a spec.
pub fn build(spec: &FamilySpec) -> Result<GroupInstance> {
    let pres = presentation(spec)?;
    GroupInstance::materialize(&spec.label(), &pres)
}

/// Cyclic group of order `k`.
pub fn build_cyclic(k: u32) -> Result<GroupInstance> {
    if !k.is_power_of_two() {
        return Err(Error::Data(format!("cyclic order {k} is not a power of 2")));
    }
    if k == 1 {
        return GroupInstance::from_table("Z1", vec![0], Vec::new(), Vec::new());
    }
    let mut pres = PcPresentation::new();
    pres.push("a", k, Word::identity());
    GroupInstance::materialize(&format!("Z{k}"), &pres)
}

/// Dihedral group `D_k` of order `2k`, generated by a rotation `a` and a
/// reflection `b`.
pub fn build_dihedral(k: u32) -> Result<GroupInstance> {
    if !k.is_power_of_two() {
        return Err(Error::Data(format!("dihedral index {k} is not a power of 2")));
    }
    let mut pres = PcPresentation::new();
    if k == 1 {
        pres.push("b", 2, Word::identity());
    } else {
        pres.push("a", k, Word::identity()).push("b", 2, Word::identity());
        pres.conj("b", "a", Word::gen("a", -1));
    }
    GroupInstance::materialize(&format!("D{k}"), &pres)
}

fn renamed(taken: &[String], name: &str) -> String {
    let mut candidate = name.to_string();
    let mut k = 2;
    while taken.contains(&candidate) {
        candidate = format!("{name}_{k}");
        k += 1;
    }
    candidate
}

fn rename_word(w: &Word, map: &HashMap<String, String>) -> Word {
    Word::from_syllables(w.syllables().iter().map(|(g, e)| (map.get(g).map(String::as_str).unwrap_or(g), *e)))
}

/// Direct product; elements are pairs `(a, b)` with code `a + |A| b`.
pub fn direct_product(a: &GroupInstance, b: &GroupInstance) -> Result<GroupInstance> {
    let identity_action: Vec<Vec<ElementCode>> =
        b.generators().iter().map(|_| a.generators().iter().map(|g| g.1).collect()).collect();
    let label = format!("{} x {}", a.label(), b.label());
    semidirect_inner(a, b, &identity_action, &label)
}

/// Semidirect product `N ⋊ K`. `action[j][i]` is the image of the `i`-th
/// generator of `N` under conjugation `x -> y x y^-1` by the `j`-th
/// generator `y` of `K`.
pub fn semidirect_product(n: &GroupInstance, k: &GroupInstance, action: &[Vec<ElementCode>]) -> Result<GroupInstance> {
    let label = format!("{} : {}", n.label(), k.label());
    semidirect_inner(n, k, action, &label)
}

/// Extends generator images to an endomorphism of `g`, checking every
/// relator (so the map is well defined) and bijectivity.
fn automorphism_from_images(g: &GroupInstance, images: &[ElementCode]) -> Result<Vec<ElementCode>> {
    let names: Vec<String> = g.generators().iter().map(|x| x.0.clone()).collect();
    for r in g.relators() {
        if g.eval_with(r, &names, images)? != ElementCode::IDENTITY {
            return Err(Error::InvalidAction(format!("relator `{r}` is not preserved")));
        }
    }
    let map =
        extend_homomorphism(g, g, images).ok_or_else(|| Error::InvalidAction("map is not well defined".into()))?;
    let mut seen = vec![false; g.order()];
    for &x in &map {
        if std::mem::replace(&mut seen[x.idx()], true) {
            return Err(Error::InvalidAction("map is not bijective".into()));
        }
    }
    Ok(map)
}

/// Extends `gen_i -> images[i]` along the Cayley graph of `src`; `None` if
/// some edge is inconsistent (the assignment is not a homomorphism).
pub fn extend_homomorphism(
    src: &GroupInstance,
    dst: &GroupInstance,
    images: &[ElementCode],
) -> Option<Vec<ElementCode>> {
    let gens = src.generator_codes();
    let mut map = vec![None; src.order()];
    map[0] = Some(ElementCode::IDENTITY);
    let mut queue = VecDeque::from([ElementCode::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x.idx()].expect("visited");
        for (g, &img) in gens.iter().zip(images) {
            let y = src.mul(x, *g);
            let fy = dst.mul(fx, img);
            match map[y.idx()] {
                None => {
                    map[y.idx()] = Some(fy);
                    queue.push_back(y);
                }
                Some(prev) if prev != fy => return None,
                Some(_) => {}
            }
        }
    }
    map.into_iter().collect()
}

fn semidirect_inner(
    n: &GroupInstance,
    k: &GroupInstance,
    action: &[Vec<ElementCode>],
    label: &str,
) -> Result<GroupInstance> {
    if action.len() != k.generators().len() || action.iter().any(|a| a.len() != n.generators().len()) {
        return Err(Error::InvalidAction("action must list an image for every generator pair".into()));
    }
    let gen_autos: Vec<Vec<ElementCode>> =
        action.iter().map(|imgs| automorphism_from_images(n, imgs)).collect::<Result<_>>()?;
    // phi[k] for every element of K, with phi[k y] = phi[k] o phi[y].
    let mut phi: Vec<Option<Vec<ElementCode>>> = vec![None; k.order()];
    phi[0] = Some(n.elements().collect());
    let mut queue = VecDeque::from([ElementCode::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        let fx = phi[x.idx()].clone().expect("visited");
        for (j, (_, y)) in k.generators().iter().enumerate() {
            let xy = k.mul(x, *y);
            let composed: Vec<ElementCode> = gen_autos[j].iter().map(|&v| fx[v.idx()]).collect();
            match &phi[xy.idx()] {
                None => {
                    phi[xy.idx()] = Some(composed);
                    queue.push_back(xy);
                }
                Some(prev) if *prev != composed => {
                    return Err(Error::InvalidAction("action is not a homomorphism from K".into()))
                }
                Some(_) => {}
            }
        }
    }
    let phi: Vec<Vec<ElementCode>> = phi
        .into_iter()
        .map(|p| p.ok_or_else(|| Error::InvalidAction("K is not generated by its generators".into())))
        .collect::<Result<_>>()?;

    let (nn, nk) = (n.order(), k.order());
    let total = nn * nk;
    if total as u64 > crate::pc::MAX_ORDER {
        return Err(Error::TooLarge(total as u64));
    }
    let mut table = vec![0u32; total * total];
    for x in 0..total {
        let (n1, k1) = (ElementCode((x % nn) as u32), ElementCode((x / nn) as u32));
        for y in 0..total {
            let (n2, k2) = (ElementCode((y % nn) as u32), ElementCode((y / nn) as u32));
            let nprod = n.mul(n1, phi[k1.idx()][n2.idx()]);
            let kprod = k.mul(k1, k2);
            table[x * total + y] = nprod.0 + (nn as u32) * kprod.0;
        }
    }

    let mut names: Vec<String> = n.generators().iter().map(|g| g.0.clone()).collect();
    let mut kmap = HashMap::new();
    for (name, _) in k.generators() {
        let new = renamed(&names, name);
        kmap.insert(name.clone(), new.clone());
        names.push(new);
    }
    let mut gens: Vec<(String, ElementCode)> = n.generators().to_vec();
    for (name, code) in k.generators() {
        gens.push((kmap[name].clone(), ElementCode((nn as u32) * code.0)));
    }
    let mut relators: Vec<Word> = n.relators().to_vec();
    relators.extend(k.relators().iter().map(|r| rename_word(r, &kmap)));
    for (j, (yname, _)) in k.generators().iter().enumerate() {
        let y = Word::gen(&kmap[yname], 1);
        for (i, (xname, _)) in n.generators().iter().enumerate() {
            let lhs = y.concat(&Word::gen(xname, 1)).concat(&y.inverse());
            let rhs = n.word_of(gen_autos[j][n.generators()[i].1.idx()]);
            relators.push(lhs.concat(&rhs.inverse()));
        }
    }
    GroupInstance::from_table(label, table, gens, relators)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        assert_eq!(rows(Family::MIIA).len(), 47);
        assert_eq!(catalog_specs(7, false).unwrap().len(), 146);
        assert_eq!(catalog_specs(7, true).unwrap().len(), 149);
        let sizes: Vec<usize> =
            [Family::MIIA, Family::MIIB, Family::MIIC, Family::MIID, Family::MIIE, Family::MIIF, Family::MIIG]
                .iter()
                .map(|&f| specs(f, 7, false).unwrap().len())
                .collect();
        assert_eq!(sizes, vec![44, 28, 5, 22, 8, 9, 7]);
    }

    #[test]
    fn family_names_roundtrip() {
        for f in Family::CLASSIFIED {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("M_II-Z".parse::<Family>().is_err());
    }

    #[test]
    fn u_parameter() {
        assert_eq!(spec(Family::MIIB, 27, 8, false).unwrap().u, 1);
        assert_eq!(spec(Family::MIIB, 26, 8, false).unwrap().u, 4);
        assert_eq!(spec(Family::MIID, 11, 9, false).unwrap().u, 1);
    }

    #[test]
    fn small_constructors() {
        let d = build_dihedral(8).unwrap();
        assert_eq!((d.order(), d.exponent()), (16, 8));
        let prod = direct_product(&d, &build_cyclic(2).unwrap()).unwrap();
        assert_eq!((prod.order(), prod.exponent()), (32, 8));
        assert!(prod.permutation_oracle());
        assert_eq!(build_cyclic(1).unwrap().order(), 1);
    }

    #[test]
    fn semidirect_dihedral() {
        let a = build_cyclic(8).unwrap();
        let b = build_cyclic(2).unwrap();
        let inv = a.inv(a.generator("a").unwrap());
        let d = semidirect_product(&a, &b, &[vec![inv]]).unwrap();
        assert_eq!((d.order(), d.exponent()), (16, 8));
        assert_eq!(d.center().len(), 2);
        let bad = semidirect_product(&a, &b, &[vec![a.pow(a.generator("a").unwrap(), 2)]]);
        assert!(matches!(bad, Err(Error::InvalidAction(_))));
    }
}

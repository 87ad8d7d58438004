//! On-disk cache of materialized Cayley tables.
//!
//! A file holds a header (magic, version, family id, parameters, `m`, `u`,
//! order, generator codes), the row-major table as little-endian `u32`, and
//! the normal-form exponents as little-endian `u16`, then a SHA-256 of all
//! preceding bytes. Files are named by the SHA-256 of the presentation's
//! canonical text.

use std::fs;
use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use sha2::{Digest, Sha256};

use crate::catalog::{presentation, FamilySpec};
use crate::error::{Error, Result};
use crate::group::{ElementCode, GroupInstance};
use crate::pc::PcPresentation;

const MAGIC: &[u8; 8] = b"STRCGTBL";
const VERSION: u16 = 1;
pub const CACHE_ENV: &str = "STRINGC_CACHE_DIR";

#[derive(Debug)]
pub struct TableCache {
    dir: PathBuf,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

pub fn cache_key(pres: &PcPresentation) -> String {
    Sha256::digest(pres.canonical_text().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into(), hits: AtomicUsize::new(0), misses: AtomicUsize::new(0) }
    }

    /// The cache under `$STRINGC_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    fn path(&self, pres: &PcPresentation) -> PathBuf {
        self.dir.join(format!("{}.tbl", cache_key(pres)))
    }

    /// Loads the cached group of `spec`; `None` when there is no entry.
    pub fn load(&self, spec: &FamilySpec) -> Result<Option<GroupInstance>> {
        let pres = presentation(spec)?;
        let bytes = match fs::read(self.path(&pres)) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(e.to_string())),
        };
        decode(&bytes, spec, &pres).map(Some)
    }

    pub fn store(&self, spec: &FamilySpec, g: &GroupInstance) -> Result<()> {
        let pres = presentation(spec)?;
        let bytes = encode(spec, g)?;
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(e.to_string()))?;
        let path = self.path(&pres);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, &path)).map_err(|e| Error::Cache(e.to_string()))
    }

    /// Loads `spec` from the cache, or builds and stores it.
    pub fn build(&self, spec: &FamilySpec) -> Result<GroupInstance> {
        if let Some(g) = self.load(spec)? {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(g);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let g = crate::catalog::build(spec)?;
        self.store(spec, &g)?;
        Ok(g)
    }
}

fn family_id(spec: &FamilySpec) -> u8 {
    spec.family as u8
}

fn encode(spec: &FamilySpec, g: &GroupInstance) -> Result<Vec<u8>> {
    let exps = g.all_exponents().ok_or_else(|| Error::Cache("group has no normal form".into()))?;
    let mut out = Vec::with_capacity(64 + 4 * g.table().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(family_id(spec));
    out.push(spec.params.len() as u8);
    for p in &spec.params {
        out.extend_from_slice(&p.to_le_bytes());
    }
    for x in [spec.m, spec.u, g.order() as u32] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out.push(g.generators().len() as u8);
    for (name, code) in g.generators() {
        out.push(name.len() as u8);
        out.extend_from_slice(name.as_bytes());
        out.extend_from_slice(&code.0.to_le_bytes());
    }
    let width = exps.first().map_or(0, Vec::len);
    out.push(width as u8);
    for x in g.table() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for e in exps.iter().flatten() {
        out.extend_from_slice(&(*e as u16).to_le_bytes());
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    Ok(out)
}

struct Reader<'a>(Cursor<&'a [u8]>);

impl Reader<'_> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.0.read_exact(&mut buf).map_err(|_| Error::Cache("truncated cache file".into()))?;
        Ok(buf)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.bytes()?))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.bytes()?))
    }
}

fn decode(bytes: &[u8], spec: &FamilySpec, pres: &PcPresentation) -> Result<GroupInstance> {
    if bytes.len() < 32 {
        return Err(Error::Cache("truncated cache file".into()));
    }
    let (bytes, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(bytes).as_slice() != digest {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let mut r = Reader(Cursor::new(bytes));
    if &r.bytes::<8>()? != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Cache(format!("unsupported cache version {version}")));
    }
    let stale = || Error::Cache(format!("cache entry does not describe {}", spec.label()));
    if r.u8()? != family_id(spec) {
        return Err(stale());
    }
    let count = r.u8()? as usize;
    let params = (0..count).map(|_| r.i64()).collect::<Result<Vec<_>>>()?;
    let (m, u, order) = (r.u32()?, r.u32()?, r.u32()? as usize);
    if params != spec.params || m != spec.m || u != spec.u {
        return Err(stale());
    }
    let ngens = r.u8()? as usize;
    let mut generators = Vec::with_capacity(ngens);
    for _ in 0..ngens {
        let len = r.u8()? as usize;
        let mut name = vec![0u8; len];
        r.0.read_exact(&mut name).map_err(|_| Error::Cache("truncated cache file".into()))?;
        let name = String::from_utf8(name).map_err(|e| Error::Cache(e.to_string()))?;
        generators.push((name, ElementCode(r.u32()?)));
    }
    let width = r.u8()? as usize;
    let table = (0..order * order).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let exps = (0..order)
        .map(|_| (0..width).map(|_| r.u16().map(u32::from)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if table.iter().any(|&x| x as usize >= order) {
        return Err(Error::Cache("table entry out of range".into()));
    }
    GroupInstance::from_pc_table(&spec.label(), pres, table, generators, exps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, spec, Family};

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let s = spec(Family::MIID, 19, 7, false).unwrap();
        let cold = cache.build(&s).unwrap();
        let warm = cache.build(&s).unwrap();
        assert_eq!((cache.hits(), cache.misses()), (1, 1));
        assert_eq!(cold.table(), warm.table());
        let fresh = build(&s).unwrap();
        assert_eq!(fresh.table(), warm.table());
        assert!(warm.elements().all(|x| warm.format(x) == fresh.format(x)));
    }

    #[test]
    fn corrupt_entry_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let s = spec(Family::NII, 4, 7, false).unwrap();
        cache.build(&s).unwrap();
        let path = cache.path(&presentation(&s).unwrap());
        let mut bytes = fs::read(&path).unwrap();
        let n = bytes.len();
        bytes[n - 3000] ^= 0x5;
        fs::write(&path, bytes).unwrap();
        assert!(cache.load(&s).is_err());
    }
}

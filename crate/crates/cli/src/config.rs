//! Optional flat `key = value` configuration file. Command-line flags win.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::{Failure, Format};

const KEYS: [&str; 5] = ["format", "workers", "cache_dir", "seed", "verbosity"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub verbosity: Option<u8>,
}

fn value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, Failure> {
    raw.parse().map_err(|_| Failure::Usage(format!("config: bad value `{raw}` for `{key}`")))
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(Failure::Usage(format!("config line {}: unknown key `{key}`", lineno + 1)));
            }
            entries.insert(key, val.trim().to_string());
        }
        let mut cfg = FileConfig::default();
        for (key, raw) in &entries {
            match key.as_str() {
                "format" => cfg.format = Some(value(key, raw)?),
                "workers" => cfg.workers = Some(value(key, raw)?),
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(raw)),
                "seed" => cfg.seed = Some(value(key, raw)?),
                _ => cfg.verbosity = Some(value(key, raw)?),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_keys() {
        let cfg = FileConfig::parse("# batch\nformat = json\nworkers=4\ncache-dir = /tmp/x\n").unwrap();
        assert_eq!(cfg.format, Some(Format::Json));
        assert_eq!(cfg.workers, Some(4));
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/tmp/x")));
        assert!(FileConfig::parse("colour = red").is_err());
        assert!(FileConfig::parse("workers = many").is_err());
    }
}

//! Append-only JSONL store of finished `κ` computations.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::SearchOptions;
use crate::cayley::DigraphLiteral;
use crate::error::{Error, Result};

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "CAYDEN_KAPPA_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaRecord {
    pub d: u32,
    pub n: u64,
    pub kappa: u64,
    pub witness: DigraphLiteral,
    pub settings: SearchOptions,
    pub millis: u64,
}

#[derive(Debug)]
pub struct KappaCache {
    path: PathBuf,
    records: BTreeMap<(u32, u64), KappaRecord>,
}

fn key_name(d: u32, n: u64) -> String {
    format!("d={d},n={n}")
}

impl KappaCache {
    /// Loads the cache, treating a missing file as empty. Unparseable lines
    /// are skipped with a warning; two lines disagreeing on the same `(d, n)`
    /// are an error.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = BTreeMap::new();
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e.into()),
        };
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: KappaRecord = match serde_json::from_str(line) {
                Ok(r) => r,
                Err(e) => {
                    log::warn!(
                        "{}:{}: skipping corrupt cache line: {e}",
                        path.display(),
                        i + 1
                    );
                    continue;
                }
            };
            insert_checked(&mut records, record)?;
        }
        Ok(KappaCache { path, records })
    }

    /// Cache at `$CAYDEN_KAPPA_CACHE`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        std::env::var_os(CACHE_ENV).map(Self::open).transpose()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, d: u32, n: u64) -> Option<&KappaRecord> {
        self.records.get(&(d, n))
    }

    pub fn records(&self) -> impl Iterator<Item = &KappaRecord> {
        self.records.values()
    }

    /// Appends a record. A repeat of a known value is ignored; a different
    /// value for a known key is [`Error::InconsistentCache`].
    pub fn put(&mut self, record: KappaRecord) -> Result<()> {
        if !insert_checked(&mut self.records, record.clone())? {
            return Ok(());
        }
        let line = serde_json::to_string(&record).map_err(|e| Error::Io(e.to_string()))?;
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(f, "{line}")?;
        Ok(())
    }
}

/// Returns whether the record was new.
fn insert_checked(records: &mut BTreeMap<(u32, u64), KappaRecord>, r: KappaRecord) -> Result<bool> {
    match records.get(&(r.d, r.n)) {
        Some(old) if old.kappa != r.kappa => Err(Error::InconsistentCache {
            key: key_name(r.d, r.n),
            stored: old.kappa,
            new: r.kappa,
        }),
        Some(_) => Ok(false),
        None => {
            records.insert((r.d, r.n), r);
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kappa::{kappa, SearchOptions, Symmetry};

    fn record(d: u32, n: u64) -> KappaRecord {
        let o = SearchOptions {
            jobs: 1,
            symmetry: Symmetry::Units,
            prune: true,
            prune_conjectural: false,
        };
        kappa(d, n, &o).unwrap().record(&o)
    }

    #[test]
    fn round_trip_and_append() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kappa.jsonl");
        let mut c = KappaCache::open(&path).unwrap();
        assert!(c.get(2, 12).is_none());
        c.put(record(2, 12)).unwrap();
        c.put(record(2, 12)).unwrap();
        c.put(record(3, 16)).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
        let c = KappaCache::open(&path).unwrap();
        assert_eq!(c.get(3, 16).unwrap().kappa, 3);
        assert_eq!(c.records().count(), 2);
    }

    #[test]
    fn corrupt_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kappa.jsonl");
        let good = serde_json::to_string(&record(2, 12)).unwrap();
        fs::write(&path, format!("{{\"d\":2,\"n\"\n{good}\nnot json\n")).unwrap();
        let c = KappaCache::open(&path).unwrap();
        assert_eq!(c.records().count(), 1);
    }

    #[test]
    fn conflicting_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kappa.jsonl");
        let mut c = KappaCache::open(&path).unwrap();
        let r = record(2, 12);
        c.put(r.clone()).unwrap();
        let mut bad = r.clone();
        bad.kappa += 1;
        assert!(matches!(
            c.put(bad.clone()),
            Err(Error::InconsistentCache { .. })
        ));
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str(&serde_json::to_string(&bad).unwrap());
        text.push('\n');
        fs::write(&path, text).unwrap();
        assert_eq!(
            KappaCache::open(&path).unwrap_err(),
            Error::InconsistentCache {
                key: "d=2,n=12".into(),
                stored: r.kappa,
                new: r.kappa + 1
            }
        );
    }
}

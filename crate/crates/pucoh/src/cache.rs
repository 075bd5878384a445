//! Disk cache for computed slices.
//!
//! One file per (kind, parameter, degree, ring), name-encoded. The header
//! line pins the schema version, the parameters and a hash of the active
//! generator table; the payload is one canonically serialized polynomial
//! per line. Entries that fail any header or payload check are discarded
//! and recomputed, never trusted. Writes go through a temp file plus an
//! atomic rename so degreewise parallel producers never publish a torn
//! file.

use crate::ring::{parse, serialize, GeneratorTable, Polynomial};
use crate::scalar::CoeffRing;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Debug)]
pub struct CacheDir {
    root: PathBuf,
}

impl CacheDir {
    pub fn new(root: impl Into<PathBuf>) -> CacheDir {
        CacheDir { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn file_path(&self, kind: &str, param: usize, degree: usize, ring: CoeffRing) -> PathBuf {
        self.root
            .join(format!("{kind}_p{param}_d{degree}_{}.slice", ring.name()))
    }

    fn header(kind: &str, param: usize, degree: usize, ring: CoeffRing, table: &GeneratorTable) -> String {
        format!(
            "{SCHEMA_VERSION};kind={kind};p={param};deg={degree};ring={};gens={:016x}",
            ring.name(),
            table.content_hash()
        )
    }

    /// Load a cached list of polynomials; `None` on any mismatch or parse
    /// failure.
    pub fn load(
        &self,
        kind: &str,
        param: usize,
        degree: usize,
        ring: CoeffRing,
        table: &Arc<GeneratorTable>,
    ) -> Option<Vec<Polynomial>> {
        let path = self.file_path(kind, param, degree, ring);
        let text = fs::read_to_string(path).ok()?;
        let mut lines = text.lines();
        let header = lines.next()?;
        if header != Self::header(kind, param, degree, ring, table) {
            return None;
        }
        let mut polys = Vec::new();
        let mut terminated = false;
        for line in lines {
            if line == "end" {
                terminated = true;
                break;
            }
            polys.push(parse(table, ring, line).ok()?);
        }
        terminated.then_some(polys)
    }

    /// Write a slice atomically (temp file then rename).
    pub fn store(
        &self,
        kind: &str,
        param: usize,
        degree: usize,
        ring: CoeffRing,
        table: &Arc<GeneratorTable>,
        polys: &[Polynomial],
    ) {
        if fs::create_dir_all(&self.root).is_err() {
            return;
        }
        let path = self.file_path(kind, param, degree, ring);
        let mut body = Self::header(kind, param, degree, ring, table);
        body.push('\n');
        for p in polys {
            body.push_str(&serialize(p));
            body.push('\n');
        }
        body.push_str("end\n");
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        if fs::write(&tmp, body).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }

    /// Fetch-or-compute wrapper used by the slice producers.
    pub fn cached(
        cache: Option<&CacheDir>,
        kind: &str,
        param: usize,
        degree: usize,
        ring: CoeffRing,
        table: &Arc<GeneratorTable>,
        compute: impl FnOnce() -> Vec<Polynomial>,
    ) -> Vec<Polynomial> {
        if let Some(dir) = cache {
            if let Some(hit) = dir.load(kind, param, degree, ring, table) {
                return hit;
            }
        }
        let polys = compute();
        if let Some(dir) = cache {
            dir.store(kind, param, degree, ring, table, &polys);
        }
        polys
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Parity;

    fn table() -> Arc<GeneratorTable> {
        GeneratorTable::new(vec![("s1", 2, Parity::Even), ("s2", 4, Parity::Even)])
    }

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheDir::new(dir.path());
        let t = table();
        let p = parse(&t, CoeffRing::Z, "-1*s1^2 + 3*s2").unwrap();
        cache.store("k", 3, 4, CoeffRing::Z, &t, &[p.clone()]);
        assert_eq!(cache.load("k", 3, 4, CoeffRing::Z, &t), Some(vec![p]));

        // flip a payload byte: entry must be discarded
        let path = dir.path().join("k_p3_d4_Z.slice");
        let mut bytes = fs::read(&path).unwrap();
        let n = bytes.len();
        bytes[n - 8] = b'?';
        fs::write(&path, bytes).unwrap();
        assert_eq!(cache.load("k", 3, 4, CoeffRing::Z, &t), None);
    }

    #[test]
    fn table_hash_mismatch_discards() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheDir::new(dir.path());
        let t = table();
        cache.store("k", 3, 0, CoeffRing::Z, &t, &[Polynomial::one(&t, CoeffRing::Z)]);
        let other = GeneratorTable::new(vec![("s1", 2, Parity::Even), ("s2", 4, Parity::Even), ("s3", 6, Parity::Even)]);
        assert_eq!(cache.load("k", 3, 0, CoeffRing::Z, &other), None);
    }

    #[test]
    fn truncated_file_discards() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheDir::new(dir.path());
        let t = table();
        cache.store("k", 3, 4, CoeffRing::Z, &t, &[Polynomial::one(&t, CoeffRing::Z)]);
        let path = dir.path().join("k_p3_d4_Z.slice");
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.lines().next().unwrap()).unwrap();
        assert_eq!(cache.load("k", 3, 4, CoeffRing::Z, &t), None);
    }
}

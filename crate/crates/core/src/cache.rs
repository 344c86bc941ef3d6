//! On-disk cache of bases, differential matrices and subspaces.
//!
//! One text file per key. The file starts with a header naming the format
//! version, artifact kind, model, `n`, `p` and `q`; entries whose header does
//! not match the requested key are ignored and recomputed. Rational entries
//! are written as exact `p/q` strings. Files are written to a temporary name
//! and renamed into place, so concurrent writers of one key leave a single
//! complete entry.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::exterior::Monomial;
use crate::linalg::{SparseMatrix, SparseVec, SubspaceBasis};
use crate::model::{BidegreeBasis, ModelId};
use crate::rational::Rational;

/// Bumped whenever bases, orderings or the file layout change.
pub const CACHE_VERSION: u32 = 1;

const MAGIC: &str = "ellconf-cache";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub kind: String,
    pub model: ModelId,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl CacheKey {
    pub fn new(kind: &str, model: ModelId, n: usize, p: usize, q: usize) -> Self {
        CacheKey {
            kind: kind.to_string(),
            model,
            n,
            p,
            q,
        }
    }

    fn file_name(&self) -> String {
        format!("{}-{}-n{}-p{}-q{}.txt", self.kind, self.model, self.n, self.p, self.q)
    }

    fn header(&self, version: u32) -> String {
        format!(
            "{MAGIC} {version}\nkind {}\nmodel {}\nn {}\np {}\nq {}\n",
            self.kind, self.model, self.n, self.p, self.q
        )
    }
}

/// A directory of cache entries. Failures to write disable the cache with a
/// warning instead of failing the computation.
#[derive(Debug)]
pub struct DiskCache {
    dir: PathBuf,
    version: u32,
    enabled: AtomicBool,
    counter: AtomicUsize,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache::with_version(dir, CACHE_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: u32) -> Self {
        let dir = dir.into();
        let enabled = match fs::create_dir_all(&dir) {
            Ok(()) => true,
            Err(e) => {
                log::warn!("cache directory {} unusable ({e}); caching disabled", dir.display());
                false
            }
        };
        DiskCache {
            dir,
            version,
            enabled: AtomicBool::new(enabled),
            counter: AtomicUsize::new(0),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled.load(Ordering::Relaxed)
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// Body of the entry for `key`, if present with a matching header.
    pub fn load_text(&self, key: &CacheKey) -> Option<String> {
        if !self.is_enabled() {
            return None;
        }
        let text = fs::read_to_string(self.path(key)).ok()?;
        let header = key.header(self.version);
        let body = text.strip_prefix(&header)?;
        let body = body.strip_suffix("end\n")?;
        Some(body.to_string())
    }

    pub fn store_text(&self, key: &CacheKey, body: &str) {
        if !self.is_enabled() {
            return;
        }
        let unique = self.counter.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            key.file_name(),
            std::process::id(),
            unique
        ));
        let contents = format!("{}{body}end\n", key.header(self.version));
        let result = fs::write(&tmp, contents).and_then(|()| fs::rename(&tmp, self.path(key)));
        if let Err(e) = result {
            let _ = fs::remove_file(&tmp);
            log::warn!("cannot write cache entry in {} ({e}); caching disabled", self.dir.display());
            self.enabled.store(false, Ordering::Relaxed);
        }
    }

    pub fn load_matrix(&self, key: &CacheKey) -> Option<SparseMatrix> {
        let body = self.load_text(key)?;
        match matrix_from_text(&body) {
            Ok(m) => Some(m),
            Err(e) => {
                log::warn!("ignoring corrupt cache entry {}: {e}", key.file_name());
                None
            }
        }
    }

    pub fn store_matrix(&self, key: &CacheKey, matrix: &SparseMatrix) {
        self.store_text(key, &matrix_to_text(matrix));
    }

    pub fn load_subspace(&self, key: &CacheKey, ambient: usize) -> Option<SubspaceBasis> {
        let body = self.load_text(key)?;
        match subspace_from_text(&body) {
            Ok(s) if s.ambient_dim() == ambient => Some(s),
            Ok(_) => None,
            Err(e) => {
                log::warn!("ignoring corrupt cache entry {}: {e}", key.file_name());
                None
            }
        }
    }

    pub fn store_subspace(&self, key: &CacheKey, space: &SubspaceBasis) {
        self.store_text(key, &subspace_to_text(space));
    }

    pub fn load_basis(&self, key: &CacheKey) -> Option<BidegreeBasis> {
        let body = self.load_text(key)?;
        basis_from_text(key.n, key.p, key.q, &body).ok()
    }

    pub fn store_basis(&self, key: &CacheKey, basis: &BidegreeBasis) {
        self.store_text(key, &basis_to_text(basis));
    }
}

fn parse_usize(token: Option<&str>, what: &str) -> Result<usize> {
    token
        .ok_or_else(|| Error::Cache(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Cache(format!("bad {what}")))
}

fn vector_to_line(v: &SparseVec, out: &mut String) {
    let mut first = true;
    for (k, c) in v.iter() {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{k}:{}", c.to_fraction_string());
    }
    out.push('\n');
}

fn vector_from_line(line: &str) -> Result<SparseVec> {
    let mut entries = Vec::new();
    for token in line.split_whitespace() {
        let (k, c) = token
            .split_once(':')
            .ok_or_else(|| Error::Cache(format!("bad entry '{token}'")))?;
        let k: usize = k.parse().map_err(|_| Error::Cache(format!("bad index '{k}'")))?;
        let c: Rational = c.parse().map_err(|_| Error::Cache(format!("bad value '{c}'")))?;
        entries.push((k, c));
    }
    Ok(SparseVec::from_entries(entries))
}

/// `rows R` / `cols C` followed by one line per column.
pub fn matrix_to_text(m: &SparseMatrix) -> String {
    let mut out = format!("rows {}\ncols {}\n", m.rows(), m.cols());
    for v in m.column_vectors() {
        vector_to_line(v, &mut out);
    }
    out
}

pub fn matrix_from_text(text: &str) -> Result<SparseMatrix> {
    let mut lines = text.lines();
    let rows = parse_usize(lines.next().and_then(|l| l.strip_prefix("rows ")), "row count")?;
    let cols = parse_usize(lines.next().and_then(|l| l.strip_prefix("cols ")), "column count")?;
    let columns = lines.map(vector_from_line).collect::<Result<Vec<_>>>()?;
    if columns.len() != cols {
        return Err(Error::Cache(format!("expected {cols} columns, found {}", columns.len())));
    }
    SparseMatrix::from_columns(rows, columns).map_err(|e| Error::Cache(e.to_string()))
}

/// `ambient D` / `dim k` followed by the echelon vectors.
pub fn subspace_to_text(s: &SubspaceBasis) -> String {
    let mut out = format!("ambient {}\ndim {}\n", s.ambient_dim(), s.dim());
    for v in s.vectors() {
        vector_to_line(v, &mut out);
    }
    out
}

pub fn subspace_from_text(text: &str) -> Result<SubspaceBasis> {
    let mut lines = text.lines();
    let ambient = parse_usize(lines.next().and_then(|l| l.strip_prefix("ambient ")), "ambient")?;
    let dim = parse_usize(lines.next().and_then(|l| l.strip_prefix("dim ")), "dimension")?;
    let vectors = lines.map(vector_from_line).collect::<Result<Vec<_>>>()?;
    let space = SubspaceBasis::from_vectors(ambient, vectors.clone()).map_err(|e| Error::Cache(e.to_string()))?;
    if space.dim() != dim || space.vectors() != vectors.as_slice() {
        return Err(Error::Cache("stored vectors are not a reduced echelon basis".into()));
    }
    Ok(space)
}

/// One monomial bitmask per line.
pub fn basis_to_text(b: &BidegreeBasis) -> String {
    let mut out = format!("dim {}\n", b.dim());
    for e in b.elements() {
        let _ = writeln!(out, "{}", e.monomial.0);
    }
    out
}

pub fn basis_from_text(n: usize, p: usize, q: usize, text: &str) -> Result<BidegreeBasis> {
    let mut lines = text.lines();
    let dim = parse_usize(lines.next().and_then(|l| l.strip_prefix("dim ")), "dimension")?;
    let monomials = lines
        .map(|l| l.trim().parse::<u64>().map(Monomial).map_err(|_| Error::Cache(format!("bad monomial '{l}'"))))
        .collect::<Result<Vec<_>>>()?;
    if monomials.len() != dim {
        return Err(Error::Cache("basis length mismatch".into()));
    }
    BidegreeBasis::from_monomials(n, p, q, &monomials)
}

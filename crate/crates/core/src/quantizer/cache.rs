use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::QuantKind;
use crate::error::{LabError, Result};

const MAGIC: &[u8; 8] = b"MAGRES01";

/// Identity of a cached matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CacheKey {
    pub model: String,
    pub kind: QuantKind,
    pub half_width: f64,
    pub points: usize,
    pub h: f64,
    pub r: f64,
}

impl CacheKey {
    /// Canonical text form; floats are written by their bit patterns.
    pub fn canonical(&self) -> String {
        format!(
            "model={};kind={};L={:016x};N={};h={:016x};R={:016x}",
            self.model,
            self.kind.name(),
            self.half_width.to_bits(),
            self.points,
            self.h.to_bits(),
            self.r.to_bits()
        )
    }

    fn file_name(&self) -> String {
        format!("{}.mat", hex::encode(&Sha256::digest(self.canonical().as_bytes())[..16]))
    }
}

/// Directory of matrices stored as a header (magic, key, dimension) followed by
/// row-major little-endian `(re, im)` pairs.
#[derive(Clone, Debug)]
pub struct MatrixCache {
    dir: PathBuf,
}

impl MatrixCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(MatrixCache { dir: dir.as_ref().to_path_buf() })
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    pub fn store(&self, key: &CacheKey, m: &DMatrix<Complex64>) -> Result<()> {
        if m.nrows() != m.ncols() || m.nrows() != key.points {
            return Err(LabError::Cache(format!("matrix shape {}x{} does not match N = {}", m.nrows(), m.ncols(), key.points)));
        }
        let text = key.canonical();
        let mut bytes = Vec::with_capacity(32 + text.len() + 16 * m.len());
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&(text.len() as u32).to_le_bytes());
        bytes.extend_from_slice(text.as_bytes());
        bytes.extend_from_slice(&(m.nrows() as u64).to_le_bytes());
        for j in 0..m.nrows() {
            for k in 0..m.ncols() {
                bytes.extend_from_slice(&m[(j, k)].re.to_le_bytes());
                bytes.extend_from_slice(&m[(j, k)].im.to_le_bytes());
            }
        }
        let target = self.path(key);
        let tmp = target.with_extension("tmp");
        fs::File::create(&tmp)?.write_all(&bytes)?;
        fs::rename(tmp, target)?;
        Ok(())
    }

    /// The cached matrix, or `None` when absent. A file whose header does not
    /// match the key is an error.
    pub fn load(&self, key: &CacheKey) -> Result<Option<DMatrix<Complex64>>> {
        let bytes = match fs::read(self.path(key)) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let bad = |why: &str| LabError::Cache(format!("{}: {why}", self.path(key).display()));
        let mut at = 0usize;
        let mut take = |n: usize| -> Result<&[u8]> {
            let s = bytes.get(at..at + n).ok_or_else(|| bad("truncated"))?;
            at += n;
            Ok(s)
        };
        if take(8)? != MAGIC {
            return Err(bad("bad magic"));
        }
        let len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        if take(len)? != key.canonical().as_bytes() {
            return Err(bad("key mismatch"));
        }
        let n = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
        if n != key.points {
            return Err(bad("dimension mismatch"));
        }
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let re = f64::from_le_bytes(take(8)?.try_into().unwrap());
                let im = f64::from_le_bytes(take(8)?.try_into().unwrap());
                m[(j, k)] = Complex64::new(re, im);
            }
        }
        if at != bytes.len() {
            return Err(bad("trailing bytes"));
        }
        Ok(Some(m))
    }
}

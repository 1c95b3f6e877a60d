//! On-disk store for differential matrices, one file per degree.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use cotor_core::{DegreeBasis, Differential, SparseMatrixF3, ENGINE_VERSION};

pub struct MatrixCache {
    dir: PathBuf,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(SparseMatrixF3),
    Missing,
    Stale,
    Corrupt(String),
}

impl MatrixCache {
    /// Creates the directory if needed.
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(MatrixCache { dir: dir.to_path_buf() })
    }

    pub fn path(&self, n: u32) -> PathBuf {
        self.dir.join(format!("d{n:03}.gf3"))
    }

    pub fn key(d: &Differential, n: u32) -> String {
        format!("cotor {ENGINE_VERSION} {} degree {n}", d.fingerprint())
    }

    pub fn lookup(&self, key: &str, n: u32, rows: usize, cols: usize) -> Lookup {
        let text = match fs::read_to_string(self.path(n)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Lookup::Missing,
            Err(e) => return Lookup::Corrupt(e.to_string()),
        };
        let Some((head, body)) = text.split_once('\n') else {
            return Lookup::Corrupt("missing header".into());
        };
        if head.strip_prefix("# ") != Some(key) {
            return Lookup::Stale;
        }
        match SparseMatrixF3::from_text(body) {
            Ok(m) if m.n_rows() == rows && m.n_cols() == cols => Lookup::Hit(m),
            Ok(m) => Lookup::Corrupt(format!(
                "shape {}x{}, expected {rows}x{cols}",
                m.n_rows(),
                m.n_cols()
            )),
            Err(e) => Lookup::Corrupt(e.to_string()),
        }
    }

    pub fn store(&self, key: &str, n: u32, m: &SparseMatrixF3) -> io::Result<()> {
        let tmp = self.dir.join(format!(".d{n:03}.tmp{}", std::process::id()));
        fs::write(&tmp, format!("# {key}\n{}", m.to_text()))?;
        fs::rename(tmp, self.path(n))
    }

    /// d_n for n in 0..=max, reading what is valid and rebuilding the rest.
    pub fn matrices(&self, d: &Differential, max: u32, warn: &mut dyn FnMut(String)) -> Vec<SparseMatrixF3> {
        let bases: Vec<DegreeBasis> = (0..=max + 1).map(DegreeBasis::new).collect();
        (0..=max)
            .map(|n| {
                let (src, tgt) = (&bases[n as usize], &bases[n as usize + 1]);
                let key = Self::key(d, n);
                match self.lookup(&key, n, tgt.dim(), src.dim()) {
                    Lookup::Hit(m) => return m,
                    Lookup::Missing => {}
                    Lookup::Stale => warn(format!(
                        "cache entry {} has a different fingerprint; rebuilding",
                        self.path(n).display()
                    )),
                    Lookup::Corrupt(why) => warn(format!(
                        "cache entry {} is corrupt ({why}); rebuilding",
                        self.path(n).display()
                    )),
                }
                let m = d.matrix(src, tgt);
                if let Err(e) = self.store(&key, n, &m) {
                    warn(format!("could not write {}: {e}", self.path(n).display()));
                }
                m
            })
            .collect()
    }
}

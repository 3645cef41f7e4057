//! Content-addressed disk cache of q-expansions, keyed by (form id, precision).
//! Entries are stored in the `n,coefficient` CSV format.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use anyhow::{Context, Result};
use eqmf_core::{QSeries, Rational};
use sha2::{Digest, Sha256};

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, form: &str, prec: usize) -> PathBuf {
        let digest = Sha256::digest(format!("{form}\n{prec}").as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{hex}.csv"))
    }

    /// A missing or unreadable entry is a miss.
    pub fn get(&self, form: &str, prec: usize) -> Option<QSeries> {
        let text = fs::read_to_string(self.path(form, prec)).ok()?;
        let series = parse_csv(&text)?;
        (series.prec() == prec).then_some(series)
    }

    /// Writes to a temporary file and renames it into place, so concurrent
    /// writers never expose a partial entry.
    pub fn put(&self, form: &str, prec: usize, series: &QSeries) -> Result<()> {
        let target = self.path(form, prec);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(to_csv(series).as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }

    pub fn get_or_compute(
        &self,
        form: &str,
        prec: usize,
        compute: impl FnOnce() -> eqmf_core::Result<QSeries>,
    ) -> eqmf_core::Result<QSeries> {
        if let Some(s) = self.get(form, prec) {
            return Ok(s);
        }
        let s = compute()?;
        self.store(form, prec, &s);
        Ok(s)
    }

    /// `put`, demoting failure to a warning: the cache is only an optimisation.
    pub fn store(&self, form: &str, prec: usize, series: &QSeries) {
        if let Err(e) = self.put(form, prec, series) {
            eprintln!("warning: cache write failed: {e:#}");
        }
    }
}

pub fn to_csv(series: &QSeries) -> String {
    let mut out = String::from("n,coefficient\n");
    for (n, c) in series.coeffs().iter().enumerate() {
        out.push_str(&format!("{n},{c}\n"));
    }
    out
}

pub fn parse_csv(text: &str) -> Option<QSeries> {
    let mut lines = text.lines();
    if lines.next()? != "n,coefficient" {
        return None;
    }
    let mut coeffs = Vec::new();
    for (i, line) in lines.enumerate() {
        let (n, c) = line.split_once(',')?;
        if n.parse::<usize>().ok()? != i {
            return None;
        }
        coeffs.push(c.parse::<Rational>().ok()?);
    }
    let prec = coeffs.len();
    QSeries::new(coeffs, prec).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use eqmf_core::eisenstein;

    #[test]
    fn csv_round_trip() {
        let e4 = eisenstein(4, 6).unwrap().series;
        let text = to_csv(&e4);
        assert!(text.starts_with("n,coefficient\n0,1\n1,240\n"));
        assert_eq!(parse_csv(&text).unwrap(), e4);
        assert!(parse_csv("n,coef\n0,1\n").is_none());
        assert!(parse_csv("n,coefficient\n1,1\n").is_none());
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let e6 = eisenstein(6, 5).unwrap().series;
        assert!(cache.get("E6", 5).is_none());
        cache.put("E6", 5, &e6).unwrap();
        assert_eq!(cache.get("E6", 5).unwrap(), e6);
        assert!(cache.get("E6", 4).is_none());
        let mut calls = 0;
        let s = cache
            .get_or_compute("E6", 5, || {
                calls += 1;
                Ok(e6.clone())
            })
            .unwrap();
        assert_eq!((s, calls), (e6, 0));
    }
}

//! On-disk cache of cohomology reports, keyed by content hash.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use torivan::cohomology::CohomologyReport;
use torivan::{Fan, ToricDivisor};

/// `sha256` over the compact JSON of fan, divisor coefficients and margin.
pub fn cache_key(fan: &Fan, d: &ToricDivisor, margin: u32) -> String {
    let material = json!({
        "fan": fan.to_json(),
        "divisor": d.coeffs_json(),
        "margin": margin,
    });
    hex::encode(Sha256::digest(material.to_string().as_bytes()))
}

pub struct ReportCache {
    dir: PathBuf,
}

impl ReportCache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(ReportCache {
            dir: dir.to_path_buf(),
        })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, re-validated. Unreadable or invalid entries are
    /// treated as misses.
    pub fn get(&self, key: &str) -> Option<CohomologyReport> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        CohomologyReport::from_json(&v).ok()
    }

    pub fn put(&self, key: &str, report: &CohomologyReport) -> Result<()> {
        let path = self.path(key);
        let tmp = self
            .dir
            .join(format!("{key}.json.tmp{}", std::process::id()));
        fs::write(&tmp, report.to_json().to_string())
            .with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

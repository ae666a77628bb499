use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::error::CliResult;

/// Seventeen significant digits, enough to recover any `f64` exactly.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt_sig17(x: Option<f64>) -> String {
    x.map(sig17).unwrap_or_default()
}

/// `path` with `suffix` appended to the full file name.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).context("serializing JSON")?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn csv_writer(path: &Path) -> CliResult<csv::Writer<File>> {
    Ok(csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?)
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(())
}

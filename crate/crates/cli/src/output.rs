use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use domsearch::problems::{ProblemDefinition, Sense};

use crate::args::OUTPUT_ROOT_ENV;
use crate::error::{CliError, CliResult};

/// Version of every JSON document the tool writes.
pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Objectives in the problem's native sense.
pub fn native(problem: &ProblemDefinition, minimized: &[f64]) -> Vec<f64> {
    match problem.sense() {
        Sense::Min => minimized.to_vec(),
        Sense::Max => minimized.iter().map(|v| -v).collect(),
    }
}

pub fn header(prefix: &str, count: usize) -> impl Iterator<Item = String> + '_ {
    (1..=count).map(move |i| format!("{prefix}{i}"))
}

pub fn default_dir(name: &str) -> PathBuf {
    let root = std::env::var_os(OUTPUT_ROOT_ENV).map_or_else(|| PathBuf::from("runs"), PathBuf::from);
    root.join(name)
}

fn is_artifact(name: &str) -> bool {
    let numbered = |prefix: &str, ext: &str| {
        name.strip_prefix(prefix)
            .and_then(|r| r.strip_suffix(ext))
            .is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
    };
    matches!(
        name,
        "manifest.json" | "summary.csv" | "true_front.csv" | "approx_front.csv"
    ) || numbered("history_", ".json")
        || numbered("front_", ".csv")
        || numbered("front_", ".json")
}

/// Creates `dir`. A non-empty directory is refused unless `force`, in which
/// case the tool's own artifacts in it are removed first.
pub fn prepare_dir(dir: &Path, force: bool) -> CliResult<()> {
    if dir.exists() {
        if !dir.is_dir() {
            return Err(CliError::Usage(format!(
                "{} exists and is not a directory",
                dir.display()
            )));
        }
        let entries: Vec<_> = fs::read_dir(dir)?.collect::<Result<_, _>>()?;
        if !entries.is_empty() {
            if !force {
                return Err(CliError::Usage(format!(
                    "output directory {} is not empty (pass --force to overwrite)",
                    dir.display()
                )));
            }
            for e in entries {
                if e.file_type()?.is_file() && e.file_name().to_str().is_some_and(is_artifact) {
                    fs::remove_file(e.path())?;
                }
            }
        }
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(text.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing JSON")?;
    text.push('\n');
    write_text(path, &text)
}

/// Writes rows of already formatted fields as CSV.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header).context("writing CSV")?;
    for r in rows {
        w.write_record(r).context("writing CSV")?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

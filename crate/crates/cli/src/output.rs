//! Writing reports to disk.

use std::fs;
use std::path::{Path, PathBuf};

use crate::commands::Report;

/// Files written for one report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Written {
    pub json: PathBuf,
    pub csv: Option<PathBuf>,
}

/// Writes `<dir>/<name>.json` and, when the report has one, `<dir>/<name>.csv`.
pub fn write_report(dir: &Path, name: &str, report: &Report) -> std::io::Result<Written> {
    fs::create_dir_all(dir)?;
    let json = dir.join(format!("{name}.json"));
    let mut text = serde_json::to_string_pretty(&report.json).expect("reports serialize");
    text.push('\n');
    fs::write(&json, text)?;
    let csv = match &report.csv {
        Some(body) => {
            let path = dir.join(format!("{name}.csv"));
            fs::write(&path, body)?;
            Some(path)
        }
        None => None,
    };
    Ok(Written { json, csv })
}

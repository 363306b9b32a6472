//! Runs every `*.sfm` file of a directory, in file-name order. `include`
//! paths resolve relative to the including file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::{parse_scenario_with, run_scenario, ScenarioResult};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    /// Parse or runtime error, rendered.
    pub result: Result<ScenarioResult, String>,
}

impl CorpusEntry {
    pub fn passed(&self) -> bool {
        matches!(&self.result, Ok(r) if r.passed != Some(false))
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusReport {
    pub entries: Vec<CorpusEntry>,
}

impl CorpusReport {
    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.passed()).count()
    }

    /// Entries that errored or did not meet their expectation.
    pub fn failed(&self) -> usize {
        self.entries.len() - self.passed()
    }
}

/// Lists the scenario files of `dir`, sorted by name.
pub fn scenario_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "sfm"))
        .collect();
    files.sort();
    Ok(files)
}

/// Parses and runs one file, resolving includes next to it.
pub fn run_file(path: &Path) -> io::Result<CorpusEntry> {
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let resolve = |rel: &str| fs::read_to_string(base.join(rel)).map_err(|e| e.to_string());
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let result = match parse_scenario_with(&text, &resolve) {
        Err(e) => Err(format!("parse error at {e}")),
        Ok(doc) => run_scenario(&doc).map_err(|e| e.to_string()),
    };
    Ok(CorpusEntry { name, result })
}

pub fn run_corpus(dir: &Path) -> io::Result<CorpusReport> {
    let entries = scenario_files(dir)?
        .iter()
        .map(|p| run_file(p))
        .collect::<io::Result<Vec<_>>>()?;
    Ok(CorpusReport { entries })
}

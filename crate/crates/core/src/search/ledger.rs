//! Append-only JSON-lines record of search results, one line per run.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AnnealConfig, SearchOutcome};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Results are grouped by conjecture (with m or norm), n and d.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub conjecture: String,
    pub n: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub cell: Cell,
    pub seed: u64,
    pub budget: u64,
    pub best_margin: Option<Rational>,
    pub best_float_score: Option<f64>,
    pub certificates: usize,
    pub discrepancies: usize,
    pub zero_rhs_atoms: u64,
    pub config: AnnealConfig,
}

impl LedgerEntry {
    pub fn from_outcome(outcome: &SearchOutcome) -> Self {
        let p = &outcome.problem;
        LedgerEntry {
            cell: Cell {
                conjecture: p.conjecture.label(),
                n: p.n,
                d: p.d,
            },
            seed: p.seed,
            budget: p.budget,
            best_margin: outcome.best_margin().cloned(),
            best_float_score: outcome.best.as_ref().map(|b| b.float_score),
            certificates: outcome.certificates.len(),
            discrepancies: outcome.discrepancies.len(),
            zero_rhs_atoms: outcome.best.as_ref().map_or(0, |b| b.exact.zero_rhs_atoms),
            config: outcome.config.clone(),
        }
    }

    pub fn is_c1(&self) -> bool {
        self.cell.conjecture.starts_with("C1")
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}

pub fn append_ledger(path: &Path, entry: &LedgerEntry) -> Result<()> {
    let line = serde_json::to_string(entry).map_err(|e| io_error(path, e))?;
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_error(path, e))?;
    writeln!(file, "{line}").map_err(|e| io_error(path, e))
}

pub fn read_ledger(path: &Path) -> Result<Vec<LedgerEntry>> {
    let file = std::fs::File::open(path).map_err(|e| io_error(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_error(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry = serde_json::from_str(&line)
            .map_err(|e| io_error(path, format!("line {}: {e}", i + 1)))?;
        out.push(entry);
    }
    Ok(out)
}

/// The entry with the largest exact margin in each cell; earlier lines win ties.
pub fn best_per_cell(entries: &[LedgerEntry]) -> BTreeMap<Cell, LedgerEntry> {
    let mut best: BTreeMap<Cell, LedgerEntry> = BTreeMap::new();
    for e in entries {
        let replace = match best.get(&e.cell) {
            None => true,
            Some(b) => e.best_margin > b.best_margin,
        };
        if replace {
            best.insert(e.cell.clone(), e.clone());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::norm::NormSpec;
    use crate::search::{anneal, Conjecture, SearchProblem};

    #[test]
    fn ledger_appends_and_reduces() {
        let dir = std::env::temp_dir().join(format!("lolab-ledger-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ledger.jsonl");
        let _ = std::fs::remove_file(&path);
        let e = Engine::default();
        let cfg = AnnealConfig::default();
        for seed in [1, 2] {
            let p = SearchProblem {
                conjecture: Conjecture::c2(NormSpec::L1),
                n: 4,
                d: 2,
                budget: 200,
                seed,
            };
            let out = anneal(&e, &p, &cfg).unwrap();
            append_ledger(&path, &LedgerEntry::from_outcome(&out)).unwrap();
        }
        let entries = read_ledger(&path).unwrap();
        assert_eq!(entries.len(), 2);
        let cells = best_per_cell(&entries);
        assert_eq!(cells.len(), 1);
        let only = cells.values().next().unwrap();
        assert!(entries.iter().all(|x| x.best_margin <= only.best_margin));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

//! Weight lists from the command line or from files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use lolab_core::rational::parse_vec_list;
use lolab_core::{Rational, VecD};

/// Inline weights: `1,1/2,1`, `(1,0),(0,1)` or a JSON array.
pub fn parse_inline(text: &str) -> Result<Vec<VecD>> {
    parse_vec_list(text).with_context(|| format!("cannot parse weights {:?}", text.trim()))
}

/// A JSON array of vectors, or CSV with one vector per line.
pub fn read_weights_file(path: &Path) -> Result<Vec<VecD>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read weights file {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        return parse_inline(&text);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("malformed CSV in {}", path.display()))?;
        let coords = record
            .iter()
            .filter(|c| !c.is_empty())
            .map(|c| {
                c.parse::<Rational>()
                    .with_context(|| format!("cannot parse {c:?}"))
            })
            .collect::<Result<Vec<_>>>()?;
        if !coords.is_empty() {
            out.push(VecD::new(coords));
        }
    }
    Ok(out)
}

pub fn weights(inline: Option<&str>, file: Option<&Path>) -> Result<Vec<VecD>> {
    let ws = match (inline, file) {
        (Some(t), None) => parse_inline(t)?,
        (None, Some(p)) => read_weights_file(p)?,
        _ => bail!("give exactly one of --weights and --weights-file"),
    };
    if ws.is_empty() {
        bail!("no weights given");
    }
    Ok(ws)
}

pub fn write_weights_file(path: &Path, weights: &[VecD]) -> Result<()> {
    let text = serde_json::to_string_pretty(weights)?;
    std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

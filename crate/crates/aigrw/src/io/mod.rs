//! Circuit file I/O: ASCII AIGER and ISCAS-style bench.

mod aiger;
mod bench;

pub use aiger::{read_aag, read_aag_named, write_aag};
pub use bench::{read_bench, read_bench_named};

use std::path::Path;

use crate::aig::Aig;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    AagAscii,
    Bench,
}

pub fn format_of(path: &Path) -> Result<Format> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("aag") => Ok(Format::AagAscii),
        Some("bench") => Ok(Format::Bench),
        other => Err(Error::Unsupported(format!(
            "unknown circuit extension {other:?} for {} (use .aag or .bench)",
            path.display()
        ))),
    }
}

/// Reads a circuit file, dispatching on the extension.
pub fn read_circuit(path: &Path) -> Result<Aig> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("circuit");
    let mut g = match format_of(path)? {
        Format::AagAscii => read_aag_named(&text, &path.display().to_string())?,
        Format::Bench => read_bench_named(&text, &path.display().to_string())?,
    };
    g.set_name(name);
    Ok(g)
}

/// Writes a circuit as ASCII AIGER regardless of extension.
pub fn write_circuit(path: &Path, aig: &Aig) -> Result<()> {
    std::fs::write(path, write_aag(aig))?;
    Ok(())
}

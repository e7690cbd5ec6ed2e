//! Deterministic file output: atomic writes plus the CSV and manifest
//! renderers. Every float is printed with 17 significant digits so the files
//! round-trip exactly and identical runs produce identical bytes.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use halfwave::SampledField2D;

/// Writes `content` to `path` atomically: the bytes land in a sibling
/// temporary file first and are renamed into place, so a reader never sees a
/// half-written report.
pub fn write_atomic(path: &Path, content: &str) -> io::Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
    })?;
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)
}

/// Renders a field in the `x,t,u` layout: a header row, then one node per
/// line, row-major in space.
pub fn field_to_csv(u: &SampledField2D) -> String {
    let grid = u.grid();
    let mut out = String::from("x,t,u\n");
    for i in 0..grid.m() {
        for j in 0..grid.n() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                grid.x(i),
                grid.t(j),
                u.at(i, j)
            ));
        }
    }
    out
}

/// Renders a residual history: the dual-norm residual before the first time
/// sweep and after each completed sweep.
pub fn residuals_to_csv(trace: &[f64]) -> String {
    let mut out = String::from("sweep,dual_residual\n");
    for (k, r) in trace.iter().enumerate() {
        out.push_str(&format!("{k},{r:.16e}\n"));
    }
    out
}

/// Accumulates `key = value` manifest lines in insertion order, so the last
/// line pushed is the terminal row of the file.
#[derive(Debug, Default)]
pub struct Manifest {
    lines: Vec<String>,
}

impl Manifest {
    pub fn new() -> Manifest {
        Manifest::default()
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push(format!("{key} = {value}"));
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

//! CPLEX-LP text export of a [`CoverModel`] and import of `name=value`
//! solution listings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::model::CoverModel;
use crate::error::{Error, Result};

const TERMS_PER_LINE: usize = 8;

fn push_terms(out: &mut String, terms: impl Iterator<Item = String>) {
    let mut first = true;
    for (k, t) in terms.enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        if !first {
            out.push_str(" + ");
        }
        out.push_str(&t);
        first = false;
    }
    if first {
        out.push('0');
    }
}

/// Renders the model. `start` (model-space multiplicities) is written as a
/// comment block only.
pub fn export_lp(model: &CoverModel, start: Option<&[u32]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ disk multi-cover model: {} variables, {} rows", model.num_vars(), model.num_rows());
    if let Some(s) = start {
        out.push_str("\\ heuristic start:\n");
        for (v, &k) in s.iter().enumerate() {
            if k > 0 {
                let _ = writeln!(out, "\\   x{v} = {k}");
            }
        }
    }
    out.push_str("Minimize\n obj: ");
    push_terms(&mut out, model.costs.iter().enumerate().map(|(v, c)| format!("{c:?} x{v}")));
    out.push_str("\nSubject To\n");
    for row in &model.rows {
        let _ = write!(out, " {}: ", row.name());
        push_terms(&mut out, row.vars.iter().map(|v| format!("x{v}")));
        let _ = writeln!(out, " {} {}", row.sense, row.rhs);
    }
    out.push_str("Bounds\n");
    for (v, u) in model.upper.iter().enumerate() {
        let _ = writeln!(out, " 0 <= x{v} <= {u}");
    }
    out.push_str(if model.is_binary() { "Binary\n" } else { "General\n" });
    for v in 0..model.num_vars() {
        let _ = writeln!(out, " x{v}");
    }
    out.push_str("End\n");
    out
}

pub fn write_lp(model: &CoverModel, start: Option<&[u32]>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, export_lp(model, start)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `name = value` lines (blank lines and lines starting with `#` or
/// `\` are skipped) into a model-space assignment and validates it.
/// Unlisted variables are 0.
pub fn import_solution(text: &str, model: &CoverModel) -> Result<Vec<u32>> {
    let mut x = vec![0u32; model.num_vars()];
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = k + 1;
        if line.is_empty() || line.starts_with('#') || line.starts_with('\\') {
            continue;
        }
        let err = |reason: String| Error::Parse { line: lineno, reason };
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected name=value, got {line:?}")))?;
        let (name, value) = (name.trim(), value.trim());
        let v: usize = name
            .strip_prefix('x')
            .and_then(|s| s.parse().ok())
            .filter(|&v| v < model.num_vars())
            .ok_or_else(|| err(format!("unknown variable {name:?}")))?;
        let f: f64 = value
            .parse()
            .map_err(|_| err(format!("value {value:?} is not a number")))?;
        let r = f.round();
        if !(f.is_finite() && (f - r).abs() <= 1e-6 && r >= 0.0) {
            return Err(err(format!("value {value} of {name} is not a nonnegative integer")));
        }
        x[v] = r as u32;
    }
    model.check(&x)?;
    Ok(x)
}

pub fn read_solution(path: impl AsRef<Path>, model: &CoverModel) -> Result<Vec<u32>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    import_solution(&text, model)
}

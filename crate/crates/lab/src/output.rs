//! Writing outcomes to disk: the table, a run manifest, violations and plots.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::experiments::Outcome;
use crate::settings::{Settings, CLOSED_FORM_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Parameters, tolerances, grid settings and version for one run.
pub fn manifest(o: &Outcome, params: &Value, s: &Settings) -> Value {
    json!({
        "command": o.name,
        "version": env!("CARGO_PKG_VERSION"),
        "parameters": params,
        "settings": s,
        "tolerances": {
            "slack": s.tol,
            "closed_form": CLOSED_FORM_TOL,
            "wigner_negativity": s.neg_tol,
        },
        "grid": {
            "points": s.grid_points,
            "extent_scale": s.extent_scale,
            "wigner_points": s.wigner_points,
        },
        "passed": o.passed(),
        "violations": o.violations.len(),
        "summary": o.summary,
    })
}

pub fn write_table<W: Write>(o: &Outcome, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => o.table.write_csv(out),
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &o.table.to_json())?;
            writeln!(out)?;
            Ok(())
        }
    }
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// Writes `<name>.<csv|json>`, `<name>.manifest.json`, and when applicable
/// `<name>.violations.json` and `<name>.svg`. Returns the paths written.
pub fn write_outcome(o: &Outcome, dir: &Path, format: Format, plot: bool, params: &Value, s: &Settings) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let table_path = dir.join(format!("{}.{}", o.name, format.extension()));
    let file = fs::File::create(&table_path).with_context(|| format!("creating {}", table_path.display()))?;
    write_table(o, format, std::io::BufWriter::new(file))?;
    written.push(table_path);

    let manifest_path = dir.join(format!("{}.manifest.json", o.name));
    write_json(&manifest_path, &manifest(o, params, s))?;
    written.push(manifest_path);

    if !o.violations.is_empty() {
        let p = dir.join(format!("{}.violations.json", o.name));
        write_json(&p, &o.violations)?;
        written.push(p);
    }
    if let (true, Some(svg)) = (plot, &o.plot) {
        let p = dir.join(format!("{}.svg", o.name));
        fs::write(&p, svg.render()).with_context(|| format!("writing {}", p.display()))?;
        written.push(p);
    }
    Ok(written)
}

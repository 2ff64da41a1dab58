//! CSV files for canonical series and grand-canonical curves.
//!
//! Every file starts with `#` lines: the tool name and version, the run
//! configuration as JSON, and a `# meta` JSON object the readers rely on.

use std::fmt::Write as _;
use std::path::Path;

use homperc_core::ensemble::GrandCanonicalCurve;
use homperc_core::sweep::{CanonicalSeries, Observable};
use homperc_core::PGrid;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub n: usize,
    pub k: usize,
    pub num_vertices: usize,
    pub sweeps: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub id: String,
    pub n: usize,
    pub k: usize,
    pub p_min: f64,
    pub dp: f64,
    pub count: usize,
    pub m: f64,
}

/// The `#` header shared by all outputs.
pub fn header(kind: &str, config: &serde_json::Value) -> String {
    format!("# homperc {VERSION} {kind}\n# config {config}\n")
}

const SERIES_COLUMNS: &str = "x,kprime,se,PE,se,PA,se,S1,se,S2,se,S3,se";
const CURVE_COLUMNS: &str = "p,PE,se,PA,se,RE,se,S1,se,S2,se,S3,se";

fn push_row(out: &mut String, lead: &str, cols: &[&Observable], i: usize) {
    out.push_str(lead);
    for c in cols {
        let _ = write!(out, ",{},{}", c.mean[i], c.se[i]);
    }
    out.push('\n');
}

pub fn series_to_string(s: &CanonicalSeries, config: &serde_json::Value) -> String {
    let meta = SeriesMeta {
        n: s.n,
        k: s.k,
        num_vertices: s.num_vertices,
        sweeps: s.sweeps,
    };
    let mut out = header("canonical", config);
    let _ = writeln!(
        out,
        "# meta {}",
        serde_json::to_string(&meta).expect("plain struct")
    );
    out.push_str(SERIES_COLUMNS);
    out.push('\n');
    let cols = [&s.kprime, &s.erased, &s.incomplete, &s.s1, &s.s2, &s.s3];
    for x in 0..=s.n {
        push_row(&mut out, &x.to_string(), &cols, x);
    }
    out
}

pub fn curve_to_string(c: &GrandCanonicalCurve, config: &serde_json::Value) -> String {
    let meta = CurveMeta {
        id: c.id.clone(),
        n: c.n,
        k: c.k,
        p_min: c.grid.p_min,
        dp: c.grid.dp,
        count: c.grid.count,
        m: c.m,
    };
    let mut out = header("curve", config);
    let _ = writeln!(
        out,
        "# meta {}",
        serde_json::to_string(&meta).expect("plain struct")
    );
    out.push_str(CURVE_COLUMNS);
    out.push('\n');
    let cols = [&c.pe, &c.pa, &c.re, &c.s1, &c.s2, &c.s3];
    for i in 0..c.len() {
        push_row(&mut out, &c.p(i).to_string(), &cols, i);
    }
    out
}

struct Parsed<M> {
    meta: M,
    rows: Vec<Vec<f64>>,
}

fn parse_table<M: for<'de> Deserialize<'de>>(
    text: &str,
    columns: &str,
    name: &str,
) -> Result<Parsed<M>, String> {
    let mut meta = None;
    let mut rows = Vec::new();
    let mut seen_columns = false;
    let width = columns.split(',').count();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        if let Some(c) = line.strip_prefix('#') {
            if let Some(json) = c.trim_start().strip_prefix("meta ") {
                meta = Some(
                    serde_json::from_str(json).map_err(|e| format!("line {no}: bad meta: {e}"))?,
                );
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !seen_columns {
            if line.trim() != columns {
                return Err(format!("line {no}: expected {name} columns `{columns}`"));
            }
            seen_columns = true;
            continue;
        }
        let row = line
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("line {no}: bad number `{t}`"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != width {
            return Err(format!(
                "line {no}: expected {width} fields, found {}",
                row.len()
            ));
        }
        rows.push(row);
    }
    let meta = meta.ok_or_else(|| "missing `# meta` line".to_string())?;
    Ok(Parsed { meta, rows })
}

fn column(rows: &[Vec<f64>], c: usize) -> Observable {
    Observable {
        mean: rows.iter().map(|r| r[c]).collect(),
        se: rows.iter().map(|r| r[c + 1]).collect(),
    }
}

pub fn parse_series(text: &str) -> Result<CanonicalSeries, String> {
    let Parsed { meta, rows } = parse_table::<SeriesMeta>(text, SERIES_COLUMNS, "canonical")?;
    if rows.len() != meta.n + 1 {
        return Err(format!(
            "expected {} rows for n = {}, found {}",
            meta.n + 1,
            meta.n,
            rows.len()
        ));
    }
    Ok(CanonicalSeries {
        n: meta.n,
        k: meta.k,
        num_vertices: meta.num_vertices,
        sweeps: meta.sweeps,
        kprime: column(&rows, 1),
        erased: column(&rows, 3),
        incomplete: column(&rows, 5),
        s1: column(&rows, 7),
        s2: column(&rows, 9),
        s3: column(&rows, 11),
    })
}

pub fn parse_curve(text: &str) -> Result<GrandCanonicalCurve, String> {
    let Parsed { meta, rows } = parse_table::<CurveMeta>(text, CURVE_COLUMNS, "curve")?;
    if rows.len() != meta.count {
        return Err(format!(
            "expected {} grid rows, found {}",
            meta.count,
            rows.len()
        ));
    }
    Ok(GrandCanonicalCurve {
        id: meta.id,
        n: meta.n,
        k: meta.k,
        grid: PGrid {
            p_min: meta.p_min,
            dp: meta.dp,
            count: meta.count,
        },
        m: meta.m,
        pe: column(&rows, 1),
        pa: column(&rows, 3),
        re: column(&rows, 5),
        s1: column(&rows, 7),
        s2: column(&rows, 9),
        s3: column(&rows, 11),
    })
}

pub fn read_series(path: &Path) -> Result<CanonicalSeries, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_series(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn read_curve(path: &Path) -> Result<GrandCanonicalCurve, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_curve(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

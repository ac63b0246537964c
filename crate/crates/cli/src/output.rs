use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use monolab_core::monogamy::{BaseValues, MonogamyReport};
use monolab_core::state::{white_noise_mix, MultipartiteState};
use monolab_core::MeasureKind;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Echo of the command and its parsed configuration, attached to every JSON
/// output. Contains nothing run-dependent, so equal configs give equal bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance<'a, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub config: &'a C,
}

impl<'a, C: Serialize> Provenance<'a, C> {
    pub fn new(command: &'a str, seed: u64, config: &'a C) -> Self {
        Self {
            tool: "monolab",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            config,
        }
    }
}

/// Writes `content` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, content),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn write_file(path: &Path, content: &str) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, content).map_err(io)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One `(p, r)` point of a noise sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub r: f64,
    pub measure: String,
    pub whole: f64,
    pub parts: Vec<f64>,
    pub delta: f64,
}

impl SweepRow {
    fn new(p: f64, report: MonogamyReport) -> Self {
        Self {
            p,
            r: report.exponent,
            measure: report.measure.to_string(),
            whole: report.whole,
            parts: report.parts,
            delta: report.score,
        }
    }
}

/// Scores of `(1 − p)ρ + p·I/d` for every `p`, then every `r`. Noise points
/// run in parallel; rows come back in grid order.
pub fn sweep_rows(
    kind: MeasureKind,
    state: &MultipartiteState,
    focus: usize,
    p_grid: &[f64],
    r_grid: &[f64],
) -> CliResult<Vec<SweepRow>> {
    let blocks = p_grid
        .par_iter()
        .map(|&p| {
            let base = BaseValues::compute(kind, &white_noise_mix(state, p)?, focus)?;
            r_grid
                .iter()
                .map(|&r| Ok(SweepRow::new(p, base.report_at(r)?)))
                .collect::<monolab_core::Result<Vec<_>>>()
        })
        .collect::<monolab_core::Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// `p,r,measure,whole,part_1..part_n,delta`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let n = rows.first().map_or(0, |r| r.parts.len());
    let mut out = String::from("p,r,measure,whole");
    for j in 1..=n {
        let _ = write!(out, ",part_{j}");
    }
    out.push_str(",delta\n");
    for row in rows {
        let _ = write!(out, "{},{},{},{}", float(row.p), float(row.r), row.measure, float(row.whole));
        for &x in &row.parts {
            let _ = write!(out, ",{}", float(x));
        }
        let _ = writeln!(out, ",{}", float(row.delta));
    }
    out
}

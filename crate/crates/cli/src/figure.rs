//! Data behind the three published plots.
//!
//! Figures 1 and 2 sweep white noise on GHZ and W states for negativity and
//! logarithmic negativity at `r ∈ {1, 2}`; figure 3 scans the exponent of
//! logarithmic negativity on the pure W state. The plots give ranges but not
//! sampling density, so the grids below are our choice and are recorded in
//! the sidecar JSON.

use std::path::PathBuf;

use monolab_core::monogamy::BaseValues;
use monolab_core::state::{ghz, w, MultipartiteState};
use monolab_core::{MeasureKind, MeasureTag};
use serde::Serialize;

use crate::args::FigureArgs;
use crate::error::{CliError, CliResult};
use crate::grid::range;
use crate::output::{sweep_csv, sweep_rows, to_json, write_file, Provenance, SweepRow};

const FOCUS: usize = 0;
const RSTAR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    GhzNoise,
    WNoise,
    WExponent,
}

impl FigureId {
    pub fn parse(id: &str) -> CliResult<Self> {
        match id.trim() {
            "1" => Ok(Self::GhzNoise),
            "2" => Ok(Self::WNoise),
            "3" => Ok(Self::WExponent),
            other => Err(CliError::usage(format!("unknown figure '{other}' (expected 1, 2 or 3)"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Self::GhzNoise => 1,
            Self::WNoise => 2,
            Self::WExponent => 3,
        }
    }

    fn state_name(self) -> &'static str {
        match self {
            Self::GhzNoise => "ghz3",
            _ => "w3",
        }
    }

    fn state(self) -> CliResult<MultipartiteState> {
        Ok(match self {
            Self::GhzNoise => ghz(3)?,
            _ => w(3)?,
        })
    }

    fn measures(self) -> Vec<MeasureKind> {
        match self {
            Self::WExponent => vec![MeasureKind::raw(MeasureTag::LogNegativity)],
            _ => vec![
                MeasureKind::raw(MeasureTag::Negativity),
                MeasureKind::raw(MeasureTag::LogNegativity),
            ],
        }
    }

    pub fn default_p_grid(self) -> Vec<f64> {
        match self {
            Self::WExponent => vec![0.0],
            _ => range(0.0, 1.0, 0.02).expect("valid range"),
        }
    }

    pub fn default_r_grid(self) -> Vec<f64> {
        match self {
            Self::WExponent => range(1.0, 1.2, 0.002).expect("valid range"),
            _ => vec![1.0, 2.0],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub negativity: &'static str,
    pub log_negativity: &'static str,
    pub log_base: u32,
    pub normalized: bool,
    pub noise: &'static str,
    pub score: &'static str,
    pub focus: usize,
}

const CONVENTIONS: Conventions = Conventions {
    negativity: "sum of |negative eigenvalues| of the partial transpose (Bell pair = 0.5)",
    log_negativity: "log2(2N + 1) = log2 of the trace norm of the partial transpose",
    log_base: 2,
    normalized: false,
    noise: "(1 - p) rho + p I/d",
    score: "delta = Q(A:BC)^r - Q(AB)^r - Q(AC)^r",
    focus: FOCUS,
};

#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    /// Adjacent grid exponents between which `delta` changes sign.
    pub grid_bracket: Option<(f64, f64)>,
    pub r_star: Option<f64>,
    pub r_star_tol: f64,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    figure: u8,
    state: &'static str,
    measures: Vec<String>,
    rows: usize,
    p_grid: &'a [f64],
    r_grid: &'a [f64],
    grid_choice: &'static str,
    conventions: &'a Conventions,
    #[serde(skip_serializing_if = "Option::is_none")]
    crossing: Option<Crossing>,
    provenance: Provenance<'a, FigureArgs>,
}

pub struct FigureData {
    pub id: FigureId,
    pub rows: Vec<SweepRow>,
    pub p_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub crossing: Option<Crossing>,
}

fn crossing(state: &MultipartiteState, rows: &[SweepRow], r_grid: &[f64]) -> CliResult<Crossing> {
    let grid_bracket = rows
        .windows(2)
        .find(|w| w[0].p == w[1].p && w[0].delta < 0.0 && w[1].delta >= 0.0)
        .map(|w| (w[0].r, w[1].r));
    let base = BaseValues::compute(MeasureKind::raw(MeasureTag::LogNegativity), state, FOCUS)?;
    let lo = r_grid[0];
    let hi = r_grid[r_grid.len() - 1];
    let r_star = if lo < hi {
        base.critical_exponent((lo, hi), RSTAR_TOL).ok().map(|c| c.r_star)
    } else {
        None
    };
    Ok(Crossing {
        grid_bracket,
        r_star,
        r_star_tol: RSTAR_TOL,
    })
}

pub fn compute(id: FigureId, p_grid: Option<Vec<f64>>, r_grid: Option<Vec<f64>>) -> CliResult<FigureData> {
    let p_grid = p_grid.unwrap_or_else(|| id.default_p_grid());
    let r_grid = r_grid.unwrap_or_else(|| id.default_r_grid());
    let state = id.state()?;
    let mut rows = Vec::new();
    for kind in id.measures() {
        rows.extend(sweep_rows(kind, &state, FOCUS, &p_grid, &r_grid)?);
    }
    let crossing = match id {
        FigureId::WExponent if p_grid == [0.0] => Some(crossing(&state, &rows, &r_grid)?),
        _ => None,
    };
    Ok(FigureData {
        id,
        rows,
        p_grid,
        r_grid,
        crossing,
    })
}

/// Writes `figure<id>.csv` and `figure<id>.json` into `--out`; returns both paths.
pub fn figure(args: &FigureArgs) -> CliResult<(PathBuf, PathBuf)> {
    let id = FigureId::parse(&args.id)?;
    let data = compute(
        id,
        args.p_grid.as_ref().map(|g| g.0.clone()),
        args.r_grid.as_ref().map(|g| g.0.clone()),
    )?;
    let csv_path = args.out.join(format!("figure{}.csv", id.number()));
    let json_path = args.out.join(format!("figure{}.json", id.number()));
    let sidecar = Sidecar {
        figure: id.number(),
        state: id.state_name(),
        measures: id.measures().iter().map(ToString::to_string).collect(),
        rows: data.rows.len(),
        p_grid: &data.p_grid,
        r_grid: &data.r_grid,
        grid_choice: match id {
            FigureId::WExponent => "r from 1 to 1.2 in steps of 0.002 at p = 0",
            _ => "p from 0 to 1 in steps of 0.02, r in {1, 2}",
        },
        conventions: &CONVENTIONS,
        crossing: data.crossing.clone(),
        provenance: Provenance::new("figure", 0, args),
    };
    write_file(&csv_path, &sweep_csv(&data.rows))?;
    write_file(&json_path, &to_json(&sidecar))?;
    Ok((csv_path, json_path))
}

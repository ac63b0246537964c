use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monolab_core::MeasureTag;
use serde::{Serialize, Serializer};

use crate::grid;

/// Strictly increasing list of numbers: `a,b,c` or `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        grid::parse_grid(s).map(Grid).map_err(|e| e.to_string())
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UsizeList(pub Vec<usize>);

impl FromStr for UsizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        grid::parse_usize_list(s).map(UsizeList).map_err(|e| e.to_string())
    }
}

impl Serialize for UsizeList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket(pub f64, pub f64);

impl FromStr for Bracket {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        grid::parse_bracket(s)
            .map(|(lo, hi)| Bracket(lo, hi))
            .map_err(|e| e.to_string())
    }
}

impl Serialize for Bracket {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

fn parse_measure(s: &str) -> Result<MeasureTag, String> {
    s.parse().map_err(|e: monolab_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyTag {
    Lemmas,
    Raising,
    Lowering,
    Functional,
    Mixed,
    Strong,
    Hierarchy,
    ProbeHighPower,
    Search,
}

impl fmt::Display for VerifyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "monolab",
    version,
    about = "Monogamy scores, critical exponents and sampling audits for small multipartite states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monogamy score over a white-noise grid and a list of exponents (CSV or JSON).
    Sweep(SweepArgs),
    /// Locate the exponent where the monogamy score changes sign.
    Rstar(RstarArgs),
    /// Run a verification suite and write its JSON summary.
    Verify(VerifyArgs),
    /// Regenerate the data behind figure 1, 2 or 3.
    Figure(FigureArgs),
    /// Write a state in the JSON interchange format.
    StateExport(ExportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep(_) => "sweep",
            Command::Rstar(_) => "rstar",
            Command::Verify(_) => "verify",
            Command::Figure(_) => "figure",
            Command::StateExport(_) => "state-export",
        }
    }
}

/// Where the state (or ensemble) comes from. Exactly one of `--state` and
/// `--state-file` must be given, except for suites that need no state.
#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArgs {
    /// ghz<n>, w<n>, classical, random-pure or random-mixed.
    #[arg(long)]
    pub state: Option<String>,
    /// JSON file with {dims, rho_re, rho_im}.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    /// Subsystem dimensions for random states, e.g. 2,2,2.
    #[arg(long)]
    pub dims: Option<UsizeList>,
    /// Ranks for random-mixed states; cycles through the list (default 1..=d).
    #[arg(long)]
    pub rank: Option<UsizeList>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeasureArgs {
    /// concurrence, negativity, lognegativity, eof, discord or classical.
    #[arg(long, value_parser = parse_measure, default_value = "concurrence")]
    pub measure: MeasureTag,
    /// Rescale so that a Bell pair scores 1 (affects negativity only).
    #[arg(long)]
    pub normalized: bool,
    /// Index of the subsystem whose entanglement is distributed.
    #[arg(long, default_value_t = 0)]
    pub focus: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// White-noise weights p in (1 − p)ρ + p·I/d.
    #[arg(long, default_value = "0")]
    pub p_grid: Grid,
    /// Exponents r.
    #[arg(long, visible_alias = "r", default_value = "1")]
    pub r_grid: Grid,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RstarArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Search interval lo,hi; the score must change sign across it.
    #[arg(long)]
    pub bracket: Bracket,
    /// Final bracket width.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Text summary by default; json adds the bisection trace, csv lists it.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub tag: VerifyTag,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Ensemble size for random states; restarts for `search`.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Hypothesis exponent (raising, lowering, search).
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Target exponents; the first is used by strong and hierarchy.
    #[arg(long)]
    pub alpha: Option<Grid>,
    /// Exponents probed by probe-high-power.
    #[arg(long, default_value = "2,3,4")]
    pub r_grid: Grid,
    /// Turns a named state into a white-noise family.
    #[arg(long)]
    pub p_grid: Option<Grid>,
    /// Draws per inequality for `lemmas`.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Second party of the hierarchy chain.
    #[arg(long, default_value_t = 1)]
    pub partner: usize,
    /// Power m of the functional suite.
    #[arg(long, default_value_t = 2.0)]
    pub power: f64,
    /// Hill-climb steps per restart for `search`.
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    /// 1 (GHZ + noise), 2 (W + noise) or 3 (W, exponent scan).
    pub id: String,
    /// Override the noise grid.
    #[arg(long)]
    pub p_grid: Option<Grid>,
    /// Override the exponent grid.
    #[arg(long)]
    pub r_grid: Option<Grid>,
    /// Output directory for figure<id>.csv and figure<id>.json.
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExportArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

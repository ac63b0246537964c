//! Resolution of `--state`, `--state-file`, `--dims` and `--rank` into a
//! single state or a verification ensemble.

use monolab_core::linalg::DimSpec;
use monolab_core::state::{self, MultipartiteState};
use monolab_core::verifier::EnsembleSpec;
use monolab_core::RngSeed;

use crate::args::StateArgs;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    Ghz(usize),
    W(usize),
    Classical,
    RandomPure,
    RandomMixed,
}

impl NamedState {
    pub fn parse(name: &str) -> CliResult<Self> {
        let key = name.trim().to_ascii_lowercase();
        let parties = |digits: &str| -> CliResult<usize> {
            if digits.is_empty() {
                return Ok(3);
            }
            digits
                .parse()
                .map_err(|_| CliError::usage(format!("unknown state '{name}'")))
        };
        Ok(match key.as_str() {
            "classical" => Self::Classical,
            "random-pure" | "haar" => Self::RandomPure,
            "random-mixed" => Self::RandomMixed,
            k if k.starts_with("ghz") => Self::Ghz(parties(&k[3..])?),
            k if k.starts_with('w') => Self::W(parties(&k[1..])?),
            _ => return Err(CliError::usage(format!("unknown state '{name}'"))),
        })
    }

    fn fixed(&self) -> CliResult<Option<MultipartiteState>> {
        Ok(match *self {
            Self::Ghz(n) => Some(state::ghz(n)?),
            Self::W(n) => Some(state::w(n)?),
            Self::Classical => Some(state::classical_corr_state()),
            Self::RandomPure | Self::RandomMixed => None,
        })
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Named(NamedState),
    File(std::path::PathBuf),
}

impl StateArgs {
    pub fn source(&self) -> CliResult<Source> {
        match (&self.state, &self.state_file) {
            (Some(name), None) => Ok(Source::Named(NamedState::parse(name)?)),
            (None, Some(path)) => Ok(Source::File(path.clone())),
            (Some(_), Some(_)) => Err(CliError::usage(
                "--state and --state-file are mutually exclusive",
            )),
            (None, None) => Err(CliError::usage("one of --state or --state-file is required")),
        }
    }

    pub fn dim_spec(&self) -> CliResult<DimSpec> {
        match &self.dims {
            Some(d) => Ok(DimSpec::new(d.0.clone())?),
            None => Ok(DimSpec::qubits(3)),
        }
    }

    fn ranks(&self, dims: &DimSpec) -> Vec<usize> {
        match &self.rank {
            Some(r) => r.0.clone(),
            None => (1..=dims.total()).collect(),
        }
    }

    /// One state; random sources draw it from `--seed`.
    pub fn single(&self) -> CliResult<MultipartiteState> {
        let seed = RngSeed(self.seed);
        match self.source()? {
            Source::File(path) => Ok(MultipartiteState::load(&path).map_err(|e| {
                CliError::usage(format!("{}: {e}", path.display()))
            })?),
            Source::Named(named) => {
                if let Some(s) = named.fixed()? {
                    return Ok(s);
                }
                let dims = self.dim_spec()?;
                match named {
                    NamedState::RandomPure => Ok(state::haar_pure(&dims, seed)),
                    _ => {
                        let rank = self.ranks(&dims)[0];
                        Ok(state::random_mixed(&dims, rank, seed)?)
                    }
                }
            }
        }
    }

    /// A fixed state becomes a one-element ensemble, or a white-noise family
    /// when `p_grid` is given.
    pub fn ensemble(&self, count: usize, p_grid: Option<&[f64]>) -> CliResult<EnsembleSpec> {
        let source = self.source()?;
        if let Source::Named(named @ (NamedState::RandomPure | NamedState::RandomMixed)) = &source {
            if p_grid.is_some() {
                return Err(CliError::usage("--p-grid applies to named or file states only"));
            }
            if count == 0 {
                return Err(CliError::usage("--count must be positive"));
            }
            let dims = self.dim_spec()?;
            return Ok(match named {
                NamedState::RandomPure => EnsembleSpec::haar_pure(dims, count),
                _ => {
                    let ranks = self.ranks(&dims);
                    EnsembleSpec::random_mixed(dims, count, ranks)?
                }
            });
        }
        let label = match &source {
            Source::Named(_) => self.state.clone().unwrap_or_default(),
            Source::File(p) => p.display().to_string(),
        };
        let base = self.single()?;
        Ok(match p_grid {
            Some(p) => {
                if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                    return Err(CliError::usage("noise weights must lie in [0, 1]"));
                }
                EnsembleSpec::NoiseFamily {
                    label,
                    base,
                    p_grid: p.to_vec(),
                }
            }
            None => EnsembleSpec::Explicit {
                label,
                states: vec![base],
            },
        })
    }
}

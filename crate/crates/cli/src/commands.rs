use std::fmt::Write as _;

use monolab_core::measures::MeasureKind;
use monolab_core::monogamy::{critical_exponent, CriticalExponent};
use monolab_core::verifier::{self, SearchConfig, VerificationSummary};
use monolab_core::RngSeed;
use serde::Serialize;

use crate::args::{ExportArgs, Format, MeasureArgs, RstarArgs, SweepArgs, VerifyArgs, VerifyTag};
use crate::error::{CliError, CliResult};
use crate::output::{emit, float, sweep_csv, sweep_rows, to_json, Provenance, SweepRow};

impl MeasureArgs {
    pub fn kind(&self) -> MeasureKind {
        MeasureKind::new(self.measure, self.normalized)
    }
}

#[derive(Serialize)]
struct SweepJson<'a> {
    provenance: Provenance<'a, SweepArgs>,
    rows: &'a [SweepRow],
}

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    let state = args.state.single()?;
    let rows = sweep_rows(
        args.measure.kind(),
        &state,
        args.measure.focus,
        &args.p_grid.0,
        &args.r_grid.0,
    )?;
    let text = match args.format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => to_json(&SweepJson {
            provenance: Provenance::new("sweep", args.state.seed, args),
            rows: &rows,
        }),
    };
    emit(args.out.as_deref(), &text)
}

#[derive(Serialize)]
struct RstarJson<'a> {
    provenance: Provenance<'a, RstarArgs>,
    result: &'a CriticalExponent,
}

pub fn rstar_text(res: &CriticalExponent) -> String {
    format!(
        "measure: {}\nr_star: {}\nfinal_bracket: [{}, {}]\ndelta({}): {}\ndelta({}): {}\nbisection_steps: {}\n",
        res.measure,
        float(res.r_star),
        float(res.final_bracket.0),
        float(res.final_bracket.1),
        res.r_lo,
        float(res.delta_lo),
        res.r_hi,
        float(res.delta_hi),
        res.trace.len(),
    )
}

pub fn rstar(args: &RstarArgs) -> CliResult<()> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(CliError::usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let state = args.state.single()?;
    let res = critical_exponent(
        args.measure.kind(),
        &state,
        args.measure.focus,
        (args.bracket.0, args.bracket.1),
        args.tol,
    )?;
    let text = match args.format {
        None => rstar_text(&res),
        Some(Format::Json) => to_json(&RstarJson {
            provenance: Provenance::new("rstar", args.state.seed, args),
            result: &res,
        }),
        Some(Format::Csv) => {
            let mut s = String::from("step,lo,hi,mid,delta\n");
            for (i, st) in res.trace.iter().enumerate() {
                let _ = writeln!(s, "{i},{},{},{},{}", float(st.lo), float(st.hi), float(st.mid), float(st.delta));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)
}

fn alphas(args: &VerifyArgs, default: &[f64]) -> Vec<f64> {
    args.alpha.as_ref().map_or_else(|| default.to_vec(), |g| g.0.clone())
}

/// Runs the selected suite and returns its summary without writing it.
pub fn run_suite(args: &VerifyArgs) -> CliResult<VerificationSummary> {
    let seed = RngSeed(args.state.seed);
    let kind = args.measure.kind();
    let focus = args.measure.focus;
    let ensemble = || args.state.ensemble(args.count, args.p_grid.as_ref().map(|g| g.0.as_slice()));
    let single_alpha = || alphas(args, &[2.0])[0];
    Ok(match args.tag {
        VerifyTag::Lemmas => verifier::check_scalar_lemmas(args.samples, seed),
        VerifyTag::Raising => {
            verifier::verify_raising(kind, &ensemble()?, focus, args.r, &alphas(args, &[2.5, 3.0, 4.0]), seed)?
        }
        VerifyTag::Lowering => {
            verifier::verify_lowering(kind, &ensemble()?, focus, args.r, &alphas(args, &[0.5, 0.8]), seed)?
        }
        VerifyTag::Functional => verifier::verify_functional_lift(&ensemble()?, focus, args.power, seed)?,
        VerifyTag::Mixed => verifier::verify_mixed_lifting(kind, &ensemble()?, focus, seed)?,
        VerifyTag::Strong => verifier::verify_strong(kind, &ensemble()?, focus, single_alpha(), seed)?,
        VerifyTag::Hierarchy => {
            verifier::verify_hierarchy(kind, &ensemble()?, focus, args.partner, single_alpha(), seed)?
        }
        VerifyTag::ProbeHighPower => {
            verifier::probe_high_power_mixed(kind, &ensemble()?, focus, &args.r_grid.0, seed)?
        }
        VerifyTag::Search => {
            // --dims wins; otherwise the search space matches the given state
            let has_source = args.state.state.is_some() || args.state.state_file.is_some();
            let dims = if args.state.dims.is_none() && has_source {
                args.state.single()?.dims().clone()
            } else {
                args.state.dim_spec()?
            };
            let cfg = SearchConfig::new(args.count, args.steps);
            verifier::counterexample_search(kind, args.r, &dims, focus, &cfg, seed)?.summary
        }
    })
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let summary = run_suite(args)?;
    emit(args.out.as_deref(), &to_json(&summary))?;
    if summary.succeeded() {
        Ok(())
    } else {
        Err(CliError::Violation {
            tag: summary.tag.clone(),
            count: summary.violations,
            worst: summary.worst_margin,
        })
    }
}

pub fn state_export(args: &ExportArgs) -> CliResult<()> {
    let state = args.state.single()?;
    emit(args.out.as_deref(), &to_json(&state.to_file_format()))
}

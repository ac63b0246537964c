//! Parsing of numeric grids given on the command line.
//!
//! A grid is either a comma list (`1,1.5,2`) or an inclusive range
//! `start:stop:step`. Range points are rounded to 12 decimals so that
//! `0:1:0.1` yields exactly `0.3` rather than `0.30000000000000004`.

use crate::error::{CliError, CliResult};

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn number(s: &str) -> CliResult<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("'{s}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::usage(format!("'{s}' is not finite")))
    }
}

/// Inclusive range; the endpoint is kept when it lies within `1e-9 · step`
/// of a grid point.
pub fn range(start: f64, stop: f64, step: f64) -> CliResult<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(CliError::usage(format!(
            "range {start}:{stop}:{step} needs step > 0 and stop >= start"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(CliError::usage(format!("range {start}:{stop}:{step} is too long")));
    }
    Ok((0..=n).map(|i| round12(start + i as f64 * step)).collect())
}

pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, s] = parts[..] else {
            return Err(CliError::usage(format!(
                "range '{text}' must have the form start:stop:step"
            )));
        };
        range(number(a)?, number(b)?, number(s)?)?
    } else {
        text.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(number)
            .collect::<CliResult<Vec<_>>>()?
    };
    check_sorted(&values, text)?;
    Ok(values)
}

fn check_sorted(values: &[f64], text: &str) -> CliResult<()> {
    if values.is_empty() {
        return Err(CliError::usage(format!("grid '{text}' is empty")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::usage(format!(
            "grid '{text}' must be strictly increasing"
        )));
    }
    Ok(())
}

/// Two comma-separated numbers `lo,hi`.
pub fn parse_bracket(text: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    let [lo, hi] = parts[..] else {
        return Err(CliError::usage(format!("bracket '{text}' must be lo,hi")));
    };
    let (lo, hi) = (number(lo)?, number(hi)?);
    if lo >= hi {
        return Err(CliError::usage(format!("bracket '{text}' is empty")));
    }
    Ok((lo, hi))
}

pub fn parse_usize_list(text: &str) -> CliResult<Vec<usize>> {
    let out = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("'{t}' is not a non-negative integer")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if out.is_empty() {
        return Err(CliError::usage("empty integer list"));
    }
    Ok(out)
}

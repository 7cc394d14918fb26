//! Rate curves: the measured quantization error of the deterministic
//! quantizer against its certificates over a grid of `n`, with optional
//! random-sampling and grid-search comparisons.

mod baseline;
mod oracle;
mod slope;

pub use baseline::{random_empirical_error, BaselineStats};
pub use oracle::{
    brute_force_optimal_uniform, brute_force_optimal_uniform_with, OracleOutcome, SearchMethod,
};
pub use slope::{fit_log_log, fit_upper_half, SlopeFit};

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::quantization::quantize;
use crate::transport::exact_wasserstein;

/// Slack for the ordering checks between a row's columns.
const SANDWICH_TOL: f64 = 1e-9;

/// Ascending list of quantizer sizes, parsed from `4..100`, `3..41:2` or `8,16,32`.
/// Ranges include both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGrid(pub Vec<usize>);

impl FromStr for NGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("invalid n grid '{s}'"));
        let int = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let mut ns = if let Some((lo, rest)) = s.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (int(hi)?, int(step)?),
                None => (int(rest)?, 1),
            };
            let lo = int(lo)?;
            if step == 0 || lo > hi {
                return Err(bad());
            }
            (lo..=hi).step_by(step).collect::<Vec<_>>()
        } else {
            s.split(',').map(int).collect::<Result<Vec<_>>>()?
        };
        ns.sort_unstable();
        ns.dedup();
        if ns.is_empty() || ns[0] == 0 {
            return Err(Error::Config(format!("n grid '{s}' must contain only positive sizes")));
        }
        Ok(NGrid(ns))
    }
}

#[derive(Debug, Clone)]
pub struct RateConfig {
    pub p: f64,
    pub ns: Vec<usize>,
    /// Number of i.i.d. samples averaged for the random baseline.
    pub baseline_trials: Option<usize>,
    /// Grid spacing for the optimal-quantizer search.
    pub oracle_resolution: Option<f64>,
    pub seed: u64,
}

impl RateConfig {
    pub fn new(p: f64, ns: Vec<usize>) -> Self {
        RateConfig { p, ns, baseline_trials: None, oracle_resolution: None, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCurveRow {
    pub n: usize,
    /// Exact `W_p` between the quantizer and the measure.
    pub measured: f64,
    pub coupling_bound: f64,
    pub closed_form_bound: f64,
    pub random_baseline: Option<f64>,
    pub oracle_optimal: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateCurve {
    pub p: f64,
    pub rows: Vec<RateCurveRow>,
    pub measured_slope: Option<SlopeFit>,
    pub oracle_slope: Option<SlopeFit>,
    pub baseline_slope: Option<SlopeFit>,
}

fn row(rho: &DiscreteMeasure, n: usize, config: &RateConfig) -> Result<RateCurveRow> {
    let p = config.p;
    let quantizer = quantize(rho, n)?;
    let measured = exact_wasserstein(&quantizer.empirical_measure(), rho, p)?.value;
    let certs = quantizer.certificates(p)?;
    let random_baseline = match config.baseline_trials {
        Some(trials) => {
            let seed = config.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            Some(random_empirical_error(rho, n, p, trials, seed)?.mean)
        }
        None => None,
    };
    let oracle_optimal = match config.oracle_resolution {
        Some(res) => Some(brute_force_optimal_uniform_with(rho, n, p, res, &quantizer.centers)?.value),
        None => None,
    };

    let row = RateCurveRow {
        n,
        measured,
        coupling_bound: certs.coupling_bound,
        closed_form_bound: certs.closed_form_bound,
        random_baseline,
        oracle_optimal,
    };
    let slack = |x: f64| SANDWICH_TOL * x.abs().max(1.0);
    if row.measured > row.coupling_bound + slack(row.coupling_bound)
        || row.coupling_bound > row.closed_form_bound + slack(row.closed_form_bound)
        || row.oracle_optimal.is_some_and(|o| o > row.measured + slack(row.measured))
    {
        return Err(Error::Numerical(format!("bound ordering violated at n = {n}: {row:?}")));
    }
    Ok(row)
}

/// One row per `n`, in the order of `config.ns`. Fails with a numerical
/// error if any row breaks `oracle <= measured <= coupling <= closed form`.
pub fn run_rate_experiment(rho: &DiscreteMeasure, config: &RateConfig) -> Result<RateCurve> {
    if config.ns.is_empty() || config.ns.contains(&0) {
        return Err(Error::Config("n grid must be non-empty and positive".into()));
    }
    rho.ensure_probability()?;
    let rows = config.ns.par_iter().map(|&n| row(rho, n, config)).collect::<Result<Vec<_>>>()?;
    let series = |f: fn(&RateCurveRow) -> Option<f64>| -> Option<SlopeFit> {
        let pts: Vec<(usize, f64)> = rows.iter().filter_map(|r| f(r).map(|v| (r.n, v))).collect();
        fit_upper_half(&pts)
    };
    Ok(RateCurve {
        p: config.p,
        measured_slope: series(|r| Some(r.measured)),
        oracle_slope: series(|r| r.oracle_optimal),
        baseline_slope: series(|r| r.random_baseline),
        rows,
    })
}

/// Columns `n,measured,coupling_bound,closed_form_bound,random_baseline,oracle_optimal`;
/// missing values are empty fields.
pub fn write_rate_csv<W: Write>(curve: &RateCurve, writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "n",
        "measured",
        "coupling_bound",
        "closed_form_bound",
        "random_baseline",
        "oracle_optimal",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &curve.rows {
        out.write_record([
            r.n.to_string(),
            r.measured.to_string(),
            r.coupling_bound.to_string(),
            r.closed_form_bound.to_string(),
            opt(r.random_baseline),
            opt(r.oracle_optimal),
        ])?;
    }
    out.flush()?;
    Ok(())
}

//! Numerical checks of the bounds behind the matcher: trace-QAP eigenvalue
//! bounds, spreads and gaps, the spectral relaxation, clique counts and the
//! worst-to-best ratio bound.
//!
//! Each validator produces rows of `validator,param_set,statistic,value,bound,ok`.
//! Rows without a bound are evidence only and leave `bound` and `ok` empty.

pub mod counts;
pub mod linalg;
pub mod qap;
pub mod ratio;
pub mod spectral;
pub mod spread;

use std::fmt::Write as _;

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;

pub use counts::{clique_count_stats, expected_clique_count, percolation_threshold, CliqueCountStats};
pub use linalg::SymmetricMatrix;
pub use qap::{brute_force_trace_qap, trace_qap_bounds, BruteForceQap, TraceBounds};
pub use ratio::{psi, ratio_bound_experiment, RatioExperimentSpec, RatioReport};
pub use spectral::{lawler_spectral, talagrand_check, AffinityMatrix, LeadingEigen, TalagrandReport};
pub use spread::{finke_reduction, spread_and_gaps, spread_concentration, MatrixGenerator, NormKind, SpreadReport};

#[derive(Debug, Clone, PartialEq)]
pub struct ValidatorRow {
    pub validator: String,
    pub param_set: String,
    pub statistic: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub ok: Option<bool>,
}

impl ValidatorRow {
    fn new(validator: &str, params: &str, statistic: impl Into<String>, value: f64) -> Self {
        ValidatorRow {
            validator: validator.to_string(),
            param_set: params.to_string(),
            statistic: statistic.into(),
            value,
            bound: None,
            ok: None,
        }
    }

    fn checked(mut self, bound: f64, ok: bool) -> Self {
        self.bound = Some(bound);
        self.ok = Some(ok);
        self
    }

    /// `value <= bound`.
    fn at_most(self, bound: f64) -> Self {
        let ok = self.value <= bound;
        self.checked(bound, ok)
    }
}

pub const VALIDATOR_HEADER: &str = "validator,param_set,statistic,value,bound,ok";

pub fn validator_csv(rows: &[ValidatorRow]) -> String {
    let mut out = format!("{VALIDATOR_HEADER}\n");
    for r in rows {
        let bound = r.bound.map(|b| b.to_string()).unwrap_or_default();
        let ok = r.ok.map(|b| b.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{},{},{}", r.validator, r.param_set, r.statistic, r.value, bound, ok).unwrap();
    }
    out
}

/// Every validator name, in report order.
pub const VALIDATORS: &[&str] = &[
    "trace_qap",
    "gap_bound",
    "finke",
    "spread_concentration",
    "lawler",
    "talagrand",
    "clique_counts",
    "ratio_bound",
];

/// Runs one named validator at its default parameters.
pub fn run_validator(name: &str, seed: u64) -> Result<Vec<ValidatorRow>> {
    match name {
        "trace_qap" => trace_qap_rows(5, 200, seed),
        "gap_bound" => gap_rows(10, 1000, seed),
        "finke" => Ok(finke_rows(8, 500, seed)),
        "spread_concentration" => concentration_rows(20, 5000, seed),
        "lawler" => lawler_rows(6, 100, seed),
        "talagrand" => talagrand_rows(50, 2000, seed),
        "clique_counts" => clique_rows(10, 0.3, 3, 2000, seed),
        "ratio_bound" => ratio_rows(
            &RatioExperimentSpec {
                n: 6,
                lambda: 10.0,
                epsilon: 0.5,
                trials: 2000,
                seed,
            },
        ),
        other => Err(Error::config(format!(
            "unknown validator '{other}' (known: {})",
            VALIDATORS.join(", ")
        ))),
    }
}

pub fn trace_qap_rows(n: usize, pairs: usize, seed: u64) -> Result<Vec<ValidatorRow>> {
    let params = format!("n={n};pairs={pairs}");
    let results = (0..pairs as u64)
        .into_par_iter()
        .map(|i| -> Result<(bool, f64)> {
            let mut r = rng::seeded(rng::derive_seed(seed, i));
            let a = SymmetricMatrix::random_uniform(n, -1.0, 1.0, &mut r);
            let b = SymmetricMatrix::random_uniform(n, -1.0, 1.0, &mut r);
            let bounds = trace_qap_bounds(&a, &b)?;
            let bf = brute_force_trace_qap(&a, &b)?;
            let inside = bounds.lower <= bf.min + 1e-8 && bf.max <= bounds.upper + 1e-8;
            Ok((inside, bf.identity_residual))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = results.iter().filter(|r| !r.0).count() as f64;
    let residual = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(vec![
        ValidatorRow::new("trace_qap", &params, "sandwich_violations", violations).at_most(0.0),
        ValidatorRow::new("trace_qap", &params, "max_identity_residual", residual).at_most(1e-8),
    ])
}

pub fn gap_rows(n: usize, trials: usize, seed: u64) -> Result<Vec<ValidatorRow>> {
    let params = format!("n={n};trials={trials}");
    let results: Vec<(bool, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let a = MatrixGenerator::Uniform.sample(n, rng::derive_seed(seed, i));
            let s = spread_and_gaps(&a, NormKind::Operator2);
            (s.gap_bound_ok, (s.gap_sum - s.spread).abs())
        })
        .collect();
    let violations = results.iter().filter(|r| !r.0).count() as f64;
    let residual = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(vec![
        ValidatorRow::new("gap_bound", &params, "gap_bound_violations", violations).at_most(0.0),
        ValidatorRow::new("gap_bound", &params, "max_telescope_residual", residual).at_most(1e-10),
    ])
}

pub fn finke_rows(n: usize, trials: usize, seed: u64) -> Vec<ValidatorRow> {
    let params = format!("n={n};trials={trials}");
    let results: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let f = finke_reduction(&MatrixGenerator::Uniform.sample(n, rng::derive_seed(seed, i)));
            (f.spread_before, f.spread_after)
        })
        .collect();
    let reduced = results.iter().filter(|(b, a)| a < b).count() as f64 / trials as f64;
    let mean = |f: fn(&(f64, f64)) -> f64| results.iter().map(f).sum::<f64>() / trials as f64;
    vec![
        ValidatorRow::new("finke", &params, "fraction_reduced", reduced),
        ValidatorRow::new("finke", &params, "mean_spread_before", mean(|r| r.0)),
        ValidatorRow::new("finke", &params, "mean_spread_after", mean(|r| r.1)),
    ]
}

pub fn concentration_rows(n: usize, trials: usize, seed: u64) -> Result<Vec<ValidatorRow>> {
    let params = format!("n={n};trials={trials}");
    let t = spread_concentration(n, trials, seed, MatrixGenerator::Uniform)?;
    let mut rows = vec![
        ValidatorRow::new("spread_concentration", &params, "mean", t.mean),
        ValidatorRow::new("spread_concentration", &params, "std_dev", t.std_dev),
    ];
    for (eps, freq) in &t.tails {
        let row = ValidatorRow::new("spread_concentration", &params, format!("tail_{eps}sd"), *freq);
        // only the 3σ tail carries a sanity threshold
        rows.push(if *eps == 3.0 { row.at_most(0.05) } else { row });
    }
    Ok(rows)
}

pub fn lawler_rows(m: usize, trials: usize, seed: u64) -> Result<Vec<ValidatorRow>> {
    let params = format!("m={m};trials={trials}");
    let diffs = (0..trials as u64)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut r = rng::seeded(rng::derive_seed(seed, i));
            let s = SymmetricMatrix::from_fn(m, |_, _| r.random::<f64>());
            let e = lawler_spectral(&AffinityMatrix::from_rows(&s.to_dense())?)?;
            Ok((e.value - s.eigenvalues().last().copied().unwrap_or(0.0)).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    Ok(vec![ValidatorRow::new("lawler", &params, "max_diff_vs_jacobi", worst).at_most(1e-8)])
}

pub fn talagrand_rows(m: usize, trials: usize, seed: u64) -> Result<Vec<ValidatorRow>> {
    let params = format!("m={m};trials={trials}");
    let grid: Vec<f64> = (1..=6).map(f64::from).collect();
    let rep = talagrand_check(m, trials, &grid, seed)?;
    let mut rows = vec![ValidatorRow::new("talagrand", &params, "median_lambda1", rep.median)];
    for r in &rep.rows {
        rows.push(
            ValidatorRow::new("talagrand", &params, format!("tail_t{}", r.t), r.empirical)
                .checked(r.bound + 3.0 * r.std_error, r.ok),
        );
    }
    rows.push(ValidatorRow::new("talagrand", &params, "degree_violations", rep.degree_violations as f64).at_most(0.0));
    Ok(rows)
}

pub fn clique_rows(n: usize, p: f64, k: usize, trials: usize, seed: u64) -> Result<Vec<ValidatorRow>> {
    let params = format!("n={n};p={p};k={k};trials={trials}");
    let s = clique_count_stats(n, p, k, trials, seed)?;
    let se = (s.var / trials as f64).sqrt();
    let p_thr = percolation_threshold(n, k - 1, (k - 1).max(1));
    let thr = clique_count_stats(n, p_thr, k, trials, seed)?;
    let thr_params = format!("n={n};p={p_thr};k={k};trials={trials}");
    Ok(vec![
        ValidatorRow::new("clique_counts", &params, "mean_minus_expectation", (s.mean - s.expectation).abs())
            .checked(3.0 * se, s.mean_ok),
        ValidatorRow::new("clique_counts", &params, "max_count", s.max_count as f64).checked(s.bound, s.bound_ok),
        ValidatorRow::new("clique_counts", &thr_params, "var_over_mean", thr.poissonness),
    ])
}

pub fn ratio_rows(spec: &RatioExperimentSpec) -> Result<Vec<ValidatorRow>> {
    let params = format!("n={};lambda={};eps={};trials={}", spec.n, spec.lambda, spec.epsilon, spec.trials);
    let r = ratio_bound_experiment(spec)?;
    let mut within = ValidatorRow::new("ratio_bound", &params, "empirical_within", r.empirical);
    if !r.vacuous() {
        within = within.checked(r.psi.unwrap_or(f64::NAN), r.ok());
    }
    Ok(vec![
        within,
        ValidatorRow::new("ratio_bound", &params, "psi", r.psi.unwrap_or(f64::NAN)),
        ValidatorRow::new("ratio_bound", &params, "vacuous", if r.vacuous() { 1.0 } else { 0.0 }),
        ValidatorRow::new("ratio_bound", &params, "max_ratio", r.max_ratio),
    ])
}

/// True when no row with a verdict failed.
pub fn all_ok(rows: &[ValidatorRow]) -> bool {
    rows.iter().all(|r| r.ok != Some(false))
}

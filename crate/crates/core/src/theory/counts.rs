//! Clique counts of Erdős–Rényi graphs against their expectation.
//!
//! Here `k` counts vertices: a `k`-clique is a complete subgraph on `k`
//! vertices, i.e. a dimension `k − 1` clique of the complex.

use std::f64::consts::E;

use rayon::prelude::*;

use crate::complex::enumerate_cliques;
use crate::error::{Error, Result};
use crate::graph::erdos_renyi;
use crate::math::{binomial, mean_var};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CliqueCountStats {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub trials: usize,
    pub mean: f64,
    pub var: f64,
    /// `C(n, k) p^C(k, 2)`.
    pub expectation: f64,
    /// `(e n / k)^k`.
    pub bound: f64,
    pub max_count: usize,
    /// `var / mean`; close to one for Poisson-like counts. NaN when the mean
    /// is zero.
    pub poissonness: f64,
    /// Mean within three standard errors of the expectation (exact match
    /// required when the sample variance is zero).
    pub mean_ok: bool,
    pub bound_ok: bool,
}

pub fn expected_clique_count(n: usize, p: f64, k: usize) -> f64 {
    binomial(n as u64, k as u64) * p.powf(binomial(k as u64, 2))
}

pub fn clique_count_bound(n: usize, k: usize) -> f64 {
    (E * n as f64 / k as f64).powi(k as i32)
}

/// Edge probability `n^(−2/(k+l−1))` at which dimension-`k` cliques sharing
/// `l` vertices start to percolate, with the unspecified constant set to 1.
pub fn percolation_threshold(n: usize, k: usize, l: usize) -> f64 {
    (n as f64).powf(-2.0 / (k + l - 1) as f64)
}

pub const MIN_COUNT_TRIALS: usize = 1000;

pub fn count_cliques(n: usize, p: f64, k: usize, seed: u64) -> Result<usize> {
    let g = erdos_renyi(n, p, seed)?;
    Ok(enumerate_cliques(&g, k - 1)?.cliques(k - 1).len())
}

pub fn clique_count_stats(n: usize, p: f64, k: usize, trials: usize, seed: u64) -> Result<CliqueCountStats> {
    if trials < MIN_COUNT_TRIALS {
        return Err(Error::arg(format!("need at least {MIN_COUNT_TRIALS} trials, got {trials}")));
    }
    if k == 0 || k > n {
        return Err(Error::arg(format!("clique size {k} must lie in 1..={n}")));
    }
    let counts = (0..trials as u64)
        .into_par_iter()
        .map(|i| count_cliques(n, p, k, rng::derive_seed(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let (mean, var) = mean_var(&xs);
    let expectation = expected_clique_count(n, p, k);
    let bound = clique_count_bound(n, k);
    let se = (var / trials as f64).sqrt();
    let max_count = counts.iter().copied().max().unwrap_or(0);
    Ok(CliqueCountStats {
        n,
        p,
        k,
        trials,
        mean,
        var,
        expectation,
        bound,
        max_count,
        poissonness: if mean > 0.0 { var / mean } else { f64::NAN },
        mean_ok: if se == 0.0 {
            (mean - expectation).abs() <= 1e-9 * expectation.max(1.0)
        } else {
            (mean - expectation).abs() <= 3.0 * se
        },
        bound_ok: max_count as f64 <= bound,
    })
}

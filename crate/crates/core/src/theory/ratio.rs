//! Worst-to-best ratio of random assignment objectives.
//!
//! A cost matrix `C` has i.i.d. Poisson(λ) entries. A permutation `π` of
//! `n` vertices selects the ordered pairs `(π(v), π(v'))` for `v ≤ v'`,
//! `C(n+1, 2)` of them, and its objective is the sum of `C` over that set.
//! Every permutation is enumerated, and the ratio of the largest objective
//! to the smallest is compared with `1 + ε`.

use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::{binomial, factorial};
use crate::rng;
use crate::theory::qap::{next_permutation, BRUTE_FORCE_MAX};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioExperimentSpec {
    pub n: usize,
    pub lambda: f64,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
}

impl RatioExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > BRUTE_FORCE_MAX {
            return Err(Error::arg(format!("n = {} must lie in 1..={BRUTE_FORCE_MAX}", self.n)));
        }
        if !(self.lambda > 0.0) || !(self.epsilon > 0.0) {
            return Err(Error::arg("lambda and epsilon must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::arg("trials must be at least 1"));
        }
        Ok(())
    }
}

/// `1 − 2 n! exp(−2 C(n+1,2) (ε'√λ / (ε' + 2λ))²)` with `ε' = λ − ε`; the
/// Poisson mean and variance both equal `λ`. `None` when `ε' ≤ 0`.
pub fn psi(n: usize, lambda: f64, epsilon: f64) -> Option<f64> {
    let eps_p = lambda - epsilon;
    if eps_p <= 0.0 {
        return None;
    }
    let s = binomial(n as u64 + 1, 2);
    let inner = eps_p * lambda.sqrt() / (eps_p + 2.0 * lambda);
    Some(1.0 - 2.0 * factorial(n as u64) * (-2.0 * s * inner * inner).exp())
}

/// Worst-to-best objective ratio for one cost matrix. A zero best with a
/// positive worst gives infinity; all-zero objectives give 1.
pub fn ratio_for_costs(costs: &[Vec<f64>]) -> f64 {
    let n = costs.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let (mut best, mut worst) = (f64::INFINITY, f64::NEG_INFINITY);
    loop {
        let mut obj = 0.0;
        for v in 0..n {
            for w in v..n {
                obj += costs[perm[v]][perm[w]];
            }
        }
        best = best.min(obj);
        worst = worst.max(obj);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    if n == 0 || worst == best {
        1.0
    } else {
        worst / best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub spec: RatioExperimentSpec,
    /// Fraction of trials with ratio at most `1 + ε`.
    pub empirical: f64,
    pub psi: Option<f64>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

impl RatioReport {
    /// The bound says something only when `ψ > 0`.
    pub fn vacuous(&self) -> bool {
        !matches!(self.psi, Some(p) if p > 0.0)
    }

    /// True when vacuous, otherwise `empirical ≥ ψ`.
    pub fn ok(&self) -> bool {
        match self.psi {
            Some(p) if p > 0.0 => self.empirical >= p,
            _ => true,
        }
    }
}

pub fn ratio_bound_experiment(spec: &RatioExperimentSpec) -> Result<RatioReport> {
    spec.validate()?;
    let poisson = Poisson::new(spec.lambda).map_err(|e| Error::arg(e.to_string()))?;
    let n = spec.n;
    let ratios: Vec<f64> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::seeded(rng::derive_seed(spec.seed, i));
            let costs: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| poisson.sample(&mut r)).collect()).collect();
            ratio_for_costs(&costs)
        })
        .collect();
    let within = ratios.iter().filter(|r| **r <= 1.0 + spec.epsilon).count();
    Ok(RatioReport {
        spec: *spec,
        empirical: within as f64 / spec.trials as f64,
        psi: psi(n, spec.lambda, spec.epsilon),
        max_ratio: ratios.iter().copied().fold(1.0, f64::max),
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
    })
}

//! Leading-eigenvector relaxation of the pairwise-affinity QAP and the
//! concentration of its top eigenvalue on random graphs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::erdos_renyi;
use crate::math::median;
use crate::rng;

/// Symmetric matrix with entries in `[0, 1]`, stored dense.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix {
    m: usize,
    data: Vec<f64>,
}

impl AffinityMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::arg(format!("row {i} has {} entries, expected {m}", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(v) {
                    return Err(Error::arg(format!("affinity ({i}, {j}) = {v} outside [0, 1]")));
                }
                if *v != rows[j][i] {
                    return Err(Error::arg(format!("affinity ({i}, {j}) is not symmetric")));
                }
            }
        }
        Ok(AffinityMatrix { m, data: rows.concat() })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.m + j]
    }

    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.m..(i + 1) * self.m];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingEigen {
    pub value: f64,
    /// Unit norm; first nonzero component positive.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 100_000;

/// Largest eigenvalue and its eigenvector by power iteration on `A + I`.
///
/// The unit shift keeps `λ_1 + 1` strictly dominant in magnitude for
/// non-negative matrices, whose most negative eigenvalue can equal `−λ_1`
/// (bipartite graphs). Iteration stops once successive unit iterates differ
/// by less than `1e-10` relative to the current eigenvalue estimate.
pub fn lawler_spectral(aff: &AffinityMatrix) -> Result<LeadingEigen> {
    let m = aff.order();
    if m == 0 {
        return Ok(LeadingEigen {
            value: 0.0,
            vector: vec![],
            iterations: 0,
        });
    }
    let mut x = vec![1.0 / (m as f64).sqrt(); m];
    let mut y = vec![0.0; m];
    let mut residual = f64::INFINITY;
    for it in 1..=POWER_MAX_ITER {
        aff.mul(&x, &mut y);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in y.iter_mut() {
            *v /= norm;
        }
        residual = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        std::mem::swap(&mut x, &mut y);
        if residual <= POWER_TOL {
            return Ok(finish(aff, x, it));
        }
    }
    Err(Error::NoConvergence {
        iterations: POWER_MAX_ITER,
        residual,
    })
}

fn finish(aff: &AffinityMatrix, mut x: Vec<f64>, iterations: usize) -> LeadingEigen {
    let mut ax = vec![0.0; x.len()];
    aff.mul(&x, &mut ax);
    let value = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
    LeadingEigen {
        value,
        vector: x,
        iterations,
    }
}

pub fn talagrand_bound(t: f64) -> f64 {
    4.0 * (-t * t / 8.0).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailRow {
    pub t: f64,
    pub empirical: f64,
    pub bound: f64,
    /// Binomial standard error of `empirical`.
    pub std_error: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TalagrandReport {
    pub m: usize,
    pub trials: usize,
    pub median: f64,
    pub rows: Vec<TailRow>,
    /// Samples where `λ_1` fell outside `[average degree, max degree]`.
    pub degree_violations: usize,
}

impl TalagrandReport {
    pub fn all_ok(&self) -> bool {
        self.degree_violations == 0 && self.rows.iter().all(|r| r.ok)
    }
}

pub const MIN_TALAGRAND_TRIALS: usize = 2000;

/// Samples `G(m, 1/4)` adjacency matrices, takes the empirical median of
/// their top eigenvalue and compares the two-sided tail frequencies with
/// `4 exp(−t²/8)`, allowing three binomial standard errors.
pub fn talagrand_check(m: usize, trials: usize, t_grid: &[f64], seed: u64) -> Result<TalagrandReport> {
    if trials < MIN_TALAGRAND_TRIALS {
        return Err(Error::arg(format!("need at least {MIN_TALAGRAND_TRIALS} trials, got {trials}")));
    }
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, bool)> {
            let g = erdos_renyi(m, 0.25, rng::derive_seed(seed, i))?;
            let aff = AffinityMatrix::from_rows(&g.adjacency_matrix())?;
            let lambda = lawler_spectral(&aff)?.value;
            let deg = g.degrees();
            let avg = deg.iter().sum::<usize>() as f64 / m.max(1) as f64;
            let max = deg.iter().copied().max().unwrap_or(0) as f64;
            let inside = lambda >= avg - 1e-9 && lambda <= max + 1e-9;
            Ok((lambda, inside))
        })
        .collect::<Result<Vec<_>>>()?;
    let lambdas: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let med = median(&lambdas);
    let n = trials as f64;
    let rows = t_grid
        .iter()
        .map(|&t| {
            let hits = lambdas.iter().filter(|l| (*l - med).abs() >= t).count() as f64;
            let p = hits / n;
            let se = (p * (1.0 - p) / n).sqrt();
            let bound = talagrand_bound(t);
            TailRow {
                t,
                empirical: p,
                bound,
                std_error: se,
                ok: p <= bound + 3.0 * se,
            }
        })
        .collect();
    Ok(TalagrandReport {
        m,
        trials,
        median: med,
        rows,
        degree_violations: samples.iter().filter(|s| !s.1).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn rank_one() {
        let v = [0.2, 0.5, 0.9, 0.1];
        let rows: Vec<Vec<f64>> = v.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        let e = lawler_spectral(&AffinityMatrix::from_rows(&rows).unwrap()).unwrap();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        assert!((e.value - norm2).abs() < 1e-10);
        for (x, vi) in e.vector.iter().zip(v) {
            assert!((x - vi / norm2.sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn identity_and_zero() {
        let id: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        assert!((lawler_spectral(&AffinityMatrix::from_rows(&id).unwrap()).unwrap().value - 1.0).abs() < 1e-12);
        let z = vec![vec![0.0; 3]; 3];
        assert_eq!(lawler_spectral(&AffinityMatrix::from_rows(&z).unwrap()).unwrap().value, 0.0);
    }

    #[test]
    fn bipartite_does_not_oscillate() {
        // path on 3 vertices: eigenvalues ±√2 and 0
        let p = vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]];
        let e = lawler_spectral(&AffinityMatrix::from_rows(&p).unwrap()).unwrap();
        assert!((e.value - 2f64.sqrt()).abs() < 1e-10);
        assert!(e.vector[0] > 0.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(AffinityMatrix::from_rows(&[vec![1.5]]).is_err());
        assert!(AffinityMatrix::from_rows(&[vec![0.0, 0.2], vec![0.3, 0.0]]).is_err());
    }

    #[test]
    fn agrees_with_jacobi() {
        let mut r = rng::seeded(6);
        for _ in 0..30 {
            let s = crate::theory::linalg::SymmetricMatrix::from_fn(6, |_, _| r.random::<f64>());
            let aff = AffinityMatrix::from_rows(&s.to_dense()).unwrap();
            let e = lawler_spectral(&aff).unwrap();
            let top = *s.eigenvalues().last().unwrap();
            assert!((e.value - top).abs() < 1e-8);
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(talagrand_bound(0.0), 4.0);
        assert!((talagrand_bound(4.0) - 0.5413).abs() < 1e-4);
    }

    #[test]
    fn small_tail_check() {
        let r = talagrand_check(20, 2000, &[0.0, 1.0, 2.0], 3).unwrap();
        assert!(r.all_ok(), "{r:?}");
        assert_eq!(r.rows[0].empirical, 1.0);
        assert!(talagrand_check(20, 100, &[1.0], 3).is_err());
    }
}

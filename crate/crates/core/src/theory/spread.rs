//! Eigenvalue spread, consecutive gaps and the Finke reduction.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::mean_var;
use crate::rng;
use crate::theory::linalg::SymmetricMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Operator2,
    Frobenius,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `λ_max − λ_min`; zero for an empty matrix.
    pub spread: f64,
    /// `λ_{i+1} − λ_i`.
    pub gaps: Vec<f64>,
    pub gap_sum: f64,
    pub norm_value: f64,
    /// Every gap is at most twice the norm.
    pub gap_bound_ok: bool,
}

pub fn spread_and_gaps(a: &SymmetricMatrix, norm: NormKind) -> SpreadReport {
    let eigenvalues = a.eigenvalues();
    let gaps: Vec<f64> = eigenvalues.windows(2).map(|w| w[1] - w[0]).collect();
    let spread = match (eigenvalues.first(), eigenvalues.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0.0,
    };
    let norm_value = match norm {
        NormKind::Operator2 => eigenvalues.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
        NormKind::Frobenius => a.frobenius_norm(),
    };
    SpreadReport {
        gap_sum: gaps.iter().sum(),
        gap_bound_ok: gaps.iter().all(|g| *g <= 2.0 * norm_value),
        eigenvalues,
        spread,
        gaps,
        norm_value,
    }
}

pub fn spread(a: &SymmetricMatrix) -> f64 {
    spread_and_gaps(a, NormKind::Operator2).spread
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinkeReduction {
    pub reduced: SymmetricMatrix,
    pub spread_before: f64,
    pub spread_after: f64,
}

/// Subtracts `m_i + m_j` from every off-diagonal entry, where `m_j` is half
/// the mean of column `j` without its diagonal entry, and zeroes the
/// diagonal.
pub fn finke_reduction(a: &SymmetricMatrix) -> FinkeReduction {
    let n = a.order();
    let m: Vec<f64> = (0..n)
        .map(|j| {
            if n < 2 {
                return 0.0;
            }
            let s: f64 = (0..n).filter(|&i| i != j).map(|i| a.get(i, j)).sum();
            0.5 * s / (n - 1) as f64
        })
        .collect();
    let reduced = SymmetricMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { a.get(i, j) - m[i] - m[j] });
    FinkeReduction {
        spread_before: spread(a),
        spread_after: spread(&reduced),
        reduced,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixGenerator {
    /// Entries uniform on `[-1, 1)`.
    Uniform,
    /// Every entry equals the constant.
    Constant(f64),
}

impl MatrixGenerator {
    pub fn sample(&self, n: usize, seed: u64) -> SymmetricMatrix {
        match *self {
            MatrixGenerator::Uniform => SymmetricMatrix::random_uniform(n, -1.0, 1.0, &mut rng::seeded(seed)),
            MatrixGenerator::Constant(c) => SymmetricMatrix::from_fn(n, |_, _| c),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationTable {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// `(ε, fraction of samples with |𝔖 − mean| ≥ ε·σ)` for ε = 1, 2, 3.
    pub tails: Vec<(f64, f64)>,
}

pub const MIN_CONCENTRATION_TRIALS: usize = 1000;

/// Empirical distribution of the spread of random symmetric matrices.
pub fn spread_concentration(n: usize, trials: usize, seed: u64, generator: MatrixGenerator) -> Result<ConcentrationTable> {
    if trials < MIN_CONCENTRATION_TRIALS {
        return Err(Error::arg(format!("need at least {MIN_CONCENTRATION_TRIALS} trials, got {trials}")));
    }
    let spreads: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| spread(&generator.sample(n, rng::derive_seed(seed, i))))
        .collect();
    // Summing identical values can still round, so report the degenerate
    // case exactly.
    let (mean, var) = if spreads.iter().all(|s| *s == spreads[0]) {
        (spreads[0], 0.0)
    } else {
        mean_var(&spreads)
    };
    let sd = var.sqrt();
    let tails = [1.0, 2.0, 3.0]
        .iter()
        .map(|&eps| {
            let hits = if sd == 0.0 {
                0
            } else {
                spreads.iter().filter(|s| (*s - mean).abs() >= eps * sd).count()
            };
            (eps, hits as f64 / trials as f64)
        })
        .collect();
    Ok(ConcentrationTable {
        n,
        trials,
        mean,
        std_dev: sd,
        tails,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_example() {
        let a = SymmetricMatrix::from_fn(2, |i, j| if i == j { [1.0, 3.0][i] } else { 0.0 });
        let r = spread_and_gaps(&a, NormKind::Operator2);
        assert_eq!(r.spread, 2.0);
        assert_eq!(r.gaps, vec![2.0]);
        assert_eq!(r.norm_value, 3.0);
        assert!(r.gap_bound_ok);
    }

    #[test]
    fn identity_has_no_spread() {
        let r = spread_and_gaps(&SymmetricMatrix::identity(4), NormKind::Frobenius);
        assert!(r.spread.abs() < 1e-15);
        assert!(r.gaps.iter().all(|g| g.abs() < 1e-15));
        assert_eq!(r.norm_value, 2.0);
    }

    #[test]
    fn gaps_telescope() {
        let mut r = rng::seeded(3);
        for _ in 0..100 {
            let a = SymmetricMatrix::random_uniform(10, -1.0, 1.0, &mut r);
            let s = spread_and_gaps(&a, NormKind::Operator2);
            assert!(s.gap_bound_ok);
            assert!((s.gap_sum - s.spread).abs() < 1e-10);
        }
    }

    #[test]
    fn finke_on_constant_matrix() {
        let j = SymmetricMatrix::from_fn(3, |_, _| 1.0);
        let f = finke_reduction(&j);
        assert_eq!(f.reduced, SymmetricMatrix::zeros(3));
        assert!((f.spread_before - 3.0).abs() < 1e-12);
        assert_eq!(f.spread_after, 0.0);

        let z = finke_reduction(&SymmetricMatrix::zeros(4));
        assert_eq!(z.reduced, SymmetricMatrix::zeros(4));
    }

    #[test]
    fn finke_hand_example() {
        // off-diagonal column means 2.5, 2, 2.5 -> m = 1.25, 1, 1.25
        let a = SymmetricMatrix::from_rows(&[vec![9.0, 2.0, 3.0], vec![2.0, 9.0, 2.0], vec![3.0, 2.0, 9.0]]).unwrap();
        let r = finke_reduction(&a).reduced;
        assert!((r.get(0, 1) - (2.0 - 2.25)).abs() < 1e-15);
        assert!((r.get(0, 2) - (3.0 - 2.5)).abs() < 1e-15);
        assert!((r.get(1, 2) - (2.0 - 2.25)).abs() < 1e-15);
        assert_eq!(r.get(1, 1), 0.0);
    }

    #[test]
    fn concentration_degenerate_cases() {
        let t = spread_concentration(1, 1000, 4, MatrixGenerator::Uniform).unwrap();
        assert_eq!((t.mean, t.std_dev), (0.0, 0.0));
        let t = spread_concentration(5, 1000, 4, MatrixGenerator::Constant(2.0)).unwrap();
        assert_eq!(t.std_dev, 0.0);
        assert!(t.tails.iter().all(|(_, f)| *f == 0.0));
        assert!(spread_concentration(5, 999, 4, MatrixGenerator::Uniform).is_err());
    }

    #[test]
    fn concentration_tail_is_small() {
        let t = spread_concentration(20, 5000, 8, MatrixGenerator::Uniform).unwrap();
        assert!(t.tails[2].1 < 0.05, "{:?}", t.tails);
        assert!(t.tails[0].1 >= t.tails[1].1 && t.tails[1].1 >= t.tails[2].1);
    }
}

//! Trace-form QAP: eigenvalue bounds and an exhaustive oracle.

use crate::error::{Error, Result};
use crate::theory::linalg::{dot, SymmetricMatrix};

/// Largest order accepted by the exhaustive routines.
pub const BRUTE_FORCE_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Eigenvalue bounds on `tr(A X B Xᵀ)` over permutation matrices `X`:
/// the lower bound pairs the eigenvalues of `A` ascending with those of `B`
/// descending, the upper bound pairs both in the same order.
pub fn trace_qap_bounds(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<TraceBounds> {
    check_orders(a, b)?;
    let la = a.eigenvalues();
    let lb = b.eigenvalues();
    let lower = la.iter().zip(lb.iter().rev()).map(|(x, y)| x * y).sum();
    let upper = la.iter().zip(lb.iter()).map(|(x, y)| x * y).sum();
    Ok(TraceBounds { lower, upper })
}

fn check_orders(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::arg(format!("orders differ: {} vs {}", a.order(), b.order())));
    }
    Ok(())
}

/// `tr(A X B Xᵀ)` for the permutation matrix with `X[i][perm[i]] = 1`.
pub fn trace_objective(a: &SymmetricMatrix, b: &SymmetricMatrix, perm: &[usize]) -> f64 {
    let n = perm.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a.get(i, j) * b.get(perm[i], perm[j]);
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceQap {
    pub min: f64,
    pub max: f64,
    pub argmin: Vec<usize>,
    pub argmax: Vec<usize>,
    /// Largest `|tr(A X B Xᵀ) − λ(A)ᵀ Q λ(B)|` over all permutations, with
    /// `Q[i][j] = ⟨a_i, X b_j⟩²` built from unit eigenvectors.
    pub identity_residual: f64,
    pub permutations: usize,
}

/// Advances `perm` to the next permutation in lexicographic order; returns
/// false after the last one.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Exhaustive minimum and maximum of the trace objective over all `n!`
/// permutations, in lexicographic order (first optimum wins). Also checks
/// the eigen-decomposed form of the objective for every permutation.
pub fn brute_force_trace_qap(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<BruteForceQap> {
    check_orders(a, b)?;
    let n = a.order();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::arg(format!("order {n} exceeds the exhaustive limit {BRUTE_FORCE_MAX}")));
    }
    let ea = a.eigen();
    let eb = b.eigen();

    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = BruteForceQap {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        argmin: perm.clone(),
        argmax: perm.clone(),
        identity_residual: 0.0,
        permutations: 0,
    };
    let mut xb = vec![0.0; n];
    loop {
        let t = trace_objective(a, b, &perm);
        out.permutations += 1;
        if t < out.min {
            out.min = t;
            out.argmin.clone_from(&perm);
        }
        if t > out.max {
            out.max = t;
            out.argmax.clone_from(&perm);
        }

        let mut spectral = 0.0;
        for (j, bj) in eb.vectors.iter().enumerate() {
            // (X b_j)[i] = b_j[perm[i]]
            for i in 0..n {
                xb[i] = bj[perm[i]];
            }
            for (i, ai) in ea.vectors.iter().enumerate() {
                spectral += ea.values[i] * dot(ai, &xb).powi(2) * eb.values[j];
            }
        }
        out.identity_residual = out.identity_residual.max((t - spectral).abs());

        if !next_permutation(&mut perm) {
            break;
        }
    }
    if n == 0 {
        out.min = 0.0;
        out.max = 0.0;
    }
    Ok(out)
}

use crate::assignment::hungarian::CostMatrix;
use crate::descriptors::CliqueDescriptor;

/// Distance between two weight vectors after sorting each in descending
/// order and zero-padding the shorter one.
pub fn weight_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0.0);
            let y = b.get(i).copied().unwrap_or(0.0);
            (x - y).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// Cost matrix between the descriptors of one dimension of two complexes.
///
/// Entry `(i, j)` is [`weight_distance`] of the two weight vectors. A pair
/// where exactly one side is undescribable costs a sentinel of ten times the
/// largest describable cost (at least 10); two undescribable cliques compare
/// as equal empty vectors and cost zero.
pub fn build_cost_matrix(a: &[CliqueDescriptor], b: &[CliqueDescriptor]) -> CostMatrix {
    let mut data = vec![0.0; a.len() * b.len()];
    let mut mixed = Vec::new();
    let mut largest: f64 = 0.0;
    for (i, da) in a.iter().enumerate() {
        for (j, db) in b.iter().enumerate() {
            let idx = i * b.len() + j;
            match (da.alpha(), db.alpha()) {
                (Some(x), Some(y)) => {
                    let d = weight_distance(x, y);
                    largest = largest.max(d);
                    data[idx] = d;
                }
                (None, None) => data[idx] = 0.0,
                _ => mixed.push(idx),
            }
        }
    }
    let sentinel = 10.0 * largest.max(1.0);
    for idx in mixed {
        data[idx] = sentinel;
    }
    CostMatrix::new(a.len(), b.len(), data).expect("distances are finite and non-negative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CliqueRef;
    use crate::descriptors::AffineFit;

    fn desc(alpha: Option<Vec<f64>>) -> CliqueDescriptor {
        CliqueDescriptor {
            clique: CliqueRef::new(0, 0),
            barycenter: [0.0, 0.0],
            neighborhood: vec![],
            fit: alpha.map(|alpha| AffineFit { alpha, residual: 0.0 }),
        }
    }

    #[test]
    fn padded_distance() {
        let d = weight_distance(&[0.7, 0.3], &[0.5, 0.5, 0.0]);
        assert!((d - 0.08f64.sqrt()).abs() < 1e-12);
        assert_eq!(weight_distance(&[0.2, 0.5, 0.3], &[0.3, 0.2, 0.5]), 0.0);
    }

    #[test]
    fn self_costs_vanish() {
        let ds = vec![
            desc(Some(vec![0.5, 0.5])),
            desc(Some(vec![0.9, 0.4, -0.3])),
            desc(None),
        ];
        let m = build_cost_matrix(&ds, &ds);
        for i in 0..3 {
            assert_eq!(m.get(i, i), 0.0);
        }
        assert!(m.get(0, 2) >= 10.0);
        assert!(m.get(2, 1) >= 10.0);
    }
}

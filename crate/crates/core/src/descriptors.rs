//! Geometric clique descriptors: barycenters, clique neighborhoods and the
//! affine weights that express a clique's barycenter in terms of its
//! neighbors' barycenters.
//!
//! Affine combinations commute with affine maps, so for a neighborhood whose
//! barycenters span the plane the weight vector is unchanged by any
//! invertible affine transform of the underlying frame. That property is
//! what makes the matcher insensitive to rotation, reflection, scaling and
//! shear.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::complex::{skeleton_adjacency, CliqueComplex, CliqueRef, SkeletonMatrix};
use crate::error::{Error, Result};
use crate::geometry::Frame;

/// Which same-dimension cliques join a clique's neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeerScope {
    /// Skeleton-adjacent cliques in every dimension `k >= 1`.
    AllDims,
    /// Only in the top dimension of the complex.
    TopOnly,
    None,
}

/// Minimum number of shared vertices for two dimension-`k` cliques to be
/// adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlap {
    /// `l = k`: share a full codimension-1 face.
    SameAsDim,
    /// A fixed `l`, clamped to `k` in lower dimensions.
    Fixed(usize),
}

impl Overlap {
    pub fn at(self, k: usize) -> usize {
        match self {
            Overlap::SameAsDim => k,
            Overlap::Fixed(l) => l.min(k).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodRule {
    pub faces: bool,
    pub cofaces: bool,
    pub peers: PeerScope,
    pub overlap: Overlap,
}

impl Default for NeighborhoodRule {
    fn default() -> Self {
        NeighborhoodRule {
            faces: true,
            cofaces: true,
            peers: PeerScope::AllDims,
            overlap: Overlap::SameAsDim,
        }
    }
}

/// Unweighted mean of the clique's vertex coordinates. Vertices index into
/// `frame.points()`.
pub fn barycenter(clique: &[usize], frame: &Frame) -> Result<[f64; 2]> {
    let pts = frame.points();
    let mut s = [0.0, 0.0];
    for &v in clique {
        let p = pts.get(v).ok_or(Error::MissingVertex(v as i64))?;
        s[0] += p.x;
        s[1] += p.y;
    }
    let m = clique.len() as f64;
    Ok([s[0] / m, s[1] / m])
}

/// Precomputed skeleton matrices for answering neighborhood queries.
pub struct NeighborhoodIndex<'a> {
    complex: &'a CliqueComplex,
    rule: NeighborhoodRule,
    skeletons: Vec<Option<SkeletonMatrix>>,
}

impl<'a> NeighborhoodIndex<'a> {
    pub fn new(complex: &'a CliqueComplex, rule: NeighborhoodRule) -> Result<Self> {
        let h = complex.max_dim();
        let skeletons = (0..=h)
            .map(|k| {
                let wanted = k >= 1
                    && match rule.peers {
                        PeerScope::AllDims => true,
                        PeerScope::TopOnly => k == h,
                        PeerScope::None => false,
                    };
                wanted
                    .then(|| skeleton_adjacency(complex, k, rule.overlap.at(k)))
                    .transpose()
            })
            .collect::<Result<_>>()?;
        Ok(NeighborhoodIndex {
            complex,
            rule,
            skeletons,
        })
    }

    pub fn skeleton(&self, k: usize) -> Option<&SkeletonMatrix> {
        self.skeletons.get(k).and_then(Option::as_ref)
    }

    /// Faces, cofaces and skeleton-adjacent peers of `r`, deduplicated and
    /// ordered by dimension then id.
    pub fn neighborhood(&self, r: CliqueRef) -> Vec<CliqueRef> {
        let mut out = std::collections::BTreeSet::new();
        if self.rule.faces {
            out.extend(self.complex.all_faces(r));
        }
        if self.rule.cofaces {
            out.extend(self.complex.all_cofaces(r));
        }
        if let Some(s) = self.skeleton(r.dim) {
            out.extend(s.row(r.id).iter().map(|&j| CliqueRef::new(r.dim, j)));
        }
        out.into_iter().collect()
    }
}

/// Neighborhood of a single clique. Builds the skeleton matrices each call;
/// use [`NeighborhoodIndex`] for repeated queries.
pub fn clique_neighborhood(
    c: &CliqueComplex,
    r: CliqueRef,
    rule: NeighborhoodRule,
) -> Result<Vec<CliqueRef>> {
    Ok(NeighborhoodIndex::new(c, rule)?.neighborhood(r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineFit {
    pub alpha: Vec<f64>,
    /// `‖Σ α_i x_i − c‖₂`
    pub residual: f64,
}

/// Affine weights of `center` with respect to `neighbors`.
///
/// Minimizes `‖Σ α_i x_i − c‖₂` subject to `Σ α_i = 1` and returns the
/// minimum-norm minimizer. Writing `α = 1/m + w` with `Σ w = 0` reduces the
/// problem to `w = Dᵀ (D Dᵀ)⁺ (c − x̄)`, where `D` holds the centered
/// neighbor coordinates, so only a 2×2 pseudo-inverse is needed.
///
/// Returns `None` for an empty neighbor list.
pub fn affine_weights(center: [f64; 2], neighbors: &[[f64; 2]]) -> Option<AffineFit> {
    let m = neighbors.len();
    if m == 0 {
        return None;
    }
    let mf = m as f64;
    let mean = neighbors
        .iter()
        .fold([0.0, 0.0], |a, x| [a[0] + x[0] / mf, a[1] + x[1] / mf]);
    let d: Vec<[f64; 2]> = neighbors.iter().map(|x| [x[0] - mean[0], x[1] - mean[1]]).collect();
    let r = [center[0] - mean[0], center[1] - mean[1]];

    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for v in &d {
        a += v[0] * v[0];
        b += v[0] * v[1];
        c += v[1] * v[1];
    }
    let y = pinv_sym2_apply(a, b, c, r);

    let alpha: Vec<f64> = d.iter().map(|v| 1.0 / mf + v[0] * y[0] + v[1] * y[1]).collect();
    let fit = alpha
        .iter()
        .zip(neighbors)
        .fold([0.0, 0.0], |s, (w, x)| [s[0] + w * x[0], s[1] + w * x[1]]);
    let residual = ((fit[0] - center[0]).powi(2) + (fit[1] - center[1]).powi(2)).sqrt();
    Some(AffineFit { alpha, residual })
}

/// `S⁺ r` for the symmetric PSD matrix `S = [[a, b], [b, c]]`.
fn pinv_sym2_apply(a: f64, b: f64, c: f64, r: [f64; 2]) -> [f64; 2] {
    const RANK_TOL: f64 = 1e-10;
    let half_tr = 0.5 * (a + c);
    let disc = (0.25 * (a - c).powi(2) + b * b).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if l1 <= f64::MIN_POSITIVE {
        return [0.0, 0.0];
    }
    if l2 > RANK_TOL * l1 {
        let det = a * c - b * b;
        return [(c * r[0] - b * r[1]) / det, (-b * r[0] + a * r[1]) / det];
    }
    // rank one: project onto the leading eigenvector
    let v = if a >= c {
        [l1 - c, b]
    } else {
        [b, l1 - a]
    };
    let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let v = [v[0] / norm, v[1] / norm];
    let s = (v[0] * r[0] + v[1] * r[1]) / l1;
    [s * v[0], s * v[1]]
}

/// Everything the cost matrix needs to know about one clique.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueDescriptor {
    pub clique: CliqueRef,
    pub barycenter: [f64; 2],
    pub neighborhood: Vec<CliqueRef>,
    /// `None` when the neighborhood is empty ("undescribable").
    pub fit: Option<AffineFit>,
}

impl CliqueDescriptor {
    pub fn alpha(&self) -> Option<&[f64]> {
        self.fit.as_ref().map(|f| f.alpha.as_slice())
    }
}

/// Descriptors of every clique of a complex, indexed `[dim][id]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDescriptors {
    pub by_dim: Vec<Vec<CliqueDescriptor>>,
}

impl ComplexDescriptors {
    pub fn dim(&self, k: usize) -> &[CliqueDescriptor] {
        self.by_dim.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// CSV `dim,clique_id,cx,cy,residual,alpha...`; undescribable cliques
    /// leave `residual` empty and carry no weights.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,clique_id,cx,cy,residual,alpha...\n");
        for list in &self.by_dim {
            for d in list {
                write!(out, "{},{},{},{},", d.clique.dim, d.clique.id, d.barycenter[0], d.barycenter[1]).unwrap();
                if let Some(fit) = &d.fit {
                    write!(out, "{}", fit.residual).unwrap();
                    for a in &fit.alpha {
                        write!(out, ",{a}").unwrap();
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Computes barycenters, neighborhoods and affine weights for all cliques.
pub fn describe_complex(
    complex: &CliqueComplex,
    frame: &Frame,
    rule: NeighborhoodRule,
) -> Result<ComplexDescriptors> {
    let index = NeighborhoodIndex::new(complex, rule)?;
    let barycenters: Vec<Vec<[f64; 2]>> = (0..=complex.max_dim())
        .map(|k| complex.cliques(k).iter().map(|c| barycenter(c, frame)).collect())
        .collect::<Result<_>>()?;

    let by_dim = (0..=complex.max_dim())
        .map(|k| {
            (0..complex.cliques(k).len())
                .into_par_iter()
                .map(|id| {
                    let r = CliqueRef::new(k, id);
                    let neighborhood = index.neighborhood(r);
                    let xs: Vec<[f64; 2]> = neighborhood
                        .iter()
                        .map(|n| barycenters[n.dim][n.id])
                        .collect();
                    let center = barycenters[k][id];
                    CliqueDescriptor {
                        clique: r,
                        barycenter: center,
                        fit: affine_weights(center, &xs),
                        neighborhood,
                    }
                })
                .collect()
        })
        .collect();
    Ok(ComplexDescriptors { by_dim })
}

//! Graph-level perturbations for robustness runs.
//!
//! Model I flips every vertex pair's adjacency bit with probability `q`,
//! edges and non-edges alike. Model II removes existing edges with
//! probability `q` and inserts missing ones with probability `r`.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::RandomGraph;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    I,
    II,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub q: f64,
    /// Insertion probability; ignored by Model I.
    pub r: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, q: f64, r: f64, seed: u64) -> Result<Self> {
        for (name, v) in [("q", q), ("r", r)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::arg(format!("noise {name} = {v} outside [0, 1]")));
            }
        }
        Ok(NoiseSpec { model, q, r, seed })
    }

    pub fn model_i(q: f64, seed: u64) -> Result<Self> {
        Self::new(NoiseModel::I, q, 0.0, seed)
    }

    pub fn model_ii(q: f64, r: f64, seed: u64) -> Result<Self> {
        Self::new(NoiseModel::II, q, r, seed)
    }
}

/// Applies the noise model. Pairs `u < v` are visited in lexicographic order
/// with one draw each, so the result is a pure function of the graph and seed.
pub fn perturb(g: &RandomGraph, spec: &NoiseSpec) -> RandomGraph {
    let (flip_edge, flip_gap) = match spec.model {
        NoiseModel::I => (spec.q, spec.q),
        NoiseModel::II => (spec.q, spec.r),
    };
    let mut rng = rng::seeded(spec.seed);
    let n = g.n();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let present = g.has_edge(u, v);
            let prob = if present { flip_edge } else { flip_gap };
            let flip = rng.random::<f64>() < prob;
            if present != flip {
                edges.push((u, v));
            }
        }
    }
    RandomGraph::from_edges(n, edges, g.params).expect("pairs are in range and distinct")
}

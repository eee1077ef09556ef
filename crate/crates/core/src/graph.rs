//! Random graphs: Erdős–Rényi G(n, p) and the k-NN graph thinned by
//! independent Bernoulli(p) coins.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::geometry::Frame;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphParams {
    pub p: f64,
    pub k_nn: Option<usize>,
    pub seed: u64,
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    pub params: GraphParams,
}

impl RandomGraph {
    /// Builds a graph from an edge list. Pairs are normalized to `(lo, hi)`;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        params: GraphParams,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::arg(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(RandomGraph {
            n,
            edges: set,
            params,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(lo, hi)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Sorted neighbor lists.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] = 1.0;
            a[v][u] = 1.0;
        }
        a
    }

    /// `u v` per line, ascending.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::arg(format!("probability {p} outside [0, 1]")))
    }
}

/// G(n, p): each of the C(n, 2) pairs is an edge independently with
/// probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<RandomGraph> {
    check_probability(p)?;
    if n == 0 {
        return Err(Error::arg("n must be at least 1"));
    }
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    RandomGraph::from_edges(n, edges, GraphParams { p, k_nn: None, seed })
}

/// Symmetric k-nearest-neighbor candidate pairs of a frame, as vertex
/// indices into `frame.points()`.
///
/// A pair is a candidate when either endpoint lists the other among its
/// `k_nn` nearest points. Distance ties go to the lower point id.
pub fn knn_candidates(frame: &Frame, k_nn: usize) -> Result<BTreeSet<(usize, usize)>> {
    let n = frame.len();
    if k_nn < 1 || k_nn >= n {
        return Err(Error::arg(format!("k_nn = {k_nn} must lie in [1, {})", n)));
    }
    let pts = frame.points();
    let mut out = BTreeSet::new();
    let mut order: Vec<(f64, usize, usize)> = Vec::with_capacity(n - 1);
    for (i, a) in pts.iter().enumerate() {
        order.clear();
        for (j, b) in pts.iter().enumerate() {
            if i != j {
                let d = (a.x - b.x).powi(2) + (a.y - b.y).powi(2);
                order.push((d, b.id, j));
            }
        }
        order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(_, _, j) in order.iter().take(k_nn) {
            out.insert((i.min(j), i.max(j)));
        }
    }
    Ok(out)
}

/// Symmetric k-NN graph on a frame with every candidate edge kept with
/// probability `p`.
///
/// The coin for a pair depends only on `seed` and the two point ids, so two
/// frames built with the same seed agree on every pair they both propose.
/// Vertex `i` of the result is `frame.points()[i]`.
pub fn knn_bernoulli_graph(frame: &Frame, k_nn: usize, p: f64, seed: u64) -> Result<RandomGraph> {
    check_probability(p)?;
    let candidates = knn_candidates(frame, k_nn)?;
    let pts = frame.points();
    let kept = candidates.into_iter().filter(|&(u, v)| {
        rng::keyed_uniform(seed, pts[u].id as u64, pts[v].id as u64) < p
    });
    RandomGraph::from_edges(
        frame.len(),
        kept,
        GraphParams {
            p,
            k_nn: Some(k_nn),
            seed,
        },
    )
}

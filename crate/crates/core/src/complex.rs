//! Clique complexes and their skeleton adjacency matrices.
//!
//! Dimension `k` always means cliques with `k + 1` vertices: vertices are
//! dimension 0, edges dimension 1, triangles dimension 2.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::RandomGraph;
use crate::math::binomial;

pub const DEFAULT_MAX_DIM: usize = 2;
pub const DEFAULT_CLIQUE_CAP: usize = 200_000;

/// A clique addressed by dimension and its lexicographic rank in that
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliqueRef {
    pub dim: usize,
    pub id: usize,
}

impl CliqueRef {
    pub fn new(dim: usize, id: usize) -> Self {
        CliqueRef { dim, id }
    }
}

/// All cliques of a graph up to dimension `max_dim`, with face and coface
/// indices between consecutive dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueComplex {
    n: usize,
    max_dim: usize,
    /// `cliques[k]` holds sorted vertex sets of size `k + 1`, in
    /// lexicographic order.
    cliques: Vec<Vec<Vec<usize>>>,
    /// `faces[k][i]`: ids in dimension `k - 1` of the codimension-1 faces.
    faces: Vec<Vec<Vec<usize>>>,
    /// `cofaces[k][i]`: ids in dimension `k + 1` of the codimension-1 cofaces.
    cofaces: Vec<Vec<Vec<usize>>>,
}

impl CliqueComplex {
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn cliques(&self, dim: usize) -> &[Vec<usize>] {
        self.cliques.get(dim).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn clique(&self, r: CliqueRef) -> &[usize] {
        &self.cliques[r.dim][r.id]
    }

    /// Number of cliques per dimension `0..=max_dim`.
    pub fn counts(&self) -> Vec<usize> {
        self.cliques.iter().map(Vec::len).collect()
    }

    pub fn find(&self, vertices: &[usize]) -> Option<CliqueRef> {
        let dim = vertices.len().checked_sub(1)?;
        let id = self.cliques.get(dim)?.binary_search_by(|c| c.as_slice().cmp(vertices)).ok()?;
        Some(CliqueRef { dim, id })
    }

    pub fn faces(&self, r: CliqueRef) -> &[usize] {
        &self.faces[r.dim][r.id]
    }

    pub fn cofaces(&self, r: CliqueRef) -> &[usize] {
        &self.cofaces[r.dim][r.id]
    }

    /// Every proper face, all dimensions down to vertices.
    pub fn all_faces(&self, r: CliqueRef) -> BTreeSet<CliqueRef> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![r];
        while let Some(c) = frontier.pop() {
            if c.dim == 0 {
                continue;
            }
            for &f in self.faces(c) {
                let f = CliqueRef::new(c.dim - 1, f);
                if out.insert(f) {
                    frontier.push(f);
                }
            }
        }
        out
    }

    /// Every clique strictly containing `r`, up to `max_dim`.
    pub fn all_cofaces(&self, r: CliqueRef) -> BTreeSet<CliqueRef> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![r];
        while let Some(c) = frontier.pop() {
            if c.dim >= self.max_dim {
                continue;
            }
            for &f in self.cofaces(c) {
                let f = CliqueRef::new(c.dim + 1, f);
                if out.insert(f) {
                    frontier.push(f);
                }
            }
        }
        out
    }

    /// One line per clique, `dim: v0 v1 ... vk`, dimension-major and
    /// lexicographic within a dimension.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, list) in self.cliques.iter().enumerate() {
            for c in list {
                let vs: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{k}: {}", vs.join(" ")).unwrap();
            }
        }
        out
    }
}

/// Lists every clique with at most `max_dim + 1` vertices.
pub fn enumerate_cliques(g: &RandomGraph, max_dim: usize) -> Result<CliqueComplex> {
    enumerate_cliques_capped(g, max_dim, DEFAULT_CLIQUE_CAP)
}

/// [`enumerate_cliques`] with an explicit per-dimension cap; exceeding it is
/// an error rather than an out-of-memory condition.
pub fn enumerate_cliques_capped(g: &RandomGraph, max_dim: usize, cap: usize) -> Result<CliqueComplex> {
    let n = g.n();
    let adj = g.adjacency_lists();
    if n > cap {
        return Err(Error::CliqueCap { dim: 0, cap });
    }

    let mut cliques: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
    let mut scratch = Vec::new();
    for dim in 1..=max_dim {
        let mut next = Vec::new();
        for c in &cliques[dim - 1] {
            let last = *c.last().unwrap();
            // common neighbors of every member, larger than the last member
            scratch.clear();
            scratch.extend(adj[c[0]].iter().copied().filter(|&w| w > last));
            for &v in &c[1..] {
                scratch.retain(|w| adj[v].binary_search(w).is_ok());
            }
            for &w in &scratch {
                let mut e = c.clone();
                e.push(w);
                next.push(e);
                if next.len() > cap {
                    return Err(Error::CliqueCap { dim, cap });
                }
            }
        }
        cliques.push(next);
    }

    let mut faces: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]];
    let mut cofaces: Vec<Vec<Vec<usize>>> = cliques.iter().map(|l| vec![Vec::new(); l.len()]).collect();
    let mut sub = Vec::new();
    for dim in 1..=max_dim {
        let lower = &cliques[dim - 1];
        let mut fl = Vec::with_capacity(cliques[dim].len());
        for (id, c) in cliques[dim].iter().enumerate() {
            let mut ids = Vec::with_capacity(c.len());
            for skip in 0..c.len() {
                sub.clear();
                sub.extend(c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                let f = lower
                    .binary_search_by(|x| x.as_slice().cmp(&sub))
                    .expect("faces of a clique are cliques");
                ids.push(f);
                cofaces[dim - 1][f].push(id);
            }
            ids.sort_unstable();
            fl.push(ids);
        }
        faces.push(fl);
    }

    Ok(CliqueComplex {
        n,
        max_dim,
        cliques,
        faces,
        cofaces,
    })
}

/// Sparse symmetric 0/1 matrix over the dimension-`k` cliques: entry
/// `(i, j)` is one when cliques `i != j` share at least `l` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonMatrix {
    pub k: usize,
    pub l: usize,
    rows: Vec<Vec<usize>>,
}

impl SkeletonMatrix {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Column indices of the non-zeros in row `i`, ascending.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let m = self.order();
        let mut d = vec![vec![0u8; m]; m];
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row {
                d[i][j] = 1;
            }
        }
        d
    }
}

/// Builds the overlap matrix for dimension `k` with overlap parameter `l`.
pub fn skeleton_adjacency(c: &CliqueComplex, k: usize, l: usize) -> Result<SkeletonMatrix> {
    if k < 1 || k > c.max_dim() {
        return Err(Error::arg(format!(
            "dimension {k} outside [1, {}]",
            c.max_dim()
        )));
    }
    if l < 1 || l > k {
        return Err(Error::arg(format!("overlap l = {l} outside [1, {k}]")));
    }
    let list = c.cliques(k);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); c.vertex_count()];
    for (id, cl) in list.iter().enumerate() {
        for &v in cl {
            incident[v].push(id);
        }
    }
    let mut rows = Vec::with_capacity(list.len());
    let mut shared: HashMap<usize, usize> = HashMap::new();
    for (id, cl) in list.iter().enumerate() {
        shared.clear();
        for &v in cl {
            for &other in &incident[v] {
                if other != id {
                    *shared.entry(other).or_default() += 1;
                }
            }
        }
        let mut row: Vec<usize> = shared
            .iter()
            .filter(|&(_, &s)| s >= l)
            .map(|(&j, _)| j)
            .collect();
        row.sort_unstable();
        rows.push(row);
    }
    Ok(SkeletonMatrix { k, l, rows })
}

/// Expected number of ways to relocate one dimension-`k` clique onto an
/// adjacent one by moving `k + 1 - l` vertices:
/// `(C(k+1, l) - 1) · C(n, k+1-l) · p^(C(k+1, 2) - C(l, 2))`.
///
/// With `l = k` this is `k · n · p^k`.
pub fn nnz_estimate(n: u64, p: f64, k: u64, l: u64) -> f64 {
    let choose_kept = binomial(k + 1, l) - 1.0;
    let positions = binomial(n, k + 1 - l);
    let exponent = binomial(k + 1, 2) - binomial(l, 2);
    choose_kept * positions * p.powf(exponent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{erdos_renyi, GraphParams};
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> RandomGraph {
        RandomGraph::from_edges(n, edges.iter().copied(), GraphParams { p: 1.0, k_nn: None, seed: 0 })
            .unwrap()
    }

    fn complete(n: usize) -> RandomGraph {
        let e: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        graph(n, &e)
    }

    #[test]
    fn k4_counts() {
        let c = enumerate_cliques(&complete(4), 3).unwrap();
        assert_eq!(c.counts(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn triangle_counts() {
        let c = enumerate_cliques(&complete(3), 2).unwrap();
        assert_eq!(c.counts(), vec![3, 3, 1]);
    }

    #[test]
    fn empty_graph_has_only_vertices() {
        let c = enumerate_cliques(&graph(5, &[]), 2).unwrap();
        assert_eq!(c.counts(), vec![5, 0, 0]);
    }

    #[test]
    fn lexicographic_order_and_face_index() {
        let c = enumerate_cliques(&complete(4), 2).unwrap();
        assert_eq!(
            c.cliques(1),
            &[vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let t = c.find(&[0, 2, 3]).unwrap();
        let faces: Vec<&[usize]> = c.faces(t).iter().map(|&f| c.cliques(1)[f].as_slice()).collect();
        assert_eq!(faces, vec![&[0, 2][..], &[0, 3], &[2, 3]]);
        assert_eq!(c.all_faces(t).len(), 6);
        assert_eq!(c.all_cofaces(CliqueRef::new(0, 0)).len(), 3 + 3);
    }

    #[test]
    fn clique_cap_aborts() {
        let err = enumerate_cliques_capped(&complete(12), 2, 100).unwrap_err();
        assert!(matches!(err, Error::CliqueCap { dim: 2, cap: 100 }));
    }

    #[test]
    fn dump_format() {
        let c = enumerate_cliques(&graph(3, &[(0, 1)]), 1).unwrap();
        assert_eq!(c.dump(), "0: 0\n0: 1\n0: 2\n1: 0 1\n");
    }

    #[test]
    fn skeleton_edge_cases() {
        let single = enumerate_cliques(&complete(3), 2).unwrap();
        let m = skeleton_adjacency(&single, 2, 2).unwrap();
        assert_eq!(m.to_dense(), vec![vec![0]]);

        let disjoint = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let c = enumerate_cliques(&disjoint, 2).unwrap();
        assert_eq!(skeleton_adjacency(&c, 2, 2).unwrap().to_dense(), vec![vec![0, 0], vec![0, 0]]);
        assert!(skeleton_adjacency(&c, 2, 3).is_err());
        assert!(skeleton_adjacency(&c, 2, 0).is_err());
        assert!(skeleton_adjacency(&c, 3, 1).is_err());
    }

    #[test]
    fn estimate_values() {
        assert!((nnz_estimate(100, 0.1, 2, 2) - 2.0).abs() < 1e-12);
        assert_eq!(nnz_estimate(100, 0.0, 2, 2), 0.0);
        // (C(3,1) - 1) * C(20, 2) * 0.4^(3 - 0) = 2 * 190 * 0.064
        assert!((nnz_estimate(20, 0.4, 2, 1) - 24.32).abs() < 1e-10);
        for k in 1..5u64 {
            let direct = k as f64 * 37.0 * 0.3f64.powi(k as i32);
            assert!((nnz_estimate(37, 0.3, k, k) - direct).abs() < 1e-12);
        }
    }

    /// Mean clique degree in G^(k,k) near the percolation scale tracks the
    /// relocation estimate within a factor of three.
    #[test]
    fn nnz_tracks_estimate() {
        for &(n, k) in &[(30usize, 2usize), (40, 1), (24, 3)] {
            let l = k;
            let p = (n as f64).powf(-2.0 / (k + l - 1) as f64);
            let (mut nnz, mut rows) = (0usize, 0usize);
            for s in 0..300 {
                let g = erdos_renyi(n, p, s).unwrap();
                let c = enumerate_cliques(&g, k).unwrap();
                let m = skeleton_adjacency(&c, k, l).unwrap();
                nnz += m.nnz();
                rows += m.order();
            }
            let measured = nnz as f64 / rows as f64;
            let est = nnz_estimate(n as u64, p, k as u64, l as u64);
            assert!(
                measured <= 3.0 * est && est <= 3.0 * measured,
                "n={n} k={k}: measured {measured} estimate {est}"
            );
        }
    }

    proptest! {
        #[test]
        fn closure_and_bounds(seed in any::<u64>(), p in 0.1f64..0.9) {
            let n = 12;
            let g = erdos_renyi(n, p, seed).unwrap();
            let c = enumerate_cliques(&g, 3).unwrap();
            for k in 1..=3 {
                for cl in c.cliques(k) {
                    prop_assert!(cl.windows(2).all(|w| w[0] < w[1]));
                    for skip in 0..cl.len() {
                        let sub: Vec<usize> = cl.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                        prop_assert!(c.find(&sub).is_some());
                    }
                }
                // per-size count bound (e n / s)^s for s = k + 1 vertices
                let s = (k + 1) as f64;
                prop_assert!(c.cliques(k).len() as f64 <= (std::f64::consts::E * n as f64 / s).powf(s));
            }
        }

        #[test]
        fn overlap_monotone_in_l(seed in any::<u64>()) {
            let g = erdos_renyi(14, 0.6, seed).unwrap();
            let c = enumerate_cliques(&g, 3).unwrap();
            for k in 1..=3 {
                let loose = skeleton_adjacency(&c, k, 1).unwrap();
                let tight = skeleton_adjacency(&c, k, k).unwrap();
                for i in 0..tight.order() {
                    prop_assert!(tight.row(i).iter().all(|&j| loose.get(i, j)));
                    prop_assert!(!tight.get(i, i));
                    for &j in tight.row(i) {
                        prop_assert!(tight.get(j, i));
                    }
                }
            }
        }
    }
}

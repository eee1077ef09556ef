//! Per-dimension clique matching between two landmark frames.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::assignment::cost::build_cost_matrix;
use crate::assignment::hungarian::{hungarian, CostMatrix};
use crate::complex::{enumerate_cliques, skeleton_adjacency, CliqueComplex, DEFAULT_MAX_DIM};
use crate::descriptors::{describe_complex, ComplexDescriptors, NeighborhoodRule, Overlap, PeerScope};
use crate::error::{Error, Result};
use crate::geometry::{Frame, PointId};
use crate::graph::{knn_bernoulli_graph, GraphParams, RandomGraph};

/// How vertex matching errors are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMode {
    /// Unmatched ground-truth pairs count as errors.
    Strict,
    /// Only ground-truth pairs whose source vertex was matched are scored.
    Lenient,
}

/// Matcher settings. Field names follow the config-file keys.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig {
    /// Highest clique dimension (`h`).
    pub h: usize,
    pub overlap: Overlap,
    pub peers: PeerScope,
    pub p: f64,
    pub k_nn: usize,
    /// Assignments costing more than this are dropped as no-match.
    pub tau: f64,
    pub seed_a: u64,
    pub seed_b: u64,
    /// Build the second graph with `seed_a` as well.
    pub share_seed: bool,
    /// Reuse the first graph on the second frame (restricted to the point ids
    /// both frames carry) instead of building a new one.
    pub share_graph: bool,
    pub vote: bool,
    pub error_mode: ErrorMode,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            h: DEFAULT_MAX_DIM,
            overlap: Overlap::SameAsDim,
            peers: PeerScope::AllDims,
            p: 0.7,
            k_nn: 7,
            tau: 0.15,
            seed_a: 1,
            seed_b: 2,
            share_seed: false,
            share_graph: false,
            vote: false,
            error_mode: ErrorMode::Strict,
        }
    }
}

impl MatchConfig {
    pub fn neighborhood_rule(&self) -> NeighborhoodRule {
        NeighborhoodRule {
            faces: true,
            cofaces: true,
            peers: self.peers,
            overlap: self.overlap,
        }
    }
}

/// A frame with its graph, clique complex and descriptors.
#[derive(Debug, Clone)]
pub struct PreparedComplex {
    pub frame: Frame,
    pub graph: RandomGraph,
    pub complex: CliqueComplex,
    pub descriptors: ComplexDescriptors,
    overlap: Overlap,
}

impl PreparedComplex {
    pub fn new(frame: Frame, graph: RandomGraph, h: usize, rule: NeighborhoodRule) -> Result<Self> {
        if graph.n() != frame.len() {
            return Err(Error::arg(format!(
                "graph has {} vertices, frame has {} points",
                graph.n(),
                frame.len()
            )));
        }
        let complex = enumerate_cliques(&graph, h)?;
        let descriptors = describe_complex(&complex, &frame, rule)?;
        Ok(PreparedComplex {
            frame,
            graph,
            complex,
            descriptors,
            overlap: rule.overlap,
        })
    }

    /// Neighbor lists of the dimension-`k` adjacency used for the
    /// misalignment metric: the graph itself at `k = 0`, the skeleton
    /// matrix above.
    fn adjacency(&self, k: usize) -> Result<Vec<Vec<usize>>> {
        if k == 0 {
            return Ok(self.graph.adjacency_lists());
        }
        let s = skeleton_adjacency(&self.complex, k, self.overlap.at(k))?;
        Ok((0..s.order()).map(|i| s.row(i).to_vec()).collect())
    }
}

/// Copies the edges of `graph` (built on `from`) onto `to`, keeping the
/// edges whose endpoints both survive in `to`.
pub fn transport_graph(graph: &RandomGraph, from: &Frame, to: &Frame) -> Result<RandomGraph> {
    let ids = from.points();
    let edges = graph.edges().filter_map(|(u, v)| {
        let a = to.index_of(ids[u].id)?;
        let b = to.index_of(ids[v].id)?;
        Some((a, b))
    });
    RandomGraph::from_edges(to.len(), edges, graph.params)
}

fn knn_graph_clamped(frame: &Frame, cfg: &MatchConfig, seed: u64) -> Result<RandomGraph> {
    if frame.len() < 2 {
        return RandomGraph::from_edges(
            frame.len(),
            [],
            GraphParams {
                p: cfg.p,
                k_nn: Some(cfg.k_nn),
                seed,
            },
        );
    }
    knn_bernoulli_graph(frame, cfg.k_nn.min(frame.len() - 1), cfg.p, seed)
}

/// Builds the two graphs for a frame pair according to the seed-sharing
/// settings.
pub fn build_graph_pair(a: &Frame, b: &Frame, cfg: &MatchConfig) -> Result<(RandomGraph, RandomGraph)> {
    let ga = knn_graph_clamped(a, cfg, cfg.seed_a)?;
    let gb = if cfg.share_graph {
        transport_graph(&ga, a, b)?
    } else {
        let seed = if cfg.share_seed { cfg.seed_a } else { cfg.seed_b };
        knn_graph_clamped(b, cfg, seed)?
    };
    Ok((ga, gb))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPair {
    pub a: usize,
    pub b: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionMatch {
    pub dim: usize,
    pub pairs: Vec<MatchedPair>,
    pub unmatched_a: Vec<usize>,
    pub unmatched_b: Vec<usize>,
    pub total_cost: f64,
    /// `‖G X − X G'‖²_F` for the returned partial assignment.
    pub misalignment: usize,
    /// Number of pair swaps that would lower the misalignment; computed
    /// only for up to [`SWAP_DIAGNOSTIC_LIMIT`] pairs.
    pub improving_swaps: Option<usize>,
}

pub const SWAP_DIAGNOSTIC_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Indexed by dimension.
    pub dims: Vec<DimensionMatch>,
    /// Point id in the first frame -> point id in the second.
    pub vertex_correspondence: BTreeMap<PointId, PointId>,
}

impl MatchResult {
    /// `dim,clique_a,clique_b,cost`, dimensions from `h` down to 0, each
    /// followed by a summary row `dim,summary,<matched pairs>,<total cost>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,clique_a,clique_b,cost\n");
        for d in self.dims.iter().rev() {
            for p in &d.pairs {
                writeln!(out, "{},{},{},{}", d.dim, p.a, p.b, p.cost).unwrap();
            }
            writeln!(out, "{},summary,{},{}", d.dim, d.pairs.len(), d.total_cost).unwrap();
        }
        out
    }
}

/// Matches two prepared complexes dimension by dimension, from `h` down to
/// zero. Each dimension is an independent assignment problem over the
/// descriptor costs; pairs costing more than `cfg.tau` are dropped.
pub fn match_complexes(a: &PreparedComplex, b: &PreparedComplex, cfg: &MatchConfig) -> Result<MatchResult> {
    let h = a.complex.max_dim();
    if b.complex.max_dim() != h || cfg.h != h {
        return Err(Error::config(format!(
            "complex dimensions differ: {} vs {} (config h = {})",
            h,
            b.complex.max_dim(),
            cfg.h
        )));
    }

    // Dimensions are independent; results land back in dimension order.
    let dims = (0..=h)
        .into_par_iter()
        .map(|k| match_dimension(a, b, k, cfg.tau))
        .collect::<Result<Vec<_>>>()?;

    let vertex_correspondence = if cfg.vote {
        vote_vertices(a, b, &dims)
    } else {
        dims[0]
            .pairs
            .iter()
            .map(|p| (a.frame.points()[p.a].id, b.frame.points()[p.b].id))
            .collect()
    };
    Ok(MatchResult {
        dims,
        vertex_correspondence,
    })
}

fn match_dimension(a: &PreparedComplex, b: &PreparedComplex, k: usize, tau: f64) -> Result<DimensionMatch> {
    let da = a.descriptors.dim(k);
    let db = b.descriptors.dim(k);
    let cost = build_cost_matrix(da, db);
    let assignment = hungarian(&cost);
    let pairs: Vec<MatchedPair> = assignment
        .pairs
        .iter()
        .map(|&(i, j)| MatchedPair {
            a: i,
            b: j,
            cost: cost.get(i, j),
        })
        .filter(|p| p.cost <= tau)
        .collect();

    let mut used_a = vec![false; da.len()];
    let mut used_b = vec![false; db.len()];
    for p in &pairs {
        used_a[p.a] = true;
        used_b[p.b] = true;
    }
    let unmatched = |used: &[bool]| used.iter().enumerate().filter(|(_, u)| !**u).map(|(i, _)| i).collect();

    let adj_a = a.adjacency(k)?;
    let adj_b = b.adjacency(k)?;
    let map: Vec<(usize, usize)> = pairs.iter().map(|p| (p.a, p.b)).collect();
    let misalignment = frobenius_misalignment(&adj_a, &adj_b, &map);
    let improving_swaps = (map.len() <= SWAP_DIAGNOSTIC_LIMIT).then(|| count_improving_swaps(&adj_a, &adj_b, &map));

    Ok(DimensionMatch {
        dim: k,
        total_cost: pairs.iter().map(|p| p.cost).sum(),
        unmatched_a: unmatched(&used_a),
        unmatched_b: unmatched(&used_b),
        pairs,
        misalignment,
        improving_swaps,
    })
}

/// `‖G X − X G'‖²_F` for 0/1 adjacency lists and a partial one-to-one map
/// `X` given as `(row of G, row of G')` pairs. Both products are 0/1
/// matrices, so the squared norm counts the entries where they differ.
pub fn frobenius_misalignment(g: &[Vec<usize>], g2: &[Vec<usize>], map: &[(usize, usize)]) -> usize {
    let mut left: HashSet<(usize, usize)> = HashSet::new();
    for &(i2, j) in map {
        for &i in &g[i2] {
            left.insert((i, j));
        }
    }
    let mut right: HashSet<(usize, usize)> = HashSet::new();
    for &(i, j2) in map {
        for &j in &g2[j2] {
            right.insert((i, j));
        }
    }
    left.symmetric_difference(&right).count()
}

/// Counts transpositions of two matched targets that lower the misalignment.
///
/// With an injective map, `(GX)[i][j] = G[owner(j)][i]` and
/// `(XG')[i][j] = G'[image(i)][j]`. Swapping the targets of two pairs only
/// changes two columns of `GX` and two rows of `XG'`, so each candidate is
/// scored on those cells alone.
fn count_improving_swaps(g: &[Vec<usize>], g2: &[Vec<usize>], map: &[(usize, usize)]) -> usize {
    let (na, nb) = (g.len(), g2.len());
    let sorted = |adj: &[Vec<usize>]| -> Vec<Vec<usize>> {
        adj.iter()
            .map(|r| {
                let mut r = r.clone();
                r.sort_unstable();
                r
            })
            .collect()
    };
    let (g, g2) = (sorted(g), sorted(g2));
    let mut owner: Vec<Option<usize>> = vec![None; nb];
    let mut image: Vec<Option<usize>> = vec![None; na];
    for &(i, j) in map {
        owner[j] = Some(i);
        image[i] = Some(j);
    }
    let cell = |owner: &[Option<usize>], image: &[Option<usize>], i: usize, j: usize| -> usize {
        let l = owner[j].is_some_and(|o| g[o].binary_search(&i).is_ok());
        let r = image[i].is_some_and(|m| g2[m].binary_search(&j).is_ok());
        usize::from(l != r)
    };
    // mismatches on rows {ia, ib} or columns {ja, jb}
    let local = |owner: &[Option<usize>], image: &[Option<usize>], ia: usize, ib: usize, ja: usize, jb: usize| {
        let mut s = 0;
        for i in 0..na {
            if i != ia && i != ib {
                s += cell(owner, image, i, ja) + cell(owner, image, i, jb);
            }
        }
        for j in 0..nb {
            s += cell(owner, image, ia, j) + cell(owner, image, ib, j);
        }
        s
    };
    let mut count = 0;
    for x in 0..map.len() {
        for y in (x + 1)..map.len() {
            let ((ix, jx), (iy, jy)) = (map[x], map[y]);
            let before = local(&owner, &image, ix, iy, jx, jy);
            owner[jx] = Some(iy);
            owner[jy] = Some(ix);
            image[ix] = Some(jy);
            image[iy] = Some(jx);
            let after = local(&owner, &image, ix, iy, jx, jy);
            owner[jx] = Some(ix);
            owner[jy] = Some(iy);
            image[ix] = Some(jx);
            image[iy] = Some(jy);
            if after < before {
                count += 1;
            }
        }
    }
    count
}

/// Vertex correspondence from votes cast by every matched clique pair:
/// each pair votes once for every (vertex, vertex) combination it contains.
/// The final one-to-one map maximizes total votes; the dimension-0 partner
/// wins ties.
fn vote_vertices(a: &PreparedComplex, b: &PreparedComplex, dims: &[DimensionMatch]) -> BTreeMap<PointId, PointId> {
    let (na, nb) = (a.frame.len(), b.frame.len());
    let mut votes = vec![0.0f64; na * nb];
    for d in dims {
        for p in &d.pairs {
            for &u in &a.complex.cliques(d.dim)[p.a] {
                for &v in &b.complex.cliques(d.dim)[p.b] {
                    votes[u * nb + v] += 1.0;
                }
            }
        }
    }
    for p in &dims[0].pairs {
        votes[p.a * nb + p.b] += 0.5;
    }
    let top = votes.iter().copied().fold(0.0, f64::max);
    let cost = CostMatrix::new(na, nb, votes.iter().map(|v| top - v).collect()).expect("finite");
    hungarian(&cost)
        .pairs
        .into_iter()
        .filter(|&(u, v)| votes[u * nb + v] > 0.0)
        .map(|(u, v)| (a.frame.points()[u].id, b.frame.points()[v].id))
        .collect()
}

/// Prepares both frames and matches them.
pub fn match_frames(a: &Frame, b: &Frame, cfg: &MatchConfig) -> Result<MatchResult> {
    let (ga, gb) = build_graph_pair(a, b, cfg)?;
    let rule = cfg.neighborhood_rule();
    let pa = PreparedComplex::new(a.clone(), ga, cfg.h, rule)?;
    let pb = PreparedComplex::new(b.clone(), gb, cfg.h, rule)?;
    match_complexes(&pa, &pb, cfg)
}

/// Percentage of ground-truth pairs the vertex correspondence gets wrong.
///
/// Returns `None` when nothing is scorable (empty truth, or lenient mode
/// with no matched truth vertices).
pub fn match_error(
    result: &MatchResult,
    truth: &BTreeMap<PointId, PointId>,
    mode: ErrorMode,
) -> Option<f64> {
    let c = match_error_counts(result, truth, mode);
    (c.scored > 0).then(|| 100.0 * c.wrong as f64 / c.scored as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ErrorCounts {
    pub wrong: usize,
    pub scored: usize,
}

pub fn match_error_counts(result: &MatchResult, truth: &BTreeMap<PointId, PointId>, mode: ErrorMode) -> ErrorCounts {
    let mut c = ErrorCounts::default();
    for (src, dst) in truth {
        match result.vertex_correspondence.get(src) {
            Some(got) => {
                c.scored += 1;
                if got != dst {
                    c.wrong += 1;
                }
            }
            None if mode == ErrorMode::Strict => {
                c.scored += 1;
                c.wrong += 1;
            }
            None => {}
        }
    }
    c
}

/// Identity correspondence on the point ids two frames share.
pub fn shared_id_truth(a: &Frame, b: &Frame) -> BTreeMap<PointId, PointId> {
    a.points()
        .iter()
        .filter(|p| b.get(p.id).is_some())
        .map(|p| (p.id, p.id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{apply_about_centroid, AffineTransform};
    use crate::rng;
    use rand::Rng as _;

    fn random_frame(n: usize, seed: u64) -> Frame {
        let mut r = rng::seeded(seed);
        let c: Vec<[f64; 2]> = (0..n)
            .map(|_| [r.random_range(0.0..640.0), r.random_range(0.0..480.0)])
            .collect();
        Frame::from_coords(&c).unwrap()
    }

    fn result_with(pairs: &[(usize, usize)]) -> MatchResult {
        MatchResult {
            dims: vec![],
            vertex_correspondence: pairs.iter().copied().collect(),
        }
    }

    #[test]
    fn self_match_is_identity_with_zero_cost() {
        let f = random_frame(25, 3);
        let cfg = MatchConfig {
            share_seed: true,
            ..MatchConfig::default()
        };
        let r = match_frames(&f, &f, &cfg).unwrap();
        for d in &r.dims {
            assert_eq!(d.total_cost, 0.0);
            assert!(d.pairs.iter().all(|p| p.a == p.b), "dim {}", d.dim);
            assert_eq!(d.misalignment, 0);
        }
        assert_eq!(match_error(&r, &shared_id_truth(&f, &f), ErrorMode::Strict), Some(0.0));
    }

    #[test]
    fn transformed_copy_with_identical_graph() {
        let f = random_frame(30, 9);
        let g = apply_about_centroid(&f, &AffineTransform::rotation(60.0));
        let cfg = MatchConfig {
            share_graph: true,
            ..MatchConfig::default()
        };
        let r = match_frames(&f, &g, &cfg).unwrap();
        assert_eq!(match_error(&r, &shared_id_truth(&f, &g), ErrorMode::Strict), Some(0.0));
    }

    #[test]
    fn mismatched_dimensions_are_a_config_error() {
        let f = random_frame(12, 1);
        let cfg = MatchConfig::default();
        let (ga, gb) = build_graph_pair(&f, &f, &cfg).unwrap();
        let a = PreparedComplex::new(f.clone(), ga, 2, cfg.neighborhood_rule()).unwrap();
        let b = PreparedComplex::new(f.clone(), gb, 1, cfg.neighborhood_rule()).unwrap();
        assert!(matches!(match_complexes(&a, &b, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn error_percentages() {
        let truth: BTreeMap<usize, usize> = (0..30).map(|i| (i, i)).collect();
        let perfect: Vec<_> = (0..30).map(|i| (i, i)).collect();
        assert_eq!(match_error(&result_with(&perfect), &truth, ErrorMode::Strict), Some(0.0));

        let wrong: Vec<_> = (0..30).map(|i| (i, (i + 1) % 30)).collect();
        assert_eq!(match_error(&result_with(&wrong), &truth, ErrorMode::Strict), Some(100.0));

        let half: Vec<_> = (0..30).map(|i| (i, if i < 15 { i } else { 29 - (i - 15) + 100 })).collect();
        assert_eq!(match_error(&result_with(&half), &truth, ErrorMode::Strict), Some(50.0));

        let partial: Vec<_> = (0..10).map(|i| (i, i)).collect();
        assert!((match_error(&result_with(&partial), &truth, ErrorMode::Strict).unwrap() - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(match_error(&result_with(&partial), &truth, ErrorMode::Lenient), Some(0.0));

        assert_eq!(match_error(&result_with(&perfect), &BTreeMap::new(), ErrorMode::Strict), None);
        assert_eq!(match_error(&result_with(&[]), &truth, ErrorMode::Lenient), None);
    }

    /// Dense `‖G X − X G'‖²_F` with explicit matrix products.
    fn dense_misalignment(g: &[Vec<usize>], g2: &[Vec<usize>], map: &[(usize, usize)]) -> usize {
        let (n, m) = (g.len(), g2.len());
        let dense = |adj: &[Vec<usize>], k: usize| {
            let mut d = vec![vec![0i64; k]; k];
            for (i, row) in adj.iter().enumerate() {
                for &j in row {
                    d[i][j] = 1;
                }
            }
            d
        };
        let (a, b) = (dense(g, n), dense(g2, m));
        let mut x = vec![vec![0i64; m]; n];
        for &(i, j) in map {
            x[i][j] = 1;
        }
        let mut total = 0;
        for i in 0..n {
            for j in 0..m {
                let ax: i64 = (0..n).map(|t| a[i][t] * x[t][j]).sum();
                let xb: i64 = (0..m).map(|t| x[i][t] * b[t][j]).sum();
                total += (ax - xb).pow(2);
            }
        }
        total as usize
    }

    #[test]
    fn misalignment_matches_dense_products() {
        let g = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(frobenius_misalignment(&g, &g, &[(0, 0), (1, 1), (2, 2)]), 0);
        let swapped = [(0, 1), (1, 0), (2, 2)];
        assert_eq!(frobenius_misalignment(&g, &g, &swapped), dense_misalignment(&g, &g, &swapped));

        let mut r = rng::seeded(5);
        for _ in 0..200 {
            let ga = crate::graph::erdos_renyi(7, 0.4, r.random()).unwrap().adjacency_lists();
            let gb = crate::graph::erdos_renyi(6, 0.4, r.random()).unwrap().adjacency_lists();
            let mut cols: Vec<usize> = (0..6).collect();
            rand::seq::SliceRandom::shuffle(&mut cols[..], &mut r);
            let map: Vec<(usize, usize)> = (0..7)
                .zip(cols)
                .filter(|_| r.random_bool(0.7))
                .collect();
            assert_eq!(frobenius_misalignment(&ga, &gb, &map), dense_misalignment(&ga, &gb, &map));
        }
    }

    fn brute_improving_swaps(g: &[Vec<usize>], g2: &[Vec<usize>], map: &[(usize, usize)]) -> usize {
        let base = dense_misalignment(g, g2, map);
        let mut count = 0;
        for x in 0..map.len() {
            for y in (x + 1)..map.len() {
                let mut t = map.to_vec();
                t[x].1 = map[y].1;
                t[y].1 = map[x].1;
                if dense_misalignment(g, g2, &t) < base {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn local_swap_scoring_matches_full_recount() {
        let mut r = rng::seeded(9);
        for _ in 0..200 {
            let ga = crate::graph::erdos_renyi(8, 0.4, r.random()).unwrap().adjacency_lists();
            let gb = crate::graph::erdos_renyi(7, 0.4, r.random()).unwrap().adjacency_lists();
            let mut cols: Vec<usize> = (0..7).collect();
            rand::seq::SliceRandom::shuffle(&mut cols[..], &mut r);
            let map: Vec<(usize, usize)> = (0..8)
                .zip(cols)
                .filter(|_| r.random_bool(0.8))
                .collect();
            assert_eq!(count_improving_swaps(&ga, &gb, &map), brute_improving_swaps(&ga, &gb, &map));
        }
    }

    #[test]
    fn tau_drops_expensive_pairs() {
        let f = random_frame(20, 4);
        let g = random_frame(20, 5);
        let cfg = MatchConfig {
            tau: 0.0,
            ..MatchConfig::default()
        };
        let r = match_frames(&f, &g, &cfg).unwrap();
        for (k, d) in r.dims.iter().enumerate() {
            assert!(d.pairs.iter().all(|p| p.cost <= 0.0));
            let na = r_counts(&f, &cfg, k);
            assert_eq!(d.pairs.len() + d.unmatched_a.len(), na);
        }
    }

    fn r_counts(f: &Frame, cfg: &MatchConfig, k: usize) -> usize {
        let g = knn_bernoulli_graph(f, cfg.k_nn, cfg.p, cfg.seed_a).unwrap();
        enumerate_cliques(&g, cfg.h).unwrap().cliques(k).len()
    }

    #[test]
    fn csv_has_summary_rows() {
        let f = random_frame(15, 8);
        let r = match_frames(&f, &f, &MatchConfig { share_seed: true, ..MatchConfig::default() }).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("dim,clique_a,clique_b,cost\n"));
        assert_eq!(csv.lines().filter(|l| l.contains(",summary,")).count(), 3);
        // highest dimension first
        assert!(csv.lines().nth(1).unwrap().starts_with('2'));
    }

    #[test]
    fn voting_agrees_on_self_match() {
        let f = random_frame(20, 12);
        let cfg = MatchConfig {
            share_seed: true,
            vote: true,
            ..MatchConfig::default()
        };
        let r = match_frames(&f, &f, &cfg).unwrap();
        assert!(r.vertex_correspondence.iter().all(|(a, b)| a == b));
    }
}

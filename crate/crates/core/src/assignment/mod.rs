//! Cost construction, the assignment solver and the matching pipeline.

pub mod cost;
pub mod hungarian;
pub mod pipeline;

pub use cost::{build_cost_matrix, weight_distance};
pub use hungarian::{hungarian, Assignment, CostMatrix};
pub use pipeline::{
    build_graph_pair, frobenius_misalignment, match_complexes, match_error, match_error_counts, match_frames, shared_id_truth,
    transport_graph, DimensionMatch, ErrorCounts, ErrorMode, MatchConfig, MatchResult, MatchedPair, PreparedComplex,
};

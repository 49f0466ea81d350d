//! The tree codec: encode a series into a maximum binary search tree, decode
//! visibility graphs from it, and merge trees to take in new data online.

mod counts;
mod decode;
mod snapshot;
mod tree;

pub use counts::{
    balanced_tree_residual_checks, line_residual_checks, per_node_residual_count,
    residual_check_formula_balanced,
};
pub use decode::{
    decode_hvg, decode_hvg_with, decode_nvg, decode_nvg_with, CheckCounter, DecodeProbe,
};
pub use snapshot::{from_snapshot, to_snapshot, SnapshotError};
pub use tree::{encode, BstNode, InvariantViolation, MaxBst, NodeId, Preorder, TreeError};

use crate::graph::{Criterion, VisibilityGraph};
use crate::series::TimeSeries;

/// Decodes with the given criterion.
pub fn decode(tree: &MaxBst, series: &TimeSeries, criterion: Criterion) -> VisibilityGraph {
    match criterion {
        Criterion::Horizontal => decode_hvg(tree, series),
        Criterion::Natural => decode_nvg(tree, series),
    }
}

/// Encode then decode.
pub fn bst_build(series: &TimeSeries, criterion: Criterion) -> VisibilityGraph {
    decode(&encode(series), series, criterion)
}

/// Encode then decode, counting decoder work.
pub fn bst_build_counted(
    series: &TimeSeries,
    criterion: Criterion,
    counter: &mut CheckCounter,
) -> VisibilityGraph {
    let tree = encode(series);
    match criterion {
        Criterion::Horizontal => decode_hvg_with(&tree, series, counter),
        Criterion::Natural => decode_nvg_with(&tree, series, counter),
    }
}

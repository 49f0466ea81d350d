//! Visibility graphs of time series.
//!
//! Three interchangeable constructions produce the same graphs:
//! [`reference::basic`] checks every pair, [`reference::dc_build`] recurses on
//! segment maxima, and the [`codec`] encodes the series into a maximum binary
//! search tree and decodes graphs from its structure. Trees can be merged, so
//! new batches of points are absorbed without rebuilding ([`stream`]).
//!
//! ```
//! use visbst::{build_graph, AlgorithmId, Criterion, TimeSeries};
//!
//! let s = TimeSeries::from_values(&[3.0, 1.0, 2.0, 4.0]).unwrap();
//! let g = build_graph(&s, AlgorithmId::BstCodec, Criterion::Horizontal);
//! assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]);
//! ```

pub mod bench;
pub mod codec;
pub mod generators;
pub mod graph;
pub mod reference;
pub mod series;
pub mod stream;
pub mod text;
pub mod visibility;

pub use graph::{graph_equal, Criterion, GraphBuilder, VisibilityGraph};
pub use reference::AlgorithmId;
pub use series::{Point, SeriesError, TimeSeries};

/// Builds the graph of `series` with the chosen algorithm.
pub fn build_graph(
    series: &TimeSeries,
    algorithm: AlgorithmId,
    criterion: Criterion,
) -> VisibilityGraph {
    match algorithm {
        AlgorithmId::Basic => reference::basic(series, criterion),
        AlgorithmId::DivideConquer => reference::dc_build(series, criterion),
        AlgorithmId::BstCodec => codec::bst_build(series, criterion),
    }
}

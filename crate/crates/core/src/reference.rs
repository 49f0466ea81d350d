//! Baseline constructions: the basic all-pairs method and divide & conquer.
//!
//! Both serve as ground truth for the tree codec and as benchmark baselines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{Criterion, GraphBuilder, VisibilityGraph};
use crate::series::{Point, TimeSeries};
use crate::visibility::{HorizontalSweep, NaturalSweep};

/// Construction algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmId {
    #[serde(rename = "basic")]
    Basic,
    #[serde(rename = "dc")]
    DivideConquer,
    #[serde(rename = "bst")]
    BstCodec,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 3] = [
        AlgorithmId::Basic,
        AlgorithmId::DivideConquer,
        AlgorithmId::BstCodec,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::Basic => "basic",
            AlgorithmId::DivideConquer => "dc",
            AlgorithmId::BstCodec => "bst",
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(AlgorithmId::Basic),
            "dc" => Ok(AlgorithmId::DivideConquer),
            "bst" => Ok(AlgorithmId::BstCodec),
            other => Err(format!(
                "unknown algorithm `{other}` (expected basic, dc or bst)"
            )),
        }
    }
}

/// Natural visibility graph by checking every pair.
pub fn basic_nvg(series: &TimeSeries) -> VisibilityGraph {
    basic_nvg_counted(series).0
}

/// [`basic_nvg`] together with the number of pair evaluations, always `n(n-1)/2`.
pub fn basic_nvg_counted(series: &TimeSeries) -> (VisibilityGraph, u64) {
    let pts = series.points();
    let mut graph = GraphBuilder::for_series(series);
    let mut evaluations = 0u64;
    for (a, &anchor) in pts.iter().enumerate() {
        let mut sweep = NaturalSweep::new(anchor);
        for &p in &pts[a + 1..] {
            evaluations += 1;
            if sweep.observe(p) {
                graph.add_edge(anchor.index, p.index);
            }
        }
    }
    (graph.build(), evaluations)
}

/// Horizontal visibility graph, scanning right from each point until the
/// first value at least as tall as it.
pub fn basic_hvg(series: &TimeSeries) -> VisibilityGraph {
    let pts = series.points();
    let mut graph = GraphBuilder::for_series(series);
    for (a, &anchor) in pts.iter().enumerate() {
        let mut sweep = HorizontalSweep::new(anchor.value);
        for &p in &pts[a + 1..] {
            if sweep.observe(p.value) {
                graph.add_edge(anchor.index, p.index);
            }
            if sweep.exhausted() {
                break;
            }
        }
    }
    graph.build()
}

pub fn basic(series: &TimeSeries, criterion: Criterion) -> VisibilityGraph {
    match criterion {
        Criterion::Horizontal => basic_hvg(series),
        Criterion::Natural => basic_nvg(series),
    }
}

/// Position of the first maximum in `pts`. `pts` must be non-empty.
fn first_max(pts: &[Point]) -> usize {
    let mut best = 0;
    for (i, p) in pts.iter().enumerate().skip(1) {
        if p.value > pts[best].value {
            best = i;
        }
    }
    best
}

/// Divide & conquer: the segment maximum is a wall no pair across it can see
/// through, so only pairs involving the maximum are checked before splitting.
pub fn dc_build(series: &TimeSeries, criterion: Criterion) -> VisibilityGraph {
    let pts = series.points();
    let mut graph = GraphBuilder::for_series(series);
    // half-open position ranges still to process
    let mut pending = vec![(0usize, pts.len())];
    while let Some((lo, hi)) = pending.pop() {
        if hi - lo < 2 {
            continue;
        }
        let wall = lo + first_max(&pts[lo..hi]);
        let top = pts[wall];
        match criterion {
            Criterion::Natural => {
                let mut right = NaturalSweep::new(top);
                for &p in &pts[wall + 1..hi] {
                    if right.observe(p) {
                        graph.add_edge(top.index, p.index);
                    }
                }
                let mut left = NaturalSweep::new(top);
                for &p in pts[lo..wall].iter().rev() {
                    if left.observe(p) {
                        graph.add_edge(top.index, p.index);
                    }
                }
            }
            Criterion::Horizontal => {
                let mut right = HorizontalSweep::new(top.value);
                for &p in &pts[wall + 1..hi] {
                    if right.observe(p.value) {
                        graph.add_edge(top.index, p.index);
                    }
                    if right.exhausted() {
                        break;
                    }
                }
                let mut left = HorizontalSweep::new(top.value);
                for &p in pts[lo..wall].iter().rev() {
                    if left.observe(p.value) {
                        graph.add_edge(top.index, p.index);
                    }
                }
            }
        }
        pending.push((wall + 1, hi));
        pending.push((lo, wall));
    }
    graph.build()
}

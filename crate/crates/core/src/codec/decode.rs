//! Decoding a maximum binary search tree into visibility graphs.
//!
//! Every visible pair is an ancestor/descendant pair in the tree: any other
//! pair has their common ancestor between them, at least as tall as both.
//! Each pair is therefore handled once, from the upper node.
//!
//! From a node `p`:
//! - every node on the left-most branch of `p.right` is visible (each one is
//!   the tallest point between `p` and itself), tree edges included;
//! - every node `x` on the right-most branch of `p.left` is visible unless
//!   `x.right` has the same value as `x`, in which case that equal point
//!   hides `x` from the right. A run of equal values shows only its last
//!   member to viewers on its right.
//!
//! These rules give the whole horizontal graph. The natural graph adds one
//! explicit check per remaining node in `p`'s subtrees, done with a slope
//! sweep outward from `p` so each check is constant time.

use std::collections::BTreeMap;

use crate::codec::tree::{MaxBst, NodeId};
use crate::graph::{GraphBuilder, VisibilityGraph};
use crate::series::TimeSeries;
use crate::visibility::NaturalSweep;

/// Observer for decode events. The unit type ignores everything.
pub trait DecodeProbe {
    /// A tree edge (parent to child).
    #[inline]
    fn tree_edge(&mut self) {}
    /// An edge settled by the branch rules without a criterion evaluation.
    #[inline]
    fn rule_edge(&mut self) {}
    /// One explicit natural-visibility evaluation made on behalf of `anchor`.
    #[inline]
    fn residual_check(&mut self, _anchor: i64) {}
}

impl DecodeProbe for () {}

/// Counts of decode work, for checking the complexity formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckCounter {
    /// Parent/child edges of the tree.
    pub tree_edges: u64,
    /// All edges settled by the rules, tree edges included.
    pub rule_edges: u64,
    /// Explicit natural-visibility evaluations.
    pub residual_checks: u64,
    per_node: Option<BTreeMap<i64, u64>>,
}

impl CheckCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Also records residual checks per anchoring node.
    pub fn per_node() -> Self {
        Self {
            per_node: Some(BTreeMap::new()),
            ..Self::default()
        }
    }

    /// Residual checks made from the node with `index`, if per-node recording is on.
    pub fn residual_checks_of(&self, index: i64) -> Option<u64> {
        self.per_node
            .as_ref()
            .map(|m| m.get(&index).copied().unwrap_or(0))
    }
}

impl DecodeProbe for CheckCounter {
    fn tree_edge(&mut self) {
        self.tree_edges += 1;
    }

    fn rule_edge(&mut self) {
        self.rule_edges += 1;
    }

    fn residual_check(&mut self, anchor: i64) {
        self.residual_checks += 1;
        if let Some(m) = &mut self.per_node {
            *m.entry(anchor).or_default() += 1;
        }
    }
}

/// Positions of tree nodes within the series, checked against it.
struct Layout {
    pos: Vec<usize>,
    by_pos: Vec<NodeId>,
    size: Vec<usize>,
}

impl Layout {
    fn new(tree: &MaxBst, series: &TimeSeries) -> Self {
        let by_pos = tree.inorder();
        assert_eq!(
            by_pos.len(),
            series.len(),
            "tree and series differ in length"
        );
        let mut pos = vec![0; tree.len()];
        for (p, (&id, point)) in by_pos.iter().zip(series.points()).enumerate() {
            assert_eq!(
                tree.node(id).index,
                point.index,
                "tree does not encode this series"
            );
            pos[id.get()] = p;
        }
        Self {
            pos,
            by_pos,
            size: tree.subtree_sizes(),
        }
    }

    fn size_of(&self, id: Option<NodeId>) -> usize {
        id.map_or(0, |c| self.size[c.get()])
    }
}

/// Walks the branch starting at `start`, following `next` links.
fn branch(
    tree: &MaxBst,
    start: Option<NodeId>,
    next: fn(&MaxBst, NodeId) -> Option<NodeId>,
) -> impl Iterator<Item = NodeId> + '_ {
    std::iter::successors(start, move |&id| next(tree, id))
}

/// Visits the rule-determined neighbours of `p`: `on_right` for the left-most
/// branch of the right subtree, `on_left` for the visible part of the
/// right-most branch of the left subtree.
fn for_rule_neighbours(
    tree: &MaxBst,
    series: &TimeSeries,
    layout: &Layout,
    p: NodeId,
    mut visit: impl FnMut(NodeId, bool),
) {
    let value = |id: NodeId| series.points()[layout.pos[id.get()]].value;
    let right = tree.right(p);
    for x in branch(tree, right, MaxBst::left) {
        visit(x, Some(x) == right);
    }
    let left = tree.left(p);
    for x in branch(tree, left, MaxBst::right) {
        let hidden = tree.right(x).is_some_and(|r| value(r) == value(x));
        if !hidden {
            visit(x, Some(x) == left);
        }
    }
}

pub fn decode_hvg(tree: &MaxBst, series: &TimeSeries) -> VisibilityGraph {
    decode_hvg_with(tree, series, &mut ())
}

pub fn decode_hvg_with(
    tree: &MaxBst,
    series: &TimeSeries,
    probe: &mut impl DecodeProbe,
) -> VisibilityGraph {
    let layout = Layout::new(tree, series);
    let mut graph = GraphBuilder::for_series(series);
    for p in layout.by_pos.iter().copied() {
        let from = tree.node(p).index;
        for_rule_neighbours(tree, series, &layout, p, |x, is_child| {
            if is_child {
                probe.tree_edge();
            }
            probe.rule_edge();
            graph.add_edge(from, tree.node(x).index);
        });
    }
    graph.build()
}

pub fn decode_nvg(tree: &MaxBst, series: &TimeSeries) -> VisibilityGraph {
    decode_nvg_with(tree, series, &mut ())
}

pub fn decode_nvg_with(
    tree: &MaxBst,
    series: &TimeSeries,
    probe: &mut impl DecodeProbe,
) -> VisibilityGraph {
    let layout = Layout::new(tree, series);
    let pts = series.points();
    let mut graph = GraphBuilder::for_series(series);
    // settled_by[pos] == anchor + 1 marks positions the rules already decided for anchor
    let mut settled_by = vec![0usize; pts.len()];
    for (at, &p) in layout.by_pos.iter().enumerate() {
        let anchor = pts[at];
        for_rule_neighbours(tree, series, &layout, p, |x, is_child| {
            if is_child {
                probe.tree_edge();
            }
            probe.rule_edge();
            settled_by[layout.pos[x.get()]] = at + 1;
            graph.add_edge(anchor.index, tree.node(x).index);
        });

        let right_end = at + layout.size_of(tree.right(p));
        let left_end = at - layout.size_of(tree.left(p));
        let mut sweep = NaturalSweep::new(anchor);
        for q in at + 1..=right_end {
            step(
                &mut sweep,
                &mut graph,
                probe,
                anchor.index,
                pts[q],
                settled_by[q] == at + 1,
            );
        }
        let mut sweep = NaturalSweep::new(anchor);
        for q in (left_end..at).rev() {
            step(
                &mut sweep,
                &mut graph,
                probe,
                anchor.index,
                pts[q],
                settled_by[q] == at + 1,
            );
        }
    }
    graph.build()
}

#[inline]
fn step(
    sweep: &mut NaturalSweep,
    graph: &mut GraphBuilder,
    probe: &mut impl DecodeProbe,
    anchor: i64,
    q: crate::series::Point,
    settled: bool,
) {
    if settled {
        sweep.accept(q);
    } else {
        probe.residual_check(anchor);
        if sweep.observe(q) {
            graph.add_edge(anchor, q.index);
        }
    }
}

//! Arena-backed maximum binary search tree: BST on index, max-heap on value.

use std::fmt;

use thiserror::Error;

use crate::series::{Point, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub(crate) fn new(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("tree exceeds u32::MAX nodes"))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BstNode {
    pub index: i64,
    pub value: f64,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
}

impl BstNode {
    fn leaf(index: i64, value: f64) -> Self {
        Self {
            index,
            value,
            left: None,
            right: None,
        }
    }

    pub fn point(&self) -> Point {
        Point::new(self.index, self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("index {0} is already present")]
    DuplicateIndex(i64),
    #[error("inserting index {index} with value {value} under ancestor {ancestor} with value {ancestor_value} breaks max-heap order")]
    HeapViolation {
        index: i64,
        value: f64,
        ancestor: i64,
        ancestor_value: f64,
    },
    #[error("value at index {0} is not finite")]
    NonFinite(i64),
}

/// A violated structural invariant found by [`MaxBst::check_invariants`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantViolation {
    #[error("node {child} is out of search order below {parent}")]
    Order { parent: i64, child: i64 },
    #[error("node {child} outranks its parent {parent} (larger value, or equal value and smaller index)")]
    Heap { parent: i64, child: i64 },
    #[error("{reachable} nodes reachable but size is {size}")]
    Size { reachable: usize, size: usize },
}

/// Where a subtree hangs: the tree root or a child link of an arena node.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Root,
    Left(NodeId),
    Right(NodeId),
}

/// Maximum binary search tree over the points of a series.
///
/// In-order traversal yields indices ascending; every node's value is at
/// least the value of everything below it. Among equal values the smallest
/// index sits highest, which makes the tree unique for any input.
#[derive(Debug, Clone, Default)]
pub struct MaxBst {
    nodes: Vec<BstNode>,
    root: Option<NodeId>,
}

impl MaxBst {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &BstNode {
        &self.nodes[id.get()]
    }

    #[inline]
    pub fn left(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.get()].left
    }

    #[inline]
    pub fn right(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.get()].right
    }

    fn set(&mut self, slot: Slot, child: Option<NodeId>) {
        match slot {
            Slot::Root => self.root = child,
            Slot::Left(p) => self.nodes[p.get()].left = child,
            Slot::Right(p) => self.nodes[p.get()].right = child,
        }
    }

    fn push(&mut self, index: i64, value: f64) -> NodeId {
        let id = NodeId::new(self.nodes.len());
        self.nodes.push(BstNode::leaf(index, value));
        id
    }

    /// Walks down by index to the empty slot for `index`.
    fn find_slot(&self, index: i64) -> Result<(Slot, Option<NodeId>), TreeError> {
        let mut slot = Slot::Root;
        let mut parent = None;
        let mut cur = self.root;
        while let Some(id) = cur {
            let node = self.node(id);
            if index == node.index {
                return Err(TreeError::DuplicateIndex(index));
            }
            parent = Some(id);
            if index < node.index {
                slot = Slot::Left(id);
                cur = node.left;
            } else {
                slot = Slot::Right(id);
                cur = node.right;
            }
        }
        Ok((slot, parent))
    }

    /// Plain BST insertion by index; heap order is the caller's concern.
    fn insert_leaf(&mut self, index: i64, value: f64) -> Result<NodeId, TreeError> {
        let (slot, _) = self.find_slot(index)?;
        let id = self.push(index, value);
        self.set(slot, Some(id));
        Ok(id)
    }

    /// Inserts `p` at the first empty slot on its index path.
    ///
    /// Only valid when `p` ranks below every node on that path (smaller
    /// value, or equal value and larger index); a higher-ranked point
    /// belongs further up and must be merged in instead.
    pub fn add_point(&mut self, p: Point) -> Result<(), TreeError> {
        if !p.value.is_finite() {
            return Err(TreeError::NonFinite(p.index));
        }
        let (slot, parent) = self.find_slot(p.index)?;
        // values only shrink going down, so the parent is the tightest bound
        if let Some(parent) = parent {
            let ancestor = self.node(parent);
            if p.value > ancestor.value || (p.value == ancestor.value && p.index < ancestor.index) {
                return Err(TreeError::HeapViolation {
                    index: p.index,
                    value: p.value,
                    ancestor: ancestor.index,
                    ancestor_value: ancestor.value,
                });
            }
        }
        let id = self.push(p.index, p.value);
        self.set(slot, Some(id));
        Ok(())
    }

    /// Nodes in pre-order with their depth (root depth 0).
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder {
            tree: self,
            stack: self.root.map(|r| (r, 0)).into_iter().collect(),
        }
    }

    /// Node ids in ascending index order.
    pub fn inorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut cur = self.root;
        loop {
            while let Some(id) = cur {
                stack.push(id);
                cur = self.left(id);
            }
            match stack.pop() {
                Some(id) => {
                    out.push(id);
                    cur = self.right(id);
                }
                None => break,
            }
        }
        out
    }

    /// Longest root-to-leaf path in edges; 0 for empty and single-node trees.
    pub fn height(&self) -> usize {
        self.preorder().map(|(_, d)| d).max().unwrap_or(0)
    }

    /// Height of every node (edges on the longest downward path), keyed by arena id.
    pub fn node_heights(&self) -> Vec<usize> {
        let order: Vec<NodeId> = self.preorder().map(|(id, _)| id).collect();
        let mut height = vec![0usize; self.len()];
        for &id in order.iter().rev() {
            let below = [self.left(id), self.right(id)]
                .into_iter()
                .flatten()
                .map(|c| height[c.get()] + 1)
                .max()
                .unwrap_or(0);
            height[id.get()] = below;
        }
        height
    }

    /// Number of nodes in each subtree, keyed by arena id.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let order: Vec<NodeId> = self.preorder().map(|(id, _)| id).collect();
        let mut size = vec![0usize; self.len()];
        for &id in order.iter().rev() {
            size[id.get()] = 1
                + self.left(id).map_or(0, |c| size[c.get()])
                + self.right(id).map_or(0, |c| size[c.get()]);
        }
        size
    }

    /// True when every internal node has exactly two children and all leaves share one depth.
    pub fn is_perfect(&self) -> bool {
        let n = self.len();
        n > 0 && (n + 1).is_power_of_two() && self.height() == (n + 1).trailing_zeros() as usize - 1
    }

    /// Full traversal checking search order, heap order and reachability.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        let mut reachable = 0usize;
        // (node, exclusive lower bound, exclusive upper bound)
        let mut stack: Vec<(NodeId, Option<i64>, Option<i64>)> =
            self.root.map(|r| (r, None, None)).into_iter().collect();
        while let Some((id, lo, hi)) = stack.pop() {
            reachable += 1;
            if reachable > self.len() {
                break;
            }
            let node = self.node(id);
            for (child, lo, hi) in [
                (node.left, lo, Some(node.index)),
                (node.right, Some(node.index), hi),
            ] {
                let Some(child) = child else { continue };
                let c = self.node(child);
                if lo.is_some_and(|lo| c.index <= lo) || hi.is_some_and(|hi| c.index >= hi) {
                    return Err(InvariantViolation::Order {
                        parent: node.index,
                        child: c.index,
                    });
                }
                if c.value > node.value || (c.value == node.value && c.index < node.index) {
                    return Err(InvariantViolation::Heap {
                        parent: node.index,
                        child: c.index,
                    });
                }
                stack.push((child, lo, hi));
            }
        }
        if reachable != self.len() {
            return Err(InvariantViolation::Size {
                reachable,
                size: self.len(),
            });
        }
        Ok(())
    }

    /// Same shape with the same `(index, value)` at every position.
    pub fn structurally_eq(&self, other: &MaxBst) -> bool {
        self.len() == other.len()
            && self
                .preorder()
                .zip(other.preorder())
                .all(|((a, da), (b, db))| {
                    let (a, b) = (self.node(a), other.node(b));
                    da == db && a.index == b.index && a.value == b.value
                })
    }

    /// Points in index order.
    pub fn to_series(&self) -> TimeSeries {
        TimeSeries::new(
            self.inorder()
                .into_iter()
                .map(|id| self.node(id).point())
                .collect(),
        )
        .expect("tree in-order is strictly ascending")
    }

    /// Merges two trees with disjoint index sets into one.
    ///
    /// Roots are compared first; the larger value keeps the position and the
    /// other tree travels down towards the side its index belongs to. When a
    /// travelling subtree straddles the chosen node, the links that cross it
    /// are cut and each part continues down its own side. Equal values are
    /// won by the smaller index, so the result is exactly the tree `encode`
    /// would build from the combined points.
    ///
    /// Both inputs are consumed; on `DuplicateIndex` the partial result is discarded.
    pub fn merge(self, other: MaxBst) -> Result<MaxBst, TreeError> {
        // adopt the smaller arena into the larger one
        let (mut base, extra) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if extra.is_empty() {
            return Ok(base);
        }
        let offset = base.nodes.len();
        let shift = |c: Option<NodeId>| c.map(|c| NodeId::new(c.get() + offset));
        base.nodes.extend(extra.nodes.into_iter().map(|mut n| {
            n.left = shift(n.left);
            n.right = shift(n.right);
            n
        }));
        let extra_root = shift(extra.root);

        let mut work = vec![(base.root, extra_root, Slot::Root)];
        while let Some((a, b, slot)) = work.pop() {
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (a, b),
                (only, None) | (None, only) => {
                    base.set(slot, only);
                    continue;
                }
            };
            let (winner, loser) = if base.outranks(a, b) { (a, b) } else { (b, a) };
            let (below, above) = base.split(Some(loser), base.node(winner).index)?;
            base.set(slot, Some(winner));
            let w = base.node(winner);
            work.push((w.right, above, Slot::Right(winner)));
            work.push((w.left, below, Slot::Left(winner)));
        }
        Ok(base)
    }

    /// Higher value wins; equal values go to the smaller index.
    #[inline]
    fn outranks(&self, a: NodeId, b: NodeId) -> bool {
        let (a, b) = (self.node(a), self.node(b));
        a.value > b.value || (a.value == b.value && a.index < b.index)
    }

    /// Splits the subtree at `cur` into the parts below and above `key`.
    fn split(
        &mut self,
        mut cur: Option<NodeId>,
        key: i64,
    ) -> Result<(Option<NodeId>, Option<NodeId>), TreeError> {
        let (mut below_root, mut above_root) = (None, None);
        // last node attached to each part; the next one hangs off its inner side
        let (mut below_tail, mut above_tail): (Option<NodeId>, Option<NodeId>) = (None, None);
        while let Some(id) = cur {
            let index = self.node(id).index;
            if index == key {
                return Err(TreeError::DuplicateIndex(key));
            }
            if index < key {
                match below_tail {
                    None => below_root = Some(id),
                    Some(t) => self.nodes[t.get()].right = Some(id),
                }
                below_tail = Some(id);
                cur = self.right(id);
            } else {
                match above_tail {
                    None => above_root = Some(id),
                    Some(t) => self.nodes[t.get()].left = Some(id),
                }
                above_tail = Some(id);
                cur = self.left(id);
            }
        }
        if let Some(t) = below_tail {
            self.nodes[t.get()].right = None;
        }
        if let Some(t) = above_tail {
            self.nodes[t.get()].left = None;
        }
        Ok((below_root, above_root))
    }

    pub(crate) fn from_parts(nodes: Vec<BstNode>, root: Option<NodeId>) -> Self {
        Self { nodes, root }
    }
}

impl PartialEq for MaxBst {
    fn eq(&self, other: &Self) -> bool {
        self.structurally_eq(other)
    }
}

pub struct Preorder<'a> {
    tree: &'a MaxBst,
    stack: Vec<(NodeId, usize)>,
}

impl Iterator for Preorder<'_> {
    type Item = (NodeId, usize);

    fn next(&mut self) -> Option<Self::Item> {
        let (id, depth) = self.stack.pop()?;
        let node = self.tree.node(id);
        if let Some(r) = node.right {
            self.stack.push((r, depth + 1));
        }
        if let Some(l) = node.left {
            self.stack.push((l, depth + 1));
        }
        Some((id, depth))
    }
}

/// Builds the tree by sorting points by descending value (ties keep index
/// order) and inserting their indices one after another.
pub fn encode(series: &TimeSeries) -> MaxBst {
    let pts = series.points();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    // stable: equal values keep ascending index order
    order.sort_by(|&a, &b| {
        pts[b]
            .value
            .partial_cmp(&pts[a].value)
            .expect("finite values")
    });
    let mut tree = MaxBst {
        nodes: Vec::with_capacity(pts.len()),
        root: None,
    };
    for i in order {
        tree.insert_leaf(pts[i].index, pts[i].value)
            .expect("series indices are unique");
    }
    tree
}

impl fmt::Display for MaxBst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, depth) in self.preorder() {
            let n = self.node(id);
            writeln!(f, "{depth} {} {}", n.index, n.value)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(values: &[f64]) -> MaxBst {
        encode(&TimeSeries::from_values(values).unwrap())
    }

    fn idx(t: &MaxBst, id: Option<NodeId>) -> Option<i64> {
        id.map(|id| t.node(id).index)
    }

    #[test]
    fn encode_follows_value_rank() {
        // descending values sit at positions 5, 4, 2, 8
        let mut values = [0.0; 10];
        for (rank, pos) in [5usize, 4, 2, 8].into_iter().enumerate() {
            values[pos] = 10.0 - rank as f64;
        }
        let t = tree(&values);
        let root = t.root().unwrap();
        assert_eq!(t.node(root).index, 5);
        let four = t.left(root).unwrap();
        assert_eq!(t.node(four).index, 4);
        assert_eq!(idx(&t, t.left(four)), Some(2));
        assert_eq!(idx(&t, t.right(root)), Some(8));
        t.check_invariants().unwrap();
    }

    #[test]
    fn increasing_series_is_a_left_line() {
        let t = tree(&[1.0, 2.0, 3.0]);
        let root = t.root().unwrap();
        assert_eq!(t.node(root).index, 2);
        let one = t.left(root).unwrap();
        assert_eq!(t.node(one).index, 1);
        assert_eq!(idx(&t, t.left(one)), Some(0));
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn ties_keep_first_index_on_top() {
        let t = tree(&[2.0, 2.0]);
        let root = t.root().unwrap();
        assert_eq!(t.node(root).index, 0);
        assert_eq!(idx(&t, t.right(root)), Some(1));
    }

    #[test]
    fn add_point_cases() {
        let mut t = MaxBst::new();
        t.add_point(Point::new(0, 5.0)).unwrap();
        assert_eq!(t.len(), 1);

        let mut t = tree(&[3.0, 1.0]);
        t.add_point(Point::new(2, 0.5)).unwrap();
        let one = t.right(t.root().unwrap()).unwrap();
        assert_eq!(idx(&t, t.right(one)), Some(2));
        t.check_invariants().unwrap();

        let mut t = tree(&[3.0, 1.0]);
        assert!(matches!(
            t.add_point(Point::new(2, 9.0)),
            Err(TreeError::HeapViolation { ancestor: 1, .. })
        ));
        assert_eq!(
            t.add_point(Point::new(1, 0.0)),
            Err(TreeError::DuplicateIndex(1))
        );
        assert_eq!(t.len(), 2);

        // an equal value may hang to the right of its parent but not to the left
        let mut t = encode(&TimeSeries::new(vec![Point::new(5, 4.0)]).unwrap());
        t.add_point(Point::new(7, 4.0)).unwrap();
        t.check_invariants().unwrap();
        assert!(matches!(
            t.add_point(Point::new(3, 4.0)),
            Err(TreeError::HeapViolation { ancestor: 5, .. })
        ));
    }

    #[test]
    fn merge_append_matches_encode() {
        let a = tree(&[1.0, 2.0]);
        let b = encode(&TimeSeries::new(vec![Point::new(2, 3.0)]).unwrap());
        let merged = a.merge(b).unwrap();
        assert_eq!(merged, tree(&[1.0, 2.0, 3.0]));
        merged.check_invariants().unwrap();
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let t = tree(&[4.0, 1.0, 3.0]);
        assert_eq!(MaxBst::new().merge(t.clone()).unwrap(), t);
        assert_eq!(t.clone().merge(MaxBst::new()).unwrap(), t);
    }

    #[test]
    fn merge_cuts_straddling_child() {
        // existing points at even indices, batch at odd ones
        let full = [5.0, 9.0, 2.0, 7.0, 8.0, 1.0, 3.0, 6.0];
        let (mut evens, mut odds) = (vec![], vec![]);
        for (i, &v) in full.iter().enumerate() {
            let p = Point::new(i as i64, v);
            if i % 2 == 0 {
                evens.push(p)
            } else {
                odds.push(p)
            }
        }
        let a = encode(&TimeSeries::new(evens).unwrap());
        let b = encode(&TimeSeries::new(odds).unwrap());
        let merged = a.merge(b).unwrap();
        merged.check_invariants().unwrap();
        assert_eq!(merged, tree(&full));
    }

    #[test]
    fn merge_rejects_shared_index() {
        let a = tree(&[1.0, 2.0]);
        let b = encode(&TimeSeries::new(vec![Point::new(1, 0.5)]).unwrap());
        assert_eq!(a.merge(b), Err(TreeError::DuplicateIndex(1)));
    }

    #[test]
    fn invariant_checker_catches_corruption() {
        let mut t = tree(&[1.0, 3.0, 2.0]);
        t.check_invariants().unwrap();
        let root = t.root().unwrap().get();
        t.nodes[root].value = 0.0;
        assert!(matches!(
            t.check_invariants(),
            Err(InvariantViolation::Heap { .. })
        ));

        let mut t = tree(&[1.0, 3.0, 2.0]);
        let left = t.left(t.root().unwrap()).unwrap().get();
        t.nodes[left].index = 7;
        assert!(matches!(
            t.check_invariants(),
            Err(InvariantViolation::Order { .. })
        ));

        let mut t = tree(&[1.0, 3.0, 2.0]);
        let left = t.left(t.root().unwrap()).unwrap().get();
        t.nodes[left].value = 3.0;
        assert!(matches!(
            t.check_invariants(),
            Err(InvariantViolation::Heap {
                parent: 1,
                child: 0
            })
        ));
    }

    #[test]
    fn heights_and_sizes() {
        let t = tree(&[1.0, 3.0, 2.0, 7.0, 1.5, 4.0, 0.5]);
        assert!(t.is_perfect());
        let heights = t.node_heights();
        let sizes = t.subtree_sizes();
        let root = t.root().unwrap().get();
        assert_eq!(heights[root], 2);
        assert_eq!(sizes[root], 7);
        assert!(!tree(&[1.0, 2.0, 3.0]).is_perfect());
    }

    #[test]
    fn display_is_preorder_with_depth() {
        let t = tree(&[3.0, 1.0, 2.5]);
        assert_eq!(t.to_string(), "0 0 3\n1 2 2.5\n2 1 1\n");
    }
}

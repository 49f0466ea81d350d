//! Debug text form of a tree: one `depth index value` line per node, pre-order.

use thiserror::Error;

use crate::codec::tree::{BstNode, InvariantViolation, MaxBst, NodeId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SnapshotError {
    #[error("line {line}: expected `depth index value`")]
    Malformed { line: usize },
    #[error("line {line}: value is not finite")]
    NonFinite { line: usize },
    #[error("line {line}: depth {depth} has no parent at depth {}", depth.saturating_sub(1))]
    Orphan { line: usize, depth: usize },
    #[error("line {line}: child slot already taken or visited out of pre-order")]
    SlotTaken { line: usize },
    #[error(transparent)]
    Invariant(#[from] InvariantViolation),
}

/// Renders `tree` in snapshot form. Same as its `Display`.
pub fn to_snapshot(tree: &MaxBst) -> String {
    tree.to_string()
}

/// Parses a snapshot and checks both tree invariants.
///
/// Blank lines are ignored. The result renders back to the same lines.
pub fn from_snapshot(text: &str) -> Result<MaxBst, SnapshotError> {
    let mut nodes: Vec<BstNode> = Vec::new();
    let mut root = None;
    // path from the root to the last node read, as (depth, id)
    let mut path: Vec<(usize, NodeId)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut fields = raw.split_ascii_whitespace();
        let (Some(d), Some(ix), Some(v), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(SnapshotError::Malformed { line });
        };
        let (Ok(depth), Ok(index), Ok(value)) =
            (d.parse::<usize>(), ix.parse::<i64>(), v.parse::<f64>())
        else {
            return Err(SnapshotError::Malformed { line });
        };
        if !value.is_finite() {
            return Err(SnapshotError::NonFinite { line });
        }

        while path.last().is_some_and(|&(d, _)| d >= depth) {
            path.pop();
        }
        let id = NodeId::new(nodes.len());
        nodes.push(BstNode {
            index,
            value,
            left: None,
            right: None,
        });
        match path.last() {
            None if depth == 0 && root.is_none() => root = Some(id),
            Some(&(d, parent)) if d + 1 == depth => {
                let p = &mut nodes[parent.get()];
                // pre-order visits a left child before any right child
                if index < p.index && p.left.is_none() && p.right.is_none() {
                    p.left = Some(id);
                } else if index > p.index && p.right.is_none() {
                    p.right = Some(id);
                } else {
                    return Err(SnapshotError::SlotTaken { line });
                }
            }
            _ => return Err(SnapshotError::Orphan { line, depth }),
        }
        path.push((depth, id));
    }

    let tree = MaxBst::from_parts(nodes, root);
    tree.check_invariants()?;
    Ok(tree)
}

//! Online assimilation: points arrive in batches, each batch is encoded on
//! its own and merged into the running tree.

use std::collections::HashSet;

use thiserror::Error;

use crate::codec::{decode, encode, MaxBst};
use crate::graph::{Criterion, VisibilityGraph};
use crate::series::{Point, TimeSeries};
use crate::text::{parse_point, FormatError};

/// One line of stream input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StreamCommand {
    Point(Point),
    Emit(Criterion),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StreamError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("line {line}: unknown control `{text}` (expected `emit hvg` or `emit nvg`)")]
    BadControl { line: usize, text: String },
    #[error("index {0} already received")]
    DuplicateIndex(i64),
}

/// Parses `index value` or `emit hvg|nvg`. Blank lines yield `None`.
pub fn parse_stream_line(raw: &str, line: usize) -> Result<Option<StreamCommand>, StreamError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(None);
    }
    if let Some(rest) = trimmed.strip_prefix("emit") {
        if rest.is_empty() || rest.starts_with(char::is_whitespace) {
            return rest
                .trim()
                .parse::<Criterion>()
                .map(|c| Some(StreamCommand::Emit(c)))
                .map_err(|_| StreamError::BadControl {
                    line,
                    text: trimmed.to_owned(),
                });
        }
    }
    Ok(Some(StreamCommand::Point(parse_point(trimmed, line)?)))
}

#[derive(Debug, Clone)]
pub struct StreamSession {
    batch_size: usize,
    tree: MaxBst,
    pending: Vec<Point>,
    seen: HashSet<i64>,
}

impl StreamSession {
    /// `batch_size` of zero is treated as one.
    pub fn new(batch_size: usize) -> Self {
        Self {
            batch_size: batch_size.max(1),
            tree: MaxBst::new(),
            pending: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Queues a point; a full batch is merged immediately.
    pub fn push(&mut self, p: Point) -> Result<(), StreamError> {
        if !self.seen.insert(p.index) {
            return Err(StreamError::DuplicateIndex(p.index));
        }
        self.pending.push(p);
        if self.pending.len() >= self.batch_size {
            self.flush();
        }
        Ok(())
    }

    /// Merges any partial batch into the tree.
    pub fn flush(&mut self) {
        if self.pending.is_empty() {
            return;
        }
        let batch = TimeSeries::from_unordered(std::mem::take(&mut self.pending))
            .expect("indices checked on arrival");
        let tree = std::mem::take(&mut self.tree);
        self.tree = tree
            .merge(encode(&batch))
            .expect("indices checked on arrival");
    }

    /// Total points received, merged or pending.
    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    pub fn tree(&self) -> &MaxBst {
        &self.tree
    }

    /// Flushes, then decodes the graph of everything received so far.
    pub fn graph(&mut self, criterion: Criterion) -> VisibilityGraph {
        self.flush();
        decode(&self.tree, &self.tree.to_series(), criterion)
    }
}

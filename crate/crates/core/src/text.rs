//! Plain-text formats: series (`index value` per line) and edge lists (`u v` per line).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{self, Write};

use thiserror::Error;

use crate::graph::VisibilityGraph;
use crate::series::{Point, SeriesError, TimeSeries};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: expected two fields, `{expected}`")]
    FieldCount { line: usize, expected: &'static str },
    #[error("line {line}: bad integer `{text}`")]
    BadIndex { line: usize, text: String },
    #[error("line {line}: bad number `{text}`")]
    BadValue { line: usize, text: String },
    #[error("line {line}: value is not finite")]
    NonFinite { line: usize },
    #[error("line {line}: self-loop on {node}")]
    SelfLoop { line: usize, node: i64 },
    #[error("line {line}: repeated edge {u} {v}")]
    DuplicateEdge { line: usize, u: i64, v: i64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn two_fields<'a>(
    raw: &'a str,
    line: usize,
    expected: &'static str,
) -> Result<(&'a str, &'a str), FormatError> {
    let mut it = raw.split_ascii_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(FormatError::FieldCount { line, expected }),
    }
}

fn parse_index(text: &str, line: usize) -> Result<i64, FormatError> {
    text.parse().map_err(|_| FormatError::BadIndex {
        line,
        text: text.to_owned(),
    })
}

/// Parses one `index value` line.
pub fn parse_point(raw: &str, line: usize) -> Result<Point, FormatError> {
    let (i, v) = two_fields(raw, line, "index value")?;
    let index = parse_index(i, line)?;
    let value: f64 = v.parse().map_err(|_| FormatError::BadValue {
        line,
        text: v.to_owned(),
    })?;
    if !value.is_finite() {
        return Err(FormatError::NonFinite { line });
    }
    Ok(Point::new(index, value))
}

/// Parses a series file. Blank lines are skipped; lines may come in any
/// index order but indices must be unique.
pub fn parse_series(text: &str) -> Result<TimeSeries, FormatError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        points.push(parse_point(raw, i + 1)?);
    }
    Ok(TimeSeries::from_unordered(points)?)
}

/// One `index value` line per point. Values use the shortest form that parses back exactly.
pub fn format_series(series: &TimeSeries) -> String {
    let mut out = String::with_capacity(series.len() * 12);
    for p in series.points() {
        writeln!(out, "{} {}", p.index, p.value).expect("writing to a String");
    }
    out
}

pub fn write_series(series: &TimeSeries, w: &mut impl Write) -> io::Result<()> {
    w.write_all(format_series(series).as_bytes())
}

/// One `u v` line per edge, `u < v`, sorted.
pub fn format_edge_list(graph: &VisibilityGraph) -> String {
    let mut out = String::with_capacity(graph.edge_count() * 12);
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

pub fn write_edge_list(graph: &VisibilityGraph, w: &mut impl Write) -> io::Result<()> {
    w.write_all(format_edge_list(graph).as_bytes())
}

/// Parses an edge list into normalised `(min, max)` pairs, sorted.
/// Either orientation is accepted; self-loops and repeats are errors.
pub fn parse_edge_list(text: &str) -> Result<Vec<(i64, i64)>, FormatError> {
    let mut edges = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (a, b) = two_fields(raw, line, "u v")?;
        let (a, b) = (parse_index(a, line)?, parse_index(b, line)?);
        if a == b {
            return Err(FormatError::SelfLoop { line, node: a });
        }
        let (u, v) = (a.min(b), a.max(b));
        if !edges.insert((u, v)) {
            return Err(FormatError::DuplicateEdge { line, u, v });
        }
    }
    Ok(edges.into_iter().collect())
}

//! Time-series data model.

use thiserror::Error;

/// A single sample: an integer time position and a finite amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub index: i64,
    pub value: f64,
}

impl Point {
    pub fn new(index: i64, value: f64) -> Self {
        Self { index, value }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("value at index {index} is not finite")]
    NonFinite { index: i64 },
    #[error("duplicate index {0}")]
    DuplicateIndex(i64),
    #[error("index {next} does not follow {prev}; indices must be strictly increasing")]
    NotAscending { prev: i64, next: i64 },
}

/// Points ordered strictly ascending by index, all values finite.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    points: Vec<Point>,
}

impl TimeSeries {
    /// Validates that `points` are already strictly ascending and finite.
    pub fn new(points: Vec<Point>) -> Result<Self, SeriesError> {
        for p in &points {
            if !p.value.is_finite() {
                return Err(SeriesError::NonFinite { index: p.index });
            }
        }
        for w in points.windows(2) {
            if w[0].index == w[1].index {
                return Err(SeriesError::DuplicateIndex(w[0].index));
            }
            if w[0].index > w[1].index {
                return Err(SeriesError::NotAscending {
                    prev: w[0].index,
                    next: w[1].index,
                });
            }
        }
        Ok(Self { points })
    }

    /// Sorts `points` by index first; only duplicates and non-finite values are rejected.
    pub fn from_unordered(mut points: Vec<Point>) -> Result<Self, SeriesError> {
        points.sort_by_key(|p| p.index);
        Self::new(points)
    }

    /// Values placed at indices `0..values.len()`.
    pub fn from_values(values: &[f64]) -> Result<Self, SeriesError> {
        Self::new(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| Point::new(i as i64, v))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.value)
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.points.iter().map(|p| p.index)
    }

    /// Position of `index` within the series, if present.
    pub fn position(&self, index: i64) -> Option<usize> {
        self.points.binary_search_by_key(&index, |p| p.index).ok()
    }

    /// Applies `y -> scale * y + offset` to every value.
    pub fn map_values(&self, scale: f64, offset: f64) -> Result<Self, SeriesError> {
        Self::new(
            self.points
                .iter()
                .map(|p| Point::new(p.index, scale * p.value + offset))
                .collect(),
        )
    }

    /// Shifts every index by `delta`. Panics on index overflow.
    pub fn shift_indices(&self, delta: i64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| Point::new(p.index.checked_add(delta).expect("index overflow"), p.value))
                .collect(),
        }
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

impl TryFrom<Vec<Point>> for TimeSeries {
    type Error = SeriesError;

    fn try_from(points: Vec<Point>) -> Result<Self, Self::Error> {
        Self::new(points)
    }
}

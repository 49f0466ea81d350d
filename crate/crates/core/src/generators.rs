//! Deterministic synthetic series for tests and benchmarks.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TimeSeries;

/// Identifier of the pseudo-random generator, recorded alongside benchmark output.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeriesKind {
    #[serde(rename = "uniform")]
    UniformNoise,
    #[serde(rename = "walk")]
    RandomWalk,
    #[serde(rename = "conway")]
    Conway,
    #[serde(rename = "increasing")]
    MonotonicIncreasing,
    #[serde(rename = "decreasing")]
    MonotonicDecreasing,
    #[serde(rename = "constant")]
    Constant,
    #[serde(rename = "balanced")]
    BalancedTree,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 7] = [
        SeriesKind::UniformNoise,
        SeriesKind::RandomWalk,
        SeriesKind::Conway,
        SeriesKind::MonotonicIncreasing,
        SeriesKind::MonotonicDecreasing,
        SeriesKind::Constant,
        SeriesKind::BalancedTree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeriesKind::UniformNoise => "uniform",
            SeriesKind::RandomWalk => "walk",
            SeriesKind::Conway => "conway",
            SeriesKind::MonotonicIncreasing => "increasing",
            SeriesKind::MonotonicDecreasing => "decreasing",
            SeriesKind::Constant => "constant",
            SeriesKind::BalancedTree => "balanced",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, SeriesKind::UniformNoise | SeriesKind::RandomWalk)
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeriesKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SeriesKind::ALL.iter().map(|k| k.as_str()).collect();
                format!(
                    "unknown series kind `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("balanced series length must be 2^k - 1 with k >= 1, got {0}")]
    InvalidSpec(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub length: usize,
    pub seed: u64,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind, length: usize, seed: u64) -> Self {
        Self { kind, length, seed }
    }

    /// Same spec with a seed derived for the given trial number.
    pub fn for_trial(self, trial: u64) -> Self {
        Self {
            seed: mix_seed(self.seed, trial),
            ..self
        }
    }
}

/// SplitMix64 finaliser over `seed + stream`.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Values at indices `0..length`.
pub fn generate(spec: SeriesSpec) -> Result<TimeSeries, GenerateError> {
    let n = spec.length;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values: Vec<f64> = match spec.kind {
        SeriesKind::UniformNoise => (0..n).map(|_| rng.gen::<f64>()).collect(),
        SeriesKind::RandomWalk => {
            let mut level = 0.0;
            (0..n)
                .map(|_| {
                    level += if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    level
                })
                .collect()
        }
        SeriesKind::Conway => conway(n).into_iter().map(|a| a as f64).collect(),
        SeriesKind::MonotonicIncreasing => (1..=n).map(|v| v as f64).collect(),
        SeriesKind::MonotonicDecreasing => (1..=n).rev().map(|v| v as f64).collect(),
        SeriesKind::Constant => vec![1.0; n],
        SeriesKind::BalancedTree => {
            if n == 0 || !(n + 1).is_power_of_two() {
                return Err(GenerateError::InvalidSpec(n));
            }
            return Ok(balanced_tree_values((n + 1).trailing_zeros()));
        }
    };
    Ok(TimeSeries::from_values(&values).expect("generated values are finite"))
}

/// First `n` terms of `a(1) = a(2) = 1, a(k) = a(a(k-1)) + a(k - a(k-1))`.
pub fn conway(n: usize) -> Vec<u64> {
    // 1-based; slot 0 unused
    let mut a = vec![0u64; n + 1];
    for k in 1..=n {
        a[k] = if k <= 2 {
            1
        } else {
            let prev = a[k - 1] as usize;
            a[prev] + a[k - prev]
        };
    }
    a.remove(0);
    a
}

/// `2^k - 1` distinct values whose tree is perfect with height `k - 1`.
///
/// The largest value goes to the middle index and each half is filled the
/// same way; values are handed out in breadth-first order so every parent
/// outranks its children.
pub fn balanced_tree_values(k: u32) -> TimeSeries {
    assert!((1..=40).contains(&k), "k must be in 1..=40");
    let n = (1usize << k) - 1;
    let mut values = vec![0.0; n];
    let mut next = n;
    let mut queue = VecDeque::from([(0usize, n)]);
    while let Some((lo, hi)) = queue.pop_front() {
        if lo >= hi {
            continue;
        }
        let mid = lo + (hi - lo) / 2;
        values[mid] = next as f64;
        next -= 1;
        queue.push_back((lo, mid));
        queue.push_back((mid + 1, hi));
    }
    TimeSeries::from_values(&values).expect("finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode;

    fn values(spec: SeriesSpec) -> Vec<f64> {
        generate(spec).unwrap().values().collect()
    }

    #[test]
    fn conway_prefix() {
        assert_eq!(
            values(SeriesSpec::new(SeriesKind::Conway, 9, 0)),
            vec![1.0, 1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 4.0, 5.0]
        );
        let a = conway(2000);
        for k in 3..=a.len() {
            let prev = a[k - 2] as usize;
            assert_eq!(a[k - 1], a[prev - 1] + a[k - prev - 1]);
        }
    }

    #[test]
    fn monotone_and_constant() {
        assert_eq!(
            values(SeriesSpec::new(SeriesKind::MonotonicIncreasing, 4, 0)),
            vec![1.0, 2.0, 3.0, 4.0]
        );
        assert_eq!(
            values(SeriesSpec::new(SeriesKind::MonotonicDecreasing, 3, 0)),
            vec![3.0, 2.0, 1.0]
        );
        assert_eq!(
            values(SeriesSpec::new(SeriesKind::Constant, 2, 0)),
            vec![1.0, 1.0]
        );
        for kind in [
            SeriesKind::MonotonicIncreasing,
            SeriesKind::MonotonicDecreasing,
        ] {
            let t = encode(&generate(SeriesSpec::new(kind, 50, 0)).unwrap());
            assert_eq!(t.height(), 49);
        }
    }

    #[test]
    fn random_kinds_are_deterministic() {
        for kind in [SeriesKind::UniformNoise, SeriesKind::RandomWalk] {
            let spec = SeriesSpec::new(kind, 300, 42);
            assert_eq!(generate(spec), generate(spec));
            assert_ne!(generate(spec), generate(spec.for_trial(1)));
        }
    }

    #[test]
    fn uniform_range_and_walk_steps() {
        let u = values(SeriesSpec::new(SeriesKind::UniformNoise, 1000, 7));
        assert!(u.iter().all(|&v| (0.0..1.0).contains(&v)));
        let w = values(SeriesSpec::new(SeriesKind::RandomWalk, 1000, 7));
        assert!(w[0].abs() == 1.0);
        assert!(w.windows(2).all(|p| (p[1] - p[0]).abs() == 1.0));
    }

    #[test]
    fn balanced_sizes() {
        assert_eq!(balanced_tree_values(1).len(), 1);
        let three = balanced_tree_values(2);
        assert_eq!(three.values().collect::<Vec<_>>(), vec![2.0, 3.0, 1.0]);
        for k in 1..=10 {
            let s = balanced_tree_values(k);
            let t = encode(&s);
            assert_eq!(t.len(), (1 << k) - 1);
            assert_eq!(t.height(), k as usize - 1);
            assert!(t.is_perfect());
        }
    }

    #[test]
    fn balanced_spec_validation() {
        assert_eq!(
            generate(SeriesSpec::new(SeriesKind::BalancedTree, 7, 0))
                .unwrap()
                .len(),
            7
        );
        for bad in [0, 2, 6, 8] {
            assert_eq!(
                generate(SeriesSpec::new(SeriesKind::BalancedTree, bad, 0)),
                Err(GenerateError::InvalidSpec(bad))
            );
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in SeriesKind::ALL {
            assert_eq!(k.as_str().parse::<SeriesKind>(), Ok(k));
        }
        assert!("noise".parse::<SeriesKind>().is_err());
    }
}

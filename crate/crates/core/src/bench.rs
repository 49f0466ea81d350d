//! Timing harness: per-algorithm construction times and online-versus-offline
//! tree building, with CSV output.
//!
//! Only the construction call is timed; series generation, verification and
//! I/O happen outside the clock.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::build_graph;
use crate::codec::{bst_build, bst_build_counted, decode_hvg, encode, CheckCounter};
use crate::generators::{generate, mix_seed, GenerateError, SeriesKind, SeriesSpec};
use crate::graph::Criterion;
use crate::reference::{basic, dc_build, AlgorithmId};
use crate::series::{Point, TimeSeries};

pub const BENCH_HEADER: &str = "algorithm,criterion,kind,n,trial,elapsed_s,residual_checks";
pub const ONLINE_HEADER: &str = "mode,l,n,trial,t_offline_s,t_online_s";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: AlgorithmId,
    pub criterion: Criterion,
    pub kind: SeriesKind,
    pub n: usize,
    pub trial: u64,
    pub elapsed_s: f64,
    pub residual_checks: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MergeMode {
    /// Every batch index follows the existing series.
    #[serde(rename = "append")]
    Append,
    /// Batch indices interleave with the existing series.
    #[serde(rename = "insert")]
    Insert,
}

impl MergeMode {
    pub const ALL: [MergeMode; 2] = [MergeMode::Append, MergeMode::Insert];
}

impl fmt::Display for MergeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MergeMode::Append => "append",
            MergeMode::Insert => "insert",
        })
    }
}

impl FromStr for MergeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "append" => Ok(MergeMode::Append),
            "insert" => Ok(MergeMode::Insert),
            other => Err(format!(
                "unknown merge mode `{other}` (expected append or insert)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineRatioRecord {
    pub mode: MergeMode,
    /// Existing series length.
    pub l: usize,
    /// Batch length.
    pub n: usize,
    pub trial: u64,
    pub t_offline_s: f64,
    pub t_online_s: f64,
}

impl OnlineRatioRecord {
    pub fn ratio(&self) -> f64 {
        self.t_offline_s / self.t_online_s
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("{criterion} graphs disagree between algorithms on {kind} n={n}")]
    Disagreement {
        kind: SeriesKind,
        n: usize,
        criterion: Criterion,
    },
    #[error("merged tree differs from scratch build for {mode} l={l} n={n}")]
    MergeMismatch { mode: MergeMode, l: usize, n: usize },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub kinds: Vec<SeriesKind>,
    pub sizes: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub algorithms: Vec<AlgorithmId>,
    pub criteria: Vec<Criterion>,
    pub instrument: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            kinds: vec![
                SeriesKind::UniformNoise,
                SeriesKind::Conway,
                SeriesKind::RandomWalk,
            ],
            sizes: (10..=17).map(|p| 1usize << p).collect(),
            trials: 10,
            seed: 0,
            algorithms: AlgorithmId::ALL.to_vec(),
            criteria: Criterion::ALL.to_vec(),
            instrument: false,
        }
    }
}

/// Runs every (kind, size, criterion, algorithm, trial) combination.
///
/// Before timing a cell, all three algorithms are run once on the cell's
/// first series and must agree. `on_record` sees each record as it is made.
pub fn run_bench(
    config: &BenchConfig,
    mut on_record: impl FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, BenchError> {
    if config.trials == 0 {
        return Err(BenchError::NoTrials);
    }
    let mut records = Vec::new();
    for &kind in &config.kinds {
        for &n in &config.sizes {
            let base = SeriesSpec::new(kind, n, config.seed);
            let series: Vec<TimeSeries> = (0..config.trials)
                .map(|t| generate(base.for_trial(t)))
                .collect::<Result<_, _>>()?;
            for &criterion in &config.criteria {
                let reference = dc_build(&series[0], criterion);
                if basic(&series[0], criterion) != reference
                    || bst_build(&series[0], criterion) != reference
                {
                    return Err(BenchError::Disagreement { kind, n, criterion });
                }
                for &algorithm in &config.algorithms {
                    for (trial, s) in series.iter().enumerate() {
                        let (elapsed_s, residual_checks) =
                            time_build(s, algorithm, criterion, config.instrument);
                        let record = BenchRecord {
                            algorithm,
                            criterion,
                            kind,
                            n,
                            trial: trial as u64,
                            elapsed_s,
                            residual_checks,
                        };
                        on_record(&record);
                        records.push(record);
                    }
                }
            }
        }
    }
    Ok(records)
}

/// Wall time of one construction, plus residual checks when instrumented (codec only).
pub fn time_build(
    series: &TimeSeries,
    algorithm: AlgorithmId,
    criterion: Criterion,
    instrument: bool,
) -> (f64, Option<u64>) {
    if instrument && algorithm == AlgorithmId::BstCodec {
        let mut counter = CheckCounter::new();
        let start = Instant::now();
        let graph = bst_build_counted(series, criterion, &mut counter);
        let elapsed = start.elapsed().as_secs_f64();
        drop(graph);
        (elapsed, Some(counter.residual_checks))
    } else {
        let start = Instant::now();
        let graph = build_graph(series, algorithm, criterion);
        let elapsed = start.elapsed().as_secs_f64();
        drop(graph);
        (elapsed, None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub algorithm: AlgorithmId,
    pub criterion: Criterion,
    pub kind: SeriesKind,
    pub n: usize,
    pub trials: usize,
    pub mean_s: f64,
    pub sd_s: f64,
}

/// Mean and sample standard deviation of `xs`; the deviation is 0 for fewer than two samples.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-cell means over trials, ordered by (kind, criterion, algorithm, n).
pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<(SeriesKind, Criterion, AlgorithmId, usize), Vec<f64>> =
        BTreeMap::new();
    for r in records {
        cells
            .entry((r.kind, r.criterion, r.algorithm, r.n))
            .or_default()
            .push(r.elapsed_s);
    }
    cells
        .into_iter()
        .map(|((kind, criterion, algorithm, n), times)| {
            let (mean_s, sd_s) = mean_sd(&times);
            CellSummary {
                algorithm,
                criterion,
                kind,
                n,
                trials: times.len(),
                mean_s,
                sd_s,
            }
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`. `None` with fewer than two
/// distinct `x` or any non-positive coordinate.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn write_bench_csv(records: &[BenchRecord], w: impl io::Write) -> Result<(), BenchError> {
    write_csv(BENCH_HEADER, records, w)
}

pub fn read_bench_csv(r: impl io::Read) -> Result<Vec<BenchRecord>, BenchError> {
    read_csv(r)
}

pub fn write_online_csv(
    records: &[OnlineRatioRecord],
    w: impl io::Write,
) -> Result<(), BenchError> {
    write_csv(ONLINE_HEADER, records, w)
}

pub fn read_online_csv(r: impl io::Read) -> Result<Vec<OnlineRatioRecord>, BenchError> {
    read_csv(r)
}

fn write_csv<T: Serialize>(
    header: &str,
    records: &[T],
    w: impl io::Write,
) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    // header written by hand so an empty file still carries it
    w.write_record(header.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn read_csv<T: for<'de> Deserialize<'de>>(r: impl io::Read) -> Result<Vec<T>, BenchError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct OnlineConfig {
    pub existing: Vec<usize>,
    pub batch: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub modes: Vec<MergeMode>,
}

impl Default for OnlineConfig {
    fn default() -> Self {
        Self {
            existing: vec![1_000, 10_000, 100_000],
            batch: vec![100, 1_000, 10_000, 100_000],
            trials: 10,
            seed: 0,
            modes: MergeMode::ALL.to_vec(),
        }
    }
}

/// Existing series and new batch for one online trial, both uniform noise.
pub fn online_case(mode: MergeMode, l: usize, n: usize, seed: u64) -> (TimeSeries, TimeSeries) {
    let total = generate(SeriesSpec::new(SeriesKind::UniformNoise, l + n, seed))
        .expect("uniform never fails");
    let mut in_batch = vec![false; l + n];
    match mode {
        MergeMode::Append => in_batch[l..].iter_mut().for_each(|b| *b = true),
        MergeMode::Insert => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, u64::MAX));
            for i in sample(&mut rng, l + n, n) {
                in_batch[i] = true;
            }
        }
    }
    let (mut old, mut new): (Vec<Point>, Vec<Point>) =
        (Vec::with_capacity(l), Vec::with_capacity(n));
    for (p, b) in total.points().iter().zip(in_batch) {
        if b {
            new.push(*p)
        } else {
            old.push(*p)
        }
    }
    (
        TimeSeries::new(old).expect("subsequence of a valid series"),
        TimeSeries::new(new).expect("subsequence of a valid series"),
    )
}

/// Times encode(batch) + merge against encode(existing + batch).
///
/// The first trial of each cell also checks the merged tree against the
/// scratch build, structurally and by decoding.
pub fn run_online_bench(
    config: &OnlineConfig,
    mut on_record: impl FnMut(&OnlineRatioRecord),
) -> Result<Vec<OnlineRatioRecord>, BenchError> {
    if config.trials == 0 {
        return Err(BenchError::NoTrials);
    }
    let mut records = Vec::new();
    for &l in &config.existing {
        for &n in &config.batch {
            for &mode in &config.modes {
                for trial in 0..config.trials {
                    let seed =
                        mix_seed(config.seed, ((l as u64) << 32) ^ (n as u64) ^ (trial << 48));
                    let (old, batch) = online_case(mode, l, n, seed);
                    let full = TimeSeries::new({
                        let mut pts = old.points().to_vec();
                        pts.extend_from_slice(batch.points());
                        pts.sort_by_key(|p| p.index);
                        pts
                    })
                    .expect("disjoint indices");
                    let existing_tree = encode(&old);

                    let start = Instant::now();
                    let merged = existing_tree
                        .merge(encode(&batch))
                        .expect("disjoint indices");
                    let t_online_s = start.elapsed().as_secs_f64();

                    let start = Instant::now();
                    let scratch = encode(&full);
                    let t_offline_s = start.elapsed().as_secs_f64();

                    if trial == 0
                        && (merged != scratch
                            || decode_hvg(&merged, &full) != decode_hvg(&scratch, &full))
                    {
                        return Err(BenchError::MergeMismatch { mode, l, n });
                    }
                    let record = OnlineRatioRecord {
                        mode,
                        l,
                        n,
                        trial,
                        t_offline_s,
                        t_online_s,
                    };
                    on_record(&record);
                    records.push(record);
                }
            }
        }
    }
    Ok(records)
}

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use visbst::bench::{
    mean_sd, run_bench, run_online_bench, summarize, write_bench_csv, write_online_csv,
    BenchConfig, MergeMode, OnlineConfig,
};
use visbst::codec::{decode_hvg_with, decode_nvg_with, encode, CheckCounter};
use visbst::generators::{generate, SeriesKind, SeriesSpec, RNG_ALGORITHM};
use visbst::stream::{parse_stream_line, StreamCommand, StreamSession};
use visbst::text::{parse_series, write_edge_list, write_series};
use visbst::{build_graph, AlgorithmId, Criterion};

#[derive(Parser)]
#[command(
    name = "visbst",
    version,
    about = "Visibility graphs of time series via a maximum binary search tree codec"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic series as `index value` lines.
    Generate {
        #[arg(long)]
        kind: SeriesKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a visibility graph from a series file and write its edge list.
    Build {
        series: PathBuf,
        #[arg(long, default_value = "bst")]
        algo: AlgorithmId,
        #[arg(long, default_value = "hvg")]
        criterion: Criterion,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report decoder rule edges and residual checks (bst only).
        #[arg(long)]
        instrument: bool,
    },
    /// Time every algorithm on generated series and write CSV rows.
    Bench {
        #[arg(long, value_delimiter = ',', default_values = ["uniform", "conway", "walk"])]
        kinds: Vec<SeriesKind>,
        /// Series lengths; defaults to 2^10 through 2^17.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values = ["basic", "dc", "bst"])]
        algos: Vec<AlgorithmId>,
        #[arg(long, value_delimiter = ',', default_values = ["hvg", "nvg"])]
        criteria: Vec<Criterion>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record residual checks for the codec (adds counting overhead).
        #[arg(long)]
        instrument: bool,
    },
    /// Compare merging a batch into an existing tree with rebuilding from scratch.
    OnlineBench {
        /// Existing series lengths.
        #[arg(long = "l", value_delimiter = ',', default_values = ["1000", "10000", "100000"])]
        existing: Vec<usize>,
        /// Batch lengths.
        #[arg(long = "n", value_delimiter = ',', default_values = ["100", "1000", "10000", "100000"])]
        batch: Vec<usize>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values = ["append", "insert"])]
        modes: Vec<MergeMode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read `index value` lines from standard input, merging them in batches;
    /// `emit hvg` or `emit nvg` prints the current edge list.
    Stream {
        #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..))]
        batch_size: u64,
        /// Criterion of the graph printed at end of input.
        #[arg(long, default_value = "hvg")]
        criterion: Criterion,
    },
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_generate(spec: SeriesSpec, out: Option<&Path>) -> Result<()> {
    let series = generate(spec)?;
    let mut w = open_out(out)?;
    write_series(&series, &mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_build(
    path: &Path,
    algo: AlgorithmId,
    criterion: Criterion,
    out: Option<&Path>,
    instrument: bool,
) -> Result<()> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let series = parse_series(&text).with_context(|| format!("in {}", path.display()))?;
    let (graph, counter) = if instrument && algo == AlgorithmId::BstCodec {
        let mut counter = CheckCounter::new();
        let tree = encode(&series);
        let graph = match criterion {
            Criterion::Horizontal => decode_hvg_with(&tree, &series, &mut counter),
            Criterion::Natural => decode_nvg_with(&tree, &series, &mut counter),
        };
        (graph, Some(counter))
    } else {
        (build_graph(&series, algo, criterion), None)
    };
    let mut w = open_out(out)?;
    write_edge_list(&graph, &mut w)?;
    w.flush()?;
    eprintln!("nodes: {}", graph.node_count());
    eprintln!("edges: {}", graph.edge_count());
    if let Some(c) = counter {
        eprintln!("tree_edges: {}", c.tree_edges);
        eprintln!("rule_edges: {}", c.rule_edges);
        eprintln!("residual_checks: {}", c.residual_checks);
    } else if instrument {
        eprintln!("residual_checks: n/a for {algo}");
    }
    Ok(())
}

fn cmd_bench(config: &BenchConfig, out: Option<&Path>) -> Result<()> {
    eprintln!(
        "# rng={RNG_ALGORITHM} seed={} trials={}",
        config.seed, config.trials
    );
    let records = run_bench(config, |r| {
        if r.trial + 1 == config.trials {
            eprintln!(
                "# done {} {} {} n={}",
                r.kind, r.criterion, r.algorithm, r.n
            );
        }
    })?;
    let mut w = open_out(out)?;
    write_bench_csv(&records, &mut w)?;
    w.flush()?;
    eprintln!("# kind criterion algorithm n trials mean_s sd_s");
    for c in summarize(&records) {
        eprintln!(
            "# {} {} {} {} {} {:.6e} {:.3e}",
            c.kind, c.criterion, c.algorithm, c.n, c.trials, c.mean_s, c.sd_s
        );
    }
    Ok(())
}

fn cmd_online_bench(config: &OnlineConfig, out: Option<&Path>) -> Result<()> {
    eprintln!(
        "# rng={RNG_ALGORITHM} seed={} trials={}",
        config.seed, config.trials
    );
    let records = run_online_bench(config, |_| {})?;
    let mut w = open_out(out)?;
    write_online_csv(&records, &mut w)?;
    w.flush()?;
    eprintln!("# mode l n mean_ratio sd_ratio");
    for chunk in records.chunk_by(|a, b| (a.mode, a.l, a.n) == (b.mode, b.l, b.n)) {
        let ratios: Vec<f64> = chunk.iter().map(|r| r.ratio()).collect();
        let (mean, sd) = mean_sd(&ratios);
        let r = &chunk[0];
        eprintln!("# {} {} {} {:.4} {:.4}", r.mode, r.l, r.n, mean, sd);
    }
    Ok(())
}

fn cmd_stream(
    batch_size: usize,
    final_criterion: Criterion,
    input: impl BufRead,
    out: impl Write,
) -> Result<()> {
    let mut out = BufWriter::new(out);
    let mut session = StreamSession::new(batch_size);
    let mut emitted = 0usize;
    // nothing received since the last emit
    let mut up_to_date = false;
    let mut emit =
        |session: &mut StreamSession, criterion: Criterion, out: &mut BufWriter<_>| -> Result<()> {
            if emitted > 0 {
                writeln!(out)?;
            }
            write_edge_list(&session.graph(criterion), out)?;
            out.flush()?;
            emitted += 1;
            Ok(())
        };
    for (i, line) in input.lines().enumerate() {
        let line = line.context("reading standard input")?;
        match parse_stream_line(&line, i + 1) {
            Ok(None) => {}
            Ok(Some(StreamCommand::Point(p))) => match session.push(p) {
                Ok(()) => up_to_date = false,
                Err(e) => eprintln!("line {}: {e}; skipped", i + 1),
            },
            Ok(Some(StreamCommand::Emit(c))) => {
                emit(&mut session, c, &mut out)?;
                up_to_date = true;
            }
            Err(e) => eprintln!("{e}; skipped"),
        }
    }
    if !up_to_date {
        emit(&mut session, final_criterion, &mut out)?;
    }
    out.flush()?;
    eprintln!("points: {}", session.len());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { kind, n, seed, out } => {
            cmd_generate(SeriesSpec::new(kind, n, seed), out.as_deref())
        }
        Command::Build {
            series,
            algo,
            criterion,
            out,
            instrument,
        } => cmd_build(&series, algo, criterion, out.as_deref(), instrument),
        Command::Bench {
            kinds,
            sizes,
            trials,
            seed,
            algos,
            criteria,
            out,
            instrument,
        } => {
            let mut config = BenchConfig {
                kinds,
                trials,
                seed,
                algorithms: algos,
                criteria,
                instrument,
                ..BenchConfig::default()
            };
            if !sizes.is_empty() {
                config.sizes = sizes;
            }
            cmd_bench(&config, out.as_deref())
        }
        Command::OnlineBench {
            existing,
            batch,
            trials,
            seed,
            modes,
            out,
        } => {
            let config = OnlineConfig {
                existing,
                batch,
                trials,
                seed,
                modes,
            };
            cmd_online_bench(&config, out.as_deref())
        }
        Command::Stream {
            batch_size,
            criterion,
        } => cmd_stream(
            batch_size as usize,
            criterion,
            io::stdin().lock(),
            io::stdout().lock(),
        ),
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qaos_core::bench::{self, Algorithm, ExperimentConfig};
use qaos_core::mwis::{brute_force_mwis, eta, BRUTE_FORCE_CAP};
use qaos_core::optimizer::OptimizerConfig;
use qaos_core::{ConflictGraph, Error, GraphGenConfig};

#[derive(Parser)]
#[command(name = "qaos", version, about = "QAOA link scheduling on weighted conflict graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a batch of random conflict graphs as JSON files.
    Generate {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long, default_value_t = 1)]
        weight_min: u64,
        #[arg(long, default_value_t = 10)]
        weight_max: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one graph file with a single algorithm.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        alg: Algorithm,
        #[arg(long, default_value_t = 10)]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 200)]
        epochs: usize,
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a benchmark described by a JSON experiment config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_records: PathBuf,
        #[arg(long)]
        out_summary: PathBuf,
        /// Also write CDF points.
        #[arg(long)]
        out_cdf: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Compute per-variant CDF points from a records file.
    Cdf {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Generate { n, edge_prob, weight_min, weight_max, count, seed, out } => {
            let base = GraphGenConfig { n, edge_prob, weight_min, weight_max, seed };
            base.validate()?;
            fs::create_dir_all(&out).map_err(|source| Error::Io { path: out.display().to_string(), source })?;
            // Same graph seeds `bench` derives from its master seed.
            let cfg = ExperimentConfig { graph_gen: base, master_seed: seed, ..Default::default() };
            for id in 0..count {
                let g = cfg.graph(id)?;
                let path = out.join(format!("graph_{id:04}.json"));
                write(&path, &g.to_json())?;
                println!("{}", path.display());
            }
        }
        Command::Solve { graph, alg, p, rho, shots, epochs, lr, seed } => {
            let g = ConflictGraph::from_json(&read(&graph)?)?;
            let result = if alg == Algorithm::Qaos {
                let cfg = OptimizerConfig { epochs, learning_rate: lr, ..Default::default() };
                let o = bench::solve_qaos(&g, p, rho, shots, &cfg, seed)?;
                println!("energy_best: {}", o.optimization.energy_best);
                println!("feasible_sample_fraction: {}", o.feasible_sample_fraction);
                o.result
            } else {
                bench::solve_classical(&g, alg, seed)?
            };
            println!("schedule: {}", result.schedule);
            println!("weight: {}", result.weight);
            if g.n() <= BRUTE_FORCE_CAP {
                let opt = brute_force_mwis(&g)?;
                if opt.weight >= 1 {
                    println!("eta: {} (optimal weight {})", eta(result.weight, opt.weight)?, opt.weight);
                }
            }
        }
        Command::Bench { config, out_records, out_summary, out_cdf, workers } => {
            let cfg = ExperimentConfig::from_json(&read(&config)?)?;
            let records = bench::run_benchmark(&cfg, workers)?;
            let summary = bench::summarize(&records)?;
            bench::emit_results(&records, &summary, &out_records, &out_summary, out_cdf.as_deref())?;
            for v in &summary.variants {
                println!(
                    "{:<7} p={:<2} trials={} optimal_rate={:.4} mean_eta={:.4}",
                    v.algorithm, v.p, v.trials, v.optimal_rate, v.mean_eta
                );
            }
        }
        Command::Cdf { input, out } => {
            let records = bench::read_records(&input)?;
            bench::write_cdf(&out, &bench::summarize(&records)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}

//! `pc`: experiment runner and small utilities for the chainrule toolkit.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 bad input.

mod config;
mod experiments;
mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chainrule::complexity::{bernoulli_complexity, gaussian_complexity, EstimatorConfig, Mode};
use chainrule::io::{estimates_to_csv, read_pointset};
use chainrule::tails::{tail_series_p, tail_series_q, TailSeriesParams};
use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{grid_points, load_config, parse_grid, ExperimentConfig};
use crate::experiments::Report;

#[derive(Parser)]
#[command(name = "pc", version, about = "Rademacher complexities, chaining bounds and tail utilities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    /// Rademacher complexity b(T)
    B,
    /// Gaussian complexity g(T)
    G,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override `out_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print (u, p(u), q(u)) as CSV.
    Tails {
        #[arg(long)]
        w: u32,
        /// Grid `start:stop:step`.
        #[arg(long = "u-grid", value_parser = parse_grid)]
        u_grid: (f64, f64, f64),
    },
    /// Estimate b(T) or g(T) for a point set CSV.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Enumerate all sign patterns.
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Monte Carlo with this many samples.
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Rows of each k×n element matrix.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

enum Failure {
    /// A checked inequality did not hold.
    Assertion(String),
    /// Bad config, input or arguments.
    Input(String),
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("PC_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("PC_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot size thread pool: {e}")))
}

fn write_outputs(cfg: &ExperimentConfig, rep: &Report, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut results = String::from("experiment,n,k,quantity,value,std_error,seed\n");
    for r in &rep.rows {
        writeln!(results, "{},{},{},{},{},{},{}", cfg.experiment, r.n, r.k, r.quantity, r.value, r.std_error, r.seed).unwrap();
    }
    std::fs::write(dir.join("results.csv"), results)?;
    let mut summary = String::from("experiment,quantity,estimate,ci_low,ci_high,note\n");
    for s in &rep.summary {
        writeln!(summary, "{},{},{},{},{},\"{}\"", cfg.experiment, s.quantity, s.estimate, s.ci_low, s.ci_high, s.note.replace('"', "'")).unwrap();
    }
    std::fs::write(dir.join("summary.csv"), summary)?;
    for (name, plot) in &rep.plots {
        std::fs::write(dir.join(format!("plot_{}_{name}.svg", cfg.experiment)), plot.render())?;
    }
    for (name, body) in &rep.files {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

fn run(config: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = load_config(config).map_err(|e| Failure::Input(e.to_string()))?;
    let rep = experiments::run(&cfg).map_err(|e| Failure::Input(format!("{}: {e}", cfg.experiment)))?;
    let dir = out.unwrap_or_else(|| cfg.out_dir.clone());
    write_outputs(&cfg, &rep, &dir).map_err(|e| Failure::Input(format!("writing {}: {e}", dir.display())))?;
    println!("{}: {} result rows written to {}", cfg.experiment, rep.rows.len(), dir.display());
    if rep.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(rep.failures.join("\n")))
    }
}

fn tails(w: u32, grid: (f64, f64, f64)) -> Result<(), Failure> {
    let params = TailSeriesParams::new(w);
    let mut out = String::from("u,p,q\n");
    for u in grid_points(grid) {
        let p = tail_series_p(u, &params).map_err(|e| Failure::Input(e.to_string()))?;
        let q = tail_series_q(u, &params).map_err(|e| Failure::Input(e.to_string()))?;
        writeln!(out, "{u},{p},{q}").unwrap();
    }
    print!("{out}");
    Ok(())
}

fn estimate(input: &Path, quantity: Quantity, exact: bool, mc: Option<usize>, seed: u64, k: usize) -> Result<(), Failure> {
    let t = read_pointset(input, k).map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
    let cfg = match (exact, mc) {
        (true, _) => EstimatorConfig { seed, ..EstimatorConfig::exact() },
        (false, Some(n)) => EstimatorConfig::monte_carlo(n, seed),
        (false, None) => EstimatorConfig { mode: Mode::Auto, seed, ..EstimatorConfig::default() },
    };
    let (name, est) = match quantity {
        Quantity::B => ("b", bernoulli_complexity(&t, &cfg)),
        Quantity::G => ("g", gaussian_complexity(&t, &cfg)),
    };
    let est = est.map_err(|e| Failure::Input(e.to_string()))?;
    print!("{}", estimates_to_csv([(name, &est)]));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run { config, out } => run(&config, out),
        Command::Tails { w, u_grid } => tails(w, u_grid),
        Command::Estimate { input, quantity, exact, mc, seed, k } => estimate(&input, quantity, exact, mc, seed, k),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

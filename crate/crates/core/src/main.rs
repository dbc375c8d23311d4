use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use duelnet::env::{ballots_to_matrix, BallotSet};
use duelnet::graph::{all_pairs_distances, clique_analytics, clique_analytics_greedy, CliqueAnalytics, CommGraph, Topology};
use duelnet::harness::{emit_csv, emit_plot, format_sig, log_grid, run_experiment, Algorithm, ExperimentConfig, PlotOptions};
use duelnet::theory::{BaseKind, BoundInputs, BoundReport};
use duelnet::{Error, Result};

#[derive(Parser)]
#[command(name = "duelnet", version, about = "Multiplayer dueling-bandit simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its regret CSV.
    Run {
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the regret bound constants for a configuration.
    Bounds {
        config: PathBuf,
        /// Also write (t, lower, thm3, fyl) curves to this CSV.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Distances, diameter and clique analytics of a canonical topology.
    Graphinfo {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        gamma: usize,
    },
    /// Build a preference matrix CSV from ranked ballots.
    Dataset {
        #[arg(long)]
        ballots: PathBuf,
        #[arg(long)]
        top: Option<usize>,
        /// Read PrefLib SOC/SOI format instead of the native one.
        #[arg(long)]
        preflib: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plot regret CSVs into an SVG.
    Plot {
        out: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        logy: bool,
    },
}

fn analytics(g: &CommGraph, gamma: usize) -> Result<CliqueAnalytics> {
    match clique_analytics(g, gamma) {
        Err(Error::TooLargeForExact { .. }) => clique_analytics_greedy(g, gamma),
        other => other,
    }
}

fn run(config: PathBuf, runs: Option<usize>, seed: Option<u64>, horizon: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&config)?;
    if let Some(r) = runs {
        cfg.runs = r;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(h) = horizon {
        cfg.horizon = h;
    }
    if let Some(o) = out {
        cfg.out_dir = o;
    }
    cfg.validate()?;
    let trace = run_experiment(&cfg)?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let path = cfg.out_dir.join(format!("{}.csv", cfg.algorithm));
    emit_csv(&trace, &path)?;
    println!(
        "{}: T = {}, runs = {}, final mean regret = {} (std {})",
        path.display(),
        cfg.horizon,
        cfg.runs,
        format_sig(trace.final_mean(), 9),
        format_sig(*trace.std.last().unwrap(), 9)
    );
    Ok(())
}

fn bounds(config: PathBuf, curve: Option<PathBuf>) -> Result<()> {
    let cfg = ExperimentConfig::load(&config)?;
    let setup = cfg.resolve()?;
    let graph = analytics(&setup.graph, setup.gamma)?;
    let diameter = setup.dist.diameter();
    let base = if cfg.algorithm == Algorithm::FylRmed2fh || cfg.algorithm == Algorithm::SpRmed2fh {
        BaseKind::Rmed2fh
    } else {
        BaseKind::Rucb
    };
    let report = BoundReport::compute(&BoundInputs {
        q: &setup.q,
        graph: &graph,
        diameter,
        t_le: diameter as u64 + 1,
        alpha: cfg.alpha,
        delta: cfg.delta,
        base,
    })?;
    print!("{}", report.to_text());
    if let Some(path) = curve {
        let mut text = String::from("t,lower,thm3,fyl\n");
        for t in log_grid(cfg.horizon, cfg.grid_points) {
            let (lo, th, fy) = report.curve_point(t as f64);
            text.push_str(&format!("{t},{},{},{}\n", format_sig(lo, 9), format_sig(th, 9), format_sig(fy, 9)));
        }
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn graphinfo(kind: &str, m: usize, gamma: usize) -> Result<()> {
    let kind: Topology = kind.parse()?;
    let g = CommGraph::canonical(kind, m)?;
    let dist = all_pairs_distances(&g)?;
    if gamma > dist.diameter() {
        return Err(Error::Config(format!("gamma = {gamma} exceeds the diameter {}", dist.diameter())));
    }
    let a = analytics(&g, gamma)?;
    println!("topology {kind}, m = {m}, gamma = {gamma}");
    println!("distances:");
    for u in 0..m {
        let row: Vec<String> = (0..m).map(|v| dist.get(u, v).to_string()).collect();
        println!("  {}", row.join(" "));
    }
    println!("diameter = {}", dist.diameter());
    println!("chi = {}{}", a.chi, if a.exact { "" } else { " (greedy upper bound)" });
    println!("d_max = {}", a.d_max_gamma);
    let header: Vec<String> = (0..=gamma).map(|g| format!("g={g}")).collect();
    println!("largest clique per player: {}", header.join(" "));
    for (p, sizes) in a.largest_clique.iter().enumerate() {
        let row: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
        println!("  {p}: {}", row.join(" "));
    }
    Ok(())
}

fn dataset(ballots: PathBuf, top: Option<usize>, preflib: bool, out: PathBuf) -> Result<()> {
    let set = if preflib {
        let text = std::fs::read_to_string(&ballots).map_err(|e| Error::io(&ballots, e))?;
        BallotSet::from_preflib(&text)?
    } else {
        BallotSet::load(&ballots)?
    };
    let (q, names) = ballots_to_matrix(&set, top)?;
    q.save_csv(&out)?;
    println!("{} arms: {}", names.len(), names.join(", "));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run {
            config,
            runs,
            seed,
            horizon,
            out,
        } => run(config, runs, seed, horizon, out),
        Command::Bounds { config, curve } => bounds(config, curve),
        Command::Graphinfo { kind, m, gamma } => graphinfo(&kind, m, gamma),
        Command::Dataset {
            ballots,
            top,
            preflib,
            out,
        } => dataset(ballots, top, preflib, out),
        Command::Plot { out, inputs, logy } => emit_plot(&out, &inputs, &PlotOptions { log_y: logy, title: None }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

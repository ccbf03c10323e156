use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mcpo::error::{PipelineError, Result};
use mcpo::{
    emit_report, load_report, load_scenario, render_layout, run_pipeline, save_report, AlgorithmConfig, ReportFormat,
    RunReport, Scenario, View,
};
use mcpo_core::nesting::{PlacementStrategy, RotationPolicy};
use mcpo_core::optimizers::{GaConfig, McConfig};

#[derive(Parser)]
#[command(name = "mcpo", version, about = "Stock panel overlay and off-cut nesting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write report.json, report.csv, report.txt and both SVG views into a directory.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
        #[arg(long, value_enum)]
        rotation: Option<RotationArg>,
        #[arg(long, overrides_with = "no_flip")]
        flip: bool,
        #[arg(long, overrides_with = "flip")]
        no_flip: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a saved report.
    Render {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum)]
        view: ViewArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every scenario in a directory with each algorithm and seed; write one CSV.
    Bench {
        #[arg(long)]
        scenarios: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "greedy,mc,ga")]
        algos: Vec<Algo>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Greedy,
    Mc,
    Ga,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    FirstFit,
    BestFit,
}

#[derive(Clone, Copy, ValueEnum)]
enum RotationArg {
    None,
    R180,
    R90,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewArg {
    Overlay,
    Nesting,
}

/// The scenario's own parameters are kept when its algorithm matches `algo`.
fn select_algorithm(current: AlgorithmConfig, algo: Algo, seed: Option<u64>) -> AlgorithmConfig {
    let chosen = match (algo, current) {
        (Algo::Greedy, _) => AlgorithmConfig::Greedy,
        (Algo::Mc, c @ AlgorithmConfig::Mc(_)) => c,
        (Algo::Mc, _) => AlgorithmConfig::Mc(McConfig::default()),
        (Algo::Ga, c @ AlgorithmConfig::Ga(_)) => c,
        (Algo::Ga, _) => AlgorithmConfig::Ga(GaConfig::default()),
    };
    match seed {
        Some(s) => chosen.with_seed(s),
        None => chosen,
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| PipelineError::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

#[allow(clippy::too_many_arguments)]
fn solve(
    scenario: &Path,
    algo: Algo,
    seed: Option<u64>,
    strategy: Option<Strategy>,
    rotation: Option<RotationArg>,
    flip: bool,
    no_flip: bool,
    out: &Path,
) -> Result<()> {
    let mut s: Scenario = load_scenario(scenario)?;
    s.algorithm = select_algorithm(s.algorithm, algo, seed);
    if let Some(st) = strategy {
        s.strategy = match st {
            Strategy::FirstFit => PlacementStrategy::FirstFit,
            Strategy::BestFit => PlacementStrategy::BestFit,
        };
    }
    if let Some(r) = rotation {
        s.policy.rotation = match r {
            RotationArg::None => RotationPolicy::None,
            RotationArg::R180 => RotationPolicy::R180Only,
            RotationArg::R90 => RotationPolicy::R90Steps,
        };
    }
    if flip {
        s.policy.allow_flip = true;
    } else if no_flip {
        s.policy.allow_flip = false;
    }
    let report = run_pipeline(&s)?;
    create_dir(out)?;
    save_report(&report, out.join("report.json"))?;
    emit_report(std::slice::from_ref(&report), ReportFormat::Csv, out.join("report.csv"))?;
    emit_report(std::slice::from_ref(&report), ReportFormat::Text, out.join("report.txt"))?;
    render_layout(&report, View::Overlay, out.join("overlay.svg"))?;
    render_layout(&report, View::Nesting, out.join("nesting.svg"))?;
    print!("{}", mcpo::text_string(std::slice::from_ref(&report)));
    Ok(())
}

fn bench(dir: &Path, seeds: &[u64], algos: &[Algo], out: &Path) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| PipelineError::Io {
            path: dir.to_path_buf(),
            source: e,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    let mut reports: Vec<RunReport> = Vec::new();
    for file in &files {
        let base = load_scenario(file)?;
        for &algo in algos {
            let runs: Vec<Option<u64>> = if algo == Algo::Greedy {
                vec![None]
            } else {
                seeds.iter().copied().map(Some).collect()
            };
            for seed in runs {
                let mut s = base.clone();
                s.algorithm = select_algorithm(base.algorithm, algo, seed);
                let r = run_pipeline(&s)?;
                eprintln!(
                    "{} {} seed {}: {} panels, {:.2} %",
                    r.scenario,
                    r.algorithm.name(),
                    seed.map_or_else(|| "-".into(), |s| s.to_string()),
                    r.metrics.total_panels,
                    r.metrics.material_usage_pct
                );
                reports.push(r);
            }
        }
    }
    emit_report(&reports, ReportFormat::Csv, out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            scenario,
            algo,
            seed,
            strategy,
            rotation,
            flip,
            no_flip,
            out,
        } => solve(&scenario, algo, seed, strategy, rotation, flip, no_flip, &out),
        Command::Render { report, view, out } => {
            let r = load_report(&report)?;
            let view = match view {
                ViewArg::Overlay => View::Overlay,
                ViewArg::Nesting => View::Nesting,
            };
            render_layout(&r, view, &out)
        }
        Command::Bench {
            scenarios,
            seeds,
            algos,
            out,
        } => bench(&scenarios, &seeds, &algos, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! `netdiff` command-line tool.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for data errors and 3
//! when an iteration did not converge (outputs are still written).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netdiff::graph::{format_edge_list, largest_component, read_edge_list, Directedness, EdgePolicy, Graph};
use netdiff::meanfield::{average_neighbor_degree, joint_histogram, knn_slope, predict, Weighting};
use netdiff::netgen::{calibrate_theta_search, generate, maslov_sneppen_shuffle, CalibrationOptions, GenParams, ShuffleParams};
use netdiff::pipeline::{parse_summaries_csv, report_table1, run_experiment, summaries_csv, RunConfig};
use netdiff::stats::{binned_by_degree, fit_powerlaw};
use netdiff::transport::{steady_state, Model, TransportSpec};
use netdiff::{formats, Error};

#[derive(Parser)]
#[command(name = "netdiff", version, about = "Biased diffusion on synthetic power-law networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a power-law network with tunable degree correlations.
    Generate(GenerateArgs),
    /// Degree-preserving double-edge swaps.
    Shuffle(ShuffleArgs),
    /// Extract the largest (strongly) connected component.
    Component(ComponentArgs),
    /// Iterate a transport model to its steady state.
    Simulate(SimulateArgs),
    /// Mean-field steady state per degree class.
    Predict(PredictArgs),
    /// Bin steady-state masses by degree and fit a power law.
    Analyze(AnalyzeArgs),
    /// Average nearest-neighbour degree per degree class.
    Knn(KnnArgs),
    /// Full pipeline from a config file and/or flags.
    Run(RunArgs),
    /// Exponent table from one or more summary.csv files.
    Report(ReportArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("correlation").required(true).args(["gamma", "theta"])))]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 1.3)]
    alpha: f64,
    /// Target k_nn slope; theta is calibrated to reach it.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Reject repeated edges instead of producing a multigraph.
    #[arg(long)]
    simple: bool,
    /// Pilot network size for calibration (defaults to --nodes).
    #[arg(long)]
    pilot_nodes: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ShuffleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Swap attempts (default: ten per edge).
    #[arg(long)]
    swaps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file.
    #[arg(long = "in", alias = "graph")]
    input: PathBuf,
    /// Treat the edges as directed (overrides the file header).
    #[arg(long)]
    directed: bool,
}

#[derive(Args)]
struct ComponentArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long)]
    out: PathBuf,
    /// Also write `old_id,new_id` for kept nodes.
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long, value_parser = parse_model)]
    model: Model,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0.0)]
    lazy: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long = "g", value_parser = parse_weighting)]
    weighting: Weighting,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    masses: PathBuf,
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long, default_value_t = 8.0)]
    kmin: f64,
    #[arg(long, default_value_t = 2.0)]
    base: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KnnArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long, default_value_t = 8.0)]
    kmin: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` config (a previous run's manifest works too).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    shuffle: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// summary.csv files written by `run`.
    #[arg(required = true)]
    summaries: Vec<PathBuf>,
    /// Emit CSV instead of the text table.
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_weighting(s: &str) -> Result<Weighting, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Data(Error),
    NotConverged(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut root = &e;
        while let Error::Stage { source, .. } = root {
            root = source;
        }
        match root {
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e),
        }
    }
}

type CliResult = Result<(), Failure>;

fn load_graph(input: &GraphInput) -> Result<Graph, Error> {
    let list = read_edge_list(&input.input)?;
    let (dir, policy) = match list.declared {
        Some((d, p)) => (d, p),
        None => (Directedness::Undirected, EdgePolicy::Simple),
    };
    let dir = if input.directed { Directedness::Directed } else { dir };
    let (g, report) = Graph::build_with(&list, dir, policy)?;
    if report.self_loops_removed + report.duplicates_removed > 0 {
        eprintln!(
            "note: dropped {} self-loops and {} duplicate edges",
            report.self_loops_removed, report.duplicates_removed
        );
    }
    Ok(g)
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn cmd_generate(a: GenerateArgs) -> CliResult {
    let policy = if a.simple { EdgePolicy::Simple } else { EdgePolicy::Multi };
    let theta = match (a.theta, a.gamma) {
        (Some(t), _) => t,
        (None, Some(gamma)) => {
            let mut opts = CalibrationOptions::new(a.nodes, a.alpha, gamma);
            opts.policy = policy;
            if let Some(p) = a.pilot_nodes {
                opts.pilot_nodes = p;
            }
            match calibrate_theta_search(&opts)? {
                Ok(c) => {
                    eprintln!("calibrated theta = {:.4} (gamma = {:.3})", c.theta, c.measured_gamma);
                    c.theta
                }
                Err(miss) => {
                    return Err(Error::Calibration {
                        target: gamma,
                        low: miss.achievable.0,
                        high: miss.achievable.1,
                    }
                    .into())
                }
            }
        }
        (None, None) => unreachable!("clap enforces the group"),
    };
    let params = GenParams {
        policy,
        ..GenParams::new(a.nodes, a.alpha, theta, a.seed)
    };
    let (g, report) = generate(&params)?;
    eprintln!(
        "generated {} nodes, {} edges ({} stubs discarded)",
        g.node_count(),
        report.edges,
        report.discarded_stubs
    );
    write(&a.out, &format_edge_list(&g))?;
    Ok(())
}

fn cmd_shuffle(a: ShuffleArgs) -> CliResult {
    let g = load_graph(&GraphInput {
        input: a.input,
        directed: false,
    })?;
    let (s, report) = maslov_sneppen_shuffle(
        &g,
        &ShuffleParams {
            swap_attempts: a.swaps,
            seed: a.seed,
        },
    )?;
    eprintln!("accepted {} of {} swaps", report.accepted, report.attempts);
    write(&a.out, &format_edge_list(&s))?;
    Ok(())
}

fn cmd_component(a: ComponentArgs) -> CliResult {
    let g = load_graph(&a.graph)?;
    let c = largest_component(&g);
    write(&a.out, &format_edge_list(&c.graph))?;
    if let Some(map) = a.map {
        let mut text = String::from("old_id,new_id\n");
        for (new, old) in c.new_to_old.iter().enumerate() {
            text.push_str(&format!("{old},{new}\n"));
        }
        write(&map, &text)?;
    }
    eprintln!("kept {} of {} nodes", c.graph.node_count(), g.node_count());
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> CliResult {
    let g = load_graph(&a.graph)?;
    let spec = TransportSpec {
        tolerance: a.tol,
        max_iterations: a.max_iter,
        lazy_factor: a.lazy,
        ..TransportSpec::new(a.model)
    };
    let ss = steady_state(&g, &spec, None)?;
    write(&a.out, &formats::masses_csv(&g, ss.mass.values()))?;
    eprintln!(
        "iterations={} residual={:.3e} lazy={} total_mass={:.12} dropped={:.3e}",
        ss.iterations_used, ss.residual, ss.lazy_factor, ss.mass.total(), ss.dropped_mass
    );
    if !ss.converged {
        return Err(Failure::NotConverged(format!(
            "no convergence after {} iterations (residual {:.3e})",
            ss.iterations_used, ss.residual
        )));
    }
    Ok(())
}

fn cmd_predict(a: PredictArgs) -> CliResult {
    let g = load_graph(&a.graph)?;
    let h = joint_histogram(&g)?;
    let p = predict(&h, a.weighting);
    write(&a.out, &formats::prediction_csv(&h, &p))?;
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> CliResult {
    let g = load_graph(&a.graph)?;
    let text = fs::read_to_string(&a.masses).map_err(|e| Error::io(&a.masses, e))?;
    let masses = formats::parse_masses_csv(&text)?;
    let degrees = g.degrees();
    let curve = binned_by_degree(&degrees, &masses, a.base)?;
    let fit = fit_powerlaw(&curve, a.kmin);
    match &fit {
        Ok(f) => eprintln!("exponent = {:.4} (r^2 = {:.4}, {} bins)", f.exponent, f.r_squared, f.bin_count),
        Err(e) => eprintln!("fit unavailable: {e}"),
    }
    write(&a.out, &formats::curve_csv(&curve, fit.as_ref().ok()))?;
    Ok(())
}

fn cmd_knn(a: KnnArgs) -> CliResult {
    let g = load_graph(&a.graph)?;
    let h = joint_histogram(&g)?;
    let curve = binned_by_degree(&g.degrees(), &average_neighbor_degree(&g), 2.0)?;
    let fit = fit_powerlaw(&curve, a.kmin).ok();
    if fit.is_some() {
        eprintln!("gamma = {:.4}", knn_slope(&g, a.kmin)?);
    }
    write(&a.out, &formats::knn_csv(&h, fit.as_ref()))?;
    Ok(())
}

fn cmd_run(a: RunArgs) -> CliResult {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            RunConfig::from_config_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    for kv in &a.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("expected KEY=VALUE, got `{kv}`")))?;
        cfg.set(k.trim(), v.trim()).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if let Some(v) = a.out_dir {
        cfg.out_dir = v;
    }
    if let Some(v) = a.nodes {
        cfg.nodes = v;
    }
    if let Some(v) = a.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = a.gamma {
        cfg.gamma = Some(v);
        cfg.theta = None;
    }
    if let Some(v) = a.theta {
        cfg.theta = Some(v);
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.workers {
        cfg.workers = v;
    }
    if a.shuffle {
        cfg.shuffle = true;
    }
    let report = run_experiment(&cfg)?;
    print!("{}", report_table1(&report.summaries));
    let stalled = report.summaries.iter().filter(|s| !s.converged).count();
    if stalled > 0 {
        return Err(Failure::NotConverged(format!("{stalled} simulation(s) did not converge")));
    }
    Ok(())
}

fn cmd_report(a: ReportArgs) -> CliResult {
    let mut rows = Vec::new();
    for path in &a.summaries {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        rows.extend(parse_summaries_csv(&text)?);
    }
    if rows.is_empty() {
        return Err(Error::InsufficientData("no runs in the given summaries".into()).into());
    }
    let out = if a.csv { summaries_csv(&rows) } else { report_table1(&rows) };
    match a.out {
        Some(path) => write(&path, &out)?,
        None => print!("{out}"),
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
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Shuffle(a) => cmd_shuffle(a),
        Command::Component(a) => cmd_component(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Knn(a) => cmd_knn(a),
        Command::Run(a) => cmd_run(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::NotConverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

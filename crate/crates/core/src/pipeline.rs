//! End-to-end experiment runs: generate → (shuffle) → largest component →
//! simulate → mean-field prediction → binning and fits → reports.
//!
//! A run is described by a [`RunConfig`], which round-trips through a plain
//! `key = value` file. Every run writes `manifest.txt` echoing the effective
//! configuration together with SHA-256 checksums of the artifacts it wrote,
//! so the manifest can be fed back to reproduce the run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::formats::{curve_csv, knn_csv, masses_csv, prediction_csv, SeriesTable};
use crate::graph::{format_edge_list, largest_component, EdgePolicy, Graph};
use crate::meanfield::{average_neighbor_degree, joint_histogram, predict};
use crate::netgen::{
    calibrate_theta_search, generate, maslov_sneppen_shuffle, CalibrationOptions, GenParams,
    ShuffleParams,
};
use crate::stats::{binned_by_degree, ccdf, fit_powerlaw, loglog_correlation};
use crate::transport::{steady_state, Model, TransportSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetworkKind {
    Correlated,
    Shuffled,
}

impl NetworkKind {
    pub fn label(self) -> &'static str {
        match self {
            NetworkKind::Correlated => "correlated",
            NetworkKind::Shuffled => "shuffled",
        }
    }
}

impl std::str::FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correlated" => Ok(NetworkKind::Correlated),
            "shuffled" => Ok(NetworkKind::Shuffled),
            other => Err(Error::InvalidParameter(format!("unknown network `{other}`"))),
        }
    }
}

/// What to do when calibration cannot reach the requested slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationFallback {
    /// Continue with the closest theta found; the summary flags the miss.
    Closest,
    /// Abort the run.
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nodes: usize,
    pub alpha: f64,
    /// Target k_nn slope; calibrated into `theta` when `theta` is unset.
    pub gamma: Option<f64>,
    pub theta: Option<f64>,
    pub models: Vec<Model>,
    /// Also run on a degree-preserving shuffle of the generated network.
    pub shuffle: bool,
    pub swaps: Option<usize>,
    pub policy: EdgePolicy,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub lazy: f64,
    pub k_min: f64,
    pub base: f64,
    pub pilot_nodes: Option<usize>,
    pub calibration_seeds: usize,
    pub calibration_fallback: CalibrationFallback,
    /// Worker threads for data-parallel stages; 0 uses the runtime default.
    pub workers: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            nodes: 100_000,
            alpha: 1.3,
            gamma: None,
            theta: None,
            models: vec![Model::EquiPartition, Model::WeightedPartition],
            shuffle: false,
            swaps: None,
            policy: EdgePolicy::Multi,
            seed: 1,
            tolerance: 1e-10,
            max_iterations: 100_000,
            lazy: 0.0,
            k_min: 8.0,
            base: 2.0,
            pilot_nodes: None,
            calibration_seeds: 3,
            calibration_fallback: CalibrationFallback::Closest,
            workers: 0,
            out_dir: PathBuf::from("run"),
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("invalid value `{value}` for `{key}`")))
}

fn parse_optional<T: std::str::FromStr>(key: &str, value: &str) -> Result<Option<T>> {
    if value == "none" {
        Ok(None)
    } else {
        parse_value(key, value).map(Some)
    }
}

fn fmt_optional<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), T::to_string)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma.is_none() && self.theta.is_none() {
            return Err(Error::InvalidParameter("either gamma or theta must be set".into()));
        }
        if self.models.is_empty() {
            return Err(Error::InvalidParameter("at least one model is required".into()));
        }
        if self.calibration_seeds == 0 {
            return Err(Error::InvalidParameter("calibration_seeds must be at least 1".into()));
        }
        GenParams::new(self.nodes, self.alpha, self.theta.unwrap_or(0.0), self.seed).validate()?;
        self.transport_spec(self.models[0]).validate()
    }

    pub fn transport_spec(&self, model: Model) -> TransportSpec {
        TransportSpec {
            lazy_factor: self.lazy,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            ..TransportSpec::new(model)
        }
    }

    /// Parses `key = value` lines; `#` starts a comment line. Unset keys keep
    /// their defaults.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                Error::InvalidParameter(message) => Error::Parse {
                    line: idx + 1,
                    message,
                },
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "nodes" => self.nodes = parse_value(key, value)?,
            "alpha" => self.alpha = parse_value(key, value)?,
            "gamma" => self.gamma = parse_optional(key, value)?,
            "theta" => self.theta = parse_optional(key, value)?,
            "models" => {
                self.models = value
                    .split(',')
                    .map(|m| m.trim().parse())
                    .collect::<Result<_>>()?
            }
            "shuffle" => self.shuffle = parse_value(key, value)?,
            "swaps" => self.swaps = parse_optional(key, value)?,
            "edges" => {
                self.policy = match value {
                    "multi" => EdgePolicy::Multi,
                    "simple" => EdgePolicy::Simple,
                    _ => return Err(Error::InvalidParameter(format!("invalid value `{value}` for `edges`"))),
                }
            }
            "seed" => self.seed = parse_value(key, value)?,
            "tolerance" => self.tolerance = parse_value(key, value)?,
            "max_iterations" => self.max_iterations = parse_value(key, value)?,
            "lazy" => self.lazy = parse_value(key, value)?,
            "k_min" => self.k_min = parse_value(key, value)?,
            "base" => self.base = parse_value(key, value)?,
            "pilot_nodes" => self.pilot_nodes = parse_optional(key, value)?,
            "calibration_seeds" => self.calibration_seeds = parse_value(key, value)?,
            "calibration_fallback" => {
                self.calibration_fallback = match value {
                    "closest" => CalibrationFallback::Closest,
                    "error" => CalibrationFallback::Error,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "invalid value `{value}` for `calibration_fallback`"
                        )))
                    }
                }
            }
            "workers" => self.workers = parse_value(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            other => return Err(Error::InvalidParameter(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn to_config_string(&self) -> String {
        let models: Vec<&str> = self.models.iter().map(|m| m.label()).collect();
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("nodes", self.nodes.to_string());
        kv("alpha", self.alpha.to_string());
        kv("gamma", fmt_optional(&self.gamma));
        kv("theta", fmt_optional(&self.theta));
        kv("models", models.join(","));
        kv("shuffle", self.shuffle.to_string());
        kv("swaps", fmt_optional(&self.swaps));
        kv(
            "edges",
            match self.policy {
                EdgePolicy::Multi => "multi",
                EdgePolicy::Simple => "simple",
            }
            .into(),
        );
        kv("seed", self.seed.to_string());
        kv("tolerance", self.tolerance.to_string());
        kv("max_iterations", self.max_iterations.to_string());
        kv("lazy", self.lazy.to_string());
        kv("k_min", self.k_min.to_string());
        kv("base", self.base.to_string());
        kv("pilot_nodes", fmt_optional(&self.pilot_nodes));
        kv("calibration_seeds", self.calibration_seeds.to_string());
        kv(
            "calibration_fallback",
            match self.calibration_fallback {
                CalibrationFallback::Closest => "closest",
                CalibrationFallback::Error => "error",
            }
            .into(),
        );
        kv("workers", self.workers.to_string());
        kv("out_dir", self.out_dir.display().to_string());
        out
    }
}

/// Independent stream seeds derived from the run seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const STREAM_SHUFFLE: u64 = 1;
const STREAM_CALIBRATION: u64 = 16;

/// One row of the exponent table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub model: Model,
    pub network: NetworkKind,
    pub alpha: f64,
    pub gamma_target: Option<f64>,
    pub theta: f64,
    pub calibration_missed: bool,
    pub nodes: usize,
    pub edges: usize,
    pub gamma_measured: Option<f64>,
    /// Fitted exponent of the simulated `x(k)`; `None` when unavailable.
    pub beta: Option<f64>,
    /// Fitted exponent of the mean-field prediction.
    pub beta_meanfield: Option<f64>,
    /// 1 for the equi-partition model, `2 + gamma_measured` for the weighted one.
    pub predicted_exponent: Option<f64>,
    /// Log-log correlation of simulated and predicted binned curves.
    pub correlation: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub auto_lazy: bool,
    pub total_mass: f64,
    pub dropped_mass: f64,
}

const SUMMARY_HEADER: &str = "model,network,alpha,gamma_target,theta,calibration_missed,nodes,edges,gamma_measured,beta,beta_meanfield,predicted_exponent,correlation,converged,iterations,auto_lazy,total_mass,dropped_mass";

impl RunSummary {
    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model.label(),
            self.network.label(),
            self.alpha,
            fmt_optional(&self.gamma_target),
            self.theta,
            self.calibration_missed,
            self.nodes,
            self.edges,
            fmt_optional(&self.gamma_measured),
            fmt_optional(&self.beta),
            fmt_optional(&self.beta_meanfield),
            fmt_optional(&self.predicted_exponent),
            fmt_optional(&self.correlation),
            self.converged,
            self.iterations,
            self.auto_lazy,
            self.total_mass,
            self.dropped_mass
        )
    }

    fn from_csv_row(line: &str, line_no: usize) -> Result<Self> {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 18 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 18 summary fields, found {}", f.len()),
            });
        }
        let wrap = |e: Error| match e {
            Error::InvalidParameter(message) => Error::Parse {
                line: line_no,
                message,
            },
            other => other,
        };
        (|| {
            Ok(RunSummary {
                model: f[0].parse()?,
                network: f[1].parse()?,
                alpha: parse_value("alpha", f[2])?,
                gamma_target: parse_optional("gamma_target", f[3])?,
                theta: parse_value("theta", f[4])?,
                calibration_missed: parse_value("calibration_missed", f[5])?,
                nodes: parse_value("nodes", f[6])?,
                edges: parse_value("edges", f[7])?,
                gamma_measured: parse_optional("gamma_measured", f[8])?,
                beta: parse_optional("beta", f[9])?,
                beta_meanfield: parse_optional("beta_meanfield", f[10])?,
                predicted_exponent: parse_optional("predicted_exponent", f[11])?,
                correlation: parse_optional("correlation", f[12])?,
                converged: parse_value("converged", f[13])?,
                iterations: parse_value("iterations", f[14])?,
                auto_lazy: parse_value("auto_lazy", f[15])?,
                total_mass: parse_value("total_mass", f[16])?,
                dropped_mass: parse_value("dropped_mass", f[17])?,
            })
        })()
        .map_err(wrap)
    }
}

pub fn summaries_csv(rows: &[RunSummary]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn parse_summaries_csv(text: &str) -> Result<Vec<RunSummary>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SUMMARY_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "not a run summary file".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| RunSummary::from_csv_row(l, i + 1))
        .collect()
}

fn model_title(m: Model) -> &'static str {
    match m {
        Model::EquiPartition => "Equi-partition model",
        Model::WeightedPartition => "Weighted partition model",
    }
}

fn network_title(n: NetworkKind) -> &'static str {
    match n {
        NetworkKind::Correlated => "Correlated network",
        NetworkKind::Shuffled => "Shuffled network",
    }
}

/// Model × network table of fitted exponents with the mean-field values.
///
/// Rows whose simulation did not converge show `n/a` in the exponent column.
pub fn report_table1(runs: &[RunSummary]) -> String {
    let mut rows: Vec<&RunSummary> = runs.iter().collect();
    rows.sort_by(|a, b| {
        (a.model.label(), a.network, a.gamma_target.map(f64::to_bits))
            .cmp(&(b.model.label(), b.network, b.gamma_target.map(f64::to_bits)))
    });
    let num = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}"));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<26} {:<20} {:>8} {:>8} {:>10} {:>10} {:>9}  {}",
        "Model", "Network", "gamma*", "gamma", "beta", "beta(MF)", "predicted", "notes"
    );
    out.push_str(&"-".repeat(104));
    out.push('\n');
    let mut last_model = None;
    for r in rows {
        let model = if last_model == Some(r.model) {
            ""
        } else {
            model_title(r.model)
        };
        last_model = Some(r.model);
        let mut notes = Vec::new();
        if !r.converged {
            notes.push("not converged");
        }
        if r.calibration_missed {
            notes.push("calibration missed target");
        }
        let beta = if r.converged { num(r.beta) } else { "n/a".into() };
        let line = format!(
            "{:<26} {:<20} {:>8} {:>8} {:>10} {:>10} {:>9}  {}",
            model,
            network_title(r.network),
            r.gamma_target.map_or_else(|| "-".into(), |g| format!("{g:.2}")),
            num(r.gamma_measured),
            beta,
            num(r.beta_meanfield),
            num(r.predicted_exponent),
            notes.join("; ")
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Collected outputs of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub theta: f64,
    pub summaries: Vec<RunSummary>,
    /// Artifact file names (relative to `out_dir`) with their SHA-256 digests.
    pub artifacts: BTreeMap<String, String>,
}

struct Writer<'a> {
    dir: &'a Path,
    artifacts: BTreeMap<String, String>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        let digest = Sha256::digest(contents.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.artifacts.insert(name.to_string(), hex);
        Ok(())
    }
}

fn normalized(curve: &crate::stats::BinnedCurve) -> Vec<(f64, f64)> {
    let first = curve.bins.first().map_or(1.0, |b| b.mean);
    curve
        .bins
        .iter()
        .filter(|_| first > 0.0)
        .map(|b| (b.abscissa, b.mean / first))
        .collect()
}

/// Runs the full pipeline described by `config`, writing artifacts into
/// `config.out_dir`. Artifacts written before a failing stage are kept.
pub fn run_experiment(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    #[cfg(feature = "parallel")]
    if config.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        return pool.install(|| run_pipeline(config));
    }
    run_pipeline(config)
}

fn run_pipeline(config: &RunConfig) -> Result<RunReport> {
    let dir = &config.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut writer = Writer {
        dir,
        artifacts: BTreeMap::new(),
    };

    let (theta, calibration_missed) = match (config.theta, config.gamma) {
        (Some(theta), _) => (theta, false),
        (None, Some(gamma)) => {
            let mut opts = CalibrationOptions::new(config.nodes, config.alpha, gamma);
            opts.policy = config.policy;
            opts.k_min = config.k_min;
            if let Some(p) = config.pilot_nodes {
                opts.pilot_nodes = p;
            }
            opts.seeds = (0..config.calibration_seeds as u64)
                .map(|i| derive_seed(config.seed, STREAM_CALIBRATION + i))
                .collect();
            match calibrate_theta_search(&opts).map_err(|e| e.in_stage("calibrate"))? {
                Ok(c) => (c.theta, false),
                Err(miss) => match config.calibration_fallback {
                    CalibrationFallback::Closest => (miss.best.theta, true),
                    CalibrationFallback::Error => {
                        return Err(Error::Calibration {
                            target: gamma,
                            low: miss.achievable.0,
                            high: miss.achievable.1,
                        }
                        .in_stage("calibrate"))
                    }
                },
            }
        }
        (None, None) => unreachable!("validated"),
    };

    let params = GenParams {
        node_count: config.nodes,
        alpha: config.alpha,
        theta,
        seed: config.seed,
        policy: config.policy,
    };
    let (generated, _) = generate(&params).map_err(|e| e.in_stage("generate"))?;
    writer.write("network.edges", &format_edge_list(&generated))?;

    let mut networks: Vec<(NetworkKind, Graph)> = vec![(NetworkKind::Correlated, generated)];
    if config.shuffle {
        let shuffle = ShuffleParams {
            swap_attempts: config.swaps,
            seed: derive_seed(config.seed, STREAM_SHUFFLE),
        };
        let (shuffled, _) =
            maslov_sneppen_shuffle(&networks[0].1, &shuffle).map_err(|e| e.in_stage("shuffle"))?;
        writer.write("shuffled.edges", &format_edge_list(&shuffled))?;
        networks.push((NetworkKind::Shuffled, shuffled));
    }

    let mut fig1 = SeriesTable::default();
    let mut fig2 = SeriesTable::default();
    let mut fig_mass: BTreeMap<Model, SeriesTable> = BTreeMap::new();
    let mut summaries = Vec::new();

    for (kind, graph) in &networks {
        let label = kind.label();
        let g = largest_component(graph).graph;
        writer.write(&format!("{label}_lscc.edges"), &format_edge_list(&g))?;
        let degrees = g.degrees();

        fig1.push(label, ccdf(&degrees).into_iter().map(|(k, p)| (k as f64, p)));
        let hist = joint_histogram(&g).map_err(|e| e.in_stage("histogram"))?;
        let knn_binned = binned_by_degree(&degrees, &average_neighbor_degree(&g), config.base)
            .map_err(|e| e.in_stage("knn"))?;
        let knn_fit = fit_powerlaw(&knn_binned, config.k_min).ok();
        fig2.push(label, knn_binned.bins.iter().map(|b| (b.abscissa, b.mean)));
        writer.write(&format!("{label}_knn.csv"), &knn_csv(&hist, knn_fit.as_ref()))?;
        let gamma_measured = knn_fit.map(|f| f.exponent);

        for &model in &config.models {
            let spec = config.transport_spec(model);
            let ss = steady_state(&g, &spec, None).map_err(|e| e.in_stage("simulate"))?;
            let tag = format!("{label}_{}", model.label());
            writer.write(&format!("{tag}_masses.csv"), &masses_csv(&g, ss.mass.values()))?;

            let sim_curve = binned_by_degree(&degrees, ss.mass.values(), config.base)
                .map_err(|e| e.in_stage("analyze"))?;
            let sim_fit = fit_powerlaw(&sim_curve, config.k_min).ok();
            writer.write(&format!("{tag}_curve.csv"), &curve_csv(&sim_curve, sim_fit.as_ref()))?;

            let prediction = predict(&hist, model.weighting());
            writer.write(
                &format!("{label}_prediction_{}.csv", model.weighting().label()),
                &prediction_csv(&hist, &prediction),
            )?;
            let mf_curve = binned_by_degree(&degrees, &prediction.per_node(&degrees), config.base)
                .map_err(|e| e.in_stage("predict"))?;
            let mf_fit = fit_powerlaw(&mf_curve, config.k_min).ok();
            let correlation = loglog_correlation(&sim_curve, &mf_curve, config.k_min).ok();

            let table = fig_mass.entry(model).or_default();
            table.push(label, normalized(&sim_curve));
            table.push(&format!("{label}-meanfield"), normalized(&mf_curve));

            summaries.push(RunSummary {
                model,
                network: *kind,
                alpha: config.alpha,
                gamma_target: config.gamma,
                theta,
                calibration_missed,
                nodes: g.node_count(),
                edges: g.edge_count(),
                gamma_measured,
                beta: sim_fit.map(|f| f.exponent),
                beta_meanfield: mf_fit.map(|f| f.exponent),
                predicted_exponent: match model {
                    Model::EquiPartition => Some(1.0),
                    Model::WeightedPartition => gamma_measured.map(|g| 2.0 + g),
                },
                correlation,
                converged: ss.converged,
                iterations: ss.iterations_used,
                auto_lazy: ss.auto_lazy,
                total_mass: ss.mass.total(),
                dropped_mass: ss.dropped_mass,
            });
        }
    }

    writer.write("fig1_ccdf.csv", &fig1.to_csv())?;
    writer.write("fig2_knn.csv", &fig2.to_csv())?;
    for (model, table) in &fig_mass {
        let name = match model {
            Model::EquiPartition => "fig3_mass_equi.csv",
            Model::WeightedPartition => "fig4_mass_weighted.csv",
        };
        writer.write(name, &table.to_csv())?;
    }
    writer.write("summary.csv", &summaries_csv(&summaries))?;
    writer.write("table1.txt", &report_table1(&summaries))?;

    let mut manifest = String::from("# netdiff run manifest\n");
    manifest.push_str(&config.to_config_string());
    let _ = writeln!(manifest, "# effective theta = {theta}");
    for (name, digest) in &writer.artifacts {
        let _ = writeln!(manifest, "# sha256 {digest}  {name}");
    }
    let path = dir.join("manifest.txt");
    fs::write(&path, manifest).map_err(|e| Error::io(&path, e))?;

    Ok(RunReport {
        theta,
        summaries,
        artifacts: writer.artifacts,
    })
}

/// Reads the artifact digests recorded in a manifest.
pub fn manifest_checksums(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# sha256 "))
        .filter_map(|rest| {
            let (digest, name) = rest.split_once("  ")?;
            Some((name.to_string(), digest.to_string()))
        })
        .collect()
}

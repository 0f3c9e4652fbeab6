//! Money-transport dynamics on a graph.
//!
//! Each step node `i` splits its mass over its out-edges. Under
//! [`Model::EquiPartition`] every out-edge gets `x_i / k_i^out`; under
//! [`Model::WeightedPartition`] the edge to `m` gets
//! `x_i · k_m^in / Σ_j A_ij k_j^in`. Nodes with no outgoing weight keep
//! nothing: their mass leaves the system and is reported as dropped.
//!
//! The kernel pulls along in-edges: every output entry is a sum over its own
//! in-neighbors in a fixed order, so parallel and sequential backends produce
//! bit-identical iterates.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::meanfield::Weighting;

/// Dense oracle node limit.
pub const EXACT_NODE_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Even split over out-edges, `g(k) = 1`.
    EquiPartition,
    /// Split proportional to destination in-degree, `g(k) = k`.
    WeightedPartition,
}

impl Model {
    pub fn weighting(self) -> Weighting {
        match self {
            Model::EquiPartition => Weighting::Unit,
            Model::WeightedPartition => Weighting::Linear,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Model::EquiPartition => "equi",
            Model::WeightedPartition => "weighted",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equi" | "equi_partition" => Ok(Model::EquiPartition),
            "weighted" | "weighted_partition" => Ok(Model::WeightedPartition),
            other => Err(Error::InvalidParameter(format!(
                "unknown model `{other}` (expected equi or weighted)"
            ))),
        }
    }
}

/// Execution strategy of the edge pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise sequential.
    Parallel,
}

impl Default for Backend {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Backend::Parallel
        } else {
            Backend::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportSpec {
    pub model: Model,
    /// `λ` in `λ·x + (1-λ)·step(x)`; in `[0, 1)`.
    pub lazy_factor: f64,
    /// Relative L1 change per step below which iteration stops.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub backend: Backend,
}

impl TransportSpec {
    pub fn new(model: Model) -> Self {
        TransportSpec {
            model,
            lazy_factor: 0.0,
            tolerance: 1e-10,
            max_iterations: 100_000,
            backend: Backend::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(0.0..1.0).contains(&self.lazy_factor) {
            return Err(Error::InvalidParameter(format!(
                "lazy factor {} outside [0, 1)",
                self.lazy_factor
            )));
        }
        Ok(())
    }
}

/// Nonnegative per-node mass with a cached total.
#[derive(Debug, Clone, PartialEq)]
pub struct MassVector {
    values: Vec<f64>,
    time_step: usize,
    total: f64,
}

impl MassVector {
    /// `1/N` on every node, at `t = 1`.
    pub fn uniform(n: usize) -> Self {
        let v = 1.0 / n as f64;
        MassVector::from_parts(vec![v; n], 1)
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "mass at node {i} is {v}; masses must be nonnegative"
            )));
        }
        Ok(MassVector::from_parts(values, 1))
    }

    fn from_parts(values: Vec<f64>, time_step: usize) -> Self {
        let total = values.iter().sum();
        MassVector {
            values,
            time_step,
            total,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time_step(&self) -> usize {
        self.time_step
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

/// Per-graph coefficients of the transport operator.
///
/// `x'(m) = dest[m] · Σ_{i -> m} x_i · source[i]`; `source[i]` is zero for
/// nodes without outgoing weight.
#[derive(Debug, Clone)]
pub struct Kernel {
    source: Vec<f64>,
    dest: Vec<f64>,
}

impl Kernel {
    pub fn new(g: &Graph, model: Model) -> Self {
        let n = g.node_count();
        let dest: Vec<f64> = match model {
            Model::EquiPartition => vec![1.0; n],
            Model::WeightedPartition => (0..n).map(|m| g.in_degree(m) as f64).collect(),
        };
        let source = (0..n)
            .map(|i| {
                let denom: f64 = match model {
                    Model::EquiPartition => g.out_degree(i) as f64,
                    Model::WeightedPartition => {
                        g.neighbors(i).iter().map(|&j| dest[j as usize]).sum()
                    }
                };
                if denom > 0.0 {
                    1.0 / denom
                } else {
                    0.0
                }
            })
            .collect();
        Kernel { source, dest }
    }

    /// Whether node `i` has no outgoing weight and therefore drops its mass.
    pub fn is_sink(&self, i: usize) -> bool {
        self.source[i] == 0.0
    }

    /// Writes `step(x)` into `out` and returns the mass dropped at sinks.
    pub fn apply(&self, g: &Graph, x: &[f64], out: &mut [f64], scratch: &mut Vec<f64>, backend: Backend) -> f64 {
        let n = x.len();
        scratch.clear();
        scratch.extend(x.iter().zip(&self.source).map(|(x, s)| x * s));
        let scaled = &scratch[..];
        let pull = |(m, slot): (usize, &mut f64)| {
            // Folding from +0.0 keeps empty sums from printing as -0.
            let s = g.in_neighbors(m).iter().fold(0.0, |acc, &i| acc + scaled[i as usize]);
            *slot = self.dest[m] * s;
        };
        match backend {
            #[cfg(feature = "parallel")]
            Backend::Parallel => out[..n].par_iter_mut().enumerate().for_each(pull),
            _ => out[..n].iter_mut().enumerate().for_each(pull),
        }
        x.iter()
            .zip(&self.source)
            .filter(|(_, &s)| s == 0.0)
            .fold(0.0, |acc, (x, _)| acc + x)
    }
}

/// Result of a single [`step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub mass: MassVector,
    /// Mass held by sinks before the step, removed by it.
    pub dropped: f64,
}

fn check_len(g: &Graph, x: &MassVector) -> Result<()> {
    if x.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            expected: g.node_count(),
            actual: x.len(),
        });
    }
    Ok(())
}

/// One transport step, mixed with the current state by `spec.lazy_factor`.
pub fn step(g: &Graph, x: &MassVector, spec: &TransportSpec) -> Result<StepOutcome> {
    spec.validate()?;
    check_len(g, x)?;
    let kernel = Kernel::new(g, spec.model);
    let mut out = vec![0.0; x.len()];
    let mut scratch = Vec::with_capacity(x.len());
    let mut dropped = kernel.apply(g, x.values(), &mut out, &mut scratch, spec.backend);
    let lambda = spec.lazy_factor;
    if lambda > 0.0 {
        for (o, &xi) in out.iter_mut().zip(x.values()) {
            *o = lambda * xi + (1.0 - lambda) * *o;
        }
        dropped *= 1.0 - lambda;
    }
    Ok(StepOutcome {
        mass: MassVector::from_parts(out, x.time_step() + 1),
        dropped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub mass: MassVector,
    pub iterations_used: usize,
    pub converged: bool,
    /// Relative L1 change of the last step.
    pub residual: f64,
    /// Lazy factor of the run that produced `mass`.
    pub lazy_factor: f64,
    /// Set when a period-2 oscillation forced a rerun with `λ = 0.5`.
    pub auto_lazy: bool,
    /// Cumulative mass removed at sinks.
    pub dropped_mass: f64,
}

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn iterate(g: &Graph, kernel: &Kernel, spec: &TransportSpec, x0: &MassVector, detect_period: bool) -> (SteadyState, bool) {
    let n = g.node_count();
    let lambda = spec.lazy_factor;
    let mut prev = x0.values().to_vec();
    let mut cur = x0.values().to_vec();
    let mut next = vec![0.0; n];
    let mut scratch = Vec::with_capacity(n);
    let mut dropped_total = 0.0;
    let mut residual = f64::INFINITY;
    let mut have_prev = false;

    for it in 1..=spec.max_iterations {
        let mut dropped = kernel.apply(g, &cur, &mut next, &mut scratch, spec.backend);
        if lambda > 0.0 {
            for (o, &c) in next.iter_mut().zip(&cur) {
                *o = lambda * c + (1.0 - lambda) * *o;
            }
            dropped *= 1.0 - lambda;
        }
        dropped_total += dropped;
        let norm: f64 = cur.iter().sum();
        residual = if norm > 0.0 { l1_diff(&next, &cur) / norm } else { 0.0 };
        if residual <= spec.tolerance {
            let mass = MassVector::from_parts(next, x0.time_step() + it);
            return (
                SteadyState {
                    mass,
                    iterations_used: it,
                    converged: true,
                    residual,
                    lazy_factor: lambda,
                    auto_lazy: false,
                    dropped_mass: dropped_total,
                },
                false,
            );
        }
        if detect_period && have_prev && norm > 0.0 && l1_diff(&next, &prev) / norm <= spec.tolerance {
            return (
                SteadyState {
                    mass: MassVector::from_parts(next, x0.time_step() + it),
                    iterations_used: it,
                    converged: false,
                    residual,
                    lazy_factor: lambda,
                    auto_lazy: false,
                    dropped_mass: dropped_total,
                },
                true,
            );
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        have_prev = true;
    }
    let mass = MassVector::from_parts(cur, x0.time_step() + spec.max_iterations);
    (
        SteadyState {
            mass,
            iterations_used: spec.max_iterations,
            converged: false,
            residual,
            lazy_factor: lambda,
            auto_lazy: false,
            dropped_mass: dropped_total,
        },
        false,
    )
}

/// Iterates [`step`] until the relative L1 change drops to `spec.tolerance`.
///
/// Starts from `x0`, or `1/N` everywhere when `None`. If the iterates settle
/// into a period-2 cycle (as on bipartite graphs) the run restarts from `x0`
/// with `λ = 0.5`, which has the same fixed point. Non-convergence is
/// reported through [`SteadyState::converged`], not as an error.
pub fn steady_state(g: &Graph, spec: &TransportSpec, x0: Option<&MassVector>) -> Result<SteadyState> {
    spec.validate()?;
    let uniform;
    let x0 = match x0 {
        Some(x) => {
            check_len(g, x)?;
            x
        }
        None => {
            uniform = MassVector::uniform(g.node_count());
            &uniform
        }
    };
    let kernel = Kernel::new(g, spec.model);
    let (result, periodic) = iterate(g, &kernel, spec, x0, spec.lazy_factor == 0.0);
    if !periodic {
        return Ok(result);
    }
    let lazy = TransportSpec {
        lazy_factor: 0.5,
        ..*spec
    };
    let (mut rerun, _) = iterate(g, &kernel, &lazy, x0, false);
    rerun.iterations_used += result.iterations_used;
    rerun.dropped_mass += result.dropped_mass;
    rerun.auto_lazy = true;
    Ok(rerun)
}

/// Dense column-stochastic transition matrix `Q[m][i]` of `spec.model`.
pub fn transition_matrix(g: &Graph, model: Model) -> DMatrix<f64> {
    let n = g.node_count();
    let kernel = Kernel::new(g, model);
    let mut q = DMatrix::zeros(n, n);
    for m in 0..n {
        for &i in g.in_neighbors(m) {
            let i = i as usize;
            q[(m, i)] += kernel.dest[m] * kernel.source[i];
        }
    }
    q
}

fn reachable(n: usize, from: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        for v in next(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Stationary distribution by a dense linear solve of `Q π = π`, `Σπ = 1`.
///
/// Intended as an oracle for small graphs; fails on reducible chains.
pub fn exact_stationary(g: &Graph, spec: &TransportSpec) -> Result<MassVector> {
    let n = g.node_count();
    if n > EXACT_NODE_LIMIT {
        return Err(Error::TooLarge {
            nodes: n,
            limit: EXACT_NODE_LIMIT,
        });
    }
    let kernel = Kernel::new(g, spec.model);
    let forward = reachable(n, 0, |u| {
        if kernel.is_sink(u) {
            Vec::new()
        } else {
            g.neighbors(u).iter().map(|&v| v as usize).collect()
        }
    });
    if let Some(node) = forward.iter().position(|&r| !r) {
        return Err(Error::Reducible { node });
    }
    let backward = reachable(n, 0, |u| {
        g.in_neighbors(u)
            .iter()
            .map(|&v| v as usize)
            .filter(|&v| !kernel.is_sink(v))
            .collect()
    });
    if let Some(node) = backward.iter().position(|&r| !r) {
        return Err(Error::Reducible { node });
    }

    let mut a = transition_matrix(g, spec.model);
    for i in 0..n {
        a[(i, i)] -= 1.0;
    }
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let pi = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::InsufficientData("singular stationary system".into()))?;
    // Round-off can leave tiny negatives on nodes with vanishing mass.
    MassVector::from_values(pi.iter().map(|&p| p.max(0.0)).collect())
}

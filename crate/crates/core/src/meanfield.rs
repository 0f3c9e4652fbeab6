//! Annealed-network mean-field theory for degree-biased walks.
//!
//! Everything here is derived from a [`DegreeJointHistogram`]: the number of
//! edge endpoints joining a node of degree `k` to a node of degree `k'`. It
//! holds raw integer counts, so the degree detailed-balance identity can be
//! checked exactly and probabilities are only formed on demand.
//!
//! For a transition weight `g` on destination degree, the stationary class
//! probability is
//!
//! > R(k) ∝ k · P(k) · g(k) · Σ_k' g(k') · P(k'|k)
//!
//! and the per-node prediction is `R(k) / (N · P(k))`. With `g ≡ 1` this is
//! proportional to `k`; with `g(k) = k` it is proportional to `k² · k_nn(k)`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stats::{binned_by_degree, fit_powerlaw, DEFAULT_BASE};

/// Destination-degree weight of the transition kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weighting {
    /// `g(k) = 1`
    Unit,
    /// `g(k) = k`
    Linear,
}

impl Weighting {
    #[inline]
    pub fn weight(self, k: usize) -> f64 {
        match self {
            Weighting::Unit => 1.0,
            Weighting::Linear => k as f64,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Weighting::Unit => "unit",
            Weighting::Linear => "linear",
        }
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Weighting::Unit),
            "linear" => Ok(Weighting::Linear),
            other => Err(Error::InvalidParameter(format!(
                "unknown weighting `{other}` (expected unit or linear)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeJointHistogram {
    node_count: usize,
    /// Occupied degrees `k >= 1`, ascending.
    classes: Vec<usize>,
    /// Nodes per class, aligned with `classes`.
    class_sizes: Vec<u64>,
    /// Row-major `counts[a * c + b]`: endpoints of degree `classes[a]` joined
    /// to degree `classes[b]`.
    counts: Vec<u64>,
}

pub fn joint_histogram(g: &Graph) -> Result<DegreeJointHistogram> {
    if g.is_directed() {
        return Err(Error::Unsupported(
            "mean-field statistics are defined for undirected graphs".into(),
        ));
    }
    let degrees = g.degrees();
    let mut classes: Vec<usize> = degrees.iter().copied().filter(|&k| k > 0).collect();
    classes.sort_unstable();
    classes.dedup();
    if classes.is_empty() {
        return Err(Error::InsufficientData("graph has no edges".into()));
    }
    let c = classes.len();
    let max_k = *classes.last().unwrap();
    let mut index = vec![usize::MAX; max_k + 1];
    for (i, &k) in classes.iter().enumerate() {
        index[k] = i;
    }
    let mut class_sizes = vec![0u64; c];
    let mut counts = vec![0u64; c * c];
    for u in 0..g.node_count() {
        let ku = degrees[u];
        if ku == 0 {
            continue;
        }
        let a = index[ku];
        class_sizes[a] += 1;
        for &v in g.neighbors(u) {
            counts[a * c + index[degrees[v as usize]]] += 1;
        }
    }
    Ok(DegreeJointHistogram {
        node_count: g.node_count(),
        classes,
        class_sizes,
        counts,
    })
}

impl DegreeJointHistogram {
    /// `N`, including any degree-zero nodes.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn class_index(&self, k: usize) -> Option<usize> {
        self.classes.binary_search(&k).ok()
    }

    /// Endpoint count between class indices `a` and `b`.
    #[inline]
    pub fn count(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.classes.len() + b]
    }

    /// Endpoint count between degrees `k` and `k2` (zero when either is unoccupied).
    pub fn count_by_degree(&self, k: usize, k2: usize) -> u64 {
        match (self.class_index(k), self.class_index(k2)) {
            (Some(a), Some(b)) => self.count(a, b),
            _ => 0,
        }
    }

    /// `P_k(k)`.
    pub fn degree_probability(&self, a: usize) -> f64 {
        self.class_sizes[a] as f64 / self.node_count as f64
    }

    /// `P(k'|k)` for class indices `(b | a)`.
    pub fn conditional(&self, b: usize, a: usize) -> f64 {
        self.count(a, b) as f64 / (self.classes[a] as u64 * self.class_sizes[a]) as f64
    }

    /// Expected adjacency between a node of class `a` and one of class `b`.
    pub fn annealed_adjacency(&self, a: usize, b: usize) -> f64 {
        self.count(a, b) as f64 / (self.class_sizes[a] * self.class_sizes[b]) as f64
    }

    /// Checks `k'·P(k')·P(k|k') = k·P(k)·P(k'|k)` for all occupied pairs by
    /// cross-multiplying the integer counts, and that every row of the
    /// histogram sums to `k · n_k`.
    pub fn detailed_balance_violations(&self) -> Vec<(usize, usize)> {
        let c = self.classes.len();
        let mut bad = Vec::new();
        for a in 0..c {
            let row: u64 = (0..c).map(|b| self.count(a, b)).sum();
            let stubs_a = self.classes[a] as u64 * self.class_sizes[a];
            if row != stubs_a {
                bad.push((self.classes[a], self.classes[a]));
            }
            for b in 0..c {
                let stubs_b = self.classes[b] as u64 * self.class_sizes[b];
                // k'·n_{k'}·count(k',k)/(k'·n_{k'}) vs k·n_k·count(k,k')/(k·n_k),
                // scaled by the product of both denominators.
                let lhs = stubs_b as u128 * self.count(b, a) as u128 * stubs_a as u128;
                let rhs = stubs_a as u128 * self.count(a, b) as u128 * stubs_b as u128;
                if lhs != rhs {
                    bad.push((self.classes[a], self.classes[b]));
                }
            }
        }
        bad
    }

    pub fn detailed_balance_holds(&self) -> bool {
        self.detailed_balance_violations().is_empty()
    }

    /// `Σ_{k'} g(k') · count(k, k')` for class `a`.
    fn weighted_row(&self, a: usize, g: Weighting) -> f64 {
        let c = self.classes.len();
        (0..c)
            .map(|b| g.weight(self.classes[b]) * self.count(a, b) as f64)
            .sum()
    }
}

/// `k_nn(k) = Σ_q q · P(q|k)` per occupied class, aligned with `h.classes()`.
pub fn knn_curve(h: &DegreeJointHistogram) -> Vec<(usize, f64)> {
    (0..h.classes.len())
        .map(|a| {
            let stubs = (h.classes[a] as u64 * h.class_sizes[a]) as f64;
            (h.classes[a], h.weighted_row(a, Weighting::Linear) / stubs)
        })
        .collect()
}

/// Mean degree of each node's neighbors; zero for isolated nodes.
pub fn average_neighbor_degree(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .map(|u| {
            let nbrs = g.neighbors(u);
            if nbrs.is_empty() {
                0.0
            } else {
                let s: usize = nbrs.iter().map(|&v| g.degree(v as usize)).sum();
                s as f64 / nbrs.len() as f64
            }
        })
        .collect()
}

/// Log-log slope of the node-averaged `k_nn` over log-binned degrees `>= k_min`.
pub fn knn_slope(g: &Graph, k_min: f64) -> Result<f64> {
    let curve = binned_by_degree(&g.degrees(), &average_neighbor_degree(g), DEFAULT_BASE)?;
    Ok(fit_powerlaw(&curve, k_min)?.exponent)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldPrediction {
    pub degree_classes: Vec<usize>,
    pub class_sizes: Vec<u64>,
    /// Stationary probability of each class; sums to one.
    pub r: Vec<f64>,
    /// Per-node prediction `R(k) / (N · P(k))`.
    pub x_pred: Vec<f64>,
    pub weighting: Weighting,
}

impl MeanFieldPrediction {
    /// Predicted mass of every node given its degree; zero for unoccupied degrees.
    pub fn per_node(&self, degrees: &[usize]) -> Vec<f64> {
        degrees
            .iter()
            .map(|k| match self.degree_classes.binary_search(k) {
                Ok(i) => self.x_pred[i],
                Err(_) => 0.0,
            })
            .collect()
    }
}

pub fn predict(h: &DegreeJointHistogram, weighting: Weighting) -> MeanFieldPrediction {
    let c = h.classes.len();
    // k·P(k)·g(k)·Σ g(k')P(k'|k) = g(k) · Σ g(k')·count(k,k') / N; the 1/N cancels.
    let raw: Vec<f64> = (0..c)
        .map(|a| weighting.weight(h.classes[a]) * h.weighted_row(a, weighting))
        .collect();
    let z: f64 = raw.iter().sum();
    let r: Vec<f64> = raw.iter().map(|v| v / z).collect();
    let x_pred = r
        .iter()
        .zip(&h.class_sizes)
        .map(|(r, &n)| r / n as f64)
        .collect();
    MeanFieldPrediction {
        degree_classes: h.classes.clone(),
        class_sizes: h.class_sizes.clone(),
        r,
        x_pred,
        weighting,
    }
}

/// Column-stochastic transition matrix between degree classes.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeTransition {
    pub classes: Vec<usize>,
    /// Row-major `matrix[to * c + from]`.
    matrix: Vec<f64>,
}

impl DegreeTransition {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Probability of moving from class index `from` to class index `to`.
    #[inline]
    pub fn get(&self, to: usize, from: usize) -> f64 {
        self.matrix[to * self.classes.len() + from]
    }

    pub fn column_sum(&self, from: usize) -> f64 {
        (0..self.dim()).map(|to| self.get(to, from)).sum()
    }

    /// One application of the degree-space master equation:
    /// `R(k) - Σ_q Q(q|k)·R(k) + Σ_q Q(k|q)·R(q)`.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        let c = self.dim();
        let outflow: Vec<f64> = (0..c).map(|k| self.column_sum(k) * r[k]).collect();
        (0..c)
            .map(|k| {
                let inflow: f64 = (0..c).map(|q| self.get(k, q) * r[q]).sum();
                r[k] - outflow[k] + inflow
            })
            .collect()
    }
}

pub fn annealed_transition(h: &DegreeJointHistogram, weighting: Weighting) -> DegreeTransition {
    let c = h.classes.len();
    let mut matrix = vec![0.0; c * c];
    for from in 0..c {
        let denom = h.weighted_row(from, weighting);
        if denom <= 0.0 {
            continue;
        }
        for to in 0..c {
            matrix[to * c + from] = weighting.weight(h.classes[to]) * h.count(from, to) as f64 / denom;
        }
    }
    DegreeTransition {
        classes: h.classes.clone(),
        matrix,
    }
}

/// Iterates the degree-space master equation `steps` times.
pub fn evolve_degree_space(q: &DegreeTransition, r0: &[f64], steps: usize) -> Result<Vec<f64>> {
    evolve_degree_space_lazy(q, r0, steps, 0.0)
}

/// As [`evolve_degree_space`], mixing each step as `λ·R + (1-λ)·step(R)`.
pub fn evolve_degree_space_lazy(
    q: &DegreeTransition,
    r0: &[f64],
    steps: usize,
    lazy: f64,
) -> Result<Vec<f64>> {
    if r0.len() != q.dim() {
        return Err(Error::LengthMismatch {
            expected: q.dim(),
            actual: r0.len(),
        });
    }
    if !(0.0..1.0).contains(&lazy) {
        return Err(Error::InvalidParameter(format!("lazy factor {lazy} outside [0, 1)")));
    }
    let mut r = r0.to_vec();
    for _ in 0..steps {
        let next = q.apply(&r);
        r = if lazy == 0.0 {
            next
        } else {
            r.iter().zip(&next).map(|(a, b)| lazy * a + (1.0 - lazy) * b).collect()
        };
    }
    Ok(r)
}

//! CSV layouts shared by the pipeline and the command-line tool.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::meanfield::{knn_curve, DegreeJointHistogram, MeanFieldPrediction};
use crate::stats::{BinnedCurve, PowerLawFit};

/// `node_id,degree,mass` (undirected) or `node_id,in_degree,out_degree,mass`.
pub fn masses_csv(g: &Graph, masses: &[f64]) -> String {
    let mut out = String::new();
    if g.is_directed() {
        out.push_str("node_id,in_degree,out_degree,mass\n");
        for (u, m) in masses.iter().enumerate() {
            let _ = writeln!(out, "{u},{},{},{m}", g.in_degree(u), g.out_degree(u));
        }
    } else {
        out.push_str("node_id,degree,mass\n");
        for (u, m) in masses.iter().enumerate() {
            let _ = writeln!(out, "{u},{},{m}", g.degree(u));
        }
    }
    out
}

/// Reads the `node_id` and `mass` columns of a masses file, returning masses
/// indexed by node id.
pub fn parse_masses_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, message: "empty masses file".into() })?;
    let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
    let find = |name: &str| {
        cols.iter().position(|c| *c == name).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("missing `{name}` column"),
        })
    };
    let id_col = find("node_id")?;
    let mass_col = find("mass")?;
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |what: &str| Error::Parse {
            line: idx + 1,
            message: format!("invalid {what}"),
        };
        let id: usize = fields.get(id_col).ok_or_else(|| bad("row"))?.parse().map_err(|_| bad("node_id"))?;
        let mass: f64 = fields.get(mass_col).ok_or_else(|| bad("row"))?.parse().map_err(|_| bad("mass"))?;
        rows.push((id, mass));
    }
    let n = rows.iter().map(|r| r.0 + 1).max().unwrap_or(0);
    let mut masses = vec![0.0; n];
    for (id, m) in rows {
        masses[id] = m;
    }
    Ok(masses)
}

/// `k,P_k,k_nn,R,x_pred`, one row per occupied degree class.
pub fn prediction_csv(h: &DegreeJointHistogram, p: &MeanFieldPrediction) -> String {
    let mut out = String::from("k,P_k,k_nn,R,x_pred\n");
    for (a, (k, knn)) in knn_curve(h).into_iter().enumerate() {
        let _ = writeln!(
            out,
            "{k},{},{knn},{},{}",
            h.degree_probability(a),
            p.r[a],
            p.x_pred[a]
        );
    }
    out
}

fn fit_block(out: &mut String, fit: Option<&PowerLawFit>) {
    match fit {
        Some(f) => {
            let _ = writeln!(
                out,
                "# fit exponent={} intercept={} k_min={} r_squared={} bins={}",
                f.exponent, f.intercept, f.k_min, f.r_squared, f.bin_count
            );
        }
        None => out.push_str("# fit unavailable\n"),
    }
}

/// `abscissa,mean,count` per bin followed by a `# fit ...` summary line.
pub fn curve_csv(curve: &BinnedCurve, fit: Option<&PowerLawFit>) -> String {
    let mut out = String::from("abscissa,mean,count\n");
    for b in &curve.bins {
        let _ = writeln!(out, "{},{},{}", b.abscissa, b.mean, b.count);
    }
    fit_block(&mut out, fit);
    out
}

/// `k,nodes,k_nn` per occupied class followed by the fit of the log-binned curve.
pub fn knn_csv(h: &DegreeJointHistogram, fit: Option<&PowerLawFit>) -> String {
    let mut out = String::from("k,nodes,k_nn\n");
    for ((k, knn), n) in knn_curve(h).into_iter().zip(h.class_sizes()) {
        let _ = writeln!(out, "{k},{n},{knn}");
    }
    fit_block(&mut out, fit);
    out
}

/// Plot-ready long format: `x,y,series`.
#[derive(Debug, Default, Clone)]
pub struct SeriesTable {
    rows: Vec<(f64, f64, String)>,
}

impl SeriesTable {
    pub fn push(&mut self, series: &str, points: impl IntoIterator<Item = (f64, f64)>) {
        self.rows
            .extend(points.into_iter().map(|(x, y)| (x, y, series.to_string())));
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,series\n");
        for (x, y, s) in &self.rows {
            let _ = writeln!(out, "{x},{y},{s}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Directedness, EdgeList};

    #[test]
    fn masses_round_trip() {
        let (g, _) = build_graph(
            &EdgeList::from_pairs(vec![(0, 1), (1, 2)]),
            Directedness::Undirected,
        )
        .unwrap();
        let m = [0.25, 0.5, 0.25];
        let text = masses_csv(&g, &m);
        assert!(text.starts_with("node_id,degree,mass\n0,1,0.25\n"));
        assert_eq!(parse_masses_csv(&text).unwrap(), m.to_vec());
    }

    #[test]
    fn masses_missing_column() {
        assert!(parse_masses_csv("node_id,degree\n0,1\n").is_err());
    }
}

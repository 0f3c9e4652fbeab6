//! Log-binned conditional means, degree CCDFs and log-log power-law fits.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub const DEFAULT_BASE: f64 = 2.0;
pub const DEFAULT_K_MIN: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    /// Separator `d(i) = base^i`; the bin covers `[lower, upper)`.
    pub lower: f64,
    pub upper: f64,
    /// Geometric mean of the separators.
    pub abscissa: f64,
    pub mean: f64,
    pub count: usize,
}

/// Conditional means over logarithmically spaced bins. Empty bins are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedCurve {
    pub base: f64,
    pub bins: Vec<Bin>,
}

impl BinnedCurve {
    /// Curve with one bin per `(abscissa, mean)` point and unit counts.
    /// Separators are reconstructed as `abscissa / sqrt(base)` and
    /// `abscissa * sqrt(base)`.
    pub fn from_points(base: f64, points: &[(f64, f64)]) -> Self {
        let h = base.sqrt();
        BinnedCurve {
            base,
            bins: points
                .iter()
                .map(|&(x, y)| Bin {
                    lower: x / h,
                    upper: x * h,
                    abscissa: x,
                    mean: y,
                    count: 1,
                })
                .collect(),
        }
    }

    pub fn total_count(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Natural-log intercept: `ln y ≈ intercept + exponent · ln k`.
    pub intercept: f64,
    pub k_min: f64,
    pub r_squared: f64,
    pub bin_count: usize,
}

/// Index `i` with `base^i <= key < base^(i+1)`, corrected for rounding in
/// the logarithm at exact powers.
fn bin_index(key: f64, base: f64) -> i32 {
    let mut i = (key.ln() / base.ln()).floor() as i32;
    while base.powi(i + 1) <= key {
        i += 1;
    }
    while base.powi(i) > key {
        i -= 1;
    }
    i
}

pub fn binned_conditional_mean(keys: &[f64], values: &[f64], base: f64) -> Result<BinnedCurve> {
    if keys.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: keys.len(),
            actual: values.len(),
        });
    }
    if keys.is_empty() {
        return Err(Error::InsufficientData("no samples to bin".into()));
    }
    if !(base > 1.0) {
        return Err(Error::InvalidParameter(format!("bin base must exceed 1, got {base}")));
    }
    if let Some(k) = keys.iter().find(|&&k| !(k >= 1.0)) {
        return Err(Error::InvalidParameter(format!("bin keys must be >= 1, got {k}")));
    }
    let mut acc: BTreeMap<i32, (f64, usize)> = BTreeMap::new();
    for (&k, &v) in keys.iter().zip(values) {
        let e = acc.entry(bin_index(k, base)).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    let bins = acc
        .into_iter()
        .map(|(i, (sum, count))| {
            let lower = base.powi(i);
            let upper = base.powi(i + 1);
            Bin {
                lower,
                upper,
                abscissa: (lower * upper).sqrt(),
                mean: sum / count as f64,
                count,
            }
        })
        .collect();
    Ok(BinnedCurve { base, bins })
}

/// Convenience for integer degree keys; nodes of degree 0 are skipped.
pub fn binned_by_degree(degrees: &[usize], values: &[f64], base: f64) -> Result<BinnedCurve> {
    if degrees.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: degrees.len(),
            actual: values.len(),
        });
    }
    let (keys, vals): (Vec<f64>, Vec<f64>) = degrees
        .iter()
        .zip(values)
        .filter(|(&k, _)| k > 0)
        .map(|(&k, &v)| (k as f64, v))
        .unzip();
    binned_conditional_mean(&keys, &vals, base)
}

/// `P(K >= k)` at every occupied degree.
pub fn ccdf(degrees: &[usize]) -> BTreeMap<usize, f64> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in degrees {
        *counts.entry(k).or_default() += 1;
    }
    let n = degrees.len() as f64;
    let mut remaining = degrees.len();
    let mut out = BTreeMap::new();
    for (k, c) in counts {
        out.insert(k, remaining as f64 / n);
        remaining -= c;
    }
    out
}

/// Ordinary least squares `y = a + b x`; returns `(b, a, r²)`.
pub fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Log-log least squares over bins with `abscissa >= k_min` and positive mean.
pub fn fit_powerlaw(curve: &BinnedCurve, k_min: f64) -> Result<PowerLawFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = curve
        .bins
        .iter()
        .filter(|b| b.abscissa >= k_min && b.mean > 0.0)
        .map(|b| (b.abscissa.ln(), b.mean.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} bins with abscissa >= {k_min}, need at least 3",
            xs.len()
        )));
    }
    let (exponent, intercept, r_squared) = ols(&xs, &ys);
    Ok(PowerLawFit {
        exponent,
        intercept,
        k_min,
        r_squared,
        bin_count: xs.len(),
    })
}

/// Log-log slope of the CCDF over `[k_max / 10^decades, k_max]`.
pub fn ccdf_tail_slope(degrees: &[usize], decades: f64) -> Result<f64> {
    let c = ccdf(degrees);
    let k_max = *c.keys().next_back().ok_or_else(|| {
        Error::InsufficientData("empty degree list".into())
    })? as f64;
    let k_lo = k_max / 10f64.powf(decades);
    let (xs, ys): (Vec<f64>, Vec<f64>) = c
        .iter()
        .filter(|(&k, _)| k > 0 && k as f64 >= k_lo)
        .map(|(&k, &p)| ((k as f64).ln(), p.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientData("fewer than 3 tail points".into()));
    }
    Ok(ols(&xs, &ys).0)
}

/// Pearson correlation of `ln y` between two curves over the bins they share
/// (matched by separator) with `abscissa >= k_min`.
pub fn loglog_correlation(a: &BinnedCurve, b: &BinnedCurve, k_min: f64) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for ba in a.bins.iter().filter(|x| x.abscissa >= k_min && x.mean > 0.0) {
        if let Some(bb) = b
            .bins
            .iter()
            .find(|x| (x.lower - ba.lower).abs() <= 1e-9 * ba.lower && x.mean > 0.0)
        {
            xs.push(ba.mean.ln());
            ys.push(bb.mean.ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} shared bins with abscissa >= {k_min}",
            xs.len()
        )));
    }
    Ok(pearson(&xs, &ys))
}

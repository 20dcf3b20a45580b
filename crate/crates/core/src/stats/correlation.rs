use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub coefficient: f64,
    /// Two-sided; `None` when n < 3.
    pub p_value: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValueMethod {
    /// t = r·√((n−2)/(1−r²)) against Student's t with n−2 degrees of freedom.
    #[default]
    TApprox,
    /// Exact enumeration of all n! pairings; only for n ≤ 10.
    Permutation,
}

pub const MAX_PERMUTATION_N: usize = 10;

fn check_inputs(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("correlation inputs must be finite".into()));
    }
    Ok(())
}

/// Sample Pearson coefficient, or `None` if either side is constant.
fn pearson_coefficient(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn t_p_value(r: f64, n: usize) -> Option<f64> {
    if n < 3 {
        return None;
    }
    if 1.0 - r.abs() <= 1e-12 {
        return Some(0.0);
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    Some((2.0 * dist.sf(t.abs())).clamp(0.0, 1.0))
}

/// Fraction of the n! pairings of `y` whose |r| reaches the observed |r|.
fn permutation_p_value(x: &[f64], y: &[f64], observed: f64) -> Result<f64> {
    let n = y.len();
    if n > MAX_PERMUTATION_N {
        return Err(Error::InvalidConfig(format!(
            "permutation p-values need n <= {MAX_PERMUTATION_N}, got {n}"
        )));
    }
    let target = observed.abs() - 1e-12;
    let mut perm = y.to_vec();
    let mut hits = 0u64;
    let mut total = 0u64;
    let mut visit = |p: &[f64]| {
        total += 1;
        if pearson_coefficient(x, p).is_some_and(|r| r.abs() >= target) {
            hits += 1;
        }
    };
    // Heap's algorithm.
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(hits as f64 / total as f64)
}

fn correlate(x: &[f64], y: &[f64], method: PValueMethod) -> Result<CorrelationResult> {
    let r = pearson_coefficient(x, y).ok_or(Error::ConstantInput)?;
    let n = x.len();
    let p_value = match method {
        PValueMethod::TApprox => t_p_value(r, n),
        PValueMethod::Permutation if n >= 3 => Some(permutation_p_value(x, y, r)?),
        PValueMethod::Permutation => None,
    };
    Ok(CorrelationResult {
        coefficient: r,
        p_value,
        n,
    })
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    pearson_with(x, y, PValueMethod::TApprox)
}

pub fn pearson_with(x: &[f64], y: &[f64], method: PValueMethod) -> Result<CorrelationResult> {
    check_inputs(x, y)?;
    correlate(x, y, method)
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    spearman_with(x, y, PValueMethod::TApprox)
}

pub fn spearman_with(x: &[f64], y: &[f64], method: PValueMethod) -> Result<CorrelationResult> {
    check_inputs(x, y)?;
    correlate(&average_ranks(x), &average_ranks(y), method)
}

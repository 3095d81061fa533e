//! Summary statistics and empirical-CDF quantiles for experiment output.

use crate::error::{Result, SimError};

/// Mean with a normal-approximation 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStat {
    pub mean: f64,
    pub ci95_half: f64,
    pub count: usize,
}

/// Sequential accumulation keeps the result independent of how trials were
/// scheduled across workers.
pub fn summarize(samples: &[f64]) -> Result<SummaryStat> {
    if samples.is_empty() {
        return Err(SimError::EmptySamples);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(SummaryStat {
        mean,
        ci95_half: 1.96 * (var / n).sqrt(),
        count: samples.len(),
    })
}

/// q-th quantile as the ceil(q*n)-th order statistic of a sorted slice.
pub fn order_stat_quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    let idx = ((q * n as f64).ceil() as usize).clamp(1, n);
    sorted[idx - 1]
}

/// The quantile grid emitted by CDF experiments: 0.01, 0.02, ..., 0.99.
pub fn cdf_quantile_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

/// Quantiles of an unsorted sample set on the standard grid.
pub fn empirical_cdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(SimError::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(cdf_quantile_grid()
        .into_iter()
        .map(|q| (q, order_stat_quantile(&sorted, q)))
        .collect())
}

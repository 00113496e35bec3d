//! Order statistics of pooled per-UE samples.

use alloc::vec::Vec;

use crate::Error;

/// Sorted copy of the samples, NaN last.
pub fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Quantile at probability `p` of already sorted data: rank `p·(n−1)` with
/// linear interpolation between neighbouring order statistics.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let lower = rank as usize;
    let upper = (lower + 1).min(n - 1);
    let frac = rank - lower as f64;
    sorted[lower] + frac * (sorted[upper] - sorted[lower])
}

pub fn percentile(samples: &[f64], p: f64) -> Result<f64, Error> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    Ok(quantile_sorted(&sorted(samples), p))
}

/// The value exceeded by 95% of the samples (the 5th percentile).
pub fn likely_95(samples: &[f64]) -> Result<f64, Error> {
    percentile(samples, 0.05)
}

/// Quantiles at `points` evenly spaced probabilities `0, 1/(points−1), …, 1`;
/// together with those probabilities this traces the empirical CDF.
pub fn quantile_grid(samples: &[f64], points: usize) -> Result<Vec<f64>, Error> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    let s = sorted(samples);
    let steps = points.max(2) - 1;
    Ok((0..=steps).map(|i| quantile_sorted(&s, i as f64 / steps as f64)).collect())
}

pub fn mean(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    samples.iter().sum::<f64>() / samples.len() as f64
}

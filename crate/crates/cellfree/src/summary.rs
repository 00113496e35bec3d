//! Pooled per-method statistics: empirical CDFs and 95%-likely values.

use std::collections::BTreeMap;

use cellfree_core::stats::{likely_95, mean, percentile, quantile_grid};
use serde::{Deserialize, Serialize};

use crate::campaign::DropRecord;
use crate::error::HarnessError;

/// Probability points of the stored CDF grids: 0, 0.01, …, 1.
pub const CDF_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateSummary {
    pub num_drops: u64,
    pub num_ues: usize,
    pub methods: Vec<MethodSummary>,
}

impl AggregateSummary {
    pub fn method(&self, label: &str) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    /// Pooled per-UE samples (drops × UEs).
    pub samples: usize,
    /// 5th percentile of pooled SE, bit/s/Hz.
    pub likely_95_se: f64,
    /// 5th percentile of pooled per-UE EE, bit/J.
    pub likely_95_ee: f64,
    pub median_se: f64,
    pub median_ee: f64,
    /// Mean network EE over drops, bit/J; absent when summarizing a records
    /// file without the campaign configuration.
    pub mean_total_ee: Option<f64>,
    /// Fraction of records flagged as outage.
    pub outage_rate: f64,
    /// 5th percentiles of the per-drop minimum over UEs.
    pub per_drop_min: PerDropMin,
    pub cdf: CdfGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerDropMin {
    pub likely_95_se: f64,
    pub likely_95_ee: f64,
}

/// Quantiles of pooled SE and EE at `probability`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfGrid {
    pub probability: Vec<f64>,
    pub se: Vec<f64>,
    pub ee: Vec<f64>,
}

/// Aggregates records per method label, in `labels` order.
pub fn aggregate(records: &[DropRecord], labels: &[String], num_ues: usize) -> Result<AggregateSummary, HarnessError> {
    let mut drops = std::collections::BTreeSet::new();
    let mut methods = Vec::with_capacity(labels.len());
    for label in labels {
        let mine: Vec<&DropRecord> = records.iter().filter(|r| &r.method == label).collect();
        drops.extend(mine.iter().map(|r| r.drop));
        methods.push(summarize_method(label, &mine)?);
    }
    Ok(AggregateSummary {
        num_drops: drops.len() as u64,
        num_ues,
        methods,
    })
}

fn summarize_method(label: &str, records: &[&DropRecord]) -> Result<MethodSummary, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::Stats {
            method: label.to_string(),
            source: cellfree_core::Error::TooFewSamples(0),
        });
    }
    let se: Vec<f64> = records.iter().map(|r| r.se).collect();
    let ee: Vec<f64> = records.iter().map(|r| r.ee).collect();

    // Per-drop minima and network EE, in drop order.
    let mut by_drop: BTreeMap<u64, (f64, f64, Option<f64>)> = BTreeMap::new();
    for r in records {
        let entry = by_drop.entry(r.drop).or_insert((f64::INFINITY, f64::INFINITY, r.total_ee));
        entry.0 = entry.0.min(r.se);
        entry.1 = entry.1.min(r.ee);
    }
    let min_se: Vec<f64> = by_drop.values().map(|v| v.0).collect();
    let min_ee: Vec<f64> = by_drop.values().map(|v| v.1).collect();
    let totals: Option<Vec<f64>> = by_drop.values().map(|v| v.2).collect();

    let probability: Vec<f64> = (0..CDF_POINTS).map(|i| i as f64 / (CDF_POINTS - 1) as f64).collect();
    Ok(MethodSummary {
        method: label.to_string(),
        samples: records.len(),
        likely_95_se: low_tail(&se),
        likely_95_ee: low_tail(&ee),
        median_se: quantile(&se, 0.5),
        median_ee: quantile(&ee, 0.5),
        mean_total_ee: totals.map(|t| mean(&t)),
        outage_rate: records.iter().filter(|r| r.outage).count() as f64 / records.len() as f64,
        per_drop_min: PerDropMin {
            likely_95_se: low_tail(&min_se),
            likely_95_ee: low_tail(&min_ee),
        },
        cdf: CdfGrid {
            probability,
            se: grid(&se),
            ee: grid(&ee),
        },
    })
}

// A single sample is its own quantile; the library functions want at least two.
fn low_tail(samples: &[f64]) -> f64 {
    likely_95(samples).unwrap_or(samples[0])
}

fn quantile(samples: &[f64], p: f64) -> f64 {
    percentile(samples, p).unwrap_or(samples[0])
}

fn grid(samples: &[f64]) -> Vec<f64> {
    quantile_grid(samples, CDF_POINTS).unwrap_or_else(|_| vec![samples[0]; CDF_POINTS])
}

/// Method labels in order of first appearance.
pub fn labels_in_order(records: &[DropRecord]) -> Vec<String> {
    let mut labels: Vec<String> = Vec::new();
    for r in records {
        if !labels.contains(&r.method) {
            labels.push(r.method.clone());
        }
    }
    labels
}

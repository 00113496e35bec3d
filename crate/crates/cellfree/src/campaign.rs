//! Deterministic parallel Monte Carlo over drops.

use std::time::{Duration, Instant};

use cellfree_core::pipeline::{simulate_drop, MethodSpec, Scenario};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{method_label, CampaignConfig};
use crate::error::HarnessError;
use crate::summary::{aggregate, AggregateSummary};

/// One UE's outcome under one method in one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct DropRecord {
    pub drop: u64,
    /// Method label, e.g. `MaxMinEE` or `MaxMinEE[nu=0.7]`.
    pub method: String,
    pub ue: usize,
    pub q: f64,
    /// bit/s/Hz.
    pub se: f64,
    /// bit/J.
    pub ee: f64,
    pub outage: bool,
    /// υ or ν chosen by the outer search, or the fixed ν.
    pub outer_var: Option<f64>,
    /// Network EE of the drop under this method, bit/J. Not persisted in the
    /// records CSV, so `None` for records read back from disk.
    pub total_ee: Option<f64>,
}

/// Resolved campaign inputs shared by all workers.
#[derive(Debug, Clone)]
pub struct Plan {
    pub scenario: Scenario,
    pub methods: Vec<MethodSpec>,
    pub labels: Vec<String>,
    pub master_seed: u64,
    pub num_drops: u64,
}

impl Plan {
    pub fn new(config: &CampaignConfig) -> Result<Self, HarnessError> {
        let methods = config.method_specs();
        Ok(Plan {
            scenario: config.scenario()?,
            labels: methods.iter().map(method_label).collect(),
            methods,
            master_seed: config.master_seed,
            num_drops: config.num_drops,
        })
    }
}

/// Records of one drop, method-major then UE order.
pub fn run_drop(plan: &Plan, drop_index: u64) -> Result<Vec<DropRecord>, HarnessError> {
    let outcome = simulate_drop(&plan.scenario, &plan.methods, plan.master_seed, drop_index).map_err(|source| {
        HarnessError::Drop {
            drop: drop_index,
            source,
        }
    })?;
    let mut records = Vec::with_capacity(outcome.results.len() * plan.scenario.geometry.num_ues);
    for ((result, label), spec) in outcome.results.iter().zip(&plan.labels).zip(&plan.methods) {
        let outer_var = match spec {
            MethodSpec::FixedNu(nu) => Some(*nu),
            MethodSpec::Optimize(_) => result.diagnostics.outer_variable,
        };
        for (ue, &q) in result.q.as_slice().iter().enumerate() {
            records.push(DropRecord {
                drop: drop_index,
                method: label.clone(),
                ue,
                q,
                se: result.se[ue],
                ee: result.ee_per_ue[ue],
                outage: result.outage,
                outer_var,
                total_ee: Some(result.ee_total),
            });
        }
    }
    Ok(records)
}

/// Wall-clock statistics, kept apart from the (bit-stable) summary.
#[derive(Debug, Clone, Serialize)]
pub struct RuntimeStats {
    pub threads: usize,
    pub num_drops: u64,
    pub wall_seconds: f64,
    pub mean_drop_seconds: f64,
    pub max_drop_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct CampaignOutput {
    /// Ordered by drop index, then method, then UE.
    pub records: Vec<DropRecord>,
    pub summary: AggregateSummary,
    pub runtime: RuntimeStats,
}

/// Evaluates every drop on `threads` workers. Output does not depend on the
/// worker count or scheduling.
pub fn run_campaign(config: &CampaignConfig, threads: usize) -> Result<CampaignOutput, HarnessError> {
    let plan = Plan::new(config)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?;
    let start = Instant::now();
    let per_drop: Vec<Result<(Vec<DropRecord>, Duration), HarnessError>> = pool.install(|| {
        (0..plan.num_drops)
            .into_par_iter()
            .map(|d| {
                let t = Instant::now();
                run_drop(&plan, d).map(|r| (r, t.elapsed()))
            })
            .collect()
    });
    let wall = start.elapsed();
    let mut records = Vec::new();
    let mut times = Vec::with_capacity(per_drop.len());
    for result in per_drop {
        let (r, t) = result?;
        records.extend(r);
        times.push(t.as_secs_f64());
    }
    let summary = aggregate(&records, &plan.labels, config.num_ues)?;
    let runtime = RuntimeStats {
        threads: threads.max(1),
        num_drops: plan.num_drops,
        wall_seconds: wall.as_secs_f64(),
        mean_drop_seconds: times.iter().sum::<f64>() / times.len().max(1) as f64,
        max_drop_seconds: times.iter().copied().fold(0.0, f64::max),
    };
    Ok(CampaignOutput {
        records,
        summary,
        runtime,
    })
}

//! The four transmit power control policies.
//!
//! * **MaxPower**: every user transmits at full power.
//! * **MaxMinSE**: maximize the smallest spectral efficiency.
//! * **MaxTotalEE**: maximize network energy efficiency under an SE floor.
//!   `Σq_k` in the denominator is replaced by `υ·K`; for fixed `υ` the
//!   product-of-SINR program is solved and `υ ∈ [υ*, 1]` is hill-climbed.
//! * **MaxMinEE**: maximize the smallest per-user energy efficiency under an
//!   SE floor. Each `q_k` in the denominators is replaced by the common cap
//!   `ν`; for fixed `ν` the problem is max-min SE with `q ≤ ν`, and
//!   `ν ∈ [ν*, 1]` is hill-climbed.
//!
//! `υ*` and `ν*` both come from the componentwise-minimal power vector that
//! meets the floor. When the floor is out of reach even at full power the
//! result falls back to the MaxMinSE allocation and is flagged as outage.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::optim::{
    gp_max_product_sinr, hill_climb, maxmin_sinr_bisection, weighted_maxmin_bisection, yates_min_power,
    SinrTargets, SolveDiagnostics, MIN_STEP,
};
use crate::power::{per_ue_ee_all, total_ee, weighted_throughput, PowerModelParams};
use crate::zf::{spectral_efficiency, PowerAllocation, SinrCoefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TpcMethod {
    MaxPower,
    MaxMinSe,
    MaxTotalEe,
    MaxMinEe,
}

impl TpcMethod {
    pub const ALL: [TpcMethod; 4] = [
        TpcMethod::MaxPower,
        TpcMethod::MaxMinSe,
        TpcMethod::MaxTotalEe,
        TpcMethod::MaxMinEe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TpcMethod::MaxPower => "MaxPower",
            TpcMethod::MaxMinSe => "MaxMinSE",
            TpcMethod::MaxTotalEe => "MaxTotalEE",
            TpcMethod::MaxMinEe => "MaxMinEE",
        }
    }
}

impl fmt::Display for TpcMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown power control method (expected MaxPower, MaxMinSE, MaxTotalEE or MaxMinEE)")]
pub struct UnknownMethod;

impl FromStr for TpcMethod {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TpcMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or(UnknownMethod)
    }
}

/// Inputs shared by every method for one drop.
#[derive(Debug, Clone, Copy)]
pub struct TpcContext<'a> {
    pub coeffs: &'a SinrCoefficients,
    pub power: &'a PowerModelParams,
    pub num_aps: usize,
    pub num_antennas: usize,
    /// Common SE floor `S^(r)`, bit/s/Hz.
    pub se_floor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TpcResult {
    pub method: TpcMethod,
    pub q: PowerAllocation,
    /// Per-user SE, bit/s/Hz.
    pub se: Vec<f64>,
    /// Per-user EE, bit/J.
    pub ee_per_ue: Vec<f64>,
    /// Network EE, bit/J.
    pub ee_total: f64,
    /// The SE floor was unreachable and the MaxMinSE fallback was used.
    pub outage: bool,
    pub diagnostics: SolveDiagnostics,
}

impl TpcResult {
    pub fn min_se(&self) -> f64 {
        self.se.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_ee(&self) -> f64 {
        self.ee_per_ue.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl<'a> TpcContext<'a> {
    pub fn num_ues(&self) -> usize {
        self.coeffs.num_ues()
    }

    fn floor(&self) -> SinrTargets {
        SinrTargets::from_se_floor(self.se_floor, self.num_ues())
    }

    fn weights(&self) -> Option<&[f64]> {
        (!self.power.weights.is_empty()).then_some(self.power.weights.as_slice())
    }

    /// Builds a result with all metrics recomputed from `q`.
    pub fn evaluate(&self, method: TpcMethod, q: Vec<f64>, outage: bool, mut diagnostics: SolveDiagnostics) -> TpcResult {
        let q = PowerAllocation::clamped(q);
        let se = spectral_efficiency(self.coeffs, q.as_slice());
        let ee_per_ue = per_ue_ee_all(&se, q.as_slice(), self.power);
        let ee_total = total_ee(&se, q.as_slice(), self.power, self.num_aps, self.num_antennas);
        diagnostics.sum_rate = se.iter().sum();
        TpcResult {
            method,
            q,
            se,
            ee_per_ue,
            ee_total,
            outage,
            diagnostics,
        }
    }

    /// Min over users of `B·w_k·S_k / (P̄·ν + P_U)`.
    fn capped_min_ee(&self, se: &[f64], nu: f64) -> f64 {
        let denom = self.power.max_power * nu + self.power.ue_circuit_power;
        se.iter()
            .enumerate()
            .map(|(k, s)| self.power.bandwidth * self.power.weight(k) * s / denom)
            .fold(f64::INFINITY, f64::min)
    }

    fn fallback(&self, method: TpcMethod) -> TpcResult {
        let mut result = max_min_se(self);
        result.method = method;
        result.outage = true;
        result.diagnostics.feasible = false;
        result.diagnostics.outer_variable = None;
        result
    }
}

pub fn max_power(ctx: &TpcContext<'_>) -> TpcResult {
    let q = vec![1.0; ctx.num_ues()];
    let diagnostics = SolveDiagnostics {
        converged: true,
        feasible: true,
        ..SolveDiagnostics::default()
    };
    let mut result = ctx.evaluate(TpcMethod::MaxPower, q, false, diagnostics);
    result.diagnostics.objective = result.ee_total;
    result
}

pub fn max_min_se(ctx: &TpcContext<'_>) -> TpcResult {
    let k = ctx.num_ues();
    let sol = weighted_maxmin_bisection(ctx.coeffs, &vec![1.0; k], &SinrTargets::zero(k), ctx.weights())
        .expect("a zero SINR floor is always feasible");
    let diagnostics = SolveDiagnostics {
        iterations: sol.iterations,
        converged: true,
        objective: sol.level,
        feasible: true,
        ..SolveDiagnostics::default()
    };
    ctx.evaluate(TpcMethod::MaxMinSe, sol.q, false, diagnostics)
}

pub fn max_total_ee(ctx: &TpcContext<'_>) -> TpcResult {
    let k = ctx.num_ues();
    let floor = ctx.floor();
    let Ok(minimal) = yates_min_power(ctx.coeffs, &floor, &vec![1.0; k]) else {
        return ctx.fallback(TpcMethod::MaxTotalEe);
    };
    let upsilon_star = (minimal.q.iter().sum::<f64>() / k as f64).min(1.0);
    let static_power = ctx.power.static_power(k, ctx.num_aps, ctx.num_antennas);

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut inner_converged = true;
    let climb = hill_climb(
        |upsilon| match gp_max_product_sinr(ctx.coeffs, &floor, upsilon * k as f64, 1.0) {
            Ok(sol) => {
                inner_converged &= sol.converged;
                let se = spectral_efficiency(ctx.coeffs, &sol.q);
                let value = weighted_throughput(&se, ctx.power)
                    / (ctx.power.max_power * upsilon * k as f64 + static_power);
                if best.as_ref().is_none_or(|(v, _)| value > *v) {
                    best = Some((value, sol.q));
                }
                value
            }
            Err(_) => f64::NEG_INFINITY,
        },
        upsilon_star,
        1.0,
        upsilon_star,
    );

    let q = best.map_or(minimal.q, |(_, q)| q);
    let diagnostics = SolveDiagnostics {
        iterations: climb.evaluations,
        converged: inner_converged && climb.final_step.abs() < MIN_STEP,
        objective: climb.max,
        feasible: true,
        outer_variable: Some(climb.argmax),
        sum_rate: 0.0,
    };
    ctx.evaluate(TpcMethod::MaxTotalEe, q, false, diagnostics)
}

pub fn max_min_ee(ctx: &TpcContext<'_>) -> TpcResult {
    let k = ctx.num_ues();
    let floor = ctx.floor();
    let Ok(minimal) = yates_min_power(ctx.coeffs, &floor, &vec![1.0; k]) else {
        return ctx.fallback(TpcMethod::MaxMinEe);
    };
    let nu_star = minimal.q.iter().copied().fold(0.0, f64::max).min(1.0);

    let mut best: Option<(f64, Vec<f64>)> = None;
    let climb = hill_climb(
        |nu| match weighted_maxmin_bisection(ctx.coeffs, &vec![nu; k], &floor, ctx.weights()) {
            Ok(sol) => {
                let se = spectral_efficiency(ctx.coeffs, &sol.q);
                let value = ctx.capped_min_ee(&se, nu);
                if best.as_ref().is_none_or(|(v, _)| value > *v) {
                    best = Some((value, sol.q));
                }
                value
            }
            Err(_) => f64::NEG_INFINITY,
        },
        nu_star,
        1.0,
        nu_star,
    );

    let q = best.map_or(minimal.q, |(_, q)| q);
    let diagnostics = SolveDiagnostics {
        iterations: climb.evaluations,
        converged: climb.final_step.abs() < MIN_STEP,
        objective: climb.max,
        feasible: true,
        outer_variable: Some(climb.argmax),
        sum_rate: 0.0,
    };
    ctx.evaluate(TpcMethod::MaxMinEe, q, false, diagnostics)
}

/// Inner max-min EE problem at a fixed cap `ν` (no outer search). If the
/// floor cannot be met under the cap, the floor is dropped and the result is
/// flagged as outage.
pub fn max_min_ee_fixed_nu(ctx: &TpcContext<'_>, nu: f64) -> TpcResult {
    let k = ctx.num_ues();
    let caps = vec![nu; k];
    let (sol, outage) = match weighted_maxmin_bisection(ctx.coeffs, &caps, &ctx.floor(), ctx.weights()) {
        Ok(sol) => (sol, false),
        Err(_) => (
            weighted_maxmin_bisection(ctx.coeffs, &caps, &SinrTargets::zero(k), ctx.weights())
                .expect("a zero SINR floor is always feasible"),
            true,
        ),
    };
    let se = spectral_efficiency(ctx.coeffs, &sol.q);
    let diagnostics = SolveDiagnostics {
        iterations: sol.iterations,
        converged: true,
        objective: ctx.capped_min_ee(&se, nu),
        feasible: !outage,
        outer_variable: Some(nu),
        sum_rate: 0.0,
    };
    ctx.evaluate(TpcMethod::MaxMinEe, sol.q, outage, diagnostics)
}

pub fn run_method(ctx: &TpcContext<'_>, method: TpcMethod) -> TpcResult {
    match method {
        TpcMethod::MaxPower => max_power(ctx),
        TpcMethod::MaxMinSe => max_min_se(ctx),
        TpcMethod::MaxTotalEe => max_total_ee(ctx),
        TpcMethod::MaxMinEe => max_min_ee(ctx),
    }
}

/// Max-min SINR at unit weights with an explicit floor; used by the fixed-cap
/// equivalence checks.
pub fn max_min_se_with_floor(ctx: &TpcContext<'_>) -> Option<TpcResult> {
    let k = ctx.num_ues();
    let sol = maxmin_sinr_bisection(ctx.coeffs, &vec![1.0; k], &ctx.floor()).ok()?;
    let diagnostics = SolveDiagnostics {
        iterations: sol.iterations,
        converged: true,
        objective: sol.level,
        feasible: true,
        ..SolveDiagnostics::default()
    };
    Some(ctx.evaluate(TpcMethod::MaxMinSe, sol.q, false, diagnostics))
}

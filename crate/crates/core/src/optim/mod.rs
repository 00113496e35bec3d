//! Optimization engines for uplink power control.
//!
//! * [`yates_min_power`]: componentwise-minimal powers meeting SINR targets.
//! * [`maxmin_sinr_bisection`]: max-min SINR under per-user power caps.
//! * [`gp_max_product_sinr`]: maximize `Σ ln SINR_k` (the product of SINRs)
//!   under floors, a sum-power cap and per-user caps, as a convex program in
//!   log variables.
//! * [`hill_climb`]: the 1-D search used for the auxiliary power variables.
//! * [`grid_oracle`]: exhaustive lattice search for verification.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use thiserror::Error;

mod bisection;
mod gp;
mod hill_climb;
mod oracle;
mod yates;

pub use bisection::{maxmin_sinr_bisection, weighted_maxmin_bisection, MaxMinSolution, BISECTION_REL_TOL};
pub use gp::{gp_max_product_sinr, GpSolution};
pub use hill_climb::{hill_climb, HillClimbResult, INITIAL_STEP, MIN_STEP};
pub use oracle::{grid_oracle, OracleResult};
pub use yates::{yates_min_power, YatesSolution, YATES_MAX_ITER};

/// The SINR floors cannot be met within the power caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("SINR targets are infeasible under the power caps")]
pub struct Infeasible;

/// Per-user SINR floors.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrTargets {
    pub gamma: Vec<f64>,
}

impl SinrTargets {
    pub fn uniform(gamma: f64, num_ues: usize) -> Self {
        SinrTargets {
            gamma: alloc::vec![gamma; num_ues],
        }
    }

    /// SINR floor `2^S − 1` from a common SE floor `S` in bit/s/Hz.
    pub fn from_se_floor(se_floor: f64, num_ues: usize) -> Self {
        Self::uniform(se_to_sinr(se_floor), num_ues)
    }

    pub fn zero(num_ues: usize) -> Self {
        Self::uniform(0.0, num_ues)
    }

    pub fn max(&self) -> f64 {
        self.gamma.iter().copied().fold(0.0, f64::max)
    }
}

pub fn se_to_sinr(se: f64) -> f64 {
    2f64.powf(se) - 1.0
}

/// Solver bookkeeping attached to every power-control result.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub converged: bool,
    /// Value of the method's own objective at the returned point.
    pub objective: f64,
    pub feasible: bool,
    /// Chosen `υ` or `ν` for the EE methods.
    pub outer_variable: Option<f64>,
    /// Exact `Σ_k log2(1 + SINR_k)` at the returned point.
    pub sum_rate: f64,
}

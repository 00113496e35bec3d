//! Cell-free massive MIMO uplink simulation and power control.
//!
//! This crate holds the pure numerical pipeline for one Monte Carlo drop:
//!
//! * [`geometry`] and [`fading`] place access points and users and synthesize
//!   correlated Rician channels with split AP/UE shadowing,
//! * [`estimation`] simulates orthogonal pilots and forms per-antenna MMSE
//!   estimates,
//! * [`zf`] builds zero-forcing combiners and the SINR coefficients every
//!   power-control solver consumes,
//! * [`power`] evaluates power consumption and energy efficiency,
//! * [`optim`] carries the solvers (minimal-power fixed point, max-min SINR
//!   bisection, log-domain geometric program, hill climbing, grid oracle),
//! * [`tpc`] assembles the four transmit power control policies,
//! * [`pipeline`] runs one drop end to end from a seed.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! and parallel campaigns live in the `cellfree` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod estimation;
pub mod fading;
pub mod geometry;
pub mod optim;
pub mod pipeline;
pub mod power;
pub mod rng;
pub mod stats;
pub mod tpc;
pub mod zf;

pub use nalgebra::Complex;

/// Dense complex matrix used for channels, pilots and combiners.
pub type CMatrix = nalgebra::DMatrix<Complex<f64>>;
/// Dense real matrix used for per-link gains and SINR coupling.
pub type RMatrix = nalgebra::DMatrix<f64>;

pub use error::Error;
pub use estimation::{ChannelSet, EstimationStats, PilotConfig};
pub use fading::{LargeScaleModel, LargeScaleParams};
pub use geometry::{NetworkDrop, Point, SimGeometry};
pub use optim::{Infeasible, SinrTargets, SolveDiagnostics};
pub use pipeline::{CsiModel, DropOutcome, MethodSpec, Scenario};
pub use power::PowerModelParams;
pub use tpc::{TpcContext, TpcMethod, TpcResult};
pub use zf::{PowerAllocation, SinrCoefficients};

/// `r·e^{jθ}`.
pub(crate) fn polar(r: f64, theta: f64) -> Complex<f64> {
    #[allow(unused_imports)]
    use num_traits::Float;
    let (s, c) = theta.sin_cos();
    Complex::new(r * c, r * s)
}

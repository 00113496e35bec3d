//! One Monte Carlo drop end to end: geometry, channels, pilots, ZF, TPC.

use alloc::vec::Vec;

use crate::estimation::{estimation_stats, mmse_estimate, ChannelSet, PilotConfig};
use crate::fading::{build_large_scale, realize_channel, LargeScaleModel, LargeScaleParams};
use crate::geometry::{drop_network, NetworkDrop, SimGeometry};
use crate::power::PowerModelParams;
use crate::rng::{stage_rng, Stage};
use crate::tpc::{max_min_ee_fixed_nu, run_method, TpcContext, TpcMethod, TpcResult};
use crate::zf::{sinr_coefficients, sinr_coefficients_statistical, zf_weights, SinrCoefficients};
use crate::Error;

/// Attempts per drop before a rank-deficient estimate becomes a hard error.
pub const MAX_DROP_ATTEMPTS: u32 = 10;

/// Which estimation-error cross terms the solvers see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CsiModel {
    /// Realized `|w_kᴴ h̃_k'|²` of the drop.
    #[default]
    Realized,
    /// Expected values from the closed-form error variances.
    Statistical,
}

/// A power control run: one of the four methods, or the max-min EE inner
/// problem at a fixed cap `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodSpec {
    Optimize(TpcMethod),
    FixedNu(f64),
}

impl MethodSpec {
    pub fn method(&self) -> TpcMethod {
        match self {
            MethodSpec::Optimize(m) => *m,
            MethodSpec::FixedNu(_) => TpcMethod::MaxMinEe,
        }
    }
}

/// Fully resolved physical parameters of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: SimGeometry,
    pub large_scale: LargeScaleParams,
    pub pilot_length: usize,
    pub pilot_snr: f64,
    /// Data transmit SNR `ρ`.
    pub rho: f64,
    pub power: PowerModelParams,
    /// SE floor `S^(r)`, bit/s/Hz.
    pub se_floor: f64,
    pub csi: CsiModel,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), Error> {
        self.geometry.validate()?;
        if self.geometry.total_antennas() < self.geometry.num_ues {
            return Err(Error::InvalidGeometry("zero forcing needs at least as many antennas as UEs"));
        }
        if self.pilot_length < self.geometry.num_ues {
            return Err(Error::PilotsTooShort {
                users: self.geometry.num_ues,
                pilots: self.pilot_length,
            });
        }
        if !(self.rho > 0.0) || !(self.pilot_snr >= 0.0) {
            return Err(Error::InvalidParameter("SNRs must be positive"));
        }
        if !(self.se_floor >= 0.0) {
            return Err(Error::InvalidParameter("SE floor must be non-negative"));
        }
        if !(self.large_scale.shadowing_std_db >= 0.0) || !(self.large_scale.reference_distance > 0.0) {
            return Err(Error::InvalidParameter("need σ_w ≥ 0 and d0 > 0"));
        }
        self.power.validate(self.geometry.num_ues)
    }

    pub fn pilots(&self) -> Result<PilotConfig, Error> {
        PilotConfig::orthogonal(self.geometry.num_ues, self.pilot_length, self.pilot_snr)
    }
}

/// Everything synthesized for one drop before power control.
#[derive(Debug, Clone)]
pub struct DropRealization {
    pub network: NetworkDrop,
    pub large_scale: LargeScaleModel,
    pub channels: ChannelSet,
    pub coeffs: SinrCoefficients,
}

/// Synthesizes one attempt of a drop. Fails with [`Error::RankDeficient`]
/// when the estimated channel cannot be zero-forced.
pub fn realize_drop(scenario: &Scenario, master_seed: u64, drop_index: u64, attempt: u32) -> Result<DropRealization, Error> {
    let geometry = &scenario.geometry;
    let network = drop_network(geometry, &mut stage_rng(master_seed, drop_index, attempt, Stage::Geometry));
    let large_scale = build_large_scale(
        geometry,
        &network,
        &scenario.large_scale,
        &mut stage_rng(master_seed, drop_index, attempt, Stage::Shadowing),
    );
    let h = realize_channel(
        geometry,
        &large_scale,
        &network,
        &mut stage_rng(master_seed, drop_index, attempt, Stage::SmallScale),
    );
    let pilots = scenario.pilots()?;
    let channels = mmse_estimate(
        &h,
        &pilots,
        &large_scale.beta_linear,
        &mut stage_rng(master_seed, drop_index, attempt, Stage::PilotNoise),
    );
    let weights = zf_weights(&channels.h_est)?;
    let coeffs = match scenario.csi {
        CsiModel::Realized => sinr_coefficients(&weights, &channels.h_err, scenario.rho),
        CsiModel::Statistical => {
            let stats = estimation_stats(&large_scale.beta_linear, &pilots);
            sinr_coefficients_statistical(&weights, &stats.error_var, scenario.rho)
        }
    };
    Ok(DropRealization {
        network,
        large_scale,
        channels,
        coeffs,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DropOutcome {
    pub drop_index: u64,
    /// Number of synthesis attempts used (1 unless resampled).
    pub attempts: u32,
    /// One result per requested method, in request order.
    pub results: Vec<TpcResult>,
}

/// Runs the full pipeline for one drop and every requested method.
pub fn simulate_drop(
    scenario: &Scenario,
    methods: &[MethodSpec],
    master_seed: u64,
    drop_index: u64,
) -> Result<DropOutcome, Error> {
    let mut attempt = 0;
    let realization = loop {
        match realize_drop(scenario, master_seed, drop_index, attempt) {
            Ok(r) => break r,
            Err(Error::RankDeficient { .. }) if attempt + 1 < MAX_DROP_ATTEMPTS => attempt += 1,
            Err(Error::RankDeficient { .. }) => {
                return Err(Error::ResampleExhausted {
                    drop: drop_index,
                    attempts: MAX_DROP_ATTEMPTS,
                })
            }
            Err(e) => return Err(e),
        }
    };
    let ctx = TpcContext {
        coeffs: &realization.coeffs,
        power: &scenario.power,
        num_aps: scenario.geometry.num_aps,
        num_antennas: scenario.geometry.total_antennas(),
        se_floor: scenario.se_floor,
    };
    let results = methods
        .iter()
        .map(|spec| match spec {
            MethodSpec::Optimize(m) => run_method(&ctx, *m),
            MethodSpec::FixedNu(nu) => max_min_ee_fixed_nu(&ctx, *nu),
        })
        .collect();
    Ok(DropOutcome {
        drop_index,
        attempts: attempt + 1,
        results,
    })
}

//! Power consumption and energy efficiency.

use alloc::vec::Vec;

use crate::Error;

/// bit/J per Gbit/J.
pub const BITS_PER_GBIT: f64 = 1e9;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerModelParams {
    /// Maximum UE transmit power `P̄`, W.
    pub max_power: f64,
    /// UE circuit power `P_U`, W.
    pub ue_circuit_power: f64,
    pub ap_fixed_power: f64,
    pub ap_backhaul_power: f64,
    pub antenna_fixed_power: f64,
    pub antenna_backhaul_power: f64,
    /// Hz.
    pub bandwidth: f64,
    /// Per-UE weights `w_k`; an empty vector means all ones.
    pub weights: Vec<f64>,
}

/// The baseline counts only UE transmit and circuit power; the AP and
/// antenna terms are zero (see [`PowerModelParams::with_network_power`]).
impl Default for PowerModelParams {
    fn default() -> Self {
        PowerModelParams {
            max_power: 0.2,
            ue_circuit_power: 0.1,
            ap_fixed_power: 0.0,
            ap_backhaul_power: 0.0,
            antenna_fixed_power: 0.0,
            antenna_backhaul_power: 0.0,
            bandwidth: 20e6,
            weights: Vec::new(),
        }
    }
}

impl PowerModelParams {
    /// Adds the per-AP (0.0825 W fixed, 0.1 W backhaul) and per-antenna
    /// (0.743 W fixed, 0.9 W backhaul) consumption used for network-level
    /// EE studies across SE floors.
    pub fn with_network_power(self) -> Self {
        PowerModelParams {
            ap_fixed_power: 0.0825,
            ap_backhaul_power: 0.1,
            antenna_fixed_power: 0.743,
            antenna_backhaul_power: 0.9,
            ..self
        }
    }

    pub fn validate(&self, num_ues: usize) -> Result<(), Error> {
        let powers = [
            self.max_power,
            self.ue_circuit_power,
            self.ap_fixed_power,
            self.ap_backhaul_power,
            self.antenna_fixed_power,
            self.antenna_backhaul_power,
        ];
        if powers.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter("power terms must be finite and non-negative"));
        }
        if !(self.bandwidth > 0.0) {
            return Err(Error::InvalidParameter("bandwidth must be positive"));
        }
        if !self.weights.is_empty() && self.weights.len() != num_ues {
            return Err(Error::InvalidParameter("weights must have one entry per UE"));
        }
        if self.weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidParameter("weights must be positive"));
        }
        Ok(())
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights.get(k).copied().unwrap_or(1.0)
    }

    /// `P_fix^AP + P_bh^AP`.
    pub fn per_ap_power(&self) -> f64 {
        self.ap_fixed_power + self.ap_backhaul_power
    }

    /// `P_fix^ant + P_bh^ant`.
    pub fn per_antenna_power(&self) -> f64 {
        self.antenna_fixed_power + self.antenna_backhaul_power
    }

    /// Everything in the total power that does not depend on `q`.
    pub fn static_power(&self, num_ues: usize, num_aps: usize, num_antennas: usize) -> f64 {
        num_ues as f64 * self.ue_circuit_power
            + num_aps as f64 * self.per_ap_power()
            + num_antennas as f64 * self.per_antenna_power()
    }
}

/// Network power consumption, W.
pub fn total_power(q: &[f64], params: &PowerModelParams, num_aps: usize, num_antennas: usize) -> f64 {
    params.max_power * q.iter().sum::<f64>() + params.static_power(q.len(), num_aps, num_antennas)
}

/// Weighted sum throughput divided by [`total_power`], bit/J.
pub fn total_ee(se: &[f64], q: &[f64], params: &PowerModelParams, num_aps: usize, num_antennas: usize) -> f64 {
    weighted_throughput(se, params) / total_power(q, params, num_aps, num_antennas)
}

/// `Bandwidth·Σ w_k S_k`, bit/s.
pub fn weighted_throughput(se: &[f64], params: &PowerModelParams) -> f64 {
    params.bandwidth * se.iter().enumerate().map(|(k, s)| params.weight(k) * s).sum::<f64>()
}

/// Energy efficiency of one UE, `Bandwidth·w_k·S_k / (P̄·q_k + P_U)`, bit/J.
/// Infrastructure power does not enter.
pub fn per_ue_ee(se_k: f64, q_k: f64, k: usize, params: &PowerModelParams) -> f64 {
    params.bandwidth * params.weight(k) * se_k / (params.max_power * q_k + params.ue_circuit_power)
}

pub fn per_ue_ee_all(se: &[f64], q: &[f64], params: &PowerModelParams) -> Vec<f64> {
    se.iter()
        .zip(q)
        .enumerate()
        .map(|(k, (s, qk))| per_ue_ee(*s, *qk, k, params))
        .collect()
}

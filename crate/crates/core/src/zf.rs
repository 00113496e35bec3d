//! Zero-forcing combining and the SINR model shared by every power-control
//! method.
//!
//! For a fixed drop the ZF SINR of user `k` is
//! `ρ·q_k / (ρ·Σ_{k'≠k} b_{k,k'}·q_{k'} + n_k)` with
//! `b_{k,k'} = |w_kᴴ h̃_{k'}|²` and `n_k = ‖w_k‖²`. [`SinrCoefficients`]
//! stores exactly these numbers.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::{CMatrix, Error, RMatrix};

/// Largest accepted condition number of the estimated channel matrix.
pub const CONDITION_LIMIT: f64 = 1e12;

/// `W = (ĤᴴĤ)⁻¹Ĥᴴ` through a thin QR factorization, `W = R⁻¹Qᴴ`.
pub fn zf_weights(h_est: &CMatrix) -> Result<CMatrix, Error> {
    let (m, k) = h_est.shape();
    if k == 0 || m < k {
        return Err(Error::Dimension("zero forcing needs at least as many antennas as users"));
    }
    let qr = h_est.clone().qr();
    let r = qr.r();
    let singular = r.clone().singular_values();
    let smax = singular.max();
    let smin = singular.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= CONDITION_LIMIT) {
        return Err(Error::RankDeficient { condition });
    }
    r.solve_upper_triangular(&qr.q().adjoint())
        .ok_or(Error::RankDeficient { condition })
}

/// Transmit SNR `ρ = P̄ / N₀` with the noise power given in dBm.
pub fn transmit_snr(max_power_w: f64, noise_dbm: f64) -> f64 {
    max_power_w / 10f64.powf((noise_dbm - 30.0) / 10.0)
}

/// Per-user transmit power coefficients, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation(Vec<f64>);

impl PowerAllocation {
    pub fn new(q: Vec<f64>) -> Result<Self, Error> {
        if q.iter().all(|v| (0.0..=1.0).contains(v)) {
            Ok(PowerAllocation(q))
        } else {
            Err(Error::InvalidParameter("power coefficients must lie in [0, 1]"))
        }
    }

    /// Clamps solver output into `[0, 1]`, absorbing rounding at the bounds.
    pub fn clamped(q: Vec<f64>) -> Self {
        PowerAllocation(q.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
    }

    pub fn full(num_ues: usize) -> Self {
        PowerAllocation(alloc::vec![1.0; num_ues])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Everything the power-control solvers need from one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrCoefficients {
    /// Transmit SNR `ρ`.
    pub rho: f64,
    /// `K×K` coupling `b_{k,k'}`, zero on the diagonal.
    pub interference: RMatrix,
    /// Effective noise `n_k = ‖w_k‖²`.
    pub noise: Vec<f64>,
}

impl SinrCoefficients {
    pub fn new(rho: f64, interference: RMatrix, noise: Vec<f64>) -> Result<Self, Error> {
        let k = noise.len();
        if interference.shape() != (k, k) {
            return Err(Error::Dimension("interference matrix must be K×K"));
        }
        if !(rho > 0.0) || noise.iter().any(|&n| !(n > 0.0)) || interference.iter().any(|&b| !(b >= 0.0)) {
            return Err(Error::InvalidParameter("need ρ > 0, n > 0 and b ≥ 0"));
        }
        let mut interference = interference;
        interference.fill_diagonal(0.0);
        Ok(SinrCoefficients {
            rho,
            interference,
            noise,
        })
    }

    pub fn num_ues(&self) -> usize {
        self.noise.len()
    }

    /// Interference-plus-noise seen by user `k`, in units of `1/ρ` power.
    pub fn denominator(&self, k: usize, q: &[f64]) -> f64 {
        let coupled: f64 = self.interference.row(k).iter().zip(q).map(|(b, qj)| b * qj).sum();
        self.rho * coupled + self.noise[k]
    }

    pub fn sinr_of(&self, k: usize, q: &[f64]) -> f64 {
        self.rho * q[k] / self.denominator(k, q)
    }

    pub fn sinr(&self, q: &[f64]) -> Vec<f64> {
        (0..self.num_ues()).map(|k| self.sinr_of(k, q)).collect()
    }

    /// Interference-free SINR bound `ρ·q_k/n_k`.
    pub fn isolated_sinr(&self, k: usize, q_k: f64) -> f64 {
        self.rho * q_k / self.noise[k]
    }
}

/// `b_{k,k'} = |w_kᴴ h̃_{k'}|²` off the diagonal and `n_k = ‖w_k‖²`.
pub fn sinr_coefficients(weights: &CMatrix, h_err: &CMatrix, rho: f64) -> SinrCoefficients {
    let coupling = weights * h_err;
    let mut interference = coupling.map(|c| c.norm_sqr());
    interference.fill_diagonal(0.0);
    SinrCoefficients {
        rho,
        interference,
        noise: row_norms_sqr(weights),
    }
}

/// Statistical-CSI variant: `b_{k,k'} = Σ_m |w_{k,m}|²·E|h̃_{m,k'}|²`.
pub fn sinr_coefficients_statistical(weights: &CMatrix, error_var: &RMatrix, rho: f64) -> SinrCoefficients {
    let power = weights.map(|w| w.norm_sqr());
    let mut interference = power * error_var;
    interference.fill_diagonal(0.0);
    SinrCoefficients {
        rho,
        interference,
        noise: row_norms_sqr(weights),
    }
}

fn row_norms_sqr(weights: &CMatrix) -> Vec<f64> {
    weights
        .row_iter()
        .map(|row| row.iter().map(|w| w.norm_sqr()).sum())
        .collect()
}

/// Per-user spectral efficiency `log2(1 + SINR_k(q))` in bit/s/Hz.
pub fn spectral_efficiency(coeffs: &SinrCoefficients, q: &[f64]) -> Vec<f64> {
    coeffs.sinr(q).into_iter().map(|s| (1.0 + s).log2()).collect()
}

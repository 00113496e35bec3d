//! Shared instance generators for the integration suites.
#![allow(dead_code)]

use cellfree_core::fading::{complex_normal, LargeScaleParams};
use cellfree_core::geometry::SimGeometry;
use cellfree_core::pipeline::{realize_drop, CsiModel, Scenario};
use cellfree_core::power::PowerModelParams;
use cellfree_core::optim::{yates_min_power, SinrTargets};
use cellfree_core::zf::{sinr_coefficients, transmit_snr, zf_weights};
use cellfree_core::{CMatrix, RMatrix, SinrCoefficients};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients from an actual zero-forcing receiver: `M×K` Rayleigh channel
/// with per-user gains spread over `gain_spread_db`, estimation error of
/// relative power `error_var`, and data SNR `rho`.
pub fn zf_instance(rng: &mut ChaCha8Rng, m: usize, k: usize, rho: f64, error_var: f64, gain_spread_db: f64) -> SinrCoefficients {
    let gains: Vec<f64> = (0..k)
        .map(|_| 10f64.powf(-rng.random_range(0.0..gain_spread_db) / 10.0))
        .collect();
    let h_est = CMatrix::from_fn(m, k, |_, j| complex_normal(rng) * gains[j].sqrt());
    let h_err = CMatrix::from_fn(m, k, |_, j| complex_normal(rng) * (gains[j] * error_var).sqrt());
    let w = zf_weights(&h_est).expect("Gaussian estimates are full rank");
    sinr_coefficients(&w, &h_err, rho)
}

/// Direct random coefficients: `b` uniform in `[0, b_max)`, `n` in `[0.5, 2)`.
pub fn random_coeffs(rng: &mut ChaCha8Rng, k: usize, rho: f64, b_max: f64) -> SinrCoefficients {
    let b = RMatrix::from_fn(k, k, |i, j| if i == j { 0.0 } else { rng.random_range(0.0..b_max) });
    let n = (0..k).map(|_| rng.random_range(0.5..2.0)).collect();
    SinrCoefficients::new(rho, b, n).unwrap()
}

/// Whether `targets` are reachable with unit caps.
pub fn feasible(coeffs: &SinrCoefficients, targets: &SinrTargets) -> bool {
    yates_min_power(coeffs, targets, &vec![1.0; coeffs.num_ues()]).is_ok()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Uplink scenario with `num_aps` single-antenna APs on a `side`-meter
/// square, `num_ues` users, baseline propagation and power model.
pub fn scenario(side: f64, num_aps: usize, num_ues: usize, se_floor: f64) -> Scenario {
    let rho = transmit_snr(0.2, -92.0);
    Scenario {
        geometry: SimGeometry::new(side, num_aps, 1, num_ues, 3.5e9).unwrap(),
        large_scale: LargeScaleParams::default(),
        pilot_length: num_ues,
        pilot_snr: rho,
        rho,
        power: PowerModelParams::default(),
        se_floor,
        csi: CsiModel::Realized,
    }
}

/// Coefficients of the first `count` drops of `scenario` whose SE floor is
/// reachable at full power.
pub fn drop_instances(scenario: &Scenario, seed: u64, count: usize) -> Vec<SinrCoefficients> {
    let k = scenario.geometry.num_ues;
    let floor = SinrTargets::from_se_floor(scenario.se_floor, k);
    (0..)
        .map(|d| realize_drop(scenario, seed, d, 0).unwrap().coeffs)
        .filter(|c| feasible(c, &floor))
        .take(count)
        .collect()
}

use alloc::vec;
use alloc::vec::Vec;


use super::{Infeasible, SinrTargets};
use crate::zf::SinrCoefficients;
use crate::RMatrix;

pub const YATES_MAX_ITER: usize = 10_000;
/// Stop when the sup-norm step is below this fraction of `‖q‖∞`.
const REL_TOL: f64 = 1e-13;
/// Rounding allowance on the power cap.
const CAP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct YatesSolution {
    pub q: Vec<f64>,
    pub iterations: usize,
}

/// Componentwise-minimal power vector with `SINR_k(q) = γ_k`, by the standard
/// interference-function fixed point
/// `q_k ← (γ_k/ρ)·(ρ·Σ_{k'} b_{k,k'} q_{k'} + n_k)` started from zero.
///
/// Iterates grow monotonically toward the fixed point, so the first iterate
/// above `q_max` proves infeasibility. The converged point is refined with one
/// direct solve of `(I − ΓB)q = Γn/ρ`, which has the same solution.
pub fn yates_min_power(
    coeffs: &SinrCoefficients,
    targets: &SinrTargets,
    q_max: &[f64],
) -> Result<YatesSolution, Infeasible> {
    let k = coeffs.num_ues();
    assert_eq!(targets.gamma.len(), k, "one SINR target per user");
    assert_eq!(q_max.len(), k, "one power cap per user");
    let rho = coeffs.rho;
    let gamma = &targets.gamma;

    let mut q = vec![0.0; k];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < YATES_MAX_ITER {
        iterations += 1;
        let next: Vec<f64> = (0..k).map(|i| gamma[i] / rho * coeffs.denominator(i, &q)).collect();
        if next.iter().zip(q_max).any(|(v, cap)| *v > cap * (1.0 + CAP_SLACK)) {
            return Err(Infeasible);
        }
        let delta = next.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let scale = next.iter().copied().fold(0.0, f64::max);
        q = next;
        if delta <= REL_TOL * scale {
            converged = true;
            break;
        }
    }

    match refine(coeffs, gamma) {
        Some(exact) if !converged || residual(coeffs, gamma, &exact) <= residual(coeffs, gamma, &q) => {
            if exact.iter().zip(q_max).any(|(v, cap)| *v > cap * (1.0 + CAP_SLACK)) {
                return Err(Infeasible);
            }
            q = exact;
        }
        Some(_) => {}
        // Singular system: keep the iterate only if it converged on its own.
        None if converged => {}
        None => return Err(Infeasible),
    }

    for (v, cap) in q.iter_mut().zip(q_max) {
        *v = v.clamp(0.0, *cap);
    }
    Ok(YatesSolution { q, iterations })
}

/// Direct solve of the fixed-point equations; `None` unless the solution is
/// finite and non-negative, which requires the spectral radius of `ΓB` below one.
fn refine(coeffs: &SinrCoefficients, gamma: &[f64]) -> Option<Vec<f64>> {
    let k = gamma.len();
    let system = RMatrix::from_fn(k, k, |i, j| {
        let coupling = gamma[i] * coeffs.interference[(i, j)];
        if i == j {
            1.0 - coupling
        } else {
            -coupling
        }
    });
    let rhs = nalgebra::DVector::from_fn(k, |i, _| gamma[i] * coeffs.noise[i] / coeffs.rho);
    let solution = system.lu().solve(&rhs)?;
    let largest = solution.iter().copied().fold(0.0, f64::max);
    let lowest = solution.iter().copied().fold(f64::INFINITY, f64::min);
    if !solution.iter().all(|v| v.is_finite()) || lowest < -1e-12 * largest.max(f64::MIN_POSITIVE) {
        return None;
    }
    Some(solution.iter().map(|v| v.max(0.0)).collect())
}

fn residual(coeffs: &SinrCoefficients, gamma: &[f64], q: &[f64]) -> f64 {
    (0..q.len())
        .map(|i| (q[i] - gamma[i] / coeffs.rho * coeffs.denominator(i, q)).abs())
        .fold(0.0, f64::max)
}

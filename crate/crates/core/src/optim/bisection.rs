use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::{yates_min_power, Infeasible, SinrTargets};
use crate::zf::SinrCoefficients;

/// Relative width of the final bracket on the SINR level.
pub const BISECTION_REL_TOL: f64 = 1e-9;
const MAX_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct MaxMinSolution {
    pub q: Vec<f64>,
    /// Achieved common level `t*`; for unit weights this is `min_k SINR_k`.
    pub level: f64,
    /// Number of feasibility checks performed.
    pub iterations: usize,
}

/// Maximizes `min_k SINR_k(q)` subject to `q ≤ q_max` and `SINR_k ≥ floor_k`.
///
/// The problem is quasi-linear: for a candidate level `t`, feasibility is a
/// minimal-power fixed point with every target raised to at least `t`. The
/// level is bisected between the floor and the interference-free bound
/// `min_k ρ·q_max,k/n_k`, and the minimal-power point of the last feasible
/// level is scaled up until one user reaches its cap.
pub fn maxmin_sinr_bisection(
    coeffs: &SinrCoefficients,
    q_max: &[f64],
    floor: &SinrTargets,
) -> Result<MaxMinSolution, Infeasible> {
    weighted_maxmin_bisection(coeffs, q_max, floor, None)
}

/// Weighted variant: maximizes `min_k w_k·log2(1 + SINR_k)`. User `k` is held
/// at SINR `(1 + t)^{1/ŵ_k} − 1` with `ŵ = w / max(w)`, so unit weights
/// reduce to [`maxmin_sinr_bisection`] and a common rescaling of `w` leaves
/// the iterates unchanged.
pub fn weighted_maxmin_bisection(
    coeffs: &SinrCoefficients,
    q_max: &[f64],
    floor: &SinrTargets,
    weights: Option<&[f64]>,
) -> Result<MaxMinSolution, Infeasible> {
    let k = coeffs.num_ues();
    let levels = LevelMap::new(weights, k);
    let floor_solution = yates_min_power(coeffs, floor, q_max)?;
    let mut iterations = 1;

    let targets = |t: f64| SinrTargets {
        gamma: (0..k).map(|i| levels.sinr_at(i, t).max(floor.gamma[i])).collect(),
    };

    let mut lo = (0..k).map(|i| levels.level_of(i, floor.gamma[i])).fold(f64::INFINITY, f64::min);
    let mut hi = (0..k)
        .map(|i| levels.level_of(i, coeffs.isolated_sinr(i, q_max[i])))
        .fold(f64::INFINITY, f64::min);
    let mut best = floor_solution.q;

    if hi > lo {
        iterations += 1;
        match yates_min_power(coeffs, &targets(hi), q_max) {
            Ok(sol) => best = sol.q,
            Err(Infeasible) => {
                while hi - lo > BISECTION_REL_TOL * hi && iterations < MAX_STEPS {
                    iterations += 1;
                    let mid = 0.5 * (lo + hi);
                    match yates_min_power(coeffs, &targets(mid), q_max) {
                        Ok(sol) => {
                            lo = mid;
                            best = sol.q;
                        }
                        Err(Infeasible) => hi = mid,
                    }
                }
            }
        }
    }

    // Push the minimal-power point onto the cap; every SINR only improves.
    let scale = best
        .iter()
        .zip(q_max)
        .filter(|(q, _)| **q > 0.0)
        .map(|(q, cap)| cap / q)
        .fold(f64::INFINITY, f64::min);
    if scale.is_finite() && scale > 1.0 {
        for (q, cap) in best.iter_mut().zip(q_max) {
            *q = (*q * scale).min(*cap);
        }
    }

    let level = (0..k)
        .map(|i| levels.level_of(i, coeffs.sinr_of(i, &best)))
        .fold(f64::INFINITY, f64::min);
    Ok(MaxMinSolution {
        q: best,
        level,
        iterations,
    })
}

struct LevelMap {
    /// Normalized weights; `None` means all ones.
    weights: Option<Vec<f64>>,
}

impl LevelMap {
    fn new(weights: Option<&[f64]>, k: usize) -> Self {
        let weights = weights.filter(|w| !w.is_empty()).map(|w| {
            assert_eq!(w.len(), k, "one weight per user");
            let top = w.iter().copied().fold(0.0, f64::max);
            w.iter().map(|v| v / top).collect::<Vec<f64>>()
        });
        LevelMap { weights }
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    fn sinr_at(&self, i: usize, level: f64) -> f64 {
        let w = self.weight(i);
        if w == 1.0 {
            level
        } else {
            (1.0 + level).powf(1.0 / w) - 1.0
        }
    }

    fn level_of(&self, i: usize, sinr: f64) -> f64 {
        let w = self.weight(i);
        if w == 1.0 {
            sinr
        } else {
            (1.0 + sinr).powf(w) - 1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RMatrix;
    use alloc::vec;

    #[test]
    fn no_interference_closed_form() {
        let rho = 7.0;
        let c = SinrCoefficients::new(rho, RMatrix::zeros(3, 3), vec![1.0, 2.0, 4.0]).unwrap();
        let sol = maxmin_sinr_bisection(&c, &[1.0; 3], &SinrTargets::zero(3)).unwrap();
        assert!((sol.level - rho / 4.0).abs() < 1e-12);
        for (q, want) in sol.q.iter().zip([0.25, 0.5, 1.0]) {
            assert!((q - want).abs() < 1e-12);
        }
    }

    #[test]
    fn single_user_transmits_at_cap() {
        let c = SinrCoefficients::new(5.0, RMatrix::zeros(1, 1), vec![2.0]).unwrap();
        let sol = maxmin_sinr_bisection(&c, &[0.6], &SinrTargets::zero(1)).unwrap();
        assert_eq!(sol.q, vec![0.6]);
        assert!((sol.level - 1.5).abs() < 1e-12);
    }

    #[test]
    fn interfering_pair_is_equalized() {
        let b = RMatrix::from_row_slice(2, 2, &[0.0, 0.3, 0.05, 0.0]);
        let c = SinrCoefficients::new(20.0, b, vec![1.0, 3.0]).unwrap();
        let sol = maxmin_sinr_bisection(&c, &[1.0, 1.0], &SinrTargets::zero(2)).unwrap();
        let s = c.sinr(&sol.q);
        assert!((s[0] - s[1]).abs() / sol.level < 1e-6);
        assert!(sol.q.iter().any(|q| *q >= 1.0 - 1e-6));
    }

    #[test]
    fn infeasible_floor_propagates() {
        let c = SinrCoefficients::new(5.0, RMatrix::zeros(1, 1), vec![2.0]).unwrap();
        assert_eq!(
            maxmin_sinr_bisection(&c, &[1.0], &SinrTargets::uniform(3.0, 1)),
            Err(Infeasible)
        );
    }

    #[test]
    fn weighted_levels_follow_se_weights() {
        let c = SinrCoefficients::new(100.0, RMatrix::zeros(2, 2), vec![1.0, 1.0]).unwrap();
        let sol = weighted_maxmin_bisection(&c, &[1.0, 1.0], &SinrTargets::zero(2), Some(&[1.0, 2.0])).unwrap();
        let s = c.sinr(&sol.q);
        let se0 = (1.0 + s[0]).log2();
        let se1 = 2.0 * (1.0 + s[1]).log2();
        assert!((se0 - se1).abs() < 1e-6);
        assert!((sol.q[0] - 1.0).abs() < 1e-12);
    }
}

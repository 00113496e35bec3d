//! Product-of-SINR geometric program solved in log variables.
//!
//! With `x = ln q` the problem
//!
//! ```text
//! maximize   Σ_k ln t_k
//! subject to t_k ≤ SINR_k(q),  SINR_k(q) ≥ γ_k,  Σ_k q_k ≤ S,  q_k ≤ q_cap
//! ```
//!
//! becomes convex: `ln SINR_k = ln ρ + x_k − ln(Σ_j ρ b_{k,j} e^{x_j} + n_k)`
//! is concave, each floor is a log-sum-exp minus an affine term, and the sum
//! cap is a plain log-sum-exp. At the optimum every `t_k` equals its SINR, so
//! the `t` variables are eliminated and the objective is `Σ_k ln SINR_k`.
//! The program is solved with a log-barrier interior-point method and damped
//! Newton steps.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::{yates_min_power, Infeasible, SinrTargets};
use crate::zf::SinrCoefficients;

const MU_START: f64 = 1.0;
const MU_GROWTH: f64 = 10.0;
const GAP_TOL: f64 = 1e-6;
const NEWTON_TOL: f64 = 1e-9;
const ARMIJO: f64 = 1e-4;
const MAX_NEWTON: usize = 200;
const MAX_BACKTRACK: usize = 80;
/// Relative tolerance for treating the sum cap as binding at the floor point.
const TIGHT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GpSolution {
    pub q: Vec<f64>,
    /// `Σ_k ln t_k = Σ_k ln SINR_k(q)`.
    pub log_objective: f64,
    pub newton_steps: usize,
    pub converged: bool,
}

/// Maximizes `Π_k SINR_k` under SINR floors, `Σ q ≤ sum_cap` and `q ≤ q_cap`.
///
/// The barrier method starts strictly inside the feasible set, just above
/// the minimal-power point that meets the floors. When that point already
/// exhausts the sum cap the feasible set is a single point and it is
/// returned directly.
pub fn gp_max_product_sinr(
    coeffs: &SinrCoefficients,
    floor: &SinrTargets,
    sum_cap: f64,
    q_cap: f64,
) -> Result<GpSolution, Infeasible> {
    let k = coeffs.num_ues();
    let caps = vec![q_cap; k];
    let base = yates_min_power(coeffs, floor, &caps)?.q;
    let base_sum: f64 = base.iter().sum();
    if base_sum > sum_cap * (1.0 + TIGHT) + f64::MIN_POSITIVE {
        return Err(Infeasible);
    }
    if !(sum_cap > 0.0) || !(q_cap > 0.0) {
        return Ok(finish(coeffs, base, 0, true));
    }

    let problem = Problem::new(coeffs, floor, sum_cap, q_cap);
    let Some(start) = interior_start(&problem, &base, sum_cap, q_cap) else {
        return Ok(finish(coeffs, base, 0, true));
    };

    let mut x: Vec<f64> = start.iter().map(|q| q.ln()).collect();
    let m = problem.num_constraints() as f64;
    let mut mu = MU_START;
    let mut steps = 0;
    let mut converged = false;
    loop {
        let (next, used, ok) = centering(&problem, x, mu);
        x = next;
        steps += used;
        if !ok {
            break;
        }
        if m / mu < GAP_TOL {
            converged = true;
            break;
        }
        mu *= MU_GROWTH;
    }
    let q: Vec<f64> = x.iter().map(|v| v.exp().min(q_cap)).collect();
    Ok(finish(coeffs, q, steps, converged))
}

fn finish(coeffs: &SinrCoefficients, q: Vec<f64>, newton_steps: usize, converged: bool) -> GpSolution {
    let log_objective = coeffs.sinr(&q).iter().map(|s| s.ln()).sum();
    GpSolution {
        q,
        log_objective,
        newton_steps,
        converged,
    }
}

/// Strictly feasible point: scale the floor point toward the caps, then lift
/// zero entries (users without a floor) by a small amount.
fn interior_start(problem: &Problem, base: &[f64], sum_cap: f64, q_cap: f64) -> Option<Vec<f64>> {
    let k = base.len();
    let base_sum: f64 = base.iter().sum();
    let base_max = base.iter().copied().fold(0.0, f64::max);
    let mut scaled = base.to_vec();
    if base_max > 0.0 {
        let room = (sum_cap / base_sum).min(q_cap / base_max);
        if room <= 1.0 + TIGHT {
            return None;
        }
        let c = 1.0 + 0.5 * (room - 1.0);
        for v in scaled.iter_mut() {
            *v *= c;
        }
    }
    let sum_room = sum_cap - scaled.iter().sum::<f64>();
    let cap_room = scaled.iter().map(|v| q_cap - v).fold(f64::INFINITY, f64::min);
    let mut lift = 0.5 * (sum_room / k as f64).min(cap_room);
    for _ in 0..MAX_BACKTRACK {
        let q: Vec<f64> = scaled.iter().map(|v| if *v > 0.0 { *v } else { lift }).collect();
        let x: Vec<f64> = q.iter().map(|v| v.ln()).collect();
        if problem.strictly_feasible(&x) {
            return Some(q);
        }
        lift *= 0.5;
    }
    None
}

/// Approximately minimizes `μ·f0(x) − Σ ln(−g_i(x))` by damped Newton.
/// Returns the point, the number of Newton steps and whether it stayed sane.
fn centering(problem: &Problem, mut x: Vec<f64>, mu: f64) -> (Vec<f64>, usize, bool) {
    let k = x.len();
    for step in 0..MAX_NEWTON {
        let Some((value, grad, hess)) = problem.barrier(&x, mu, true) else {
            return (x, step, false);
        };
        let hess = hess.expect("hessian requested");
        let g = DVector::from_vec(grad);
        let Some(dir) = solve_spd(hess, &(-&g)) else {
            return (x, step, false);
        };
        let decrement = -g.dot(&dir);
        if decrement / 2.0 <= NEWTON_TOL {
            return (x, step, true);
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            let trial: Vec<f64> = (0..k).map(|i| x[i] + t * dir[i]).collect();
            if let Some((v, _, _)) = problem.barrier(&trial, mu, false) {
                if v <= value - ARMIJO * t * decrement {
                    accepted = Some(trial);
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some(next) => x = next,
            // No progress possible at machine precision.
            None => return (x, step + 1, true),
        }
    }
    (x, MAX_NEWTON, true)
}

fn solve_spd(mut hess: DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let n = hess.nrows();
    let scale = (0..n).map(|i| hess[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 0.0;
    for _ in 0..20 {
        if let Some(chol) = hess.clone().cholesky() {
            return Some(chol.solve(rhs));
        }
        shift = if shift == 0.0 { 1e-12 * scale } else { shift * 100.0 };
        for i in 0..n {
            hess[(i, i)] += shift;
        }
    }
    None
}

struct Problem<'a> {
    coeffs: &'a SinrCoefficients,
    /// `ln γ_k − ln ρ` for users with a positive floor.
    floors: Vec<(usize, f64)>,
    ln_sum_cap: f64,
    ln_q_cap: f64,
}

/// Value, gradient and (optionally) Hessian of a scalar function of `x`.
struct Local {
    value: f64,
    grad: Vec<f64>,
    hess: Option<DMatrix<f64>>,
}

impl<'a> Problem<'a> {
    fn new(coeffs: &'a SinrCoefficients, floor: &SinrTargets, sum_cap: f64, q_cap: f64) -> Self {
        let floors = floor
            .gamma
            .iter()
            .enumerate()
            .filter(|(_, g)| **g > 0.0)
            .map(|(i, g)| (i, g.ln() - coeffs.rho.ln()))
            .collect();
        Problem {
            coeffs,
            floors,
            ln_sum_cap: sum_cap.ln(),
            ln_q_cap: q_cap.ln(),
        }
    }

    fn num_constraints(&self) -> usize {
        self.floors.len() + 1 + self.coeffs.num_ues()
    }

    /// `s_k(x) = ln(Σ_j ρ b_{k,j} e^{x_j} + n_k)`.
    fn log_denominator(&self, k: usize, x: &[f64], with_hess: bool) -> Local {
        let c = self.coeffs;
        let n = x.len();
        let terms: Vec<f64> = (0..n).map(|j| c.rho * c.interference[(k, j)] * x[j].exp()).collect();
        let total = terms.iter().sum::<f64>() + c.noise[k];
        let p: Vec<f64> = terms.iter().map(|t| t / total).collect();
        let hess = with_hess.then(|| {
            DMatrix::from_fn(n, n, |a, b| if a == b { p[a] - p[a] * p[a] } else { -p[a] * p[b] })
        });
        Local {
            value: total.ln(),
            grad: p,
            hess,
        }
    }

    /// `ln Σ_j e^{x_j}`.
    fn log_sum(x: &[f64], with_hess: bool) -> Local {
        let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = x.iter().map(|v| (v - top).exp()).collect();
        let total: f64 = e.iter().sum();
        let p: Vec<f64> = e.iter().map(|v| v / total).collect();
        let n = x.len();
        let hess = with_hess.then(|| {
            DMatrix::from_fn(n, n, |a, b| if a == b { p[a] - p[a] * p[a] } else { -p[a] * p[b] })
        });
        Local {
            value: top + total.ln(),
            grad: p,
            hess,
        }
    }

    fn strictly_feasible(&self, x: &[f64]) -> bool {
        if x.iter().any(|v| !v.is_finite() || *v >= self.ln_q_cap) {
            return false;
        }
        if Self::log_sum(x, false).value >= self.ln_sum_cap {
            return false;
        }
        self.floors
            .iter()
            .all(|&(k, offset)| offset - x[k] + self.log_denominator(k, x, false).value < 0.0)
    }

    /// Barrier function `μ·Σ_k (s_k − x_k) − Σ_i ln(−g_i)`; `None` outside the
    /// strict interior.
    #[allow(clippy::type_complexity)]
    fn barrier(&self, x: &[f64], mu: f64, derivatives: bool) -> Option<(f64, Vec<f64>, Option<DMatrix<f64>>)> {
        let n = x.len();
        let mut value = 0.0;
        let mut grad = vec![0.0; n];
        let mut hess = derivatives.then(|| DMatrix::<f64>::zeros(n, n));

        let mut dens = Vec::with_capacity(n);
        for k in 0..n {
            let s = self.log_denominator(k, x, derivatives);
            value += mu * (s.value - x[k]);
            if derivatives {
                for (g, sg) in grad.iter_mut().zip(&s.grad) {
                    *g += mu * sg;
                }
                grad[k] -= mu;
                if let (Some(h), Some(hs)) = (hess.as_mut(), s.hess.as_ref()) {
                    *h += hs * mu;
                }
            }
            dens.push(s);
        }

        let mut add_log_barrier = |g: f64, g_grad: &[f64], g_hess: Option<&DMatrix<f64>>| -> bool {
            if !(g < 0.0) {
                return false;
            }
            value -= (-g).ln();
            if derivatives {
                let inv = 1.0 / -g;
                for (g, gg) in grad.iter_mut().zip(g_grad) {
                    *g += gg * inv;
                }
                if let Some(h) = hess.as_mut() {
                    for a in 0..n {
                        for b in 0..n {
                            h[(a, b)] += g_grad[a] * g_grad[b] * inv * inv;
                        }
                    }
                    if let Some(gh) = g_hess {
                        *h += gh * inv;
                    }
                }
            }
            true
        };

        // Per-user caps x_k ≤ ln q_cap.
        let mut unit = vec![0.0; n];
        for k in 0..n {
            unit[k] = 1.0;
            if !add_log_barrier(x[k] - self.ln_q_cap, &unit, None) {
                return None;
            }
            unit[k] = 0.0;
        }

        let sum = Self::log_sum(x, derivatives);
        if !add_log_barrier(sum.value - self.ln_sum_cap, &sum.grad, sum.hess.as_ref()) {
            return None;
        }

        for &(k, offset) in &self.floors {
            let s = &dens[k];
            let mut g_grad = s.grad.clone();
            g_grad[k] -= 1.0;
            if !add_log_barrier(offset - x[k] + s.value, &g_grad, s.hess.as_ref()) {
                return None;
            }
        }

        value.is_finite().then_some((value, grad, hess))
    }
}

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub q: Vec<f64>,
    pub value: f64,
}

/// Exhaustive maximization over the lattice `{0, step, …, 1}^K` for `K ≤ 3`.
///
/// `objective` returns `None` for lattice points that violate the problem's
/// constraints. Returns `Ok(None)` when no lattice point is feasible.
pub fn grid_oracle<F>(num_ues: usize, step: f64, mut objective: F) -> Result<Option<OracleResult>, Error>
where
    F: FnMut(&[f64]) -> Option<f64>,
{
    if num_ues == 0 || num_ues > 3 {
        return Err(Error::InvalidParameter("grid oracle supports 1 to 3 users"));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter("grid step must lie in (0, 1]"));
    }
    let divisions = (1.0 / step).round() as usize;
    let total = (divisions + 1).pow(num_ues as u32);
    let mut index = vec![0usize; num_ues];
    let mut q = vec![0.0; num_ues];
    let mut best: Option<OracleResult> = None;
    for _ in 0..total {
        for (qi, &ii) in q.iter_mut().zip(&index) {
            *qi = ii as f64 / divisions as f64;
        }
        if let Some(value) = objective(&q) {
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(OracleResult { q: q.clone(), value });
            }
        }
        for digit in index.iter_mut() {
            *digit += 1;
            if *digit <= divisions {
                break;
            }
            *digit = 0;
        }
    }
    Ok(best)
}

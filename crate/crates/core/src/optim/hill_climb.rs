
pub const INITIAL_STEP: f64 = 0.1;
pub const MIN_STEP: f64 = 1e-4;
const SHRINK: f64 = 3.0;
const MAX_EVALUATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillClimbResult {
    pub argmax: f64,
    pub max: f64,
    pub evaluations: usize,
    pub final_step: f64,
}

/// One-dimensional hill climbing on `[lo, hi]`.
///
/// Starts at `init` with step `+0.1`. After every move that lowers the
/// objective relative to the previous point the step is divided by three and
/// reversed; the search stops once `|step| < 1e-4`. A step that is fully
/// absorbed by a bound counts as a decrease. Returns the best point visited.
pub fn hill_climb<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, init: f64) -> HillClimbResult {
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut x = init.clamp(lo, hi);
    let mut fx = eval(x);
    let mut evaluations = 1;
    let (mut best_x, mut best_f) = (x, fx);
    let mut step = INITIAL_STEP;

    while step.abs() >= MIN_STEP && evaluations < MAX_EVALUATIONS {
        let candidate = (x + step).clamp(lo, hi);
        if candidate == x {
            step = -step / SHRINK;
            continue;
        }
        let fc = eval(candidate);
        evaluations += 1;
        if fc > best_f {
            best_x = candidate;
            best_f = fc;
        }
        if fc < fx {
            step = -step / SHRINK;
        }
        x = candidate;
        fx = fc;
    }

    HillClimbResult {
        argmax: best_x,
        max: best_f,
        evaluations,
        final_step: step,
    }
}

//! The four power control policies against exhaustive scans of their exact
//! objectives, plus the per-method invariants.

mod common;

use cellfree_core::power::{per_ue_ee_all, total_ee, PowerModelParams};
use cellfree_core::tpc::{
    max_min_ee, max_min_ee_fixed_nu, max_min_se, max_min_se_with_floor, max_power, max_total_ee, run_method, TpcContext,
    TpcMethod,
};
use cellfree_core::zf::spectral_efficiency;
use cellfree_core::{RMatrix, SinrCoefficients};
use common::{drop_instances, rel_err, rng, scenario, zf_instance};

const NUM_APS: usize = 16;
const NUM_ANTENNAS: usize = 16;
const FLOOR: f64 = 2.0;

fn ctx<'a>(coeffs: &'a SinrCoefficients, power: &'a PowerModelParams, se_floor: f64) -> TpcContext<'a> {
    TpcContext {
        coeffs,
        power,
        num_aps: NUM_APS,
        num_antennas: NUM_ANTENNAS,
        se_floor,
    }
}

/// Best value of `f` over the 0.01 lattice of `(0, 1]²` restricted to points
/// meeting the SE floor.
fn scan_two_users(coeffs: &SinrCoefficients, se_floor: f64, f: impl Fn(&[f64], &[f64]) -> f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for i in 1..=100 {
        for j in 1..=100 {
            let q = [i as f64 / 100.0, j as f64 / 100.0];
            let se = spectral_efficiency(coeffs, &q);
            if se.iter().all(|s| *s >= se_floor) {
                let v = f(&q, &se);
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
    }
    best
}

/// Two-user drops of a 64-AP, 500 m deployment whose 2 bit/s/Hz floor is
/// reachable.
fn two_user_instances(seed: u64, count: usize) -> Vec<SinrCoefficients> {
    drop_instances(&scenario(500.0, 64, 2, FLOOR), seed, count)
}

#[test]
fn total_ee_within_two_percent_of_scan() {
    for power in [PowerModelParams::default(), PowerModelParams::default().with_network_power()] {
        for c in two_user_instances(30, 10) {
            let res = max_total_ee(&ctx(&c, &power, FLOOR));
            assert!(!res.outage);
            let oracle = scan_two_users(&c, FLOOR, |q, se| total_ee(se, q, &power, NUM_APS, NUM_ANTENNAS)).unwrap();
            assert!(res.ee_total >= 0.98 * oracle, "{} vs {oracle}", res.ee_total);
        }
    }
}

#[test]
fn min_ee_within_two_percent_of_scan() {
    let power = PowerModelParams::default();
    for c in two_user_instances(31, 10) {
        let res = max_min_ee(&ctx(&c, &power, FLOOR));
        assert!(!res.outage);
        let oracle = scan_two_users(&c, FLOOR, |q, se| {
            per_ue_ee_all(se, q, &power).into_iter().fold(f64::INFINITY, f64::min)
        })
        .unwrap();
        assert!(res.min_ee() >= 0.98 * oracle, "{} vs {oracle}", res.min_ee());
    }
}

#[test]
fn single_user_min_ee_matches_dense_scan() {
    let power = PowerModelParams::default();
    for (rho, n) in [(10.0, 1.0), (1e3, 2.0), (1e5, 0.5), (3.0, 1.0)] {
        let c = SinrCoefficients::new(rho, RMatrix::zeros(1, 1), vec![n]).unwrap();
        let floor = 0.5;
        let res = max_min_ee(&ctx(&c, &power, floor));
        let ee = |q: f64| {
            let se = (1.0 + rho * q / n).log2();
            (se >= floor).then(|| power.bandwidth * se / (power.max_power * q + power.ue_circuit_power))
        };
        let oracle = (1..=10_000).filter_map(|i| ee(i as f64 * 1e-4)).fold(f64::NEG_INFINITY, f64::max);
        assert!(res.min_ee() >= oracle * (1.0 - 1e-6), "rho {rho}: {} vs {oracle}", res.min_ee());
        // The inner solution runs at the cap.
        assert!((res.q.as_slice()[0] - res.diagnostics.outer_variable.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn unit_cap_equals_max_min_se_with_floor() {
    let power = PowerModelParams::default();
    for c in two_user_instances(32, 10) {
        let ctx = ctx(&c, &power, FLOOR);
        let fixed = max_min_ee_fixed_nu(&ctx, 1.0);
        let reference = max_min_se_with_floor(&ctx).unwrap();
        for (a, b) in fixed.q.as_slice().iter().zip(reference.q.as_slice()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn min_se_nondecreasing_in_cap() {
    let mut r = rng(33);
    let power = PowerModelParams::default();
    for _ in 0..20 {
        let c = zf_instance(&mut r, 32, 8, 1e3, 0.2, 20.0);
        let ctx = ctx(&c, &power, 0.5);
        let mins: Vec<f64> = [0.3, 0.5, 0.7, 0.9, 1.0]
            .iter()
            .map(|nu| max_min_ee_fixed_nu(&ctx, *nu).min_se())
            .collect();
        for w in mins.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "{mins:?}");
        }
    }
}

#[test]
fn common_weight_scale_leaves_allocation_unchanged() {
    let mut r = rng(34);
    for _ in 0..10 {
        let c = zf_instance(&mut r, 16, 4, 1e3, 0.2, 10.0);
        let base = PowerModelParams {
            weights: vec![1.0, 0.5, 2.0, 1.5],
            ..PowerModelParams::default()
        };
        let scaled = PowerModelParams {
            weights: base.weights.iter().map(|w| w * 3.7).collect(),
            ..PowerModelParams::default()
        };
        let a = max_min_ee(&ctx(&c, &base, 0.5));
        let b = max_min_ee(&ctx(&c, &scaled, 0.5));
        for (x, y) in a.q.as_slice().iter().zip(b.q.as_slice()) {
            assert!((x - y).abs() <= 1e-9);
        }
        assert!(rel_err(b.min_ee(), 3.7 * a.min_ee()) < 1e-12);
    }
}

#[test]
fn max_min_se_dominates_other_allocations() {
    let mut r = rng(35);
    let power = PowerModelParams::default();
    for _ in 0..20 {
        let c = zf_instance(&mut r, 32, 8, 1e3, 0.2, 20.0);
        let ctx = ctx(&c, &power, 1.0);
        let best = max_min_se(&ctx);
        assert!(!best.outage);
        for method in TpcMethod::ALL {
            assert!(best.min_se() >= run_method(&ctx, method).min_se() - 1e-9);
        }
        for i in 1..=10 {
            let uniform = spectral_efficiency(&c, &[i as f64 / 10.0; 8]);
            assert!(best.min_se() >= uniform.iter().cloned().fold(f64::INFINITY, f64::min) - 1e-9);
        }
    }
}

#[test]
fn stored_metrics_recompute_and_floor_holds() {
    let mut r = rng(36);
    let power = PowerModelParams::default().with_network_power();
    for _ in 0..20 {
        let c = zf_instance(&mut r, 32, 8, 1e3, 0.2, 20.0);
        let ctx = ctx(&c, &power, 2.0);
        for method in TpcMethod::ALL {
            let res = run_method(&ctx, method);
            let q = res.q.as_slice();
            assert!(q.iter().all(|v| (0.0..=1.0).contains(v)));
            let se = spectral_efficiency(&c, q);
            let ee = per_ue_ee_all(&se, q, &power);
            for k in 0..8 {
                assert!(rel_err(res.se[k], se[k]) <= 1e-12);
                assert!(rel_err(res.ee_per_ue[k], ee[k]) <= 1e-12);
            }
            assert!(rel_err(res.ee_total, total_ee(&se, q, &power, NUM_APS, NUM_ANTENNAS)) <= 1e-12);
            if matches!(method, TpcMethod::MaxTotalEe | TpcMethod::MaxMinEe) && !res.outage {
                assert!(res.se.iter().all(|s| *s >= 2.0 - 1e-6), "{method}: {:?}", res.se);
            }
            if matches!(method, TpcMethod::MaxPower | TpcMethod::MaxMinSe) {
                assert!(!res.outage);
            }
        }
    }
}

#[test]
fn unreachable_floor_falls_back_to_max_min_se() {
    let mut r = rng(37);
    let power = PowerModelParams::default();
    let c = zf_instance(&mut r, 8, 3, 1e2, 0.3, 10.0);
    let ceiling = spectral_efficiency(&c, &[1.0; 3]).into_iter().fold(f64::INFINITY, f64::min);
    let ctx = ctx(&c, &power, ceiling + 5.0);
    let reference = max_min_se(&ctx);
    for method in [TpcMethod::MaxTotalEe, TpcMethod::MaxMinEe] {
        let res = run_method(&ctx, method);
        assert!(res.outage);
        assert_eq!(res.method, method);
        assert_eq!(res.q, reference.q);
        assert_eq!(res.diagnostics.outer_variable, None);
    }
}

#[test]
fn zero_floor_total_ee_climbs_away_from_silence() {
    let c = SinrCoefficients::new(100.0, RMatrix::zeros(2, 2), vec![1.0, 2.0]).unwrap();
    let power = PowerModelParams::default();
    let res = max_total_ee(&ctx(&c, &power, 0.0));
    assert!(res.diagnostics.outer_variable.unwrap() > 0.0);
    assert!(res.ee_total > 0.0);
    assert!(res.ee_total >= max_power(&ctx(&c, &power, 0.0)).ee_total * (1.0 - 1e-9));
}

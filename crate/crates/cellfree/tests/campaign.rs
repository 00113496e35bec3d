//! Campaign cardinality, determinism and aggregation contracts.

use cellfree::config::MethodName;
use cellfree::io::{read_records, write_records, write_records_to};
use cellfree::{run_campaign, run_drop, CampaignConfig, Plan};
use cellfree_core::stats::{likely_95, percentile};
use cellfree_core::tpc::TpcMethod;
use proptest::prelude::*;

/// A small deployment that keeps every test well under a second per drop.
fn small(num_ues: usize, drops: u64) -> CampaignConfig {
    CampaignConfig {
        area_side_m: 300.0,
        num_aps: 24,
        num_ues,
        num_drops: drops,
        master_seed: 11,
        s_r: 2.0,
        ..CampaignConfig::default()
    }
}

fn csv_bytes(records: &[cellfree::DropRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_records_to(&mut buf, records).unwrap();
    buf
}

#[test]
fn one_method_one_user_gives_one_record_per_drop() {
    let config = CampaignConfig {
        methods: vec![MethodName(TpcMethod::MaxPower)],
        ..small(1, 1)
    };
    let records = run_drop(&Plan::new(&config).unwrap(), 0).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].method, "MaxPower");
    assert_eq!(records[0].q, 1.0);
}

#[test]
fn four_methods_eight_users_give_32_records_per_drop() {
    let config = small(8, 10);
    let plan = Plan::new(&config).unwrap();
    let records = run_drop(&plan, 3).unwrap();
    assert_eq!(records.len(), 32);
    assert!(records.iter().all(|r| r.drop == 3));

    let output = run_campaign(&config, 1).unwrap();
    assert_eq!(output.records.len(), 320);
    assert_eq!(output.summary.methods.len(), 4);
    for m in &output.summary.methods {
        assert_eq!(m.samples, 80);
    }
    let labels: Vec<&str> = output.summary.methods.iter().map(|m| m.method.as_str()).collect();
    assert_eq!(labels, ["MaxPower", "MaxMinSE", "MaxTotalEE", "MaxMinEE"]);
}

#[test]
fn fixed_nu_grid_adds_labelled_methods() {
    let config = CampaignConfig {
        methods: vec![],
        nu_grid: Some(vec![1.0, 0.5]),
        ..small(4, 2)
    };
    let output = run_campaign(&config, 1).unwrap();
    let labels: Vec<&str> = output.summary.methods.iter().map(|m| m.method.as_str()).collect();
    assert_eq!(labels, ["MaxMinEE[nu=1]", "MaxMinEE[nu=0.5]"]);
    assert!(output
        .records
        .iter()
        .all(|r| r.outer_var == Some(if r.method.ends_with("=1]") { 1.0 } else { 0.5 })));
}

#[test]
fn same_drop_twice_is_bitwise_identical() {
    let plan = Plan::new(&small(6, 5)).unwrap();
    let a = run_drop(&plan, 4).unwrap();
    let b = run_drop(&plan, 4).unwrap();
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
    assert_ne!(csv_bytes(&a), csv_bytes(&run_drop(&plan, 2).unwrap()));
}

#[test]
fn output_is_independent_of_thread_count() {
    let config = small(6, 12);
    let one = run_campaign(&config, 1).unwrap();
    let many = run_campaign(&config, 4).unwrap();
    assert_eq!(csv_bytes(&one.records), csv_bytes(&many.records));
    assert_eq!(one.summary, many.summary);
    assert_eq!(
        serde_json::to_string(&one.summary).unwrap(),
        serde_json::to_string(&many.summary).unwrap()
    );
    assert_eq!(many.runtime.threads, 4);
}

#[test]
fn summary_statistics_match_records() {
    let config = CampaignConfig {
        s_r: 6.0,
        ..small(8, 15)
    };
    let output = run_campaign(&config, 2).unwrap();
    for m in &output.summary.methods {
        let mine: Vec<_> = output.records.iter().filter(|r| r.method == m.method).collect();
        let se: Vec<f64> = mine.iter().map(|r| r.se).collect();
        let ee: Vec<f64> = mine.iter().map(|r| r.ee).collect();
        assert_eq!(m.likely_95_se, likely_95(&se).unwrap());
        assert_eq!(m.likely_95_ee, likely_95(&ee).unwrap());
        let min = se.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(m.likely_95_se >= min && m.likely_95_se <= percentile(&se, 0.5).unwrap());
        let flagged = mine.iter().filter(|r| r.outage).count() as f64 / mine.len() as f64;
        assert_eq!(m.outage_rate, flagged);
        if m.method == "MaxPower" || m.method == "MaxMinSE" {
            assert_eq!(m.outage_rate, 0.0);
        }
        assert!(m.mean_total_ee.unwrap() > 0.0);
        assert_eq!(m.cdf.se.len(), cellfree::summary::CDF_POINTS);
        assert!(m.cdf.se.windows(2).all(|w| w[0] <= w[1]));
        assert!(m.cdf.ee.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(m.cdf.se[0], min);
    }
}

#[test]
fn records_file_round_trips_and_resummarizes() {
    let config = small(4, 6);
    let output = run_campaign(&config, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    write_records(&path, &output.records).unwrap();
    let back = read_records(&path).unwrap();
    assert_eq!(csv_bytes(&back), csv_bytes(&output.records));
    let labels = cellfree::summary::labels_in_order(&back);
    let again = cellfree::aggregate(&back, &labels, 4).unwrap();
    for (a, b) in again.methods.iter().zip(&output.summary.methods) {
        assert_eq!(a.likely_95_se, b.likely_95_se);
        assert_eq!(a.cdf, b.cdf);
        assert_eq!(a.mean_total_ee, None);
    }
}

fn any_record() -> impl Strategy<Value = cellfree::DropRecord> {
    (
        any::<u64>(),
        "[A-Za-z]{1,10}(\\[nu=0\\.[0-9]\\])?",
        0usize..512,
        (0.0f64..=1.0, any::<f64>(), any::<f64>()),
        any::<bool>(),
        prop::option::of(any::<f64>()),
    )
        .prop_filter("finite values", |(_, _, _, (_, se, ee), _, v)| {
            se.is_finite() && ee.is_finite() && v.is_none_or(f64::is_finite)
        })
        .prop_map(|(drop, method, ue, (q, se, ee), outage, outer_var)| cellfree::DropRecord {
            drop,
            method,
            ue,
            q,
            se,
            ee,
            outage,
            outer_var,
            total_ee: None,
        })
}

proptest! {
    #[test]
    fn csv_round_trip_is_identity(records in prop::collection::vec(any_record(), 0..40)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.csv");
        write_records(&path, &records).unwrap();
        let back = read_records(&path).unwrap();
        prop_assert_eq!(&back, &records);
        prop_assert_eq!(csv_bytes(&back), std::fs::read(&path).unwrap());
    }
}

//! Campaign configuration: one JSON document whose keys default to the
//! baseline deployment (256 single-antenna APs, 8 UEs, 1 km², 500 drops).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use cellfree_core::fading::LargeScaleParams;
use cellfree_core::geometry::SimGeometry;
use cellfree_core::pipeline::{CsiModel, MethodSpec, Scenario};
use cellfree_core::zf::transmit_snr;
use cellfree_core::{PowerModelParams, TpcMethod};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::HarnessError;

/// Environment variable consulted when the thread count is `"auto"`.
pub const THREADS_ENV: &str = "CELLFREE_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub area_side_m: f64,
    pub num_aps: usize,
    pub antennas_per_ap: usize,
    pub num_ues: usize,
    pub carrier_hz: f64,
    /// Array element spacing in wavelengths.
    pub antenna_spacing: f64,
    pub bandwidth_hz: f64,
    pub noise_dbm: f64,
    pub pathloss_exponent: f64,
    pub g0_db: f64,
    pub reference_distance_m: f64,
    pub angular_std_deg: f64,
    pub sigma_w_db: f64,
    /// Pilot length; defaults to the number of UEs.
    pub pilot_length: Option<usize>,
    /// Pilot SNR; defaults to the data SNR `ρ`.
    pub pilot_snr: Option<f64>,
    pub max_power_w: f64,
    pub ue_circuit_power_w: f64,
    /// AP and antenna consumption; zero in the baseline. The network-level
    /// study uses 0.0825, 0.1, 0.743 and 0.9 W respectively.
    pub ap_fixed_power_w: f64,
    pub ap_backhaul_power_w: f64,
    pub antenna_fixed_power_w: f64,
    pub antenna_backhaul_power_w: f64,
    /// Per-UE EE weights; defaults to all ones.
    pub weights: Option<Vec<f64>>,
    /// SE floor, bit/s/Hz.
    pub s_r: f64,
    pub methods: Vec<MethodName>,
    /// Fixed-ν runs of the max-min EE inner problem, in addition to `methods`.
    pub nu_grid: Option<Vec<f64>>,
    pub csi: CsiChoice,
    pub num_drops: u64,
    pub master_seed: u64,
    pub thread_count: ThreadCount,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            area_side_m: 1000.0,
            num_aps: 256,
            antennas_per_ap: 1,
            num_ues: 8,
            carrier_hz: 3.5e9,
            antenna_spacing: 0.5,
            bandwidth_hz: 20e6,
            noise_dbm: -92.0,
            pathloss_exponent: 2.0,
            g0_db: -43.3,
            reference_distance_m: 1.0,
            angular_std_deg: 20.0,
            sigma_w_db: 4.0,
            pilot_length: None,
            pilot_snr: None,
            max_power_w: 0.2,
            ue_circuit_power_w: 0.1,
            ap_fixed_power_w: 0.0,
            ap_backhaul_power_w: 0.0,
            antenna_fixed_power_w: 0.0,
            antenna_backhaul_power_w: 0.0,
            weights: None,
            s_r: 5.0,
            methods: TpcMethod::ALL.into_iter().map(MethodName).collect(),
            nu_grid: None,
            csi: CsiChoice::Realized,
            num_drops: 500,
            master_seed: 1,
            thread_count: ThreadCount::Auto,
        }
    }
}

/// A [`TpcMethod`] spelled by name in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodName(pub TpcMethod);

impl Serialize for MethodName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.name())
    }
}

impl<'de> Deserialize<'de> for MethodName {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TpcMethod::from_str(&s)
            .map(MethodName)
            .map_err(|_| de::Error::invalid_value(de::Unexpected::Str(&s), &"MaxPower, MaxMinSE, MaxTotalEE or MaxMinEE"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CsiChoice {
    #[default]
    Realized,
    Statistical,
}

/// Worker count: a positive integer or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThreadCount {
    #[default]
    Auto,
    Fixed(usize),
}

impl ThreadCount {
    /// Resolves `"auto"` through [`THREADS_ENV`], then the machine's parallelism.
    pub fn resolve(self) -> Result<usize, HarnessError> {
        match self {
            ThreadCount::Fixed(n) => Ok(n),
            ThreadCount::Auto => match std::env::var(THREADS_ENV) {
                Ok(v) => match v.trim().parse::<usize>() {
                    Ok(n) if n > 0 => Ok(n),
                    _ => Err(HarnessError::Config(format!("{THREADS_ENV}: expected a positive integer, got {v:?}"))),
                },
                Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
            },
        }
    }
}

impl fmt::Display for ThreadCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThreadCount::Auto => f.write_str("auto"),
            ThreadCount::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for ThreadCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ThreadCount::Auto => s.serialize_str("auto"),
            ThreadCount::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for ThreadCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ThreadVisitor;

        impl Visitor<'_> for ThreadVisitor {
            type Value = ThreadCount;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer or \"auto\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ThreadCount, E> {
                if v == 0 {
                    return Err(E::invalid_value(de::Unexpected::Unsigned(v), &self));
                }
                Ok(ThreadCount::Fixed(v as usize))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ThreadCount, E> {
                if v <= 0 {
                    return Err(E::invalid_value(de::Unexpected::Signed(v), &self));
                }
                Ok(ThreadCount::Fixed(v as usize))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ThreadCount, E> {
                if v.eq_ignore_ascii_case("auto") {
                    Ok(ThreadCount::Auto)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        d.deserialize_any(ThreadVisitor)
    }
}

impl FromStr for ThreadCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ThreadCount::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(ThreadCount::Fixed(n)),
            _ => Err(format!("expected a positive integer or \"auto\", got {s:?}")),
        }
    }
}

impl CampaignConfig {
    /// Parses a JSON document; errors carry the path of the offending key.
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: CampaignConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                HarnessError::Config(e.inner().to_string())
            } else {
                HarnessError::Config(format!("{path}: {}", e.inner()))
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration always serializes")
    }

    /// Data transmit SNR `ρ = P̄ / noise power`.
    pub fn rho(&self) -> f64 {
        transmit_snr(self.max_power_w, self.noise_dbm)
    }

    /// Checks every key the physical model does not already validate, naming it.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |key: &str, why: &str| Err(HarnessError::Config(format!("{key}: {why}")));
        let positive = [
            ("area_side_m", self.area_side_m),
            ("carrier_hz", self.carrier_hz),
            ("antenna_spacing", self.antenna_spacing),
            ("bandwidth_hz", self.bandwidth_hz),
            ("reference_distance_m", self.reference_distance_m),
            ("max_power_w", self.max_power_w),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(key, "must be a positive finite number");
            }
        }
        let non_negative = [
            ("pathloss_exponent", self.pathloss_exponent),
            ("angular_std_deg", self.angular_std_deg),
            ("sigma_w_db", self.sigma_w_db),
            ("ue_circuit_power_w", self.ue_circuit_power_w),
            ("ap_fixed_power_w", self.ap_fixed_power_w),
            ("ap_backhaul_power_w", self.ap_backhaul_power_w),
            ("antenna_fixed_power_w", self.antenna_fixed_power_w),
            ("antenna_backhaul_power_w", self.antenna_backhaul_power_w),
            ("s_r", self.s_r),
        ];
        for (key, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(key, "must be a non-negative finite number");
            }
        }
        if !self.noise_dbm.is_finite() {
            return bad("noise_dbm", "must be finite");
        }
        if !self.g0_db.is_finite() {
            return bad("g0_db", "must be finite");
        }
        for (key, v) in [
            ("num_aps", self.num_aps),
            ("antennas_per_ap", self.antennas_per_ap),
            ("num_ues", self.num_ues),
        ] {
            if v == 0 {
                return bad(key, "must be at least 1");
            }
        }
        if self.num_aps * self.antennas_per_ap < self.num_ues {
            return bad("num_ues", "zero forcing needs num_aps·antennas_per_ap ≥ num_ues");
        }
        if self.num_drops == 0 {
            return bad("num_drops", "must be at least 1");
        }
        if let Some(tau) = self.pilot_length {
            if tau < self.num_ues {
                return bad("pilot_length", "orthogonal pilots need pilot_length ≥ num_ues");
            }
        }
        if let Some(snr) = self.pilot_snr {
            if !(snr >= 0.0 && snr.is_finite()) {
                return bad("pilot_snr", "must be a non-negative finite number");
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.num_ues {
                return bad("weights", "needs exactly num_ues entries");
            }
            if w.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return bad("weights", "entries must be positive");
            }
        }
        if let Some(grid) = &self.nu_grid {
            if grid.iter().any(|v| !(*v > 0.0 && *v <= 1.0)) {
                return bad("nu_grid", "values must lie in (0, 1]");
            }
        }
        if self.methods.is_empty() && self.nu_grid.as_ref().is_none_or(|g| g.is_empty()) {
            return bad("methods", "at least one method or nu_grid value is required");
        }
        Ok(())
    }

    /// The resolved physical model.
    pub fn scenario(&self) -> Result<Scenario, HarnessError> {
        self.validate()?;
        let mut geometry = SimGeometry::new(
            self.area_side_m,
            self.num_aps,
            self.antennas_per_ap,
            self.num_ues,
            self.carrier_hz,
        )
        .map_err(|e| HarnessError::Config(e.to_string()))?;
        geometry.antenna_spacing = self.antenna_spacing;
        let rho = self.rho();
        let scenario = Scenario {
            geometry,
            large_scale: LargeScaleParams {
                g0_db: self.g0_db,
                pathloss_exponent: self.pathloss_exponent,
                reference_distance: self.reference_distance_m,
                shadowing_std_db: self.sigma_w_db,
                angular_std: self.angular_std_deg.to_radians(),
            },
            pilot_length: self.pilot_length.unwrap_or(self.num_ues),
            pilot_snr: self.pilot_snr.unwrap_or(rho),
            rho,
            power: PowerModelParams {
                max_power: self.max_power_w,
                ue_circuit_power: self.ue_circuit_power_w,
                ap_fixed_power: self.ap_fixed_power_w,
                ap_backhaul_power: self.ap_backhaul_power_w,
                antenna_fixed_power: self.antenna_fixed_power_w,
                antenna_backhaul_power: self.antenna_backhaul_power_w,
                bandwidth: self.bandwidth_hz,
                weights: self.weights.clone().unwrap_or_default(),
            },
            se_floor: self.s_r,
            csi: match self.csi {
                CsiChoice::Realized => CsiModel::Realized,
                CsiChoice::Statistical => CsiModel::Statistical,
            },
        };
        scenario.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(scenario)
    }

    /// Method runs per drop: the optimized methods, then one fixed-ν run per grid value.
    pub fn method_specs(&self) -> Vec<MethodSpec> {
        let mut specs: Vec<MethodSpec> = self.methods.iter().map(|m| MethodSpec::Optimize(m.0)).collect();
        if let Some(grid) = &self.nu_grid {
            specs.extend(grid.iter().map(|nu| MethodSpec::FixedNu(*nu)));
        }
        specs
    }
}

/// Record label of a method run; fixed-ν runs read `MaxMinEE[nu=0.7]`.
pub fn method_label(spec: &MethodSpec) -> String {
    match spec {
        MethodSpec::Optimize(m) => m.name().to_string(),
        MethodSpec::FixedNu(nu) => format!("{}[nu={nu}]", TpcMethod::MaxMinEe.name()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_baseline() {
        let c = CampaignConfig::from_json("{}").unwrap();
        assert_eq!(c, CampaignConfig::default());
        let s = c.scenario().unwrap();
        assert_eq!(s.geometry.total_antennas(), 256);
        assert_eq!(s.pilot_length, 8);
        // 0.2 W over −92 dBm.
        assert!((s.rho / (0.2 / 10f64.powf(-12.2)) - 1.0).abs() < 1e-12);
        assert_eq!(c.method_specs().len(), 4);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = CampaignConfig::from_json(r#"{"num_dropz": 3}"#).unwrap_err().to_string();
        assert!(err.contains("num_dropz"), "{err}");
    }

    #[test]
    fn wrong_type_is_named() {
        let err = CampaignConfig::from_json(r#"{"num_ues": "eight"}"#).unwrap_err().to_string();
        assert!(err.contains("num_ues"), "{err}");
        let err = CampaignConfig::from_json(r#"{"methods": ["MaxFoo"]}"#).unwrap_err().to_string();
        assert!(err.contains("methods"), "{err}");
    }

    #[test]
    fn invalid_values_are_named() {
        for (doc, key) in [
            (r#"{"num_drops": 0}"#, "num_drops"),
            (r#"{"pilot_length": 4}"#, "pilot_length"),
            (r#"{"weights": [1, 2]}"#, "weights"),
            (r#"{"nu_grid": [1.5]}"#, "nu_grid"),
            (r#"{"area_side_m": -1}"#, "area_side_m"),
            (r#"{"thread_count": 0}"#, "thread_count"),
        ] {
            let err = CampaignConfig::from_json(doc).unwrap_err().to_string();
            assert!(err.contains(key), "{doc}: {err}");
        }
    }

    #[test]
    fn thread_count_forms() {
        let c = CampaignConfig::from_json(r#"{"thread_count": "auto"}"#).unwrap();
        assert_eq!(c.thread_count, ThreadCount::Auto);
        let c = CampaignConfig::from_json(r#"{"thread_count": 3}"#).unwrap();
        assert_eq!(c.thread_count, ThreadCount::Fixed(3));
        assert_eq!(ThreadCount::Fixed(3).resolve().unwrap(), 3);
        assert_eq!("auto".parse::<ThreadCount>(), Ok(ThreadCount::Auto));
        assert!("0".parse::<ThreadCount>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = CampaignConfig {
            nu_grid: Some(vec![1.0, 0.3]),
            weights: Some(vec![1.0; 8]),
            ..CampaignConfig::default()
        };
        let back = CampaignConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(method_label(&back.method_specs()[5]), "MaxMinEE[nu=0.3]");
    }
}

//! Versioned experiment configuration (TOML).

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circuit::Variant;
use crate::error::{Error, Result};
use crate::noise::{LeakedMeasurement, NoiseModel, SidePolicy, SiteFilter};

pub const CONFIG_VERSION: u32 = 1;

/// Largest physical error rate a sweep accepts.
pub const MAX_P: f64 = 0.2;

/// Initialization leakage: a fixed probability or tied to the gate leakage
/// rate `r * p` of each point.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum InitLeak {
    Fixed(f64),
    #[default]
    Off,
    RTimesP,
}

impl InitLeak {
    pub fn resolve(self, p: f64, r: f64) -> f64 {
        match self {
            InitLeak::Fixed(v) => v,
            InitLeak::Off => 0.0,
            InitLeak::RTimesP => r * p,
        }
    }
}

impl fmt::Display for InitLeak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitLeak::Fixed(v) => write!(f, "{v}"),
            InitLeak::Off => f.write_str("0"),
            InitLeak::RTimesP => f.write_str("r*p"),
        }
    }
}

impl Serialize for InitLeak {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            InitLeak::Fixed(v) => s.serialize_f64(*v),
            InitLeak::Off => s.serialize_f64(0.0),
            InitLeak::RTimesP => s.serialize_str("r*p"),
        }
    }
}

impl<'de> Deserialize<'de> for InitLeak {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(0.0) => Ok(InitLeak::Off),
            Raw::Num(v) => Ok(InitLeak::Fixed(v)),
            Raw::Text(t) if t.replace(' ', "") == "r*p" => Ok(InitLeak::RTimesP),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a probability or \"r*p\", got `{t}`"
            ))),
        }
    }
}

fn default_r() -> f64 {
    1.0
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub variant: Variant,
    pub d: Vec<usize>,
    /// Noisy rounds per shot; defaults to the distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    pub p: Vec<f64>,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default)]
    pub side_policy: SidePolicy,
    #[serde(default)]
    pub site_filter: SiteFilter,
    #[serde(default)]
    pub p_init_leak: InitLeak,
    /// Shots per point, or the shot cap when `target_failures` is set.
    pub shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_failures: Option<u64>,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meas_flip: Option<f64>,
    #[serde(default)]
    pub leaked_meas: LeakedMeasurement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single_qubit_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_idle: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub onset_depolarizes_partner: bool,
}

impl ExperimentConfig {
    /// Minimal config for one variant; everything else at defaults.
    pub fn new(variant: Variant, d: Vec<usize>, p: Vec<f64>, shots: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            version: CONFIG_VERSION,
            variant,
            d,
            rounds: None,
            p,
            r: default_r(),
            side_policy: SidePolicy::default(),
            site_filter: SiteFilter::default(),
            p_init_leak: InitLeak::Off,
            shots,
            target_failures: None,
            master_seed,
            output: None,
            workers: default_workers(),
            meas_flip: None,
            leaked_meas: LeakedMeasurement::default(),
            single_qubit_scale: None,
            p_idle: None,
            onset_depolarizes_partner: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .and_then(|span| {
                    let start = text[..span.start].rfind('\n').map_or(0, |i| i + 1);
                    let line = &text[start..];
                    let line = line.split('\n').next().unwrap_or("");
                    line.split_once('=').map(|(key, _)| key.trim().to_string())
                })
                .filter(|k| !k.is_empty())
                .or_else(|| e.message().split('`').nth(1).map(str::to_string))
                .unwrap_or_else(|| "config".to_string());
            Error::config(field, e.message().trim().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn rounds_for(&self, d: usize) -> usize {
        self.rounds.unwrap_or(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::config(
                "version",
                format!(
                    "unsupported version {}, expected {CONFIG_VERSION}",
                    self.version
                ),
            ));
        }
        if self.d.is_empty() {
            return Err(Error::config("d", "at least one distance required"));
        }
        for &d in &self.d {
            if d < 3 || d % 2 == 0 {
                return Err(Error::config(
                    "d",
                    format!("{d} must be odd and at least 3"),
                ));
            }
        }
        if self.rounds == Some(0) {
            return Err(Error::config("rounds", "must be at least 1"));
        }
        if self.p.is_empty() {
            return Err(Error::config("p", "at least one error rate required"));
        }
        for &p in &self.p {
            if !(p.is_finite() && (0.0..=MAX_P).contains(&p)) {
                return Err(Error::config("p", format!("{p} outside [0, {MAX_P}]")));
            }
        }
        if self.shots == 0 {
            return Err(Error::config("shots", "must be at least 1"));
        }
        if self.target_failures == Some(0) {
            return Err(Error::config("target_failures", "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if let InitLeak::Fixed(v) = self.p_init_leak {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(
                    "p_init_leak",
                    format!("{v} is not a probability"),
                ));
            }
        }
        for &p in &self.p {
            self.noise_at(p).validate()?;
        }
        Ok(())
    }

    /// Noise model of the point with physical error rate `p`.
    pub fn noise_at(&self, p: f64) -> NoiseModel {
        NoiseModel {
            p,
            r: self.r,
            side_policy: self.side_policy,
            site_filter: self.site_filter,
            p_init_leak: self.p_init_leak.resolve(p, self.r),
            meas_flip: self.meas_flip,
            leaked_meas: self.leaked_meas,
            single_qubit_scale: self.single_qubit_scale.unwrap_or(1.0),
            p_idle: self.p_idle.unwrap_or(0.0),
            onset_depolarizes_partner: self.onset_depolarizes_partner,
        }
    }
}

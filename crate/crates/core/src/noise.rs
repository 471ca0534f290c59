//! Depolarizing leakage noise model.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{FaultLocation, GateKind, GateTag, Role};
use crate::error::{Error, Result};
use crate::rng::Prob;

/// Which operand of a two-qubit gate may leak.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SidePolicy {
    #[default]
    TwoSided,
    /// Only the first operand: the control of a CNOT, the data side of an
    /// LRC swap, the qubit itself for single-qubit gates.
    ControlOnly,
}

impl SidePolicy {
    pub fn name(self) -> &'static str {
        match self {
            SidePolicy::TwoSided => "two_sided",
            SidePolicy::ControlOnly => "control_only",
        }
    }
}

impl fmt::Display for SidePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SidePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_sided" => Ok(SidePolicy::TwoSided),
            "control_only" => Ok(SidePolicy::ControlOnly),
            _ => Err(Error::config(
                "side_policy",
                format!("unknown policy `{s}`"),
            )),
        }
    }
}

/// Restricts where leakage may occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SiteFilter {
    #[default]
    All,
    /// Only qubits holding a data state may leak.
    DataOnly,
    /// Only qubits holding an ancilla (or spare) state may leak.
    AncillaOnly,
    /// Only the check CNOT with this ordinal (1-4) leaks; no other gate and
    /// no preparation does.
    CnotOrdinal(u8),
}

impl SiteFilter {
    /// Whether a qubit with `role` may leak at the gate described by `loc`.
    pub fn admits(self, loc: &FaultLocation, role: Role) -> bool {
        match self {
            SiteFilter::All => true,
            SiteFilter::DataOnly => role.is_data(),
            SiteFilter::AncillaOnly => !role.is_data(),
            SiteFilter::CnotOrdinal(k) => {
                loc.kind == GateKind::Cnot && loc.tag == GateTag::CheckCnot && loc.cnot_ordinal == k
            }
        }
    }
}

impl fmt::Display for SiteFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteFilter::All => f.write_str("all"),
            SiteFilter::DataOnly => f.write_str("data_only"),
            SiteFilter::AncillaOnly => f.write_str("ancilla_only"),
            SiteFilter::CnotOrdinal(k) => write!(f, "cnot_ordinal({k})"),
        }
    }
}

impl FromStr for SiteFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config("site_filter", format!("unknown site filter `{s}`"));
        match s {
            "all" => Ok(SiteFilter::All),
            "data_only" => Ok(SiteFilter::DataOnly),
            "ancilla_only" => Ok(SiteFilter::AncillaOnly),
            _ => {
                let k: u8 = s
                    .strip_prefix("cnot_ordinal(")
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(bad)?
                    .trim()
                    .parse()
                    .map_err(|_| bad())?;
                if !(1..=4).contains(&k) {
                    return Err(Error::config(
                        "site_filter",
                        format!("cnot ordinal {k} not in 1..=4"),
                    ));
                }
                Ok(SiteFilter::CnotOrdinal(k))
            }
        }
    }
}

impl TryFrom<String> for SiteFilter {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SiteFilter> for String {
    fn from(f: SiteFilter) -> String {
        f.to_string()
    }
}

/// What a measurement of a leaked qubit reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakedMeasurement {
    #[default]
    RandomBit,
    FixedOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseModel {
    /// Depolarizing probability per gate.
    pub p: f64,
    /// Leakage probability per gate as a multiple of `p`.
    pub r: f64,
    pub side_policy: SidePolicy,
    pub site_filter: SiteFilter,
    pub p_init_leak: f64,
    /// Classical flip probability of an unleaked measurement; `None` means `p`.
    pub meas_flip: Option<f64>,
    pub leaked_meas: LeakedMeasurement,
    /// Single-qubit gate error and leakage rates relative to two-qubit gates.
    pub single_qubit_scale: f64,
    /// Depolarizing probability for a qubit that sits out a timestep.
    pub p_idle: f64,
    /// Also depolarize the partner at the gate where leakage starts, not only
    /// at later gates.
    pub onset_depolarizes_partner: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p: 0.0,
            r: 1.0,
            side_policy: SidePolicy::TwoSided,
            site_filter: SiteFilter::All,
            p_init_leak: 0.0,
            meas_flip: None,
            leaked_meas: LeakedMeasurement::RandomBit,
            single_qubit_scale: 1.0,
            p_idle: 0.0,
            onset_depolarizes_partner: false,
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            r: 0.0,
            ..NoiseModel::default()
        }
    }

    pub fn depolarizing(p: f64) -> Self {
        NoiseModel {
            p,
            r: 0.0,
            ..NoiseModel::default()
        }
    }

    pub fn with_leakage(p: f64, r: f64, side_policy: SidePolicy, site_filter: SiteFilter) -> Self {
        NoiseModel {
            p,
            r,
            side_policy,
            site_filter,
            ..NoiseModel::default()
        }
    }

    pub fn p_leak(&self) -> f64 {
        self.r * self.p
    }

    pub fn meas_flip(&self) -> f64 {
        self.meas_flip.unwrap_or(self.p)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |field: &'static str, v: f64| {
            if v.is_finite() && (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::config(field, format!("{v} is not a probability")))
            }
        };
        unit("p", self.p)?;
        unit("p_init_leak", self.p_init_leak)?;
        unit("meas_flip", self.meas_flip())?;
        unit("p_idle", self.p_idle)?;
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(Error::config(
                "r",
                format!("{} must be non-negative", self.r),
            ));
        }
        if !(self.single_qubit_scale.is_finite() && self.single_qubit_scale >= 0.0) {
            return Err(Error::config("single_qubit_scale", "must be non-negative"));
        }
        unit("p_leak", self.p_leak())?;
        unit("single-qubit p", self.p * self.single_qubit_scale)?;
        unit(
            "single-qubit p_leak",
            self.p_leak() * self.single_qubit_scale,
        )?;
        if let SiteFilter::CnotOrdinal(k) = self.site_filter {
            if !(1..=4).contains(&k) {
                return Err(Error::config(
                    "site_filter",
                    format!("cnot ordinal {k} not in 1..=4"),
                ));
            }
        }
        Ok(())
    }

    /// Thresholds used by the simulator's inner loop.
    pub fn rates(&self) -> Rates {
        Rates {
            two_qubit: Prob::new(self.p),
            two_qubit_leak: Prob::new(self.p_leak()),
            single_qubit: Prob::new(self.p * self.single_qubit_scale),
            single_qubit_leak: Prob::new(self.p_leak() * self.single_qubit_scale),
            prep: Prob::new(self.p),
            init_leak: Prob::new(self.p_init_leak),
            meas_flip: Prob::new(self.meas_flip()),
            idle: Prob::new(self.p_idle),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rates {
    pub two_qubit: Prob,
    pub two_qubit_leak: Prob,
    pub single_qubit: Prob,
    pub single_qubit_leak: Prob,
    pub prep: Prob,
    pub init_leak: Prob,
    pub meas_flip: Prob,
    pub idle: Prob,
}

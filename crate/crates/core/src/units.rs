//! Unit-carrying newtypes.
//!
//! Frequencies are always GHz, distances meters and losses dB at every public
//! boundary of this crate. The 161.04 dB constant in the 3GPP NLOS formula is
//! a leftover of a MHz to GHz shift, so mixing units is a real hazard here.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Lower edge of the frequency span the CI models are declared valid for.
pub const CI_MIN_FREQ_GHZ: f64 = 0.5;
/// Upper edge of the frequency span the CI models are declared valid for.
pub const CI_MAX_FREQ_GHZ: f64 = 100.0;

/// Carrier frequency in GHz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FrequencyGHz(f64);

impl FrequencyGHz {
    pub fn new(ghz: f64) -> Result<Self> {
        require_positive("carrier frequency (GHz)", ghz).map(Self)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn hz(self) -> f64 {
        self.0 * 1e9
    }

    /// Whether the frequency lies in 0.5-100 GHz. Values outside are usable
    /// but should be reported as a range warning.
    pub fn in_ci_validity_span(self) -> bool {
        (CI_MIN_FREQ_GHZ..=CI_MAX_FREQ_GHZ).contains(&self.0)
    }
}

impl TryFrom<f64> for FrequencyGHz {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FrequencyGHz> for f64 {
    fn from(f: FrequencyGHz) -> f64 {
        f.0
    }
}

impl fmt::Display for FrequencyGHz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} GHz", self.0)
    }
}

/// Separation distance in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DistanceM(f64);

impl DistanceM {
    pub fn new(meters: f64) -> Result<Self> {
        require_positive("distance (m)", meters).map(Self)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for DistanceM {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DistanceM> for f64 {
    fn from(d: DistanceM) -> f64 {
        d.0
    }
}

impl fmt::Display for DistanceM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} m", self.0)
    }
}

/// Path loss in dB.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathLossDb(pub f64);

impl PathLossDb {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for PathLossDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2} dB", self.0)
    }
}

/// Propagation condition of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Environment {
    #[serde(rename = "LOS")]
    Los,
    #[serde(rename = "NLOS")]
    Nlos,
}

impl Environment {
    pub fn as_str(self) -> &'static str {
        match self {
            Environment::Los => "LOS",
            Environment::Nlos => "NLOS",
        }
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Environment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "LOS" => Ok(Environment::Los),
            "NLOS" => Ok(Environment::Nlos),
            other => Err(format!("unknown environment {other:?}, expected LOS or NLOS")),
        }
    }
}

//! Applicability reporting for the 3GPP RMa models.
//!
//! A distance outside the tabulated span is a hard violation. Parameters or
//! frequencies outside their stated ranges are soft warnings, so the 3GPP
//! model can still be evaluated at mmWave for comparison with the CI model.

use std::fmt;

use serde::Serialize;

use crate::model::{rma_distance_span, RmaParams};
use crate::units::{DistanceM, Environment, FrequencyGHz, CI_MAX_FREQ_GHZ, CI_MIN_FREQ_GHZ};

/// Frequency range the 3GPP RMa models claim, GHz.
pub const RMA_FREQ_RANGE_GHZ: (f64, f64) = (0.8, 30.0);

pub const H_RANGE_M: (f64, f64) = (5.0, 50.0);
pub const W_RANGE_M: (f64, f64) = (5.0, 50.0);
pub const H_BS_RANGE_M: (f64, f64) = (10.0, 150.0);
pub const H_UT_RANGE_M: (f64, f64) = (1.0, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    HardViolation,
    SoftWarning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Distance,
    BuildingHeight,
    StreetWidth,
    BaseStationHeight,
    UserTerminalHeight,
    RmaFrequencyRange,
    CiFrequencySpan,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub check: Check,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::HardViolation => "violation",
            Severity::SoftWarning => "warning",
        };
        write!(f, "{tag}: {:?} = {} outside [{}, {}]", self.check, self.value, self.min, self.max)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn hard_violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::HardViolation)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::SoftWarning)
    }

    pub fn has_hard_violation(&self) -> bool {
        self.hard_violations().next().is_some()
    }

    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Checks a 3GPP RMa evaluation point against the model's applicability table.
/// Ranges are treated as closed intervals.
pub fn validate_applicability(
    params: &RmaParams,
    d2d: DistanceM,
    fc: FrequencyGHz,
    env: Environment,
) -> ValidationReport {
    let mut findings = Vec::new();
    let mut check = |severity, check, value: f64, (min, max): (f64, f64)| {
        if !(min..=max).contains(&value) {
            findings.push(Finding { severity, check, value, min, max });
        }
    };

    check(Severity::HardViolation, Check::Distance, d2d.value(), rma_distance_span(env));
    check(Severity::SoftWarning, Check::BuildingHeight, params.building_height, H_RANGE_M);
    check(Severity::SoftWarning, Check::StreetWidth, params.street_width, W_RANGE_M);
    check(Severity::SoftWarning, Check::BaseStationHeight, params.h_bs, H_BS_RANGE_M);
    check(Severity::SoftWarning, Check::UserTerminalHeight, params.h_ut, H_UT_RANGE_M);
    check(Severity::SoftWarning, Check::RmaFrequencyRange, fc.value(), RMA_FREQ_RANGE_GHZ);
    check(
        Severity::SoftWarning,
        Check::CiFrequencySpan,
        fc.value(),
        (CI_MIN_FREQ_GHZ, CI_MAX_FREQ_GHZ),
    );

    ValidationReport { findings }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz(v: f64) -> FrequencyGHz {
        FrequencyGHz::new(v).unwrap()
    }

    fn m(v: f64) -> DistanceM {
        DistanceM::new(v).unwrap()
    }

    #[test]
    fn defaults_at_28_ghz_are_clean() {
        let r = validate_applicability(&RmaParams::default(), m(1000.0), ghz(28.0), Environment::Los);
        assert!(r.is_clean(), "{:?}", r);
    }

    #[test]
    fn beyond_10_km_los_is_hard() {
        let r = validate_applicability(&RmaParams::default(), m(20_000.0), ghz(28.0), Environment::Los);
        let hard: Vec<_> = r.hard_violations().collect();
        assert_eq!(hard.len(), 1);
        assert_eq!(hard[0].check, Check::Distance);
        assert_eq!(hard[0].max, 10_000.0);
    }

    #[test]
    fn nlos_span_ends_at_5_km() {
        let p = RmaParams::default();
        assert!(validate_applicability(&p, m(5_000.0), ghz(2.0), Environment::Nlos).is_clean());
        assert!(validate_applicability(&p, m(6_000.0), ghz(2.0), Environment::Nlos).has_hard_violation());
        assert!(!validate_applicability(&p, m(6_000.0), ghz(2.0), Environment::Los).has_hard_violation());
    }

    #[test]
    fn mmwave_is_a_soft_warning_only() {
        let r = validate_applicability(&RmaParams::default(), m(1000.0), ghz(73.5), Environment::Nlos);
        assert!(!r.has_hard_violation());
        let w: Vec<_> = r.warnings().map(|f| f.check).collect();
        assert_eq!(w, vec![Check::RmaFrequencyRange]);
    }

    #[test]
    fn out_of_range_parameters_warn() {
        let p = RmaParams::new(200.0, 0.5, 60.0, 2.0).unwrap();
        let r = validate_applicability(&p, m(100.0), ghz(150.0), Environment::Los);
        assert!(!r.has_hard_violation());
        assert_eq!(r.warnings().count(), 6);
    }
}

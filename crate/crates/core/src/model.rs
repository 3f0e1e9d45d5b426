//! Deterministic path loss equations.
//!
//! * Friis free space path loss with the exact `4π/c` constant.
//! * The close-in (CI) free space reference distance model anchored at 1 m,
//!   using the rounded 32.4 dB anchor so fitted exponents line up with the
//!   published CI forms.
//! * The 3GPP TR 38.900 rural macrocell (RMa) LOS dual-slope model, its
//!   breakpoint distance and the NLOS model with its LOS lower bound.
//!
//! The 3GPP models are written in terms of the 3D distance while their
//! applicability table is given in 2D distance. The `*_mean` functions take
//! `d_3D`; the `*_from_2d` variants range-check `d_2D` and then evaluate at
//! `d_3D`.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::units::{DistanceM, Environment, FrequencyGHz, PathLossDb};

/// Speed of light used throughout, m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Rounded FSPL at 1 m and 1 GHz used as the CI anchor.
pub const CI_ANCHOR_DB: f64 = 32.4;

/// Upper end of the 3GPP RMa LOS distance span.
pub const RMA_LOS_MAX_M: f64 = 10_000.0;
/// Upper end of the 3GPP RMa NLOS distance span.
pub const RMA_NLOS_MAX_M: f64 = 5_000.0;
/// Lower end of both 3GPP RMa distance spans.
pub const RMA_MIN_M: f64 = 10.0;

/// Shadow fading std dev of the LOS model before the breakpoint.
pub const RMA_LOS_SIGMA_PRE_BP_DB: f64 = 4.0;
/// Shadow fading std dev of the LOS model after the breakpoint.
pub const RMA_LOS_SIGMA_POST_BP_DB: f64 = 6.0;
/// Shadow fading std dev of the NLOS model.
pub const RMA_NLOS_SIGMA_DB: f64 = 8.0;

/// Exact `20·log10(4π·10⁹/c)`, the FSPL at 1 m and 1 GHz.
pub fn fspl_1m_1ghz_exact() -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * 1e9 / SPEED_OF_LIGHT).log10()
}

/// Friis free space path loss, `20·log10(4π·f·d/c)`.
pub fn fspl_exact(fc: FrequencyGHz, d: DistanceM) -> PathLossDb {
    PathLossDb(20.0 * (4.0 * std::f64::consts::PI * fc.hz() * d.value() / SPEED_OF_LIGHT).log10())
}

/// Mean CI path loss `32.4 + 10·n·log10(d) + 20·log10(fc)`, valid for `d ≥ 1 m`.
pub fn ci_mean_pathloss(fc: FrequencyGHz, d: DistanceM, ple: f64) -> Result<PathLossDb> {
    require_positive("path loss exponent", ple)?;
    if d.value() < 1.0 {
        return Err(Error::Domain {
            quantity: "CI distance (m)",
            requirement: "at least the 1 m reference distance",
            value: d.value(),
        });
    }
    Ok(PathLossDb(
        CI_ANCHOR_DB + 10.0 * ple * d.value().log10() + 20.0 * fc.value().log10(),
    ))
}

/// Distance where the LOS model changes slope, `2π·h_BS·h_UT·f/c`.
pub fn breakpoint_distance(h_bs: f64, h_ut: f64, fc: FrequencyGHz) -> Result<DistanceM> {
    let h_bs = require_positive("base station height (m)", h_bs)?;
    let h_ut = require_positive("user terminal height (m)", h_ut)?;
    DistanceM::new(2.0 * std::f64::consts::PI * h_bs * h_ut * fc.hz() / SPEED_OF_LIGHT)
}

/// `sqrt(d_2D² + (h_BS − h_UT)²)`.
pub fn distance_3d(d2d: DistanceM, h_bs: f64, h_ut: f64) -> Result<DistanceM> {
    let h_bs = require_positive("base station height (m)", h_bs)?;
    let h_ut = require_positive("user terminal height (m)", h_ut)?;
    DistanceM::new(d2d.value().hypot(h_bs - h_ut))
}

/// Environment parameters of the 3GPP RMa models.
///
/// Construction only requires positive values. Whether the values sit in the
/// model's applicability ranges is reported by
/// [`validate_applicability`](crate::applicability::validate_applicability).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmaParams {
    /// Base station height, m.
    pub h_bs: f64,
    /// User terminal height, m.
    pub h_ut: f64,
    /// Average street width, m.
    pub street_width: f64,
    /// Average building height, m.
    pub building_height: f64,
}

impl RmaParams {
    pub fn new(h_bs: f64, h_ut: f64, street_width: f64, building_height: f64) -> Result<Self> {
        Ok(Self {
            h_bs: require_positive("base station height (m)", h_bs)?,
            h_ut: require_positive("user terminal height (m)", h_ut)?,
            street_width: require_positive("street width (m)", street_width)?,
            building_height: require_positive("building height (m)", building_height)?,
        })
    }

    pub fn breakpoint(&self, fc: FrequencyGHz) -> DistanceM {
        breakpoint_distance(self.h_bs, self.h_ut, fc).expect("heights validated at construction")
    }

    pub fn distance_3d(&self, d2d: DistanceM) -> DistanceM {
        distance_3d(d2d, self.h_bs, self.h_ut).expect("heights validated at construction")
    }

    /// Whether the LOS model degenerates to its first slope over the whole
    /// distance span because the breakpoint lies beyond 10 km.
    pub fn is_single_slope(&self, fc: FrequencyGHz) -> bool {
        self.breakpoint(fc).value() >= RMA_LOS_MAX_M
    }
}

impl Default for RmaParams {
    /// Default RMa values: h_BS = 35 m, h_UT = 1.5 m, W = 20 m, h = 5 m.
    fn default() -> Self {
        Self {
            h_bs: 35.0,
            h_ut: 1.5,
            street_width: 20.0,
            building_height: 5.0,
        }
    }
}

/// Inclusive 2D/3D distance span of the 3GPP model for `env`.
pub fn rma_distance_span(env: Environment) -> (f64, f64) {
    match env {
        Environment::Los => (RMA_MIN_M, RMA_LOS_MAX_M),
        Environment::Nlos => (RMA_MIN_M, RMA_NLOS_MAX_M),
    }
}

fn check_span(model: &'static str, env: Environment, d: DistanceM) -> Result<()> {
    let (min_m, max_m) = rma_distance_span(env);
    if (min_m..=max_m).contains(&d.value()) {
        Ok(())
    } else {
        Err(Error::Applicability {
            model,
            distance_m: d.value(),
            min_m,
            max_m,
        })
    }
}

fn los_first_slope(p: &RmaParams, d3d: f64, fc: f64) -> f64 {
    let h172 = p.building_height.powf(1.72);
    20.0 * (40.0 * std::f64::consts::PI * d3d * fc / 3.0).log10()
        + (0.03 * h172).min(10.0) * d3d.log10()
        - (0.044 * h172).min(14.77)
        + 0.002 * p.building_height.log10() * d3d
}

fn los_second_slope(p: &RmaParams, d3d: f64, d_bp: f64, fc: f64) -> f64 {
    los_first_slope(p, d_bp, fc) + 40.0 * (d3d / d_bp).log10()
}

/// Difference between the two LOS slopes evaluated at the breakpoint, dB.
/// Zero analytically; exposed so the continuity of the dual-slope model can
/// be checked numerically.
pub fn rma_los_breakpoint_gap(params: &RmaParams, fc: FrequencyGHz) -> f64 {
    let d_bp = params.breakpoint(fc).value();
    los_second_slope(params, d_bp, d_bp, fc.value()) - los_first_slope(params, d_bp, fc.value())
}

/// Which LOS slope applies at a given distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LosSlope {
    BeforeBreakpoint,
    AfterBreakpoint,
}

impl LosSlope {
    pub fn shadow_fading_sigma_db(self) -> f64 {
        match self {
            LosSlope::BeforeBreakpoint => RMA_LOS_SIGMA_PRE_BP_DB,
            LosSlope::AfterBreakpoint => RMA_LOS_SIGMA_POST_BP_DB,
        }
    }
}

/// Slope selection of the LOS model. A breakpoint at or beyond 10 km makes the
/// first slope apply everywhere.
pub fn rma_los_slope(params: &RmaParams, d3d: DistanceM, fc: FrequencyGHz) -> LosSlope {
    let d_bp = params.breakpoint(fc).value();
    if d_bp >= RMA_LOS_MAX_M || d3d.value() <= d_bp {
        LosSlope::BeforeBreakpoint
    } else {
        LosSlope::AfterBreakpoint
    }
}

pub(crate) fn los_mean_unchecked(params: &RmaParams, d3d: DistanceM, fc: FrequencyGHz) -> f64 {
    let f = fc.value();
    match rma_los_slope(params, d3d, fc) {
        LosSlope::BeforeBreakpoint => los_first_slope(params, d3d.value(), f),
        LosSlope::AfterBreakpoint => los_second_slope(params, d3d.value(), params.breakpoint(fc).value(), f),
    }
}

/// Raw NLOS expression without the LOS lower bound.
pub fn rma_nlos_raw(params: &RmaParams, d3d: DistanceM, fc: FrequencyGHz) -> PathLossDb {
    let RmaParams {
        h_bs,
        h_ut,
        street_width: w,
        building_height: h,
    } = *params;
    PathLossDb(
        161.04 - 7.1 * w.log10() + 7.5 * h.log10()
            - (24.37 - 3.7 * (h / h_bs).powi(2)) * h_bs.log10()
            + (43.42 - 3.1 * h_bs.log10()) * (d3d.value().log10() - 3.0)
            + 20.0 * fc.value().log10()
            - (3.2 * (11.75 * h_ut).log10().powi(2) - 4.97),
    )
}

pub(crate) fn nlos_mean_unchecked(params: &RmaParams, d3d: DistanceM, fc: FrequencyGHz) -> f64 {
    los_mean_unchecked(params, d3d, fc).max(rma_nlos_raw(params, d3d, fc).value())
}

/// Mean 3GPP RMa LOS path loss at 3D distance `d3d` (10 m to 10 km).
pub fn rma3gpp_los_mean(params: &RmaParams, d3d: DistanceM, fc: FrequencyGHz) -> Result<PathLossDb> {
    check_span("3GPP RMa LOS", Environment::Los, d3d)?;
    Ok(PathLossDb(los_mean_unchecked(params, d3d, fc)))
}

/// Mean 3GPP RMa NLOS path loss at 3D distance `d3d` (10 m to 5 km),
/// bounded below by the LOS model.
pub fn rma3gpp_nlos_mean(params: &RmaParams, d3d: DistanceM, fc: FrequencyGHz) -> Result<PathLossDb> {
    check_span("3GPP RMa NLOS", Environment::Nlos, d3d)?;
    Ok(PathLossDb(nlos_mean_unchecked(params, d3d, fc)))
}

/// Mean 3GPP RMa path loss for a 2D separation: the span check runs on `d2d`,
/// the model is evaluated at the corresponding 3D distance.
pub fn rma3gpp_mean_from_2d(
    params: &RmaParams,
    env: Environment,
    d2d: DistanceM,
    fc: FrequencyGHz,
) -> Result<PathLossDb> {
    let model = match env {
        Environment::Los => "3GPP RMa LOS",
        Environment::Nlos => "3GPP RMa NLOS",
    };
    check_span(model, env, d2d)?;
    let d3d = params.distance_3d(d2d);
    Ok(PathLossDb(match env {
        Environment::Los => los_mean_unchecked(params, d3d, fc),
        Environment::Nlos => nlos_mean_unchecked(params, d3d, fc),
    }))
}

/// Shadow fading std dev the 3GPP model attaches to a point.
pub fn rma3gpp_sigma_db(params: &RmaParams, env: Environment, d3d: DistanceM, fc: FrequencyGHz) -> f64 {
    match env {
        Environment::Los => rma_los_slope(params, d3d, fc).shadow_fading_sigma_db(),
        Environment::Nlos => RMA_NLOS_SIGMA_DB,
    }
}

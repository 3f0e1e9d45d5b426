//! Minimum mean square error fitting of the CI model.
//!
//! With `A = PL − 32.4 − 20·log10(fc)` and `B = 10·log10(d)` the CI model is
//! `A = n·B + χ`, so the exponent minimizing `Σ(A − n·B)²` is
//! `n = ΣAB / ΣB²` and σ is the root mean square residual. Sums over the
//! 450 000-point datasets use Neumaier compensated summation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CI_ANCHOR_DB;
use crate::stochastic::{generate_3gpp_dataset, DistanceSampling, PathLossSample, SimulationConfig};
use crate::units::Environment;

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Excess loss over the 1 m anchor, `PL − 32.4 − 20·log10(fc)`.
pub fn excess_over_anchor(s: &PathLossSample) -> f64 {
    s.pl_db.value() - CI_ANCHOR_DB - 20.0 * s.fc.value().log10()
}

/// `10·log10(d)`.
pub fn log_distance_term(s: &PathLossSample) -> f64 {
    10.0 * s.d.value().log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiFitResult {
    pub n: f64,
    pub sigma_db: f64,
    pub count: usize,
    pub mean_residual_db: f64,
    pub environment: Environment,
}

/// Closed-form MMSE CI fit.
///
/// All samples must share one environment and have `d ≥ 1 m`. Frequencies may
/// be mixed freely; the frequency dependence is carried by the anchor term.
pub fn fit_ci(samples: &[PathLossSample]) -> Result<CiFitResult> {
    if samples.len() < 2 {
        return Err(Error::DegenerateFit("at least two samples are required"));
    }
    let environment = samples[0].environment;
    if samples.iter().any(|s| s.environment != environment) {
        return Err(Error::MixedEnvironments);
    }
    if let Some(s) = samples.iter().find(|s| s.d.value() < 1.0) {
        return Err(Error::Domain {
            quantity: "CI distance (m)",
            requirement: "at least the 1 m reference distance",
            value: s.d.value(),
        });
    }

    let mut sab = CompensatedSum::default();
    let mut sbb = CompensatedSum::default();
    for s in samples {
        let (a, b) = (excess_over_anchor(s), log_distance_term(s));
        sab.add(a * b);
        sbb.add(b * b);
    }
    if sbb.value() == 0.0 {
        return Err(Error::DegenerateFit("all samples sit at the 1 m reference distance"));
    }
    let n = sab.value() / sbb.value();
    let stats = residual_stats(samples, n)?;
    Ok(CiFitResult {
        n,
        sigma_db: stats.std_db,
        count: samples.len(),
        mean_residual_db: stats.mean_db,
        environment,
    })
}

/// Fits each environment present in `samples` separately.
pub fn fit_ci_by_environment(samples: &[PathLossSample]) -> Result<Vec<CiFitResult>> {
    let mut groups: BTreeMap<Environment, Vec<PathLossSample>> = BTreeMap::new();
    for s in samples {
        groups.entry(s.environment).or_default().push(*s);
    }
    groups.values().map(|g| fit_ci(g)).collect()
}

/// Summary of the residuals `A − n·B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub count: usize,
    pub mean_db: f64,
    /// Root mean square residual (population convention, about zero). The CI
    /// model has no free intercept, so the residual mean is generally not
    /// zero and this is the quantity the MMSE fit minimizes.
    pub std_db: f64,
    pub min_db: f64,
    pub max_db: f64,
}

pub fn residual_stats(samples: &[PathLossSample], n: f64) -> Result<ResidualReport> {
    if samples.is_empty() {
        return Err(Error::Domain {
            quantity: "sample count",
            requirement: "at least one",
            value: 0.0,
        });
    }
    let mut sum = CompensatedSum::default();
    let mut sq = CompensatedSum::default();
    let (mut min_db, mut max_db) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in samples {
        let r = excess_over_anchor(s) - n * log_distance_term(s);
        sum.add(r);
        sq.add(r * r);
        min_db = min_db.min(r);
        max_db = max_db.max(r);
    }
    let count = samples.len() as f64;
    Ok(ResidualReport {
        count: samples.len(),
        mean_db: sum.value() / count,
        std_db: (sq.value() / count).sqrt(),
        min_db,
        max_db,
    })
}

/// Sum of squared residuals at exponent `n`.
pub fn sum_squared_residuals(samples: &[PathLossSample], n: f64) -> f64 {
    samples
        .iter()
        .map(|s| (excess_over_anchor(s) - n * log_distance_term(s)).powi(2))
        .collect::<CompensatedSum>()
        .value()
}

/// Generates the reference 3GPP RMa Monte Carlo dataset for `environment`
/// and fits the CI model to it.
pub fn reproduce_3gpp_ci(environment: Environment, seed: u64) -> Result<CiFitResult> {
    reproduce_with(&SimulationConfig::reference(environment, seed))
}

pub fn reproduce_with(config: &SimulationConfig) -> Result<CiFitResult> {
    let data = generate_3gpp_dataset(config)?;
    let samples: Vec<PathLossSample> = data.into_iter().map(|s| s.sample).collect();
    fit_ci(&samples)
}

/// Where the fitted samples came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitSource {
    #[serde(rename = "3gpp-monte-carlo")]
    MonteCarlo3gpp,
    #[serde(rename = "campaign")]
    Campaign,
}

/// JSON fit report, one per environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub environment: Environment,
    pub n: f64,
    pub sigma_db: f64,
    pub count: usize,
    pub mean_residual_db: f64,
    pub source: FitSource,
    pub seed: Option<u64>,
    pub sampling_mode: Option<DistanceSampling>,
}

impl FitReport {
    pub fn new(fit: &CiFitResult, source: FitSource, seed: Option<u64>, sampling_mode: Option<DistanceSampling>) -> Self {
        Self {
            environment: fit.environment,
            n: fit.n,
            sigma_db: fit.sigma_db,
            count: fit.count,
            mean_residual_db: fit.mean_residual_db,
            source,
            seed,
            sampling_mode,
        }
    }
}

//! Shadow fading and Monte Carlo generation of 3GPP RMa path loss datasets.
//!
//! Every sample draws from its own position of a ChaCha8 keystream: the stream
//! id is the frequency index and the word offset is derived from the sample
//! index. Samples can therefore be generated in any order or on any number of
//! threads and still come out bit-identical, and the draws of one frequency do
//! not depend on how many samples any other frequency asks for.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{los_mean_unchecked, nlos_mean_unchecked, rma3gpp_sigma_db, rma_distance_span, RmaParams};
use crate::units::{DistanceM, Environment, FrequencyGHz, PathLossDb};

/// Carrier frequencies of the reference Monte Carlo run, GHz.
pub const REFERENCE_FREQUENCIES_GHZ: [f64; 9] = [1.0, 2.0, 6.0, 15.0, 28.0, 38.0, 60.0, 73.0, 100.0];
/// Samples per frequency of the reference Monte Carlo run.
pub const REFERENCE_SAMPLES_PER_FREQUENCY: usize = 50_000;

/// 32-bit keystream words reserved for each sample. A sample uses two f64
/// draws for the distance and the normal variate; the rest is headroom for
/// ziggurat rejections.
const WORDS_PER_SAMPLE: u128 = 64;

/// Header of the exported dataset CSV.
pub const DATASET_HEADER: [&str; 7] = ["fc_ghz", "d2d_m", "d3d_m", "env", "pl_db", "seed", "sampling_mode"];

/// One draw from `Normal(0, sigma_db²)`. `sigma_db = 0` returns exactly 0.
pub fn sample_shadow_fading<R: Rng + ?Sized>(sigma_db: f64, rng: &mut R) -> Result<f64> {
    if !(sigma_db >= 0.0 && sigma_db.is_finite()) {
        return Err(Error::Domain {
            quantity: "shadow fading sigma (dB)",
            requirement: "finite and non-negative",
            value: sigma_db,
        });
    }
    if sigma_db == 0.0 {
        return Ok(0.0);
    }
    let normal = Normal::new(0.0, sigma_db).expect("sigma checked above");
    Ok(normal.sample(rng))
}

/// How random 2D distances are drawn over `[d2d_min, d2d_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DistanceSampling {
    #[default]
    #[serde(rename = "uniform-linear")]
    UniformLinear,
    #[serde(rename = "uniform-log")]
    UniformLog,
}

impl DistanceSampling {
    pub fn as_str(self) -> &'static str {
        match self {
            DistanceSampling::UniformLinear => "uniform-linear",
            DistanceSampling::UniformLog => "uniform-log",
        }
    }

    fn map_unit(self, u: f64, min: f64, max: f64) -> f64 {
        match self {
            DistanceSampling::UniformLinear => min + u * (max - min),
            DistanceSampling::UniformLog => {
                let (lo, hi) = (min.log10(), max.log10());
                10f64.powf(lo + u * (hi - lo)).clamp(min, max)
            }
        }
    }
}

impl fmt::Display for DistanceSampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceSampling {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform-linear" | "linear" => Ok(DistanceSampling::UniformLinear),
            "uniform-log" | "log" => Ok(DistanceSampling::UniformLog),
            other => Err(format!("unknown sampling mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub environment: Environment,
    pub frequencies: Vec<FrequencyGHz>,
    pub samples_per_frequency: usize,
    pub d2d_min: DistanceM,
    pub d2d_max: DistanceM,
    pub params: RmaParams,
    pub seed: u64,
    pub distance_sampling: DistanceSampling,
    /// When false, samples carry the mean model value with no shadow fading.
    pub shadow_fading: bool,
}

impl SimulationConfig {
    /// The reference run: nine frequencies from 1 to 100 GHz, 50 000 samples
    /// each, default parameters and the full 3GPP distance span of `env`.
    pub fn reference(environment: Environment, seed: u64) -> Self {
        let (min, max) = rma_distance_span(environment);
        Self {
            environment,
            frequencies: REFERENCE_FREQUENCIES_GHZ
                .iter()
                .map(|&f| FrequencyGHz::new(f).expect("positive constant"))
                .collect(),
            samples_per_frequency: REFERENCE_SAMPLES_PER_FREQUENCY,
            d2d_min: DistanceM::new(min).expect("positive constant"),
            d2d_max: DistanceM::new(max).expect("positive constant"),
            params: RmaParams::default(),
            seed,
            distance_sampling: DistanceSampling::default(),
            shadow_fading: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_frequency == 0 {
            return Err(Error::Config("samples_per_frequency must be positive".into()));
        }
        if self.frequencies.is_empty() {
            return Err(Error::Config("at least one frequency is required".into()));
        }
        if self.d2d_min >= self.d2d_max {
            return Err(Error::Config(format!(
                "d2d_min ({}) must be below d2d_max ({})",
                self.d2d_min, self.d2d_max
            )));
        }
        let (min_m, max_m) = rma_distance_span(self.environment);
        for d in [self.d2d_min, self.d2d_max] {
            if !(min_m..=max_m).contains(&d.value()) {
                return Err(Error::Applicability {
                    model: match self.environment {
                        Environment::Los => "3GPP RMa LOS",
                        Environment::Nlos => "3GPP RMa NLOS",
                    },
                    distance_m: d.value(),
                    min_m,
                    max_m,
                });
            }
        }
        Ok(())
    }

    pub fn total_samples(&self) -> usize {
        self.frequencies.len() * self.samples_per_frequency
    }
}

/// One point of path loss data, the unit the CI fitter consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossSample {
    pub fc: FrequencyGHz,
    /// Distance used for fitting (the 3D distance for simulated data).
    pub d: DistanceM,
    pub pl_db: PathLossDb,
    pub environment: Environment,
}

/// A simulated sample together with the 2D distance it was drawn at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulatedSample {
    pub d2d: DistanceM,
    pub sample: PathLossSample,
}

/// Keystream of one frequency. Positioned per sample with `set_word_pos`.
fn frequency_stream(seed: u64, frequency_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frequency_index as u64);
    rng
}

fn simulate_one(
    config: &SimulationConfig,
    rng: &mut ChaCha8Rng,
    frequency_index: usize,
    sample_index: usize,
) -> SimulatedSample {
    let fc = config.frequencies[frequency_index];
    rng.set_word_pos(sample_index as u128 * WORDS_PER_SAMPLE);
    let u: f64 = rng.random();
    let d2d_value = config
        .distance_sampling
        .map_unit(u, config.d2d_min.value(), config.d2d_max.value());
    let d2d = DistanceM::new(d2d_value).expect("inside a positive span");
    let d3d = config.params.distance_3d(d2d);
    let (mean, sigma) = match config.environment {
        Environment::Los => (los_mean_unchecked(&config.params, d3d, fc), rma3gpp_sigma_db(&config.params, Environment::Los, d3d, fc)),
        Environment::Nlos => (nlos_mean_unchecked(&config.params, d3d, fc), rma3gpp_sigma_db(&config.params, Environment::Nlos, d3d, fc)),
    };
    let fading = if config.shadow_fading {
        sample_shadow_fading(sigma, rng).expect("model sigmas are positive")
    } else {
        0.0
    };
    SimulatedSample {
        d2d,
        sample: PathLossSample {
            fc,
            d: d3d,
            pl_db: PathLossDb(mean + fading),
            environment: config.environment,
        },
    }
}

/// Draws `samples_per_frequency` points per frequency from the 3GPP RMa model
/// of the configured environment plus shadow fading.
///
/// Output is ordered by frequency then sample index, and is identical for a
/// given config regardless of the rayon thread count.
pub fn generate_3gpp_dataset(config: &SimulationConfig) -> Result<Vec<SimulatedSample>> {
    config.validate()?;
    let per = config.samples_per_frequency;
    Ok((0..config.total_samples())
        .into_par_iter()
        .with_min_len(1024)
        .map_init(
            || None::<(usize, ChaCha8Rng)>,
            |cached, i| {
                let (fi, si) = (i / per, i % per);
                let rng = match cached {
                    Some((idx, rng)) if *idx == fi => rng,
                    _ => &mut cached.insert((fi, frequency_stream(config.seed, fi))).1,
                };
                simulate_one(config, rng, fi, si)
            },
        )
        .collect())
}

pub fn write_dataset_csv<W: Write>(
    out: W,
    samples: &[SimulatedSample],
    seed: u64,
    sampling: DistanceSampling,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DATASET_HEADER)?;
    let seed = seed.to_string();
    for s in samples {
        w.write_record([
            s.sample.fc.value().to_string(),
            s.d2d.value().to_string(),
            s.sample.d.value().to_string(),
            s.sample.environment.as_str().to_string(),
            s.sample.pl_db.value().to_string(),
            seed.clone(),
            sampling.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A dataset file read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<SimulatedSample>,
    pub seed: Option<u64>,
    pub sampling: Option<DistanceSampling>,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("unexpected header {found:?}, expected {expected:?}")]
    Header { found: Vec<String>, expected: Vec<String> },
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

pub fn read_dataset_csv<R: Read>(input: R) -> std::result::Result<Dataset, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != DATASET_HEADER {
        return Err(DatasetError::Header {
            found: header,
            expected: DATASET_HEADER.iter().map(|s| s.to_string()).collect(),
        });
    }
    let mut samples = Vec::new();
    let mut seed = None;
    let mut sampling = None;
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec?;
        let bad = |message: String| DatasetError::Row { row, message };
        let num = |idx: usize| -> std::result::Result<f64, DatasetError> {
            rec[idx]
                .parse::<f64>()
                .map_err(|e| bad(format!("{}: {e}", DATASET_HEADER[idx])))
        };
        let fc = FrequencyGHz::new(num(0)?).map_err(|e| bad(e.to_string()))?;
        let d2d = DistanceM::new(num(1)?).map_err(|e| bad(e.to_string()))?;
        let d3d = DistanceM::new(num(2)?).map_err(|e| bad(e.to_string()))?;
        let environment: Environment = rec[3].parse().map_err(bad)?;
        let pl = num(4)?;
        if !pl.is_finite() {
            return Err(bad("pl_db must be finite".into()));
        }
        seed = Some(rec[5].parse::<u64>().map_err(|e| bad(format!("seed: {e}")))?);
        sampling = Some(rec[6].parse::<DistanceSampling>().map_err(bad)?);
        samples.push(SimulatedSample {
            d2d,
            sample: PathLossSample {
                fc,
                d: d3d,
                pl_db: PathLossDb(pl),
                environment,
            },
        });
    }
    Ok(Dataset { samples, seed, sampling })
}

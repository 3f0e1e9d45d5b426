//! Rural macrocell (RMa) millimeter-wave path loss toolkit.
//!
//! * [`model`]: Friis FSPL, the close-in (CI) 1 m reference model and the
//!   3GPP TR 38.900 RMa LOS/NLOS models.
//! * [`applicability`]: range reporting for the 3GPP models.
//! * [`stochastic`]: shadow fading and Monte Carlo datasets drawn from the
//!   3GPP models.
//! * [`fitting`]: MMSE fitting of the CI exponent and shadow fading σ.
//! * [`campaign`]: measurement file ingestion, link budget and coverage range.
//! * [`cli`]: the `rma` command line tool.

pub mod acceptance;
pub mod applicability;
pub mod campaign;
pub mod cli;
pub mod error;
pub mod fitting;
pub mod model;
pub mod stochastic;
pub mod units;

pub use error::{Error, Result};
pub use units::{DistanceM, Environment, FrequencyGHz, PathLossDb};

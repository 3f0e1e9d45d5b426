//! Measurement campaign ingestion, link budget arithmetic and coverage range.
//!
//! Campaign files are CSV with the exact lowercase header
//! `location_id,environment,d2d_m,tx_height_m,rx_height_m,fc_ghz,p_rx_dbm,pl_db,outage`.
//! Absent optional fields are empty strings.
//!
//! The shipped fixture ([`SYNTHETIC_CAMPAIGN_CSV`]) is synthetic: the raw
//! 73.5 GHz rural measurements are not public, so it is drawn from the fitted
//! CI models (n = 2.16, σ = 1.7 dB LOS; n = 2.75, σ = 6.7 dB NLOS) with the
//! same location counts and distance spans as the field campaign. It exercises
//! the pipeline; it is not measured data. The 33 m calibration point is
//! included as a LOS record.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::model::{ci_mean_pathloss, distance_3d, CI_ANCHOR_DB};
use crate::stochastic::{sample_shadow_fading, PathLossSample};
use crate::units::{DistanceM, Environment, FrequencyGHz, PathLossDb};

pub const CAMPAIGN_HEADER: [&str; 9] = [
    "location_id",
    "environment",
    "d2d_m",
    "tx_height_m",
    "rx_height_m",
    "fc_ghz",
    "p_rx_dbm",
    "pl_db",
    "outage",
];

/// Synthetic campaign fixture, regenerable with [`synthetic_campaign`] and
/// [`SYNTHETIC_CAMPAIGN_SEED`].
pub const SYNTHETIC_CAMPAIGN_CSV: &str = include_str!("../fixtures/synthetic_campaign.csv");
pub const SYNTHETIC_CAMPAIGN_SEED: u64 = 73;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub max_measurable_pl_db: f64,
}

impl LinkBudget {
    pub fn new(tx_power_dbm: f64, tx_gain_dbi: f64, rx_gain_dbi: f64, max_measurable_pl_db: f64) -> Result<Self> {
        require_positive("maximum measurable path loss (dB)", max_measurable_pl_db)?;
        Ok(Self {
            tx_power_dbm,
            tx_gain_dbi,
            rx_gain_dbi,
            max_measurable_pl_db,
        })
    }

    /// 73.5 GHz sounder: 14.7 dBm into 27 dBi horns at both ends, 190 dB
    /// maximum measurable path loss.
    pub fn rural_73ghz_sounder() -> Self {
        Self {
            tx_power_dbm: 14.7,
            tx_gain_dbi: 27.0,
            rx_gain_dbi: 27.0,
            max_measurable_pl_db: 190.0,
        }
    }

    pub fn eirp_dbm(&self) -> f64 {
        self.tx_power_dbm + self.tx_gain_dbi
    }

    fn total_db(&self) -> f64 {
        self.tx_power_dbm + self.tx_gain_dbi + self.rx_gain_dbi
    }
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self::rural_73ghz_sounder()
    }
}

/// Path loss derived from a received power reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerReading {
    pub pl_db: PathLossDb,
    /// Set when the loss exceeds the system's maximum measurable path loss;
    /// such a reading is equivalent to an outage.
    pub below_sensitivity: bool,
}

pub fn pathloss_from_power(budget: &LinkBudget, p_rx_dbm: f64) -> PowerReading {
    let pl = budget.total_db() - p_rx_dbm;
    PowerReading {
        pl_db: PathLossDb(pl),
        below_sensitivity: pl > budget.max_measurable_pl_db,
    }
}

pub fn power_from_pathloss(budget: &LinkBudget, pl: PathLossDb) -> f64 {
    budget.total_db() - pl.value()
}

/// Largest CI distance at which the loss stays at or below `max_pl_db`.
/// Inverts the CI mean only; no atmospheric or rain loss is added.
pub fn max_range(fc: FrequencyGHz, ple: f64, max_pl_db: f64) -> Result<DistanceM> {
    require_positive("path loss exponent", ple)?;
    let anchor_db = CI_ANCHOR_DB + 20.0 * fc.value().log10();
    // Negated so that a NaN ceiling also reports no coverage.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(max_pl_db > anchor_db) {
        return Err(Error::NoCoverage { max_pl_db, anchor_db });
    }
    DistanceM::new(10f64.powf((max_pl_db - anchor_db) / (10.0 * ple)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CampaignEnvironment {
    #[serde(rename = "LOS")]
    Los,
    #[serde(rename = "NLOS")]
    Nlos,
    /// LOS locations with diffraction loss near the transmitter. Never fitted.
    #[serde(rename = "LOS-DIFFRACTION")]
    LosDiffraction,
}

impl CampaignEnvironment {
    pub fn as_str(self) -> &'static str {
        match self {
            CampaignEnvironment::Los => "LOS",
            CampaignEnvironment::Nlos => "NLOS",
            CampaignEnvironment::LosDiffraction => "LOS-DIFFRACTION",
        }
    }

    pub fn fit_environment(self) -> Option<Environment> {
        match self {
            CampaignEnvironment::Los => Some(Environment::Los),
            CampaignEnvironment::Nlos => Some(Environment::Nlos),
            CampaignEnvironment::LosDiffraction => None,
        }
    }
}

impl fmt::Display for CampaignEnvironment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CampaignEnvironment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "LOS" => Ok(CampaignEnvironment::Los),
            "NLOS" => Ok(CampaignEnvironment::Nlos),
            "LOS-DIFFRACTION" => Ok(CampaignEnvironment::LosDiffraction),
            other => Err(format!("unknown environment tag {other:?}, expected LOS, NLOS or LOS-DIFFRACTION")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub location_id: String,
    pub environment: CampaignEnvironment,
    pub d2d_m: DistanceM,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    pub fc_ghz: FrequencyGHz,
    pub p_rx_dbm: Option<f64>,
    pub pl_db: Option<PathLossDb>,
    pub outage: bool,
}

impl MeasurementRecord {
    /// Exactly one of `p_rx_dbm` and `pl_db` must be present unless the
    /// location is an outage.
    pub fn validate(&self) -> std::result::Result<(), String> {
        require_positive("tx height (m)", self.tx_height_m).map_err(|e| e.to_string())?;
        require_positive("rx height (m)", self.rx_height_m).map_err(|e| e.to_string())?;
        if !self.outage && self.p_rx_dbm.is_some() == self.pl_db.is_some() {
            return Err("exactly one of p_rx_dbm and pl_db must be set on a non-outage row".into());
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing or wrong header: found {found:?}, expected {expected}")]
    Header { found: Vec<String>, expected: String },
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

fn parse_optional_f64(field: &str, name: &str) -> std::result::Result<Option<f64>, String> {
    if field.is_empty() {
        return Ok(None);
    }
    let v: f64 = field.parse().map_err(|e| format!("{name}: {e} ({field:?})"))?;
    if !v.is_finite() {
        return Err(format!("{name} must be finite"));
    }
    Ok(Some(v))
}

fn parse_row(rec: &csv::StringRecord) -> std::result::Result<MeasurementRecord, String> {
    let required = |idx: usize| -> std::result::Result<f64, String> {
        parse_optional_f64(&rec[idx], CAMPAIGN_HEADER[idx])?.ok_or_else(|| format!("{} is required", CAMPAIGN_HEADER[idx]))
    };
    let location_id = rec[0].to_string();
    if location_id.is_empty() {
        return Err("location_id is required".into());
    }
    let record = MeasurementRecord {
        location_id,
        environment: rec[1].parse()?,
        d2d_m: DistanceM::new(required(2)?).map_err(|e| e.to_string())?,
        tx_height_m: required(3)?,
        rx_height_m: required(4)?,
        fc_ghz: FrequencyGHz::new(required(5)?).map_err(|e| e.to_string())?,
        p_rx_dbm: parse_optional_f64(&rec[6], "p_rx_dbm")?,
        pl_db: parse_optional_f64(&rec[7], "pl_db")?.map(PathLossDb),
        outage: match &rec[8] {
            "true" => true,
            "false" => false,
            other => return Err(format!("outage must be true or false, got {other:?}")),
        },
    };
    record.validate()?;
    Ok(record)
}

/// Parses and validates a campaign CSV. Errors carry the 1-based file line
/// (the header is line 1).
pub fn parse_campaign_csv(bytes: &[u8]) -> std::result::Result<Vec<MeasurementRecord>, CampaignError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != CAMPAIGN_HEADER {
        return Err(CampaignError::Header {
            found: header,
            expected: CAMPAIGN_HEADER.join(","),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| CampaignError::Row { row, message: e.to_string() })?;
        out.push(parse_row(&rec).map_err(|message| CampaignError::Row { row, message })?);
    }
    Ok(out)
}

pub fn write_campaign_csv<W: Write>(out: W, records: &[MeasurementRecord]) -> csv::Result<()> {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CAMPAIGN_HEADER)?;
    for r in records {
        w.write_record([
            r.location_id.clone(),
            r.environment.as_str().to_string(),
            r.d2d_m.value().to_string(),
            r.tx_height_m.to_string(),
            r.rx_height_m.to_string(),
            r.fc_ghz.value().to_string(),
            opt(r.p_rx_dbm),
            opt(r.pl_db.map(PathLossDb::value)),
            r.outage.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConversionSummary {
    pub kept: usize,
    pub dropped_outage: usize,
    pub dropped_diffraction: usize,
    /// Power readings whose derived loss exceeds the measurable maximum.
    pub dropped_below_sensitivity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conversion {
    pub samples: Vec<PathLossSample>,
    pub summary: ConversionSummary,
}

/// Turns fit-eligible records into path loss samples at their 3D distance.
/// Outage and LOS-DIFFRACTION records are dropped and counted.
pub fn records_to_samples(records: &[MeasurementRecord], budget: &LinkBudget) -> Conversion {
    let mut summary = ConversionSummary::default();
    let mut samples = Vec::with_capacity(records.len());
    for r in records {
        if r.outage {
            summary.dropped_outage += 1;
            continue;
        }
        let Some(environment) = r.environment.fit_environment() else {
            summary.dropped_diffraction += 1;
            continue;
        };
        let pl_db = match (r.pl_db, r.p_rx_dbm) {
            (Some(pl), _) => pl,
            (None, Some(p_rx)) => {
                let reading = pathloss_from_power(budget, p_rx);
                if reading.below_sensitivity {
                    summary.dropped_below_sensitivity += 1;
                    continue;
                }
                reading.pl_db
            }
            (None, None) => unreachable!("validated records carry a reading unless in outage"),
        };
        let d = distance_3d(r.d2d_m, r.tx_height_m, r.rx_height_m).expect("heights validated at parse time");
        samples.push(PathLossSample {
            fc: r.fc_ghz,
            d,
            pl_db,
            environment,
        });
        summary.kept += 1;
    }
    Conversion { samples, summary }
}

/// Effective TX height above the surrounding terrain, m.
pub const FIXTURE_TX_HEIGHT_M: f64 = 110.0;
/// RX antenna height, the middle of the 1.6-2 m range used in the field.
pub const FIXTURE_RX_HEIGHT_M: f64 = 1.8;
pub const FIXTURE_FREQ_GHZ: f64 = 73.5;
pub const FIXTURE_LOS_PLE: f64 = 2.16;
pub const FIXTURE_LOS_SIGMA_DB: f64 = 1.7;
pub const FIXTURE_NLOS_PLE: f64 = 2.75;
pub const FIXTURE_NLOS_SIGMA_DB: f64 = 6.7;

const FIXTURE_LOS_D2D_M: [f64; 14] = [
    33.0, 420.0, 760.0, 1_180.0, 1_730.0, 2_350.0, 3_020.0, 3_840.0, 4_700.0, 5_650.0, 6_820.0, 8_100.0, 9_450.0,
    10_800.0,
];
const FIXTURE_DIFFRACTION_D2D_M: [f64; 2] = [1_560.0, 1_890.0];
/// Extra loss applied to the diffraction records, dB.
const FIXTURE_DIFFRACTION_EXCESS_DB: f64 = 28.0;
const FIXTURE_OUTAGE_D2D_M: [f64; 5] = [4_900.0, 6_300.0, 7_750.0, 9_200.0, 11_300.0];

fn round_centi(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Builds the synthetic campaign: 14 LOS, 17 NLOS, 2 LOS-DIFFRACTION and 5
/// outage locations at 73.5 GHz. Even-numbered detected locations record
/// received power, odd-numbered ones path loss directly.
pub fn synthetic_campaign(seed: u64) -> Vec<MeasurementRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = LinkBudget::rural_73ghz_sounder();
    let fc = FrequencyGHz::new(FIXTURE_FREQ_GHZ).expect("positive constant");
    let mut records = Vec::new();

    let push = |records: &mut Vec<MeasurementRecord>, env: CampaignEnvironment, d2d: f64, pl: Option<f64>| {
        let index = records.len() + 1;
        let (p_rx_dbm, pl_db) = match pl {
            Some(pl) if index.is_multiple_of(2) => (Some(round_centi(power_from_pathloss(&budget, PathLossDb(pl)))), None),
            Some(pl) => (None, Some(PathLossDb(round_centi(pl)))),
            None => (None, None),
        };
        records.push(MeasurementRecord {
            location_id: format!("RX{index:02}"),
            environment: env,
            d2d_m: DistanceM::new(d2d).expect("positive constant"),
            tx_height_m: FIXTURE_TX_HEIGHT_M,
            rx_height_m: FIXTURE_RX_HEIGHT_M,
            fc_ghz: fc,
            p_rx_dbm,
            pl_db,
            outage: pl.is_none(),
        });
    };

    let mut draw = |d2d: f64, ple: f64, sigma: f64, excess: f64| -> f64 {
        let d3d = distance_3d(DistanceM::new(d2d).expect("positive"), FIXTURE_TX_HEIGHT_M, FIXTURE_RX_HEIGHT_M)
            .expect("positive heights");
        let mean = ci_mean_pathloss(fc, d3d, ple).expect("d3d exceeds 1 m").value() + excess;
        loop {
            let pl = mean + sample_shadow_fading(sigma, &mut rng).expect("positive sigma");
            if pl <= budget.max_measurable_pl_db {
                return pl;
            }
        }
    };

    for d in FIXTURE_LOS_D2D_M {
        let pl = draw(d, FIXTURE_LOS_PLE, FIXTURE_LOS_SIGMA_DB, 0.0);
        push(&mut records, CampaignEnvironment::Los, d, Some(pl));
    }
    for i in 0..17 {
        let d = 3_400.0 + 450.0 * i as f64;
        let pl = draw(d, FIXTURE_NLOS_PLE, FIXTURE_NLOS_SIGMA_DB, 0.0);
        push(&mut records, CampaignEnvironment::Nlos, d, Some(pl));
    }
    for d in FIXTURE_DIFFRACTION_D2D_M {
        let pl = draw(d, FIXTURE_LOS_PLE, FIXTURE_LOS_SIGMA_DB, FIXTURE_DIFFRACTION_EXCESS_DB);
        push(&mut records, CampaignEnvironment::LosDiffraction, d, Some(pl));
    }
    for d in FIXTURE_OUTAGE_D2D_M {
        push(&mut records, CampaignEnvironment::Nlos, d, None);
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn budget() -> LinkBudget {
        LinkBudget::rural_73ghz_sounder()
    }

    #[test]
    fn eirp_is_41_7_dbm() {
        assert_abs_diff_eq!(budget().eirp_dbm(), 41.7, epsilon = 1e-12);
    }

    #[test]
    fn link_budget_identities() {
        let r = pathloss_from_power(&budget(), -88.1);
        assert_abs_diff_eq!(r.pl_db.value(), 156.8, epsilon = 1e-9);
        assert!(!r.below_sensitivity);
        assert_abs_diff_eq!(pathloss_from_power(&budget(), 68.7).pl_db.value(), 0.0, epsilon = 1e-9);
        let edge = pathloss_from_power(&budget(), -121.3);
        assert_abs_diff_eq!(edge.pl_db.value(), 190.0, epsilon = 1e-9);
        assert!(pathloss_from_power(&budget(), -125.0).below_sensitivity);
        assert!(LinkBudget::new(10.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn range_inversion_values() {
        let f = FrequencyGHz::new(73.5).unwrap();
        assert_abs_diff_eq!(max_range(f, 2.16, 190.0).unwrap().value(), 370_043.23, epsilon = 0.01);
        assert_abs_diff_eq!(max_range(f, 2.75, 190.0).unwrap().value(), 23_637.92, epsilon = 0.01);
        let anchor = CI_ANCHOR_DB + 20.0 * 73.5f64.log10();
        assert_abs_diff_eq!(max_range(f, 2.75, anchor + 1e-9).unwrap().value(), 1.0, epsilon = 1e-9);
        assert!(matches!(max_range(f, 2.0, anchor), Err(Error::NoCoverage { .. })));
        assert!(max_range(f, 0.0, 150.0).is_err());
    }

    #[test]
    fn fixture_matches_generator() {
        let mut buf = Vec::new();
        write_campaign_csv(&mut buf, &synthetic_campaign(SYNTHETIC_CAMPAIGN_SEED)).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), SYNTHETIC_CAMPAIGN_CSV);
    }

    #[test]
    fn fixture_counts() {
        let recs = parse_campaign_csv(SYNTHETIC_CAMPAIGN_CSV.as_bytes()).unwrap();
        let count = |e, outage| recs.iter().filter(|r| r.environment == e && r.outage == outage).count();
        assert_eq!(count(CampaignEnvironment::Los, false), 14);
        assert_eq!(count(CampaignEnvironment::Nlos, false), 17);
        assert_eq!(count(CampaignEnvironment::LosDiffraction, false), 2);
        assert_eq!(recs.iter().filter(|r| r.outage).count(), 5);
        let conv = records_to_samples(&recs, &budget());
        assert_eq!(conv.samples.len(), 31);
        assert_eq!(
            conv.summary,
            ConversionSummary { kept: 31, dropped_outage: 5, dropped_diffraction: 2, dropped_below_sensitivity: 0 }
        );
    }

    #[test]
    fn rejects_bad_rows() {
        let head = CAMPAIGN_HEADER.join(",");
        let bad_env = format!("{head}\nRX01,LOS,100,110,1.8,73.5,,150,false\nRX02,FOO,100,110,1.8,73.5,,150,false\n");
        match parse_campaign_csv(bad_env.as_bytes()) {
            Err(CampaignError::Row { row, message }) => {
                assert_eq!(row, 3);
                assert!(message.contains("FOO"));
            }
            other => panic!("{other:?}"),
        }
        let both = format!("{head}\nRX01,LOS,100,110,1.8,73.5,-80,150,false\n");
        assert!(matches!(parse_campaign_csv(both.as_bytes()), Err(CampaignError::Row { row: 2, .. })));
        let neither = format!("{head}\nRX01,NLOS,100,110,1.8,73.5,,,false\n");
        assert!(parse_campaign_csv(neither.as_bytes()).is_err());
        let outage_ok = format!("{head}\nRX01,NLOS,100,110,1.8,73.5,,,true\n");
        assert_eq!(parse_campaign_csv(outage_ok.as_bytes()).unwrap().len(), 1);
        let bad_num = format!("{head}\nRX01,LOS,abc,110,1.8,73.5,,150,false\n");
        assert!(parse_campaign_csv(bad_num.as_bytes()).is_err());
        let bad_bool = format!("{head}\nRX01,LOS,100,110,1.8,73.5,,150,yes\n");
        assert!(parse_campaign_csv(bad_bool.as_bytes()).is_err());
    }

    #[test]
    fn header_handling() {
        let head = CAMPAIGN_HEADER.join(",");
        assert!(parse_campaign_csv(format!("{head}\n").as_bytes()).unwrap().is_empty());
        assert!(matches!(parse_campaign_csv(b""), Err(CampaignError::Header { .. })));
        let upper = head.to_uppercase();
        assert!(matches!(parse_campaign_csv(upper.as_bytes()), Err(CampaignError::Header { .. })));
    }

    #[test]
    fn all_outage_input() {
        let recs: Vec<_> = synthetic_campaign(1).into_iter().filter(|r| r.outage).collect();
        let conv = records_to_samples(&recs, &budget());
        assert!(conv.samples.is_empty());
        assert_eq!(conv.summary.dropped_outage, 5);
    }

    #[test]
    fn power_and_loss_twins_agree() {
        let mk = |p_rx, pl| MeasurementRecord {
            location_id: "RX".into(),
            environment: CampaignEnvironment::Los,
            d2d_m: DistanceM::new(5_000.0).unwrap(),
            tx_height_m: 110.0,
            rx_height_m: 1.8,
            fc_ghz: FrequencyGHz::new(73.5).unwrap(),
            p_rx_dbm: p_rx,
            pl_db: pl,
            outage: false,
        };
        let conv = records_to_samples(&[mk(None, Some(PathLossDb(156.8))), mk(Some(-88.1), None)], &budget());
        assert_eq!(conv.samples[0].pl_db.value(), 156.8);
        assert_abs_diff_eq!(conv.samples[1].pl_db.value(), 156.8, epsilon = 1e-9);
        let weak = records_to_samples(&[mk(Some(-130.0), None)], &budget());
        assert_eq!(weak.summary.dropped_below_sensitivity, 1);
    }

    #[test]
    fn parse_then_write_is_identity() {
        let recs = parse_campaign_csv(SYNTHETIC_CAMPAIGN_CSV.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_campaign_csv(&mut buf, &recs).unwrap();
        assert_eq!(buf, SYNTHETIC_CAMPAIGN_CSV.as_bytes());
    }

    proptest! {
        #[test]
        fn power_round_trip(p_rx in -200.0f64..50.0) {
            let pl = pathloss_from_power(&budget(), p_rx).pl_db;
            prop_assert!((power_from_pathloss(&budget(), pl) - p_rx).abs() < 1e-12);
        }

        #[test]
        fn range_inverts_ci(f in 0.5f64..100.0, n in 1.0f64..5.0, margin in 1.0f64..150.0) {
            let fc = FrequencyGHz::new(f).unwrap();
            let l = CI_ANCHOR_DB + 20.0 * f.log10() + margin;
            let d = max_range(fc, n, l).unwrap();
            prop_assert!((ci_mean_pathloss(fc, d, n).unwrap().value() - l).abs() < 1e-9);
            prop_assert!(max_range(fc, n, l + 1.0).unwrap() > d);
            prop_assert!(max_range(fc, n * 1.1, l).unwrap() < d);
            prop_assert!(max_range(FrequencyGHz::new(f * 1.1).unwrap(), n, l).unwrap() < d);
        }

        #[test]
        fn conversion_never_emits_excluded(seed in 0u64..200) {
            let recs = synthetic_campaign(seed);
            let conv = records_to_samples(&recs, &budget());
            prop_assert_eq!(conv.samples.len(), 31);
            let eligible: Vec<_> = recs.iter().filter(|r| !r.outage && r.environment != CampaignEnvironment::LosDiffraction).collect();
            for (s, r) in conv.samples.iter().zip(eligible) {
                prop_assert_eq!(Some(s.environment), r.environment.fit_environment());
            }
        }
    }
}

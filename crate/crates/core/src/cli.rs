//! `rma` command line front end.
//!
//! Exit status is 0 on success, 1 on domain or runtime errors and 2 on usage
//! errors. Every flag can also be set through an `RMA_`-prefixed environment
//! variable; the flag wins when both are given.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acceptance;
use crate::applicability::validate_applicability;
use crate::campaign::{
    parse_campaign_csv, records_to_samples, CampaignError, LinkBudget, max_range, CAMPAIGN_HEADER, FIXTURE_LOS_PLE,
    FIXTURE_NLOS_PLE,
};
use crate::fitting::{fit_ci_by_environment, FitReport, FitSource};
use crate::model::{breakpoint_distance, ci_mean_pathloss, rma3gpp_mean_from_2d, RmaParams};
use crate::stochastic::{
    generate_3gpp_dataset, read_dataset_csv, write_dataset_csv, DatasetError, DistanceSampling, PathLossSample,
    SimulationConfig, DATASET_HEADER,
};
use crate::units::{DistanceM, Environment, FrequencyGHz};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rma", version, about = "Rural macrocell mmWave path loss toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the mean path loss of the CI or 3GPP RMa model.
    Predict(PredictArgs),
    /// Write the LOS breakpoint distance against frequency as CSV.
    BreakpointCurve(BreakpointArgs),
    /// Write a Monte Carlo dataset drawn from the 3GPP RMa model.
    Simulate(SimulateArgs),
    /// Fit the CI model to a simulated dataset or a campaign file.
    Fit(FitArgs),
    /// Print the CI distance at which the loss reaches a maximum.
    Coverage(CoverageArgs),
    /// Run the acceptance checks.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Ci,
    #[value(name = "3gpp-rma")]
    ThreeGppRma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnvArg {
    Los,
    Nlos,
}

impl From<EnvArg> for Environment {
    fn from(e: EnvArg) -> Self {
        match e {
            EnvArg::Los => Environment::Los,
            EnvArg::Nlos => Environment::Nlos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplingArg {
    #[value(alias = "uniform-linear")]
    Linear,
    #[value(alias = "uniform-log")]
    Log,
}

impl From<SamplingArg> for DistanceSampling {
    fn from(s: SamplingArg) -> Self {
        match s {
            SamplingArg::Linear => DistanceSampling::UniformLinear,
            SamplingArg::Log => DistanceSampling::UniformLog,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct RmaParamArgs {
    /// Base station height, m.
    #[arg(long, env = "RMA_HBS", default_value_t = 35.0)]
    pub hbs: f64,
    /// User terminal height, m.
    #[arg(long, env = "RMA_HUT", default_value_t = 1.5)]
    pub hut: f64,
    /// Average street width, m.
    #[arg(long, env = "RMA_STREET_WIDTH", default_value_t = 20.0)]
    pub street_width: f64,
    /// Average building height, m.
    #[arg(long, env = "RMA_BUILDING_HEIGHT", default_value_t = 5.0)]
    pub building_height: f64,
}

impl RmaParamArgs {
    fn params(&self) -> crate::Result<RmaParams> {
        RmaParams::new(self.hbs, self.hut, self.street_width, self.building_height)
    }
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, env = "RMA_MODEL", value_enum)]
    pub model: ModelKind,
    #[arg(long, env = "RMA_ENV", value_enum)]
    pub env: EnvArg,
    #[arg(long, env = "RMA_FREQ_GHZ")]
    pub freq_ghz: f64,
    /// T-R distance, m. The 3GPP model treats it as the 2D distance.
    #[arg(long, env = "RMA_DIST_M")]
    pub dist_m: f64,
    /// CI path loss exponent. Defaults to the measured rural exponent of the
    /// environment (2.16 LOS, 2.75 NLOS).
    #[arg(long, env = "RMA_PLE")]
    pub ple: Option<f64>,
    #[command(flatten)]
    pub params: RmaParamArgs,
}

#[derive(Debug, Args)]
pub struct BreakpointArgs {
    #[arg(long, env = "RMA_FMIN", default_value_t = 0.5)]
    pub fmin: f64,
    #[arg(long, env = "RMA_FMAX", default_value_t = 100.0)]
    pub fmax: f64,
    /// Number of frequency points, endpoints included.
    #[arg(long, env = "RMA_STEPS", default_value_t = 996)]
    pub steps: usize,
    #[arg(long, env = "RMA_SPACING", value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
    #[arg(long, env = "RMA_HBS", default_value_t = 35.0)]
    pub hbs: f64,
    #[arg(long, env = "RMA_HUT", default_value_t = 1.5)]
    pub hut: f64,
    /// Output CSV path; stdout when omitted.
    #[arg(long, env = "RMA_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, env = "RMA_ENV", value_enum)]
    pub env: EnvArg,
    #[arg(long, env = "RMA_SEED")]
    pub seed: u64,
    /// Samples per frequency.
    #[arg(long, env = "RMA_SAMPLES", default_value_t = crate::stochastic::REFERENCE_SAMPLES_PER_FREQUENCY)]
    pub samples: usize,
    #[arg(long, env = "RMA_SAMPLING", value_enum, default_value_t = SamplingArg::Linear)]
    pub sampling: SamplingArg,
    /// Worker threads; output does not depend on it.
    #[arg(long, env = "RMA_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, env = "RMA_OUT")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Simulated dataset or campaign CSV; the format is detected from the header.
    #[arg(long, env = "RMA_INPUT")]
    pub input: PathBuf,
    #[arg(long, env = "RMA_TX_POWER_DBM", default_value_t = 14.7)]
    pub tx_power_dbm: f64,
    #[arg(long, env = "RMA_TX_GAIN_DBI", default_value_t = 27.0)]
    pub tx_gain_dbi: f64,
    #[arg(long, env = "RMA_RX_GAIN_DBI", default_value_t = 27.0)]
    pub rx_gain_dbi: f64,
    #[arg(long, env = "RMA_MAX_PL_DB", default_value_t = 190.0)]
    pub max_pl_db: f64,
    /// Output JSON path; stdout when omitted.
    #[arg(long, env = "RMA_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long, env = "RMA_MAX_PL")]
    pub max_pl: f64,
    #[arg(long, env = "RMA_PLE")]
    pub ple: f64,
    #[arg(long, env = "RMA_FREQ_GHZ")]
    pub freq_ghz: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Campaign { path: PathBuf, source: CampaignError },
    #[error("{path}: {source}")]
    Dataset { path: PathBuf, source: DatasetError },
    #[error("{path}: unrecognized input header; expected a dataset ({}) or campaign ({}) file", DATASET_HEADER.join(","), CAMPAIGN_HEADER.join(","))]
    UnknownInput { path: PathBuf },
    #[error("{0}")]
    Output(String),
    #[error("{0} acceptance criteria failed")]
    ValidationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(io_err(p)),
        None => out.write_all(bytes).map_err(|e| CliError::Output(e.to_string())),
    }
}

fn predict(args: &PredictArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let fc = FrequencyGHz::new(args.freq_ghz)?;
    let d = DistanceM::new(args.dist_m)?;
    let env = Environment::from(args.env);
    let pl = match args.model {
        ModelKind::Ci => {
            let ple = args.ple.unwrap_or(match env {
                Environment::Los => FIXTURE_LOS_PLE,
                Environment::Nlos => FIXTURE_NLOS_PLE,
            });
            if !fc.in_ci_validity_span() {
                let _ = writeln!(err, "warning: {fc} is outside the 0.5-100 GHz CI validity span");
            }
            ci_mean_pathloss(fc, d, ple)?
        }
        ModelKind::ThreeGppRma => {
            if args.ple.is_some() {
                return Err(CliError::Usage("--ple only applies to --model ci".into()));
            }
            let params = args.params.params()?;
            for w in validate_applicability(&params, d, fc, env).warnings() {
                let _ = writeln!(err, "{w}");
            }
            rma3gpp_mean_from_2d(&params, env, d, fc)?
        }
    };
    writeln!(out, "{pl}").map_err(|e| CliError::Output(e.to_string()))
}

fn breakpoint_curve(args: &BreakpointArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    let (fmin, fmax) = (FrequencyGHz::new(args.fmin)?.value(), FrequencyGHz::new(args.fmax)?.value());
    if fmin >= fmax {
        return Err(CliError::Usage("--fmin must be below --fmax".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(["fc_ghz", "dbp_m"]).map_err(csv_err)?;
    let last = (args.steps - 1) as f64;
    for i in 0..args.steps {
        let t = i as f64 / last;
        let f = match args.spacing {
            Spacing::Linear => fmin + t * (fmax - fmin),
            Spacing::Log => fmin * (fmax / fmin).powf(t),
        };
        let d_bp = breakpoint_distance(args.hbs, args.hut, FrequencyGHz::new(f)?)?;
        w.write_record([f.to_string(), d_bp.value().to_string()]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    emit(out, args.out.as_deref(), &bytes)
}

fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let config = SimulationConfig {
        samples_per_frequency: args.samples,
        distance_sampling: args.sampling.into(),
        ..SimulationConfig::reference(args.env.into(), args.seed)
    };
    let data = match args.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Output(e.to_string()))?
            .install(|| generate_3gpp_dataset(&config))?,
        None => generate_3gpp_dataset(&config)?,
    };
    let file = fs::File::create(&args.out).map_err(io_err(&args.out))?;
    write_dataset_csv(io::BufWriter::new(file), &data, config.seed, config.distance_sampling)
        .map_err(|e| CliError::Output(format!("{}: {e}", args.out.display())))
}

fn fit(args: &FitArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bytes = fs::read(&args.input).map_err(io_err(&args.input))?;
    let first_line = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
    let first_line = String::from_utf8_lossy(first_line);
    let header = first_line.trim_end_matches('\r');

    let (samples, source, seed, sampling): (Vec<PathLossSample>, _, _, _) = if header == DATASET_HEADER.join(",") {
        let ds = read_dataset_csv(&bytes[..]).map_err(|source| CliError::Dataset { path: args.input.clone(), source })?;
        (ds.samples.into_iter().map(|s| s.sample).collect(), FitSource::MonteCarlo3gpp, ds.seed, ds.sampling)
    } else if header == CAMPAIGN_HEADER.join(",") {
        let budget = LinkBudget::new(args.tx_power_dbm, args.tx_gain_dbi, args.rx_gain_dbi, args.max_pl_db)?;
        let records = parse_campaign_csv(&bytes).map_err(|source| CliError::Campaign { path: args.input.clone(), source })?;
        (records_to_samples(&records, &budget).samples, FitSource::Campaign, None, None)
    } else {
        return Err(CliError::UnknownInput { path: args.input.clone() });
    };

    let reports: Vec<FitReport> = fit_ci_by_environment(&samples)?
        .iter()
        .map(|f| FitReport::new(f, source, seed, sampling))
        .collect();
    if reports.is_empty() {
        return Err(crate::Error::DegenerateFit("input holds no fit-eligible samples").into());
    }
    let mut json = serde_json::to_vec_pretty(&reports).map_err(|e| CliError::Output(e.to_string()))?;
    json.push(b'\n');
    emit(out, args.out.as_deref(), &json)
}

fn coverage(args: &CoverageArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let d = max_range(FrequencyGHz::new(args.freq_ghz)?, args.ple, args.max_pl)?;
    writeln!(out, "{:.2} m", d.value()).map_err(|e| CliError::Output(e.to_string()))
}

fn validate(out: &mut dyn Write) -> Result<(), CliError> {
    let outcomes = acceptance::run_all();
    for o in &outcomes {
        writeln!(out, "{o}").map_err(|e| CliError::Output(e.to_string()))?;
    }
    match outcomes.iter().filter(|o| !o.passed).count() {
        0 => Ok(()),
        n => Err(CliError::ValidationFailed(n)),
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Predict(a) => predict(a, out, err),
        Command::BreakpointCurve(a) => breakpoint_curve(a, out),
        Command::Simulate(a) => simulate(a),
        Command::Fit(a) => fit(a, out),
        Command::Coverage(a) => coverage(a, out),
        Command::Validate => validate(out),
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// to the given streams. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

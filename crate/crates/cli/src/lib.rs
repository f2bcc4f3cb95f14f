//! Scenario drivers behind the `primal-dual` binary.
//!
//! Each `cmd_*` function runs one scenario, writes its artifacts under the
//! requested output directory and returns a [`ScenarioResult`] whose `pass`
//! flag is computed from its metrics against the constants in
//! [`thresholds`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

mod scenarios;

pub use scenarios::{
    certify_program, cmd_certify, cmd_continuity, cmd_counterexample, cmd_run, load_program,
    parse_gains, read_summary, CertifyOptions, ContinuityOptions, CounterexampleOptions,
    RunOptions, RunSummary,
};

/// Pass thresholds of every scenario.
pub mod thresholds {
    /// `run`: largest KKT residual at the final state.
    pub const RUN_MAX_KKT: f64 = 1e-6;
    /// `run`: largest tail radius of the omega-limit estimate.
    pub const RUN_MAX_TAIL_RADIUS: f64 = 1e-3;
    /// `certify`: largest admissible Lie derivative of `V` (roundoff slack on `<= 0`).
    pub const CERTIFY_MAX_LIE_DERIVATIVE: f64 = 1e-12;
    /// `certify`: KKT tolerance for accepting the reference saddle.
    pub const CERTIFY_SADDLE_KKT: f64 = 1e-6;
    /// `counterexample`: switch counts of the base and perturbed traces.
    pub const COUNTEREXAMPLE_SWITCHES: (usize, usize) = (0, 2);
    /// `counterexample`: largest distance between the two starts.
    pub const COUNTEREXAMPLE_MAX_INITIAL_DISTANCE: f64 =
        primal_dual::analysis::WITNESS_MAX_INITIAL_DISTANCE;
    /// `counterexample`: largest sup-distance between the two trajectories.
    pub const COUNTEREXAMPLE_MAX_SUP_DISTANCE: f64 =
        primal_dual::analysis::WITNESS_MAX_SUP_DISTANCE;
    /// `continuity`: the last sup-distance must fall below this multiple of `2^-k_max`.
    pub const CONTINUITY_FINAL_FACTOR: f64 = 10.0;
}

/// Outcome of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario_name: String,
    pub pass: bool,
    /// Seed of the random sweep, if the scenario samples.
    pub seed: Option<u64>,
    pub metrics: BTreeMap<String, f64>,
    pub artifact_paths: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl ScenarioResult {
    fn new(name: &str) -> Self {
        Self {
            scenario_name: name.into(),
            pass: false,
            seed: None,
            metrics: BTreeMap::new(),
            artifact_paths: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.warnings.push(msg);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario result serializes")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] primal_dual::Error),

    #[error("{0}")]
    Usage(String),

    #[error("no reference saddle: {0}")]
    NoSaddle(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input (usage, files, configuration), 1 for failures while
    /// running a well-posed scenario.
    pub fn exit_code(&self) -> i32 {
        use primal_dual::Error as E;
        match self {
            CliError::Usage(_) | CliError::NoSaddle(_) | CliError::Json(_) => 2,
            CliError::Core(e) => match e {
                E::DimensionMismatch { .. }
                | E::Domain(_)
                | E::Validation { .. }
                | E::Malformed(_)
                | E::Parse { .. }
                | E::Config(_)
                | E::Io(_)
                | E::Csv(_) => 2,
                E::NonFinite { .. }
                | E::Divergence { .. }
                | E::TooShort(_)
                | E::WitnessNotFound(_) => 1,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

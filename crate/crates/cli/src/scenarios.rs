use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use primal_dual::analysis::{
    continuity_experiment, counterexample_witness, estimate_omega_limit, extract_mode_trace,
    kkt_residual, lie_derivative, sample_domain_points, OmegaLimitEstimate, SamplingConfig,
    DEFAULT_TAIL_FRACTION, MIN_TAIL_STATES, WITNESS_LAMBDA_GRID, WITNESS_X_GRID,
};
use primal_dual::dynamics::verify_projection_identity;
use primal_dual::integrator::integrate;
use primal_dual::{
    load_quadratic, ConcaveProgram, Config64, Error, Gains64, KktReport64, ModeTrace64, Point64,
    Program64, QuadraticProgramSpec, Saddle64, Scheme, Termination, Trajectory64,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::thresholds::*;
use crate::{CliError, CliResult, ScenarioResult};

/// Reads and validates a problem file.
pub fn load_program(path: &Path) -> CliResult<(QuadraticProgramSpec, Program64)> {
    let spec = QuadraticProgramSpec::from_json_file(path).map_err(|e| match e {
        Error::Io(io) => CliError::Usage(format!("cannot read {}: {io}", path.display())),
        e => e.into(),
    })?;
    let prog = load_quadratic(&spec)?;
    Ok((spec, prog))
}

/// Splits a flat list of `n + m` positive entries into `diag(K1, K2)`.
pub fn parse_gains(values: &[f64], n: usize, m: usize) -> CliResult<Gains64> {
    if values.len() != n + m {
        return Err(CliError::Usage(format!(
            "--gains needs n + m = {} entries, got {}",
            n + m,
            values.len()
        )));
    }
    Ok(Gains64::new(values[..n].to_vec(), values[n..].to_vec())?)
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(Error::from)?;
    Ok(())
}

fn write_trajectory(traj: &Trajectory64, path: &Path) -> CliResult<()> {
    let file = File::create(path).map_err(Error::from)?;
    traj.write_csv(BufWriter::new(file))?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut file = BufWriter::new(File::create(path).map_err(Error::from)?);
    file.write_all(text.as_bytes())
        .and_then(|()| file.flush())
        .map_err(Error::from)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub problem: PathBuf,
    pub x0: Vec<f64>,
    pub lambda0: Vec<f64>,
    pub config: Config64,
    /// Flat `K1` then `K2` diagonal.
    pub gains: Option<Vec<f64>>,
    pub out: PathBuf,
}

/// Contents of `summary.json` written by [`cmd_run`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub result: ScenarioResult,
    pub scheme: Scheme,
    pub step: f64,
    pub horizon: f64,
    pub gains: Option<Vec<f64>>,
    pub initial_state: Point64,
    pub final_state: Point64,
    pub final_time: f64,
    pub terminated_by: Termination,
    pub kkt: KktReport64,
    pub omega: OmegaLimitEstimate<f64>,
}

pub fn read_summary(path: &Path) -> CliResult<RunSummary> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    Ok(serde_json::from_str(&text)?)
}

/// Integrates one trajectory and writes `trajectory.csv` and `summary.json`.
pub fn cmd_run(opts: &RunOptions) -> CliResult<RunSummary> {
    let (spec, prog) = load_program(&opts.problem)?;
    let p0 = Point64::new(opts.x0.clone(), opts.lambda0.clone())?;
    let gains = opts
        .gains
        .as_deref()
        .map(|g| parse_gains(g, prog.n(), prog.m()))
        .transpose()?;
    let traj = integrate(
        &prog,
        &p0,
        &opts.config,
        gains.as_ref(),
        spec.saddle.as_ref(),
    )?;
    let final_state = traj
        .final_state()
        .expect("integrate records the start")
        .clone();

    let mut result = ScenarioResult::new("run");
    let omega = if traj.len() >= MIN_TAIL_STATES {
        let fraction = DEFAULT_TAIL_FRACTION.max(MIN_TAIL_STATES as f64 / traj.len() as f64);
        estimate_omega_limit(&traj, fraction)?
    } else {
        result.warn(format!(
            "only {} records; omega-limit taken as the final state",
            traj.len()
        ));
        OmegaLimitEstimate {
            tail_radius: traj
                .states
                .iter()
                .map(|s| s.distance(&final_state))
                .fold(0.0, f64::max),
            point: final_state.clone(),
            tail_fraction: 1.0,
            tail_states: traj.len(),
        }
    };
    let kkt = kkt_residual(&prog, &final_state)?;
    result.metric("final_kkt_residual", kkt.total);
    result.metric("tail_radius", omega.tail_radius);
    result.metric("final_time", traj.final_time().unwrap_or(0.0));
    result.metric("records", traj.len() as f64);
    if let Some(saddle) = &spec.saddle {
        result.metric(
            "distance_to_saddle",
            final_state.distance(&saddle.as_point()),
        );
        if let Some(rise) = traj.max_v_increase() {
            result.metric("max_lyapunov_increase", rise);
        }
    }
    result.pass = kkt.total <= RUN_MAX_KKT && omega.tail_radius < RUN_MAX_TAIL_RADIUS;

    create_dir(&opts.out)?;
    let csv_path = opts.out.join("trajectory.csv");
    let summary_path = opts.out.join("summary.json");
    result.artifact_paths = vec![csv_path.clone(), summary_path.clone()];
    write_trajectory(&traj, &csv_path)?;
    let summary = RunSummary {
        result,
        scheme: opts.config.scheme,
        step: opts.config.step,
        horizon: opts.config.horizon,
        gains: opts.gains.clone(),
        initial_state: p0,
        final_state,
        final_time: traj.final_time().unwrap_or(0.0),
        terminated_by: traj.terminated_by.unwrap_or(Termination::Horizon),
        kkt,
        omega,
    };
    write_text(&summary_path, &serde_json::to_string_pretty(&summary)?)?;
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub problem: PathBuf,
    pub samples: usize,
    pub seed: u64,
    /// A `summary.json` whose final state is the reference saddle; defaults
    /// to the `saddle` entry of the problem file.
    pub saddle: Option<PathBuf>,
}

pub fn cmd_certify(opts: &CertifyOptions) -> CliResult<ScenarioResult> {
    let (spec, prog) = load_program(&opts.problem)?;
    let candidate = match &opts.saddle {
        Some(path) => read_summary(path)?.final_state,
        None => spec.saddle.map(|s| s.as_point()).ok_or_else(|| {
            CliError::NoSaddle(format!(
                "{} has no `saddle` entry; run `primal-dual run --problem {} --out DIR` first \
                 and pass `--saddle DIR/summary.json`",
                opts.problem.display(),
                opts.problem.display()
            ))
        })?,
    };
    certify_program(&prog, &candidate, opts.samples, opts.seed)
}

/// Lie-derivative and projection-identity sweeps over `samples` seeded
/// points around `candidate`.
pub fn certify_program(
    prog: &Program64,
    candidate: &Point64,
    samples: usize,
    seed: u64,
) -> CliResult<ScenarioResult> {
    if samples == 0 {
        return Err(Error::Config(
            "samples must be positive; a sweep over 0 points proves nothing".into(),
        )
        .into());
    }
    let mut result = ScenarioResult::new("certify");
    result.seed = Some(seed);
    let saddle_kkt = kkt_residual(prog, candidate)?.total;
    result.metric("saddle_kkt_residual", saddle_kkt);
    if saddle_kkt > CERTIFY_SADDLE_KKT {
        result.warn(format!(
            "reference saddle has KKT residual {saddle_kkt:e} > {CERTIFY_SADDLE_KKT:e}"
        ));
    }
    let saddle = Saddle64::new_unchecked(candidate.x.clone(), candidate.lambda.clone());
    let points = sample_domain_points(
        &saddle,
        &SamplingConfig {
            count: samples,
            seed,
            ..Default::default()
        },
    )?;
    let checks = points
        .par_iter()
        .map(|p| {
            let lie = lie_derivative(prog, &saddle, p, None)?;
            Ok((
                lie,
                verify_projection_identity(prog, p),
                p.lambda.contains(&0.0),
            ))
        })
        .collect::<primal_dual::Result<Vec<_>>>()?;
    let max_lie = checks.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let positive = checks
        .iter()
        .filter(|c| c.0 > CERTIFY_MAX_LIE_DERIVATIVE)
        .count();
    let identity_failures = checks.iter().filter(|c| !c.1).count();
    let boundary = checks.iter().filter(|c| c.2).count();
    result.metric("samples", samples as f64);
    result.metric("max_lie_derivative", max_lie);
    result.metric("positive_lie_samples", positive as f64);
    result.metric("identity_failures", identity_failures as f64);
    result.metric("boundary_fraction", boundary as f64 / samples as f64);
    if positive > 0 {
        result.warn(format!(
            "{positive} of {samples} samples have a Lie derivative above \
             {CERTIFY_MAX_LIE_DERIVATIVE:e} (max {max_lie:e})"
        ));
    }
    result.pass = saddle_kkt <= CERTIFY_SADDLE_KKT && positive == 0 && identity_failures == 0;
    Ok(result)
}

#[derive(Debug, Clone)]
pub struct CounterexampleOptions {
    pub horizon: f64,
    pub config: Config64,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct TracesFile<'a> {
    p_base: &'a Point64,
    p_pert: &'a Point64,
    trace_base: &'a ModeTrace64,
    trace_pert: &'a ModeTrace64,
}

/// Searches for two nearby starts whose mode traces differ while their
/// trajectories stay close; writes `base.csv`, `perturbed.csv` and
/// `traces.json`. When the search fails, the two lowest grid starts of the
/// first column are written instead as a diagnostic and the scenario fails.
pub fn cmd_counterexample(opts: &CounterexampleOptions) -> CliResult<ScenarioResult> {
    let prog: Program64 = load_quadratic(&QuadraticProgramSpec::example1())?;
    let mut result = ScenarioResult::new("counterexample");
    let (p_base, p_pert, traj_base, traj_pert) =
        match counterexample_witness(&prog, opts.horizon, &opts.config) {
            Ok(w) => (w.p_base, w.p_pert, w.traj_base, w.traj_pert),
            Err(Error::WitnessNotFound(msg)) => {
                result.warn(format!("counterexample search failed: {msg}"));
                let (x, _, _) = WITNESS_X_GRID;
                let (l, dl, _) = WITNESS_LAMBDA_GRID;
                let cfg = Config64 {
                    horizon: opts.horizon,
                    ..opts.config.clone()
                };
                let p_base = Point64::new(vec![x], vec![l + dl])?;
                let p_pert = Point64::new(vec![x], vec![l])?;
                let traj_base = integrate(&prog, &p_base, &cfg, None, None)?;
                let traj_pert = integrate(&prog, &p_pert, &cfg, None, None)?;
                (p_base, p_pert, traj_base, traj_pert)
            }
            Err(e) => return Err(e.into()),
        };
    let trace_base = extract_mode_trace(&traj_base)?;
    let trace_pert = extract_mode_trace(&traj_pert)?;
    let initial_distance = p_base.distance(&p_pert);
    let sup_distance = traj_base.sup_distance(&traj_pert);
    result.metric("switches_base", trace_base.switch_count() as f64);
    result.metric("switches_perturbed", trace_pert.switch_count() as f64);
    result.metric("initial_distance", initial_distance);
    result.metric("sup_distance", sup_distance);
    if let Some(&t) = trace_pert.switch_times.first() {
        result.metric("first_switch_time_perturbed", t);
    }
    let (want_base, want_pert) = COUNTEREXAMPLE_SWITCHES;
    result.pass = trace_base.switch_count() == want_base
        && trace_pert.switch_count() == want_pert
        && initial_distance <= COUNTEREXAMPLE_MAX_INITIAL_DISTANCE
        && sup_distance < COUNTEREXAMPLE_MAX_SUP_DISTANCE;

    create_dir(&opts.out)?;
    let paths = ["base.csv", "perturbed.csv", "traces.json"].map(|f| opts.out.join(f));
    write_trajectory(&traj_base, &paths[0])?;
    write_trajectory(&traj_pert, &paths[1])?;
    let traces = TracesFile {
        p_base: &p_base,
        p_pert: &p_pert,
        trace_base: &trace_base,
        trace_pert: &trace_pert,
    };
    write_text(&paths[2], &serde_json::to_string_pretty(&traces)?)?;
    result.artifact_paths = paths.to_vec();
    Ok(result)
}

#[derive(Debug, Clone)]
pub struct ContinuityOptions {
    /// Defaults to the built-in `f(x) = -(x-5)^2`, `g(x) = x^2 - 1` program.
    pub problem: Option<PathBuf>,
    pub x0: Vec<f64>,
    pub lambda0: Vec<f64>,
    pub direction: Vec<f64>,
    pub k_max: u32,
    pub horizon: f64,
    pub config: Config64,
    pub out: PathBuf,
}

impl Default for ContinuityOptions {
    fn default() -> Self {
        Self {
            problem: None,
            x0: vec![0.5],
            lambda0: vec![0.5],
            direction: vec![-0.1, -0.1],
            k_max: 8,
            horizon: 10.0,
            config: Config64 {
                stop_kkt_tol: 0.0,
                ..Default::default()
            },
            out: PathBuf::from("out"),
        }
    }
}

/// Perturbation sweep around one start; writes `continuity.csv` with
/// columns `k, delta, perturbation_norm, sup_distance`.
pub fn cmd_continuity(opts: &ContinuityOptions) -> CliResult<ScenarioResult> {
    let prog = match &opts.problem {
        Some(path) => load_program(path)?.1,
        None => load_quadratic(&QuadraticProgramSpec::example1())?,
    };
    let p0 = Point64::new(opts.x0.clone(), opts.lambda0.clone())?;
    let report = continuity_experiment(
        &prog,
        &p0,
        &opts.direction,
        opts.k_max,
        opts.horizon,
        &opts.config,
    )?;
    let mut result = ScenarioResult::new("continuity");
    if opts.k_max == 1 {
        result.warn("insufficient depth: k_max = 1 gives a single row".into());
    }
    for k in &report.skipped {
        result.warn(format!(
            "perturbation level k = {k} leaves the domain; skipped"
        ));
    }
    let final_delta = 0.5f64.powi(opts.k_max as i32);
    result.metric("rows", report.rows.len() as f64);
    result.metric("skipped", report.skipped.len() as f64);
    result.metric("final_delta", final_delta);
    if let Some(last) = report.rows.last() {
        result.metric("final_sup_distance", last.sup_distance);
    }
    if let Some(amp) = report.max_amplification() {
        result.metric("max_amplification", amp);
    }
    result.pass = report.rows.last().is_some_and(|last| {
        last.k == opts.k_max && last.sup_distance < CONTINUITY_FINAL_FACTOR * final_delta
    }) && report.is_nonincreasing();

    create_dir(&opts.out)?;
    let path = opts.out.join("continuity.csv");
    let mut table = String::from("k,delta,perturbation_norm,sup_distance\n");
    for row in &report.rows {
        table.push_str(&format!(
            "{},{},{},{}\n",
            row.k, row.delta, row.perturbation_norm, row.sup_distance
        ));
    }
    write_text(&path, &table)?;
    result.artifact_paths = vec![path];
    Ok(result)
}

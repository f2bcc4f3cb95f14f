use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use primal_dual::{Config64, Scheme};
use primal_dual_cli::{
    cmd_certify, cmd_continuity, cmd_counterexample, cmd_run, CertifyOptions, CliError,
    ContinuityOptions, CounterexampleOptions, RunOptions, ScenarioResult,
};

#[derive(Parser)]
#[command(
    name = "primal-dual",
    version,
    about = "Projected primal-dual dynamics scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and summarize its limit.
    Run {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda0: Vec<f64>,
        /// Diagonal of K1 followed by the diagonal of K2.
        #[arg(long, value_delimiter = ',')]
        gains: Option<Vec<f64>>,
        #[command(flatten)]
        integ: IntegratorArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check Lyapunov descent and the projection identity on seeded samples.
    Certify {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// A run summary whose final state serves as the reference saddle.
        #[arg(long)]
        saddle: Option<PathBuf>,
    },
    /// Find two close starts with different mode traces.
    Counterexample {
        #[command(flatten)]
        integ: IntegratorArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Measure how trajectories move under shrinking perturbations of the start.
    Continuity {
        /// Defaults to the built-in example program.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "0.5"
        )]
        x0: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "0.5"
        )]
        lambda0: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "-0.1,-0.1"
        )]
        direction: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        k_max: u32,
        #[arg(long = "T", default_value_t = 10.0)]
        horizon: f64,
        #[arg(long, value_enum, default_value_t = SchemeArg::Euler)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct IntegratorArgs {
    #[arg(long, value_enum, default_value_t = SchemeArg::Euler)]
    scheme: SchemeArg,
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long = "T", default_value_t = 50.0)]
    horizon: f64,
    /// Stop once the KKT residual drops to this value; 0 disables.
    #[arg(long, default_value_t = 1e-8)]
    kkt_tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Euler,
    Rk4,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Euler => Scheme::ProjectedEuler,
            SchemeArg::Rk4 => Scheme::ProjectedRk4,
        }
    }
}

impl IntegratorArgs {
    fn config(&self) -> Config64 {
        Config64 {
            scheme: self.scheme.into(),
            step: self.h,
            horizon: self.horizon,
            stop_kkt_tol: self.kkt_tol,
            record_stride: 1,
        }
    }
}

fn dispatch(command: Command) -> Result<ScenarioResult, CliError> {
    match command {
        Command::Run {
            problem,
            x0,
            lambda0,
            gains,
            integ,
            out,
        } => cmd_run(&RunOptions {
            problem,
            x0,
            lambda0,
            config: integ.config(),
            gains,
            out,
        })
        .map(|summary| summary.result),
        Command::Certify {
            problem,
            samples,
            seed,
            saddle,
        } => cmd_certify(&CertifyOptions {
            problem,
            samples,
            seed,
            saddle,
        }),
        Command::Counterexample { integ, out } => cmd_counterexample(&CounterexampleOptions {
            horizon: integ.horizon,
            config: integ.config(),
            out,
        }),
        Command::Continuity {
            problem,
            x0,
            lambda0,
            direction,
            k_max,
            horizon,
            scheme,
            h,
            out,
        } => cmd_continuity(&ContinuityOptions {
            problem,
            x0,
            lambda0,
            direction,
            k_max,
            horizon,
            config: Config64 {
                scheme: scheme.into(),
                step: h,
                horizon,
                stop_kkt_tol: 0.0,
                record_stride: 1,
            },
            out,
        }),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(result) => {
            println!("{}", result.to_json());
            if result.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

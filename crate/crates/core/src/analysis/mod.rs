//! Certification and experiment layer: KKT residuals, Lyapunov functions,
//! mode traces, omega-limit estimates, and the sweeps built on them.

mod experiments;
mod kkt;
mod lyapunov;
mod modes;
mod omega;
mod sampling;

pub use experiments::{
    continuity_experiment, counterexample_witness, ContinuityReport, ContinuityRow,
    CounterexampleWitness, WITNESS_LAMBDA_GRID, WITNESS_MAX_INITIAL_DISTANCE,
    WITNESS_MAX_SUP_DISTANCE, WITNESS_X_GRID,
};
pub use kkt::{certify_saddle, kkt_residual, KktReport};
pub use lyapunov::{lie_derivative, lyapunov_gradient, lyapunov_value, lyapunov_value_gains};
pub use modes::{extract_mode_trace, Mode, ModeSegment, ModeTrace};
pub use omega::{estimate_omega_limit, OmegaLimitEstimate, DEFAULT_TAIL_FRACTION, MIN_TAIL_STATES};
pub use sampling::{sample_domain_points, SamplingConfig};

//! Constrained primal-dual dynamics for concave programs.
//!
//! For `maximize f(x) s.t. g(x) <= 0` with `f` strictly concave and `g`
//! convex, the primal-dual dynamics
//!
//! ```text
//! x'      = grad_x L(x, lambda) = grad f(x) - sum_i lambda_i grad g_i(x)
//! lambda' = [g(x)]_lambda^+
//! ```
//!
//! evolve on `K = R^n x R^m_{>=0}`. The right-hand side is discontinuous on
//! the boundary of `K`; it coincides with the projected dynamical system
//! `Pi_K(p, X(p))` of the unprojected field `X = [grad_x L; g]`.
//!
//! The crate provides the fields ([`dynamics`]), fixed-step projected
//! integrators ([`integrator`]), and certification tools ([`analysis`]):
//! KKT residuals, the Lyapunov function `V = 1/2 ||p - p*||^2` and its Lie
//! derivative, omega-limit estimates, mode traces, and the continuity and
//! mode-switching experiments.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision case.
//!
//! ```
//! use primal_dual::{analysis, integrator, load_quadratic, Point64, Program64, QuadraticProgramSpec};
//!
//! let prog: Program64 = load_quadratic(&QuadraticProgramSpec::example1()).unwrap();
//! let p0 = Point64::new(vec![0.0], vec![0.0]).unwrap();
//! let traj = integrator::integrate(&prog, &p0, &Default::default(), None, None).unwrap();
//! let end = traj.final_state().unwrap();
//! assert!(analysis::kkt_residual(&prog, end).unwrap().total < 1e-6);
//! ```

// `!(a > b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod linalg;
pub mod problem;
pub mod projection;
pub mod scalar;
pub mod trajectory;

pub use dynamics::GainMatrices;
pub use error::{Error, Result};
pub use integrator::{IntegratorConfig, Scheme};
pub use problem::{
    load_quadratic, ClosureProgram, ConcaveProgram, PrimalDualPoint, QuadraticProgram,
    QuadraticProgramSpec, SaddlePoint,
};
pub use projection::ActiveMask;
pub use scalar::Scalar;
pub use trajectory::{Termination, Trajectory};

pub type Program64 = QuadraticProgram<f64>;
pub type Program32 = QuadraticProgram<f32>;
pub type Point64 = PrimalDualPoint<f64>;
pub type Point32 = PrimalDualPoint<f32>;
pub type Saddle64 = SaddlePoint<f64>;
pub type Gains64 = GainMatrices<f64>;
pub type Config64 = IntegratorConfig<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type KktReport64 = analysis::KktReport<f64>;
pub type ModeTrace64 = analysis::ModeTrace<f64>;

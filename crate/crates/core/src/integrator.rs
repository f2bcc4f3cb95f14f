//! Fixed-step projected integrators for the primal-dual dynamics.
//!
//! Each step moves along the unprojected field `X` and projects the result
//! back onto `K`, so every produced state has `lambda >= 0` with clamped
//! components exactly `0.0`.

use serde::{Deserialize, Serialize};

use crate::analysis::{kkt_residual, lyapunov_value, lyapunov_value_gains};
use crate::dynamics::{field_primal_dual, field_unprojected, GainMatrices};
use crate::error::{check_len, Error, Result};
use crate::linalg::{all_finite, axpy};
use crate::problem::{ConcaveProgram, PrimalDualPoint, SaddlePoint};
use crate::projection::{project_onto_domain, ActiveMask};
use crate::scalar::Scalar;
use crate::trajectory::{Termination, Trajectory};

/// States whose norm exceeds this abort the integration.
pub const DIVERGENCE_GUARD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ProjectedEuler,
    ProjectedRk4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig<T> {
    pub scheme: Scheme,
    pub step: T,
    pub horizon: T,
    /// Stop once the KKT residual total is at or below this value.
    pub stop_kkt_tol: T,
    /// Record every `record_stride`-th state (the final state is always kept).
    pub record_stride: usize,
}

impl<T: Scalar> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            scheme: Scheme::ProjectedEuler,
            step: T::of(1e-3),
            horizon: T::of(50.0),
            stop_kkt_tol: T::of(1e-8),
            record_stride: 1,
        }
    }
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > T::zero() && self.step.is_finite()) {
            return Err(Error::Config(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.horizon >= self.step && self.horizon.is_finite()) {
            return Err(Error::Config(format!(
                "horizon {} must be finite and at least the step {}",
                self.horizon, self.step
            )));
        }
        if !(self.stop_kkt_tol >= T::zero()) {
            return Err(Error::Config("stop_kkt_tol must be nonnegative".into()));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of steps to reach the horizon; the last one may be shorter.
    pub fn step_count(&self) -> usize {
        let ratio = (self.horizon / self.step).to_f64_lossy();
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= 1e-9 * rounded.max(1.0) {
            rounded as usize
        } else {
            ratio.ceil() as usize
        }
    }
}

fn drift<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    gains: Option<&GainMatrices<T>>,
    state: &[T],
) -> Result<Vec<T>> {
    let mut v = field_unprojected(prog, &PrimalDualPoint::from_stacked(prog.n(), state))?;
    if let Some(g) = gains {
        g.scale(&mut v);
    }
    if !all_finite(&v) {
        return Err(Error::NonFinite {
            time: f64::NAN,
            state: format!("{:?}", state),
        });
    }
    Ok(v)
}

fn step_stacked<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    scheme: Scheme,
    gains: Option<&GainMatrices<T>>,
    y: &[T],
    h: T,
) -> Result<Vec<T>> {
    let n = prog.n();
    match scheme {
        Scheme::ProjectedEuler => {
            let k1 = drift(prog, gains, y)?;
            Ok(project_onto_domain(n, &axpy(h, &k1, y)))
        }
        Scheme::ProjectedRk4 => {
            let half = h * T::of(0.5);
            let k1 = drift(prog, gains, y)?;
            let k2 = drift(prog, gains, &project_onto_domain(n, &axpy(half, &k1, y)))?;
            let k3 = drift(prog, gains, &project_onto_domain(n, &axpy(half, &k2, y)))?;
            let k4 = drift(prog, gains, &project_onto_domain(n, &axpy(h, &k3, y)))?;
            let two = T::of(2.0);
            let sixth = h / T::of(6.0);
            let next: Vec<T> = (0..y.len())
                .map(|j| y[j] + sixth * (k1[j] + two * k2[j] + two * k3[j] + k4[j]))
                .collect();
            Ok(project_onto_domain(n, &next))
        }
    }
}

fn check_step_args<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
    h: T,
) -> Result<()> {
    p.check_dims(prog)?;
    p.check_domain()?;
    if !(h > T::zero()) {
        return Err(Error::Config(format!("step must be positive, got {h}")));
    }
    Ok(())
}

/// One step of the scheme, optionally with diagonal gains.
pub fn step<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    scheme: Scheme,
    gains: Option<&GainMatrices<T>>,
    p: &PrimalDualPoint<T>,
    h: T,
) -> Result<PrimalDualPoint<T>> {
    check_step_args(prog, p, h)?;
    if let Some(g) = gains {
        g.check_dims(prog.n(), prog.m())?;
    }
    let next = step_stacked(prog, scheme, gains, &p.stacked(), h)?;
    Ok(PrimalDualPoint::from_stacked(prog.n(), &next))
}

/// `proj_K(p + h X(p))`.
pub fn step_projected_euler<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
    h: T,
) -> Result<PrimalDualPoint<T>> {
    step(prog, Scheme::ProjectedEuler, None, p, h)
}

/// Classical RK4 on `X` with every stage state projected onto `K`.
pub fn step_projected_rk4<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
    h: T,
) -> Result<PrimalDualPoint<T>> {
    step(prog, Scheme::ProjectedRk4, None, p, h)
}

struct Recorder<'a, T: Scalar, P: ?Sized> {
    prog: &'a P,
    gains: Option<&'a GainMatrices<T>>,
    saddle: Option<&'a SaddlePoint<T>>,
    traj: Trajectory<T>,
}

impl<T: Scalar, P: ConcaveProgram<T> + ?Sized> Recorder<'_, T, P> {
    fn push(&mut self, t: T, state: PrimalDualPoint<T>) -> Result<()> {
        let mask = field_primal_dual(self.prog, &state)
            .map(|(_, mask)| mask)
            .unwrap_or_else(|_| ActiveMask::inactive(state.m()));
        if let (Some(saddle), Some(v)) = (self.saddle, self.traj.v_values.as_mut()) {
            v.push(match self.gains {
                Some(g) => lyapunov_value_gains(saddle, g, &state)?,
                None => lyapunov_value(saddle, &state)?,
            });
        }
        self.traj.times.push(t);
        self.traj.states.push(state);
        self.traj.masks.push(mask);
        Ok(())
    }
}

/// Integrates from `p0` until the horizon or until the KKT residual drops to
/// `cfg.stop_kkt_tol`.
///
/// With `saddle`, `v_values` holds `V` (or the gain-weighted `V'` when
/// `gains` is given) at each recorded state.
pub fn integrate<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p0: &PrimalDualPoint<T>,
    cfg: &IntegratorConfig<T>,
    gains: Option<&GainMatrices<T>>,
    saddle: Option<&SaddlePoint<T>>,
) -> Result<Trajectory<T>> {
    cfg.validate()?;
    p0.check_dims(prog)?;
    p0.check_domain()?;
    if let Some(g) = gains {
        g.check_dims(prog.n(), prog.m())?;
    }
    if let Some(s) = saddle {
        check_len("saddle.x_star", prog.n(), s.x_star.len())?;
        check_len("saddle.lambda_star", prog.m(), s.lambda_star.len())?;
    }

    let n = prog.n();
    let steps = cfg.step_count();
    let mut rec = Recorder {
        prog,
        gains,
        saddle,
        traj: Trajectory {
            times: Vec::with_capacity(steps / cfg.record_stride + 2),
            states: Vec::with_capacity(steps / cfg.record_stride + 2),
            v_values: saddle.map(|_| Vec::with_capacity(steps / cfg.record_stride + 2)),
            masks: Vec::with_capacity(steps / cfg.record_stride + 2),
            terminated_by: None,
        },
    };
    rec.push(T::zero(), p0.clone())?;
    if kkt_residual(prog, p0)?.total <= cfg.stop_kkt_tol {
        rec.traj.terminated_by = Some(Termination::KktTolerance);
        return Ok(rec.traj);
    }

    let guard = T::of(DIVERGENCE_GUARD);
    let mut y = p0.stacked();
    for k in 1..=steps {
        let t_prev = cfg.step * T::from_usize(k - 1).expect("step index fits scalar");
        let t = if k == steps {
            cfg.horizon
        } else {
            cfg.step * T::from_usize(k).expect("step index fits scalar")
        };
        y = step_stacked(prog, cfg.scheme, gains, &y, t - t_prev).map_err(|e| match e {
            Error::NonFinite { state, .. } => Error::NonFinite {
                time: t_prev.to_f64_lossy(),
                state,
            },
            other => other,
        })?;
        let norm = crate::linalg::norm(&y);
        if !(norm <= guard) {
            return Err(Error::Divergence {
                time: t.to_f64_lossy(),
                norm: norm.to_f64_lossy(),
                state: format!("{:?}", y),
            });
        }
        let state = PrimalDualPoint::from_stacked(n, &y);
        let converged = kkt_residual(prog, &state)?.total <= cfg.stop_kkt_tol;
        if converged || k == steps || k % cfg.record_stride == 0 {
            rec.push(t, state)?;
        }
        if converged {
            rec.traj.terminated_by = Some(Termination::KktTolerance);
            return Ok(rec.traj);
        }
    }
    rec.traj.terminated_by = Some(Termination::Horizon);
    Ok(rec.traj)
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::PrimalDualPoint;
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

pub const DEFAULT_TAIL_FRACTION: f64 = 0.1;
pub const MIN_TAIL_STATES: usize = 10;

/// Centroid and spread of a trajectory tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaLimitEstimate<T> {
    pub point: PrimalDualPoint<T>,
    /// Largest distance of a tail state to `point`.
    pub tail_radius: T,
    pub tail_fraction: T,
    pub tail_states: usize,
}

impl<T: Scalar> OmegaLimitEstimate<T> {
    /// True when the tail has collapsed to within `tol` of its centroid.
    pub fn converged(&self, tol: T) -> bool {
        self.tail_radius < tol
    }
}

pub fn estimate_omega_limit<T: Scalar>(
    traj: &Trajectory<T>,
    tail_fraction: T,
) -> Result<OmegaLimitEstimate<T>> {
    if !(tail_fraction > T::zero() && tail_fraction <= T::one()) {
        return Err(Error::Config(format!(
            "tail fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let len = traj.len();
    let tail_states = ((tail_fraction.to_f64_lossy() * len as f64).ceil() as usize).min(len);
    if tail_states < MIN_TAIL_STATES {
        return Err(Error::TooShort(format!(
            "tail of {tail_states} states (of {len}); need at least {MIN_TAIL_STATES}"
        )));
    }
    let tail = &traj.states[len - tail_states..];
    let count = T::from_usize(tail_states).expect("count fits scalar");
    let width = tail[0].stacked().len();
    let mut centroid = vec![T::zero(); width];
    for s in tail {
        for (c, v) in centroid.iter_mut().zip(s.stacked()) {
            *c = *c + v;
        }
    }
    for c in centroid.iter_mut() {
        *c = *c / count;
    }
    let point = PrimalDualPoint::from_stacked(tail[0].n(), &centroid);
    let tail_radius = tail
        .iter()
        .map(|s| s.distance(&point))
        .fold(T::zero(), |a, d| a.max(d));
    Ok(OmegaLimitEstimate {
        point,
        tail_radius,
        tail_fraction,
        tail_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::ActiveMask;

    fn traj(xs: impl Iterator<Item = (f64, f64)>) -> Trajectory<f64> {
        let states: Vec<_> = xs
            .map(|(x, l)| PrimalDualPoint::raw(vec![x], vec![l]))
            .collect();
        Trajectory {
            times: (0..states.len()).map(|k| k as f64).collect(),
            masks: vec![ActiveMask::inactive(1); states.len()],
            states,
            v_values: None,
            terminated_by: None,
        }
    }

    #[test]
    fn constant_trajectory() {
        let est = estimate_omega_limit(&traj((0..200).map(|_| (1.0, 4.0))), 0.1).unwrap();
        assert_eq!(est.point, PrimalDualPoint::raw(vec![1.0], vec![4.0]));
        assert_eq!(est.tail_radius, 0.0);
        assert_eq!(est.tail_states, 20);
        assert!(est.converged(1e-3));
    }

    #[test]
    fn diverging_input_is_not_converged() {
        let est = estimate_omega_limit(&traj((0..200).map(|k| (k as f64, 0.0))), 0.1).unwrap();
        assert!(est.tail_radius >= 9.0);
        assert!(!est.converged(1e-3));
    }

    #[test]
    fn short_or_bad_fraction() {
        assert!(matches!(
            estimate_omega_limit(&traj((0..50).map(|_| (0.0, 0.0))), 0.1),
            Err(Error::TooShort(_))
        ));
        assert!(estimate_omega_limit(&traj((0..50).map(|_| (0.0, 0.0))), 0.0).is_err());
        assert!(estimate_omega_limit(&traj((0..50).map(|_| (0.0, 0.0))), 1.5).is_err());
        assert!(estimate_omega_limit(&traj((0..50).map(|_| (0.0, 0.0))), 1.0).is_ok());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

/// Discrete mode of the switched-system view of the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Some multiplier sits at zero with `g_i(x) < 0`, so its rate is clamped.
    ProjectionActive,
    ProjectionInactive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSegment<T> {
    pub t_start: T,
    pub t_end: T,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTrace<T> {
    pub segments: Vec<ModeSegment<T>>,
    pub switch_times: Vec<T>,
}

impl<T> ModeTrace<T> {
    pub fn switch_count(&self) -> usize {
        self.switch_times.len()
    }

    pub fn modes(&self) -> Vec<Mode> {
        self.segments.iter().map(|s| s.mode).collect()
    }
}

/// Splits a trajectory into projection-active and -inactive segments using
/// its recorded masks. Switch times are midpoints between the two recorded
/// states that straddle a change, so they resolve to `h * record_stride`.
/// A single-state trajectory yields one zero-length segment.
pub fn extract_mode_trace<T: Scalar>(traj: &Trajectory<T>) -> Result<ModeTrace<T>> {
    if traj.is_empty() || traj.masks.len() != traj.len() {
        return Err(Error::TooShort(
            "mode trace needs a nonempty trajectory with recorded masks".into(),
        ));
    }
    let mode_at = |k: usize| {
        if traj.masks[k].any() {
            Mode::ProjectionActive
        } else {
            Mode::ProjectionInactive
        }
    };
    let half = T::of(0.5);
    let mut segments = Vec::new();
    let mut switch_times = Vec::new();
    let mut start = traj.times[0];
    let mut current = mode_at(0);
    for k in 1..traj.len() {
        let mode = mode_at(k);
        if mode != current {
            let t_switch = (traj.times[k - 1] + traj.times[k]) * half;
            segments.push(ModeSegment {
                t_start: start,
                t_end: t_switch,
                mode: current,
            });
            switch_times.push(t_switch);
            start = t_switch;
            current = mode;
        }
    }
    segments.push(ModeSegment {
        t_start: start,
        t_end: *traj.times.last().expect("nonempty"),
        mode: current,
    });
    Ok(ModeTrace {
        segments,
        switch_times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::PrimalDualPoint;
    use crate::projection::ActiveMask;

    fn traj(bits: &[bool]) -> Trajectory<f64> {
        Trajectory {
            times: (0..bits.len()).map(|k| k as f64).collect(),
            states: bits
                .iter()
                .map(|_| PrimalDualPoint::raw(vec![0.0], vec![0.0]))
                .collect(),
            v_values: None,
            masks: bits
                .iter()
                .map(|&b| ActiveMask { flags: vec![b] })
                .collect(),
            terminated_by: None,
        }
    }

    #[test]
    fn interior_trajectory_has_one_segment() {
        let trace = extract_mode_trace(&traj(&[false; 5])).unwrap();
        assert_eq!(trace.switch_count(), 0);
        assert_eq!(trace.modes(), vec![Mode::ProjectionInactive]);
        assert_eq!(
            (trace.segments[0].t_start, trace.segments[0].t_end),
            (0.0, 4.0)
        );
    }

    #[test]
    fn midpoint_switches_and_alternation() {
        let trace = extract_mode_trace(&traj(&[false, false, true, true, true, false])).unwrap();
        assert_eq!(trace.switch_times, vec![1.5, 4.5]);
        assert_eq!(
            trace.modes(),
            vec![
                Mode::ProjectionInactive,
                Mode::ProjectionActive,
                Mode::ProjectionInactive
            ]
        );
        for w in trace.segments.windows(2) {
            assert_eq!(w[0].t_end, w[1].t_start);
            assert_ne!(w[0].mode, w[1].mode);
        }
    }

    #[test]
    fn empty_is_rejected() {
        assert!(extract_mode_trace(&traj(&[])).is_err());
    }

    #[test]
    fn serializes_kebab_case() {
        let trace = extract_mode_trace(&traj(&[true, false])).unwrap();
        let json = serde_json::to_string(&trace).unwrap();
        assert!(json.contains("\"projection-active\""));
        let back: ModeTrace<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
    }
}

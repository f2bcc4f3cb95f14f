use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::integrator::{integrate, IntegratorConfig};
use crate::problem::{ConcaveProgram, PrimalDualPoint, QuadraticProgram};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

use super::modes::{extract_mode_trace, ModeTrace};

/// One perturbation level of the continuity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow<T> {
    pub k: u32,
    /// `2^-k`, the multiple of the direction added to `p0`.
    pub delta: T,
    /// `||p0_k - p0||`
    pub perturbation_norm: T,
    /// Sup over recorded times of the distance to the base trajectory.
    pub sup_distance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport<T> {
    pub rows: Vec<ContinuityRow<T>>,
    /// Levels whose perturbed start left `K`.
    pub skipped: Vec<u32>,
}

impl<T: Scalar> ContinuityReport<T> {
    pub fn is_nonincreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].sup_distance <= w[0].sup_distance)
    }

    /// Largest `sup_distance / perturbation_norm` over rows with a nonzero
    /// perturbation.
    pub fn max_amplification(&self) -> Option<T> {
        self.rows
            .iter()
            .filter(|r| r.perturbation_norm > T::zero())
            .map(|r| r.sup_distance / r.perturbation_norm)
            .fold(None, |acc: Option<T>, v| Some(acc.map_or(v, |a| a.max(v))))
    }
}

/// Integrates from `p0` and from `p0 + 2^-k direction`, `k = 1..=k_max`, over
/// `[0, horizon]`, and reports the sup-distance of each perturbed trajectory
/// to the base one. Perturbed starts outside `K` are skipped with a warning.
pub fn continuity_experiment<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p0: &PrimalDualPoint<T>,
    direction: &[T],
    k_max: u32,
    horizon: T,
    cfg: &IntegratorConfig<T>,
) -> Result<ContinuityReport<T>> {
    check_len("direction", prog.n() + prog.m(), direction.len())?;
    if k_max == 0 {
        return Err(Error::Config("k_max must be at least 1".into()));
    }
    let cfg = IntegratorConfig {
        horizon,
        ..cfg.clone()
    };
    let base = integrate(prog, p0, &cfg, None, None)?;
    let start = p0.stacked();
    let levels: Vec<u32> = (1..=k_max).collect();
    let runs: Vec<(u32, Option<Result<ContinuityRow<T>>>)> = levels
        .par_iter()
        .map(|&k| {
            let delta = T::of(0.5f64.powi(k as i32));
            let moved = crate::linalg::axpy(delta, direction, &start);
            let perturbed = PrimalDualPoint::from_stacked(prog.n(), &moved);
            if !perturbed.is_in_domain() {
                return (k, None);
            }
            let row = integrate(prog, &perturbed, &cfg, None, None).map(|traj| ContinuityRow {
                k,
                delta,
                perturbation_norm: perturbed.distance(p0),
                sup_distance: traj.sup_distance(&base),
            });
            (k, Some(row))
        })
        .collect();
    let mut report = ContinuityReport {
        rows: Vec::new(),
        skipped: Vec::new(),
    };
    for (k, run) in runs {
        match run {
            Some(row) => report.rows.push(row?),
            None => {
                log::warn!("perturbation level k = {k} leaves the domain; skipped");
                report.skipped.push(k);
            }
        }
    }
    Ok(report)
}

/// Two starts that are close, whose trajectories stay close, yet whose mode
/// traces differ: no switch for `base`, two switches for `perturbed`.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleWitness<T> {
    pub p_base: PrimalDualPoint<T>,
    pub p_pert: PrimalDualPoint<T>,
    pub initial_distance: T,
    pub trace_base: ModeTrace<T>,
    pub trace_pert: ModeTrace<T>,
    pub sup_distance: T,
    pub traj_base: Trajectory<T>,
    pub traj_pert: Trajectory<T>,
}

/// Largest admissible distance between the two witness starts.
pub const WITNESS_MAX_INITIAL_DISTANCE: f64 = 1e-2;
/// Largest admissible sup-distance between the two witness trajectories.
pub const WITNESS_MAX_SUP_DISTANCE: f64 = 0.1;

/// Candidate primal coordinates of the witness search as `(first, step, count)`:
/// `0.30, 0.35, ..., 0.90`.
pub const WITNESS_X_GRID: (f64, f64, usize) = (0.30, 0.05, 13);
/// Candidate multipliers, `0.005, 0.010, ..., 0.500`.
pub const WITNESS_LAMBDA_GRID: (f64, f64, usize) = (0.005, 0.005, 100);

impl<T: Scalar> CounterexampleWitness<T> {
    pub fn satisfies_claim(&self) -> bool {
        self.trace_base.switch_count() == 0
            && self.trace_pert.switch_count() == 2
            && self.initial_distance.to_f64_lossy() <= WITNESS_MAX_INITIAL_DISTANCE
            && self.sup_distance.to_f64_lossy() < WITNESS_MAX_SUP_DISTANCE
    }
}

/// Searches the fixed grid `x in {0.30, 0.35, .., 0.90}`,
/// `lambda in {0.005, 0.010, .., 0.5}` for the lowest `lambda` in a column
/// whose trajectory never touches the active mode while the grid point just
/// below it switches in and out. The program must be the `f(x) = -(x-5)^2`,
/// `g(x) = x^2 - 1` instance.
pub fn counterexample_witness<T: Scalar>(
    prog: &QuadraticProgram<T>,
    horizon: T,
    cfg: &IntegratorConfig<T>,
) -> Result<CounterexampleWitness<T>> {
    if !prog.is_example1() {
        return Err(Error::Config(
            "counterexample search is defined for f(x) = -(x-5)^2, g(x) = x^2 - 1 only".into(),
        ));
    }
    let cfg = IntegratorConfig {
        horizon,
        ..cfg.clone()
    };
    let run = |x: f64, l: f64| -> Result<(Trajectory<T>, ModeTrace<T>)> {
        let p = PrimalDualPoint::new(vec![T::of(x)], vec![T::of(l)])?;
        let traj = integrate(prog, &p, &cfg, None, None)?;
        let trace = extract_mode_trace(&traj)?;
        Ok((traj, trace))
    };

    let (x0, dx, nx) = WITNESS_X_GRID;
    let (l0, dl, nl) = WITNESS_LAMBDA_GRID;
    for i in 0..nx {
        let x = x0 + dx * i as f64;
        let mut below: Option<(f64, Trajectory<T>, ModeTrace<T>)> = None;
        for j in 0..nl {
            let l = l0 + dl * j as f64;
            let (traj, trace) = run(x, l)?;
            match trace.switch_count() {
                0 => {
                    if let Some((l_pert, traj_pert, trace_pert)) = below.take() {
                        let p_base = traj.states[0].clone();
                        let p_pert = traj_pert.states[0].clone();
                        let witness = CounterexampleWitness {
                            initial_distance: p_base.distance(&p_pert),
                            sup_distance: traj.sup_distance(&traj_pert),
                            p_base,
                            p_pert,
                            trace_base: trace,
                            trace_pert,
                            traj_base: traj,
                            traj_pert,
                        };
                        if witness.satisfies_claim() {
                            return Ok(witness);
                        }
                        log::debug!("pair at x = {x}, lambda = {l}/{l_pert} rejected");
                    }
                    // higher multipliers in this column stay off the boundary
                    break;
                }
                2 => below = Some((l, traj, trace)),
                _ => below = None,
            }
        }
    }
    Err(Error::WitnessNotFound(format!(
        "no 0-switch/2-switch pair on the grid over [0, {horizon}]; \
         extend the horizon or widen the search grid"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{load_quadratic, QuadraticProgramSpec};

    fn example1() -> QuadraticProgram<f64> {
        load_quadratic(&QuadraticProgramSpec::example1()).unwrap()
    }

    fn short_cfg() -> IntegratorConfig<f64> {
        IntegratorConfig {
            stop_kkt_tol: 0.0,
            ..Default::default()
        }
    }

    #[test]
    fn zero_direction_gives_zero_distances() {
        let prog = example1();
        let p0 = PrimalDualPoint::new(vec![0.5], vec![0.5]).unwrap();
        let report = continuity_experiment(&prog, &p0, &[0.0, 0.0], 3, 2.0, &short_cfg()).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.sup_distance == 0.0));
        assert_eq!(report.max_amplification(), None);
    }

    #[test]
    fn leaving_domain_is_skipped() {
        let prog = example1();
        let p0 = PrimalDualPoint::new(vec![0.5], vec![0.1]).unwrap();
        let report = continuity_experiment(&prog, &p0, &[0.0, -0.3], 3, 1.0, &short_cfg()).unwrap();
        assert_eq!(report.skipped, vec![1]);
        assert_eq!(
            report.rows.iter().map(|r| r.k).collect::<Vec<_>>(),
            vec![2, 3]
        );
    }

    #[test]
    fn rejects_other_programs() {
        let mut spec = QuadraticProgramSpec::example1();
        spec.q = vec![8.0];
        let prog: QuadraticProgram<f64> = load_quadratic(&spec).unwrap();
        assert!(matches!(
            counterexample_witness(&prog, 5.0, &short_cfg()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn too_short_horizon_finds_nothing() {
        assert!(matches!(
            counterexample_witness(&example1(), 0.01, &short_cfg()),
            Err(Error::WitnessNotFound(_))
        ));
    }
}

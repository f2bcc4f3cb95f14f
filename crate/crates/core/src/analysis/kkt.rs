use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::problem::{grad_x_lagrangian, ConcaveProgram, PrimalDualPoint, SaddlePoint};
use crate::scalar::Scalar;

/// Residuals of the four KKT conditions at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktReport<T> {
    /// `||grad f(x) - sum_i lambda_i grad g_i(x)||`
    pub stationarity: T,
    /// `||max(g(x), 0)||`
    pub primal_feas: T,
    /// `||max(-lambda, 0)||`
    pub dual_feas: T,
    /// `|lambda^T g(x)|`
    pub comp_slack: T,
    /// Maximum of the four.
    pub total: T,
}

/// Accepts points outside `K`; their negative multipliers show up in `dual_feas`.
pub fn kkt_residual<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
) -> Result<KktReport<T>> {
    let stationarity = norm(&grad_x_lagrangian(prog, p)?);
    let g = prog.constraints(&p.x);
    let positive = |v: &mut dyn Iterator<Item = T>| {
        v.fold(T::zero(), |acc, a| {
            let a = a.max(T::zero());
            acc + a * a
        })
    };
    let primal_feas = positive(&mut g.iter().copied()).sqrt();
    let dual_feas = positive(&mut p.lambda.iter().map(|&l| -l)).sqrt();
    let comp_slack = dot(&p.lambda, &g).abs();
    let total = stationarity.max(primal_feas).max(dual_feas).max(comp_slack);
    Ok(KktReport {
        stationarity,
        primal_feas,
        dual_feas,
        comp_slack,
        total,
    })
}

/// Promotes `candidate` to a [`SaddlePoint`] when its KKT residual is at
/// most `tol`.
pub fn certify_saddle<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    candidate: &PrimalDualPoint<T>,
    tol: T,
) -> Result<SaddlePoint<T>> {
    let report = kkt_residual(prog, candidate)?;
    if report.total <= tol {
        Ok(SaddlePoint::new_unchecked(
            candidate.x.clone(),
            candidate.lambda.clone(),
        ))
    } else {
        Err(Error::Domain(format!(
            "candidate {candidate} is not a primal-dual optimizer: KKT residual {} > {tol}",
            report.total
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{load_quadratic, QuadraticProgram, QuadraticProgramSpec};

    fn example1() -> QuadraticProgram<f64> {
        load_quadratic(&QuadraticProgramSpec::example1()).unwrap()
    }

    #[test]
    fn optimizer_has_zero_residual() {
        let prog = example1();
        let r = kkt_residual(&prog, &PrimalDualPoint::raw(vec![1.0], vec![4.0])).unwrap();
        assert_eq!(r.total, 0.0);
        assert!(certify_saddle(&prog, &PrimalDualPoint::raw(vec![1.0], vec![4.0]), 0.0).is_ok());
    }

    #[test]
    fn origin_residuals() {
        let prog = example1();
        let r = kkt_residual(&prog, &PrimalDualPoint::raw(vec![0.0], vec![0.0])).unwrap();
        assert_eq!(
            (
                r.stationarity,
                r.primal_feas,
                r.dual_feas,
                r.comp_slack,
                r.total
            ),
            (10.0, 0.0, 0.0, 0.0, 10.0)
        );
        assert!(certify_saddle(&prog, &PrimalDualPoint::raw(vec![0.0], vec![0.0]), 1e-6).is_err());
    }

    #[test]
    fn infeasible_and_negative_multiplier() {
        let prog = example1();
        // x = 2: g = 3; lambda = -1
        let r = kkt_residual(&prog, &PrimalDualPoint::raw(vec![2.0], vec![-1.0])).unwrap();
        assert_eq!(r.primal_feas, 3.0);
        assert_eq!(r.dual_feas, 1.0);
        assert_eq!(r.comp_slack, 3.0);
        // stationarity: -2(2-5) - (-1)(4) = 10
        assert_eq!(r.stationarity, 10.0);
        let r = kkt_residual(&prog, &PrimalDualPoint::raw(vec![2.0], vec![1.5])).unwrap();
        assert_eq!(r.dual_feas, 0.0);
    }
}

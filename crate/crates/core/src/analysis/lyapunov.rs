use crate::dynamics::{field_primal_dual, field_with_gains, GainMatrices};
use crate::error::{check_len, Result};
use crate::linalg::dot;
use crate::problem::{ConcaveProgram, PrimalDualPoint, SaddlePoint};
use crate::scalar::Scalar;

fn offset<T: Scalar>(saddle: &SaddlePoint<T>, p: &PrimalDualPoint<T>) -> Result<Vec<T>> {
    check_len("x", saddle.x_star.len(), p.x.len())?;
    check_len("lambda", saddle.lambda_star.len(), p.lambda.len())?;
    Ok(p.x
        .iter()
        .zip(&saddle.x_star)
        .chain(p.lambda.iter().zip(&saddle.lambda_star))
        .map(|(&a, &b)| a - b)
        .collect())
}

/// `V = 1/2 (||x - x*||^2 + ||lambda - lambda*||^2)`.
pub fn lyapunov_value<T: Scalar>(saddle: &SaddlePoint<T>, p: &PrimalDualPoint<T>) -> Result<T> {
    let d = offset(saddle, p)?;
    Ok(T::of(0.5) * dot(&d, &d))
}

/// `V' = 1/2 ((x - x*)^T K1^-1 (x - x*) + (lambda - lambda*)^T K2^-1 (lambda - lambda*))`.
pub fn lyapunov_value_gains<T: Scalar>(
    saddle: &SaddlePoint<T>,
    gains: &GainMatrices<T>,
    p: &PrimalDualPoint<T>,
) -> Result<T> {
    gains.check_dims(saddle.x_star.len(), saddle.lambda_star.len())?;
    let d = offset(saddle, p)?;
    Ok(T::of(0.5)
        * d.iter()
            .zip(gains.stacked())
            .fold(T::zero(), |acc, (&di, k)| acc + di * di / k))
}

/// Gradient of `V` (or of `V'` when `gains` is given) at `p`.
pub fn lyapunov_gradient<T: Scalar>(
    saddle: &SaddlePoint<T>,
    gains: Option<&GainMatrices<T>>,
    p: &PrimalDualPoint<T>,
) -> Result<Vec<T>> {
    let mut d = offset(saddle, p)?;
    if let Some(g) = gains {
        g.check_dims(saddle.x_star.len(), saddle.lambda_star.len())?;
        for (di, k) in d.iter_mut().zip(g.stacked()) {
            *di = *di / k;
        }
    }
    Ok(d)
}

/// `grad V(p)^T X_pd(p)`, or `grad V'(p)^T (K X_pd(p))` with gains.
pub fn lie_derivative<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    saddle: &SaddlePoint<T>,
    p: &PrimalDualPoint<T>,
    gains: Option<&GainMatrices<T>>,
) -> Result<T> {
    let grad = lyapunov_gradient(saddle, gains, p)?;
    let (field, _) = match gains {
        Some(g) => field_with_gains(prog, g, p)?,
        None => field_primal_dual(prog, p)?,
    };
    Ok(dot(&grad, &field))
}

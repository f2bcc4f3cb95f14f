//! The positive projection `[a]_b^+` and projections onto
//! `K = R^n x R^m_{>=0}`.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::problem::PrimalDualPoint;
use crate::scalar::Scalar;

/// Multiplier magnitude below which [`ActiveMask::diagnose`] treats a
/// component as sitting on the boundary.
pub const LAMBDA_BOUNDARY_TOL: f64 = 1e-12;

/// Which multiplier components are clamped by the projection.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ActiveMask {
    pub flags: Vec<bool>,
}

impl ActiveMask {
    pub fn inactive(m: usize) -> Self {
        Self {
            flags: vec![false; m],
        }
    }

    /// True if any component is clamped.
    pub fn any(&self) -> bool {
        self.flags.iter().any(|&f| f)
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn to_bitstring(&self) -> String {
        self.flags
            .iter()
            .map(|&f| if f { '1' } else { '0' })
            .collect()
    }

    pub fn from_bitstring(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '1' => Some(true),
                '0' => Some(false),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|flags| Self { flags })
    }

    /// Mask for a state of unknown provenance: component `i` is active when
    /// `lambda_i <= LAMBDA_BOUNDARY_TOL` and `g_i < 0`.
    pub fn diagnose<T: Scalar>(lambda: &[T], g: &[T]) -> Self {
        let tol = T::of(LAMBDA_BOUNDARY_TOL);
        Self {
            flags: lambda
                .iter()
                .zip(g)
                .map(|(&l, &gi)| l <= tol && gi < T::zero())
                .collect(),
        }
    }
}

/// `[a]_b^+`: `a` if `b > 0`, `max(0, a)` if `b == 0`.
pub fn positive_projection_scalar<T: Scalar>(a: T, b: T) -> Result<T> {
    if b > T::zero() {
        Ok(a)
    } else if b == T::zero() {
        Ok(a.max(T::zero()))
    } else {
        Err(Error::Domain(format!(
            "[a]_b^+ requires b >= 0, got b = {b}"
        )))
    }
}

/// Componentwise `[a_i]_{b_i}^+` together with the clamped components.
pub fn positive_projection_vec<T: Scalar>(a: &[T], b: &[T]) -> Result<(Vec<T>, ActiveMask)> {
    check_len("b", a.len(), b.len())?;
    let mut out = Vec::with_capacity(a.len());
    let mut flags = Vec::with_capacity(a.len());
    for (&ai, &bi) in a.iter().zip(b) {
        let v = positive_projection_scalar(ai, bi)?;
        flags.push(v != ai);
        out.push(v);
    }
    Ok((out, ActiveMask { flags }))
}

/// Nearest point of `K` to `y`: the last `m` components are clamped at zero.
/// Clamped components are written as exact `0.0`.
pub fn project_onto_domain<T: Scalar>(n: usize, y: &[T]) -> Vec<T> {
    y.iter()
        .enumerate()
        .map(|(j, &v)| {
            if j >= n && v < T::zero() {
                T::zero()
            } else {
                v
            }
        })
        .collect()
}

/// [`project_onto_domain`] on a split point.
pub fn project_point<T: Scalar>(p: &PrimalDualPoint<T>) -> PrimalDualPoint<T> {
    PrimalDualPoint::raw(
        p.x.clone(),
        p.lambda
            .iter()
            .map(|&l| if l < T::zero() { T::zero() } else { l })
            .collect(),
    )
}

/// Vector projection of `v` at `p` with respect to `K`: the limit of
/// `(proj_K(p + delta v) - p) / delta` as `delta -> 0+`.
///
/// On `K` this zeroes component `n + i` exactly when `lambda_i == 0` and
/// `v_{n+i} < 0`.
pub fn vector_projection<T: Scalar>(
    p: &PrimalDualPoint<T>,
    v: &[T],
) -> Result<(Vec<T>, ActiveMask)> {
    p.check_domain()?;
    let n = p.n();
    check_len("v", n + p.m(), v.len())?;
    let mut out = v.to_vec();
    let mut flags = vec![false; p.m()];
    for (i, &l) in p.lambda.iter().enumerate() {
        if l == T::zero() && v[n + i] < T::zero() {
            out[n + i] = T::zero();
            flags[i] = true;
        }
    }
    Ok((out, ActiveMask { flags }))
}

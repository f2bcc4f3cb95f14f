//! Primal-dual vector fields.
//!
//! Sign convention: the multiplier block of every field here is `g(x)`,
//! which equals `-grad_lambda L(x, lambda)`. Nothing outside this module
//! negates `grad_lambda_lagrangian`.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::problem::{grad_x_lagrangian, ConcaveProgram, PrimalDualPoint};
use crate::projection::{positive_projection_vec, vector_projection, ActiveMask};
use crate::scalar::Scalar;

/// Diagonal positive definite gains `K1` (primal) and `K2` (dual).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainMatrices<T> {
    k1: Vec<T>,
    k2: Vec<T>,
}

impl<T: Scalar> GainMatrices<T> {
    pub fn new(k1: Vec<T>, k2: Vec<T>) -> Result<Self> {
        for (name, diag) in [("K1", &k1), ("K2", &k2)] {
            if let Some(i) = diag.iter().position(|&k| !(k > T::zero() && k.is_finite())) {
                return Err(Error::Config(format!(
                    "gain {name}[{i}] = {} must be positive",
                    diag[i]
                )));
            }
        }
        Ok(Self { k1, k2 })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            k1: vec![T::one(); n],
            k2: vec![T::one(); m],
        }
    }

    pub fn k1(&self) -> &[T] {
        &self.k1
    }

    pub fn k2(&self) -> &[T] {
        &self.k2
    }

    /// Diagonal of `diag(K1, K2)`.
    pub fn stacked(&self) -> Vec<T> {
        self.k1.iter().chain(&self.k2).copied().collect()
    }

    pub(crate) fn check_dims(&self, n: usize, m: usize) -> Result<()> {
        check_len("K1", n, self.k1.len())?;
        check_len("K2", m, self.k2.len())
    }

    pub(crate) fn scale(&self, v: &mut [T]) {
        for (vi, &k) in v.iter_mut().zip(self.k1.iter().chain(&self.k2)) {
            *vi = *vi * k;
        }
    }
}

/// `X(x, lambda) = [grad_x L; g(x)]`, defined on all of `R^n x R^m`.
pub fn field_unprojected<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
) -> Result<Vec<T>> {
    let mut field = grad_x_lagrangian(prog, p)?;
    field.extend(prog.constraints(&p.x));
    Ok(field)
}

/// `X_pd(x, lambda) = [grad_x L; [g(x)]_lambda^+]` on `K`, with the clamped
/// multiplier components.
pub fn field_primal_dual<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
) -> Result<(Vec<T>, ActiveMask)> {
    p.check_domain()?;
    let mut field = grad_x_lagrangian(prog, p)?;
    let (dual, mask) = positive_projection_vec(&prog.constraints(&p.x), &p.lambda)?;
    field.extend(dual);
    Ok((field, mask))
}

/// `[K1 grad_x L; K2 [g(x)]_lambda^+]`.
pub fn field_with_gains<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    gains: &GainMatrices<T>,
    p: &PrimalDualPoint<T>,
) -> Result<(Vec<T>, ActiveMask)> {
    gains.check_dims(prog.n(), prog.m())?;
    let (mut field, mask) = field_primal_dual(prog, p)?;
    gains.scale(&mut field);
    Ok((field, mask))
}

/// Checks `X_pd(p) == Pi_K(p, X(p))` exactly. Returns false if either side
/// fails to evaluate.
pub fn verify_projection_identity<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
) -> bool {
    let lhs = field_primal_dual(prog, p);
    let rhs = field_unprojected(prog, p).and_then(|raw| vector_projection(p, &raw));
    match (lhs, rhs) {
        (Ok((a, mask_a)), Ok((b, mask_b))) => a == b && mask_a == mask_b,
        _ => false,
    }
}

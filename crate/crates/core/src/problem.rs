//! Concave programs `maximize f(x) s.t. g(x) <= 0`, their Lagrangian, and the
//! serializable quadratic subclass used for problem files.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, mat_vec};
use crate::scalar::Scalar;

/// Minimum eigenvalue of `P` accepted as strictly concave.
pub const MIN_CONCAVITY_EIGENVALUE: f64 = 1e-9;
/// Most negative eigenvalue of a constraint Hessian still accepted as convex.
pub const MAX_CONVEXITY_DEFECT: f64 = -1e-9;

/// A concave objective with convex inequality constraints and analytic
/// first derivatives.
///
/// Implementors must be strictly concave in `f` and convex in every `g_i`;
/// [`check_curvature`] and [`check_gradients`] test this on samples.
pub trait ConcaveProgram<T: Scalar>: Send + Sync {
    /// Primal dimension.
    fn n(&self) -> usize;
    /// Number of inequality constraints.
    fn m(&self) -> usize;
    fn objective(&self, x: &[T]) -> T;
    fn objective_grad(&self, x: &[T]) -> Vec<T>;
    fn constraints(&self, x: &[T]) -> Vec<T>;
    /// Constraint Jacobian, one row `grad g_i(x)^T` per constraint.
    fn constraint_jac(&self, x: &[T]) -> Vec<Vec<T>>;
}

impl<T: Scalar, P: ConcaveProgram<T> + ?Sized> ConcaveProgram<T> for &P {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn m(&self) -> usize {
        (**self).m()
    }
    fn objective(&self, x: &[T]) -> T {
        (**self).objective(x)
    }
    fn objective_grad(&self, x: &[T]) -> Vec<T> {
        (**self).objective_grad(x)
    }
    fn constraints(&self, x: &[T]) -> Vec<T> {
        (**self).constraints(x)
    }
    fn constraint_jac(&self, x: &[T]) -> Vec<Vec<T>> {
        (**self).constraint_jac(x)
    }
}

/// A point `(x, lambda)` of `R^n x R^m`.
///
/// Points built with [`PrimalDualPoint::new`] lie in the domain
/// `K = R^n x R^m_{>=0}`; [`PrimalDualPoint::raw`] skips that check for the
/// few callers (residual diagnostics, unprojected fields) that accept any
/// multiplier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalDualPoint<T> {
    pub x: Vec<T>,
    pub lambda: Vec<T>,
}

impl<T: Scalar> PrimalDualPoint<T> {
    pub fn new(x: Vec<T>, lambda: Vec<T>) -> Result<Self> {
        let p = Self { x, lambda };
        p.check_domain()?;
        Ok(p)
    }

    pub fn raw(x: Vec<T>, lambda: Vec<T>) -> Self {
        Self { x, lambda }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_in_domain(&self) -> bool {
        self.lambda.iter().all(|&l| l >= T::zero())
    }

    pub fn check_domain(&self) -> Result<()> {
        match self.lambda.iter().position(|&l| !(l >= T::zero())) {
            None => Ok(()),
            Some(i) => Err(Error::Domain(format!(
                "lambda[{i}] = {} is negative",
                self.lambda[i]
            ))),
        }
    }

    /// `(x, lambda)` as one vector of length `n + m`.
    pub fn stacked(&self) -> Vec<T> {
        self.x.iter().chain(&self.lambda).copied().collect()
    }

    pub fn from_stacked(n: usize, v: &[T]) -> Self {
        Self {
            x: v[..n].to_vec(),
            lambda: v[n..].to_vec(),
        }
    }

    pub fn distance(&self, other: &Self) -> T {
        crate::linalg::distance(&self.stacked(), &other.stacked())
    }

    pub fn norm(&self) -> T {
        crate::linalg::norm(&self.stacked())
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.lambda).all(|v| v.is_finite())
    }

    pub(crate) fn check_dims<P: ConcaveProgram<T> + ?Sized>(&self, prog: &P) -> Result<()> {
        check_len("x", prog.n(), self.x.len())?;
        check_len("lambda", prog.m(), self.lambda.len())
    }
}

impl<T: Scalar> fmt::Display for PrimalDualPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x = {:?}, lambda = {:?})", self.x, self.lambda)
    }
}

/// A primal-dual optimizer `(x*, lambda*)`, i.e. a saddle point of the
/// Lagrangian over `K`. Obtain a certified one through
/// [`crate::analysis::certify_saddle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint<T> {
    pub x_star: Vec<T>,
    pub lambda_star: Vec<T>,
}

impl<T: Scalar> SaddlePoint<T> {
    /// Wraps a candidate without certification.
    pub fn new_unchecked(x_star: Vec<T>, lambda_star: Vec<T>) -> Self {
        Self {
            x_star,
            lambda_star,
        }
    }

    pub fn as_point(&self) -> PrimalDualPoint<T> {
        PrimalDualPoint::raw(self.x_star.clone(), self.lambda_star.clone())
    }
}

/// `L(x, lambda) = f(x) - lambda^T g(x)`.
pub fn lagrangian<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
) -> Result<T> {
    p.check_dims(prog)?;
    Ok(prog.objective(&p.x) - dot(&p.lambda, &prog.constraints(&p.x)))
}

/// `grad_x L = grad f(x) - sum_i lambda_i grad g_i(x)`.
pub fn grad_x_lagrangian<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
) -> Result<Vec<T>> {
    p.check_dims(prog)?;
    let mut grad = prog.objective_grad(&p.x);
    for (row, &l) in prog.constraint_jac(&p.x).iter().zip(&p.lambda) {
        if l != T::zero() {
            for (gj, &rj) in grad.iter_mut().zip(row) {
                *gj = *gj - l * rj;
            }
        }
    }
    Ok(grad)
}

/// `grad_lambda L = -g(x)`; independent of `lambda`.
pub fn grad_lambda_lagrangian<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    p: &PrimalDualPoint<T>,
) -> Result<Vec<T>> {
    p.check_dims(prog)?;
    Ok(prog.constraints(&p.x).into_iter().map(|g| -g).collect())
}

/// One quadratic constraint `g(x) = 1/2 x^T A x + b^T x + d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticConstraintSpec {
    /// Row-major `n x n` symmetric positive semidefinite matrix.
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub d: f64,
}

/// Serializable concave quadratic program:
/// `f(x) = -1/2 x^T P x + q^T x + c` with quadratic convex constraints.
///
/// This is the JSON problem-file schema. `saddle` optionally carries a known
/// primal-dual optimizer used as the Lyapunov reference by certification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticProgramSpec {
    pub n: usize,
    pub m: usize,
    /// Row-major `n x n` symmetric positive definite matrix.
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub c: f64,
    #[serde(default)]
    pub constraints: Vec<QuadraticConstraintSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saddle: Option<SaddlePoint<f64>>,
}

impl QuadraticProgramSpec {
    /// `f(x) = -(x - 5)^2`, `g(x) = x^2 - 1`; optimizer `(1, 4)`.
    pub fn example1() -> Self {
        Self {
            n: 1,
            m: 1,
            p: vec![2.0],
            q: vec![10.0],
            c: -25.0,
            constraints: vec![QuadraticConstraintSpec {
                a: vec![2.0],
                b: vec![0.0],
                d: -1.0,
            }],
            saddle: Some(SaddlePoint::new_unchecked(vec![1.0], vec![4.0])),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem spec serializes")
    }

    /// Same program data, ignoring the optional saddle annotation.
    pub fn same_program(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.p == other.p
            && self.q == other.q
            && self.c == other.c
            && self.constraints == other.constraints
    }

    /// Checks shapes, symmetry, strict concavity of `f` and convexity of each `g_i`.
    pub fn validate(&self) -> Result<()> {
        self.validate_shapes()?;
        let n = self.n;
        let min_p = min_symmetric_eigenvalue(n, &self.p);
        if !(min_p > MIN_CONCAVITY_EIGENVALUE) {
            return Err(Error::Validation {
                what: format!(
                    "P is not positive definite (threshold {MIN_CONCAVITY_EIGENVALUE:e})"
                ),
                eigenvalue: min_p,
            });
        }
        for (i, con) in self.constraints.iter().enumerate() {
            let min_a = min_symmetric_eigenvalue(n, &con.a);
            if !(min_a >= MAX_CONVEXITY_DEFECT) {
                return Err(Error::Validation {
                    what: format!("constraints[{i}].A is not positive semidefinite"),
                    eigenvalue: min_a,
                });
            }
        }
        Ok(())
    }

    fn validate_shapes(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Malformed("n must be positive".into()));
        }
        check_len("P", n * n, self.p.len())?;
        check_len("q", n, self.q.len())?;
        check_len("constraints", self.m, self.constraints.len())?;
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&self.p) || !finite(&self.q) || !self.c.is_finite() {
            return Err(Error::Malformed("objective data must be finite".into()));
        }
        check_symmetric("P", n, &self.p)?;
        for con in &self.constraints {
            check_len("A", n * n, con.a.len())?;
            check_len("b", n, con.b.len())?;
            if !finite(&con.a) || !finite(&con.b) || !con.d.is_finite() {
                return Err(Error::Malformed("constraint data must be finite".into()));
            }
            check_symmetric("A", n, &con.a)?;
        }
        if let Some(s) = &self.saddle {
            check_len("saddle.x_star", n, s.x_star.len())?;
            check_len("saddle.lambda_star", self.m, s.lambda_star.len())?;
        }
        Ok(())
    }
}

fn check_symmetric(name: &str, n: usize, mat: &[f64]) -> Result<()> {
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (mat[i * n + j], mat[j * n + i]);
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::Malformed(format!(
                    "{name} is not symmetric at ({i}, {j}): {a} vs {b}"
                )));
            }
        }
    }
    Ok(())
}

fn min_symmetric_eigenvalue(n: usize, row_major: &[f64]) -> f64 {
    let mat = DMatrix::from_row_slice(n, n, row_major);
    mat.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
struct QuadraticConstraint<T> {
    a: Vec<T>,
    b: Vec<T>,
    d: T,
    linear: bool,
}

/// In-memory quadratic program with closed-form derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProgram<T> {
    n: usize,
    p: Vec<T>,
    q: Vec<T>,
    c: T,
    constraints: Vec<QuadraticConstraint<T>>,
}

/// Validates `spec` and builds the program in scalar type `T`.
pub fn load_quadratic<T: Scalar>(spec: &QuadraticProgramSpec) -> Result<QuadraticProgram<T>> {
    spec.validate()?;
    Ok(QuadraticProgram::from_spec_unchecked(spec))
}

impl<T: Scalar> QuadraticProgram<T> {
    /// Builds the program without the curvature checks. Shapes must still be
    /// consistent; used for negative-control fixtures.
    pub fn from_spec_unchecked(spec: &QuadraticProgramSpec) -> Self {
        let conv = |v: &[f64]| v.iter().map(|&x| T::of(x)).collect::<Vec<T>>();
        Self {
            n: spec.n,
            p: conv(&spec.p),
            q: conv(&spec.q),
            c: T::of(spec.c),
            constraints: spec
                .constraints
                .iter()
                .map(|con| QuadraticConstraint {
                    a: conv(&con.a),
                    b: conv(&con.b),
                    d: T::of(con.d),
                    linear: con.a.iter().all(|&v| v == 0.0),
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> QuadraticProgramSpec {
        let conv = |v: &[T]| v.iter().map(|x| x.to_f64_lossy()).collect::<Vec<f64>>();
        QuadraticProgramSpec {
            n: self.n,
            m: self.constraints.len(),
            p: conv(&self.p),
            q: conv(&self.q),
            c: self.c.to_f64_lossy(),
            constraints: self
                .constraints
                .iter()
                .map(|con| QuadraticConstraintSpec {
                    a: conv(&con.a),
                    b: conv(&con.b),
                    d: con.d.to_f64_lossy(),
                })
                .collect(),
            saddle: None,
        }
    }

    pub fn is_example1(&self) -> bool {
        self.to_spec()
            .same_program(&QuadraticProgramSpec::example1())
    }
}

impl<T: Scalar> ConcaveProgram<T> for QuadraticProgram<T> {
    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.constraints.len()
    }

    fn objective(&self, x: &[T]) -> T {
        let half = T::of(0.5);
        -half * dot(x, &mat_vec(&self.p, x)) + dot(&self.q, x) + self.c
    }

    fn objective_grad(&self, x: &[T]) -> Vec<T> {
        mat_vec(&self.p, x)
            .into_iter()
            .zip(&self.q)
            .map(|(px, &q)| q - px)
            .collect()
    }

    fn constraints(&self, x: &[T]) -> Vec<T> {
        let half = T::of(0.5);
        self.constraints
            .iter()
            .map(|con| {
                let quad = if con.linear {
                    T::zero()
                } else {
                    half * dot(x, &mat_vec(&con.a, x))
                };
                quad + dot(&con.b, x) + con.d
            })
            .collect()
    }

    fn constraint_jac(&self, x: &[T]) -> Vec<Vec<T>> {
        self.constraints
            .iter()
            .map(|con| {
                if con.linear {
                    con.b.clone()
                } else {
                    mat_vec(&con.a, x)
                        .into_iter()
                        .zip(&con.b)
                        .map(|(ax, &b)| ax + b)
                        .collect()
                }
            })
            .collect()
    }
}

type ScalarFn<T> = Box<dyn Fn(&[T]) -> T + Send + Sync>;
type VectorFn<T> = Box<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
type MatrixFn<T> = Box<dyn Fn(&[T]) -> Vec<Vec<T>> + Send + Sync>;

/// A program assembled from user-supplied evaluators.
pub struct ClosureProgram<T> {
    n: usize,
    m: usize,
    objective: ScalarFn<T>,
    objective_grad: VectorFn<T>,
    constraints: VectorFn<T>,
    constraint_jac: MatrixFn<T>,
}

impl<T: Scalar> ClosureProgram<T> {
    pub fn new(
        n: usize,
        m: usize,
        objective: impl Fn(&[T]) -> T + Send + Sync + 'static,
        objective_grad: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
        constraints: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
        constraint_jac: impl Fn(&[T]) -> Vec<Vec<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            n,
            m,
            objective: Box::new(objective),
            objective_grad: Box::new(objective_grad),
            constraints: Box::new(constraints),
            constraint_jac: Box::new(constraint_jac),
        }
    }
}

impl<T> fmt::Debug for ClosureProgram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureProgram")
            .field("n", &self.n)
            .field("m", &self.m)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> ConcaveProgram<T> for ClosureProgram<T> {
    fn n(&self) -> usize {
        self.n
    }
    fn m(&self) -> usize {
        self.m
    }
    fn objective(&self, x: &[T]) -> T {
        (self.objective)(x)
    }
    fn objective_grad(&self, x: &[T]) -> Vec<T> {
        (self.objective_grad)(x)
    }
    fn constraints(&self, x: &[T]) -> Vec<T> {
        (self.constraints)(x)
    }
    fn constraint_jac(&self, x: &[T]) -> Vec<Vec<T>> {
        (self.constraint_jac)(x)
    }
}

/// Outcome of the optional Slater check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlaterCheck {
    /// `g(candidate) < 0` componentwise.
    Satisfied,
    /// The candidate is not strictly feasible; carries `max_i g_i`.
    Violated {
        max_constraint: f64,
    },
    Skipped,
}

/// Evaluates `g` at a user-supplied interior candidate. Without a candidate
/// the check is skipped with a warning.
pub fn check_slater<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    candidate: Option<&[T]>,
) -> Result<SlaterCheck> {
    let Some(x) = candidate else {
        log::warn!("no interior candidate supplied; Slater's condition not checked");
        return Ok(SlaterCheck::Skipped);
    };
    check_len("candidate", prog.n(), x.len())?;
    let worst = prog
        .constraints(x)
        .into_iter()
        .fold(f64::NEG_INFINITY, |acc, g| acc.max(g.to_f64_lossy()));
    if prog.m() == 0 || worst < 0.0 {
        Ok(SlaterCheck::Satisfied)
    } else {
        Ok(SlaterCheck::Violated {
            max_constraint: worst,
        })
    }
}

/// Sampled curvature audit: counts midpoint inequalities that fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CurvatureCheck {
    pub samples: usize,
    pub concavity_violations: usize,
    pub convexity_violations: usize,
}

impl CurvatureCheck {
    pub fn passed(&self) -> bool {
        self.concavity_violations == 0 && self.convexity_violations == 0
    }
}

/// Draws `samples` random pairs `x != y` in `[-scale, scale]^n` and `theta in (0, 1)`
/// and checks `f(theta x + (1 - theta) y) > theta f(x) + (1 - theta) f(y)`
/// and the reverse (non-strict) inequality for each `g_i`.
pub fn check_curvature<T: Scalar, P: ConcaveProgram<T> + ?Sized>(
    prog: &P,
    samples: usize,
    scale: f64,
    seed: u64,
) -> CurvatureCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = prog.n();
    let mut out = CurvatureCheck {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let x: Vec<T> = (0..n)
            .map(|_| T::of(rng.gen_range(-scale..scale)))
            .collect();
        let y: Vec<T> = (0..n)
            .map(|_| T::of(rng.gen_range(-scale..scale)))
            .collect();
        let theta = T::of(rng.gen_range(0.05..0.95));
        let mid: Vec<T> = x
            .iter()
            .zip(&y)
            .map(|(&a, &b)| theta * a + (T::one() - theta) * b)
            .collect();
        let chord = |fx: T, fy: T| theta * fx + (T::one() - theta) * fy;
        if !(prog.objective(&mid) > chord(prog.objective(&x), prog.objective(&y))) {
            out.concavity_violations += 1;
        }
        let (gm, gx, gy) = (
            prog.constraints(&mid),
            prog.constraints(&x),
            prog.constraints(&y),
        );
        for i in 0..prog.m() {
            let bound = chord(gx[i], gy[i]);
            let slack = T::of(1e-12) * bound.abs().max(T::one());
            if gm[i] > bound + slack {
                out.convexity_violations += 1;
            }
        }
    }
    out
}

/// Largest relative discrepancy between analytic derivatives and central
/// finite differences over the sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GradientCheck {
    pub samples: usize,
    pub objective_max_rel_error: f64,
    pub constraint_max_rel_error: f64,
}

impl GradientCheck {
    pub fn passed(&self, rel_tol: f64) -> bool {
        self.objective_max_rel_error <= rel_tol && self.constraint_max_rel_error <= rel_tol
    }
}

/// `|a - b| / max(|a|, |b|, 1)`
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1.0)
}

/// Central difference of `func` along coordinate `j` at `x`.
pub fn central_difference(func: impl Fn(&[f64]) -> f64, x: &[f64], j: usize) -> f64 {
    let step = 1e-6 * x[j].abs().max(1.0);
    let mut plus = x.to_vec();
    let mut minus = x.to_vec();
    plus[j] += step;
    minus[j] -= step;
    (func(&plus) - func(&minus)) / (2.0 * step)
}

/// Finite-difference audit of `objective_grad` and `constraint_jac` at
/// `samples` points drawn from `[-scale, scale]^n`.
pub fn check_gradients<P: ConcaveProgram<f64> + ?Sized>(
    prog: &P,
    samples: usize,
    scale: f64,
    seed: u64,
) -> GradientCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = prog.n();
    let mut out = GradientCheck {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-scale..scale)).collect();
        let grad = prog.objective_grad(&x);
        let jac = prog.constraint_jac(&x);
        for j in 0..n {
            let fd = central_difference(|z| prog.objective(z), &x, j);
            out.objective_max_rel_error =
                out.objective_max_rel_error.max(relative_error(grad[j], fd));
            for (i, row) in jac.iter().enumerate() {
                let fd = central_difference(|z| prog.constraints(z)[i], &x, j);
                out.constraint_max_rel_error =
                    out.constraint_max_rel_error.max(relative_error(row[j], fd));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> QuadraticProgram<f64> {
        load_quadratic(&QuadraticProgramSpec::example1()).unwrap()
    }

    fn pt(x: f64, l: f64) -> PrimalDualPoint<f64> {
        PrimalDualPoint::new(vec![x], vec![l]).unwrap()
    }

    #[test]
    fn lagrangian_example1() {
        let prog = example1();
        assert_eq!(lagrangian(&prog, &pt(1.0, 4.0)).unwrap(), -16.0);
        assert_eq!(lagrangian(&prog, &pt(0.0, 0.0)).unwrap(), -25.0);
    }

    #[test]
    fn lagrangian_without_constraints_is_objective() {
        let spec = QuadraticProgramSpec {
            n: 2,
            m: 0,
            p: vec![1.0, 0.0, 0.0, 1.0],
            q: vec![0.0, 0.0],
            c: 0.0,
            constraints: vec![],
            saddle: None,
        };
        let prog: QuadraticProgram<f64> = load_quadratic(&spec).unwrap();
        let p = PrimalDualPoint::new(vec![3.0, 4.0], vec![]).unwrap();
        assert_eq!(lagrangian(&prog, &p).unwrap(), -12.5);
        assert_eq!(prog.objective(&[3.0, 4.0]), -12.5);
    }

    #[test]
    fn gradients_example1() {
        let prog = example1();
        assert_eq!(grad_x_lagrangian(&prog, &pt(1.0, 4.0)).unwrap(), vec![0.0]);
        assert_eq!(grad_x_lagrangian(&prog, &pt(0.0, 0.0)).unwrap(), vec![10.0]);
        assert_eq!(
            grad_x_lagrangian(&prog, &pt(2.5, 0.0)).unwrap(),
            prog.objective_grad(&[2.5])
        );
        assert_eq!(
            grad_lambda_lagrangian(&prog, &pt(1.0, 3.0)).unwrap(),
            vec![0.0]
        );
        assert_eq!(
            grad_lambda_lagrangian(&prog, &pt(0.0, 3.0)).unwrap(),
            vec![1.0]
        );
        assert_eq!(
            grad_lambda_lagrangian(&prog, &pt(2.0, 3.0)).unwrap(),
            vec![-3.0]
        );
    }

    #[test]
    fn dimension_mismatch_names_field() {
        let prog = example1();
        let bad = PrimalDualPoint::new(vec![1.0, 2.0], vec![0.0]).unwrap();
        match lagrangian(&prog, &bad) {
            Err(Error::DimensionMismatch {
                field,
                expected,
                got,
            }) => {
                assert_eq!((field, expected, got), ("x", 1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad = PrimalDualPoint::new(vec![1.0], vec![]).unwrap();
        assert!(matches!(
            grad_x_lagrangian(&prog, &bad),
            Err(Error::DimensionMismatch {
                field: "lambda",
                ..
            })
        ));
    }

    #[test]
    fn load_example1_values() {
        let prog = example1();
        assert_eq!(prog.objective(&[5.0]), 0.0);
        assert_eq!(prog.constraints(&[1.0]), vec![0.0]);
        assert!(prog.is_example1());
    }

    #[test]
    fn singular_p_rejected_with_eigenvalue() {
        let mut spec = QuadraticProgramSpec::example1();
        spec.p = vec![0.0];
        match load_quadratic::<f64>(&spec) {
            Err(Error::Validation { eigenvalue, .. }) => assert_eq!(eigenvalue, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nonconvex_constraint_rejected() {
        let mut spec = QuadraticProgramSpec::example1();
        spec.constraints[0].a = vec![-1.0];
        assert!(matches!(
            load_quadratic::<f64>(&spec),
            Err(Error::Validation { eigenvalue, .. }) if eigenvalue == -1.0
        ));
    }

    #[test]
    fn asymmetric_and_misshapen_rejected() {
        let mut spec = QuadraticProgramSpec::example1();
        spec.n = 2;
        spec.p = vec![2.0, 1.0, 0.0, 2.0];
        spec.q = vec![0.0, 0.0];
        spec.constraints.clear();
        spec.m = 0;
        spec.saddle = None;
        assert!(matches!(
            load_quadratic::<f64>(&spec),
            Err(Error::Malformed(_))
        ));
        spec.q = vec![0.0];
        assert!(matches!(
            load_quadratic::<f64>(&spec),
            Err(Error::DimensionMismatch { field: "q", .. })
        ));
    }

    #[test]
    fn parse_error_has_line_context() {
        let text = "{\n  \"n\": 1,\n  \"m\": oops\n}";
        match QuadraticProgramSpec::from_json_str(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_schema_field_names() {
        let text = r#"{"n":1,"m":1,"P":[2.0],"q":[10.0],"c":-25.0,
                       "constraints":[{"A":[2.0],"b":[0.0],"d":-1.0}]}"#;
        let spec = QuadraticProgramSpec::from_json_str(text).unwrap();
        assert!(spec.same_program(&QuadraticProgramSpec::example1()));
        let back = QuadraticProgramSpec::from_json_str(&spec.to_json_string()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn slater() {
        let prog = example1();
        assert_eq!(
            check_slater(&prog, Some(&[0.0][..])).unwrap(),
            SlaterCheck::Satisfied
        );
        assert_eq!(
            check_slater(&prog, Some(&[2.0][..])).unwrap(),
            SlaterCheck::Violated {
                max_constraint: 3.0
            }
        );
        assert_eq!(
            check_slater::<f64, _>(&prog, None).unwrap(),
            SlaterCheck::Skipped
        );
    }

    #[test]
    fn curvature_and_gradients_sampled() {
        let prog = example1();
        assert!(check_curvature(&prog, 200, 10.0, 7).passed());
        assert!(check_gradients(&prog, 100, 10.0, 7).passed(1e-5));

        let mut spec = QuadraticProgramSpec::example1();
        spec.p = vec![-2.0];
        let convex: QuadraticProgram<f64> = QuadraticProgram::from_spec_unchecked(&spec);
        assert!(check_curvature(&convex, 50, 10.0, 7).concavity_violations > 0);
    }

    #[test]
    fn closure_program_matches_quadratic() {
        let closure = ClosureProgram::new(
            1,
            1,
            |x: &[f64]| -(x[0] - 5.0).powi(2),
            |x: &[f64]| vec![-2.0 * (x[0] - 5.0)],
            |x: &[f64]| vec![x[0] * x[0] - 1.0],
            |x: &[f64]| vec![vec![2.0 * x[0]]],
        );
        let quad = example1();
        for x in [-3.0, 0.0, 0.7, 4.2] {
            let p = pt(x, 1.5);
            assert!(
                (lagrangian(&closure, &p).unwrap() - lagrangian(&quad, &p).unwrap()).abs() < 1e-12
            );
            assert_eq!(
                grad_x_lagrangian(&closure, &p).unwrap(),
                grad_x_lagrangian(&quad, &p).unwrap()
            );
        }
    }

    #[test]
    fn negative_multiplier_rejected() {
        assert!(matches!(
            PrimalDualPoint::new(vec![0.0], vec![-1e-3]),
            Err(Error::Domain(_))
        ));
        assert!(!PrimalDualPoint::raw(vec![0.0], vec![-1.0]).is_in_domain());
    }
}

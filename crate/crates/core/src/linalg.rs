//! Small dense-vector helpers over plain slices.

use crate::scalar::Scalar;

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
        .sqrt()
}

/// `y + alpha * x`
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &[T]) -> Vec<T> {
    y.iter().zip(x).map(|(&yi, &xi)| yi + alpha * xi).collect()
}

/// Row-major `n x n` matrix times vector.
pub fn mat_vec<T: Scalar>(mat: &[T], v: &[T]) -> Vec<T> {
    let n = v.len();
    (0..n).map(|i| dot(&mat[i * n..(i + 1) * n], v)).collect()
}

pub fn all_finite<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        assert_eq!(dot(&[1.0, 2.0], &[3.0, 4.0]), 11.0);
        assert_eq!(norm(&[3.0, 4.0]), 5.0);
        assert_eq!(distance(&[1.0, 1.0], &[4.0, 5.0]), 5.0);
        assert_eq!(axpy(2.0, &[1.0, -1.0], &[0.5, 0.5]), vec![2.5, -1.5]);
        assert_eq!(mat_vec(&[1.0, 2.0, 3.0, 4.0], &[1.0, 1.0]), vec![3.0, 7.0]);
        assert!(!all_finite(&[1.0, f64::NAN]));
    }
}

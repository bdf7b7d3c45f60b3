//! Tridiagonal (Jacobi) matrix reconstruction from a prescribed spectrum.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symmat::SymMatrix;

/// Builds the irreducible tridiagonal matrix with positive sub-diagonal whose
/// spectrum is the given strictly ascending list.
///
/// This is the classical reconstruction through the three-term recurrence of
/// the orthogonal polynomials of the discrete measure with equal weights
/// `1/n` at the prescribed eigenvalues, run as a Lanczos process on
/// `diag(λ)` with the uniform start vector and full reorthogonalization.
/// The maximum eigenvalue multiplicity of such a matrix is one, so the input
/// must be strictly increasing.
pub fn jacobi_from_spectrum(lambdas: &[f64]) -> Result<SymMatrix> {
    let n = lambdas.len();
    if n == 0 {
        return Err(Error::InvalidParam("empty spectrum".into()));
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DuplicateEigenvalues);
    }
    if n == 1 {
        return Ok(SymMatrix::from_fn(1, |_, _| lambdas[0]));
    }

    let lam = DVector::from_column_slice(lambdas);
    let apply = |v: &DVector<f64>| -> DVector<f64> { v.component_mul(&lam) };

    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n - 1);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n);

    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut v_prev = DVector::zeros(n);
    let mut b_prev = 0.0;
    basis.push(v.clone());

    for k in 0..n {
        let mut w = apply(&v);
        let a_k = v.dot(&w);
        alpha.push(a_k);
        if k + 1 == n {
            break;
        }
        w -= &v * a_k;
        w -= &v_prev * b_prev;
        // full reorthogonalization, twice over for stability
        for _ in 0..2 {
            for q in &basis {
                let proj = w.dot(q);
                w -= q * proj;
            }
        }
        let b_k = w.norm();
        if b_k <= 1e-13 * (1.0 + lam.amax()) {
            return Err(Error::DuplicateEigenvalues);
        }
        beta.push(b_k);
        v_prev = v;
        b_prev = b_k;
        v = w / b_k;
        basis.push(v.clone());
    }

    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = alpha[i];
    }
    for (i, &b) in beta.iter().enumerate() {
        t[(i, i + 1)] = b;
        t[(i + 1, i)] = b;
    }
    Ok(SymMatrix::new(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::{sorted_residual, spread};
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_value() {
        let m = jacobi_from_spectrum(&[2.5]).unwrap();
        assert_eq!(m.n(), 1);
        assert_abs_diff_eq!(m.entry(0, 0), 2.5);
    }

    #[test]
    fn symmetric_pair() {
        // trace 0 and det -1 with equal weights force a zero diagonal
        let m = jacobi_from_spectrum(&[-1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(m.entry(0, 0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.entry(1, 1), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.entry(0, 1), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn three_point_spectrum() {
        // {0,1,2}: diagonal (1,1,1), off-diagonals (sqrt(2/3), sqrt(1/3))
        let m = jacobi_from_spectrum(&[0.0, 1.0, 2.0]).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(m.entry(i, i), 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(m.entry(0, 1), (2.0f64 / 3.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(m.entry(1, 2), (1.0f64 / 3.0).sqrt(), epsilon = 1e-12);
        let back = m.eigenvalues();
        assert!(sorted_residual(&back, &[0.0, 1.0, 2.0]) <= 1e-10 * spread(&back));
    }

    #[test]
    fn rejects_duplicates() {
        assert!(matches!(
            jacobi_from_spectrum(&[0.0, 0.0, 1.0]),
            Err(Error::DuplicateEigenvalues)
        ));
    }
}

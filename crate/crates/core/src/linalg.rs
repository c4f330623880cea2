//! Small dense complex linear-algebra helpers on top of nalgebra.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{numerical, Result};
use crate::{CMatrix, CVector, C64};

/// Singular values, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s = a.clone().singular_values().as_slice().to_vec();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Singular values of a real matrix, descending.
pub fn singular_values_real(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s = a.clone().singular_values().as_slice().to_vec();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Largest singular value of a real matrix.
pub fn operator_norm_real(a: &DMatrix<f64>) -> f64 {
    singular_values_real(a).first().copied().unwrap_or(0.0)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Column-stacking vectorization.
pub fn vec_of(m: &CMatrix) -> CVector {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_of`].
pub fn unvec(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Unitary DFT matrix, `[F]_{mk} = e^{−i2πmk/n}/√n`.
pub fn unitary_dft(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |m, k| {
        let phase = -2.0 * PI * ((m * k) % n) as f64 / n as f64;
        C64::from_polar(s, phase)
    })
}

/// Cholesky factor of a Hermitian positive-definite matrix, or `None` if the
/// matrix is not numerically positive definite.
///
/// nalgebra takes complex square roots of the pivots, so an indefinite input
/// still "factors"; the pivots are checked here.
pub fn hpd_cholesky(m: &CMatrix) -> Option<Cholesky<C64, Dyn>> {
    let ch = Cholesky::new(m.clone())?;
    let l = ch.l_dirty();
    let ok = (0..l.nrows()).all(|i| {
        let d = l[(i, i)];
        d.re > 0.0 && d.re.is_finite() && d.im.abs() <= 1e-10 * d.re
    });
    ok.then_some(ch)
}

/// Cholesky factor of a Hermitian positive-definite matrix. On failure the
/// diagonal is loaded with `1e-12·(1 + mean diag)` and the factorization is
/// retried once.
pub fn cholesky_with_jitter(m: &CMatrix) -> Result<Cholesky<C64, Dyn>> {
    if let Some(ch) = hpd_cholesky(m) {
        return Ok(ch);
    }
    let n = m.nrows();
    let mean_diag = (0..n).map(|i| m[(i, i)].re).sum::<f64>() / n.max(1) as f64;
    let jitter = 1e-12 * (1.0 + mean_diag.abs());
    let mut loaded = m.clone();
    for i in 0..n {
        loaded[(i, i)] += C64::new(jitter, 0.0);
    }
    hpd_cholesky(&loaded)
        .ok_or_else(|| crate::Error::NumericalFailure(format!("Cholesky failed on {n}x{n} system after jitter")))
}

/// `log det` from a Cholesky factor.
pub fn logdet(ch: &Cholesky<C64, Dyn>) -> f64 {
    let l = ch.l_dirty();
    2.0 * (0..l.nrows()).map(|i| l[(i, i)].re.ln()).sum::<f64>()
}

/// `log det(I + a)` for Hermitian PSD `a`.
pub fn logdet_identity_plus(a: &CMatrix) -> Result<f64> {
    let n = a.nrows();
    let m = CMatrix::identity(n, n) + a;
    match hpd_cholesky(&m) {
        Some(ch) => Ok(logdet(&ch)),
        None => numerical("I + A not positive definite"),
    }
}

/// Hermitian part `(a + aᴴ)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Real matrix lifted to complex.
pub fn to_complex(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| C64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft_is_unitary() {
        let f = unitary_dft(7);
        let g = f.adjoint() * &f;
        assert!((g - CMatrix::identity(7, 7)).norm() < 1e-12);
    }

    #[test]
    fn vec_identity() {
        let a = CMatrix::from_fn(3, 2, |i, j| C64::new(i as f64, j as f64));
        let x = CMatrix::from_fn(2, 4, |i, j| C64::new((i + j) as f64, 1.0));
        let b = CMatrix::from_fn(4, 5, |i, j| C64::new(1.0, (i * j) as f64));
        let lhs = vec_of(&(&a * &x * &b));
        let rhs = kron(&b.transpose(), &a) * vec_of(&x);
        assert!((lhs - rhs).norm() < 1e-9);
        assert_eq!(unvec(&vec_of(&x), 2, 4), x);
    }

    #[test]
    fn singular_values_sorted() {
        let a = CMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 3.0),
            C64::new(2.0, 0.0),
        ]));
        let s = singular_values(&a);
        assert!((s[0] - 3.0).abs() < 1e-12 && (s[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn logdet_of_identity_plus() {
        let a = CMatrix::identity(3, 3) * C64::new(2.0, 0.0);
        assert!((logdet_identity_plus(&a).unwrap() - 3.0 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = CMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
        assert!(cholesky_with_jitter(&m).is_err());
    }
}

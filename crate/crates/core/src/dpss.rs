//! Discrete prolate spheroidal sequences (Slepian sequences).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, numerical, Result};
use crate::special::sinc;

/// Eigen-decomposition of the concentration matrix `S_W`.
#[derive(Debug, Clone)]
pub struct DpssBasis {
    n: usize,
    w: f64,
    vectors: DMatrix<f64>,
    eigenvalues: Vec<f64>,
}

impl DpssBasis {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bandwidth(&self) -> f64 {
        self.w
    }

    /// Orthonormal DPSS vectors as columns, ordered by descending eigenvalue.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Number of sequences with eigenvalue at least `eps`.
    pub fn admissible(&self, eps: f64) -> usize {
        self.eigenvalues.iter().take_while(|&&l| l >= eps).count()
    }
}

fn check(n: usize, w: f64) -> Result<()> {
    if n < 1 {
        return invalid("sequence length must be >= 1");
    }
    if !(w > 0.0 && w <= 1.0) {
        return invalid(format!("bandwidth W must lie in (0, 1], got {w}"));
    }
    Ok(())
}

/// `[S_W]_{mn} = W sinc(W(m − n))`.
pub fn build_concentration_matrix(n: usize, w: f64) -> Result<DMatrix<f64>> {
    check(n, w)?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        w * sinc(w * (i as f64 - j as f64))
    }))
}

/// DPSS basis of length `n` and bandwidth `w`.
pub fn compute_dpss(n: usize, w: f64) -> Result<DpssBasis> {
    check(n, w)?;
    if w == 1.0 {
        return Ok(DpssBasis {
            n,
            w,
            vectors: DMatrix::identity(n, n),
            eigenvalues: vec![1.0; n],
        });
    }
    let s = build_concentration_matrix(n, w)?;
    let eig = SymmetricEigen::try_new(s, f64::EPSILON, 10_000)
        .map_or_else(|| numerical(format!("DPSS eigen-solver failed (n = {n}, W = {w})")), Ok)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    // Rounding can push eigenvalues of a nearly fully concentrated sequence
    // to 1 or a vanishing one below 0; both lie strictly inside (0, 1).
    let eigenvalues = order
        .iter()
        .map(|&i| eig.eigenvalues[i].clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0))
        .collect();
    let mut vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    for mut col in vectors.column_iter_mut() {
        let peak = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if peak < 0.0 {
            col.neg_mut();
        }
    }
    Ok(DpssBasis {
        n,
        w,
        vectors,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_entry() {
        let s = build_concentration_matrix(1, 0.3).unwrap();
        assert_eq!(s[(0, 0)], 0.3);
    }

    #[test]
    fn two_by_two_entries_and_spectrum() {
        let s = build_concentration_matrix(2, 0.5).unwrap();
        assert!((s[(0, 1)] - 1.0 / PI).abs() < 1e-15);
        let d = compute_dpss(2, 0.5).unwrap();
        assert!((d.eigenvalues()[0] - 0.5 * (1.0 + 2.0 / PI)).abs() < 1e-12);
        assert!((d.eigenvalues()[1] - 0.5 * (1.0 - 2.0 / PI)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bandwidth() {
        assert!(build_concentration_matrix(4, 0.0).is_err());
        assert!(compute_dpss(4, 1.5).is_err());
        assert!(compute_dpss(0, 0.5).is_err());
    }

    #[test]
    fn full_band_is_identity() {
        let d = compute_dpss(5, 1.0).unwrap();
        assert!(d.eigenvalues().iter().all(|&l| l == 1.0));
        assert_eq!(d.vectors(), &DMatrix::identity(5, 5));
        let s = build_concentration_matrix(5, 1.0).unwrap();
        assert!((s - DMatrix::identity(5, 5)).amax() < 1e-15);
    }

    #[test]
    fn orthonormal_and_sign_fixed() {
        let d = compute_dpss(24, 0.2).unwrap();
        let g = d.vectors().transpose() * d.vectors();
        assert!((g - DMatrix::identity(24, 24)).amax() < 1e-10);
        for col in d.vectors().column_iter() {
            let peak = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(peak > 0.0);
        }
        assert!(d.eigenvalues().windows(2).all(|p| p[0] >= p[1]));
        assert_eq!(d.admissible(0.5), d.eigenvalues().iter().filter(|&&l| l >= 0.5).count());
    }
}

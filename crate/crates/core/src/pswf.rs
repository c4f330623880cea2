//! One-dimensional prolate spheroidal wave functions (PSWFs) on an interval.
//!
//! The standardized problem on `[-1, 1]` with band parameter `c` is
//!
//! ```text
//! λ ψ(x) = ∫_{-1}^{1} sin(c(x−y)) / (π(x−y)) ψ(y) dy
//! ```
//!
//! Its eigenfunctions are also eigenfunctions of the differential operator
//! `L_c = d/dx (1−x²) d/dx − c² x²`, which is penta-diagonal in the
//! orthonormal Legendre basis and decouples into even and odd index chains.
//! Each chain is a symmetric tridiagonal eigenproblem. The prolate
//! eigenvalues are then obtained from the finite Fourier transform
//! `F_c ψ(x) = ∫ e^{icxy} ψ(y) dy` (whose eigenvalues `μ` satisfy
//! `λ = c|μ|²/(2π)`): `μ_0` by quadrature, the rest by the ratio recursion
//! `μ_ℓ = i μ_{ℓ−1} √|⟨ψ_ℓ, ψ'_{ℓ−1}⟩ / ⟨ψ'_ℓ, ψ_{ℓ−1}⟩|`.
//!
//! A general interval `[a, b]` with bandwidth `Ω` maps onto the standardized
//! problem with `c = πΩ(b−a)/2`.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, numerical, Result};
use crate::special::{self, QuadratureRule};
use crate::tridiag::symmetric_tridiagonal_eigen;
use crate::C64;

/// Smallest reported prolate eigenvalue; the μ recursion underflows below it.
pub const GAMMA_FLOOR: f64 = 1e-14;
/// Largest reported prolate eigenvalue (the largest double below one).
pub const GAMMA_CEIL: f64 = 1.0 - f64::EPSILON / 2.0;
/// Relative trace-identity error above which the spectrum is flagged as
/// under-resolved.
pub const TRACE_TOLERANCE: f64 = 1e-6;

/// Default Legendre truncation for band parameter `c`.
pub fn default_n_max(c: f64) -> usize {
    64usize.max((2.0 * c).ceil() as usize + 40)
}

/// Truncated matrix of `−L_c` in the normalized Legendre basis.
///
/// Only the diagonal and the second off-diagonal are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    order: usize,
    diag: Vec<f64>,
    off2: Vec<f64>,
}

impl SpectralMatrix {
    /// Largest Legendre index kept; the matrix is `(order+1) × (order+1)`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.order + 1
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// `[A]_{n, n+2}` for `n = 0..=order−2`.
    pub fn second_off_diagonal(&self) -> &[f64] {
        &self.off2
    }

    pub fn entry(&self, m: usize, n: usize) -> f64 {
        if m == n {
            self.diag[m]
        } else if m + 2 == n {
            self.off2[m]
        } else if n + 2 == m {
            self.off2[n]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |m, n| self.entry(m, n))
    }

    /// `A v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|m| {
                let mut s = self.diag[m] * v[m];
                if m + 2 < d {
                    s += self.off2[m] * v[m + 2];
                }
                if m >= 2 {
                    s += self.off2[m - 2] * v[m - 2];
                }
                s
            })
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        let d2: f64 = self.diag.iter().map(|x| x * x).sum();
        let o2: f64 = self.off2.iter().map(|x| x * x).sum();
        (d2 + 2.0 * o2).sqrt()
    }
}

/// Builds the truncated penta-diagonal operator matrix for band parameter `c`.
pub fn build_spectral_matrix(c: f64, n_max: usize) -> Result<SpectralMatrix> {
    if !(c >= 0.0) || !c.is_finite() {
        return invalid(format!("band parameter c must be finite and >= 0, got {c}"));
    }
    if n_max < 2 {
        return invalid(format!("n_max must be >= 2, got {n_max}"));
    }
    let c2 = c * c;
    let diag = (0..=n_max)
        .map(|n| {
            let n = n as f64;
            let nn = n * (n + 1.0);
            nn + c2 * (2.0 * nn - 1.0) / ((2.0 * n + 3.0) * (2.0 * n - 1.0))
        })
        .collect();
    let off2 = (0..=n_max - 2)
        .map(|n| {
            let n = n as f64;
            c2 * (n + 2.0) * (n + 1.0)
                / ((2.0 * n + 3.0) * ((2.0 * n + 1.0) * (2.0 * n + 5.0)).sqrt())
        })
        .collect();
    Ok(SpectralMatrix {
        order: n_max,
        diag,
        off2,
    })
}

/// PSWF eigen-system, standardized on `[-1, 1]` or rescaled to `[a, b]`.
#[derive(Debug, Clone)]
pub struct PswfBasis {
    c: f64,
    n_max: usize,
    /// Column `ℓ` holds the Legendre coefficients of `ψ_ℓ`.
    beta: DMatrix<f64>,
    chi: Vec<f64>,
    gamma: Vec<f64>,
    interval: (f64, f64),
    omega: f64,
}

impl PswfBasis {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of modes, `n_max + 1`.
    pub fn len(&self) -> usize {
        self.n_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn beta(&self) -> &DMatrix<f64> {
        &self.beta
    }

    /// Eigenvalues of `−L_c`, ascending.
    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    /// Prolate eigenvalues, descending. Empty until computed.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `|Σ γ_ℓ − 2c/π| / (2c/π)`, or `None` when `γ` is not yet computed or `c = 0`.
    pub fn trace_relative_error(&self) -> Option<f64> {
        if self.gamma.is_empty() || self.c == 0.0 {
            return None;
        }
        let target = 2.0 * self.c / PI;
        let sum: f64 = self.gamma.iter().sum();
        Some((sum - target).abs() / target)
    }

    /// Number of modes whose prolate eigenvalue is at least `threshold`.
    pub fn modes_above(&self, threshold: f64) -> usize {
        self.gamma.iter().take_while(|&&g| g >= threshold).count()
    }

    fn standardize(&self, x: f64) -> Result<f64> {
        let (a, b) = self.interval;
        let slack = 1e-12 * (b - a);
        if x < a - slack || x > b + slack {
            return invalid(format!("x = {x} outside the basis interval [{a}, {b}]"));
        }
        Ok(((2.0 * x - a - b) / (b - a)).clamp(-1.0, 1.0))
    }

    fn amplitude(&self) -> f64 {
        let (a, b) = self.interval;
        (2.0 / (b - a)).sqrt()
    }

    /// `φ_ℓ(x)`; see [`evaluate_pswf`].
    pub fn evaluate(&self, ell: usize, x: f64) -> Result<f64> {
        evaluate_pswf(self, ell, x)
    }

    /// Values of all modes `φ_0(x), ..., φ_{n_max}(x)` at once.
    pub fn evaluate_all(&self, x: f64) -> Result<Vec<f64>> {
        let u = self.standardize(x)?;
        let p = DVector::from_vec(special::normalized_legendre(self.n_max, u));
        let v = self.beta.tr_mul(&p) * self.amplitude();
        Ok(v.as_slice().to_vec())
    }

    /// Derivatives `dφ_ℓ/dx` of all modes at `x`.
    pub fn evaluate_all_derivatives(&self, x: f64) -> Result<Vec<f64>> {
        let u = self.standardize(x)?;
        let (_, dp) = special::normalized_legendre_with_derivative(self.n_max, u);
        let (a, b) = self.interval;
        let chain = 2.0 / (b - a);
        let v = self.beta.tr_mul(&DVector::from_vec(dp)) * (self.amplitude() * chain);
        Ok(v.as_slice().to_vec())
    }

    /// Writes `ell,chi,gamma` rows.
    pub fn write_eigen_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "ell,chi,gamma")?;
        for ell in 0..self.len() {
            let g = self.gamma.get(ell).copied().unwrap_or(f64::NAN);
            writeln!(out, "{ell},{},{}", self.chi[ell], g)?;
        }
        Ok(())
    }

    /// Writes `x,psi_0,...,psi_{modes-1}` sampled on `samples` uniform points
    /// of the basis interval.
    pub fn write_functions_csv<W: Write>(
        &self,
        modes: usize,
        samples: usize,
        mut out: W,
    ) -> std::io::Result<()> {
        let modes = modes.min(self.len());
        let header: Vec<String> = (0..modes).map(|l| format!("psi_{l}")).collect();
        writeln!(out, "x,{}", header.join(","))?;
        let (a, b) = self.interval;
        let samples = samples.max(2);
        for i in 0..samples {
            let x = a + (b - a) * i as f64 / (samples - 1) as f64;
            let vals = self
                .evaluate_all(x)
                .map_err(|e| std::io::Error::other(e.to_string()))?;
            let row: Vec<String> = vals[..modes].iter().map(|v| v.to_string()).collect();
            writeln!(out, "{x},{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Solves the standardized eigen-system for band parameter `c` on `[-1, 1]`.
///
/// Modes are ordered by ascending `χ`, which orders the prolate eigenvalues
/// descending. `gamma` is left empty; see [`compute_prolate_eigenvalues`].
pub fn solve_pswf_eigensystem(c: f64, n_max: usize) -> Result<PswfBasis> {
    let a = build_spectral_matrix(c, n_max)?;
    let dim = a.dim();

    // Even and odd Legendre indices never couple.
    let mut modes: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim);
    for parity in 0..2 {
        let idx: Vec<usize> = (parity..dim).step_by(2).collect();
        if idx.is_empty() {
            continue;
        }
        let diag: Vec<f64> = idx.iter().map(|&k| a.entry(k, k)).collect();
        let off: Vec<f64> = idx.windows(2).map(|w| a.entry(w[0], w[1])).collect();
        let (vals, vecs) = symmetric_tridiagonal_eigen(&diag, &off)?;
        for (j, chi) in vals.into_iter().enumerate() {
            let mut full = vec![0.0; dim];
            for (r, &k) in idx.iter().enumerate() {
                full[k] = vecs[(r, j)];
            }
            modes.push((chi, full));
        }
    }
    modes.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut beta = DMatrix::<f64>::zeros(dim, dim);
    let mut chi = Vec::with_capacity(dim);
    for (col, (value, mut v)) in modes.into_iter().enumerate() {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let lead = v
            .iter()
            .copied()
            .find(|x| x.abs() > 1e-10 * peak)
            .unwrap_or(1.0);
        let s = lead.signum() / norm;
        v.iter_mut().for_each(|x| *x *= s);
        beta.set_column(col, &DVector::from_vec(v));
        chi.push(value);
    }

    Ok(PswfBasis {
        c,
        n_max,
        beta,
        chi,
        gamma: Vec::new(),
        interval: (-1.0, 1.0),
        omega: c / PI,
    })
}

/// `φ_ℓ(x) = √(2/(b−a)) Σ_k β_{ℓk} P̄_k(u)`, `u` the standardized coordinate.
pub fn evaluate_pswf(basis: &PswfBasis, ell: usize, x: f64) -> Result<f64> {
    if ell > basis.n_max {
        return invalid(format!("mode {ell} out of range (n_max = {})", basis.n_max));
    }
    let u = basis.standardize(x)?;
    let p = special::normalized_legendre(basis.n_max, u);
    let s: f64 = basis.beta.column(ell).iter().zip(&p).map(|(b, p)| b * p).sum();
    Ok(s * basis.amplitude())
}

/// Prolate eigenvalues `γ_ℓ` of a solved basis, descending.
///
/// Inner products are evaluated with `quad`; `2·n_max` Gauss–Legendre nodes
/// integrate every product of two modes exactly.
pub fn compute_prolate_eigenvalues(basis: &PswfBasis, quad: &QuadratureRule) -> Result<Vec<f64>> {
    let c = basis.c;
    let dim = basis.len();
    let nq = quad.len();
    if nq == 0 {
        return invalid("empty quadrature rule");
    }

    let mut leg = DMatrix::<f64>::zeros(nq, dim);
    let mut dleg = DMatrix::<f64>::zeros(nq, dim);
    for (i, &x) in quad.nodes.iter().enumerate() {
        let (p, dp) = special::normalized_legendre_with_derivative(basis.n_max, x);
        for k in 0..dim {
            leg[(i, k)] = p[k];
            dleg[(i, k)] = dp[k];
        }
    }
    let psi = &leg * &basis.beta;
    let dpsi = &dleg * &basis.beta;
    let w = &quad.weights;

    // μ_0 = ⟨ψ_0, F_c ψ_0⟩
    let mut mu0 = C64::new(0.0, 0.0);
    for i in 0..nq {
        let mut f = C64::new(0.0, 0.0);
        for j in 0..nq {
            f += C64::from_polar(w[j] * psi[(j, 0)], c * quad.nodes[i] * quad.nodes[j]);
        }
        mu0 += f * (w[i] * psi[(i, 0)]);
    }

    let mut gamma = Vec::with_capacity(dim);
    let mut mu = mu0;
    gamma.push(c * mu.norm_sqr() / (2.0 * PI));
    for ell in 1..dim {
        let mut a = 0.0;
        let mut b = 0.0;
        for i in 0..nq {
            a += w[i] * psi[(i, ell)] * dpsi[(i, ell - 1)];
            b += w[i] * dpsi[(i, ell)] * psi[(i, ell - 1)];
        }
        if b.abs() < 1e-300 {
            return numerical(format!(
                "derivative inner product vanished at mode {ell} (c = {c}); ratio undefined"
            ));
        }
        mu = C64::i() * mu * (a / b).abs().sqrt();
        gamma.push(c * mu.norm_sqr() / (2.0 * PI));
    }

    for g in gamma.iter_mut() {
        *g = g.clamp(GAMMA_FLOOR, GAMMA_CEIL);
    }

    if c > 0.0 {
        let target = 2.0 * c / PI;
        let err = (gamma.iter().sum::<f64>() - target).abs() / target;
        if err > TRACE_TOLERANCE {
            log::warn!(
                "prolate spectrum under-resolved: trace {:.9} vs 2c/π = {:.9} (relative error {:.2e}); \
                 increase n_max or the quadrature order",
                gamma.iter().sum::<f64>(),
                target,
                err
            );
        }
    }
    Ok(gamma)
}

/// Full `(𝒜, ℬ_Ω)` PSWF basis on `[a, b]`: solve at `c = πΩ(b−a)/2`, compute
/// the prolate eigenvalues, and rescale the eigenfunctions to be orthonormal
/// on `[a, b]`.
pub fn rescale_to_interval(
    omega: f64,
    a: f64,
    b: f64,
    n_max: usize,
    quad: &QuadratureRule,
) -> Result<PswfBasis> {
    if !(a < b) {
        return invalid(format!("interval requires a < b, got [{a}, {b}]"));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return invalid(format!("bandwidth Ω must be positive, got {omega}"));
    }
    let c = PI * omega * (b - a) / 2.0;
    let mut basis = solve_pswf_eigensystem(c, n_max)?;
    basis.gamma = compute_prolate_eigenvalues(&basis, quad)?;
    basis.interval = (a, b);
    basis.omega = omega;
    Ok(basis)
}

impl PswfBasis {
    /// Standardized basis with eigenvalues, default truncation and quadrature.
    pub fn standard(c: f64) -> Result<PswfBasis> {
        let n_max = default_n_max(c);
        let quad = special::gauss_legendre_rule(2 * n_max)?;
        let mut basis = solve_pswf_eigensystem(c, n_max)?;
        basis.gamma = compute_prolate_eigenvalues(&basis, &quad)?;
        Ok(basis)
    }

    /// `(𝒜, ℬ_Ω)` basis on `[a, b]` with default truncation and quadrature.
    pub fn on_interval(omega: f64, a: f64, b: f64) -> Result<PswfBasis> {
        if !(a < b) {
            return invalid(format!("interval requires a < b, got [{a}, {b}]"));
        }
        let c = PI * omega * (b - a) / 2.0;
        let n_max = default_n_max(c);
        let quad = special::gauss_legendre_rule(2 * n_max)?;
        rescale_to_interval(omega, a, b, n_max, &quad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_matrix_at_zero_band() {
        let a = build_spectral_matrix(0.0, 6).unwrap();
        for n in 0..=6 {
            assert_eq!(a.entry(n, n), (n * (n + 1)) as f64);
        }
        assert!(a.second_off_diagonal().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn spectral_matrix_entries_c1() {
        let a = build_spectral_matrix(1.0, 4).unwrap();
        assert!((a.entry(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((a.entry(0, 2) - 2.0 / (3.0 * 5f64.sqrt())).abs() < 1e-15);
        assert_eq!(a.entry(2, 0), a.entry(0, 2));
        assert_eq!(a.entry(0, 1), 0.0);
    }

    #[test]
    fn spectral_matrix_rejects_bad_input() {
        assert!(build_spectral_matrix(-1.0, 10).is_err());
        assert!(build_spectral_matrix(1.0, 1).is_err());
    }

    #[test]
    fn zero_band_gives_legendre() {
        let basis = solve_pswf_eigensystem(0.0, 10).unwrap();
        for n in 0..=10 {
            assert!((basis.chi()[n] - (n * (n + 1)) as f64).abs() < 1e-12);
            assert!((basis.beta()[(n, n)] - 1.0).abs() < 1e-12);
        }
        for &x in &[-0.7, 0.0, 0.4] {
            assert!((evaluate_pswf(&basis, 0, x).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn columns_unit_norm_and_sign_convention() {
        let basis = solve_pswf_eigensystem(7.5, 64).unwrap();
        for l in 0..basis.len() {
            let col = basis.beta().column(l);
            assert!((col.norm() - 1.0).abs() < 1e-12);
            let peak = col.amax();
            let lead = col.iter().find(|x| x.abs() > 1e-10 * peak).unwrap();
            assert!(*lead > 0.0);
        }
    }

    #[test]
    fn truncation_refinement_c2() {
        let a = solve_pswf_eigensystem(2.0, 64).unwrap();
        let b = solve_pswf_eigensystem(2.0, 128).unwrap();
        assert!((a.chi()[0] - b.chi()[0]).abs() < 1e-10);
    }

    #[test]
    fn mode_index_out_of_range() {
        let basis = solve_pswf_eigensystem(1.0, 8).unwrap();
        assert!(evaluate_pswf(&basis, 9, 0.0).is_err());
    }

    #[test]
    fn band_parameter_from_interval() {
        let basis = PswfBasis::on_interval(20.0, -0.15, 0.15).unwrap();
        assert!((basis.c() - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rescale_rejects_empty_interval() {
        let q = special::gauss_legendre_rule(16).unwrap();
        assert!(rescale_to_interval(1.0, 0.2, 0.2, 8, &q).is_err());
        assert!(rescale_to_interval(-1.0, 0.0, 0.2, 8, &q).is_err());
    }

    #[test]
    fn large_band_has_concentrated_leading_mode() {
        let basis = PswfBasis::standard(10.0).unwrap();
        assert!(basis.gamma()[0] > 0.999);
        assert!(basis.gamma()[0] < 1.0);
    }

    #[test]
    fn csv_dump_shapes() {
        let basis = PswfBasis::standard(3.0).unwrap();
        let mut buf = Vec::new();
        basis.write_eigen_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), basis.len() + 1);
        let mut buf = Vec::new();
        basis.write_functions_csv(3, 11, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "x,psi_0,psi_1,psi_2");
        assert_eq!(text.lines().count(), 12);
    }
}

//! Wavenumber-domain bandlimited random channels and their discretization
//! onto linear arrays.
//!
//! The random spectrum `h̃(β, α)` (receive wavenumber `β`, transmit
//! wavenumber `α`) is a zero-mean complex Gaussian field on
//! `𝒜_r × 𝒜_t ⊂ [−1, 1]²` with separable correlation
//!
//! ```text
//! E[h̃(β,α) h̃*(β′,α′)] = σ²/(Γ_t Γ_r) · sinc((α−α′)/Γ_t) · sinc((β−β′)/Γ_r)
//! ```
//!
//! Each factor is a PSWF kernel with bandwidth `1/Γ`, so the field is drawn
//! from its Karhunen–Loève expansion in PSWF modes.
//!
//! Array positions are stored in meters and converted to wavelengths inside
//! every transform.

use std::io::Write;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::pswf::PswfBasis;
use crate::rng::{complex_normal_matrix, stream_rng};
use crate::{linalg, CMatrix, C64};

/// KL modes with prolate eigenvalue below this are dropped.
pub const KL_TRUNCATION: f64 = 1e-6;

/// Closed interval `[lo, hi]` of normalized wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Deserialize, serde::Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if !(lo < hi) || lo < -1.0 || hi > 1.0 {
            return invalid(format!("wavenumber support [{lo}, {hi}] must satisfy -1 <= lo < hi <= 1"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Parameters of the random wavenumber field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub support_t: Interval,
    pub support_r: Interval,
    pub gamma_t: f64,
    pub gamma_r: f64,
    pub sigma2: f64,
    pub grid_k: usize,
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        Interval::new(self.support_t.lo, self.support_t.hi)?;
        Interval::new(self.support_r.lo, self.support_r.hi)?;
        for (name, g) in [("gamma_t", self.gamma_t), ("gamma_r", self.gamma_r)] {
            if !(g > 0.0 && g <= 1.0) {
                return invalid(format!("{name} must lie in (0, 1], got {g}"));
            }
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return invalid(format!("sigma2 must be positive, got {}", self.sigma2));
        }
        if self.grid_k < 64 || !self.grid_k.is_power_of_two() {
            return invalid(format!("grid size K must be a power of two >= 64, got {}", self.grid_k));
        }
        Ok(())
    }

    /// Same support and bandlimit on both sides.
    pub fn symmetric(support: Interval, gamma: f64, sigma2: f64, grid_k: usize) -> Result<ChannelSpec> {
        let spec = ChannelSpec {
            support_t: support,
            support_r: support,
            gamma_t: gamma,
            gamma_r: gamma,
            sigma2,
            grid_k,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Midpoint grid `θ_k = −1 + (2k+1)/K`, `k = 0..K`, each with weight `2/K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavenumberGrid {
    k: usize,
}

impl WavenumberGrid {
    pub fn new(k: usize) -> WavenumberGrid {
        WavenumberGrid { k }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn point(&self, i: usize) -> f64 {
        -1.0 + (2 * i + 1) as f64 / self.k as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.k).map(|i| self.point(i)).collect()
    }

    pub fn weight(&self) -> f64 {
        2.0 / self.k as f64
    }
}

/// One realization of `h̃` sampled on the grid. Row index is `β`, column
/// index is `α`.
#[derive(Debug, Clone)]
pub struct WavenumberField {
    pub spec: ChannelSpec,
    pub grid: WavenumberGrid,
    pub values: CMatrix,
}

impl WavenumberField {
    /// Wraps gridded values, rejecting any energy outside the support.
    pub fn from_values(spec: ChannelSpec, values: CMatrix) -> Result<WavenumberField> {
        spec.validate()?;
        let k = spec.grid_k;
        if values.nrows() != k || values.ncols() != k {
            return invalid(format!(
                "field must be {k}x{k}, got {}x{}",
                values.nrows(),
                values.ncols()
            ));
        }
        let grid = WavenumberGrid::new(k);
        for j in 0..k {
            for i in 0..k {
                let inside = spec.support_r.contains(grid.point(i)) && spec.support_t.contains(grid.point(j));
                if !inside && values[(i, j)] != C64::new(0.0, 0.0) {
                    return invalid("field has nonzero values outside the support rectangle");
                }
            }
        }
        Ok(WavenumberField { spec, grid, values })
    }
}

/// Karhunen–Loève sampler for [`ChannelSpec`]: one PSWF basis per side.
#[derive(Debug, Clone)]
pub struct KlModel {
    spec: ChannelSpec,
    basis_t: PswfBasis,
    basis_r: PswfBasis,
    modes_t: usize,
    modes_r: usize,
}

impl KlModel {
    pub fn new(spec: ChannelSpec) -> Result<KlModel> {
        spec.validate()?;
        let side = |s: Interval, g: f64| -> Result<(PswfBasis, usize)> {
            let basis = PswfBasis::on_interval(1.0 / g, s.lo, s.hi)?;
            let modes = basis.modes_above(KL_TRUNCATION).max(1);
            Ok((basis, modes))
        };
        let (basis_t, modes_t) = side(spec.support_t, spec.gamma_t)?;
        let (basis_r, modes_r) = side(spec.support_r, spec.gamma_r)?;
        Ok(KlModel {
            spec,
            basis_t,
            basis_r,
            modes_t,
            modes_r,
        })
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn basis_t(&self) -> &PswfBasis {
        &self.basis_t
    }

    pub fn basis_r(&self) -> &PswfBasis {
        &self.basis_r
    }

    /// Retained mode counts `(M_r, M_t)`.
    pub fn mode_counts(&self) -> (usize, usize) {
        (self.modes_r, self.modes_t)
    }

    /// `K × M` matrix of `√γ_m φ_m(θ_k)` on the grid, zero off the support.
    fn weighted_modes(basis: &PswfBasis, modes: usize, support: Interval, grid: &WavenumberGrid) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::<f64>::zeros(grid.len(), modes);
        let amp: Vec<f64> = basis.gamma()[..modes].iter().map(|g| g.sqrt()).collect();
        for k in 0..grid.len() {
            let theta = grid.point(k);
            if !support.contains(theta) {
                continue;
            }
            let vals = basis.evaluate_all(theta)?;
            for m in 0..modes {
                out[(k, m)] = amp[m] * vals[m];
            }
        }
        Ok(out)
    }

    /// Receive-side weighted mode matrix on `grid`.
    pub fn modes_r_on(&self, grid: &WavenumberGrid) -> Result<DMatrix<f64>> {
        Self::weighted_modes(&self.basis_r, self.modes_r, self.spec.support_r, grid)
    }

    /// Transmit-side weighted mode matrix on `grid`.
    pub fn modes_t_on(&self, grid: &WavenumberGrid) -> Result<DMatrix<f64>> {
        Self::weighted_modes(&self.basis_t, self.modes_t, self.spec.support_t, grid)
    }

    /// Field with KL coefficients `g` (`M_r × M_t`).
    pub fn field_from_coefficients(&self, g: &CMatrix, grid: &WavenumberGrid) -> Result<WavenumberField> {
        if g.nrows() != self.modes_r || g.ncols() != self.modes_t {
            return invalid("KL coefficient matrix has the wrong shape");
        }
        let phi_r = linalg::to_complex(&self.modes_r_on(grid)?);
        let phi_t = linalg::to_complex(&self.modes_t_on(grid)?);
        let sigma = C64::new(self.spec.sigma2.sqrt(), 0.0);
        let values = phi_r * g * phi_t.transpose() * sigma;
        Ok(WavenumberField {
            spec: self.spec,
            grid: *grid,
            values,
        })
    }

    /// Draws KL coefficients and returns the field on the `ChannelSpec` grid.
    pub fn sample_field<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<WavenumberField> {
        let g = complex_normal_matrix(rng, self.modes_r, self.modes_t);
        self.field_from_coefficients(&g, &WavenumberGrid::new(self.spec.grid_k))
    }
}

/// Draws one field realization, deterministic in `seed`.
pub fn generate_wavenumber_field(spec: &ChannelSpec, seed: u64) -> Result<WavenumberField> {
    let model = KlModel::new(*spec)?;
    let mut rng = stream_rng(seed, 0);
    model.sample_field(&mut rng)
}

/// Uniform linear array, centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub n_elems: usize,
    /// Element spacing `Δ` in meters.
    pub spacing: f64,
    /// Element size `δ` in meters.
    pub element_size: f64,
    /// Carrier wavelength `λ_c` in meters.
    pub wavelength: f64,
}

impl ArrayGeometry {
    pub fn new(n_elems: usize, spacing: f64, element_size: f64, wavelength: f64) -> Result<ArrayGeometry> {
        if n_elems < 1 {
            return invalid("array needs at least one element");
        }
        if !(spacing > 0.0 && element_size > 0.0 && wavelength > 0.0) {
            return invalid("spacing, element size and wavelength must be positive");
        }
        if element_size > spacing * (1.0 + 1e-12) {
            return invalid(format!(
                "element size {element_size} exceeds spacing {spacing}"
            ));
        }
        Ok(ArrayGeometry {
            n_elems,
            spacing,
            element_size,
            wavelength,
        })
    }

    /// Fully populated array (`δ = Δ`).
    pub fn contiguous(n_elems: usize, spacing: f64, wavelength: f64) -> Result<ArrayGeometry> {
        Self::new(n_elems, spacing, spacing, wavelength)
    }

    /// Positions `q_m = (m − (N+1)/2)·Δ` for `m = 1..=N`, meters.
    pub fn positions(&self) -> Vec<f64> {
        let center = (self.n_elems as f64 + 1.0) / 2.0;
        (1..=self.n_elems)
            .map(|m| (m as f64 - center) * self.spacing)
            .collect()
    }

    /// Aperture `L = N·Δ`, meters.
    pub fn aperture(&self) -> f64 {
        self.n_elems as f64 * self.spacing
    }

    /// `Δ/λ_c`.
    pub fn spacing_wavelengths(&self) -> f64 {
        self.spacing / self.wavelength
    }
}

/// Rule that produced a [`ChannelMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Synthesis {
    /// `√(Δ_tΔ_r)·(2/K)²·D_r H̃ D_tᴴ`.
    Dictionary,
    /// `min{δ/λ_c, 1/2}·h(q_m, p_n)`.
    Segmented,
}

#[derive(Debug, Clone)]
pub struct ChannelMatrix {
    pub h: CMatrix,
    pub tx: ArrayGeometry,
    pub rx: ArrayGeometry,
    pub synthesis: Synthesis,
}

impl ChannelMatrix {
    /// One line per row: `re,im` pairs separated by commas.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in self.h.row_iter() {
            let cells: Vec<String> = row.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// Little-endian `u64` rows, `u64` cols, then row-major `f64` (re, im) pairs.
    pub fn write_binary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(&(self.h.nrows() as u64).to_le_bytes())?;
        out.write_all(&(self.h.ncols() as u64).to_le_bytes())?;
        for row in self.h.row_iter() {
            for z in row.iter() {
                out.write_all(&z.re.to_le_bytes())?;
                out.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// `N × K` dictionary, column `k` = `exp(i2π θ_k q_m/λ_c)`.
pub fn steering_dictionary(geom: &ArrayGeometry, grid: &[f64]) -> CMatrix {
    let q: Vec<f64> = geom.positions().iter().map(|p| p / geom.wavelength).collect();
    CMatrix::from_fn(q.len(), grid.len(), |m, k| {
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI * grid[k] * q[m])
    })
}

fn check_pair(tx: &ArrayGeometry, rx: &ArrayGeometry) -> Result<()> {
    let rel = (tx.wavelength - rx.wavelength).abs() / tx.wavelength;
    if rel > 1e-12 {
        return invalid("transmit and receive geometries use different wavelengths");
    }
    Ok(())
}

/// `H = √(Δ_tΔ_r)·(2/K)²·D_r H̃ D_tᴴ`, spacings in wavelengths.
pub fn synthesize_channel_matrix(
    field: &WavenumberField,
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
) -> Result<ChannelMatrix> {
    check_pair(tx, rx)?;
    let grid = field.grid.points();
    let d_r = steering_dictionary(rx, &grid);
    let d_t = steering_dictionary(tx, &grid);
    let w = field.grid.weight();
    let scale = (tx.spacing_wavelengths() * rx.spacing_wavelengths()).sqrt() * w * w;
    let h = d_r * &field.values * d_t.adjoint() * C64::new(scale, 0.0);
    Ok(ChannelMatrix {
        h,
        tx: *tx,
        rx: *rx,
        synthesis: Synthesis::Dictionary,
    })
}

/// Segment amplitude factor `min{δ/λ_c, 1/2}`.
pub fn segment_factor(geom: &ArrayGeometry) -> f64 {
    (geom.element_size / geom.wavelength).min(0.5)
}

fn check_segmented(tx: &ArrayGeometry, rx: &ArrayGeometry) -> Result<f64> {
    check_pair(tx, rx)?;
    for g in [tx, rx] {
        if g.element_size > g.spacing * (1.0 + 1e-12) {
            return invalid(format!(
                "element size {} exceeds spacing {}",
                g.element_size, g.spacing
            ));
        }
    }
    Ok(segment_factor(rx))
}

/// `[H]_{mn} = min{δ/λ_c, 1/2}·h(q_m, p_n)` where `h` is the inverse transform
/// of the field, `h(q,p) = ∫∫ h̃(β,α) e^{i2πqβ} e^{i2πpα}` (positions in
/// wavelengths), evaluated by the grid Riemann sum.
pub fn segmented_discretization(
    field: &WavenumberField,
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
) -> Result<ChannelMatrix> {
    let factor = check_segmented(tx, rx)?;
    let grid = field.grid.points();
    let d_r = steering_dictionary(rx, &grid);
    let d_t = steering_dictionary(tx, &grid);
    let w = field.grid.weight();
    let h = d_r * &field.values * d_t.transpose() * C64::new(factor * w * w, 0.0);
    Ok(ChannelMatrix {
        h,
        tx: *tx,
        rx: *rx,
        synthesis: Synthesis::Segmented,
    })
}

/// Segmented discretization of an explicit spatial field `h(q, p)`
/// (positions in meters).
pub fn discretize_spatial_field(
    field: impl Fn(f64, f64) -> C64,
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
) -> Result<ChannelMatrix> {
    let factor = check_segmented(tx, rx)?;
    let q = rx.positions();
    let p = tx.positions();
    let h = CMatrix::from_fn(q.len(), p.len(), |m, n| field(q[m], p[n]) * factor);
    Ok(ChannelMatrix {
        h,
        tx: *tx,
        rx: *rx,
        synthesis: Synthesis::Segmented,
    })
}

/// Array-domain channel sampler.
///
/// Folds the KL modes into the array dictionaries once, so
/// `H = s·P_r G P_tᵀ` with `G` the `M_r × M_t` KL coefficients. This is the
/// same linear map as building the field and then synthesizing, evaluated in
/// a cheaper order.
#[derive(Debug, Clone)]
pub struct ArrayChannelModel {
    kl: KlModel,
    tx: ArrayGeometry,
    rx: ArrayGeometry,
    synthesis: Synthesis,
    p_t: CMatrix,
    p_r: CMatrix,
    scale: f64,
}

impl ArrayChannelModel {
    /// Sampler following `synthesis`. With `normalize`, the output is scaled
    /// so that `E‖H‖²_F = N_t N_r`.
    pub fn new(
        spec: ChannelSpec,
        tx: ArrayGeometry,
        rx: ArrayGeometry,
        synthesis: Synthesis,
        normalize: bool,
    ) -> Result<ArrayChannelModel> {
        let kl = KlModel::new(spec)?;
        Self::from_kl(kl, tx, rx, synthesis, normalize)
    }

    pub fn from_kl(
        kl: KlModel,
        tx: ArrayGeometry,
        rx: ArrayGeometry,
        synthesis: Synthesis,
        normalize: bool,
    ) -> Result<ArrayChannelModel> {
        let amplitude = match synthesis {
            Synthesis::Dictionary => check_pair(&tx, &rx)
                .map(|_| (tx.spacing_wavelengths() * rx.spacing_wavelengths()).sqrt())?,
            Synthesis::Segmented => check_segmented(&tx, &rx)?,
        };
        let grid = WavenumberGrid::new(kl.spec.grid_k);
        let theta = grid.points();
        let w = C64::new(grid.weight(), 0.0);
        let p_r = steering_dictionary(&rx, &theta) * linalg::to_complex(&kl.modes_r_on(&grid)?) * w;
        let d_t = steering_dictionary(&tx, &theta);
        let d_t = match synthesis {
            Synthesis::Dictionary => d_t.conjugate(),
            Synthesis::Segmented => d_t,
        };
        let p_t = d_t * linalg::to_complex(&kl.modes_t_on(&grid)?) * w;
        let mut model = ArrayChannelModel {
            scale: amplitude * kl.spec.sigma2.sqrt(),
            kl,
            tx,
            rx,
            synthesis,
            p_t,
            p_r,
        };
        if normalize {
            let target = (tx.n_elems * rx.n_elems) as f64;
            let energy = model.mean_energy();
            if !(energy > 0.0) {
                return invalid("channel model has zero mean energy; cannot normalize");
            }
            model.scale *= (target / energy).sqrt();
        }
        Ok(model)
    }

    pub fn kl(&self) -> &KlModel {
        &self.kl
    }

    pub fn tx(&self) -> &ArrayGeometry {
        &self.tx
    }

    pub fn rx(&self) -> &ArrayGeometry {
        &self.rx
    }

    pub fn synthesis(&self) -> Synthesis {
        self.synthesis
    }

    /// Overall amplitude `s` applied to `P_r G P_tᵀ`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `N_t × M_t` transmit projection.
    pub fn p_t(&self) -> &CMatrix {
        &self.p_t
    }

    /// `N_r × M_r` receive projection.
    pub fn p_r(&self) -> &CMatrix {
        &self.p_r
    }

    /// Channel for given KL coefficients.
    pub fn channel_from_coefficients(&self, g: &CMatrix) -> ChannelMatrix {
        let h = &self.p_r * g * self.p_t.transpose() * C64::new(self.scale, 0.0);
        ChannelMatrix {
            h,
            tx: self.tx,
            rx: self.rx,
            synthesis: self.synthesis,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelMatrix {
        let (m_r, m_t) = self.kl.mode_counts();
        let g = complex_normal_matrix(rng, m_r, m_t);
        self.channel_from_coefficients(&g)
    }

    /// Transmit and receive covariance factors `(s·P_t P_tᴴ, s·P_r P_rᴴ)`, so
    /// that `cov(vec H) = C_t ⊗ C_r`.
    pub fn side_covariances(&self) -> (CMatrix, CMatrix) {
        let s = C64::new(self.scale, 0.0);
        let c_t = &self.p_t * self.p_t.adjoint() * s;
        let c_r = &self.p_r * self.p_r.adjoint() * s;
        (c_t, c_r)
    }

    /// Exact covariance of the column-stacked channel, `N_tN_r × N_tN_r`.
    pub fn prior_covariance(&self) -> CMatrix {
        let (c_t, c_r) = self.side_covariances();
        linalg::kron(&c_t, &c_r)
    }

    /// `E‖H‖²_F`.
    pub fn mean_energy(&self) -> f64 {
        let tr = |p: &CMatrix| p.iter().map(|z| z.norm_sqr()).sum::<f64>();
        self.scale * self.scale * tr(&self.p_t) * tr(&self.p_r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wl() -> f64 {
        crate::wavelength(3.5e9)
    }

    fn spec(k: usize) -> ChannelSpec {
        ChannelSpec::symmetric(Interval::new(-0.15, 0.15).unwrap(), 0.05, 1.0, k).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(Interval::new(0.2, 0.1).is_err());
        assert!(Interval::new(-1.2, 0.1).is_err());
        let mut s = spec(64);
        s.grid_k = 100;
        assert!(s.validate().is_err());
        s.grid_k = 32;
        assert!(s.validate().is_err());
        let mut s = spec(64);
        s.gamma_t = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn field_vanishes_outside_support() {
        let f = generate_wavenumber_field(&spec(128), 3).unwrap();
        for i in 0..128 {
            for j in 0..128 {
                let inside = f.spec.support_r.contains(f.grid.point(i)) && f.spec.support_t.contains(f.grid.point(j));
                if !inside {
                    assert_eq!(f.values[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
        assert!(f.values.norm() > 0.0);
    }

    #[test]
    fn field_is_seed_deterministic() {
        let a = generate_wavenumber_field(&spec(64), 11).unwrap();
        let b = generate_wavenumber_field(&spec(64), 11).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn steering_columns() {
        let lam = wl();
        let g = ArrayGeometry::contiguous(2, lam / 2.0, lam).unwrap();
        let d = steering_dictionary(&g, &[0.0, 1.0]);
        assert!(d.column(0).iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-15));
        assert!(d.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
        let phase = (d[(1, 1)] / d[(0, 1)]).arg();
        assert!((phase.abs() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn positions_centered() {
        let g = ArrayGeometry::contiguous(4, 0.5, 1.0).unwrap();
        assert_eq!(g.positions(), vec![-0.75, -0.25, 0.25, 0.75]);
        assert_eq!(g.aperture(), 2.0);
        assert!(ArrayGeometry::new(4, 0.5, 0.6, 1.0).is_err());
    }

    #[test]
    fn zero_and_single_entry_fields() {
        let s = spec(64);
        let lam = wl();
        let g = ArrayGeometry::contiguous(6, lam / 2.0, lam).unwrap();
        let zero = WavenumberField::from_values(s, CMatrix::zeros(64, 64)).unwrap();
        assert_eq!(synthesize_channel_matrix(&zero, &g, &g).unwrap().h.norm(), 0.0);
        let mut v = CMatrix::zeros(64, 64);
        v[(32, 31)] = C64::new(1.0, -2.0);
        let one = WavenumberField::from_values(s, v).unwrap();
        let h = synthesize_channel_matrix(&one, &g, &g).unwrap().h;
        let sv = linalg::singular_values(&h);
        assert!(sv[1] < 1e-12 * sv[0]);
    }

    #[test]
    fn out_of_support_values_rejected() {
        let mut v = CMatrix::zeros(64, 64);
        v[(0, 0)] = C64::new(1.0, 0.0);
        assert!(WavenumberField::from_values(spec(64), v).is_err());
    }

    #[test]
    fn segment_factors() {
        let lam = wl();
        let half = ArrayGeometry::contiguous(3, lam / 2.0, lam).unwrap();
        assert!((segment_factor(&half) - 0.5).abs() < 1e-15);
        let eighth = ArrayGeometry::contiguous(3, lam / 8.0, lam).unwrap();
        assert!((segment_factor(&eighth) - 0.125).abs() < 1e-15);
        let wide = ArrayGeometry::contiguous(3, 2.0 * lam, lam).unwrap();
        assert!((segment_factor(&wide) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_spatial_field() {
        let lam = wl();
        let g = ArrayGeometry::contiguous(5, lam / 8.0, lam).unwrap();
        let h0 = C64::new(0.3, -1.1);
        let h = discretize_spatial_field(|_, _| h0, &g, &g).unwrap().h;
        assert!(h.iter().all(|z| (z - h0 * 0.125).norm() < 1e-15));
    }

    #[test]
    fn sampler_matches_field_synthesis() {
        let s = spec(128);
        let lam = wl();
        let tx = ArrayGeometry::contiguous(5, lam / 2.0, lam).unwrap();
        let rx = ArrayGeometry::contiguous(7, lam / 2.0, lam).unwrap();
        for synthesis in [Synthesis::Dictionary, Synthesis::Segmented] {
            let model = ArrayChannelModel::new(s, tx, rx, synthesis, false).unwrap();
            let mut rng = stream_rng(5, 1);
            let (m_r, m_t) = model.kl().mode_counts();
            let g = complex_normal_matrix(&mut rng, m_r, m_t);
            let fast = model.channel_from_coefficients(&g).h;
            let field = model.kl().field_from_coefficients(&g, &WavenumberGrid::new(128)).unwrap();
            let slow = match synthesis {
                Synthesis::Dictionary => synthesize_channel_matrix(&field, &tx, &rx).unwrap().h,
                Synthesis::Segmented => segmented_discretization(&field, &tx, &rx).unwrap().h,
            };
            assert!((&fast - &slow).norm() < 1e-10 * slow.norm());
        }
    }

    #[test]
    fn normalization_hits_target_energy() {
        let lam = wl();
        let g = ArrayGeometry::contiguous(12, lam / 2.0, lam).unwrap();
        let model = ArrayChannelModel::new(spec(256), g, g, Synthesis::Dictionary, true).unwrap();
        assert!((model.mean_energy() - 144.0).abs() < 1e-9);
        let c = model.prior_covariance();
        let tr: f64 = (0..c.nrows()).map(|i| c[(i, i)].re).sum();
        assert!((tr - 144.0).abs() < 1e-8);
    }

    #[test]
    fn exports() {
        let h = ChannelMatrix {
            h: CMatrix::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64)),
            tx: ArrayGeometry::contiguous(3, 0.5, 1.0).unwrap(),
            rx: ArrayGeometry::contiguous(2, 0.5, 1.0).unwrap(),
            synthesis: Synthesis::Dictionary,
        };
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "1,0,1,1,1,2");
        let mut bin = Vec::new();
        h.write_binary(&mut bin).unwrap();
        assert_eq!(bin.len(), 16 + 2 * 3 * 16);
    }
}

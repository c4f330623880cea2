//! Seeded random streams and complex Gaussian sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{CMatrix, CVector, C64};

/// Independent stream `stream` of the generator seeded by `seed`.
///
/// Streams are fixed by `(seed, stream)` alone, so per-trial draws do not
/// depend on scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One `CN(0, 1)` sample.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. `CN(0, 1)` entries, filled column by column.
pub fn complex_normal_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let data: Vec<C64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    CMatrix::from_vec(rows, cols, data)
}

/// Vector of i.i.d. `CN(0, 1)` entries.
pub fn complex_normal_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_iterator(n, (0..n).map(|_| complex_normal(rng)))
}

/// Isotropic random unit vector in `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = complex_normal_vector(rng, n);
        let norm = v.norm();
        if norm > 1e-300 {
            return v / C64::new(norm, 0.0);
        }
    }
}

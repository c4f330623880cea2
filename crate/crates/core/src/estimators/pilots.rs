//! Random and DPSS pilot designs.

use rand::seq::SliceRandom;
use rand::Rng;

use super::PilotDesign;
use crate::dpss::compute_dpss;
use crate::error::{invalid, Result};
use crate::rng::{random_unit_vector, stream_rng};
use crate::{CVector, C64};

/// How admissible DPSS (Tx, Rx) column pairs are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Descending eigenvalue product `λ̃_t λ̃_r`.
    Product,
    /// Uniformly shuffled with the given seed.
    Random(u64),
}

/// `count` slots of isotropic random unit precoders and combiners.
pub fn random_pilots<R: Rng + ?Sized>(rng: &mut R, n_t: usize, n_r: usize, count: usize, power: f64) -> PilotDesign {
    let mut pre = Vec::with_capacity(count);
    let mut comb = Vec::with_capacity(count);
    for _ in 0..count {
        pre.push(random_unit_vector(rng, n_t));
        comb.push(random_unit_vector(rng, n_r));
    }
    PilotDesign::new(pre, comb, power).expect("random unit pilots are valid")
}

/// `count` DPSS pilot slots at bandwidth `w`, using Tx/Rx columns whose
/// eigenvalue is at least `eps` (at least one per side).
///
/// Returns the design and whether pairs had to be reused.
pub fn dpss_pilots(
    n_t: usize,
    n_r: usize,
    w: f64,
    eps: f64,
    count: usize,
    power: f64,
    pairing: Pairing,
) -> Result<(PilotDesign, bool)> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("eps must lie in (0, 1), got {eps}"));
    }
    let dt = compute_dpss(n_t, w)?;
    let dr = compute_dpss(n_r, w)?;
    let kt = dt.admissible(eps).max(1);
    let kr = dr.admissible(eps).max(1);

    let mut pairs: Vec<(usize, usize)> = (0..kt).flat_map(|t| (0..kr).map(move |r| (t, r))).collect();
    match pairing {
        Pairing::Product => {
            let lt = dt.eigenvalues();
            let lr = dr.eigenvalues();
            pairs.sort_by(|a, b| (lt[b.0] * lr[b.1]).total_cmp(&(lt[a.0] * lr[a.1])));
        }
        Pairing::Random(seed) => pairs.shuffle(&mut stream_rng(seed, 0)),
    }
    let recycled = count > pairs.len();
    if recycled {
        log::debug!(
            "only {} admissible DPSS pairs for {count} pilot slots; reusing pairs",
            pairs.len()
        );
    }

    let col = |m: &nalgebra::DMatrix<f64>, j: usize| -> CVector {
        CVector::from_iterator(m.nrows(), m.column(j).iter().map(|&x| C64::new(x, 0.0)))
    };
    let mut pre = Vec::with_capacity(count);
    let mut comb = Vec::with_capacity(count);
    for i in 0..count {
        let (t, r) = pairs[i % pairs.len()];
        pre.push(col(dt.vectors(), t));
        comb.push(col(dr.vectors(), r));
    }
    Ok((PilotDesign::new(pre, comb, power)?, recycled))
}

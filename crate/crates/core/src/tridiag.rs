//! Symmetric tridiagonal eigen-solver (implicit QL with Wilkinson shifts).

use nalgebra::DMatrix;

use crate::error::{numerical, Result};

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off.len() == diag.len() - 1`).
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns.
pub(crate) fn symmetric_tridiagonal_eigen(
    diag: &[f64],
    off: &[f64],
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = diag.len();
    assert!(n >= 1 && off.len() + 1 == n);
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    let mut z = DMatrix::<f64>::identity(n, n);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return numerical(format!(
                    "tridiagonal QL did not converge for eigenvalue {l} of {n} \
                     (|e|={:.3e}, d={:.6e})",
                    e[l].abs(),
                    d[l]
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zf = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = s * zi + c * zf;
                    z[(k, i)] = c * zi - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| z[(r, order[c])]);
    Ok((values, vectors))
}

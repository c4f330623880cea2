//! Legendre polynomials, Gauss–Legendre quadrature and `sinc`.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Orders above this are evaluated with the three-term recursion instead of
/// the monomial table (monomial coefficients grow like 2^n and cancel badly).
pub const MONOMIAL_EVAL_MAX_ORDER: usize = 30;

/// Normalized sinc, `sin(πx)/(πx)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        // Taylor: 1 - (πx)²/6, exact to double precision here.
        let px = PI * x;
        1.0 - px * px / 6.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Monomial coefficients of the orthonormal Legendre polynomials
/// `P̄_n(x) = √(n + 1/2) P_n(x)`, `n = 0..=max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialTable {
    max_order: usize,
    /// Row `n` holds the coefficients of `x^0, x^1, ..., x^max_order`.
    coeffs: Vec<Vec<f64>>,
}

impl PolynomialTable {
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Coefficients of `P̄_n` in ascending powers of `x`.
    pub fn row(&self, n: usize) -> &[f64] {
        &self.coeffs[n]
    }

    /// Table of derivative coefficients, row `n` holding `P̄_n'`.
    pub fn derivative(&self) -> PolynomialTable {
        let m = self.max_order;
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                let mut d = vec![0.0; m + 1];
                for j in 1..=m {
                    d[j - 1] = j as f64 * row[j];
                }
                d
            })
            .collect();
        PolynomialTable {
            max_order: m,
            coeffs,
        }
    }

    /// Evaluates row `n` at `x` by Horner's rule on the monomial coefficients.
    pub fn eval_monomial(&self, n: usize, x: f64) -> f64 {
        self.coeffs[n].iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Evaluates `P̄_n(x)`. Low orders use the table, high orders the recursion.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        assert!(n <= self.max_order, "order {n} beyond table");
        if n <= MONOMIAL_EVAL_MAX_ORDER {
            self.eval_monomial(n, x)
        } else {
            normalized_legendre(n, x)[n]
        }
    }
}

/// Builds the normalized Legendre table from the three-term recursion
/// `P_{n+1} = ((2n+1) x P_n − n P_{n−1}) / (n+1)`, `P_0 = 1`, `P_1 = x`.
pub fn legendre_table(max_order: usize) -> Result<PolynomialTable> {
    if max_order < 1 {
        return invalid("legendre_table: max_order must be >= 1");
    }
    let m = max_order;
    let mut raw = vec![vec![0.0; m + 1]; m + 1];
    raw[0][0] = 1.0;
    raw[1][1] = 1.0;
    for n in 1..m {
        let a = (2 * n + 1) as f64 / (n + 1) as f64;
        let b = n as f64 / (n + 1) as f64;
        for j in 0..=m {
            let shifted = if j > 0 { raw[n][j - 1] } else { 0.0 };
            raw[n + 1][j] = a * shifted - b * raw[n - 1][j];
        }
    }
    for (n, row) in raw.iter_mut().enumerate() {
        let s = (n as f64 + 0.5).sqrt();
        row.iter_mut().for_each(|c| *c *= s);
    }
    Ok(PolynomialTable {
        max_order: m,
        coeffs: raw,
    })
}

/// Values `P̄_0(x), ..., P̄_{n_max}(x)` via the recursion.
pub fn normalized_legendre(n_max: usize, x: f64) -> Vec<f64> {
    let mut p = legendre(n_max, x);
    for (n, v) in p.iter_mut().enumerate() {
        *v *= (n as f64 + 0.5).sqrt();
    }
    p
}

/// Values and first derivatives of `P̄_0..=P̄_{n_max}` at `x`.
///
/// Derivatives use `P'_{n+1} = P'_{n−1} + (2n+1) P_n`, which stays finite at
/// the endpoints.
pub fn normalized_legendre_with_derivative(n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let p = legendre(n_max, x);
    let mut dp = vec![0.0; n_max + 1];
    if n_max >= 1 {
        dp[1] = 1.0;
    }
    for n in 1..n_max {
        dp[n + 1] = dp[n - 1] + (2 * n + 1) as f64 * p[n];
    }
    let scale = |n: usize| (n as f64 + 0.5).sqrt();
    let pv = p.iter().enumerate().map(|(n, v)| v * scale(n)).collect();
    let dv = dp.iter().enumerate().map(|(n, v)| v * scale(n)).collect();
    (pv, dv)
}

fn legendre(n_max: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n_max + 1];
    p[0] = 1.0;
    if n_max >= 1 {
        p[1] = x;
    }
    for n in 1..n_max {
        p[n + 1] = ((2 * n + 1) as f64 * x * p[n] - n as f64 * p[n - 1]) / (n + 1) as f64;
    }
    p
}

/// Quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine map of the rule onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        QuadratureRule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }
}

/// Gauss–Legendre rule with `n_nodes` points: Newton iteration on `P_n` from
/// Chebyshev-like initial guesses.
pub fn gauss_legendre_rule(n_nodes: usize) -> Result<QuadratureRule> {
    if n_nodes < 1 {
        return invalid("gauss_legendre_rule: n_nodes must be >= 1");
    }
    let n = n_nodes;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-14 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Largest root first; fill from both ends.
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    // (1 − x²) P_n' = n (P_{n−1} − x P_n)
    let d = n as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, d)
}

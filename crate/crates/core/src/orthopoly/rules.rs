//! Gaussian quadrature rules from three-term recurrence coefficients.
//!
//! Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix,
//! located by Sturm-sequence bisection. Weights come from the Christoffel
//! function `1 / sum_k p_k(x)^2` of the orthonormal polynomials, which avoids
//! computing eigenvectors.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::GammaProduct;

/// Largest order any rule constructor accepts.
pub const MAX_ORDER: usize = 2048;

/// Recurrence data of a monic orthogonal family:
/// `p_{k+1} = (x - diag[k]) p_k - offdiag_sq[k] p_{k-1}`.
#[derive(Debug, Clone)]
pub struct Recurrence {
    pub diag: Vec<f64>,
    /// `offdiag_sq[k]` couples degrees `k-1` and `k`; entry 0 is unused.
    pub offdiag_sq: Vec<f64>,
    /// Total mass of the weight function.
    pub mu0: f64,
}

impl Recurrence {
    /// Jacobi weight `(1-x)^alpha (1+x)^beta` on `[-1, 1]`.
    pub fn jacobi(alpha: f64, beta: f64, order: usize) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::domain(format!(
                "Jacobi exponents must exceed -1 (alpha = {alpha}, beta = {beta})"
            )));
        }
        let ab = alpha + beta;
        let mut diag = Vec::with_capacity(order);
        let mut offdiag_sq = vec![0.0; order + 1];
        for n in 0..order {
            let nf = n as f64;
            let d = if n == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * nf + ab) * (2.0 * nf + ab + 2.0))
            };
            diag.push(d);
        }
        for (n, slot) in offdiag_sq.iter_mut().enumerate().skip(1) {
            let nf = n as f64;
            *slot = if n == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * nf + ab;
                4.0 * nf * (nf + alpha) * (nf + beta) * (nf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
        }
        let mu0 = GammaProduct::new()
            .times(alpha + 1.0)?
            .times(beta + 1.0)?
            .over(ab + 2.0)
            .pow(2.0, ab + 1.0)
            .value();
        Ok(Self { diag, offdiag_sq, mu0 })
    }

    /// Hermite weight `exp(-x^2)` on the real line.
    pub fn hermite(order: usize) -> Self {
        let diag = vec![0.0; order];
        let offdiag_sq = (0..=order).map(|n| n as f64 / 2.0).collect();
        Self { diag, offdiag_sq, mu0: PI.sqrt() }
    }
}

/// Number of eigenvalues of the leading `n x n` block below `x`.
fn sturm_count(diag: &[f64], offdiag_sq: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for k in 0..diag.len() {
        let coupling = if k == 0 { 0.0 } else { offdiag_sq[k] / q };
        q = diag[k] - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn eigenvalues(rec: &Recurrence, n: usize) -> Result<Vec<f64>> {
    let diag = &rec.diag[..n];
    let offdiag_sq = &rec.offdiag_sq[..n];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..n {
        let left = if k > 0 { offdiag_sq[k].sqrt() } else { 0.0 };
        let right = if k + 1 < n { offdiag_sq[k + 1].sqrt() } else { 0.0 };
        lo = lo.min(diag[k] - left - right);
        hi = hi.max(diag[k] + left + right);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::EigenConvergence(n));
    }
    let mut out = Vec::with_capacity(n);
    let mut floor = lo;
    for k in 0..n {
        let (mut a, mut b) = (floor, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, offdiag_sq, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        let x = 0.5 * (a + b);
        if !x.is_finite() {
            return Err(Error::EigenConvergence(n));
        }
        out.push(x);
        floor = a;
    }
    Ok(out)
}

/// `1 / sum_{k<n} p_k(x)^2` over the orthonormal family, rescaled to stay
/// in range for wide Hermite rules.
fn christoffel(rec: &Recurrence, n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0 / rec.mu0.sqrt();
    let mut sum = cur * cur;
    let mut log_scale = 0.0;
    for k in 0..n - 1 {
        let b_next = rec.offdiag_sq[k + 1].sqrt();
        let b_cur = rec.offdiag_sq[k].sqrt();
        let next = ((x - rec.diag[k]) * cur - b_cur * prev) / b_next;
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > 1e100 {
            prev *= 1e-100;
            cur *= 1e-100;
            sum *= 1e-200;
            log_scale += 200.0 * std::f64::consts::LN_10;
        }
    }
    (-(sum.ln() + log_scale)).exp()
}

/// Gaussian rule of `order` points for the weight encoded by `rec`.
pub fn gauss_rule(rec: &Recurrence, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::domain(format!("quadrature order {order} outside 1..={MAX_ORDER}")));
    }
    if rec.diag.len() < order || rec.offdiag_sq.len() < order {
        return Err(Error::domain("recurrence shorter than requested order"));
    }
    let nodes = eigenvalues(rec, order)?;
    let weights = nodes.iter().map(|&x| christoffel(rec, order, x)).collect();
    Ok((nodes, weights))
}

/// Average mirrored nodes and weights so a symmetric rule is exactly symmetric.
pub(crate) fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// Gauss–Jacobi nodes and weights for `(1-x)^alpha (1+x)^beta` on `[-1, 1]`.
pub fn gauss_jacobi(alpha: f64, beta: f64, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rec = Recurrence::jacobi(alpha, beta, order)?;
    let (mut nodes, mut weights) = gauss_rule(&rec, order)?;
    if alpha == beta {
        symmetrize(&mut nodes, &mut weights);
    }
    Ok((nodes, weights))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    gauss_jacobi(0.0, 0.0, order)
}

/// Gauss–Hermite nodes and weights for `exp(-x^2)`.
pub fn gauss_hermite(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rec = Recurrence::hermite(order);
    let (mut nodes, mut weights) = gauss_rule(&rec, order)?;
    symmetrize(&mut nodes, &mut weights);
    Ok((nodes, weights))
}

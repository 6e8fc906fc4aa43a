//! Gegenbauer and Hermite polynomials, their norms, the normalized weighted
//! Gegenbauer functions `u_n^lambda`, and Gauss quadrature rules.

mod rules;

use std::f64::consts::PI;

pub use rules::{gauss_hermite, gauss_jacobi, gauss_legendre, gauss_rule, Recurrence, MAX_ORDER};

use crate::error::{Error, Result};
use crate::specfun::{rgamma, GammaProduct};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > -0.5) || lambda == 0.0 {
        return Err(Error::domain(format!(
            "Gegenbauer parameter must satisfy lambda > -1/2 and lambda != 0 (got {lambda})"
        )));
    }
    Ok(())
}

/// Gegenbauer polynomials `C_n^lambda` of one parameter up to a maximum degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerBasis {
    lambda: f64,
    max_degree: usize,
}

impl GegenbauerBasis {
    pub fn new(lambda: f64, max_degree: usize) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self { lambda, max_degree })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// All values `C_0(x), ..., C_max(x)`.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.max_degree + 1];
        gegenbauer_fill(self.lambda, x, &mut out);
        out
    }

    pub fn norm_sq(&self, n: usize) -> f64 {
        gegenbauer_norm_sq(self.lambda, n)
    }
}

/// Fill `out[n] = C_n^lambda(x)` for `n < out.len()` by the three-term recurrence.
pub fn gegenbauer_fill(lambda: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = 2.0 * lambda * x;
    }
    for n in 2..out.len() {
        let nf = n as f64;
        out[n] = (2.0 * (nf + lambda - 1.0) * x * out[n - 1] - (nf + 2.0 * lambda - 2.0) * out[n - 2]) / nf;
    }
}

/// `C_n^lambda(x)`.
pub fn gegenbauer(lambda: f64, n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 1..=n {
        let kf = k as f64;
        let next = if k == 1 {
            2.0 * lambda * x
        } else {
            (2.0 * (kf + lambda - 1.0) * x * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf
        };
        prev = cur;
        cur = next;
    }
    cur
}

/// Endpoint value `C_n^lambda(1) = Gamma(n + 2 lambda) / (n! Gamma(2 lambda))`.
pub fn gegenbauer_at_one(lambda: f64, n: usize) -> f64 {
    // (2 lambda)_n / n!, as a running product to stay exact for small n
    (0..n).fold(1.0, |acc, k| acc * (2.0 * lambda + k as f64) / (k as f64 + 1.0))
}

/// Squared norm `v_n^lambda = 2^{1-2 lambda} pi Gamma(n + 2 lambda) /
/// (n! (n + lambda) Gamma(lambda)^2)` in `L^2((1-x^2)^{lambda-1/2} dx)`.
pub fn gegenbauer_norm_sq(lambda: f64, n: usize) -> f64 {
    let nf = n as f64;
    let g = GammaProduct::new()
        .times(nf + 2.0 * lambda)
        .map(|g| g.over(nf + 1.0).over(lambda).over(lambda))
        .map(|g| g.scale(PI / (nf + lambda)).pow(2.0, 1.0 - 2.0 * lambda));
    match g {
        Ok(g) => g.value(),
        // n + 2 lambda at a pole only for n = 0, lambda = 0, which is excluded
        Err(_) => f64::NAN,
    }
}

/// Normalized weighted Gegenbauer function
/// `u_n^lambda(s) = 2^{2 lambda - 1} n! Gamma(lambda) / Gamma(2 lambda + n)
/// (1-s^2)^{lambda-1/2} C_n^lambda(s)`.
///
/// Evaluated in the equivalent form `sqrt(pi) / Gamma(lambda + 1/2)
/// (1-s^2)^{lambda-1/2} C_n^lambda(s) / C_n^lambda(1)`, which is regular at
/// `lambda = 0` (Chebyshev limit).
pub fn u_weighted(lambda: f64, n: usize, s: f64) -> f64 {
    let weight = (1.0 - s * s).powf(lambda - 0.5);
    let shape = if lambda == 0.0 {
        (n as f64 * s.clamp(-1.0, 1.0).acos()).cos()
    } else {
        gegenbauer(lambda, n, s) / gegenbauer_at_one(lambda, n)
    };
    PI.sqrt() * rgamma(lambda + 0.5) * weight * shape
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Fill `out[n] = H_n(x)`.
pub fn hermite_fill(x: f64, out: &mut [f64]) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = cur;
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
}

/// `n! lambda^{-n/2} C_n^lambda(x / sqrt(lambda))`, which tends to `H_n(x)`
/// as `lambda -> infinity`.
pub fn hermite_limit_approx(lambda: f64, n: usize, x: f64) -> f64 {
    let fact = (1..=n).fold(1.0, |acc, k| acc * k as f64);
    fact * lambda.powf(-(n as f64) / 2.0) * gegenbauer(lambda, n, x / lambda.sqrt())
}

/// Gauss rule for `int_{-1}^{1} f(x) (1-x^2)^{lambda-1/2} dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lambda: f64,
    pub order: usize,
}

impl QuadratureRule {
    /// Apply the rule to `f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Gegenbauer rule of the given order; exact for polynomials of
/// degree `<= 2 order - 1` against `(1-x^2)^{lambda-1/2}`.
pub fn gauss_gegenbauer_rule(lambda: f64, order: usize) -> Result<QuadratureRule> {
    if !(lambda > -0.5) {
        return Err(Error::domain(format!("Gauss–Gegenbauer rule needs lambda > -1/2 (got {lambda})")));
    }
    if order == 0 {
        return Err(Error::domain("quadrature order must be at least 1"));
    }
    let e = lambda - 0.5;
    let (nodes, weights) = gauss_jacobi(e, e, order)?;
    Ok(QuadratureRule { nodes, weights, lambda, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{beta, gamma};

    #[test]
    fn gegenbauer_examples() {
        assert_eq!(gegenbauer(0.7, 0, 0.3), 1.0);
        assert!(gegenbauer(1.0, 2, 0.5).abs() < 1e-15);
        assert!((gegenbauer(2.0, 3, 1.0) - 20.0).abs() < 1e-12);
        assert!((gegenbauer_at_one(2.0, 3) - 20.0).abs() < 1e-12);
        let basis = GegenbauerBasis::new(1.5, 6).unwrap();
        let all = basis.eval_all(-0.4);
        for (n, v) in all.iter().enumerate() {
            assert!((v - gegenbauer(1.5, n, -0.4)).abs() < 1e-14);
        }
    }

    #[test]
    fn basis_rejects_zero_and_small_lambda() {
        assert!(GegenbauerBasis::new(0.0, 3).is_err());
        assert!(GegenbauerBasis::new(-0.5, 3).is_err());
        assert!(GegenbauerBasis::new(-0.2, 3).is_ok());
    }

    #[test]
    fn norm_examples() {
        assert!((gegenbauer_norm_sq(1.0, 0) - PI / 2.0).abs() < 1e-13);
        assert!((gegenbauer_norm_sq(1.0, 1) - PI / 2.0).abs() < 1e-13);
        assert!((gegenbauer_norm_sq(0.5, 2) - 0.4).abs() < 1e-14);
        // n = 0 is the total mass of the weight for every admissible lambda
        for lambda in [-0.3, 0.25, 1.0, 2.5] {
            let mass = beta(0.5, lambda + 0.5).unwrap();
            assert!((gegenbauer_norm_sq(lambda, 0) - mass).abs() < 1e-13 * mass);
        }
    }

    #[test]
    fn u_weighted_examples() {
        // the normalization 2^{2l-1} Gamma(l)/Gamma(2l) equals sqrt(pi)/Gamma(l+1/2)
        assert!((u_weighted(0.5, 0, 0.0) - PI.sqrt()).abs() < 1e-14);
        assert!((u_weighted(1.0, 0, 0.0) - 2.0).abs() < 1e-14);
        assert_eq!(u_weighted(1.7, 1, 0.0), 0.0);
        // direct gamma form at a generic point
        let (lambda, n, s) = (1.3f64, 3, 0.42f64);
        let direct = 2f64.powf(2.0 * lambda - 1.0) * 6.0 * gamma(lambda).unwrap()
            / gamma(2.0 * lambda + 3.0).unwrap()
            * (1.0 - s * s).powf(lambda - 0.5)
            * gegenbauer(lambda, n, s);
        assert!((u_weighted(lambda, n, s) - direct).abs() < 1e-14);
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 0.3), 1.0);
        assert_eq!(hermite(2, 1.0), 2.0);
        assert_eq!(hermite(3, 0.5), -5.0);
        let mut buf = [0.0; 5];
        hermite_fill(0.7, &mut buf);
        for (n, v) in buf.iter().enumerate() {
            assert_eq!(*v, hermite(n, 0.7));
        }
    }

    #[test]
    fn gegenbauer_rule_examples() {
        let r = gauss_gegenbauer_rule(0.5, 1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-14);
        let r = gauss_gegenbauer_rule(0.5, 2).unwrap();
        assert!((r.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        for order in [1, 5, 32, 100] {
            let r = gauss_gegenbauer_rule(1.0, order).unwrap();
            let mass: f64 = r.weights.iter().sum();
            assert!((mass - PI / 2.0).abs() < 1e-13, "order {order}: {mass}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights.iter().all(|w| *w > 0.0));
        }
        let r = gauss_gegenbauer_rule(0.8, 512).unwrap();
        assert_eq!(r.nodes.len(), 512);
    }
}

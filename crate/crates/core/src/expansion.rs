//! Closed forms for the double Gegenbauer expansion of `|s-t|^{2 nu} sgn^eps(s-t)`:
//! the coefficients `b_{l,m}`, the sheared integrals `B_{l,m}(x)` and their
//! sign variants, truncated series evaluation with a tail bound, and the
//! special and limiting integrals that follow from them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orthopoly::{gegenbauer_at_one, gegenbauer_fill, gegenbauer_norm_sq};
use crate::specfun::{beta, hyp2f1_value, log_gamma, near_integer, pochhammer, GammaProduct};

/// Largest truncation order [`truncation_order`] will return.
pub const MAX_TRUNCATION_ORDER: usize = 2000;

const SMALLEST_BOX: usize = 64;
const LARGEST_BOX: usize = 2048;

/// Parameters `(lambda, mu, nu)` and the parity `eps` of the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionParams {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub eps: u8,
}

impl ExpansionParams {
    pub fn new(lambda: f64, mu: f64, nu: f64, eps: u8) -> Result<Self> {
        if !(lambda > 0.0 && mu > 0.0) {
            return Err(Error::domain(format!(
                "coefficients need lambda > 0 and mu > 0 (got lambda = {lambda}, mu = {mu})"
            )));
        }
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::domain(format!("nu must be positive and finite (got {nu})")));
        }
        if eps > 1 {
            return Err(Error::domain(format!("parity eps must be 0 or 1 (got {eps})")));
        }
        Ok(Self { lambda, mu, nu, eps })
    }

    /// `2 nu > lambda + mu + 4`, under which the series converges uniformly.
    pub fn satisfies_hypothesis(&self) -> bool {
        2.0 * self.nu > self.lambda + self.mu + 4.0
    }

    pub fn check_hypothesis(&self) -> Result<()> {
        if self.satisfies_hypothesis() {
            Ok(())
        } else {
            Err(Error::Hypothesis { lambda: self.lambda, mu: self.mu, nu: self.nu })
        }
    }

    /// The expanded kernel `|s-t|^{2 nu} sgn^eps(s-t)`, with `sgn(0) = 0`.
    pub fn kernel(&self, s: f64, t: f64) -> f64 {
        let y = s - t;
        let p = y.abs().powf(2.0 * self.nu);
        if self.eps == 0 {
            p
        } else if y == 0.0 {
            0.0
        } else {
            y.signum() * p
        }
    }

    fn denominators(&self, ell: usize, m: usize) -> [f64; 4] {
        let (l, mu_, nu) = (self.lambda, self.mu, self.nu);
        let base = nu + 1.0 + 0.5 * (l + mu_);
        let a = 0.5 * (l + ell as f64);
        let b = 0.5 * (mu_ + m as f64);
        [base + a + b, base + a - b, base - a + b, base - a - b]
    }
}

fn sign_pow(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn coeff_product(p: &ExpansionParams, ell: usize, m: usize) -> Result<GammaProduct> {
    let (l, mu, nu) = (p.lambda, p.mu, p.nu);
    let mut g = GammaProduct::new()
        .times(l + mu + 2.0 * nu + 1.0)?
        .times(l)?
        .times(mu)?
        .times(2.0 * nu + 1.0)?;
    for d in p.denominators(ell, m) {
        g = g.over(d);
    }
    Ok(g
        .scale(sign_pow(m) * (l + ell as f64) * (mu + m as f64))
        .pow(2.0, -2.0 * nu))
}

/// Expansion coefficient `b_{l,m}`; exactly zero when a denominator gamma
/// sits at a pole.
pub fn coeff_b(params: &ExpansionParams, ell: usize, m: usize) -> Result<f64> {
    Ok(coeff_product(params, ell, m)?.value())
}

/// `log(|b_{l,m}| C_l^lambda(1) C_m^mu(1))`, `-inf` for vanishing coefficients.
fn log_tail_term(p: &ExpansionParams, ell: usize, m: usize, log_c1_l: f64, log_c1_m: f64) -> f64 {
    match coeff_product(p, ell, m) {
        Ok(g) if !g.is_zero() => g.log_abs() + log_c1_l + log_c1_m,
        _ => f64::NEG_INFINITY,
    }
}

fn log_c1(lambda: f64, n: usize) -> f64 {
    // C_n^lambda(1) = Gamma(n + 2 lambda) / (n! Gamma(2 lambda)) for lambda > 0
    let lg = |x: f64| log_gamma(x).unwrap_or(f64::NAN);
    lg(n as f64 + 2.0 * lambda) - lg(n as f64 + 1.0) - lg(2.0 * lambda)
}

/// Dense table of `b_{l,m}` for `0 <= l <= L`, `0 <= m <= M`; entries of the
/// wrong parity are zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffTable {
    pub params: ExpansionParams,
    pub l_max: usize,
    pub m_max: usize,
    /// Row-major, `(L+1) x (M+1)`.
    pub values: Vec<f64>,
    pub parity_zeroed: bool,
}

impl CoeffTable {
    pub fn get(&self, ell: usize, m: usize) -> f64 {
        self.values[ell * (self.m_max + 1) + m]
    }

    pub fn row(&self, ell: usize) -> &[f64] {
        let w = self.m_max + 1;
        &self.values[ell * w..(ell + 1) * w]
    }

    /// Whether `(l, m)` can carry a nonzero entry.
    pub fn parity_allows(&self, ell: usize, m: usize) -> bool {
        (ell + m) % 2 == self.params.eps as usize
    }
}

pub fn coeff_table(params: &ExpansionParams, l_max: usize, m_max: usize) -> Result<CoeffTable> {
    let rows: Vec<Vec<f64>> = (0..=l_max)
        .into_par_iter()
        .map(|ell| {
            (0..=m_max)
                .map(|m| {
                    if (ell + m) % 2 == params.eps as usize {
                        coeff_b(params, ell, m)
                    } else {
                        Ok(0.0)
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(CoeffTable {
        params: *params,
        l_max,
        m_max,
        values: rows.into_iter().flatten().collect(),
        parity_zeroed: true,
    })
}

/// Bound on `sum |b_{l,m}| C_l(1) C_m(1)` over index sets, from exact sums on
/// the box `[0, K]^2` and a power-law majorant outside it.
///
/// The shell sums `S(n) = sum_{l+m=n}` decay like `n^{-kappa}` with
/// `kappa = 2 nu + 1 - lambda - mu`; the majorant fits the constant on
/// `n in [K/2, K]`, doubles it, and bounds `sum_{n>K} S(n)` by the integral.
#[derive(Debug, Clone)]
struct TailModel {
    k: usize,
    /// `|b| C(1) C(1)`, row-major `(K+1) x (K+1)`.
    terms: Vec<f64>,
    /// `row_after[l]`: box mass with row index `> l`.
    row_after: Vec<f64>,
    col_after: Vec<f64>,
    outside: f64,
}

impl TailModel {
    fn new(p: &ExpansionParams, k: usize) -> Self {
        let lc_l: Vec<f64> = (0..=k).map(|n| log_c1(p.lambda, n)).collect();
        let lc_m: Vec<f64> = (0..=k).map(|n| log_c1(p.mu, n)).collect();
        let eps = p.eps as usize;
        let terms: Vec<f64> = (0..=k)
            .into_par_iter()
            .flat_map_iter(|ell| {
                let lc_m = &lc_m;
                let l_term = lc_l[ell];
                (0..=k).map(move |m| {
                    if (ell + m) % 2 != eps {
                        0.0
                    } else {
                        log_tail_term(p, ell, m, l_term, lc_m[m]).exp()
                    }
                })
            })
            .collect();
        let w = k + 1;
        let mut row_after = vec![0.0; w];
        let mut col_after = vec![0.0; w];
        for n in (0..k).rev() {
            row_after[n] = row_after[n + 1] + terms[(n + 1) * w..(n + 2) * w].iter().sum::<f64>();
            col_after[n] = col_after[n + 1] + (0..w).map(|l| terms[l * w + n + 1]).sum::<f64>();
        }
        let kappa = 2.0 * p.nu + 1.0 - p.lambda - p.mu;
        let mut fit = 0.0f64;
        for n in k / 2..=k {
            let shell: f64 = (0..=n).map(|ell| terms[ell * w + (n - ell)]).sum();
            fit = fit.max(shell * (n as f64).powf(kappa));
        }
        let outside = if fit == 0.0 {
            0.0
        } else {
            2.0 * fit * (k as f64).powf(1.0 - kappa) / (kappa - 1.0)
        };
        Self { k, terms, row_after, col_after, outside }
    }

    /// Everything with `l > ell_cut`.
    fn row_tail(&self, ell_cut: usize) -> f64 {
        self.outside + self.row_after.get(ell_cut).copied().unwrap_or(0.0)
    }

    /// Everything with `m > m_cut`.
    fn col_tail(&self, m_cut: usize) -> f64 {
        self.outside + self.col_after.get(m_cut).copied().unwrap_or(0.0)
    }

    /// Everything outside `[0, L] x [0, M]`.
    fn tail(&self, l_cut: usize, m_cut: usize) -> f64 {
        let w = self.k + 1;
        let mut s = self.outside;
        for ell in 0..w {
            for m in 0..w {
                if ell > l_cut || m > m_cut {
                    s += self.terms[ell * w + m];
                }
            }
        }
        s
    }
}

fn box_size_for(order: usize) -> usize {
    (2 * (order + 1)).next_power_of_two().clamp(SMALLEST_BOX, LARGEST_BOX)
}

/// Upper bound on `sup |kernel - partial sum|` over `[-1,1]^2` for the
/// truncation `[0, L] x [0, M]`.
pub fn tail_bound(params: &ExpansionParams, l_max: usize, m_max: usize) -> Result<f64> {
    params.check_hypothesis()?;
    let model = TailModel::new(params, box_size_for(l_max.max(m_max)));
    Ok(model.tail(l_max, m_max))
}

/// Smallest `(L, M)` whose row and column tail bounds are each below `tol / 2`.
///
/// The bound at each candidate order uses a box that depends on the order
/// alone, so the result is monotone in `tol`.
pub fn truncation_order(params: &ExpansionParams, tol: f64) -> Result<(usize, usize)> {
    params.check_hypothesis()?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive (got {tol})")));
    }
    let mut models: Vec<TailModel> = Vec::new();
    let mut search = |row: bool| -> Option<usize> {
        (0..=MAX_TRUNCATION_ORDER).find(|&n| {
            let k = box_size_for(n);
            let model = match models.iter().position(|m| m.k == k) {
                Some(i) => &models[i],
                None => {
                    models.push(TailModel::new(params, k));
                    models.last().expect("just pushed")
                }
            };
            let bound = if row { model.row_tail(n) } else { model.col_tail(n) };
            bound < 0.5 * tol
        })
    };
    let l_found = search(true);
    let m_found = search(false);
    match (l_found, m_found) {
        (Some(l), Some(m)) => Ok((l, m)),
        _ => Err(Error::UnboundedOrder { tol, max_order: MAX_TRUNCATION_ORDER }),
    }
}

/// Partial sum of the expansion at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEvalResult {
    pub value: f64,
    pub order_used: (usize, usize),
    pub tail_bound: f64,
}

/// Precomputed truncated expansion for repeated evaluation.
#[derive(Debug, Clone)]
pub struct SeriesEvaluator {
    table: CoeffTable,
    tail_bound: f64,
}

impl SeriesEvaluator {
    /// Fails on the convergence hypothesis unless `force` is set; forced
    /// evaluation outside the hypothesis reports an infinite tail bound.
    pub fn new(params: &ExpansionParams, l_max: usize, m_max: usize, force: bool) -> Result<Self> {
        let tail_bound = if params.satisfies_hypothesis() {
            tail_bound(params, l_max, m_max)?
        } else if force {
            f64::INFINITY
        } else {
            return Err(Error::Hypothesis { lambda: params.lambda, mu: params.mu, nu: params.nu });
        };
        Ok(Self { table: coeff_table(params, l_max, m_max)?, tail_bound })
    }

    pub fn table(&self) -> &CoeffTable {
        &self.table
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let p = &self.table.params;
        let mut cs = vec![0.0; self.table.l_max + 1];
        let mut ct = vec![0.0; self.table.m_max + 1];
        gegenbauer_fill(p.lambda, s, &mut cs);
        gegenbauer_fill(p.mu, t, &mut ct);
        let mut total = 0.0;
        for (ell, c) in cs.iter().enumerate() {
            let row: f64 = self.table.row(ell).iter().zip(&ct).map(|(b, d)| b * d).sum();
            total += c * row;
        }
        total
    }

    pub fn result(&self, s: f64, t: f64) -> SeriesEvalResult {
        SeriesEvalResult {
            value: self.eval(s, t),
            order_used: (self.table.l_max, self.table.m_max),
            tail_bound: self.tail_bound,
        }
    }
}

pub fn series_eval(
    params: &ExpansionParams,
    s: f64,
    t: f64,
    l_max: usize,
    m_max: usize,
    force: bool,
) -> Result<SeriesEvalResult> {
    if !(s.abs() <= 1.0 && t.abs() <= 1.0) {
        return Err(Error::domain(format!("(s, t) = ({s}, {t}) outside [-1, 1]^2")));
    }
    Ok(SeriesEvaluator::new(params, l_max, m_max, force)?.result(s, t))
}

fn check_b_domain(lambda: f64, mu: f64, nu: f64, x: f64) -> Result<()> {
    if !(lambda > -0.5 && mu > -0.5) {
        return Err(Error::domain(format!(
            "need lambda, mu > -1/2 (got lambda = {lambda}, mu = {mu})"
        )));
    }
    if !(nu > 0.0) {
        return Err(Error::domain(format!("need nu > 0 (got {nu})")));
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("need -1 <= x <= 1 (got {x})")));
    }
    Ok(())
}

/// `B_{l,m}(x) = int int (s - x t)_+^{2 nu} u_l^lambda(s) u_m^mu(t) ds dt` in
/// closed form.
pub fn integral_b(lambda: f64, mu: f64, nu: f64, ell: usize, m: usize, x: f64) -> Result<f64> {
    check_b_domain(lambda, mu, nu, x)?;
    if x == 0.0 && m > 0 {
        return Ok(0.0);
    }
    let (lf, mf) = (ell as f64, m as f64);
    let f = hyp2f1_value(
        -nu + 0.5 * (lf + mf),
        -lambda - nu + 0.5 * (mf - lf),
        mu + mf + 1.0,
        x * x,
    )?;
    Ok(GammaProduct::new()
        .times(2.0 * nu + 1.0)?
        .over(nu - 0.5 * (lf + mf) + 1.0)
        .over(mu + mf + 1.0)
        .over(lambda + nu + 0.5 * (lf - mf) + 1.0)
        .scale(sign_pow(m) * PI * PI * x.powi(m as i32) * f)
        .pow(2.0, -(2.0 * nu + 1.0))
        .value())
}

/// Kernel replacing `(s - x t)_+^{2 nu}` in [`integral_b_variant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BVariant {
    PlusPart,
    MinusPart,
    Abs,
    AbsSgn,
}

impl BVariant {
    pub fn factor(self, ell: usize, m: usize) -> f64 {
        let p = sign_pow(ell + m);
        match self {
            BVariant::PlusPart => 1.0,
            BVariant::MinusPart => p,
            BVariant::Abs => 1.0 + p,
            BVariant::AbsSgn => 1.0 - p,
        }
    }
}

pub fn integral_b_variant(
    kind: BVariant,
    lambda: f64,
    mu: f64,
    nu: f64,
    ell: usize,
    m: usize,
    x: f64,
) -> Result<f64> {
    let factor = kind.factor(ell, m);
    let b = integral_b(lambda, mu, nu, ell, m, x)?;
    Ok(if factor == 0.0 { 0.0 } else { factor * b })
}

/// `int int |s-t|^{2 nu} sgn^eps(s-t) (1-s^2)^{lambda-1/2} (1-t^2)^{mu-1/2}
/// C_l^lambda(s) C_m^mu(t) ds dt = 1/2 (1 + (-1)^{l+m+eps}) b_{l,m} v_l v_m`.
pub fn projection_integral(params: &ExpansionParams, ell: usize, m: usize) -> Result<f64> {
    if (ell + m + params.eps as usize) % 2 == 1 {
        return Ok(0.0);
    }
    let (l, mu, nu) = (params.lambda, params.mu, params.nu);
    // b v_l v_m with (lambda + l)/(l + lambda) and one Gamma(lambda) cancelled
    let mut g = GammaProduct::new()
        .times(l + mu + 2.0 * nu + 1.0)?
        .times(2.0 * nu + 1.0)?
        .times(ell as f64 + 2.0 * l)?
        .times(m as f64 + 2.0 * mu)?
        .over(ell as f64 + 1.0)
        .over(m as f64 + 1.0)
        .over(l)
        .over(mu);
    for d in params.denominators(ell, m) {
        g = g.over(d);
    }
    Ok(g
        .scale(sign_pow(m) * PI * PI)
        .pow(2.0, 2.0 - 2.0 * l - 2.0 * mu - 2.0 * nu)
        .value())
}

/// `int int (s - x t)_+^{2c-1} (1-s^2)^{a-1} (1-t^2)^{b-1} ds dt` in closed form.
pub fn base_integral_stz(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.5) {
        return Err(Error::domain(format!("need a, b > 0 and c > 1/2 (got a = {a}, b = {b}, c = {c})")));
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("need -1 <= x <= 1 (got {x})")));
    }
    let f = hyp2f1_value(0.5 - c, 1.0 - a - c, b + 0.5, x * x)?;
    Ok(GammaProduct::new()
        .times(a)?
        .times(b)?
        .times(c)?
        .over(a + c)
        .over(b + 0.5)
        .scale(0.5 * PI.sqrt() * f)
        .value())
}

fn even_half(ell: usize, m: usize) -> Result<usize> {
    if (ell + m) % 2 == 1 {
        Err(Error::domain(format!("l + m must be even (got l = {ell}, m = {m})")))
    } else {
        Ok((ell + m) / 2)
    }
}

/// Closed form of the triple integral
/// `int int int |s - t sqrt(y)|^{2 nu} C_l^lambda(s) C_m^mu(t)
/// y^{mu + m/2} (1-y)^b (1-s^2)^{lambda-1/2} (1-t^2)^{mu-1/2} dy ds dt`.
pub fn triple_integral_cc(lambda: f64, mu: f64, nu: f64, b: f64, ell: usize, m: usize) -> Result<f64> {
    let half = even_half(ell, m)?;
    check_b_domain(lambda, mu, nu, 0.0)?;
    if !(b > -1.0) {
        return Err(Error::domain(format!("need b > -1 (got {b})")));
    }
    let (lf, mf) = (ell as f64, m as f64);
    let diff = (m as i64 - ell as i64) / 2;
    let c = PI.sqrt() * if diff % 2 == 0 { 1.0 } else { -1.0 };
    let poch = pochhammer(2.0 * lambda, ell as u32) * pochhammer(2.0 * mu, m as u32) * pochhammer(-nu, half as u32);
    Ok(GammaProduct::new()
        .times(lambda + 0.5)?
        .times(mu + 0.5)?
        .times(nu + 0.5)?
        .times(lambda + mu + 2.0 * nu + b + 2.0)?
        .times(b + 1.0)?
        .over(lf + 1.0)
        .over(mf + 1.0)
        .over(lambda + mu + nu + b + 0.5 * (lf + mf) + 2.0)
        .over(lambda + nu + 0.5 * (lf - mf) + 1.0)
        .over(mu + nu + b - 0.5 * (lf - mf) + 2.0)
        .scale(c * poch)
        .value())
}

/// `int_0^1 x^{2 mu + m + 1} (1-x^2)^beta B_{l,m}(x) dx` in closed form.
pub fn weighted_b_moment(lambda: f64, mu: f64, nu: f64, beta_: f64, ell: usize, m: usize) -> Result<f64> {
    check_b_domain(lambda, mu, nu, 0.0)?;
    if !(beta_ > -1.0) {
        return Err(Error::domain(format!("need beta > -1 (got {beta_})")));
    }
    let (lf, mf) = (ell as f64, m as f64);
    Ok(GammaProduct::new()
        .times(2.0 * nu + 1.0)?
        .times(beta_ + 1.0)?
        .times(lambda + mu + 2.0 * nu + beta_ + 2.0)?
        .over(nu - 0.5 * (lf + mf) + 1.0)
        .over(lambda + nu + 0.5 * (lf - mf) + 1.0)
        .over(mu + nu + beta_ + 0.5 * (mf - lf) + 2.0)
        .over(lambda + mu + nu + beta_ + 0.5 * (mf + lf) + 2.0)
        .scale(sign_pow(m) * PI * PI)
        .pow(2.0, -2.0 * nu - 2.0)
        .value())
}

/// Partial sum of the cosine expansion of
/// `|cos phi + cos psi|^rho sgn^gamma(cos phi + cos psi)` over
/// `|l|, |m| <= K` with `l = m + gamma (mod 2)`.
pub fn cosine_expansion_eval(rho: f64, gamma: u8, phi: f64, psi: f64, k: usize) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!("need rho > 0 (got {rho})")));
    }
    if gamma > 1 {
        return Err(Error::domain(format!("gamma must be 0 or 1 (got {gamma})")));
    }
    let k = k as i64;
    let lead = GammaProduct::new().times(rho + 1.0)?.times(rho + 1.0)?.pow(2.0, -rho);
    let mut total = 0.0;
    for ell in -k..=k {
        let mut row = 0.0;
        for m in -k..=k {
            if (ell - m - gamma as i64).rem_euclid(2) != 0 {
                continue;
            }
            let mut g = lead;
            for d in [1.0, -1.0] {
                for e in [1.0, -1.0] {
                    g = g.over(1.0 + 0.5 * (rho + d * ell as f64 + e * m as f64));
                }
            }
            row += g.value() * (m as f64 * psi).cos();
        }
        total += row * (ell as f64 * phi).cos();
    }
    Ok(total)
}

/// `int int |s - x t|^{2 nu} e^{-s^2-t^2} H_l(s) H_m(t) ds dt` in closed form.
pub fn hermite_integral(nu: f64, ell: usize, m: usize, x: f64) -> Result<f64> {
    let half = even_half(ell, m)?;
    if !(nu > 0.0) {
        return Err(Error::domain(format!("need nu > 0 (got {nu})")));
    }
    if !x.is_finite() {
        return Err(Error::domain("x must be finite"));
    }
    let sign = if (ell as i64 - m as i64).div_euclid(2) % 2 == 0 { 1.0 } else { -1.0 };
    let lead = pochhammer(-nu, half as u32) * sign * 2f64.powi((ell + m) as i32) * PI.sqrt();
    let g = GammaProduct::new().times(0.5 + nu)?.value();
    Ok(lead * g * (x * x + 1.0).powf(nu - half as f64) * x.powi(m as i32))
}

/// Named closed forms that specialize the `(l, m, x) = (0, 0, 1)` case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Identity {
    /// `int int (1-s^2)^{lambda-1/2} (1-t^2)^{mu-1/2} |s-t|^{2 nu}`.
    Lm0 { lambda: f64, mu: f64, nu: f64 },
    /// [`Identity::Lm0`] at `mu = lambda`, in Selberg product form.
    Selberg2 { lambda: f64, nu: f64 },
    /// Two triangle integrals on `[0,1]^2` with kernel exponent `-lambda-mu`.
    Warnaar { lambda: f64, mu: f64 },
    /// `int int (1-s^2)^{lambda-1/2} (t-s)_+^{2 nu}`.
    TarasovVarchenko { lambda: f64, nu: f64 },
    /// Finite part of `int int (1-s^2)^{lambda-1/2} (1-t^2)^{mu-1/2} |s-t|^{-2}`.
    DotsenkoFateev { lambda: f64, mu: f64 },
    /// `(1/2pi) int int e^{-(s^2+t^2)/2} |s-t|^{2 nu}`.
    Mehta2 { nu: f64 },
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::Lm0 { .. } => "lm0",
            Identity::Selberg2 { .. } => "selberg2",
            Identity::Warnaar { .. } => "warnaar",
            Identity::TarasovVarchenko { .. } => "tarasov_varchenko",
            Identity::DotsenkoFateev { .. } => "dotsenko_fateev",
            Identity::Mehta2 { .. } => "mehta2",
        }
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(msg()))
    }
}

/// Right-hand side of a named identity.
pub fn identity_rhs(id: Identity) -> Result<f64> {
    match id {
        Identity::Lm0 { lambda, mu, nu } => {
            check_b_domain(lambda, mu, nu, 0.0)?;
            Ok(GammaProduct::new()
                .times(lambda + 0.5)?
                .times(mu + 0.5)?
                .times(nu + 0.5)?
                .times(lambda + mu + 2.0 * nu + 1.0)?
                .over(lambda + nu + 1.0)
                .over(mu + nu + 1.0)
                .over(lambda + mu + nu + 1.0)
                .scale(PI.sqrt())
                .value())
        }
        Identity::Selberg2 { lambda, nu } => {
            require(lambda > -0.5 && nu > 0.0, || format!("need lambda > -1/2, nu > 0 (got {lambda}, {nu})"))?;
            Ok(GammaProduct::new()
                .times(lambda + 0.5)?
                .times(lambda + 0.5)?
                .times(lambda + nu + 0.5)?
                .times(lambda + nu + 0.5)?
                .times(1.0 + 2.0 * nu)?
                .over(2.0 * lambda + 1.0 + nu)
                .over(2.0 * lambda + 2.0 * nu + 1.0)
                .over(1.0 + nu)
                .pow(2.0, 4.0 * lambda + 2.0 * nu)
                .value())
        }
        Identity::Warnaar { lambda, mu } => {
            require(lambda > -0.5 && mu > -0.5 && lambda + mu < 1.0, || {
                format!("need lambda, mu > -1/2 and lambda + mu < 1 (got {lambda}, {mu})")
            })?;
            require(near_integer(mu - 0.5).is_none(), || format!("mu = {mu} makes cos(pi mu) vanish"))?;
            Ok(GammaProduct::new()
                .times(lambda + 0.5)?
                .times(0.5 - mu)?
                .times(mu + 0.5)?
                .times(mu + 0.5)?
                .over(lambda + 1.0 - mu)
                .over(mu + 1.0 - lambda)
                .over(lambda + mu + 1.0)
                .value())
        }
        Identity::TarasovVarchenko { lambda, nu } => {
            require(lambda > -0.5 && nu > 0.0, || format!("need lambda > -1/2, nu > 0 (got {lambda}, {nu})"))?;
            Ok(GammaProduct::new()
                .times(lambda + 0.5)?
                .times(1.5 + lambda + 2.0 * nu)?
                .over(2.0 + 2.0 * lambda + 2.0 * nu)
                .scale(1.0 / (1.0 + 2.0 * nu))
                .pow(2.0, 2.0 * lambda + 2.0 * nu + 1.0)
                .value())
        }
        Identity::DotsenkoFateev { lambda, mu } => {
            require(lambda > -0.5 && mu > -0.5 && lambda + mu != 1.0, || {
                format!("need lambda, mu > -1/2 and lambda + mu != 1 (got {lambda}, {mu})")
            })?;
            Ok(GammaProduct::new()
                .times(lambda + 0.5)?
                .times(lambda + 0.5)?
                .times(mu + 0.5)?
                .times(mu + 0.5)?
                .over(2.0 * lambda)
                .over(2.0 * mu)
                .scale(1.0 / (1.0 - lambda - mu))
                .pow(2.0, 2.0 * lambda + 2.0 * mu - 1.0)
                .value())
        }
        Identity::Mehta2 { nu } => {
            require(nu > -0.5, || format!("need nu > -1/2 (got {nu})"))?;
            Ok(GammaProduct::new().times(1.0 + 2.0 * nu)?.over(1.0 + nu).value())
        }
    }
}

/// `B(1/2, b) 2F1((1-a)/2, (2-a)/2; b+1/2; x^2)`, the closed form of
/// `int_{-1}^{1} (1 - t x)^{a-1} (1-t^2)^{b-1} dt`.
pub fn euler_integral_rhs(a: f64, b: f64, x: f64) -> Result<f64> {
    require(a > 0.0 && b > 0.0, || format!("need a, b > 0 (got {a}, {b})"))?;
    require(x.abs() <= 1.0, || format!("need |x| <= 1 (got {x})"))?;
    Ok(beta(0.5, b)? * hyp2f1_value(0.5 * (1.0 - a), 0.5 * (2.0 - a), b + 0.5, x * x)?)
}

/// The series `G(a, b, d; zeta) = sum_i (a)_i (1-a)_i / (2^i i! (d)_i)
/// 2F1((1-d-i)/2, (2-d-i)/2; b+1/2; zeta)`, summed term by term.
pub fn g_series(a: f64, b: f64, d: f64, zeta: f64) -> Result<f64> {
    require(zeta.abs() < 1.0, || format!("need |zeta| < 1 (got {zeta})"))?;
    let mut coef = 1.0;
    let mut total = 0.0;
    let mut small = 0;
    for i in 0..crate::specfun::MAX_TERMS {
        let fi = i as f64;
        let term = coef * hyp2f1_value(0.5 * (1.0 - d - fi), 0.5 * (2.0 - d - fi), b + 0.5, zeta)?;
        total += term;
        if term.abs() <= 1e-17 * total.abs() {
            small += 1;
            if small >= 2 {
                return Ok(total);
            }
        } else {
            small = 0;
        }
        coef *= (a + fi) * (1.0 - a + fi) / (2.0 * (fi + 1.0) * (d + fi));
        if coef == 0.0 {
            return Ok(total);
        }
    }
    Err(Error::SeriesCap(crate::specfun::MAX_TERMS))
}

/// Closed form of [`g_series`].
pub fn g_closed(a: f64, b: f64, d: f64, zeta: f64) -> Result<f64> {
    let f = hyp2f1_value(1.0 - 0.5 * (a + d), 0.5 * (1.0 + a - d), b + 0.5, zeta)?;
    Ok(GammaProduct::new()
        .times(d)?
        .over(0.5 * (a + d))
        .over(0.5 * (1.0 - a + d))
        .scale(PI.sqrt() * f)
        .pow(2.0, 1.0 - d)
        .value())
}

/// `N = floor(lambda) + 2`, the derivative order of the Sobolev estimate.
pub fn sobolev_order(lambda: f64) -> usize {
    lambda.floor() as usize + 2
}

/// Smallest `d` with `C_n^lambda(1) <= d ||C_{n-N}^{lambda+N}|| n^{lambda-N}`
/// for `N <= n <= n_max`.
pub fn sobolev_constant(lambda: f64, n_max: usize) -> Result<f64> {
    require(lambda > 0.0, || format!("need lambda > 0 (got {lambda})"))?;
    let n_ord = sobolev_order(lambda);
    let mut d = 0.0f64;
    for n in n_ord..=n_max.max(n_ord) {
        let norm = gegenbauer_norm_sq(lambda + n_ord as f64, n - n_ord).sqrt();
        let ratio = gegenbauer_at_one(lambda, n) / (norm * (n as f64).powf(lambda - n_ord as f64));
        d = d.max(ratio);
    }
    Ok(d)
}

/// `D_lambda` of the sup-norm estimate `||f||_inf <= D (||f||_{L^2_lambda} +
/// ||f^(N)||_{L^2_{lambda+N}})`, with `d` from [`sobolev_constant`] and
/// `sum_{n>=N} n^{lambda-N}` bounded by `N^{lambda-N} + int_N^inf u^{lambda-N} du`.
pub fn sobolev_sup_constant(lambda: f64, n_max: usize) -> Result<f64> {
    let d = sobolev_constant(lambda, n_max)?;
    let n_ord = sobolev_order(lambda);
    let (nf, e) = (n_ord as f64, lambda - n_ord as f64);
    let zeta_tail = nf.powf(e) + nf.powf(e + 1.0) / (-e - 1.0);
    let mut out = d / (2f64.powi(n_ord as i32) * pochhammer(lambda, n_ord as u32)) * zeta_tail;
    for n in 0..n_ord {
        out = out.max(gegenbauer_at_one(lambda, n) / gegenbauer_norm_sq(lambda, n).sqrt());
    }
    Ok(out)
}

/// Bound `d / (2^N (lambda)_N) ||f^(N)||_{L^2_{lambda+N}} n^{lambda-N}` on
/// `|a_n(f)| C_n^lambda(1)`.
pub fn sobolev_coefficient_bound(lambda: f64, d: f64, derivative_norm: f64, n: usize) -> f64 {
    let n_ord = sobolev_order(lambda);
    d / (2f64.powi(n_ord as i32) * pochhammer(lambda, n_ord as u32))
        * derivative_norm
        * (n as f64).powf(lambda - n_ord as f64)
}

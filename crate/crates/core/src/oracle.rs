//! Independent quadrature for weighted integrals with algebraic singularities.
//!
//! Everything is built from one 1D engine: the interval is split at interior
//! singular points, each piece is graded geometrically toward its singular
//! ends, the panel touching a singular end uses a Gauss–Jacobi rule carrying
//! the local power, and all other panels use Gauss–Legendre. 2D and 3D
//! integrals are iterated 1D integrals. Results are refined level by level
//! until two consecutive levels agree.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::orthopoly::{gauss_hermite, gauss_jacobi, gegenbauer, hermite};

/// Default number of refinement levels tried by [`integrate`].
pub const DEFAULT_MAX_LEVEL: usize = 8;

/// Half-width of the truncated real line used for Hermite integrals.
pub const HERMITE_CUTOFF: f64 = 12.0;

/// Inner edge of the excised neighbourhood of the diagonal in the
/// finite-part evaluation of strongly singular kernels.
const FINITE_PART_CUTOFF: f64 = 1e-6;

/// A point where the integrand behaves like `|x - at|^exponent` times a smooth
/// factor. Points outside the interval only attract grading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub at: f64,
    pub exponent: f64,
}

impl SingularPoint {
    pub fn new(at: f64, exponent: f64) -> Self {
        Self { at, exponent }
    }
}

/// Panel rule order, extra grading depth toward singular ends and an
/// optional cap on panel width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub nodes: usize,
    pub grading: usize,
    pub max_width: Option<f64>,
}

impl Resolution {
    /// Resolution used at refinement level `k`.
    pub fn level(k: usize) -> Self {
        Self { nodes: 8 + 4 * k, grading: 4 + 4 * k, max_width: None }
    }

    pub fn with_max_width(mut self, width: f64) -> Self {
        self.max_width = Some(width);
        self
    }
}

/// Nodes and weights of a composite rule on one interval.
#[derive(Debug, Clone, Default)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }

    pub fn apply_par(&self, f: impl Fn(f64) -> f64 + Sync) -> f64 {
        let terms: Vec<f64> =
            self.nodes.par_iter().zip(self.weights.par_iter()).map(|(&x, &w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

/// Pairwise summation; the order depends only on the length of the input.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

type Rule = Rc<(Vec<f64>, Vec<f64>)>;

thread_local! {
    static RULES: RefCell<HashMap<(usize, u64, u64), Rule>> = RefCell::new(HashMap::new());
}

fn cached_jacobi(alpha: f64, beta: f64, order: usize) -> Result<Rule> {
    let key = (order, alpha.to_bits(), beta.to_bits());
    if let Some(rule) = RULES.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(rule);
    }
    let rule = Rc::new(gauss_jacobi(alpha, beta, order)?);
    RULES.with(|c| c.borrow_mut().insert(key, rule.clone()));
    Ok(rule)
}

/// Which end of a panel carries the singular power.
#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn push_panel(
    rule: &mut CompositeRule,
    lo: f64,
    hi: f64,
    order: usize,
    singular: Option<(Side, f64)>,
) -> Result<()> {
    let width = hi - lo;
    if width <= 0.0 {
        return Ok(());
    }
    match singular {
        Some((side, e)) if e != 0.0 => {
            let (alpha, beta) = match side {
                Side::Left => (0.0, e),
                Side::Right => (e, 0.0),
            };
            let jac = cached_jacobi(alpha, beta, order)?;
            let half = 0.5 * width;
            for (&xi, &w) in jac.0.iter().zip(&jac.1) {
                let (x, d) = match side {
                    Side::Left => {
                        let x = lo + half * (1.0 + xi);
                        (x, x - lo)
                    }
                    Side::Right => {
                        let x = hi - half * (1.0 - xi);
                        (x, hi - x)
                    }
                };
                if d <= 0.0 {
                    continue;
                }
                rule.nodes.push(x);
                rule.weights.push(w * half * (half / d).powf(e));
            }
        }
        _ => {
            let gl = cached_jacobi(0.0, 0.0, order)?;
            let half = 0.5 * width;
            let mid = lo + half;
            for (&xi, &w) in gl.0.iter().zip(&gl.1) {
                rule.nodes.push(mid + half * xi);
                rule.weights.push(w * half);
            }
        }
    }
    Ok(())
}

/// Split `[lo, hi]` into panels no wider than `max_width`; the singular end
/// (if any) keeps its Jacobi panel.
fn push_capped(
    rule: &mut CompositeRule,
    lo: f64,
    hi: f64,
    order: usize,
    singular: Option<(Side, f64)>,
    max_width: Option<f64>,
) -> Result<()> {
    let pieces = match max_width {
        Some(w) if hi - lo > w => ((hi - lo) / w).ceil() as usize,
        _ => 1,
    };
    let step = (hi - lo) / pieces as f64;
    for i in 0..pieces {
        let a = lo + step * i as f64;
        let b = if i + 1 == pieces { hi } else { lo + step * (i + 1) as f64 };
        let sing = match singular {
            Some((Side::Left, e)) if i == 0 => Some((Side::Left, e)),
            Some((Side::Right, e)) if i + 1 == pieces => Some((Side::Right, e)),
            _ => None,
        };
        push_panel(rule, a, b, order, sing)?;
    }
    Ok(())
}

/// Geometric panels on `[lo, hi]` refined toward one end.
fn push_graded(
    rule: &mut CompositeRule,
    lo: f64,
    hi: f64,
    toward: Side,
    depth: usize,
    exponent: Option<f64>,
    res: &Resolution,
) -> Result<()> {
    let h = hi - lo;
    let end = match toward {
        Side::Left => lo,
        Side::Right => hi,
    };
    // stop before panels fall below what the end coordinate can resolve
    let floor = (1e-13 * end.abs()).max(1e-280);
    let mut depth = depth.min(1000);
    while depth > 0 && h * 0.5f64.powi(depth as i32) < floor {
        depth -= 1;
    }
    let sing = exponent.map(|e| (toward, e));
    let mut offsets: Vec<f64> = (0..=depth).rev().map(|k| h * 0.5f64.powi(k as i32)).collect();
    offsets.insert(0, 0.0);
    for k in 0..offsets.len() - 1 {
        let (d0, d1) = (offsets[k], offsets[k + 1]);
        let (a, b) = match toward {
            Side::Left => (lo + d0, if k + 2 == offsets.len() { hi } else { lo + d1 }),
            Side::Right => (if k + 2 == offsets.len() { lo } else { hi - d1 }, hi - d0),
        };
        push_capped(rule, a, b, res.nodes, if k == 0 { sing } else { None }, res.max_width)?;
    }
    Ok(())
}

fn depth_toward(end_singular: bool, near: Option<f64>, h: f64, res: &Resolution) -> usize {
    let mut depth = if end_singular { res.grading } else { 0 };
    if let Some(r) = near {
        if r < h {
            depth += (h / r).log2().ceil().max(0.0) as usize;
        }
    }
    depth
}

/// Composite rule for `int_a^b f`, where `f` carries the powers
/// `|x - p.at|^p.exponent` of the listed points.
pub fn composite_rule(a: f64, b: f64, points: &[SingularPoint], res: &Resolution) -> Result<CompositeRule> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::domain(format!("bad integration interval [{a}, {b}]")));
    }
    if res.nodes == 0 {
        return Err(Error::domain("panel rule needs at least one node"));
    }
    let mut rule = CompositeRule::default();
    if a == b {
        return Ok(rule);
    }
    // merge coincident points by adding their exponents
    let mut merged: Vec<SingularPoint> = Vec::new();
    for p in points {
        if !p.at.is_finite() {
            continue;
        }
        match merged.iter_mut().find(|q| q.at == p.at) {
            Some(q) => q.exponent += p.exponent,
            None => merged.push(*p),
        }
    }
    let mut breaks = vec![a];
    let mut interior: Vec<f64> = merged.iter().map(|p| p.at).filter(|&x| x > a && x < b).collect();
    interior.sort_by(f64::total_cmp);
    breaks.extend(interior);
    breaks.push(b);

    let exponent_at = |x: f64| merged.iter().find(|p| p.at == x).map(|p| p.exponent);
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let e_lo = exponent_at(lo);
        let e_hi = exponent_at(hi);
        let near_lo = merged.iter().filter(|p| p.at < lo).map(|p| lo - p.at).reduce(f64::min);
        let near_hi = merged.iter().filter(|p| p.at > hi).map(|p| p.at - hi).reduce(f64::min);
        let h = hi - lo;
        let grade_lo = e_lo.is_some() || near_lo.is_some_and(|r| r < h);
        let grade_hi = e_hi.is_some() || near_hi.is_some_and(|r| r < h);
        match (grade_lo, grade_hi) {
            (true, true) => {
                let mid = lo + 0.5 * h;
                let dl = depth_toward(e_lo.is_some(), near_lo, 0.5 * h, res);
                let dh = depth_toward(e_hi.is_some(), near_hi, 0.5 * h, res);
                push_graded(&mut rule, lo, mid, Side::Left, dl, e_lo, res)?;
                push_graded(&mut rule, mid, hi, Side::Right, dh, e_hi, res)?;
            }
            (true, false) => {
                let d = depth_toward(e_lo.is_some(), near_lo, h, res);
                push_graded(&mut rule, lo, hi, Side::Left, d, e_lo, res)?;
            }
            (false, true) => {
                let d = depth_toward(e_hi.is_some(), near_hi, h, res);
                push_graded(&mut rule, lo, hi, Side::Right, d, e_hi, res)?;
            }
            (false, false) => push_capped(&mut rule, lo, hi, res.nodes, None, res.max_width)?,
        }
    }
    Ok(rule)
}

/// `int_a^b f(x) dx` at a fixed resolution.
pub fn integrate_1d(
    a: f64,
    b: f64,
    points: &[SingularPoint],
    res: &Resolution,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    Ok(composite_rule(a, b, points, res)?.apply(f))
}

/// `int_a^b f` refined until two levels agree to `target * max(1, |value|)`.
pub fn refine_1d(
    a: f64,
    b: f64,
    points: &[SingularPoint],
    target: f64,
    max_level: usize,
    f: impl Fn(f64) -> f64,
) -> Result<QuadResult> {
    refine_levels(target, max_level, |k| {
        let rule = composite_rule(a, b, points, &Resolution::level(k))?;
        Ok((rule.apply(&f), rule.len()))
    })
}

/// Value of an oracle integral with its refinement-difference error estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
}

fn refine_levels(
    target: f64,
    max_level: usize,
    mut level: impl FnMut(usize) -> Result<(f64, usize)>,
) -> Result<QuadResult> {
    if !(target > 0.0) {
        return Err(Error::domain(format!("refinement target must be positive (got {target})")));
    }
    let mut evaluations = 0;
    let mut prev: Option<f64> = None;
    let mut last_diff = f64::INFINITY;
    for k in 0..=max_level {
        let (value, evals) = level(k)?;
        evaluations += evals;
        if !value.is_finite() {
            return Err(Error::Integrability(format!("non-finite quadrature value at level {k}")));
        }
        if let Some(p) = prev {
            last_diff = (value - p).abs();
            if last_diff <= target * value.abs().max(1.0) {
                // rounding floor so a lucky exact agreement does not report zero
                let est_error = last_diff.max(16.0 * f64::EPSILON * value.abs());
                return Ok(QuadResult { value, est_error, evaluations });
            }
        }
        prev = Some(value);
    }
    Err(Error::NonConvergence { levels: max_level + 1, last_diff })
}

/// Kernel applied to `s - x t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Kernel {
    PlusPart,
    MinusPart,
    Abs,
    AbsSgn,
    None,
}

impl Kernel {
    fn eval(self, y: f64, exponent: f64) -> f64 {
        match self {
            Kernel::PlusPart if y > 0.0 => y.powf(exponent),
            Kernel::MinusPart if y < 0.0 => (-y).powf(exponent),
            Kernel::PlusPart | Kernel::MinusPart => 0.0,
            Kernel::Abs => y.abs().powf(exponent),
            Kernel::AbsSgn if y == 0.0 => 0.0,
            Kernel::AbsSgn => y.signum() * y.abs().powf(exponent),
            Kernel::None => 1.0,
        }
    }
}

/// Gegenbauer polynomial factor `C_degree^lambda` on one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyFactor {
    pub lambda: f64,
    pub degree: usize,
}

impl PolyFactor {
    pub fn new(lambda: f64, degree: usize) -> Self {
        Self { lambda, degree }
    }

    fn eval(&self, x: f64) -> f64 {
        gegenbauer(self.lambda, self.degree, x)
    }
}

fn poly(p: &Option<PolyFactor>, x: f64) -> f64 {
    p.as_ref().map_or(1.0, |p| p.eval(x))
}

/// Triangle of the square an integral is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    SBelowT,
    TBelowS,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainRestriction {
    pub region: Triangle,
    pub prefactor: f64,
}

/// Description of one weighted integral over `[-1,1]^d`.
///
/// * 1D: `int kernel(s - x) (1-s^2)^{e_s} P(s) ds`
/// * 2D: `int int kernel(s - x t) (1-s^2)^{e_s} (1-t^2)^{e_t} P(s) Q(t) ds dt`
/// * 3D: the 2D integrand with shear `x sqrt(y)`, integrated against
///   `y^alpha (1-y)^beta dy` on `[0, 1]`.
///
/// `kernel_exponent` is the power `2 nu` of the kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub dimension: usize,
    pub kernel: Kernel,
    pub kernel_exponent: f64,
    pub x_shear: f64,
    pub weight_exponents: Vec<f64>,
    pub polynomial_factors: Vec<Option<PolyFactor>>,
    pub extra_axis: Option<(f64, f64)>,
    pub domain_restriction: Option<DomainRestriction>,
    pub tol: f64,
}

impl QuadratureSpec {
    pub fn one_d(kernel: Kernel, exponent: f64, x: f64, e_s: f64) -> Self {
        Self {
            dimension: 1,
            kernel,
            kernel_exponent: exponent,
            x_shear: x,
            weight_exponents: vec![e_s],
            polynomial_factors: vec![None],
            extra_axis: None,
            domain_restriction: None,
            tol: 1e-10,
        }
    }

    pub fn two_d(kernel: Kernel, exponent: f64, x: f64, e_s: f64, e_t: f64) -> Self {
        Self {
            dimension: 2,
            kernel,
            kernel_exponent: exponent,
            x_shear: x,
            weight_exponents: vec![e_s, e_t],
            polynomial_factors: vec![None, None],
            extra_axis: None,
            domain_restriction: None,
            tol: 1e-8,
        }
    }

    pub fn with_polys(mut self, s: Option<PolyFactor>, t: Option<PolyFactor>) -> Self {
        self.polynomial_factors = if self.dimension == 1 { vec![s] } else { vec![s, t] };
        self
    }

    pub fn with_extra_axis(mut self, alpha: f64, beta: f64) -> Self {
        self.extra_axis = Some((alpha, beta));
        self.dimension = 3;
        self.tol = 1e-6;
        self
    }

    pub fn restricted(mut self, region: Triangle, prefactor: f64) -> Self {
        self.domain_restriction = Some(DomainRestriction { region, prefactor });
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn e_s(&self) -> f64 {
        self.weight_exponents[0]
    }

    fn e_t(&self) -> f64 {
        self.weight_exponents.get(1).copied().unwrap_or(0.0)
    }

    /// Strongly singular diagonal kernel handled by its finite part.
    fn is_finite_part(&self) -> bool {
        self.dimension == 2
            && self.kernel == Kernel::Abs
            && self.kernel_exponent <= -1.0
            && self.x_shear == 1.0
            && self.domain_restriction.is_none()
            && self.polynomial_factors.iter().all(Option::is_none)
    }

    pub fn validate(&self) -> Result<()> {
        let axes = match self.dimension {
            1 => 1,
            2 | 3 => 2,
            d => return Err(Error::domain(format!("dimension must be 1, 2 or 3 (got {d})"))),
        };
        if self.weight_exponents.len() != axes || self.polynomial_factors.len() != axes {
            return Err(Error::domain("weight and polynomial factors must match the dimension"));
        }
        if (self.dimension == 3) != self.extra_axis.is_some() {
            return Err(Error::domain("the extra axis is present exactly for 3D specs"));
        }
        if self.dimension == 1 && self.domain_restriction.is_some() {
            return Err(Error::domain("triangle restrictions need two axes"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain(format!("tolerance must be positive (got {})", self.tol)));
        }
        if !(-1.0..=1.0).contains(&self.x_shear) {
            return Err(Error::domain(format!("shear x must lie in [-1, 1] (got {})", self.x_shear)));
        }
        for &e in &self.weight_exponents {
            if !(e > -1.0) {
                return Err(Error::Integrability(format!("endpoint exponent {e} <= -1")));
            }
        }
        if let Some((a, b)) = self.extra_axis {
            if !(a > -1.0 && b > -1.0) {
                return Err(Error::Integrability(format!("y-weight exponents ({a}, {b}) must exceed -1")));
            }
        }
        for p in self.polynomial_factors.iter().flatten() {
            if !(p.lambda > -0.5) || p.lambda == 0.0 {
                return Err(Error::domain(format!("Gegenbauer parameter {} not admissible", p.lambda)));
            }
        }
        if self.kernel != Kernel::None && !(self.kernel_exponent > -1.0) {
            if !self.is_finite_part() {
                return Err(Error::Integrability(format!(
                    "kernel exponent {} <= -1 is only supported for the plain diagonal kernel",
                    self.kernel_exponent
                )));
            }
            let g = self.kernel_exponent;
            let smooth_order = (self.e_s() + self.e_t() + 1.0).min(2.0);
            if !(g > -3.0) || g == -1.0 || !(g + smooth_order > -1.0) {
                return Err(Error::Integrability(format!(
                    "finite part of |s-t|^{g} needs -3 < exponent, exponent != -1 and \
                     endpoint exponents summing above {}",
                    -2.0 - g
                )));
            }
        }
        Ok(())
    }
}

fn weight(e: f64, x: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        ((1.0 - x) * (1.0 + x)).powf(e)
    }
}

fn eval_1d(spec: &QuadratureSpec, res: &Resolution) -> Result<(f64, usize)> {
    let (e, x, g) = (spec.e_s(), spec.x_shear, spec.kernel_exponent);
    let (mut lo, mut hi) = (-1.0, 1.0);
    match spec.kernel {
        Kernel::PlusPart => lo = x.max(-1.0),
        Kernel::MinusPart => hi = x.min(1.0),
        _ => {}
    }
    if lo >= hi {
        return Ok((0.0, 0));
    }
    let mut pts = vec![SingularPoint::new(-1.0, e), SingularPoint::new(1.0, e)];
    if spec.kernel != Kernel::None {
        pts.push(SingularPoint::new(x, g));
    }
    let p = spec.polynomial_factors[0];
    let rule = composite_rule(lo, hi, &pts, res)?;
    Ok((rule.apply(|s| spec.kernel.eval(s - x, g) * weight(e, s) * poly(&p, s)), rule.len()))
}

/// Inner `s`-integral of a 2D spec at fixed `t` and shear `x`.
fn inner_s(spec: &QuadratureSpec, x: f64, t: f64, res: &Resolution) -> Result<(f64, usize)> {
    let (e, g) = (spec.e_s(), spec.kernel_exponent);
    let c = x * t;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    match spec.kernel {
        Kernel::PlusPart => lo = lo.max(c),
        Kernel::MinusPart => hi = hi.min(c),
        _ => {}
    }
    let mut pts = vec![SingularPoint::new(-1.0, e), SingularPoint::new(1.0, e)];
    if spec.kernel != Kernel::None {
        pts.push(SingularPoint::new(c, g));
    }
    if let Some(r) = spec.domain_restriction {
        match r.region {
            Triangle::SBelowT => hi = hi.min(t),
            Triangle::TBelowS => lo = lo.max(t),
        }
        pts.push(SingularPoint::new(t, 0.0));
    }
    if lo >= hi {
        return Ok((0.0, 0));
    }
    let p = spec.polynomial_factors[0];
    let rule = composite_rule(lo, hi, &pts, res)?;
    Ok((rule.apply(|s| spec.kernel.eval(s - c, g) * weight(e, s) * poly(&p, s)), rule.len()))
}

fn eval_2d(spec: &QuadratureSpec, x: f64, res: &Resolution) -> Result<(f64, usize)> {
    let e = spec.e_t();
    let mut pts = vec![SingularPoint::new(-1.0, e), SingularPoint::new(1.0, e)];
    if spec.kernel != Kernel::None && x != 0.0 {
        // where the diagonal line leaves the square
        pts.push(SingularPoint::new(1.0 / x, 0.0));
        pts.push(SingularPoint::new(-1.0 / x, 0.0));
    }
    if spec.domain_restriction.is_some() && x != 1.0 {
        pts.push(SingularPoint::new(0.0, 0.0));
    }
    let outer = composite_rule(-1.0, 1.0, &pts, res)?;
    let q = spec.polynomial_factors[1];
    let inner: Vec<(f64, usize)> = outer
        .nodes
        .par_iter()
        .map(|&t| inner_s(spec, x, t, res).map(|(v, n)| (v * weight(e, t) * poly(&q, t), n)))
        .collect::<Result<_>>()?;
    let evals = inner.iter().map(|p| p.1).sum();
    let terms: Vec<f64> = inner.iter().zip(&outer.weights).map(|((v, _), w)| v * w).collect();
    let pref = spec.domain_restriction.map_or(1.0, |r| r.prefactor);
    Ok((pref * pairwise_sum(&terms), evals))
}

fn eval_3d(spec: &QuadratureSpec, res: &Resolution) -> Result<(f64, usize)> {
    let (alpha, beta) = spec.extra_axis.expect("validated 3D spec");
    let pts = [SingularPoint::new(0.0, alpha), SingularPoint::new(1.0, beta)];
    let outer = composite_rule(0.0, 1.0, &pts, res)?;
    let x = spec.x_shear;
    let vals: Vec<(f64, usize)> = outer
        .nodes
        .par_iter()
        .map(|&y| {
            eval_2d(spec, x * y.sqrt(), res).map(|(v, n)| (v * y.powf(alpha) * (1.0 - y).powf(beta), n))
        })
        .collect::<Result<_>>()?;
    let evals = vals.iter().map(|p| p.1).sum();
    let terms: Vec<f64> = vals.iter().zip(&outer.weights).map(|((v, _), w)| v * w).collect();
    Ok((pairwise_sum(&terms), evals))
}

/// Distribution of `|s - t|` against the two weights:
/// `E(u) = int w_s(t+u) w_t(t) dt + int w_s(t-u) w_t(t) dt`.
fn diagonal_profile(e_s: f64, e_t: f64, u: f64, res: &Resolution) -> Result<(f64, usize)> {
    if u == 0.0 {
        let pts = [SingularPoint::new(-1.0, e_s + e_t), SingularPoint::new(1.0, e_s + e_t)];
        let rule = composite_rule(-1.0, 1.0, &pts, res)?;
        let v = rule.apply(|t| weight(e_s + e_t, t));
        return Ok((2.0 * v, rule.len()));
    }
    if u >= 2.0 {
        return Ok((0.0, 0));
    }
    // s = t + u: t in [-1, 1-u]
    let c = 1.0 - u;
    let pts = [
        SingularPoint::new(-1.0, e_t),
        SingularPoint::new(c, e_s),
        SingularPoint::new(1.0, e_t),
        SingularPoint::new(-1.0 - u, e_s),
    ];
    let r1 = composite_rule(-1.0, c, &pts, res)?;
    let f1 = r1.apply(|t| ((c - t) * (t + u + 1.0)).powf(e_s) * weight(e_t, t));
    // s = t - u: t in [-1+u, 1]
    let d = -1.0 + u;
    let pts = [
        SingularPoint::new(d, e_s),
        SingularPoint::new(1.0, e_t),
        SingularPoint::new(-1.0, e_t),
        SingularPoint::new(1.0 + u, e_s),
    ];
    let r2 = composite_rule(d, 1.0, &pts, res)?;
    let f2 = r2.apply(|t| ((1.0 + u - t) * (t - d)).powf(e_s) * weight(e_t, t));
    Ok((f1 + f2, r1.len() + r2.len()))
}

/// Finite part of `int int |s-t|^g w_s w_t`, which for `g <= -1` is the
/// analytic continuation in the exponent of the convergent integral.
fn eval_finite_part(spec: &QuadratureSpec, res: &Resolution) -> Result<(f64, usize)> {
    let (e_s, e_t, g) = (spec.e_s(), spec.e_t(), spec.kernel_exponent);
    let (e0, n0) = diagonal_profile(e_s, e_t, 0.0, res)?;
    let u0 = FINITE_PART_CUTOFF;
    let pts = [SingularPoint::new(0.0, 0.0), SingularPoint::new(2.0, e_s + e_t + 1.0)];
    let outer = composite_rule(u0, 2.0, &pts, res)?;
    let vals: Vec<(f64, usize)> = outer
        .nodes
        .par_iter()
        .map(|&u| diagonal_profile(e_s, e_t, u, res).map(|(v, n)| (u.powf(g) * (v - e0), n)))
        .collect::<Result<_>>()?;
    let evals = n0 + vals.iter().map(|p| p.1).sum::<usize>();
    let terms: Vec<f64> = vals.iter().zip(&outer.weights).map(|((v, _), w)| v * w).collect();
    let body = pairwise_sum(&terms);
    // E(u) - E(0) behaves like u^p near 0
    let p = (e_s + e_t + 1.0).min(2.0);
    let (eu0, n1) = diagonal_profile(e_s, e_t, u0, res)?;
    let head = (eu0 - e0) * u0.powf(g + 1.0) / (g + 1.0 + p);
    let pole = e0 * 2f64.powf(g + 1.0) / (g + 1.0);
    Ok((body + head + pole, evals + n1))
}

fn eval_level(spec: &QuadratureSpec, k: usize) -> Result<(f64, usize)> {
    let res = Resolution::level(k);
    match spec.dimension {
        1 => eval_1d(spec, &res),
        2 if spec.is_finite_part() && spec.kernel_exponent <= -1.0 => eval_finite_part(spec, &res),
        2 => eval_2d(spec, spec.x_shear, &res),
        _ => eval_3d(spec, &res),
    }
}

/// Refine `spec` until consecutive levels differ by at most
/// `target * max(1, |value|)`.
pub fn refine_until(spec: &QuadratureSpec, target: f64, max_level: usize) -> Result<QuadResult> {
    spec.validate()?;
    refine_levels(target, max_level, |k| eval_level(spec, k))
}

/// [`refine_until`] with the integral's own tolerance and the default depth.
pub fn integrate(spec: &QuadratureSpec) -> Result<QuadResult> {
    refine_until(spec, spec.tol, DEFAULT_MAX_LEVEL)
}

/// `int int |s - x t|^{2 nu} e^{-s^2-t^2} H_ell(s) H_m(t) ds dt` with a
/// Gauss–Hermite rule in `t` and graded panels around `s = x t` in `s`.
pub fn integrate_hermite_2d(nu: f64, x: f64, ell: usize, m: usize, tol: f64) -> Result<QuadResult> {
    if !(nu > 0.0) {
        return Err(Error::domain(format!("Hermite integral needs nu > 0 (got {nu})")));
    }
    if !x.is_finite() {
        return Err(Error::domain("shear must be finite"));
    }
    let g = 2.0 * nu;
    refine_levels(tol, 4, |k| {
        let order = 128 + 64 * k;
        let (tn, tw) = gauss_hermite(order)?;
        let res = Resolution::level(k).with_max_width(1.0);
        let vals: Vec<(f64, usize)> = tn
            .par_iter()
            .map(|&t| {
                let c = x * t;
                let pts = [SingularPoint::new(c, g)];
                let rule = composite_rule(-HERMITE_CUTOFF, HERMITE_CUTOFF, &pts, &res)?;
                let v = rule.apply(|s| (s - c).abs().powf(g) * (-s * s).exp() * hermite(ell, s));
                Ok((v * hermite(m, t), rule.len()))
            })
            .collect::<Result<_>>()?;
        let evals = vals.iter().map(|p| p.1).sum();
        let terms: Vec<f64> = vals.iter().zip(&tw).map(|((v, _), w)| v * w).collect();
        Ok((pairwise_sum(&terms), evals))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn arcsine_mass() {
        let spec = QuadratureSpec::one_d(Kernel::None, 0.0, 0.0, -0.5).with_tol(1e-13);
        let r = integrate(&spec).unwrap();
        assert!((r.value - PI).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn area_of_square() {
        let spec = QuadratureSpec::two_d(Kernel::None, 0.0, 0.0, 0.0, 0.0);
        let r = integrate(&spec).unwrap();
        assert!((r.value - 4.0).abs() < 1e-13);
    }

    #[test]
    fn plus_part_of_s() {
        let spec = QuadratureSpec::two_d(Kernel::PlusPart, 1.0, 0.0, 0.0, 0.0);
        let r = integrate(&spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_panel_carries_endpoint_power() {
        let pts = [SingularPoint::new(0.0, -0.7)];
        let r = refine_1d(0.0, 1.0, &pts, 1e-13, 4, |x| x.powf(-0.7)).unwrap();
        assert!((r.value - 1.0 / 0.3).abs() < 1e-12);
    }

    #[test]
    fn near_external_point_is_resolved() {
        // int_{-1}^{1} (1.001 - x)^{-1/2} dx
        let c = 1.001;
        let pts = [SingularPoint::new(c, -0.5)];
        let r = refine_1d(-1.0, 1.0, &pts, 1e-12, 6, |x| (c - x).powf(-0.5)).unwrap();
        let exact = 2.0 * ((c + 1.0f64).sqrt() - (c - 1.0f64).sqrt());
        assert!((r.value - exact).abs() < 1e-11, "{} vs {exact}", r.value);
    }

    #[test]
    fn pairwise_sum_small_and_large() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        let xs = vec![0.1; 1000];
        assert!((pairwise_sum(&xs) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_integrable_specs() {
        let spec = QuadratureSpec::two_d(Kernel::PlusPart, -1.5, 0.3, 0.0, 0.0);
        assert!(matches!(integrate(&spec), Err(Error::Integrability(_))));
        let spec = QuadratureSpec::one_d(Kernel::None, 0.0, 0.0, -1.0);
        assert!(matches!(integrate(&spec), Err(Error::Integrability(_))));
        // finite part with too weak endpoint decay
        let spec = QuadratureSpec::two_d(Kernel::Abs, -2.0, 1.0, 0.0, -0.3);
        assert!(matches!(integrate(&spec), Err(Error::Integrability(_))));
    }

    #[test]
    fn non_convergence_is_reported() {
        let spec = QuadratureSpec::two_d(Kernel::Abs, 0.2, 0.7, 0.3, 0.3);
        let err = refine_until(&spec, 1e-300, 1).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { levels: 2, .. }));
    }

    #[test]
    fn hermite_examples() {
        let r = integrate_hermite_2d(1.0, 0.0, 0, 0, 1e-10).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-9);
        let r = integrate_hermite_2d(0.5, 1.0, 0, 0, 1e-10).unwrap();
        assert!((r.value - (2.0 * PI).sqrt()).abs() < 1e-8, "{}", r.value);
        let r = integrate_hermite_2d(0.8, 0.0, 1, 0, 1e-10).unwrap();
        assert!(r.value.abs() < 1e-10);
    }
}

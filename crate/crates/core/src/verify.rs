//! Closed form against oracle, one identity family at a time.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{
    base_integral_stz, cosine_expansion_eval, hermite_integral, identity_rhs, integral_b, integral_b_variant,
    projection_integral, triple_integral_cc, BVariant, ExpansionParams, Identity,
};
use crate::oracle::{
    integrate_hermite_2d, refine_until, Kernel, PolyFactor, QuadResult, QuadratureSpec, Triangle, DEFAULT_MAX_LEVEL,
};
use crate::orthopoly::gegenbauer_at_one;
use crate::specfun::gamma;

pub const DEFAULT_SEED: u64 = 20240401;
pub const DEFAULT_CASES: usize = 5;
pub const TOL_2D: f64 = 1e-7;
pub const TOL_SINGULAR: f64 = 1e-5;

/// Shear values sampled by the main suite.
pub const SHEARS: [f64; 7] = [0.0, 0.3, -0.3, 0.9, -0.9, 1.0, 1.0];

/// Oracle refinement stops at this fraction of the pass tolerance.
const ORACLE_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Main,
    Stz,
    Projection,
    Selberg,
    Warnaar,
    Tv,
    Df,
    Mehta,
    Hermite,
    Cosine,
    Cc,
    All,
}

impl Suite {
    pub const EACH: [Suite; 11] = [
        Suite::Main,
        Suite::Stz,
        Suite::Projection,
        Suite::Selberg,
        Suite::Warnaar,
        Suite::Tv,
        Suite::Df,
        Suite::Mehta,
        Suite::Hermite,
        Suite::Cosine,
        Suite::Cc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::Stz => "stz",
            Suite::Projection => "projection",
            Suite::Selberg => "selberg",
            Suite::Warnaar => "warnaar",
            Suite::Tv => "tv",
            Suite::Df => "df",
            Suite::Mehta => "mehta",
            Suite::Hermite => "hermite",
            Suite::Cosine => "cosine",
            Suite::Cc => "cc",
            Suite::All => "all",
        }
    }

    /// Pass tolerance when none is given.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Df | Suite::Cc | Suite::Cosine => TOL_SINGULAR,
            Suite::Warnaar => 1e-6,
            _ => TOL_2D,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyCase {
    pub identity: String,
    pub params: BTreeMap<String, f64>,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub cases: Vec<VerifyCase>,
    pub seed: u64,
    pub overall_pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Overrides every identity's default tolerance.
    pub tol: Option<f64>,
    pub seed: u64,
    pub cases: usize,
    /// Record wall-clock seconds per case; off keeps reports byte-stable.
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: None, seed: DEFAULT_SEED, cases: DEFAULT_CASES, timing: false }
    }
}

/// One closed-form/oracle comparison before it becomes a [`VerifyCase`].
pub struct Check {
    pub identity: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub closed_form: Result<f64>,
    pub oracle: Result<f64>,
}

impl Check {
    /// Pass iff `|closed - oracle| <= tol (1 + |closed|)`.
    pub fn judge(self, tol: f64, seconds: f64) -> VerifyCase {
        let params = self.params.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let (closed_form, oracle, reason) = match (self.closed_form, self.oracle) {
            (Ok(c), Ok(o)) => (c, o, None),
            (Err(e), Ok(o)) => (f64::NAN, o, Some(format!("closed form: {e}"))),
            (Ok(c), Err(e)) => (c, f64::NAN, Some(format!("oracle: {e}"))),
            (Err(e), Err(f)) => (f64::NAN, f64::NAN, Some(format!("closed form: {e}; oracle: {f}"))),
        };
        let abs_err = (closed_form - oracle).abs();
        let rel_err = if closed_form == 0.0 { abs_err } else { abs_err / closed_form.abs() };
        let pass = reason.is_none() && abs_err <= tol * (1.0 + closed_form.abs());
        VerifyCase {
            identity: self.identity.to_string(),
            params,
            closed_form,
            oracle,
            abs_err,
            rel_err,
            tol,
            pass,
            seconds,
            reason,
        }
    }
}

fn oracle_value(spec: &QuadratureSpec, tol: f64) -> Result<f64> {
    refine_until(spec, tol * ORACLE_MARGIN, DEFAULT_MAX_LEVEL).map(|r: QuadResult| r.value)
}

/// `u_n^lambda` as a multiple of the weighted polynomial `(1-s^2)^{lambda-1/2} C_n^lambda`.
fn u_scale(lambda: f64, n: usize) -> Result<f64> {
    Ok(PI.sqrt() / (gamma(lambda + 0.5)? * gegenbauer_at_one(lambda, n)))
}

fn kernel_of(kind: BVariant) -> Kernel {
    match kind {
        BVariant::PlusPart => Kernel::PlusPart,
        BVariant::MinusPart => Kernel::MinusPart,
        BVariant::Abs => Kernel::Abs,
        BVariant::AbsSgn => Kernel::AbsSgn,
    }
}

/// Sheared integral `B_{l,m}(x)` or one of its sign variants.
#[allow(clippy::too_many_arguments)]
pub fn check_b(kind: BVariant, lambda: f64, mu: f64, nu: f64, ell: usize, m: usize, x: f64, tol: f64) -> Check {
    let spec = QuadratureSpec::two_d(kernel_of(kind), 2.0 * nu, x, lambda - 0.5, mu - 0.5)
        .with_polys(Some(PolyFactor::new(lambda, ell)), Some(PolyFactor::new(mu, m)));
    let oracle = (|| Ok(u_scale(lambda, ell)? * u_scale(mu, m)? * oracle_value(&spec, tol)?))();
    Check {
        identity: match kind {
            BVariant::PlusPart => "integral_b",
            BVariant::MinusPart => "integral_b_minus",
            BVariant::Abs => "integral_b_abs",
            BVariant::AbsSgn => "integral_b_abssgn",
        },
        params: vec![("lambda", lambda), ("mu", mu), ("nu", nu), ("ell", ell as f64), ("m", m as f64), ("x", x)],
        closed_form: integral_b_variant(kind, lambda, mu, nu, ell, m, x),
        oracle,
    }
}

pub fn check_stz(a: f64, b: f64, c: f64, x: f64, tol: f64) -> Check {
    let spec = QuadratureSpec::two_d(Kernel::PlusPart, 2.0 * c - 1.0, x, a - 1.0, b - 1.0);
    Check {
        identity: "base_integral_stz",
        params: vec![("a", a), ("b", b), ("c", c), ("x", x)],
        closed_form: base_integral_stz(a, b, c, x),
        oracle: oracle_value(&spec, tol),
    }
}

pub fn check_projection(p: &ExpansionParams, ell: usize, m: usize, tol: f64) -> Check {
    let kernel = if p.eps == 0 { Kernel::Abs } else { Kernel::AbsSgn };
    let spec = QuadratureSpec::two_d(kernel, 2.0 * p.nu, 1.0, p.lambda - 0.5, p.mu - 0.5)
        .with_polys(Some(PolyFactor::new(p.lambda, ell)), Some(PolyFactor::new(p.mu, m)));
    Check {
        identity: "projection",
        params: vec![
            ("lambda", p.lambda),
            ("mu", p.mu),
            ("nu", p.nu),
            ("eps", p.eps as f64),
            ("ell", ell as f64),
            ("m", m as f64),
        ],
        closed_form: projection_integral(p, ell, m),
        oracle: oracle_value(&spec, tol),
    }
}

pub fn check_selberg(lambda: f64, nu: f64, tol: f64) -> Check {
    let spec = QuadratureSpec::two_d(Kernel::Abs, 2.0 * nu, 1.0, lambda - 0.5, lambda - 0.5);
    Check {
        identity: "selberg2",
        params: vec![("lambda", lambda), ("nu", nu)],
        closed_form: identity_rhs(Identity::Selberg2 { lambda, nu }),
        oracle: oracle_value(&spec, tol),
    }
}

/// Both triangles of the unit square, mapped to `[-1, 1]^2` (the `lambda`
/// weight on the first axis).
pub fn check_warnaar(lambda: f64, mu: f64, tol: f64) -> Check {
    let oracle = (|| {
        let ratio = (PI * lambda).cos() / (PI * mu).cos();
        let base = QuadratureSpec::two_d(Kernel::Abs, -lambda - mu, 1.0, lambda - 0.5, mu - 0.5);
        let upper = oracle_value(&base.clone().restricted(Triangle::TBelowS, 1.0), tol)?;
        let lower = oracle_value(&base.restricted(Triangle::SBelowT, ratio), tol)?;
        Ok(2f64.powf(-lambda - mu) * (upper + lower))
    })();
    Check {
        identity: "warnaar",
        params: vec![("lambda", lambda), ("mu", mu)],
        closed_form: identity_rhs(Identity::Warnaar { lambda, mu }),
        oracle,
    }
}

pub fn check_tv(lambda: f64, nu: f64, tol: f64) -> Check {
    let spec = QuadratureSpec::two_d(Kernel::MinusPart, 2.0 * nu, 1.0, lambda - 0.5, 0.0);
    Check {
        identity: "tarasov_varchenko",
        params: vec![("lambda", lambda), ("nu", nu)],
        closed_form: identity_rhs(Identity::TarasovVarchenko { lambda, nu }),
        oracle: oracle_value(&spec, tol),
    }
}

/// The `|s-t|^{-2}` integral; the oracle takes the finite part, which is the
/// value the closed form continues to.
pub fn check_df(lambda: f64, mu: f64, tol: f64) -> Check {
    let spec = QuadratureSpec::two_d(Kernel::Abs, -2.0, 1.0, lambda - 0.5, mu - 0.5);
    Check {
        identity: "dotsenko_fateev",
        params: vec![("lambda", lambda), ("mu", mu)],
        closed_form: identity_rhs(Identity::DotsenkoFateev { lambda, mu }),
        oracle: oracle_value(&spec, tol),
    }
}

/// Gaussian two-point integral, rescaled onto the `e^{-s^2-t^2}` oracle.
pub fn check_mehta(nu: f64, tol: f64) -> Check {
    let oracle = integrate_hermite_2d(nu, 1.0, 0, 0, tol * ORACLE_MARGIN).map(|r| 2f64.powf(nu) / PI * r.value);
    Check {
        identity: "mehta2",
        params: vec![("nu", nu)],
        closed_form: identity_rhs(Identity::Mehta2 { nu }),
        oracle,
    }
}

pub fn check_hermite(nu: f64, ell: usize, m: usize, x: f64, tol: f64) -> Check {
    Check {
        identity: "hermite_integral",
        params: vec![("nu", nu), ("ell", ell as f64), ("m", m as f64), ("x", x)],
        closed_form: hermite_integral(nu, ell, m, x),
        oracle: integrate_hermite_2d(nu, x, ell, m, tol * ORACLE_MARGIN).map(|r| r.value),
    }
}

/// Worst point of the truncated cosine expansion on an `n x n` grid of
/// `[0, pi]^2`, against the kernel itself.
pub fn check_cosine(rho: f64, gamma_: u8, k: usize, n: usize) -> Check {
    let kernel = |phi: f64, psi: f64| {
        let y = phi.cos() + psi.cos();
        let p = y.abs().powf(rho);
        if gamma_ == 0 {
            p
        } else if y == 0.0 {
            0.0
        } else {
            y.signum() * p
        }
    };
    let step = if n > 1 { PI / (n - 1) as f64 } else { 0.0 };
    let grid: Vec<(f64, f64)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i as f64 * step, j as f64 * step))).collect();
    let evals: Result<Vec<(f64, f64, f64, f64)>> = grid
        .par_iter()
        .map(|&(phi, psi)| Ok((phi, psi, cosine_expansion_eval(rho, gamma_, phi, psi, k)?, kernel(phi, psi))))
        .collect();
    let (closed_form, oracle, worst) = match evals {
        Ok(v) => {
            let w = v
                .into_iter()
                .fold(None::<(f64, f64, f64, f64)>, |acc, e| match acc {
                    Some(a) if (a.2 - a.3).abs() >= (e.2 - e.3).abs() => Some(a),
                    _ => Some(e),
                })
                .expect("grid is nonempty");
            (Ok(w.2), Ok(w.3), (w.0, w.1))
        }
        Err(e) => (Err(e), Err(Error::domain("no grid value")), (f64::NAN, f64::NAN)),
    };
    Check {
        identity: "cosine_expansion",
        params: vec![
            ("rho", rho),
            ("gamma", gamma_ as f64),
            ("k", k as f64),
            ("grid", n as f64),
            ("phi", worst.0),
            ("psi", worst.1),
        ],
        closed_form,
        oracle,
    }
}

pub fn check_cc(lambda: f64, mu: f64, nu: f64, b: f64, ell: usize, m: usize, tol: f64) -> Check {
    let spec = QuadratureSpec::two_d(Kernel::Abs, 2.0 * nu, 1.0, lambda - 0.5, mu - 0.5)
        .with_polys(Some(PolyFactor::new(lambda, ell)), Some(PolyFactor::new(mu, m)))
        .with_extra_axis(mu + 0.5 * m as f64, b);
    Check {
        identity: "triple_integral_cc",
        params: vec![("lambda", lambda), ("mu", mu), ("nu", nu), ("b", b), ("ell", ell as f64), ("m", m as f64)],
        closed_form: triple_integral_cc(lambda, mu, nu, b, ell, m),
        oracle: oracle_value(&spec, tol),
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    // three decimals keep the printed parameters readable
    (rng.gen_range(lo..hi) * 1000.0).round() / 1000.0
}

/// Parameter draws for one identity; drawn up front so the report does not
/// depend on thread scheduling.
fn draw(suite: Suite, rng: &mut ChaCha8Rng, tol: f64) -> Box<dyn Fn() -> Check + Send + Sync> {
    match suite {
        Suite::Main => {
            let (l, mu, nu) = (uniform(rng, 0.2, 3.0), uniform(rng, 0.2, 3.0), uniform(rng, 0.5, 4.0));
            let (ell, m) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
            let x = SHEARS[rng.gen_range(0..SHEARS.len())];
            Box::new(move || check_b(BVariant::PlusPart, l, mu, nu, ell, m, x, tol))
        }
        Suite::Stz => {
            let (a, b, c) = (uniform(rng, 0.5, 3.0), uniform(rng, 0.5, 3.0), uniform(rng, 0.6, 3.0));
            let x = SHEARS[rng.gen_range(0..SHEARS.len())];
            Box::new(move || check_stz(a, b, c, x, tol))
        }
        Suite::Projection => {
            let p = ExpansionParams {
                lambda: uniform(rng, 0.2, 3.0),
                mu: uniform(rng, 0.2, 3.0),
                nu: uniform(rng, 0.5, 4.0),
                eps: rng.gen_range(0..=1),
            };
            let (ell, m) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
            Box::new(move || check_projection(&p, ell, m, tol))
        }
        Suite::Selberg => {
            let (l, nu) = (uniform(rng, 0.2, 3.0), uniform(rng, 0.5, 4.0));
            Box::new(move || check_selberg(l, nu, tol))
        }
        Suite::Warnaar => {
            let l = uniform(rng, 0.05, 0.45);
            let mu = uniform(rng, 0.05, 0.45);
            Box::new(move || check_warnaar(l, mu, tol))
        }
        Suite::Tv => {
            let (l, nu) = (uniform(rng, 0.2, 3.0), uniform(rng, 0.3, 3.0));
            Box::new(move || check_tv(l, nu, tol))
        }
        Suite::Df => {
            let l = uniform(rng, 0.7, 2.5);
            let mu = uniform(rng, (1.2 - l).max(0.3), 2.5);
            Box::new(move || check_df(l, mu, tol))
        }
        Suite::Mehta => {
            let nu = uniform(rng, 0.2, 3.0);
            Box::new(move || check_mehta(nu, tol))
        }
        Suite::Hermite => {
            let nu = uniform(rng, 0.3, 3.0);
            let ell = rng.gen_range(0..=3);
            let m = rng.gen_range(0..=1) * 2 + ell % 2;
            let x = uniform(rng, -1.5, 1.5);
            Box::new(move || check_hermite(nu, ell, m, x, tol))
        }
        Suite::Cosine => {
            let rho = uniform(rng, 6.0, 9.0);
            let g = rng.gen_range(0..=1);
            Box::new(move || check_cosine(rho, g, 40, 9))
        }
        Suite::Cc => {
            let (l, mu, nu) = (uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0));
            let b = uniform(rng, 0.0, 1.0);
            let ell = rng.gen_range(0..=2);
            let m = if ell % 2 == 0 { 0 } else { 1 };
            Box::new(move || check_cc(l, mu, nu, b, ell, m, tol))
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
}

fn cases_for(suite: Suite, requested: usize) -> usize {
    match suite {
        // one draw suffices for a one-parameter Gaussian integral
        Suite::Mehta => 1,
        _ => requested,
    }
}

/// Run one suite (or all of them), cases in parallel, report in draw order.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> VerifyReport {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut jobs = Vec::new();
    for s in suites {
        let tol = opts.tol.unwrap_or_else(|| s.default_tol());
        for _ in 0..cases_for(s, opts.cases) {
            jobs.push((draw(s, &mut rng, tol), tol));
        }
    }
    let cases: Vec<VerifyCase> = jobs
        .par_iter()
        .map(|(job, tol)| {
            let start = Instant::now();
            let check = job();
            let seconds = if opts.timing { start.elapsed().as_secs_f64() } else { 0.0 };
            check.judge(*tol, seconds)
        })
        .collect();
    VerifyReport {
        suite: suite.name().to_string(),
        overall_pass: cases.iter().all(|c| c.pass),
        cases,
        seed: opts.seed,
    }
}

/// Closed form and oracle value of `B_{l,m}(x)`, for callers that want both.
pub fn b_with_oracle(lambda: f64, mu: f64, nu: f64, ell: usize, m: usize, x: f64, tol: f64) -> Result<(f64, f64)> {
    let c = check_b(BVariant::PlusPart, lambda, mu, nu, ell, m, x, tol);
    Ok((integral_b(lambda, mu, nu, ell, m, x)?, c.oracle?))
}

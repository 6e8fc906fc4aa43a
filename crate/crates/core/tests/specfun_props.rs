use dgegen::specfun::{
    gamma, gamma_sign, hyp2f1, hyp2f1_half, hyp2f1_value, log_gamma, pochhammer, rgamma, HypParams, HypStatus,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn rgamma_inverts_gamma() {
    for x in [0.1, 0.5, 1.5, 7.3, -0.5, -4.2] {
        let g = gamma_sign(x) * log_gamma(x).unwrap().exp();
        assert!((rgamma(x) * g - 1.0).abs() < 1e-13, "x = {x}");
    }
    assert_eq!(rgamma(0.0), 0.0);
    assert_eq!(rgamma(-3.0), 0.0);
}

#[test]
fn duplication_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240401);
    for _ in 0..100 {
        let c: f64 = rng.gen_range(0.0..10.0);
        let lhs = gamma(2.0 * c).unwrap();
        let rhs = std::f64::consts::PI.powf(-0.5) * 2f64.powf(2.0 * c - 1.0) * gamma(c).unwrap() * gamma(c + 0.5).unwrap();
        assert!(rel(lhs, rhs) < 1e-12, "c = {c}");
    }
}

#[test]
fn hyp2f1_examples() {
    let r = hyp2f1(HypParams::new(1.0, 1.0, 2.0, 0.5)).unwrap();
    assert!((r.value - 2.0 * 2f64.ln()).abs() < 1e-14);
    assert_eq!(r.status, HypStatus::SeriesConverged);
    let r = hyp2f1(HypParams::new(-1.0, 3.0, 2.0, 1.0)).unwrap();
    assert!((r.value + 0.5).abs() < 1e-15);
    assert_eq!(r.status, HypStatus::Terminated);
    assert_eq!(hyp2f1_value(0.3, -2.7, 1.1, 0.0).unwrap(), 1.0);
    assert!(hyp2f1(HypParams::new(1.0, 1.0, 1.5, 1.0)).is_err());
    assert!(hyp2f1(HypParams::new(0.5, 0.5, -2.0, 0.3)).is_err());
}

#[test]
fn half_argument_examples() {
    assert!((hyp2f1_half(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((hyp2f1_half(2.0, 3.0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
    let direct = hyp2f1_value(0.3, 0.7, 1.7, 0.5).unwrap();
    assert!(rel(hyp2f1_half(0.3, 1.7).unwrap(), direct) < 1e-12);
}

#[test]
fn near_one_matches_series_limit() {
    // z -> 1 through the connection formula, against the Gauss value at z = 1
    let (a, b, c) = (0.4, 0.9, 2.6);
    let at_one = hyp2f1_value(a, b, c, 1.0).unwrap();
    let near = hyp2f1_value(a, b, c, 1.0 - 1e-12).unwrap();
    assert!(rel(near, at_one) < 1e-9);
    // integer c - a - b takes the logarithmic branch
    let v = hyp2f1_value(1.0, 1.0, 3.0, 0.9).unwrap();
    let z = 0.9f64;
    let exact = 2.0 * ((1.0 - z) * (1.0 - z).ln() + z) / (z * z);
    assert!(rel(v, exact) < 1e-12, "{v} vs {exact}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pochhammer_reflection(y in -4.9f64..4.9, i in 0u32..7) {
        let lhs = pochhammer(y, i) * gamma(1.0 - y - i as f64).unwrap_or(f64::NAN);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = sign * gamma(1.0 - y).unwrap_or(f64::NAN);
        prop_assume!(lhs.is_finite() && rhs.is_finite() && rhs.abs() < 1e12);
        prop_assert!(rel(lhs, rhs) < 1e-11, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn pochhammer_doubling(y in -6.0f64..6.0, j in 0u32..6) {
        let lhs = pochhammer(y / 2.0, j) * pochhammer((1.0 + y) / 2.0, j);
        let rhs = 2f64.powi(-2 * j as i32) * pochhammer(y, 2 * j);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1e-3));
    }

    #[test]
    fn pochhammer_exchange(y in -4.0f64..4.0, i in 0u32..6, j in 0u32..5) {
        let lhs = pochhammer(y, i) * pochhammer(1.0 - y, 2 * j);
        let rhs = pochhammer(1.0 - y - i as f64, 2 * j) * pochhammer(y - 2.0 * j as f64, i);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(lhs.abs()).max(1e-3));
    }

    #[test]
    fn quadratic_transformation(a in 0.05f64..4.0, b in 0.05f64..4.0, u in -0.9f64..0.9) {
        let lhs = hyp2f1_value(1.0 - a, b, 2.0 * b, u).unwrap();
        let rhs = (1.0 - u / 2.0).powf(a - 1.0)
            * hyp2f1_value((1.0 - a) / 2.0, (2.0 - a) / 2.0, b + 0.5, (u / (2.0 - u)).powi(2)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-3), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn half_argument_summation(a in -3.0f64..3.0, c in 0.3f64..5.0) {
        let closed = hyp2f1_half(a, c).unwrap();
        let direct = hyp2f1_value(a, 1.0 - a, c, 0.5).unwrap();
        prop_assert!((closed - direct).abs() <= 1e-11 * closed.abs().max(1e-3));
    }

    #[test]
    fn pfaff_consistency(a in -2.0f64..2.0, b in -2.0f64..2.0, c in 0.5f64..4.0, z in -0.95f64..-0.5) {
        // 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
        let lhs = hyp2f1_value(a, b, c, z).unwrap();
        let rhs = (1.0 - z).powf(-a) * hyp2f1_value(a, c - b, c, z / (z - 1.0)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1e-2));
    }
}

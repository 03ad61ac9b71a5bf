//! The nodary integral against frozen high-precision values and an
//! independent composite Simpson rule.

#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_PI_2, PI};

use nodoid_core::quadrature::{capital_r, nodary_integral, NodaryIntegral};
use nodoid_core::Tolerance;
use proptest::prelude::*;

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

fn integrand(beta: f64) -> impl Fn(f64) -> f64 {
    move |s: f64| {
        let q = s.sin() * s.sin();
        q / (beta + q).sqrt()
    }
}

/// Simpson on `[0, t]`, split at π/2 so both pieces are smooth.
fn simpson_f(t: f64, beta: f64, n: usize) -> f64 {
    let f = integrand(beta);
    if t <= FRAC_PI_2 {
        simpson(&f, 0.0, t, n)
    } else {
        simpson(&f, 0.0, FRAC_PI_2, n) + simpson(&f, FRAC_PI_2, t, n)
    }
}

// 30-digit reference values.
const F_PI_BETA_4: f64 = 0.721_517_327_875_805_611_679_555;
const R_H1: [(f64, f64); 9] = [
    (4.0, 0.360_758_663_937_902_805_84),
    (1.0, 0.599_070_117_367_796_1),
    (0.5, 0.716_311_938_700_089_2),
    (0.25, 0.812_865_335_803_209_2),
    (0.1, 0.900_700_841_060_038_4),
    (1e-2, 0.984_104_167_120_543),
    (1e-3, 0.997_830_617_980_668_4),
    (1e-4, 0.999_725_435_974_829_2),
    (1e-6, 0.999_996_102_976_532),
];

#[test]
fn frozen_reference_values() {
    let tol = Tolerance::default();
    let f = nodary_integral(PI, 4.0, &tol).unwrap();
    assert!((f - F_PI_BETA_4).abs() < 1e-13, "F(pi; 4) = {f}");
    for (beta, r) in R_H1 {
        let got = capital_r(1.0, beta, &tol).unwrap();
        assert!(
            (got - r).abs() < 1e-12,
            "R(1, {beta}) = {got}, expected {r}"
        );
    }
}

#[test]
fn simpson_cross_check_fine_grid() {
    let tol = Tolerance::default();
    for beta in [4.0, 1.0, 0.5, 0.1] {
        for t in [0.3, 1.0, FRAC_PI_2, 2.5, PI] {
            let reference = simpson_f(t, beta, 1 << 20);
            let got = nodary_integral(t, beta, &tol).unwrap();
            assert!(
                (got - reference).abs() < 1e-12,
                "beta={beta} t={t}: {got} vs {reference}"
            );
        }
    }
}

/// For large β the integrand expands as sin²/√β · Σ binom(-1/2, k) (sin²/β)^k,
/// and ∫₀^π sin^{2m} = π (2m-1)!!/(2m)!!.
#[test]
fn large_beta_binomial_series() {
    let tol = Tolerance::default();
    for beta in [50.0f64, 200.0] {
        let mut coeff = 1.0;
        let mut wallis = PI / 2.0; // ∫₀^π sin²
        let mut m = 1.0;
        let mut sum = 0.0;
        for k in 0..4 {
            sum += coeff * wallis / beta.powi(k);
            coeff *= -(0.5 + k as f64) / (k as f64 + 1.0);
            m += 1.0;
            wallis *= (2.0 * m - 1.0) / (2.0 * m);
        }
        let series = sum / beta.sqrt();
        let got = nodary_integral(PI, beta, &tol).unwrap();
        // truncation after four terms is O(β^{-9/2})
        assert!(
            (got - series).abs() < 5.0 * beta.powf(-4.5),
            "beta={beta}: {got} vs {series}"
        );
    }
}

#[test]
fn monotone_in_beta_and_limits() {
    let tol = Tolerance::default();
    let betas: Vec<f64> = (0..40).map(|i| 10f64.powf(1.0 - 0.2 * i as f64)).collect();
    let values: Vec<f64> = betas
        .iter()
        .map(|&b| nodary_integral(PI, b, &tol).unwrap())
        .collect();
    for w in values.windows(2) {
        assert!(w[1] > w[0], "F(pi) must grow as beta shrinks");
    }
    for (&b, &v) in betas.iter().zip(&values) {
        assert!(v < 2.0);
        // √β·F(π) stays below π/2 and approaches it for large β
        assert!(b.sqrt() * v < FRAC_PI_2);
    }
    assert!(2.0 - values.last().unwrap() < 1e-5);
    assert!(FRAC_PI_2 - 10f64.sqrt() * values[0] < 0.06);
}

#[test]
fn r_below_inverse_h() {
    let tol = Tolerance::default();
    for h in [0.25, 0.5, 1.0, 2.0, 7.0] {
        for i in 1..=100 {
            let beta = 0.1 * i as f64;
            let r = capital_r(h, beta, &tol).unwrap();
            assert!(r > 0.0 && r < 1.0 / h, "h={h} beta={beta} R={r}");
        }
    }
}

#[test]
fn cumulative_matches_pointwise() {
    let tol = Tolerance::default();
    let n = NodaryIntegral::new(0.01).unwrap();
    let ts: Vec<f64> = (0..=64).map(|i| PI * i as f64 / 64.0).collect();
    let cum = n.cumulative(&ts, &tol).unwrap();
    for (&t, &c) in ts.iter().zip(&cum) {
        assert!((c - n.value(t, &tol).unwrap()).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn random_pairs_agree_with_simpson(t in 0.01f64..PI, beta in 0.01f64..10.0) {
        let tol = Tolerance::default();
        let reference = simpson_f(t, beta, 1 << 16);
        let got = nodary_integral(t, beta, &tol).unwrap();
        prop_assert!((got - reference).abs() <= 10.0 * tol.abs_tol, "{} vs {}", got, reference);
    }

    #[test]
    fn additive_over_intervals(a in 0.0f64..PI, b in 0.0f64..PI, beta in 1e-4f64..4.0) {
        let tol = Tolerance::default();
        let n = NodaryIntegral::new(beta).unwrap();
        let (a, b) = (a.min(b), a.max(b));
        let lhs = n.value(b, &tol).unwrap() - n.value(a, &tol).unwrap();
        let rhs = n.between(a, b, &tol).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }
}

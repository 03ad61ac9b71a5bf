//! End-to-end certificates for the small-volume construction and the
//! curvature-norm comparison with the ball.

use std::f64::consts::PI;

use nodoid_core::certify::{
    self, asymptotics_sweep, certify_corollary, certify_theorem, default_schedule,
    geometric_schedule, measure, select_h, select_h_lower, CertifyError, TheoremOptions, CERT_TOL,
    MAJORANT_TOL,
};
use nodoid_core::measures::ball_reference;
use nodoid_core::{Exponent, Tolerance};
use proptest::prelude::*;

const EIGHT_PI: f64 = 8.0 * PI;

#[test]
fn theorem_certificates() {
    let opts = TheoremOptions::default();
    for eps in [1.0, 0.1, 0.01] {
        let c = certify_theorem(eps, &opts).unwrap();
        assert!(c.passed, "eps={eps}: {:?}", c.stop_reason);
        assert!(c.sup_abs_h <= 1.0 + CERT_TOL);
        assert!((c.area - EIGHT_PI).abs() <= eps);
        assert!(c.volume <= eps);
        assert!(c.beta_in_proof_regime);
        assert!(c.stop_reason.is_none());
        let first = c.trajectory.first().unwrap();
        let last = c.trajectory.last().unwrap();
        assert!(last.volume < first.volume);
        assert_eq!(c.iterations, c.trajectory.len());
    }
}

#[test]
fn large_epsilon_passes_early() {
    let c = certify_theorem(10.0, &TheoremOptions::default()).unwrap();
    assert!(c.passed && c.iterations <= 2, "{} iterations", c.iterations);
    // oracle: direct measurement at the first β
    let p = nodoid_core::ProfileParams::new(select_h(10.0).unwrap(), 0.5).unwrap();
    let m = measure(&p, &Tolerance::default()).unwrap();
    assert_eq!(m, c.trajectory[0]);
}

#[test]
fn verdict_stable_under_tighter_tolerance() {
    let c = certify_theorem(0.1, &TheoremOptions::default()).unwrap();
    let p = c.params.unwrap();
    let tight = Tolerance::default().scaled(0.1);
    let q = nodoid_core::ProfileParams::with_tolerance(p.h(), p.beta(), tight).unwrap();
    let m = measure(&q, &tight).unwrap();
    assert!(m.sup_abs_h <= 1.0 + CERT_TOL);
    assert!((m.area - EIGHT_PI).abs() <= 0.1);
    assert!(m.volume <= 0.1);
    assert!((m.area - c.area).abs() < 1e-9 && (m.volume - c.volume).abs() < 1e-12);
}

#[test]
fn certificates_are_reproducible() {
    let opts = TheoremOptions::default();
    let a = certify_theorem(0.1, &opts).unwrap();
    let b = certify_theorem(0.1, &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.area.to_bits(), b.area.to_bits());
    let ca = certify_corollary(Exponent::Finite(3.0), &default_schedule(), &opts).unwrap();
    let cb = certify_corollary(Exponent::Finite(3.0), &default_schedule(), &opts).unwrap();
    assert_eq!(ca, cb);
}

#[test]
fn failing_certificate_carries_trajectory() {
    let opts = TheoremOptions {
        max_iters: 3,
        ..TheoremOptions::default()
    };
    let c = certify_theorem(0.01, &opts).unwrap();
    assert!(!c.passed);
    assert_eq!(c.trajectory.len(), 3);
    assert!(c.stop_reason.is_some());
}

#[test]
fn selection_rule() {
    for eps in [0.01, 0.1, 1.0, 10.0] {
        let h = select_h(eps).unwrap();
        let lo = select_h_lower(eps);
        assert!(lo < h && h < 1.0);
        assert!((h - lo.sqrt()).abs() < 1e-15);
        assert!(EIGHT_PI / (h * h) - EIGHT_PI < eps);
    }
    assert!(select_h_lower(1e12) < 1e-5);
    assert!(matches!(
        select_h(0.0),
        Err(CertifyError::InvalidEpsilon(_))
    ));
    assert!(matches!(
        select_h(-1.0),
        Err(CertifyError::InvalidEpsilon(_))
    ));
}

#[test]
fn corollary_beats_ball() {
    let opts = TheoremOptions::default();
    for p in [
        Exponent::Finite(3.0),
        Exponent::Finite(2.5),
        Exponent::Finite(10.0),
        Exponent::Infinity,
    ] {
        let c = certify_corollary(p, &default_schedule(), &opts).unwrap();
        assert!(c.passed, "p={p}");
        assert!(c.lhs < c.rhs && c.margin > 0.0);
        assert_eq!(c.rhs, ball_reference(p));
        assert!(c.majorant_ok);
        assert!(c.measured <= c.hoelder_bound + MAJORANT_TOL);
        assert!(c.hoelder_bound <= c.majorant + MAJORANT_TOL);
    }
}

/// For p = ∞ the unit-volume norm is sup|H|·V^{1/3}, which falls along
/// the schedule.
#[test]
fn sup_norm_decreases_along_schedule() {
    let opts = TheoremOptions::default();
    let mut prev = f64::INFINITY;
    for eps in geometric_schedule(1.0, 0.3, 6) {
        let th = certify_theorem(eps, &opts).unwrap();
        let lhs = th.sup_abs_h * th.volume.cbrt();
        assert!(lhs < prev, "eps={eps}");
        assert!(lhs <= eps.cbrt() + MAJORANT_TOL);
        prev = lhs;
    }
}

#[test]
fn exponent_two_refused() {
    let opts = TheoremOptions::default();
    for sched in [
        default_schedule(),
        vec![0.5],
        geometric_schedule(1e-2, 0.1, 3),
    ] {
        for p in [2.0, 1.5, 1.0] {
            let r = certify_corollary(Exponent::Finite(p), &sched, &opts);
            assert!(matches!(r, Err(CertifyError::ExponentTooSmall(_))), "p={p}");
        }
    }
    assert!(matches!(
        certify_corollary(Exponent::Finite(3.0), &[0.1, 0.2], &opts),
        Err(CertifyError::InvalidSchedule)
    ));
}

#[test]
fn limits_along_sweep() {
    let betas: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
    let rep = asymptotics_sweep(1.0, &betas, &Tolerance::default()).unwrap();
    assert_eq!(rep.rows.len(), 6);
    assert!(
        rep.trends.r_increasing && rep.trends.volume_decreasing && rep.trends.area_gap_decreasing
    );
    let last = rep.rows.last().unwrap();
    assert!((last.r - 1.0).abs() <= 1e-2);
    assert!((last.area - EIGHT_PI).abs() <= 5e-2);
    assert!(last.volume <= 5e-2);
    for row in &rep.rows {
        // H on the nodoid is a difference of two terms of size 4h/β
        let floor = 4.0 * f64::EPSILON * 4.0 / row.beta;
        assert!(
            row.sup_h >= 0.999_999 && row.sup_h <= 1.0 + floor.max(CERT_TOL),
            "beta={}: {}",
            row.beta,
            row.sup_h
        );
        assert!(row.inf_h >= -1.0 / row.r - 1e-9);
    }
    let o = rep.orders;
    assert!(o.r.unwrap() > 0.5 && o.volume.unwrap() > 0.5 && o.area.unwrap() > 0.2);
    assert!(matches!(
        asymptotics_sweep(1.0, &[1e-2, 1e-1], &Tolerance::default()),
        Err(CertifyError::InvalidBetas)
    ));
}

#[test]
fn slope_fit() {
    let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 * i as f64 - 1.0)).collect();
    assert!((certify::loglog_slope(&pts).unwrap() - 3.0).abs() < 1e-14);
    assert!(certify::loglog_slope(&pts[..1]).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn every_epsilon_certifies(eps in 1e-2f64..20.0) {
        let c = certify_theorem(eps, &TheoremOptions::default()).unwrap();
        prop_assert!(c.passed);
        prop_assert!(c.volume <= eps && (c.area - EIGHT_PI).abs() <= eps);
    }
}

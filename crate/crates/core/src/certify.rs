//! Parameter selection, certificates for the bounded-curvature /
//! small-volume statement and for the `L^p` comparison with the ball, and
//! `β → 0` sweeps.
//!
//! Every certificate records the tolerances it was produced with and the
//! full trajectory of measured values, so a failing run can be diagnosed
//! from its JSON alone.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curvature::{self, CurvatureError};
use crate::measures::{self, ball_reference, dilate_norm, Exponent, MeasureError};
use crate::profile::{build_closed_profile, ProfileError, ProfileParams};
use crate::quadrature::Tolerance;

/// Slack allowed on `sup |H| ≤ 1`.
pub const CERT_TOL: f64 = 1e-9;
/// Slack allowed on the majorant chain of the `L^p` comparison.
pub const MAJORANT_TOL: f64 = 1e-6;

const EIGHT_PI: f64 = 8.0 * PI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("beta shrink factor must lie in (0, 1), got {0}")]
    InvalidShrink(f64),
    #[error("starting beta must be positive, got {0}")]
    InvalidBeta(f64),
    #[error("p = {0} is not certifiable: for p <= 2 the curvature norm of the ball is not beaten (at p = 2 it is the dilation-invariant Willmore energy, minimal on balls)")]
    ExponentTooSmall(f64),
    #[error("schedule must be nonempty, positive and strictly decreasing")]
    InvalidSchedule,
    #[error("betas must be nonempty, positive and strictly decreasing")]
    InvalidBetas,
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

/// Geometric mean of `√(8π / (ε + 8π))` and `1`: strictly inside the
/// admissible interval for `h`, so `8π/h² < 8π + ε`.
pub fn select_h(epsilon: f64) -> Result<f64, CertifyError> {
    check_epsilon(epsilon)?;
    Ok(select_h_lower(epsilon).sqrt())
}

/// Lower end `√(8π / (ε + 8π))` of the admissible interval for `h`.
pub fn select_h_lower(epsilon: f64) -> f64 {
    (EIGHT_PI / (epsilon + EIGHT_PI)).sqrt()
}

fn check_epsilon(epsilon: f64) -> Result<(), CertifyError> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(CertifyError::InvalidEpsilon(epsilon))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremOptions {
    pub beta_start: f64,
    pub beta_shrink: f64,
    pub max_iters: usize,
    pub tol: Tolerance,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions {
            beta_start: 0.5,
            beta_shrink: 0.25,
            max_iters: 60,
            tol: Tolerance::default(),
        }
    }
}

/// Measured quantities at one `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measurement {
    pub beta: f64,
    pub r: f64,
    pub sup_abs_h: f64,
    pub area: f64,
    pub volume: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremClauses {
    pub curvature_bounded: bool,
    pub area_near_8pi: bool,
    pub volume_small: bool,
}

impl TheoremClauses {
    pub fn all(&self) -> bool {
        self.curvature_bounded && self.area_near_8pi && self.volume_small
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCertificate {
    pub epsilon: f64,
    pub h: f64,
    /// Parameters of the first passing instance, or of the last one tried.
    pub params: Option<ProfileParams>,
    pub beta_in_proof_regime: bool,
    pub sup_abs_h: f64,
    pub area: f64,
    pub volume: f64,
    pub clauses: TheoremClauses,
    pub passed: bool,
    pub iterations: usize,
    pub cert_tol: f64,
    pub options: TheoremOptions,
    pub trajectory: Vec<Measurement>,
    /// Why the search stopped early, if it did.
    pub stop_reason: Option<String>,
}

fn judge(epsilon: f64, m: &Measurement) -> TheoremClauses {
    TheoremClauses {
        curvature_bounded: m.sup_abs_h <= 1.0 + CERT_TOL,
        area_near_8pi: (m.area - EIGHT_PI).abs() <= epsilon,
        volume_small: m.volume <= epsilon,
    }
}

/// `sup |H|`, `S` and `V` of Ω_{h,β}.
pub fn measure(params: &ProfileParams, tol: &Tolerance) -> Result<Measurement, CertifyError> {
    let profile = build_closed_profile(params)?;
    let sup_abs_h = curvature::sup_abs_h(&profile)?;
    Ok(Measurement {
        beta: params.beta(),
        r: params.r(),
        sup_abs_h,
        area: measures::surface_area(&profile, tol)?,
        volume: measures::volume(&profile, tol)?,
    })
}

/// Fixes `h = select_h(ε)` and shrinks `β` geometrically from
/// `beta_start` until `sup|H| ≤ 1`, `|S − 8π| ≤ ε` and `V ≤ ε` all hold.
///
/// Running out of iterations (or hitting a `β` too small to resolve in
/// double precision) is not an error: the returned certificate is marked
/// failed and carries the trajectory.
pub fn certify_theorem(
    epsilon: f64,
    opts: &TheoremOptions,
) -> Result<TheoremCertificate, CertifyError> {
    check_epsilon(epsilon)?;
    if !(opts.beta_shrink > 0.0 && opts.beta_shrink < 1.0) {
        return Err(CertifyError::InvalidShrink(opts.beta_shrink));
    }
    if !(opts.beta_start > 0.0 && opts.beta_start.is_finite()) {
        return Err(CertifyError::InvalidBeta(opts.beta_start));
    }
    opts.tol.validate().map_err(ProfileError::from)?;
    let h = select_h(epsilon)?;

    let mut trajectory = Vec::new();
    let mut last: Option<(ProfileParams, Measurement, TheoremClauses)> = None;
    let mut stop_reason = None;
    let mut beta = opts.beta_start;
    for _ in 0..opts.max_iters {
        let params = match ProfileParams::with_tolerance(h, beta, opts.tol) {
            Ok(p) => p,
            Err(e @ ProfileError::Degenerate(_)) => {
                stop_reason = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e.into()),
        };
        let m = measure(&params, &opts.tol)?;
        let clauses = judge(epsilon, &m);
        trajectory.push(m);
        last = Some((params, m, clauses));
        if clauses.all() {
            break;
        }
        beta *= opts.beta_shrink;
    }
    if stop_reason.is_none() && !last.as_ref().is_some_and(|(_, _, c)| c.all()) {
        stop_reason = Some(format!(
            "no passing beta within {} iterations",
            opts.max_iters
        ));
    }

    let iterations = trajectory.len();
    let (params, m, clauses) = match last {
        Some((p, m, c)) => (Some(p), m, c),
        None => (
            None,
            Measurement {
                beta: f64::NAN,
                r: f64::NAN,
                sup_abs_h: f64::NAN,
                area: f64::NAN,
                volume: f64::NAN,
            },
            TheoremClauses {
                curvature_bounded: false,
                area_near_8pi: false,
                volume_small: false,
            },
        ),
    };
    Ok(TheoremCertificate {
        epsilon,
        h,
        beta_in_proof_regime: params.is_some_and(|p| p.in_proof_regime()),
        params,
        sup_abs_h: m.sup_abs_h,
        area: m.area,
        volume: m.volume,
        passed: clauses.all(),
        clauses,
        iterations,
        cert_tol: CERT_TOL,
        options: *opts,
        trajectory,
        stop_reason,
    })
}

/// Geometric `ε` schedule `start, start·ratio, …` with `len` entries.
pub fn geometric_schedule(start: f64, ratio: f64, len: usize) -> Vec<f64> {
    std::iter::successors(Some(start), |e| Some(e * ratio))
        .take(len)
        .collect()
}

/// Default `ε` schedule for the `L^p` comparison: ratio 0.3 from 1.
pub fn default_schedule() -> Vec<f64> {
    geometric_schedule(1.0, 0.3, 12)
}

/// One visited `ε` in a corollary search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollaryStep {
    pub epsilon: f64,
    pub theorem_passed: bool,
    /// `‖H‖_p` of the unit-volume rescaling; NaN when the theorem step failed.
    pub lhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryCertificate {
    pub p: Exponent,
    pub epsilon: f64,
    pub params: Option<ProfileParams>,
    /// `‖H‖_{L^p}` after rescaling to unit volume.
    pub lhs: f64,
    /// The unit-volume ball's `‖H‖_{L^p}`.
    pub rhs: f64,
    pub margin: f64,
    /// `lhs^p` (finite p) or `lhs` (p = ∞).
    pub measured: f64,
    /// `sup|H|^p · S` of the rescaled solid (finite p) or its `sup|H|`.
    pub hoelder_bound: f64,
    /// `(8π + ε) ε^{(p−2)/3}` (finite p) or `ε^{1/3}` (p = ∞).
    pub majorant: f64,
    pub majorant_ok: bool,
    pub passed: bool,
    pub theorem: Option<TheoremCertificate>,
    pub steps: Vec<CorollaryStep>,
}

struct Comparison {
    lhs: f64,
    measured: f64,
    hoelder_bound: f64,
    majorant: f64,
}

fn compare(
    p: Exponent,
    epsilon: f64,
    th: &TheoremCertificate,
    tol: &Tolerance,
) -> Result<Comparison, CertifyError> {
    let params = th.params.expect("passing certificate has params");
    let profile = build_closed_profile(&params)?;
    let lambda = th.volume.powf(-1.0 / 3.0);
    let sup_scaled = th.sup_abs_h / lambda;
    let area_scaled = th.area * lambda * lambda;
    Ok(match p {
        Exponent::Finite(q) => {
            let norm = measures::lp_norm_h(&profile, p, tol)?;
            let lhs = dilate_norm(norm, p, lambda);
            Comparison {
                lhs,
                measured: lhs.powf(q),
                hoelder_bound: sup_scaled.powf(q) * area_scaled,
                majorant: (EIGHT_PI + epsilon) * epsilon.powf((q - 2.0) / 3.0),
            }
        }
        Exponent::Infinity => Comparison {
            lhs: sup_scaled,
            measured: sup_scaled,
            hoelder_bound: sup_scaled,
            majorant: epsilon.cbrt(),
        },
    })
}

/// Walks the descending `ε` schedule, certifying each instance and
/// rescaling it to unit volume, and stops at the first whose `‖H‖_p` is
/// strictly below the unit ball's.
pub fn certify_corollary(
    p: Exponent,
    schedule: &[f64],
    opts: &TheoremOptions,
) -> Result<CorollaryCertificate, CertifyError> {
    if p.value() <= 2.0 {
        return Err(CertifyError::ExponentTooSmall(p.value()));
    }
    if schedule.is_empty()
        || schedule.iter().any(|&e| !(e > 0.0 && e.is_finite()))
        || schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(CertifyError::InvalidSchedule);
    }
    let rhs = ball_reference(p);
    let mut steps = Vec::new();
    let mut last: Option<CorollaryCertificate> = None;
    for &epsilon in schedule {
        let th = certify_theorem(epsilon, opts)?;
        if !th.passed {
            steps.push(CorollaryStep {
                epsilon,
                theorem_passed: false,
                lhs: f64::NAN,
            });
            continue;
        }
        let c = compare(p, epsilon, &th, &opts.tol)?;
        steps.push(CorollaryStep {
            epsilon,
            theorem_passed: true,
            lhs: c.lhs,
        });
        let majorant_ok = c.measured <= c.hoelder_bound + MAJORANT_TOL
            && c.hoelder_bound <= c.majorant + MAJORANT_TOL;
        let passed = c.lhs < rhs && majorant_ok;
        let cert = CorollaryCertificate {
            p,
            epsilon,
            params: th.params,
            lhs: c.lhs,
            rhs,
            margin: rhs - c.lhs,
            measured: c.measured,
            hoelder_bound: c.hoelder_bound,
            majorant: c.majorant,
            majorant_ok,
            passed,
            theorem: Some(th),
            steps: steps.clone(),
        };
        if passed {
            return Ok(cert);
        }
        last = Some(cert);
    }
    Ok(match last {
        Some(mut cert) => {
            cert.steps = steps;
            cert
        }
        None => CorollaryCertificate {
            p,
            epsilon: *schedule.last().expect("nonempty"),
            params: None,
            lhs: f64::NAN,
            rhs,
            margin: f64::NAN,
            measured: f64::NAN,
            hoelder_bound: f64::NAN,
            majorant: f64::NAN,
            majorant_ok: false,
            passed: false,
            theorem: None,
            steps,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub r: f64,
    pub area: f64,
    pub volume: f64,
    pub sup_abs_h: f64,
    pub inf_h: f64,
    /// Largest signed `H`; equals `h`, attained on the nodoid.
    pub sup_h: f64,
}

/// Least-squares slopes of `log |q(β) − q(0)|` against `log β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceOrders {
    pub r: Option<f64>,
    pub area: Option<f64>,
    pub volume: Option<f64>,
    /// Fitted on `h − |inf H|`; the supremum side sits at `h` up to rounding.
    pub inf_h: Option<f64>,
}

/// Observed trends along decreasing β. Reported, not enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepTrends {
    pub r_increasing: bool,
    pub area_gap_decreasing: bool,
    pub volume_decreasing: bool,
    pub sup_abs_h_gap_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub h: f64,
    pub rows: Vec<SweepRow>,
    pub orders: ConvergenceOrders,
    pub trends: SweepTrends,
}

/// One row per `β` (strictly decreasing); rows are computed in parallel and
/// returned in input order.
pub fn asymptotics_sweep(
    h: f64,
    betas: &[f64],
    tol: &Tolerance,
) -> Result<SweepReport, CertifyError> {
    if betas.is_empty()
        || betas.iter().any(|&b| !(b > 0.0 && b.is_finite()))
        || betas.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(CertifyError::InvalidBetas);
    }
    let rows: Vec<SweepRow> = betas
        .par_iter()
        .map(|&beta| -> Result<SweepRow, CertifyError> {
            let params = ProfileParams::with_tolerance(h, beta, *tol)?;
            let profile = build_closed_profile(&params)?;
            let ext = curvature::extremes(profile.meridian(), curvature::SCAN_SAMPLES)?;
            Ok(SweepRow {
                beta,
                r: params.r(),
                area: measures::surface_area(&profile, tol)?,
                volume: measures::volume(&profile, tol)?,
                sup_abs_h: ext.sup_abs,
                inf_h: ext.inf,
                sup_h: ext.sup,
            })
        })
        .collect::<Result<_, _>>()?;

    let area_limit = EIGHT_PI / (h * h);
    let fit = |f: &dyn Fn(&SweepRow) -> f64| -> Option<f64> {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.beta.ln(), f(r).abs().ln()))
            .filter(|(_, y)| y.is_finite())
            .collect();
        loglog_slope(&pts)
    };
    let orders = ConvergenceOrders {
        r: fit(&|r| r.r - 1.0 / h),
        area: fit(&|r| r.area - area_limit),
        volume: fit(&|r| r.volume),
        inf_h: fit(&|r| r.inf_h.abs() - h),
    };
    let decreasing = |f: &dyn Fn(&SweepRow) -> f64| rows.windows(2).all(|w| f(&w[1]) <= f(&w[0]));
    let trends = SweepTrends {
        r_increasing: rows.windows(2).all(|w| w[1].r >= w[0].r),
        area_gap_decreasing: decreasing(&|r| (r.area - area_limit).abs()),
        volume_decreasing: decreasing(&|r| r.volume),
        sup_abs_h_gap_decreasing: decreasing(&|r| (r.sup_abs_h - h).abs()),
    };
    Ok(SweepReport {
        h,
        rows,
        orders,
        trends,
    })
}

/// Least-squares slope through `(x, y)` points; `None` with fewer than two.
pub fn loglog_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_h_inside_interval() {
        for eps in [0.01, 0.1, 1.0, 1e3] {
            let h = select_h(eps).unwrap();
            assert!(h > select_h_lower(eps) && h < 1.0, "eps={eps}");
            assert!(EIGHT_PI * (1.0 / (h * h) - 1.0) < eps);
        }
        assert!(select_h(0.0).is_err());
        assert!(select_h(-1.0).is_err());
        assert!(select_h(f64::NAN).is_err());
    }

    #[test]
    fn lower_endpoint_vanishes_for_large_epsilon() {
        assert!(select_h_lower(1e12) < 1e-5);
    }

    #[test]
    fn slope_of_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.0 * i as f64 + 1.0)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn schedule_shape() {
        let s = default_schedule();
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 0.3).abs() < 1e-16);
        assert!(s.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn rejects_bad_inputs() {
        let o = TheoremOptions::default();
        assert!(matches!(
            certify_theorem(0.0, &o),
            Err(CertifyError::InvalidEpsilon(_))
        ));
        let bad = TheoremOptions {
            beta_shrink: 1.0,
            ..o
        };
        assert!(matches!(
            certify_theorem(0.1, &bad),
            Err(CertifyError::InvalidShrink(_))
        ));
        assert!(matches!(
            certify_corollary(Exponent::Finite(2.0), &[1.0], &o),
            Err(CertifyError::ExponentTooSmall(_))
        ));
        assert!(matches!(
            certify_corollary(Exponent::Finite(3.0), &[0.1, 1.0], &o),
            Err(CertifyError::InvalidSchedule)
        ));
        assert!(matches!(
            asymptotics_sweep(1.0, &[0.01, 0.1], &Tolerance::default()),
            Err(CertifyError::InvalidBetas)
        ));
    }

    #[test]
    fn exhausted_iterations_fail_with_trajectory() {
        let o = TheoremOptions {
            max_iters: 2,
            ..TheoremOptions::default()
        };
        let c = certify_theorem(1e-3, &o).unwrap();
        assert!(!c.passed);
        assert_eq!(c.trajectory.len(), 2);
        assert!(c.stop_reason.is_some());
    }
}

//! Mean curvature of the surface swept by rotating a meridian about the
//! y-axis.
//!
//! For an arc traversed with sign `σ` (so that `σ (y', −x') / |γ'|` is the
//! outward normal), the principal curvatures are
//!
//! ```text
//! k_meridian = σ (x' y'' − y' x'') / |γ'|³
//! k_parallel = σ y' / (x |γ'|)
//! ```
//!
//! and `H = (k_meridian + k_parallel) / 2`. A round sphere of radius `r` has
//! `H = 1/r` in this convention.

use serde::Serialize;
use thiserror::Error;

use crate::profile::{ArcId, ArcShape, ClosedProfile, Meridian, OrientedArc};

/// Bracket scan size used for extremum searches.
pub const SCAN_SAMPLES: usize = 1024;
/// Golden-section stopping width in the arc parameter.
pub const GOLDEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("{arc} lies on the rotation axis; no curvature is defined there")]
    OnAxis { arc: ArcId },
    #[error("point t = {t} of {arc} touches the axis")]
    AxisPoint { arc: ArcId, t: f64 },
    #[error("parameter t = {t} outside the range of {arc}")]
    OutOfRange { arc: ArcId, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub arc: ArcId,
    pub t: f64,
    pub x: f64,
    pub k_meridian: f64,
    pub k_parallel: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

/// Curvature at parameter `t` of an oriented meridian arc.
pub fn curvature_at(oa: &OrientedArc, t: f64) -> Result<CurvatureSample, CurvatureError> {
    let arc = &oa.arc;
    if arc.id == ArcId::AxisSegment {
        return Err(CurvatureError::OnAxis { arc: arc.id });
    }
    let (lo, hi) = arc.t_range;
    if !(lo..=hi).contains(&t) {
        return Err(CurvatureError::OutOfRange { arc: arc.id, t });
    }
    let sigma = oa.direction.sign();
    let x = arc.x(t);
    let d1 = arc.d1(t);
    let d2 = arc.d2(t);
    let speed = d1.norm();
    let k_meridian = sigma * d1.cross(d2) / (speed * speed * speed);
    let k_parallel = if x > 0.0 {
        sigma * d1.y / (x * speed)
    } else if matches!(arc.shape, ArcShape::Segment { .. }) && d1.y == 0.0 {
        // flat disk: the parallel curvature vanishes identically, so its
        // limit at the centre is zero too
        0.0
    } else {
        return Err(CurvatureError::AxisPoint { arc: arc.id, t });
    };
    Ok(CurvatureSample {
        arc: arc.id,
        t,
        x,
        k_meridian,
        k_parallel,
        h: 0.5 * (k_meridian + k_parallel),
    })
}

/// Curvature of Σ_{h,β} on arc `id` at parameter `t`.
pub fn principal_curvatures(
    profile: &ClosedProfile,
    id: ArcId,
    t: f64,
) -> Result<CurvatureSample, CurvatureError> {
    curvature_at(profile.arc(id), t)
}

/// Mean curvature only; `None` where it is undefined.
pub(crate) fn mean_curvature(oa: &OrientedArc, t: f64) -> Option<f64> {
    curvature_at(oa, t).ok().map(|s| s.h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcCurvatureSummary {
    pub arc: ArcId,
    pub h_min: f64,
    pub h_max: f64,
    pub argmin_t: f64,
    pub argmax_t: f64,
}

/// Golden-section maximisation of `f` on `[a, b]`; returns `(t, f(t))`.
/// Only interior points are evaluated.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if !(c > a && d < b && c < d) {
            break;
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Extremes of `H` over the open arc: a scan of `n_samples` interior points
/// (raised to 64 if smaller) followed by golden-section refinement around
/// the best sample.
pub fn arc_summary(
    oa: &OrientedArc,
    n_samples: usize,
) -> Result<ArcCurvatureSummary, CurvatureError> {
    let n = n_samples.max(64);
    let (lo, hi) = oa.arc.t_range;
    let step = (hi - lo) / n as f64;
    let ts: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * step).collect();
    let hs: Vec<f64> = ts
        .iter()
        .map(|&t| curvature_at(oa, t).map(|s| s.h))
        .collect::<Result<_, _>>()?;

    let h_at = |t: f64| mean_curvature(oa, t).unwrap_or(f64::NAN);
    let refine = |idx: usize, sign: f64| -> (f64, f64) {
        let a = if idx == 0 { lo } else { ts[idx - 1] };
        let b = if idx + 1 == n { hi } else { ts[idx + 1] };
        let (t, v) = golden_max(|t| sign * h_at(t), a, b, GOLDEN_TOL);
        let sampled = sign * hs[idx];
        if v.is_finite() && v >= sampled {
            (t, sign * v)
        } else {
            (ts[idx], hs[idx])
        }
    };

    let imax = argbest(&hs, |a, b| a > b);
    let imin = argbest(&hs, |a, b| a < b);
    let (argmax_t, h_max) = refine(imax, 1.0);
    let (argmin_t, h_min) = refine(imin, -1.0);
    Ok(ArcCurvatureSummary {
        arc: oa.arc.id,
        h_min,
        h_max,
        argmin_t,
        argmax_t,
    })
}

fn argbest(v: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if better(x, v[best]) {
            best = i;
        }
    }
    best
}

/// Per-arc summaries and global extremes of `H` over the surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureExtremes {
    pub per_arc: Vec<ArcCurvatureSummary>,
    /// Essential supremum of `|H|`.
    pub sup_abs: f64,
    pub sup: f64,
    pub inf: f64,
}

pub fn extremes(
    meridian: &Meridian,
    n_samples: usize,
) -> Result<CurvatureExtremes, CurvatureError> {
    let per_arc: Vec<ArcCurvatureSummary> = meridian
        .material_arcs()
        .map(|oa| arc_summary(oa, n_samples))
        .collect::<Result<_, _>>()?;
    let sup = per_arc
        .iter()
        .map(|s| s.h_max)
        .fold(f64::NEG_INFINITY, f64::max);
    let inf = per_arc
        .iter()
        .map(|s| s.h_min)
        .fold(f64::INFINITY, f64::min);
    Ok(CurvatureExtremes {
        sup_abs: sup.abs().max(inf.abs()),
        sup,
        inf,
        per_arc,
    })
}

/// `‖H‖_∞` over Σ_{h,β}; junctions are ignored (measure zero).
pub fn sup_abs_h(profile: &ClosedProfile) -> Result<f64, CurvatureError> {
    Ok(extremes(profile.meridian(), SCAN_SAMPLES)?.sup_abs)
}

/// `n` evenly spaced interior samples per material arc, arcs in traversal
/// order. Junction parameters are never sampled.
pub fn sample_curvature(
    meridian: &Meridian,
    n: usize,
) -> Result<Vec<CurvatureSample>, CurvatureError> {
    let n = n.max(1);
    let mut out = Vec::with_capacity(5 * n);
    for oa in meridian.material_arcs() {
        let (lo, hi) = oa.arc.t_range;
        for i in 0..n {
            let t = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            out.push(curvature_at(oa, t)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{build_closed_profile, ProfileParams};

    fn profile(h: f64, beta: f64) -> ClosedProfile {
        build_closed_profile(&ProfileParams::new(h, beta).unwrap()).unwrap()
    }

    #[test]
    fn nodoid_is_cmc() {
        let p = profile(1.0, 0.3);
        for i in 1..50 {
            let t = std::f64::consts::PI * i as f64 / 50.0;
            let s = principal_curvatures(&p, ArcId::Gamma1, t).unwrap();
            assert!((s.h - 1.0).abs() < 1e-12, "t={t} H={}", s.h);
        }
    }

    #[test]
    fn gamma2_peak_value() {
        let p = profile(1.0, 4.0);
        let s = principal_curvatures(&p, ArcId::Gamma2, 0.0).unwrap();
        assert!((s.h - 0.75).abs() < 1e-15, "{}", s.h);
    }

    #[test]
    fn disks_are_flat() {
        let p = profile(1.0, 0.5);
        for id in [ArcId::Gamma4, ArcId::Gamma5] {
            for &t in &[0.0, 0.25, 0.5, 1.0] {
                let s = principal_curvatures(&p, id, t).unwrap();
                assert_eq!((s.k_meridian, s.k_parallel, s.h), (0.0, 0.0, 0.0));
            }
        }
    }

    #[test]
    fn axis_is_rejected() {
        let p = profile(1.0, 0.5);
        assert!(matches!(
            principal_curvatures(&p, ArcId::AxisSegment, 0.5),
            Err(CurvatureError::OnAxis { .. })
        ));
        assert!(matches!(
            principal_curvatures(&p, ArcId::Gamma1, 4.0),
            Err(CurvatureError::OutOfRange { .. })
        ));
    }

    #[test]
    fn sphere_curvature() {
        let m = Meridian::sphere(2.0).unwrap();
        for s in sample_curvature(&m, 17).unwrap() {
            assert!((s.h - 0.5).abs() < 1e-14);
            assert!((s.k_meridian - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (t, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-12);
        assert!((t - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gamma2_summary_closed_form() {
        let p = profile(1.0, 0.25);
        let s = arc_summary(p.arc(ArcId::Gamma2), 1024).unwrap();
        assert!((s.h_max - 0.9).abs() < 1e-12, "{}", s.h_max);
        assert!(s.argmax_t.abs() < 1e-5);
    }

    #[test]
    fn gamma3_bound_attained_at_midpoint() {
        let p = profile(1.0, 0.5);
        let (h, r, sb) = (1.0, p.params().r(), 0.5f64.sqrt());
        let bound = -(1.0 / r) * (1.0 - sb / (4.0 * h * r + 2.0 * sb));
        let s = arc_summary(p.arc(ArcId::Gamma3), 1024).unwrap();
        assert!(s.h_max < 0.0);
        assert!(s.h_min >= bound - 1e-12);
        assert!((s.h_min - bound).abs() < 1e-12);
    }
}

//! Area, volume and curvature norms of a solid of revolution, all reduced to
//! line integrals over its meridian:
//!
//! ```text
//! S = 2π Σ ∫ x |γ'| dt
//! V = π ∮ x² y' dt
//! ‖H‖_p^p = 2π Σ ∫ |H|^p x |γ'| dt
//! ```
//!
//! The axis segment sweeps no surface and contributes nothing to `V`
//! because `x ≡ 0` there.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curvature::{self, curvature_at, CurvatureError};
use crate::profile::{ClosedProfile, Meridian, OrientedArc};
use crate::quadrature::{integrate_with_breaks, QuadratureError, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error("exponent p must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("volume must be positive to rescale, got {0}")]
    NonPositiveVolume(f64),
}

impl AsRef<Meridian> for Meridian {
    fn as_ref(&self) -> &Meridian {
        self
    }
}

impl AsRef<Meridian> for ClosedProfile {
    fn as_ref(&self) -> &Meridian {
        self.meridian()
    }
}

/// An `L^p` exponent, `p ∈ (0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self, MeasureError> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p > 0.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(MeasureError::InvalidExponent(p))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| format!("not a number: {s}"))?;
                Exponent::new(p).map_err(|e| e.to_string())
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

fn arc_integral<F: Fn(f64) -> f64>(
    oa: &OrientedArc,
    f: F,
    tol: &Tolerance,
) -> Result<f64, QuadratureError> {
    let (lo, hi) = oa.arc.t_range;
    integrate_with_breaks(f, lo, hi, &oa.arc.breakpoints(), tol)
}

/// `π ∮ x² y' dt` along the traversal; positive for a positively oriented loop.
pub fn signed_volume(meridian: &Meridian, tol: &Tolerance) -> Result<f64, QuadratureError> {
    let mut total = 0.0;
    for oa in meridian.arcs() {
        let arc = &oa.arc;
        let part = arc_integral(
            oa,
            |t| {
                let x = arc.x(t);
                x * x * arc.d1(t).y
            },
            tol,
        )?;
        total += oa.direction.sign() * part;
    }
    Ok(PI * total)
}

pub fn volume<M: AsRef<Meridian>>(m: &M, tol: &Tolerance) -> Result<f64, MeasureError> {
    Ok(signed_volume(m.as_ref(), tol)?.abs())
}

pub fn surface_area<M: AsRef<Meridian>>(m: &M, tol: &Tolerance) -> Result<f64, MeasureError> {
    let mut total = 0.0;
    for oa in m.as_ref().material_arcs() {
        let arc = &oa.arc;
        total += arc_integral(oa, |t| arc.x(t) * arc.speed(t), tol)?;
    }
    Ok(2.0 * PI * total)
}

/// `∫ |H|^p dS` for finite `p > 0`.
pub fn lp_integral<M: AsRef<Meridian>>(
    m: &M,
    p: f64,
    tol: &Tolerance,
) -> Result<f64, MeasureError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(MeasureError::InvalidExponent(p));
    }
    let mut total = 0.0;
    for oa in m.as_ref().material_arcs() {
        let arc = &oa.arc;
        let f = |t: f64| match curvature_at(oa, t) {
            Ok(s) => s.h.abs().powf(p) * s.x * arc.speed(t),
            Err(_) => f64::NAN,
        };
        total += arc_integral(oa, f, tol)?;
    }
    Ok(2.0 * PI * total)
}

/// `‖H‖_{L^p}` over the surface; `p = ∞` is the essential supremum.
pub fn lp_norm_h<M: AsRef<Meridian>>(
    m: &M,
    p: Exponent,
    tol: &Tolerance,
) -> Result<f64, MeasureError> {
    match p {
        Exponent::Finite(p) => Ok(lp_integral(m, p, tol)?.powf(1.0 / p)),
        Exponent::Infinity => Ok(curvature::extremes(m.as_ref(), curvature::SCAN_SAMPLES)?.sup_abs),
    }
}

/// Willmore energy `∫ H² dS`.
pub fn willmore<M: AsRef<Meridian>>(m: &M, tol: &Tolerance) -> Result<f64, MeasureError> {
    lp_integral(m, 2.0, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpNorm {
    pub p: Exponent,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureSet {
    pub area: f64,
    pub volume: f64,
    pub lp_norms: Vec<LpNorm>,
    pub willmore: f64,
}

impl MeasureSet {
    pub fn norm(&self, p: Exponent) -> Option<f64> {
        self.lp_norms.iter().find(|n| n.p == p).map(|n| n.value)
    }
}

/// Area, volume, Willmore energy and the requested norms. The `∞` norm is
/// always included.
pub fn measure_set<M: AsRef<Meridian>>(
    m: &M,
    exponents: &[Exponent],
    tol: &Tolerance,
) -> Result<MeasureSet, MeasureError> {
    let mut lp_norms = Vec::with_capacity(exponents.len() + 1);
    for &p in exponents {
        if lp_norms.iter().any(|n: &LpNorm| n.p == p) {
            continue;
        }
        lp_norms.push(LpNorm {
            p,
            value: lp_norm_h(m, p, tol)?,
        });
    }
    if !lp_norms.iter().any(|n| n.p == Exponent::Infinity) {
        lp_norms.push(LpNorm {
            p: Exponent::Infinity,
            value: lp_norm_h(m, Exponent::Infinity, tol)?,
        });
    }
    Ok(MeasureSet {
        area: surface_area(m, tol)?,
        volume: volume(m, tol)?,
        lp_norms,
        willmore: willmore(m, tol)?,
    })
}

/// Applies the exact dilation laws for `λ = V^{-1/3}`.
pub fn rescale_to_unit_volume(m: &MeasureSet) -> Result<MeasureSet, MeasureError> {
    if !(m.volume > 0.0) {
        return Err(MeasureError::NonPositiveVolume(m.volume));
    }
    let lambda = m.volume.powf(-1.0 / 3.0);
    Ok(MeasureSet {
        area: m.area * lambda * lambda,
        volume: 1.0,
        lp_norms: m
            .lp_norms
            .iter()
            .map(|n| LpNorm {
                p: n.p,
                value: dilate_norm(n.value, n.p, lambda),
            })
            .collect(),
        willmore: m.willmore,
    })
}

/// `‖H‖_p` after dilating the surface by `λ`.
pub fn dilate_norm(value: f64, p: Exponent, lambda: f64) -> f64 {
    match p {
        Exponent::Finite(p) => value * lambda.powf(2.0 / p - 1.0),
        Exponent::Infinity => value / lambda,
    }
}

/// `‖H‖_p` of the unit-volume ball.
pub fn ball_reference(p: Exponent) -> f64 {
    let k = 4.0 * PI / 3.0;
    match p {
        Exponent::Finite(p) => (4.0 * PI * k.powf((p - 2.0) / 3.0)).powf(1.0 / p),
        Exponent::Infinity => k.cbrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("3".parse::<Exponent>().unwrap(), Exponent::Finite(3.0));
        assert!("0".parse::<Exponent>().is_err());
        assert!("-2".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
        assert!(Exponent::new(f64::NAN).is_err());
    }

    #[test]
    fn ball_reference_values() {
        assert_eq!(ball_reference(Exponent::Finite(2.0)), (4.0 * PI).sqrt());
        assert!((ball_reference(Exponent::Infinity) - (4.0 * PI / 3.0).cbrt()).abs() < 1e-15);
        let p3 = (4.0 * PI * (4.0 * PI / 3.0).cbrt()).cbrt();
        assert!((ball_reference(Exponent::Finite(3.0)) - p3).abs() < 1e-14);
    }

    #[test]
    fn sphere_norms() {
        let r = 1.7;
        let m = Meridian::sphere(r).unwrap();
        let tol = Tolerance::default();
        for p in [0.5, 1.0, 2.0, 3.0, 7.5] {
            let got = lp_norm_h(&m, Exponent::Finite(p), &tol).unwrap();
            let want = (4.0 * PI * r * r).powf(1.0 / p) / r;
            assert!((got - want).abs() < 1e-10 * want, "p={p}: {got} vs {want}");
        }
        let sup = lp_norm_h(&m, Exponent::Infinity, &tol).unwrap();
        assert!((sup - 1.0 / r).abs() < 1e-14);
    }

    #[test]
    fn invalid_exponent() {
        let m = Meridian::sphere(1.0).unwrap();
        assert!(matches!(
            lp_integral(&m, 0.0, &Tolerance::default()),
            Err(MeasureError::InvalidExponent(_))
        ));
    }

    #[test]
    fn rescaled_sphere_is_unit_ball() {
        let m = Meridian::sphere(0.8).unwrap();
        let tol = Tolerance::default();
        let ps = [
            Exponent::Finite(2.0),
            Exponent::Finite(3.0),
            Exponent::Infinity,
        ];
        let set = measure_set(&m, &ps, &tol).unwrap();
        let unit = rescale_to_unit_volume(&set).unwrap();
        assert_eq!(unit.volume, 1.0);
        for p in ps {
            let want = ball_reference(p);
            let got = unit.norm(p).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "{p}: {got} vs {want}");
        }
        assert_eq!(unit.willmore, set.willmore);
    }

    #[test]
    fn rescale_rejects_empty_volume() {
        let set = MeasureSet {
            area: 1.0,
            volume: 0.0,
            lp_norms: vec![],
            willmore: 0.0,
        };
        assert!(rescale_to_unit_volume(&set).is_err());
    }
}

//! One-dimensional adaptive quadrature and the nodary integral
//!
//! `F(t; β) = ∫₀ᵗ sin²s / √(β + sin²s) ds`
//!
//! that fixes the ordinate of the nodary arc and the radius `R(h, β)`.
//!
//! The integrator is a globally adaptive 7/15-point Gauss–Kronrod scheme: the
//! interval with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. Callers may pass breakpoints (kinks,
//! extrema) which seed the initial partition.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Accuracy request for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 1_000_000,
        }
    }
}

impl Tolerance {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_subdivisions: usize,
    ) -> Result<Self, QuadratureError> {
        let tol = Tolerance {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        tol.validate()?;
        Ok(tol)
    }

    /// Same absolute and relative target, default subdivision budget.
    pub fn uniform(tol: f64) -> Result<Self, QuadratureError> {
        Self::new(tol, tol, Tolerance::default().max_subdivisions)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadratureError::InvalidTolerance(
                "abs_tol must be positive and finite",
            ));
        }
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return Err(QuadratureError::InvalidTolerance(
                "rel_tol must be nonnegative and finite",
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadratureError::InvalidTolerance(
                "max_subdivisions must be at least 1",
            ));
        }
        Ok(())
    }

    /// Tolerance scaled by `factor` in both abs and rel components.
    pub fn scaled(&self, factor: f64) -> Tolerance {
        Tolerance {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },
    #[error("subdivision budget exhausted: estimate {estimate}, error bound {error_bound}")]
    BudgetExhausted { estimate: f64, error_bound: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error, ties broken by position for determinism
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment, QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(QuadratureError::NonFinite { at: center });
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(QuadratureError::NonFinite { at: x1 });
        }
        if !f2.is_finite() {
            return Err(QuadratureError::NonFinite { at: x2 });
        }
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Integrates `f` over `[a, b]` to the requested tolerance.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<f64, QuadratureError> {
    integrate_with_breaks(f, a, b, &[], tol)
}

/// Like [`integrate`], with the initial partition split at every breakpoint
/// strictly inside `(a, b)`. Breakpoints outside the interval are ignored.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: &Tolerance,
) -> Result<f64, QuadratureError> {
    tol.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(0.0);
    }

    let mut nodes = vec![a];
    let mut interior: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    nodes.extend(interior);
    nodes.push(b);

    let mut heap = BinaryHeap::new();
    // segments too narrow to bisect further
    let mut frozen: Vec<Segment> = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in nodes.windows(2) {
        let seg = kronrod15(&f, w[0], w[1])?;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    let mut splits = 0usize;
    while total_err > tol.target(total) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        if splits >= tol.max_subdivisions {
            heap.push(worst);
            break;
        }
        splits += 1;
        let left = kronrod15(&f, worst.a, mid)?;
        let right = kronrod15(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Resum in interval order so the result does not depend on the running
    // sums' rounding history.
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.extend(frozen);
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum();
    if error > tol.target(value) {
        return Err(QuadratureError::BudgetExhausted {
            estimate: value,
            error_bound: error,
        });
    }
    Ok(value)
}

/// `F(t; β)` for a fixed `β ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodaryIntegral {
    beta: f64,
}

impl NodaryIntegral {
    pub fn new(beta: f64) -> Result<Self, QuadratureError> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(QuadratureError::Domain(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        Ok(NodaryIntegral { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The integrand `sin²s / √(β + sin²s)`; at β = 0 this is `|sin s|`.
    pub fn integrand(&self, s: f64) -> f64 {
        let sin = s.sin();
        let sin2 = sin * sin;
        if self.beta == 0.0 {
            sin.abs()
        } else {
            sin2 / (self.beta + sin2).sqrt()
        }
    }

    /// `F(t; β)` for `t ∈ [0, π]`.
    pub fn value(&self, t: f64, tol: &Tolerance) -> Result<f64, QuadratureError> {
        check_nodary_t(t)?;
        self.between(0.0, t, tol)
    }

    /// `∫_{t0}^{t1}` of the integrand, `0 ≤ t0 ≤ t1 ≤ π`, split at π/2.
    pub fn between(&self, t0: f64, t1: f64, tol: &Tolerance) -> Result<f64, QuadratureError> {
        integrate_with_breaks(|s| self.integrand(s), t0, t1, &[FRAC_PI_2], tol)
    }

    /// `F` at every entry of a nondecreasing parameter list, accumulated
    /// piecewise so each quadrature covers only one gap.
    pub fn cumulative(&self, ts: &[f64], tol: &Tolerance) -> Result<Vec<f64>, QuadratureError> {
        let mut out = Vec::with_capacity(ts.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for &t in ts {
            check_nodary_t(t)?;
            if t < prev {
                return Err(QuadratureError::Domain(
                    "parameters must be nondecreasing".into(),
                ));
            }
            acc += self.between(prev, t, tol)?;
            out.push(acc);
            prev = t;
        }
        Ok(out)
    }
}

fn check_nodary_t(t: f64) -> Result<(), QuadratureError> {
    if !(0.0..=PI).contains(&t) {
        return Err(QuadratureError::Domain(format!(
            "t must lie in [0, pi], got {t}"
        )));
    }
    Ok(())
}

/// `F(t; β)` by direct quadrature.
pub fn nodary_integral(t: f64, beta: f64, tol: &Tolerance) -> Result<f64, QuadratureError> {
    NodaryIntegral::new(beta)?.value(t, tol)
}

/// `R(h, β) = F(π; β) / (2h)`.
pub fn capital_r(h: f64, beta: f64, tol: &Tolerance) -> Result<f64, QuadratureError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(QuadratureError::Domain(format!(
            "h must be positive and finite, got {h}"
        )));
    }
    Ok(nodary_integral(PI, beta, tol)? / (2.0 * h))
}

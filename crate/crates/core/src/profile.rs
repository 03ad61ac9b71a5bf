//! The meridian profile Γ_{h,β}: five analytic arcs plus the closing axis
//! segment, chained into a positively oriented simple loop in the half-plane
//! `x ≥ 0`. The surface is obtained by rotating the loop about the y-axis.
//!
//! Arc layout (with `a = √β / (2h)`):
//!
//! | arc   | shape                                     | parameter      |
//! |-------|-------------------------------------------|----------------|
//! | γ1    | nodary, `(a, 0)` to `(a, R − 1/h)`        | `t ∈ [0, π]`   |
//! | γ2    | circle, center `(a, R)`, radius `1/h`     | `t ∈ [−π/2, π/2]` |
//! | γ3    | circle, center `(a, R)`, radius `R`       | `t ∈ [−π/2, π/2]` |
//! | γ4    | segment `(0, R + 1/h)` to `(a, R + 1/h)`  | `t ∈ [0, 1]`   |
//! | γ5    | segment `(0, 2R)` to `(a, 2R)`            | `t ∈ [0, 1]`   |
//! | axis  | segment `(0, R + 1/h)` to `(0, 2R)`       | `t ∈ [0, 1]`   |

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measures;
use crate::quadrature::{capital_r, NodaryIntegral, QuadratureError, Tolerance};

/// Default positional tolerance for junction coincidence.
pub const JUNCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate profile: {0}")]
    Degenerate(String),
    #[error("parameter t = {t} outside the range of {arc}")]
    OutOfRange { arc: ArcId, t: f64 },
    #[error("junction {a} -> {b} is open by {gap:e}")]
    OpenJunction { a: ArcId, b: ArcId, gap: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }
    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

/// Serialized by [`ArcId::label`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcId {
    Gamma1,
    Gamma2,
    Gamma3,
    Gamma4,
    Gamma5,
    #[serde(rename = "axis")]
    AxisSegment,
}

impl ArcId {
    pub const MATERIAL: [ArcId; 5] = [
        ArcId::Gamma1,
        ArcId::Gamma2,
        ArcId::Gamma3,
        ArcId::Gamma4,
        ArcId::Gamma5,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ArcId::Gamma1 => "gamma1",
            ArcId::Gamma2 => "gamma2",
            ArcId::Gamma3 => "gamma3",
            ArcId::Gamma4 => "gamma4",
            ArcId::Gamma5 => "gamma5",
            ArcId::AxisSegment => "axis",
        }
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The pair `(h, β)` with the derived radius `R(h, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    h: f64,
    beta: f64,
    r: f64,
    tol: Tolerance,
}

impl ProfileParams {
    pub fn new(h: f64, beta: f64) -> Result<Self, ProfileError> {
        Self::with_tolerance(h, beta, Tolerance::default())
    }

    pub fn with_tolerance(h: f64, beta: f64, tol: Tolerance) -> Result<Self, ProfileError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(ProfileError::InvalidParams(format!(
                "h must be positive and finite, got {h}"
            )));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(ProfileError::InvalidParams(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        tol.validate()?;
        let r = capital_r(h, beta, &tol)?;
        if !(r < 1.0 / h) {
            return Err(ProfileError::Degenerate(format!(
                "R(h, beta) = {r} is not below 1/h = {}; beta = {beta} is too small to resolve",
                1.0 / h
            )));
        }
        Ok(ProfileParams { h, beta, r, tol })
    }

    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    /// `R(h, β)`.
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }
    /// Abscissa `√β / (2h)` shared by the arc junctions off the axis.
    pub fn offset(&self) -> f64 {
        self.beta.sqrt() / (2.0 * self.h)
    }
    /// Whether β lies in `(0, 1]`, the range used by the limiting argument.
    pub fn in_proof_regime(&self) -> bool {
        self.beta <= 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcShape {
    /// The nodary arc; `f_pi` caches `F(π; β)` so the endpoint matches `R`
    /// bit for bit.
    Nodary {
        h: f64,
        nodary: NodaryIntegral,
        f_pi: f64,
        tol: Tolerance,
    },
    Circle {
        center: Vec2,
        radius: f64,
    },
    Segment {
        from: Vec2,
        to: Vec2,
    },
}

/// One parametric piece of a meridian curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileArc {
    pub id: ArcId,
    pub shape: ArcShape,
    pub t_range: (f64, f64),
}

impl ProfileArc {
    fn check(&self, t: f64) -> Result<(), ProfileError> {
        let (lo, hi) = self.t_range;
        if !(lo..=hi).contains(&t) {
            return Err(ProfileError::OutOfRange { arc: self.id, t });
        }
        Ok(())
    }

    /// Position at `t`. The nodary ordinate needs one quadrature.
    pub fn eval(&self, t: f64) -> Result<Vec2, ProfileError> {
        self.check(t)?;
        Ok(match self.shape {
            ArcShape::Nodary {
                h,
                nodary,
                f_pi,
                tol,
            } => {
                let f = if t == PI {
                    f_pi
                } else {
                    nodary.value(t, &tol)?
                };
                Vec2::new(self.x(t), (t.cos() - 1.0 + f) / (2.0 * h))
            }
            _ => self.eval_closed(t),
        })
    }

    /// Positions at nondecreasing parameters `ts`; the nodary ordinate is
    /// accumulated gap by gap.
    pub fn eval_many(&self, ts: &[f64]) -> Result<Vec<Vec2>, ProfileError> {
        for &t in ts {
            self.check(t)?;
        }
        match self.shape {
            ArcShape::Nodary {
                h,
                nodary,
                f_pi,
                tol,
            } => {
                let fs = nodary.cumulative(ts, &tol)?;
                Ok(ts
                    .iter()
                    .zip(fs)
                    .map(|(&t, f)| {
                        let f = if t == PI { f_pi } else { f };
                        Vec2::new(self.x(t), (t.cos() - 1.0 + f) / (2.0 * h))
                    })
                    .collect())
            }
            _ => Ok(ts.iter().map(|&t| self.eval_closed(t)).collect()),
        }
    }

    fn eval_closed(&self, t: f64) -> Vec2 {
        match self.shape {
            ArcShape::Circle { center, radius } => {
                center + Vec2::new(t.cos(), t.sin()).scale(radius)
            }
            ArcShape::Segment { from, to } => from + (to - from).scale(t),
            ArcShape::Nodary { .. } => unreachable!("nodary ordinate needs quadrature"),
        }
    }

    /// Distance to the rotation axis, closed form on every arc.
    pub fn x(&self, t: f64) -> f64 {
        match self.shape {
            ArcShape::Nodary { h, nodary, .. } => {
                let beta = nodary.beta();
                let s = t.sin().max(0.0);
                let w = (beta + s * s).sqrt();
                // (w - s) without cancellation
                beta / ((w + s) * 2.0 * h)
            }
            _ => self.eval_closed(t).x,
        }
    }

    /// First derivative with respect to `t`.
    pub fn d1(&self, t: f64) -> Vec2 {
        match self.shape {
            ArcShape::Nodary { h, nodary, .. } => {
                let (s, c, g, _) = nodary_terms(nodary.beta(), t);
                Vec2::new(c * g, s * g).scale(0.5 / h)
            }
            ArcShape::Circle { radius, .. } => Vec2::new(-t.sin(), t.cos()).scale(radius),
            ArcShape::Segment { from, to } => to - from,
        }
    }

    /// Second derivative with respect to `t`.
    pub fn d2(&self, t: f64) -> Vec2 {
        match self.shape {
            ArcShape::Nodary { h, nodary, .. } => {
                let (s, c, g, dg) = nodary_terms(nodary.beta(), t);
                Vec2::new(dg * c - g * s, dg * s + g * c).scale(0.5 / h)
            }
            ArcShape::Circle { radius, .. } => Vec2::new(-t.cos(), -t.sin()).scale(radius),
            ArcShape::Segment { .. } => Vec2::default(),
        }
    }

    /// `n + 1` evenly spaced parameters with both endpoints exact.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.t_range;
        (0..=n)
            .map(|i| {
                if i == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / n as f64
                }
            })
            .collect()
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.d1(t).norm()
    }

    /// Interior points where the integrands built from this arc have
    /// extrema or near-kinks; used to seed quadrature partitions.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.shape {
            ArcShape::Nodary { .. } => vec![FRAC_PI_2],
            ArcShape::Circle { .. } => {
                let (lo, hi) = self.t_range;
                [0.0].into_iter().filter(|&b| b > lo && b < hi).collect()
            }
            ArcShape::Segment { .. } => Vec::new(),
        }
    }

    /// Euclidean length, by quadrature of the speed.
    pub fn length(&self, tol: &Tolerance) -> Result<f64, QuadratureError> {
        let (lo, hi) = self.t_range;
        crate::quadrature::integrate_with_breaks(
            |t| self.speed(t),
            lo,
            hi,
            &self.breakpoints(),
            tol,
        )
    }
}

/// `(sin t, cos t, g, g')` with `g = sin t / √(β + sin²t) − 1` computed
/// without cancellation.
fn nodary_terms(beta: f64, t: f64) -> (f64, f64, f64, f64) {
    let s = t.sin().max(0.0);
    let c = t.cos();
    let w = (beta + s * s).sqrt();
    let g = -beta / (w * (w + s));
    let dg = c * beta / (w * w * w);
    (s, c, g, dg)
}

/// Closed form speed of γ1, `(1/(2h)) (1 − sin t / √(β + sin²t))`.
pub fn nodary_speed(h: f64, beta: f64, t: f64) -> f64 {
    let s = t.sin();
    (1.0 - s / (beta + s * s).sqrt()) / (2.0 * h)
}

/// Builds one arc of Γ_{h,β}.
pub fn build_arc(params: &ProfileParams, id: ArcId) -> ProfileArc {
    let h = params.h;
    let r = params.r;
    let a = params.offset();
    let half_turn = (-FRAC_PI_2, FRAC_PI_2);
    let (shape, t_range) = match id {
        ArcId::Gamma1 => {
            let nodary = NodaryIntegral::new(params.beta).expect("validated beta");
            let f_pi = 2.0 * h * r;
            (
                ArcShape::Nodary {
                    h,
                    nodary,
                    f_pi,
                    tol: params.tol,
                },
                (0.0, PI),
            )
        }
        ArcId::Gamma2 => (
            ArcShape::Circle {
                center: Vec2::new(a, r),
                radius: 1.0 / h,
            },
            half_turn,
        ),
        ArcId::Gamma3 => (
            ArcShape::Circle {
                center: Vec2::new(a, r),
                radius: r,
            },
            half_turn,
        ),
        ArcId::Gamma4 => (
            ArcShape::Segment {
                from: Vec2::new(0.0, r + 1.0 / h),
                to: Vec2::new(a, r + 1.0 / h),
            },
            (0.0, 1.0),
        ),
        ArcId::Gamma5 => (
            ArcShape::Segment {
                from: Vec2::new(0.0, 2.0 * r),
                to: Vec2::new(a, 2.0 * r),
            },
            (0.0, 1.0),
        ),
        ArcId::AxisSegment => (
            ArcShape::Segment {
                from: Vec2::new(0.0, r + 1.0 / h),
                to: Vec2::new(0.0, 2.0 * r),
            },
            (0.0, 1.0),
        ),
    };
    ProfileArc { id, shape, t_range }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }
    fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

/// An arc together with the direction in which the closed loop traverses it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedArc {
    pub arc: ProfileArc,
    pub direction: Direction,
}

impl OrientedArc {
    /// Parameter where the traversal enters the arc.
    pub fn t_start(&self) -> f64 {
        match self.direction {
            Direction::Forward => self.arc.t_range.0,
            Direction::Reverse => self.arc.t_range.1,
        }
    }
    pub fn t_end(&self) -> f64 {
        match self.direction {
            Direction::Forward => self.arc.t_range.1,
            Direction::Reverse => self.arc.t_range.0,
        }
    }
    pub fn start(&self) -> Result<Vec2, ProfileError> {
        self.arc.eval(self.t_start())
    }
    pub fn end(&self) -> Result<Vec2, ProfileError> {
        self.arc.eval(self.t_end())
    }
    /// Unit tangent in traversal direction.
    pub fn unit_tangent(&self, t: f64) -> Vec2 {
        let d = self.arc.d1(t);
        d.scale(self.direction.sign() / d.norm())
    }
    /// Outward unit normal of the enclosed region: the traversal tangent
    /// rotated clockwise.
    pub fn outward_normal(&self, t: f64) -> Vec2 {
        let tan = self.unit_tangent(t);
        Vec2::new(tan.y, -tan.x)
    }
}

/// A closed meridian loop, positively oriented (enclosed region on the left).
#[derive(Debug, Clone, PartialEq)]
pub struct Meridian {
    arcs: Vec<OrientedArc>,
}

impl Meridian {
    /// Chains `arcs` into a loop starting with `arcs[0]` traversed in
    /// direction `first`: each following arc is the remaining one, in the
    /// direction, whose start lies closest to the current end. The whole loop
    /// is reversed afterwards if the enclosed signed volume is negative.
    pub fn from_chain(
        arcs: Vec<ProfileArc>,
        first: Direction,
        gap_tol: f64,
    ) -> Result<Self, ProfileError> {
        let tol = Tolerance::default();
        let mut remaining = arcs;
        if remaining.is_empty() {
            return Err(ProfileError::Degenerate("no arcs to chain".into()));
        }
        let head = remaining.remove(0);
        let mut chained = vec![OrientedArc {
            arc: head,
            direction: first,
        }];
        while !remaining.is_empty() {
            let end = chained.last().expect("nonempty").end()?;
            let mut best: Option<(f64, usize, Direction)> = None;
            for (i, arc) in remaining.iter().enumerate() {
                for (direction, t) in [
                    (Direction::Forward, arc.t_range.0),
                    (Direction::Reverse, arc.t_range.1),
                ] {
                    let gap = arc.eval(t)?.dist(end);
                    if best.is_none_or(|(g, _, _)| gap < g) {
                        best = Some((gap, i, direction));
                    }
                }
            }
            let (_, i, direction) = best.expect("nonempty");
            chained.push(OrientedArc {
                arc: remaining.remove(i),
                direction,
            });
        }
        let mut meridian = Meridian { arcs: chained };
        for j in meridian.junctions()? {
            if j.position_gap > gap_tol {
                return Err(ProfileError::OpenJunction {
                    a: j.arc_a,
                    b: j.arc_b,
                    gap: j.position_gap,
                });
            }
        }
        if measures::signed_volume(&meridian, &tol)? < 0.0 {
            meridian.reverse();
        }
        Ok(meridian)
    }

    fn reverse(&mut self) {
        self.arcs.reverse();
        for oa in &mut self.arcs {
            oa.direction = oa.direction.flip();
        }
    }

    /// Right semicircle of radius `r` centred at the origin closed by the
    /// axis: the meridian of a round sphere. Used as a reference fixture.
    pub fn sphere(r: f64) -> Result<Self, ProfileError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(ProfileError::InvalidParams(format!(
                "radius must be positive, got {r}"
            )));
        }
        let semicircle = ProfileArc {
            id: ArcId::Gamma2,
            shape: ArcShape::Circle {
                center: Vec2::new(0.0, 0.0),
                radius: r,
            },
            t_range: (-FRAC_PI_2, FRAC_PI_2),
        };
        let axis = ProfileArc {
            id: ArcId::AxisSegment,
            shape: ArcShape::Segment {
                from: Vec2::new(0.0, r),
                to: Vec2::new(0.0, -r),
            },
            t_range: (0.0, 1.0),
        };
        Meridian::from_chain(
            vec![semicircle, axis],
            Direction::Forward,
            JUNCTION_TOL * r.max(1.0),
        )
    }

    pub fn arcs(&self) -> &[OrientedArc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Option<&OrientedArc> {
        self.arcs.iter().find(|oa| oa.arc.id == id)
    }

    /// Arcs that sweep surface (everything except the axis).
    pub fn material_arcs(&self) -> impl Iterator<Item = &OrientedArc> {
        self.arcs
            .iter()
            .filter(|oa| oa.arc.id != ArcId::AxisSegment)
    }

    /// Junction diagnostics between consecutive arcs, wrapping around.
    pub fn junctions(&self) -> Result<Vec<JunctionReport>, ProfileError> {
        let n = self.arcs.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = &self.arcs[i];
            let b = &self.arcs[(i + 1) % n];
            let position_gap = a.end()?.dist(b.start()?);
            let ta = a.unit_tangent(a.t_end());
            let tb = b.unit_tangent(b.t_start());
            let tangent_angle_gap = if a.arc.id == ArcId::AxisSegment {
                line_angle(tb, Vec2::new(1.0, 0.0))
            } else if b.arc.id == ArcId::AxisSegment {
                line_angle(ta, Vec2::new(1.0, 0.0))
            } else {
                line_angle(ta, tb)
            };
            out.push(JunctionReport {
                arc_a: a.arc.id,
                arc_b: b.arc.id,
                position_gap,
                tangent_angle_gap,
            });
        }
        Ok(out)
    }

    /// Points on the axis where the loop meets it: (start, end) of the axis
    /// segment in traversal order.
    pub fn poles(&self) -> Result<Option<(Vec2, Vec2)>, ProfileError> {
        match self.arc(ArcId::AxisSegment) {
            Some(axis) => Ok(Some((axis.start()?, axis.end()?))),
            None => Ok(None),
        }
    }

    /// Polygonal approximation with `n_per_arc` segments per arc, in
    /// traversal order, without repeating shared junction points.
    pub fn polyline(&self, n_per_arc: usize) -> Result<Vec<Vec2>, ProfileError> {
        let n = n_per_arc.max(1);
        let mut pts = Vec::with_capacity(n * self.arcs.len());
        for oa in &self.arcs {
            let ts = oa.arc.grid(n);
            let mut p = oa.arc.eval_many(&ts)?;
            if oa.direction == Direction::Reverse {
                p.reverse();
            }
            pts.extend(p.into_iter().take(n));
        }
        Ok(pts)
    }
}

/// Angle in `[0, π/2]` between the lines spanned by `u` and `v`.
fn line_angle(u: Vec2, v: Vec2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v).abs())
}

/// Positional and tangential mismatch where one arc hands over to the next.
///
/// For junctions with the axis segment, `tangent_angle_gap` measures how far
/// the material arc's tangent is from perpendicular to the axis, which is
/// the condition for a smooth pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionReport {
    pub arc_a: ArcId,
    pub arc_b: ArcId,
    pub position_gap: f64,
    pub tangent_angle_gap: f64,
}

impl JunctionReport {
    pub fn within(&self, tol: f64) -> bool {
        self.position_gap <= tol && self.tangent_angle_gap <= tol
    }
}

/// Γ_{h,β} closed by the axis segment, oriented so that the enclosed volume
/// is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedProfile {
    params: ProfileParams,
    meridian: Meridian,
    junctions: Vec<JunctionReport>,
}

impl ClosedProfile {
    pub fn params(&self) -> &ProfileParams {
        &self.params
    }
    pub fn meridian(&self) -> &Meridian {
        &self.meridian
    }
    pub fn junctions(&self) -> &[JunctionReport] {
        &self.junctions
    }
    pub fn arc(&self, id: ArcId) -> &OrientedArc {
        self.meridian
            .arc(id)
            .expect("closed profile holds all six arcs")
    }
}

/// Builds Γ_{h,β} ∪ axis as an oriented closed loop.
pub fn build_closed_profile(params: &ProfileParams) -> Result<ClosedProfile, ProfileError> {
    build_closed_profile_from(params, Direction::Forward)
}

/// As [`build_closed_profile`], with the trial direction of the first arc
/// given explicitly. The orientation step makes the result independent of it.
pub fn build_closed_profile_from(
    params: &ProfileParams,
    first: Direction,
) -> Result<ClosedProfile, ProfileError> {
    let order = [
        ArcId::AxisSegment,
        ArcId::Gamma5,
        ArcId::Gamma3,
        ArcId::Gamma1,
        ArcId::Gamma2,
        ArcId::Gamma4,
    ];
    let arcs = order.iter().map(|&id| build_arc(params, id)).collect();
    let gap_tol = 100.0
        * params
            .tol
            .abs_tol
            .max(params.tol.rel_tol * (1.0 / params.h));
    let meridian = Meridian::from_chain(arcs, first, gap_tol)?;
    let junctions = meridian.junctions()?;
    Ok(ClosedProfile {
        params: *params,
        meridian,
        junctions,
    })
}

/// Junction diagnostics for a built profile. Pass/fail is left to the
/// caller; see [`JunctionReport::within`].
pub fn check_c1(profile: &ClosedProfile) -> Vec<JunctionReport> {
    profile.junctions.clone()
}

/// One row of the profile CSV dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub arc: ArcId,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
}

/// `n_per_arc + 1` evenly spaced parameter samples on every arc, arcs in
/// traversal order, parameters ascending.
pub fn sample_profile(
    profile: &ClosedProfile,
    n_per_arc: usize,
) -> Result<Vec<ProfileSample>, ProfileError> {
    let n = n_per_arc.max(1);
    let mut rows = Vec::new();
    for oa in profile.meridian.arcs() {
        let ts = oa.arc.grid(n);
        let pts = oa.arc.eval_many(&ts)?;
        for (t, p) in ts.into_iter().zip(pts) {
            let d = oa.arc.d1(t);
            rows.push(ProfileSample {
                arc: oa.arc.id,
                t,
                x: p.x,
                y: p.y,
                dx: d.x,
                dy: d.y,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: f64, beta: f64) -> ProfileParams {
        ProfileParams::new(h, beta).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ProfileParams::new(0.0, 0.5).is_err());
        assert!(ProfileParams::new(-1.0, 0.5).is_err());
        assert!(ProfileParams::new(1.0, 0.0).is_err());
        assert!(ProfileParams::new(1.0, -1.0).is_err());
        assert!(ProfileParams::new(f64::NAN, 1.0).is_err());
        assert!(ProfileParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn proof_regime_flag() {
        assert!(params(1.0, 0.5).in_proof_regime());
        assert!(params(1.0, 1.0).in_proof_regime());
        assert!(!params(1.0, 4.0).in_proof_regime());
    }

    #[test]
    fn gamma1_endpoints() {
        let p = params(1.0, 4.0);
        let g1 = build_arc(&p, ArcId::Gamma1);
        let start = g1.eval(0.0).unwrap();
        assert_eq!(start, Vec2::new(1.0, 0.0));
        let end = g1.eval(PI).unwrap();
        assert!((end.x - 1.0).abs() < 1e-15);
        assert!((end.y - (p.r() - 1.0)).abs() < 1e-10);
        // accumulated F(π) agrees with the cached endpoint value
        let f_acc = NodaryIntegral::new(4.0)
            .unwrap()
            .cumulative(&[1.0, 2.0, PI], &Tolerance::default())
            .unwrap()[2];
        assert!((f_acc - 2.0 * p.r()).abs() < 1e-10);
    }

    #[test]
    fn gamma5_end() {
        let p = params(1.0, 4.0);
        let g5 = build_arc(&p, ArcId::Gamma5);
        assert_eq!(g5.eval(1.0).unwrap(), Vec2::new(1.0, 2.0 * p.r()));
    }

    #[test]
    fn out_of_range_parameter() {
        let p = params(1.0, 0.5);
        let g1 = build_arc(&p, ArcId::Gamma1);
        assert!(matches!(
            g1.eval(-0.1),
            Err(ProfileError::OutOfRange { .. })
        ));
        assert!(g1.eval_many(&[0.0, 4.0]).is_err());
    }

    #[test]
    fn traversal_order_and_orientation() {
        let p = params(1.0, 0.5);
        let prof = build_closed_profile(&p).unwrap();
        let ids: Vec<ArcId> = prof.meridian().arcs().iter().map(|a| a.arc.id).collect();
        assert_eq!(
            ids,
            vec![
                ArcId::AxisSegment,
                ArcId::Gamma5,
                ArcId::Gamma3,
                ArcId::Gamma1,
                ArcId::Gamma2,
                ArcId::Gamma4
            ]
        );
        assert_eq!(prof.arc(ArcId::Gamma1).direction, Direction::Forward);
        assert_eq!(prof.arc(ArcId::Gamma3).direction, Direction::Reverse);
        assert_eq!(prof.arc(ArcId::Gamma4).direction, Direction::Reverse);
    }

    #[test]
    fn reversed_trial_is_reoriented() {
        let p = params(1.0, 0.5);
        let fwd = build_closed_profile_from(&p, Direction::Forward).unwrap();
        let rev = build_closed_profile_from(&p, Direction::Reverse).unwrap();
        let tol = Tolerance::default();
        assert!(measures::signed_volume(rev.meridian(), &tol).unwrap() > 0.0);
        for id in ArcId::MATERIAL {
            assert_eq!(fwd.arc(id).direction, rev.arc(id).direction, "{id}");
        }
    }

    #[test]
    fn axis_points() {
        for &(h, beta) in &[(1.0, 4.0), (0.5, 0.1), (2.0, 1e-3)] {
            let p = params(h, beta);
            let prof = build_closed_profile(&p).unwrap();
            let pts = prof.meridian().polyline(200).unwrap();
            let on_axis: Vec<&Vec2> = pts.iter().filter(|q| q.x == 0.0).collect();
            // the polyline includes the axis interior; count distinct poles instead
            let (a, b) = prof.meridian().poles().unwrap().unwrap();
            assert_eq!(a, Vec2::new(0.0, p.r() + 1.0 / h));
            assert_eq!(b, Vec2::new(0.0, 2.0 * p.r()));
            assert!(on_axis.len() >= 2);
            let off_axis_min = prof
                .meridian()
                .material_arcs()
                .flat_map(|oa| {
                    let (lo, hi) = oa.arc.t_range;
                    (1..100).map(move |i| oa.arc.x(lo + (hi - lo) * i as f64 / 100.0))
                })
                .fold(f64::INFINITY, f64::min);
            assert!(off_axis_min > 0.0);
        }
    }

    #[test]
    fn junction_count_and_gaps() {
        let prof = build_closed_profile(&params(1.0, 4.0)).unwrap();
        let js = check_c1(&prof);
        assert_eq!(js.len(), 6);
        for j in &js {
            assert!(j.within(JUNCTION_TOL), "{j:?}");
        }
    }

    #[test]
    fn gamma1_to_gamma2_tangents_horizontal() {
        let p = params(1.0, 0.3);
        let g1 = build_arc(&p, ArcId::Gamma1);
        let g2 = build_arc(&p, ArcId::Gamma2);
        let t1 = g1.d1(PI);
        let t2 = g2.d1(-FRAC_PI_2);
        assert!(t1.y.abs() < 1e-15 * t1.norm().max(1.0));
        assert!(t2.y.abs() < 1e-15);
        assert!(t1.x > 0.0 && t2.x > 0.0);
    }

    #[test]
    fn gamma3_meets_gamma1_exactly() {
        let p = params(1.0, 0.3);
        let g1 = build_arc(&p, ArcId::Gamma1).eval(0.0).unwrap();
        let g3 = build_arc(&p, ArcId::Gamma3).eval(-FRAC_PI_2).unwrap();
        assert!(g1.dist(g3) < 1e-15);
    }

    #[test]
    fn sphere_fixture_is_closed() {
        let m = Meridian::sphere(2.0).unwrap();
        assert_eq!(m.arcs().len(), 2);
        for j in m.junctions().unwrap() {
            assert!(j.within(1e-12), "{j:?}");
        }
    }

    #[test]
    fn sample_rows_cover_every_arc() {
        let prof = build_closed_profile(&params(1.0, 4.0)).unwrap();
        let rows = sample_profile(&prof, 10).unwrap();
        assert_eq!(rows.len(), 6 * 11);
        assert!(rows.iter().all(|r| r.x >= 0.0));
    }
}

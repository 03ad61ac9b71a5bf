//! Thin solids of revolution with bounded mean curvature.
//!
//! A family of solids `Ω_{h,β}`, each diffeomorphic to a ball, is built by
//! rotating a meridian made of a nodary arc, two concentric semicircles and
//! two horizontal segments about the y-axis. The nodary piece sweeps a
//! nodoid with constant mean curvature `h`; as `β → 0` the solid collapses
//! onto a doubly covered sphere of radius `1/h`, so its area tends to
//! `8π/h²` while its volume tends to zero and `|H|` stays bounded by about
//! `h`.
//!
//! Modules:
//! - [`quadrature`]: adaptive Gauss–Kronrod integration and the nodary integral
//! - [`profile`]: the meridian arcs, orientation and junction diagnostics
//! - [`curvature`]: principal and mean curvatures of the swept surface
//! - [`measures`]: area, volume, `L^p` norms of `H`, dilation laws
//! - [`certify`]: parameter selection, certificates and `β → 0` sweeps
//! - [`mesh`]: watertight triangulations, discrete measures, OBJ/STL export

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod curvature;
pub mod measures;
pub mod mesh;
pub mod profile;
pub mod quadrature;

pub use measures::Exponent;
pub use profile::{build_closed_profile, ArcId, ClosedProfile, ProfileParams};
pub use quadrature::Tolerance;

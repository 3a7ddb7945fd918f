//! Field solutions on the deformed background and the operators that check
//! them: scalar waves and potentials, electromagnetic potentials, spinor
//! waves, conserved currents, energy-momentum balances, and momentum
//! operators with their eigenchecks.
//!
//! The construction pattern is uniform: take a flat-space solution, push it
//! through the conformal flattening (exact, any g) or through the
//! norm-preserving map (exact image solutions, or first-order families), and
//! verify the field equation of the deformed space by nested finite
//! differences.

pub mod em;
pub mod gamma;
pub mod momentum;
pub mod scalar;
pub mod spinor;

use crate::core::norm::{cone_factors, spatial_norm};
use crate::core::param::DeformParam;
use crate::support::linalg::V4;

/// Step scale for the residual stencils: the usual point scale, capped near
/// the deformed cone and the spatial axis so the stencil never reaches
/// across either locus. Without the cap the truncation grows like
/// (h / distance)^6 and breaches the residual tolerances at strong
/// deformation.
pub(crate) fn fd_scale(par: &DeformParam, r: &V4) -> f64 {
    let scale = r[0].abs() + spatial_norm(r);
    let (u, v) = cone_factors(par, r);
    let d = u.abs().min(v.abs()).min(spatial_norm(r));
    scale.min(4.0 * d)
}

/// Image-side analogue: the flattened cone sits at t0 = ±|t|.
pub(crate) fn fd_scale_image(t: &V4) -> f64 {
    let q = spatial_norm(t);
    let scale = t[0].abs() + q;
    let d = (t[0] - q).abs().min((t[0] + q).abs()).min(q);
    scale.min(4.0 * d)
}

//! Geodesic flow of the norm.
//!
//! The metric depends on direction only, not on position, so the spray
//! acceleration -C_q{}^p{}_r Rdot^q Rdot^r is evaluated with the velocity as
//! the supporting direction. There the radial contraction of the Cartan
//! tensor vanishes identically and geodesics are straight lines with the
//! norm of the velocity conserved. The integrator keeps the spray form
//! anyway, so conservation and straightness are measured, not assumed.

use crate::core::cartan::cartan_closed;
use crate::core::metric::metric_inverse;
use crate::core::norm::{fmf, require_regular, DEFAULT_BAND};
use crate::core::param::DeformParam;
use crate::support::linalg::V4;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct GeodesicState {
    pub r: V4,
    pub rdot: V4,
}

/// Spray acceleration a^p = -C_q{}^p{}_r(rdot) rdot^q rdot^r.
pub fn geodesic_accel(par: &DeformParam, state: &GeodesicState) -> Result<V4> {
    require_regular(par, &state.rdot, DEFAULT_BAND)?;
    let c = cartan_closed(par, &state.rdot);
    let gi = metric_inverse(par, &state.rdot);
    let v = state.rdot;
    let mut a = [0.0; 4];
    for p in 0..4 {
        let mut acc = 0.0;
        for m in 0..4 {
            let mut inner = 0.0;
            for q in 0..4 {
                for rr in 0..4 {
                    inner += c[q][m][rr] * v[q] * v[rr];
                }
            }
            acc += gi[p][m] * inner;
        }
        a[p] = -acc;
    }
    Ok(a)
}

/// Classic fourth-order Runge-Kutta on the first-order system
/// (r, rdot) -> (rdot, accel). Returns the states after each step,
/// initial state first.
pub fn integrate_geodesic(
    par: &DeformParam,
    start: GeodesicState,
    ds: f64,
    steps: usize,
) -> Result<Vec<GeodesicState>> {
    let deriv = |s: &GeodesicState| -> Result<(V4, V4)> { Ok((s.rdot, geodesic_accel(par, s)?)) };
    let mut out = Vec::with_capacity(steps + 1);
    out.push(start);
    let mut cur = start;
    for _ in 0..steps {
        let (k1r, k1v) = deriv(&cur)?;
        let mid1 = shift(&cur, &k1r, &k1v, 0.5 * ds);
        let (k2r, k2v) = deriv(&mid1)?;
        let mid2 = shift(&cur, &k2r, &k2v, 0.5 * ds);
        let (k3r, k3v) = deriv(&mid2)?;
        let end = shift(&cur, &k3r, &k3v, ds);
        let (k4r, k4v) = deriv(&end)?;
        let mut r = cur.r;
        let mut v = cur.rdot;
        for i in 0..4 {
            r[i] += ds / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
            v[i] += ds / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        cur = GeodesicState { r, rdot: v };
        out.push(cur);
    }
    Ok(out)
}

fn shift(s: &GeodesicState, dr: &V4, dv: &V4, t: f64) -> GeodesicState {
    let mut r = s.r;
    let mut v = s.rdot;
    for i in 0..4 {
        r[i] += t * dr[i];
        v[i] += t * dv[i];
    }
    GeodesicState { r, rdot: v }
}

/// Norm of the velocity along a trajectory; constant on geodesics.
pub fn norm_drift(par: &DeformParam, path: &[GeodesicState]) -> f64 {
    let f0 = fmf(par, &path[0].rdot);
    path.iter()
        .map(|s| (fmf(par, &s.rdot) - f0).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spray_acceleration_vanishes_along_velocity() {
        let p = DeformParam::new(1.2).unwrap();
        for v in [[2.0, 0.4, 0.3, 0.1], [0.3, 2.0, 1.0, 0.5], [1.0, 0.1, -0.2, 0.05]] {
            let a = geodesic_accel(&p, &GeodesicState { r: [0.0; 4], rdot: v }).unwrap();
            for i in 0..4 {
                assert!(a[i].abs() < 1e-11, "v={v:?} a[{i}]={:.3e}", a[i]);
            }
        }
    }

    #[test]
    fn geodesics_are_straight_and_norm_preserving() {
        let p = DeformParam::new(0.8).unwrap();
        let start = GeodesicState {
            r: [0.0, 0.1, -0.2, 0.0],
            rdot: [1.5, 0.4, 0.2, -0.1],
        };
        let path = integrate_geodesic(&p, start, 0.05, 200).unwrap();
        assert_eq!(path.len(), 201);
        assert!(norm_drift(&p, &path) < 1e-10);
        let last = path.last().unwrap();
        let s_total = 0.05 * 200.0;
        for i in 0..4 {
            let straight = start.r[i] + s_total * start.rdot[i];
            assert!((last.r[i] - straight).abs() < 1e-9, "i={i}");
        }
    }

    #[test]
    fn rejects_cone_velocity() {
        let p = DeformParam::new(1.0).unwrap();
        let v = [p.g_sup_plus, 1.0, 0.0, 0.0]; // u = 0 exactly
        assert!(geodesic_accel(&p, &GeodesicState { r: [0.0; 4], rdot: v }).is_err());
    }
}

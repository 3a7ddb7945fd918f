//! Zero-phase wavefront geometry. For the exported plane wave moving along
//! axis 1 the locus Phi = 0 at emission time R^0 is the rotational surface
//!
//!   R^1 = h R^0 - (g/2) D,   D = ((R^0)^2 + Rperp^2)^{1/2},
//!
//! equivalently the implicit relation R^0 = h R^1 + (g/2) |R|. The branch
//! condition |R| = h D - (g/2) R^0 >= 0 picks the physical sheet. For g > 0
//! the vertex trails the isotropic front, for g < 0 it leads.

use serde::Serialize;

use crate::conformal::rho;
use crate::core::param::DeformParam;
use crate::support::linalg::V4;
use crate::{Error, Result};

/// Closed on-axis front height R^1 at transverse radius Rperp.
pub fn front_r1(par: &DeformParam, r0: f64, r_perp: f64) -> Result<f64> {
    if !(r0.is_finite() && r_perp.is_finite()) {
        return Err(Error::NonFinite(r0 + r_perp));
    }
    let d = (r0 * r0 + r_perp * r_perp).sqrt();
    let spatial = par.h * d - 0.5 * par.g * r0;
    if spatial < 0.0 {
        return Err(Error::Branch("the physical sheet needs h D >= (g/2) R^0"));
    }
    Ok(par.h * r0 - 0.5 * par.g * d)
}

/// Residual of the implicit front relation R^0 - h R^1 - (g/2) |R| on the
/// closed solution; identically zero up to rounding.
pub fn front_implicit_residual(par: &DeformParam, r0: f64, r_perp: f64) -> Result<f64> {
    let r1 = front_r1(par, r0, r_perp)?;
    let norm = (r1 * r1 + r_perp * r_perp).sqrt();
    Ok(r0 - par.h * r1 - 0.5 * par.g * norm)
}

/// Vertex position R^1 = (h - g/2) R^0 on the symmetry axis.
pub fn vertex_position(par: &DeformParam, r0: f64) -> f64 {
    par.g_plus * r0
}

/// Propagation speed of the vertex along the axis.
pub fn vertex_speed(par: &DeformParam) -> f64 {
    par.g_plus
}

/// Closed transverse slope dR^1/dRperp = -(g/2) Rperp / (h |R| + (g/2) R^1).
pub fn transverse_slope(par: &DeformParam, r0: f64, r_perp: f64) -> Result<f64> {
    let r1 = front_r1(par, r0, r_perp)?;
    let norm = (r1 * r1 + r_perp * r_perp).sqrt();
    let denom = par.h * norm + 0.5 * par.g * r1;
    if denom == 0.0 {
        return Err(Error::Branch("degenerate slope denominator"));
    }
    Ok(-0.5 * par.g * r_perp / denom)
}

/// Transverse curvature at the vertex, d^2 R^1 / dRperp^2 at Rperp = 0,
/// equal to -g / (2 R^0). The emission instant R^0 = 0 is a conic point
/// with no curvature to report.
pub fn vertex_curvature(par: &DeformParam, r0: f64) -> Result<f64> {
    if r0 == 0.0 {
        return Err(Error::Branch(
            "the front through the origin has a conic vertex",
        ));
    }
    Ok(-0.5 * par.g / r0)
}

/// Asymptotic cone of the front family: R^1 = -(g/2) Rperp. The front at
/// R^0 = 0 lies on it exactly.
pub fn asymptotic_cone_r1(par: &DeformParam, r_perp: f64) -> f64 {
    -0.5 * par.g * r_perp
}

/// First-order front R^1 = R^0 - (g/2) D, the small-g truncation of the
/// closed profile.
pub fn front_o1_r1(g: f64, r0: f64, r_perp: f64) -> f64 {
    let d = (r0 * r0 + r_perp * r_perp).sqrt();
    r0 - 0.5 * g * d
}

/// Which way the anisotropy points: for g > 0 the vertex trails the
/// isotropic sphere, for g < 0 it leads.
pub fn direction_of_motion(par: &DeformParam) -> &'static str {
    if par.g > 0.0 {
        "vertex-trailing"
    } else if par.g < 0.0 {
        "vertex-leading"
    } else {
        "isotropic"
    }
}

/// One sampled point of a front surface.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrontPoint {
    pub r_perp: f64,
    pub azimuth: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

/// A sampled zero-phase front at fixed emission time.
#[derive(Debug, Clone, Serialize)]
pub struct FrontSample {
    pub g: f64,
    pub r0: f64,
    pub direction: &'static str,
    pub points: Vec<FrontPoint>,
}

/// Sample the closed front on a (radius, azimuth) grid; points are ordered
/// by increasing transverse radius, then azimuth.
pub fn sample_front(
    par: &DeformParam,
    r0: f64,
    perp_max: f64,
    n_perp: usize,
    n_azimuth: usize,
) -> Result<FrontSample> {
    if n_perp < 2 || n_azimuth < 1 || !(perp_max > 0.0) {
        return Err(Error::Config("front grid needs n_perp >= 2, n_azimuth >= 1".into()));
    }
    let mut points = Vec::with_capacity(n_perp * n_azimuth);
    for i in 0..n_perp {
        let r_perp = perp_max * i as f64 / (n_perp - 1) as f64;
        let r1 = front_r1(par, r0, r_perp)?;
        for k in 0..n_azimuth {
            let az = 2.0 * std::f64::consts::PI * k as f64 / n_azimuth as f64;
            points.push(FrontPoint {
                r_perp,
                azimuth: az,
                r1,
                r2: r_perp * az.cos(),
                r3: r_perp * az.sin(),
            });
        }
    }
    Ok(FrontSample {
        g: par.g,
        r0,
        direction: direction_of_motion(par),
        points,
    })
}

/// General zero-phase crossing: for a null covector k and a spatial
/// direction, find s > 0 with k.rho(R^0, s d) = 0. Off-axis the crossing
/// lies beyond the deformed cone (where the flattening blows up), so the
/// search scans outward from just outside the cone and bisects the first
/// sign change. On-axis crossings sit on the cone itself and are returned
/// by the closed profile instead.
pub fn front_crossing(par: &DeformParam, k: &V4, r0: f64, dir: &[f64; 3]) -> Result<f64> {
    let square = k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3];
    let kscale: f64 = k.iter().map(|x| x * x).sum();
    if square.abs() > 1e-10 * kscale {
        return Err(Error::OffShell(square));
    }
    if !(r0 > 0.0) {
        return Err(Error::Config("crossing search needs R^0 > 0".into()));
    }
    let dn = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    if dn == 0.0 {
        return Err(Error::Config("direction must be nonzero".into()));
    }
    let phase_at = |s: f64| -> Result<f64> {
        let r = [r0, s * dir[0] / dn, s * dir[1] / dn, s * dir[2] / dn];
        let y = rho(par, &r)?;
        Ok(k[0] * y[0] + k[1] * y[1] + k[2] * y[2] + k[3] * y[3])
    };
    // the ray leaves the future cone at s = -R^0/g_minus (g_minus < 0)
    let s_cone = -r0 / par.g_minus;
    let start = s_cone * (1.0 + 1e-3);
    let mut prev_s = start;
    let mut prev_f = phase_at(start)?;
    if prev_f == 0.0 {
        return Ok(start);
    }
    let mut found = None;
    let mut s = start;
    for _ in 0..400 {
        s *= 1.05;
        let f = phase_at(s)?;
        if f == 0.0 {
            return Ok(s);
        }
        if f.signum() != prev_f.signum() {
            found = Some((prev_s, s));
            break;
        }
        prev_s = s;
        prev_f = f;
    }
    let (mut lo, mut hi) =
        found.ok_or(Error::Branch("no zero-phase crossing along this direction"))?;
    let mut f_lo = phase_at(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = phase_at(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn par(g: f64) -> DeformParam {
        DeformParam::new(g).unwrap()
    }

    #[test]
    fn implicit_relation_holds_on_closed_profile() {
        for &g in &[0.8, 1.5, -0.6, 0.0] {
            let p = par(g);
            for &r0 in &[0.5, 1.0, 3.0] {
                for &rp in &[0.0, 0.3, 1.0, 10.0] {
                    let res = front_implicit_residual(&p, r0, rp).unwrap();
                    assert!(res.abs() < 1e-12 * (1.0 + r0 + rp), "g={g} r0={r0} rp={rp}: {res:.3e}");
                }
            }
        }
    }

    #[test]
    fn vertex_moves_at_the_deformed_speed() {
        for &g in &[0.8, -0.6] {
            let p = par(g);
            let r0 = 2.0;
            let v = front_r1(&p, r0, 0.0).unwrap();
            assert!((v - p.g_plus * r0).abs() < 1e-12);
            assert!((vertex_position(&p, r0) - v).abs() < 1e-12);
            assert!((vertex_speed(&p) - p.g_plus).abs() < 1e-15);
        }
    }

    #[test]
    fn slope_matches_finite_differences_and_vanishes_at_vertex() {
        let p = par(1.1);
        let r0 = 2.0;
        assert_eq!(transverse_slope(&p, r0, 0.0).unwrap(), 0.0);
        for &rp in &[0.4, 1.0, 3.0] {
            let closed = transverse_slope(&p, r0, rp).unwrap();
            let h = 1e-5;
            let fd = (front_r1(&p, r0, rp + h).unwrap() - front_r1(&p, r0, rp - h).unwrap())
                / (2.0 * h);
            assert!((closed - fd).abs() < 1e-8, "rp={rp}: {closed} vs {fd}");
        }
    }

    #[test]
    fn vertex_curvature_is_closed_form() {
        let p = par(0.9);
        let r0 = 2.0;
        let want = -0.5 * p.g / r0;
        // the profile is even in Rperp, so a folded fourth-order central
        // stencil applies at the vertex
        let h = 1e-3;
        let f0 = front_r1(&p, r0, 0.0).unwrap();
        let f1 = front_r1(&p, r0, h).unwrap();
        let f2 = front_r1(&p, r0, 2.0 * h).unwrap();
        let fd = (-2.0 * f2 + 32.0 * f1 - 30.0 * f0) / (12.0 * h * h);
        assert!((vertex_curvature(&p, r0).unwrap() - want).abs() < 1e-15);
        assert!((fd - want).abs() < 1e-8 * (1.0 + want.abs()), "{fd} vs {want}");
        assert!(matches!(vertex_curvature(&p, 0.0), Err(Error::Branch(_))));
    }

    #[test]
    fn front_at_emission_instant_is_the_cone() {
        let p = par(1.3);
        for &rp in &[0.2, 1.0, 7.0] {
            let f = front_r1(&p, 0.0, rp).unwrap();
            assert!((f - asymptotic_cone_r1(&p, rp)).abs() < 1e-14);
        }
        // and the asymptote is approached at large radius
        let r0 = 1.0;
        let s = transverse_slope(&p, r0, 1e6).unwrap();
        assert!((s + 0.5 * p.g).abs() < 1e-5);
    }

    #[test]
    fn past_sheet_also_satisfies_the_implicit_relation() {
        // for |g| < 2 the sheet value h D - (g/2) R^0 is always nonnegative
        // (|g/2| < h), so negative emission times give the past front
        for &g in &[1.2, -1.2] {
            let p = par(g);
            for &r0 in &[1.0, -1.0] {
                let res = front_implicit_residual(&p, r0, 0.7).unwrap();
                assert!(res.abs() < 1e-12, "g={g} r0={r0}: {res:.3e}");
            }
        }
    }

    #[test]
    fn first_order_front_converges_quadratically() {
        let r0 = 2.0;
        let rp = 1.0;
        let gs = [0.2, 0.1, 0.05, 0.025];
        let devs: Vec<f64> = gs
            .iter()
            .map(|&g| {
                let p = par(g);
                (front_r1(&p, r0, rp).unwrap() - front_o1_r1(g, r0, rp)).abs()
            })
            .collect();
        let fit = crate::support::fit::order_fit(&gs, &devs);
        assert!(fit.slope > 1.8 && fit.slope < 2.2, "slope {:.3}", fit.slope);
        assert!(fit.r2 > 0.99);
    }

    #[test]
    fn sampled_front_is_ordered_and_axisymmetric() {
        let p = par(0.7);
        let s = sample_front(&p, 2.0, 3.0, 5, 8).unwrap();
        assert_eq!(s.points.len(), 40);
        assert_eq!(s.direction, "vertex-trailing");
        let mut prev = (-1.0, -1.0);
        for pt in &s.points {
            assert!(
                (pt.r_perp, pt.azimuth) > prev,
                "ordering violated at {:?}",
                (pt.r_perp, pt.azimuth)
            );
            prev = (pt.r_perp, pt.azimuth);
            // axisymmetry: r1 depends on r_perp only
            let again = front_r1(&p, 2.0, pt.r_perp).unwrap();
            assert_eq!(pt.r1, again);
            // cartesian transverse coordinates are consistent
            assert!((pt.r2.hypot(pt.r3) - pt.r_perp).abs() < 1e-12 * (1.0 + pt.r_perp));
        }
        assert_eq!(direction_of_motion(&par(-0.5)), "vertex-leading");
        assert_eq!(direction_of_motion(&par(0.0)), "isotropic");
    }

    #[test]
    fn crossing_search_matches_closed_profile() {
        let p = par(1.0);
        let k = [1.0, -1.0, 0.0, 0.0];
        let r0 = 2.0;
        // off-axis only: the on-axis crossing sits on the deformed cone,
        // where the flattening itself is singular
        for &rp in &[0.5f64, 2.0, 5.0] {
            // direction chosen so that the transverse radius comes out rp:
            // point (r1, rp, 0); walk the ray through it
            let r1 = front_r1(&p, r0, rp).unwrap();
            let dir = [r1, rp, 0.0];
            let s = front_crossing(&p, &k, r0, &dir).unwrap();
            let norm = (r1 * r1 + rp * rp).sqrt();
            assert!((s - norm).abs() < 1e-9 * (1.0 + norm), "rp={rp}: {s} vs {norm}");
        }
        // off-shell covectors are refused
        assert!(matches!(
            front_crossing(&p, &[1.0, -0.5, 0.0, 0.0], r0, &[1.0, 0.0, 0.0]),
            Err(Error::OffShell(_))
        ));
    }
}

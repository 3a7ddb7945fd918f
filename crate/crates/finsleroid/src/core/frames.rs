//! Invariant orthonormal frames on the future timelike sector.
//!
//! The frame splits the direction-dependent metric into a Minkowski square,
//! g_pq = e_p^0 e_q^0 - sum_c e_p^c e_q^c, with frame covectors built from
//! the Jacobian of the norm-preserving map, the image point, and the unit
//! covector. Rotation coefficients measure the directional twist of the
//! frame; their contraction with the supporting ray vanishes.
//!
//! Outside the future timelike sector the construction mixes frame axes of
//! opposite causal type, so it is refused rather than silently continued.

use crate::core::metric::{sigma_jacobian_closed, sigma_raw, unit_covector};
use crate::core::norm::{fmf, require_regular, sector, Sector, DEFAULT_BAND};
use crate::core::param::DeformParam;
use crate::support::linalg::{inverse, M4, V4};
use crate::{Error, Result};

/// Frame covectors e[P][q] = e_q^P and frame vectors inverse[P][q] = e_P^q.
/// Row index is the flat frame label, column index the coordinate slot.
#[derive(Debug, Clone, Copy)]
pub struct Frame4 {
    pub frame: M4,
    pub inverse: M4,
}

fn require_future_timelike(par: &DeformParam, r: &V4) -> Result<()> {
    require_regular(par, r, DEFAULT_BAND)?;
    match sector(par, r) {
        Sector::FutureTimelike => Ok(()),
        s => Err(Error::FrameSector(s.name())),
    }
}

/// Orthonormal frame at direction r:
/// e_q^P = sigma_q^P / h + ((h-1)/h) sigma^P l_q / F and its inverse
/// e_P^q = h mu_P^q + (1-h) sigma_P l^q / F.
pub fn invariant_frame(par: &DeformParam, r: &V4) -> Result<Frame4> {
    require_future_timelike(par, r)?;
    let jac = sigma_jacobian_closed(par, r);
    let jinv = inverse(&jac).ok_or(Error::Branch("map Jacobian is singular"))?;
    let t = sigma_raw(par, r);
    let f = fmf(par, r);
    let l_lo = unit_covector(par, r);
    let l_up = [r[0] / f, r[1] / f, r[2] / f, r[3] / f];
    let t_lo = [t[0], -t[1], -t[2], -t[3]];
    let c1 = (par.h - 1.0) / par.h;
    let mut frame = [[0.0; 4]; 4];
    let mut inv = [[0.0; 4]; 4];
    for cap_p in 0..4 {
        for q in 0..4 {
            frame[cap_p][q] = jac[cap_p][q] / par.h + c1 * t[cap_p] * l_lo[q] / f;
            // jinv[q][cap_p] is mu_P^q
            inv[cap_p][q] = par.h * jinv[q][cap_p] + (1.0 - par.h) * t_lo[cap_p] * l_up[q] / f;
        }
    }
    Ok(Frame4 { frame, inverse: inv })
}

/// Rotation coefficients R^{PQ}_q = (h-1)(sigma^P e_q^Q - sigma^Q e_q^P)/F^2,
/// returned as rot[P][Q][q], antisymmetric in the frame pair.
pub fn ricci_rotation(par: &DeformParam, r: &V4) -> Result<[[[f64; 4]; 4]; 4]> {
    let fr = invariant_frame(par, r)?;
    let t = sigma_raw(par, r);
    let f2 = fmf(par, r).powi(2);
    let c = (par.h - 1.0) / f2;
    let mut rot = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for s in 0..4 {
                rot[p][q][s] = c * (t[p] * fr.frame[q][s] - t[q] * fr.frame[p][s]);
            }
        }
    }
    Ok(rot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::metric::metric_closed;
    use crate::support::linalg::norm_inf;

    fn par(g: f64) -> DeformParam {
        DeformParam::new(g).unwrap()
    }

    const RA: V4 = [2.0, 0.4, 0.3, 0.1];

    #[test]
    fn refuses_spacelike() {
        let p = par(1.2);
        assert!(matches!(
            invariant_frame(&p, &[0.3, 2.0, 1.0, 0.5]),
            Err(Error::FrameSector(_))
        ));
    }

    #[test]
    fn frame_and_inverse_are_dual() {
        for &g in &[0.5, 1.2, -0.8] {
            let p = par(g);
            let fr = invariant_frame(&p, &RA).unwrap();
            for q in 0..4 {
                for q2 in 0..4 {
                    let mut s = 0.0;
                    for cap_p in 0..4 {
                        s += fr.frame[cap_p][q] * fr.inverse[cap_p][q2];
                    }
                    let expect = if q == q2 { 1.0 } else { 0.0 };
                    assert!((s - expect).abs() < 1e-12, "g={g} ({q},{q2}): {s}");
                }
            }
        }
    }

    #[test]
    fn frame_squares_to_metric() {
        for &g in &[0.5, 1.2, 2.0] {
            let p = par(g);
            let fr = invariant_frame(&p, &RA).unwrap();
            let gm = metric_closed(&p, &RA);
            let mut rebuilt = [[0.0; 4]; 4];
            for a in 0..4 {
                for b in 0..4 {
                    rebuilt[a][b] = fr.frame[0][a] * fr.frame[0][b]
                        - fr.frame[1][a] * fr.frame[1][b]
                        - fr.frame[2][a] * fr.frame[2][b]
                        - fr.frame[3][a] * fr.frame[3][b];
                }
            }
            let err = norm_inf(&crate::support::linalg::sub(&rebuilt, &gm));
            assert!(err < 1e-12, "g={g} err={err:.3e}");
        }
    }

    #[test]
    fn flat_limit_frame_is_identity() {
        let p = par(0.0);
        let fr = invariant_frame(&p, &RA).unwrap();
        let err = norm_inf(&crate::support::linalg::sub(
            &fr.frame,
            &crate::support::linalg::identity(),
        ));
        assert!(err < 1e-14);
    }

    #[test]
    fn rotation_antisymmetric_and_radial_free() {
        let p = par(1.2);
        let rot = ricci_rotation(&p, &RA).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for q in 0..4 {
                    assert!((rot[a][b][q] + rot[b][a][q]).abs() < 1e-14);
                }
                let mut s = 0.0;
                for q in 0..4 {
                    s += rot[a][b][q] * RA[q];
                }
                assert!(s.abs() < 1e-12, "({a},{b}) radial contraction {s:.3e}");
            }
        }
    }

    #[test]
    fn lowered_rotation_closed_form() {
        // e_{Pr} e_{Qs} R^{PQ}_p = gamma (l_r h_sp - l_s h_rp) / F
        let p = par(1.2);
        let fr = invariant_frame(&p, &RA).unwrap();
        let rot = ricci_rotation(&p, &RA).unwrap();
        let f = fmf(&p, &RA);
        let l = unit_covector(&p, &RA);
        let h = crate::core::metric::angular_part(&p, &RA);
        let mut low = [[0.0; 4]; 4];
        for cap_p in 0..4 {
            let sgn = if cap_p == 0 { 1.0 } else { -1.0 };
            for rr in 0..4 {
                low[cap_p][rr] = sgn * fr.frame[cap_p][rr];
            }
        }
        for rr in 0..4 {
            for s in 0..4 {
                for q in 0..4 {
                    let mut acc = 0.0;
                    for a in 0..4 {
                        for b in 0..4 {
                            acc += low[a][rr] * low[b][s] * rot[a][b][q];
                        }
                    }
                    let expect = p.gamma * (l[rr] * h[s][q] - l[s] * h[rr][q]) / f;
                    assert!(
                        (acc - expect).abs() < 1e-12,
                        "({rr},{s},{q}): {acc:.3e} vs {expect:.3e}"
                    );
                }
            }
        }
    }
}

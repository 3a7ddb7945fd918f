//! The direction-dependent metric tensor g_pq = (1/2) d^2 F^2 / dR^p dR^q.
//!
//! Two constructions:
//! - `metric_fd`: Richardson-extrapolated central differences of F^2/2, the
//!   definition taken literally (the derivative oracle);
//! - `metric_closed`: push-forward of the constant metric of the
//!   norm-preserving map through its closed Jacobian, exact to rounding.
//!
//! The closed Jacobian of that map, its second derivatives, and the closed
//! gradient R_p live here too, since every other module feeds on them.
//!
//! Sign structure: with t the image of the point and eps the sign of
//! e(t,t), the constant metric is n_ij = eps e_ij/h^2 + (G^2/4) l_i l_j.
//! The resulting signature is (+,-,-,-) in the timelike sector and
//! (+,+,+,-) in the spacelike sector; the two sectors are disconnected, so
//! no continuity is violated.

use crate::core::norm::{aux_forms, fmf, sector_sign, spatial_norm, unit_spatial};
use crate::core::param::DeformParam;
use crate::support::linalg::{inverse, M4, V4};
use crate::support::numdiff::{hessian, step2};

/// Gradient of F^2/2, a covector: R_p = (F^2/2)(G_plus u_p/u - G_minus v_p/v)
/// with u_p = (1, g_minus n_a), v_p = (1, g_plus n_a).
pub fn r_lower(par: &DeformParam, r: &V4) -> V4 {
    let aux = aux_forms(par, r);
    let n = unit_spatial(r);
    let f2h = 0.5 * aux.f * aux.f;
    let cu = par.big_g_plus / aux.u;
    let cv = par.big_g_minus / aux.v;
    let mut out = [f2h * (cu - cv), 0.0, 0.0, 0.0];
    for a in 0..3 {
        out[a + 1] = f2h * (cu * par.g_minus - cv * par.g_plus) * n[a];
    }
    out
}

/// Unit covector l_p = R_p / F.
pub fn unit_covector(par: &DeformParam, r: &V4) -> V4 {
    let f = fmf(par, r);
    let rl = r_lower(par, r);
    [rl[0] / f, rl[1] / f, rl[2] / f, rl[3] / f]
}

/// Angular projector h_pq = g_pq - l_p l_q (annihilates R^q).
pub fn angular_part(par: &DeformParam, r: &V4) -> M4 {
    let g = metric_closed(par, r);
    let l = unit_covector(par, r);
    let mut out = g;
    for p in 0..4 {
        for q in 0..4 {
            out[p][q] -= l[p] * l[q];
        }
    }
    out
}

/// Gradient of j: j_p = -(G/4) j (u_p/u - v_p/v).
pub(crate) fn j_gradient(par: &DeformParam, r: &V4) -> V4 {
    let aux = aux_forms(par, r);
    let n = unit_spatial(r);
    let c = -0.25 * par.big_g * aux.j;
    let mut out = [c * (1.0 / aux.u - 1.0 / aux.v), 0.0, 0.0, 0.0];
    for a in 0..3 {
        out[a + 1] = c * (par.g_minus / aux.u - par.g_plus / aux.v) * n[a];
    }
    out
}

/// The norm-preserving map itself: t^0 = j A, t^a = h j R^a.
pub(crate) fn sigma_raw(par: &DeformParam, r: &V4) -> V4 {
    let aux = aux_forms(par, r);
    [
        aux.j * aux.a_form,
        par.h * aux.j * r[1],
        par.h * aux.j * r[2],
        par.h * aux.j * r[3],
    ]
}

/// Closed Jacobian of the map, indexed jac[i][p] = d t^i / d R^p.
pub(crate) fn sigma_jacobian_closed(par: &DeformParam, r: &V4) -> M4 {
    let aux = aux_forms(par, r);
    let n = unit_spatial(r);
    let jp = j_gradient(par, r);
    // covectors u_p, v_p, A_p
    let a_p = [1.0, -0.5 * par.g * n[0], -0.5 * par.g * n[1], -0.5 * par.g * n[2]];
    let mut t = [[0.0; 4]; 4];
    for p in 0..4 {
        t[0][p] = jp[p] * aux.a_form + aux.j * a_p[p];
        for a in 0..3 {
            let delta = if p == a + 1 { 1.0 } else { 0.0 };
            t[a + 1][p] = par.h * (jp[p] * r[a + 1] + aux.j * delta);
        }
    }
    t
}

/// Second derivatives t^i_{pq}, indexed [i][p][q]. Feeds the closed Cartan
/// tensor.
pub(crate) fn sigma_second_derivs(par: &DeformParam, r: &V4) -> [[[f64; 4]; 4]; 4] {
    let aux = aux_forms(par, r);
    let q_norm = spatial_norm(r);
    let n = unit_spatial(r);
    let jp = j_gradient(par, r);

    // d n_a / d R^b = (delta_ab - n_a n_b)/|R|, zero against R^0
    let mut proj = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            proj[a][b] = ((if a == b { 1.0 } else { 0.0 }) - n[a] * n[b]) / q_norm;
        }
    }
    let u_p = [1.0, par.g_minus * n[0], par.g_minus * n[1], par.g_minus * n[2]];
    let v_p = [1.0, par.g_plus * n[0], par.g_plus * n[1], par.g_plus * n[2]];
    let a_p = [1.0, -0.5 * par.g * n[0], -0.5 * par.g * n[1], -0.5 * par.g * n[2]];

    // second derivatives of u, v, A: only the spatial blocks survive
    let mut u_pq = [[0.0; 4]; 4];
    let mut v_pq = [[0.0; 4]; 4];
    let mut a_pq = [[0.0; 4]; 4];
    for a in 0..3 {
        for b in 0..3 {
            u_pq[a + 1][b + 1] = par.g_minus * proj[a][b];
            v_pq[a + 1][b + 1] = par.g_plus * proj[a][b];
            a_pq[a + 1][b + 1] = -0.5 * par.g * proj[a][b];
        }
    }

    // j_pq from differentiating j_p = -(G/4) j (u_p/u - v_p/v)
    let mut j_pq = [[0.0; 4]; 4];
    let c = -0.25 * par.big_g;
    for p in 0..4 {
        for qq in 0..4 {
            let bracket_p = u_p[p] / aux.u - v_p[p] / aux.v;
            let d_bracket = u_pq[p][qq] / aux.u - u_p[p] * u_p[qq] / (aux.u * aux.u)
                - v_pq[p][qq] / aux.v
                + v_p[p] * v_p[qq] / (aux.v * aux.v);
            j_pq[p][qq] = c * (jp[qq] * bracket_p + aux.j * d_bracket);
        }
    }

    let mut t2 = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for qq in 0..4 {
            t2[0][p][qq] =
                j_pq[p][qq] * aux.a_form + jp[p] * a_p[qq] + jp[qq] * a_p[p] + aux.j * a_pq[p][qq];
            for a in 0..3 {
                let dp = if p == a + 1 { 1.0 } else { 0.0 };
                let dq = if qq == a + 1 { 1.0 } else { 0.0 };
                t2[a + 1][p][qq] = par.h * (j_pq[p][qq] * r[a + 1] + jp[p] * dq + jp[qq] * dp);
            }
        }
    }
    t2
}

/// Constant metric of the image space at the image point t, lower indices:
/// n_ij = eps e_ij/h^2 + (G^2/4) l_i l_j with l_i = e_ij t^j / S.
pub(crate) fn n_lower_at(par: &DeformParam, t: &V4, eps: f64) -> M4 {
    let s2 = (t[0] * t[0] - t[1] * t[1] - t[2] * t[2] - t[3] * t[3]) * eps;
    let s = s2.sqrt();
    let l_lo = [t[0] / s, -t[1] / s, -t[2] / s, -t[3] / s];
    let q = 0.25 * par.big_g * par.big_g;
    let h2 = par.h * par.h;
    let mut n = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let e = if i != j {
                0.0
            } else if i == 0 {
                1.0
            } else {
                -1.0
            };
            n[i][j] = eps * e / h2 + q * l_lo[i] * l_lo[j];
        }
    }
    n
}

/// The metric tensor by the exact closed path (push-forward of the constant
/// image metric). Symmetric, det = -j^8, signature (+,-,-,-) timelike and
/// (+,+,+,-) spacelike.
pub fn metric_closed(par: &DeformParam, r: &V4) -> M4 {
    let eps = sector_sign(par, r);
    let t = sigma_raw(par, r);
    let n = n_lower_at(par, &t, eps);
    let jac = sigma_jacobian_closed(par, r);
    let mut g = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            let mut s = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    s += n[i][j] * jac[i][p] * jac[j][q];
                }
            }
            g[p][q] = s;
        }
    }
    // enforce exact symmetry against rounding
    for p in 0..4 {
        for q in p + 1..4 {
            let m = 0.5 * (g[p][q] + g[q][p]);
            g[p][q] = m;
            g[q][p] = m;
        }
    }
    g
}

/// The metric tensor by the definition: Hessian of F^2/2 with central
/// differences and Richardson extrapolation. The derivative oracle for
/// `metric_closed`.
pub fn metric_fd(par: &DeformParam, r: &V4) -> M4 {
    let scale = r[0].abs() + spatial_norm(r);
    let f = |x: &V4| {
        let v = fmf(par, x);
        0.5 * v * v
    };
    let mut g = hessian(f, r, step2(scale));
    for p in 0..4 {
        for q in p + 1..4 {
            let m = 0.5 * (g[p][q] + g[q][p]);
            g[p][q] = m;
            g[q][p] = m;
        }
    }
    g
}

/// Inverse metric (contravariant components).
pub fn metric_inverse(par: &DeformParam, r: &V4) -> M4 {
    inverse(&metric_closed(par, r)).expect("metric is nonsingular off the cone")
}

//! Cartan tensor C_pqr = (1/4) d^3 F^2 / dR^p dR^q dR^r and the curvature
//! built from it.
//!
//! Closed path: differentiate the push-forward form of the metric once more,
//! which needs the second derivatives of the norm-preserving map and the
//! t-gradient of the image metric. FD path: nested central differences of
//! F^2/4, kept as the independent oracle.
//!
//! Structure results checked here and replayed in the verify suites:
//! - the trace C_p = C_pq^q equals the logarithmic gradient of det^(1/2),
//!   concretely 4 j_p / j, and C_p C^p = -4 g^2 / F^2;
//! - C has the special algebraic form built from its trace and the angular
//!   projector, so the curvature tensor S_pqrs is that of a constant-
//!   curvature indicatrix with value -(1 + g^2/4) = -h^2.

use crate::core::metric::{
    metric_closed, metric_inverse, n_lower_at, sigma_jacobian_closed, sigma_raw,
    sigma_second_derivs, unit_covector,
};
use crate::core::norm::{fmf, sector_sign, spatial_norm};
use crate::core::param::DeformParam;
use crate::support::linalg::{M4, V4};
use crate::support::numdiff::{step2, step3, third_tensor};

pub type T3 = [[[f64; 4]; 4]; 4];
pub type T4 = [[[[f64; 4]; 4]; 4]; 4];

/// Cartan tensor by the exact closed path.
pub fn cartan_closed(par: &DeformParam, r: &V4) -> T3 {
    let eps = sector_sign(par, r);
    let t = sigma_raw(par, r);
    let jac = sigma_jacobian_closed(par, r);
    let t2 = sigma_second_derivs(par, r);
    let n = n_lower_at(par, &t, eps);

    // t-gradient of n_ij: (G^2/4)(H_ik l_j + H_jk l_i)/S with
    // H_ik = e_ik - eps l_i l_k, all indices lowered with e
    let s2 = eps * (t[0] * t[0] - t[1] * t[1] - t[2] * t[2] - t[3] * t[3]);
    let s = s2.sqrt();
    let l_lo = [t[0] / s, -t[1] / s, -t[2] / s, -t[3] / s];
    let qg = 0.25 * par.big_g * par.big_g;
    let mut h_lo = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let e = if i != k {
                0.0
            } else if i == 0 {
                1.0
            } else {
                -1.0
            };
            h_lo[i][k] = e - eps * l_lo[i] * l_lo[k];
        }
    }
    let mut dn = [[[0.0; 4]; 4]; 4]; // dn[k][i][j] = d n_ij / d t^k
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                dn[k][i][j] = qg * (h_lo[i][k] * l_lo[j] + h_lo[j][k] * l_lo[i]) / s;
            }
        }
    }

    let mut c = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for rr in 0..4 {
                let mut dg = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        let mut dn_r = 0.0;
                        for k in 0..4 {
                            dn_r += dn[k][i][j] * jac[k][rr];
                        }
                        dg += dn_r * jac[i][p] * jac[j][q]
                            + n[i][j] * (t2[i][p][rr] * jac[j][q] + jac[i][p] * t2[j][q][rr]);
                    }
                }
                c[p][q][rr] = 0.5 * dg;
            }
        }
    }
    // symmetrize against rounding; the tensor is totally symmetric
    let mut out = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for rr in 0..4 {
                out[p][q][rr] = (c[p][q][rr] + c[p][rr][q] + c[q][p][rr]
                    + c[q][rr][p]
                    + c[rr][p][q]
                    + c[rr][q][p])
                    / 6.0;
            }
        }
    }
    out
}

/// Cartan tensor by nested central differences of F^2/4, the oracle.
pub fn cartan_fd(par: &DeformParam, r: &V4) -> T3 {
    let scale = r[0].abs() + spatial_norm(r);
    let f = |x: &V4| {
        let v = fmf(par, x);
        0.25 * v * v
    };
    third_tensor(f, r, step3(scale), step2(scale))
}

/// Trace C_p = g^{qr} C_pqr, equal to the gradient of ln j^4.
pub fn cartan_trace(par: &DeformParam, r: &V4) -> V4 {
    let c = cartan_closed(par, r);
    let gi = metric_inverse(par, r);
    let mut out = [0.0; 4];
    for p in 0..4 {
        let mut s = 0.0;
        for q in 0..4 {
            for rr in 0..4 {
                s += gi[q][rr] * c[p][q][rr];
            }
        }
        out[p] = s;
    }
    out
}

/// Reconstruction of C from its trace and the angular projector:
/// C_pqr = (1/4)(h_pq C_r + h_pr C_q + h_qr C_p - C_p C_q C_r / (C_t C^t)).
/// Holds exactly for this norm; used as a structure check.
pub fn cartan_special_form(par: &DeformParam, r: &V4) -> T3 {
    let ct = cartan_trace(par, r);
    let gi = metric_inverse(par, r);
    let g = metric_closed(par, r);
    let l = unit_covector(par, r);
    let mut h = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            h[p][q] = g[p][q] - l[p] * l[q];
        }
    }
    let mut c2 = 0.0;
    for p in 0..4 {
        for q in 0..4 {
            c2 += gi[p][q] * ct[p] * ct[q];
        }
    }
    let mut out = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for rr in 0..4 {
                out[p][q][rr] = 0.25
                    * (h[p][q] * ct[rr] + h[p][rr] * ct[q] + h[q][rr] * ct[p]
                        - ct[p] * ct[q] * ct[rr] / c2);
            }
        }
    }
    out
}

/// Curvature tensor S_pqrs = C_tqr C_p{}^t{}_s - C_tqs C_p{}^t{}_r built from
/// a given Cartan tensor and inverse metric; shared by the closed and FD
/// verification paths.
pub fn curvature_from(c: &T3, gi: &M4) -> T4 {
    // d[p][t][s] = C_p^t_s
    let mut d = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for t in 0..4 {
            for s in 0..4 {
                let mut acc = 0.0;
                for m in 0..4 {
                    acc += gi[t][m] * c[p][m][s];
                }
                d[p][t][s] = acc;
            }
        }
    }
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for rr in 0..4 {
                for s in 0..4 {
                    let mut acc = 0.0;
                    for t in 0..4 {
                        acc += c[t][q][rr] * d[p][t][s] - c[t][q][s] * d[p][t][rr];
                    }
                    out[p][q][rr][s] = acc;
                }
            }
        }
    }
    out
}

/// Curvature tensor from the closed Cartan tensor.
pub fn curvature_tensor(par: &DeformParam, r: &V4) -> T4 {
    curvature_from(&cartan_closed(par, r), &metric_inverse(par, r))
}

/// The constant-curvature reference S_pqrs = (g^2/4)(h_pr h_qs - h_ps h_qr)/F^2.
pub fn curvature_reference(par: &DeformParam, r: &V4) -> T4 {
    let g = metric_closed(par, r);
    let l = unit_covector(par, r);
    let f2 = fmf(par, r).powi(2);
    let lam = 0.25 * par.g * par.g / f2;
    let mut h = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            h[p][q] = g[p][q] - l[p] * l[q];
        }
    }
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for rr in 0..4 {
                for s in 0..4 {
                    out[p][q][rr][s] = lam * (h[p][rr] * h[q][s] - h[p][s] * h[q][rr]);
                }
            }
        }
    }
    out
}

/// Indicatrix curvature extracted from the curvature tensor by full angular
/// contraction; equals -(1 + g^2/4) = -h^2 at every regular point of either
/// sector.
pub fn indicatrix_curvature(par: &DeformParam, r: &V4) -> f64 {
    let s = curvature_tensor(par, r);
    let gi = metric_inverse(par, r);
    let f = fmf(par, r);
    let l_up = [r[0] / f, r[1] / f, r[2] / f, r[3] / f];
    let mut h_up = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            h_up[p][q] = gi[p][q] - l_up[p] * l_up[q];
        }
    }
    let mut acc = 0.0;
    for p in 0..4 {
        for q in 0..4 {
            for rr in 0..4 {
                for ss in 0..4 {
                    acc += s[p][q][rr][ss] * h_up[p][rr] * h_up[q][ss];
                }
            }
        }
    }
    // acc = lambda * (N-1)(N-2) / F^2 with N = 4
    let lam = acc * f * f / 6.0;
    -(1.0 + lam)
}

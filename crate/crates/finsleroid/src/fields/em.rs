//! Electromagnetic fields: flat potentials exported through the conformal
//! flattening, closed Faraday tensors, the weighted displacement
//! D^{pq} = j^4 g^{pt} g^{qs} F_ts, source-free residuals, stress and its
//! balance with the Cartan connection.
//!
//! An export A_p = rho_p^m B_m(rho(R)) of a flat vacuum potential solves the
//! deformed source-free equations exactly when the flat field is on shell
//! (null wave covector with transverse amplitude, or the static Coulomb
//! field). The plain coordinate divergence of D then vanishes because the
//! weight j^4 equals |det g|^{1/2}.

use num_complex::Complex64;

use crate::conformal::{kappa, phase, phase_gradient, rho, rho_jacobian};
use crate::core::metric::metric_inverse;
use crate::core::norm::{
    aux_forms, require_regular, spatial_norm, unit_spatial, DEFAULT_BAND,
};
use crate::core::param::DeformParam;
use crate::fields::scalar::balance_of;
use crate::quasi::{sigma, sigma_jacobian};
use crate::support::linalg::{CM4, CV4, M4, V4};
use crate::support::numdiff::{partial, partial_r, step2, step3};
use crate::{Error, Result};

const FIELD_BAND: f64 = 32.0 * DEFAULT_BAND;

fn scale_of(r: &V4) -> f64 {
    r[0].abs() + spatial_norm(r)
}

/// Export of a generic flat potential: A_p(R) = rho_p^m B_m(rho(R)).
pub fn em_export_potential<B>(par: &DeformParam, bfield: B, r: &V4) -> Result<CV4>
where
    B: Fn(&V4) -> CV4,
{
    let y = rho(par, r)?;
    let jac = rho_jacobian(par, r)?;
    let b = bfield(&y);
    let mut a = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        for m in 0..4 {
            a[p] += b[m] * jac[m][p];
        }
    }
    Ok(a)
}

/// Plane-wave export A_p = rho_p^m b_m e^{i Phi}, Phi = k.rho(R).
pub fn plane_wave_potential(par: &DeformParam, k: &V4, b: &CV4, r: &V4) -> Result<CV4> {
    em_export_potential(
        par,
        |y: &V4| {
            let ph = k[0] * y[0] + k[1] * y[1] + k[2] * y[2] + k[3] * y[3];
            let e = Complex64::cis(ph);
            [b[0] * e, b[1] * e, b[2] * e, b[3] * e]
        },
        r,
    )
}

/// Euler contraction of the plane wave: since rho is homogeneous of degree h,
/// R^p A_p = h rho^m b_m e^{i Phi}. Returns (contraction, closed value).
pub fn plane_wave_contraction(
    par: &DeformParam,
    k: &V4,
    b: &CV4,
    r: &V4,
) -> Result<(Complex64, Complex64)> {
    let a = plane_wave_potential(par, k, b, r)?;
    let mut lhs = Complex64::new(0.0, 0.0);
    for p in 0..4 {
        lhs += a[p] * r[p];
    }
    let y = rho(par, r)?;
    let ph = phase(par, k, r)?;
    let mut rb = Complex64::new(0.0, 0.0);
    for m in 0..4 {
        rb += b[m] * y[m];
    }
    Ok((lhs, rb * Complex64::cis(ph) * par.h))
}

/// Raised plane-wave potential by two routes that must agree:
/// g^{pq} A_q and eps kappa^2 eta_i^p b^i e^{i Phi} with b^i = e^{im} b_m.
pub fn plane_wave_upper(par: &DeformParam, k: &V4, b: &CV4, r: &V4) -> Result<(CV4, CV4)> {
    let a = plane_wave_potential(par, k, b, r)?;
    let gi = metric_inverse(par, r);
    let mut metric_route = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        for q in 0..4 {
            metric_route[p] += a[q] * gi[p][q];
        }
    }
    let eps = crate::core::norm::sector_sign(par, r);
    let k2 = kappa(par, r).powi(2);
    let ej = crate::conformal::eta_jacobian_pullback(par, r)?;
    let ph = phase(par, k, r)?;
    let e = Complex64::cis(ph);
    let braise = [b[0], -b[1], -b[2], -b[3]];
    let mut flat_route = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        for i in 0..4 {
            flat_route[p] += braise[i] * (eps * k2 * ej[p][i]) * e;
        }
    }
    Ok((metric_route, flat_route))
}

/// Closed Faraday tensor of the plane-wave export:
/// F_pq = i (Phi_p A_q - Phi_q A_p); the symmetric second derivatives of rho
/// cancel in the antisymmetrization.
pub fn plane_wave_faraday(par: &DeformParam, k: &V4, b: &CV4, r: &V4) -> Result<CM4> {
    let a = plane_wave_potential(par, k, b, r)?;
    let gp = phase_gradient(par, k, r)?;
    let i = Complex64::new(0.0, 1.0);
    let mut f = [[Complex64::new(0.0, 0.0); 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            f[p][q] = i * (a[q] * gp[p] - a[p] * gp[q]);
        }
    }
    Ok(f)
}

/// Finite-difference Faraday tensor of an arbitrary potential closure.
pub fn faraday_fd<A>(par: &DeformParam, a: A, r: &V4) -> Result<CM4>
where
    A: Fn(&V4) -> CV4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h = step2(super::fd_scale(par, r));
    let comp = |q: usize| move |x: &V4| -> Complex64 { a(x)[q] };
    let mut grad = [[Complex64::new(0.0, 0.0); 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            grad[p][q] = partial_r(comp(q), r, p, h);
        }
    }
    let mut f = [[Complex64::new(0.0, 0.0); 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            f[p][q] = grad[p][q] - grad[q][p];
        }
    }
    Ok(f)
}

/// Weighted displacement D^{pq} = j^4 g^{pt} g^{qs} F_ts.
pub fn displacement(par: &DeformParam, f_lower: &CM4, r: &V4) -> CM4 {
    let gi = metric_inverse(par, r);
    let j4 = aux_forms(par, r).j.powi(4);
    let mut d = [[Complex64::new(0.0, 0.0); 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..4 {
                for s in 0..4 {
                    acc += f_lower[t][s] * (gi[p][t] * gi[q][s]);
                }
            }
            d[p][q] = acc * j4;
        }
    }
    d
}

/// Source-free residual d_q D^{pq} from a closed Faraday closure.
pub fn maxwell_residual_closed<F>(par: &DeformParam, far: F, r: &V4) -> Result<CV4>
where
    F: Fn(&V4) -> CM4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h = step2(super::fd_scale(par, r));
    let comp = |p: usize, q: usize| move |x: &V4| -> Complex64 {
        displacement(par, &far(x), x)[p][q]
    };
    let mut div = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        for q in 0..4 {
            div[p] += partial(comp(p, q), r, q, h);
        }
    }
    Ok(div)
}

/// Source-free residual computed all the way from a potential closure by
/// nested finite differences.
pub fn maxwell_residual<A>(par: &DeformParam, a: A, r: &V4) -> Result<CV4>
where
    A: Fn(&V4) -> CV4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h_out = step3(super::fd_scale(par, r));
    let far = move |x: &V4| faraday_fd(par, a, x).expect("regular point");
    let comp = |p: usize, q: usize| move |x: &V4| -> Complex64 {
        displacement(par, &far(x), x)[p][q]
    };
    let mut div = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        for q in 0..4 {
            // Richardson on the outer layer: the nested stencil error grows
            // like (h/u)^4 near the cone and plain step3 is not enough there.
            div[p] += partial_r(comp(p, q), r, q, h_out);
        }
    }
    Ok(div)
}

/// Static charge export: A_p = rho_p^0 e / (kappa j |R|), the flat Coulomb
/// potential e/|y| pushed through the flattening (|rho(R)| = kappa j |R|).
pub fn coulomb_potential(par: &DeformParam, charge: f64, r: &V4) -> Result<V4> {
    require_regular(par, r, DEFAULT_BAND)?;
    let jac = rho_jacobian(par, r)?;
    let aux = aux_forms(par, r);
    let w = charge / (kappa(par, r) * aux.j * spatial_norm(r));
    Ok([jac[0][0] * w, jac[0][1] * w, jac[0][2] * w, jac[0][3] * w])
}

/// Closed Coulomb Faraday tensor F_pq = rho_q^0 w_p - rho_p^0 w_q with
/// w_p = -(e/|rho_vec|^3) rho^c rho^c_p.
pub fn coulomb_faraday(par: &DeformParam, charge: f64, r: &V4) -> Result<M4> {
    let y = rho(par, r)?;
    let jac = rho_jacobian(par, r)?;
    let m = (y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
    if m == 0.0 {
        return Err(Error::ConeProximity {
            locus: "spatial axis |R| = 0",
            value: 0.0,
            band: DEFAULT_BAND,
        });
    }
    let mut w = [0.0; 4];
    for p in 0..4 {
        for c in 1..4 {
            w[p] -= charge / m.powi(3) * y[c] * jac[c][p];
        }
    }
    let mut f = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            f[p][q] = jac[0][q] * w[p] - jac[0][p] * w[q];
        }
    }
    Ok(f)
}

/// Closed spacelike-sector components of the Coulomb export: with
/// k = R^0/|R|, f = k - g/2, L = 1 + g k - k^2,
/// A_0 = (h - (k - g) f) e / (L |R|), A_a = -(gamma k + g/2) n_a e / (L |R|).
pub fn coulomb_spacelike_components(par: &DeformParam, charge: f64, r: &V4) -> Result<V4> {
    require_regular(par, r, DEFAULT_BAND)?;
    let aux = aux_forms(par, r);
    if aux.sector.is_timelike() {
        return Err(Error::SectorMismatch {
            expected: "spacelike",
            found: aux.sector.name(),
        });
    }
    let q = spatial_norm(r);
    let k = r[0] / q;
    let f = k - 0.5 * par.g;
    let l = 1.0 + par.g * k - k * k;
    let n = unit_spatial(r);
    let w = charge / (l * q);
    let a0 = (par.h - (k - par.g) * f) * w;
    let c = -(par.gamma * k + 0.5 * par.g) * w;
    Ok([a0, c * n[0], c * n[1], c * n[2]])
}

/// Mixed electromagnetic stress T_p^q = -F_pt F^{qt} + (1/4) delta_p^q F^2
/// for a real Faraday tensor; traceless by construction.
pub fn em_stress(par: &DeformParam, f_lower: &M4, r: &V4) -> M4 {
    let gi = metric_inverse(par, r);
    // F^{qt} = g^{qa} g^{tb} F_ab
    let mut f_upper = [[0.0; 4]; 4];
    for q in 0..4 {
        for t in 0..4 {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += gi[q][a] * gi[t][b] * f_lower[a][b];
                }
            }
            f_upper[q][t] = acc;
        }
    }
    let mut invariant = 0.0;
    for t in 0..4 {
        for s in 0..4 {
            invariant += f_lower[t][s] * f_upper[t][s];
        }
    }
    let mut out = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            let mut acc = 0.0;
            for t in 0..4 {
                acc -= f_lower[p][t] * f_upper[q][t];
            }
            out[p][q] = acc;
            if p == q {
                out[p][q] += 0.25 * invariant;
            }
        }
    }
    out
}

/// Covariant and plain divergences of the electromagnetic stress built from
/// a real Faraday closure; the covariant one vanishes on exact solutions.
pub fn em_balance<F>(par: &DeformParam, far: F, r: &V4) -> Result<(V4, V4)>
where
    F: Fn(&V4) -> M4 + Copy,
{
    let stress = move |x: &V4| em_stress(par, &far(x), x);
    balance_of(par, stress, r)
}

/// Single first-order vector mode A_p = t_p^i u_i e^{i k.sigma(R)} built on
/// the norm-preserving map; its source-free residual scales as g^2.
pub fn quasi_em_mode(par: &DeformParam, k: &V4, u: &CV4, r: &V4) -> Result<CV4> {
    let t = sigma(par, r)?;
    let jac = sigma_jacobian(par, r)?;
    let ph = k[0] * t[0] + k[1] * t[1] + k[2] * t[2] + k[3] * t[3];
    let e = Complex64::cis(ph);
    let mut a = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        for i in 0..4 {
            a[p] += u[i] * jac[i][p] * e;
        }
    }
    Ok(a)
}

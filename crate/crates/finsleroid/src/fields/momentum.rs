//! Momentum operators adapted to the deformed geometry. Each one conjugates
//! the flat -i d/dy by the conformal flattening (with the spin weight of the
//! field), so the exported plane modes are exact eigenfunctions with the flat
//! wave covector as eigenvalue.

use num_complex::Complex64;

use crate::conformal::{eta_jacobian_pullback, kappa, xi_t};
use crate::core::norm::{require_regular, spatial_norm, DEFAULT_BAND};
use crate::core::param::DeformParam;
use crate::quasi::require_regular_image;
use crate::support::linalg::{inverse, CV4, M4, V4};
use crate::support::numdiff::{partial_r, step2};
use crate::{Error, Result};

const FIELD_BAND: f64 = 32.0 * DEFAULT_BAND;

fn scale_of(r: &V4) -> f64 {
    r[0].abs() + spatial_norm(r)
}

/// Scalar momentum component P_n phi = -i kappa eta_n^q d_q (phi / kappa).
pub fn momentum_scalar<F>(par: &DeformParam, n: usize, phi: F, r: &V4) -> Result<Complex64>
where
    F: Fn(&V4) -> Complex64 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h = step2(super::fd_scale(par, r));
    let ej = eta_jacobian_pullback(par, r)?;
    let stripped = move |x: &V4| phi(x) / kappa(par, x);
    let mut acc = Complex64::new(0.0, 0.0);
    for q in 0..4 {
        acc += partial_r(stripped, r, q, h) * ej[q][n];
    }
    Ok(Complex64::new(0.0, -kappa(par, r)) * acc)
}

/// Spinor momentum: the same conjugation with the weight kappa^{3/2},
/// componentwise P_n psi = -i kappa^{3/2} eta_n^q d_q (psi / kappa^{3/2}).
pub fn momentum_spinor<F>(par: &DeformParam, n: usize, psi: F, r: &V4) -> Result<CV4>
where
    F: Fn(&V4) -> CV4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h = step2(super::fd_scale(par, r));
    let ej = eta_jacobian_pullback(par, r)?;
    let kap = kappa(par, r);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for j in 0..4 {
        let stripped = move |x: &V4| psi(x)[j] / kappa(par, x).powf(1.5);
        let mut acc = Complex64::new(0.0, 0.0);
        for q in 0..4 {
            acc += partial_r(stripped, r, q, h) * ej[q][n];
        }
        out[j] = Complex64::new(0.0, -kap.powf(1.5)) * acc;
    }
    Ok(out)
}

/// Vector momentum: strip the flattening Jacobian, differentiate the flat
/// components, and dress again: (P_n A)_p = -i rho_p^s eta_n^w d_w (eta_s^q A_q).
pub fn momentum_em<A>(par: &DeformParam, n: usize, a: A, r: &V4) -> Result<CV4>
where
    A: Fn(&V4) -> CV4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h = step2(super::fd_scale(par, r));
    let jac = crate::conformal::rho_jacobian(par, r)?;
    let ej = eta_jacobian_pullback(par, r)?;
    let flat_comp = |s: usize| {
        move |x: &V4| -> Complex64 {
            let ejx = eta_jacobian_pullback(par, x).expect("regular point");
            let ax = a(x);
            let mut acc = Complex64::new(0.0, 0.0);
            for q in 0..4 {
                acc += ax[q] * ejx[q][s];
            }
            acc
        }
    };
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..4 {
            let mut der = Complex64::new(0.0, 0.0);
            for w in 0..4 {
                der += partial_r(flat_comp(s), r, w, h) * ej[w][n];
            }
            acc += der * jac[s][p];
        }
        out[p] = Complex64::new(0.0, -1.0) * acc;
    }
    Ok(out)
}

/// Image-side flattening Jacobian k^i_j = d rho-hat^i / d t^j
/// = xi (delta^i_j + eps gamma t^i t_j / S^2) / h with flat-lowered t_j.
pub fn image_k_matrix(par: &DeformParam, t: &V4) -> Result<M4> {
    require_regular_image(par, t, DEFAULT_BAND)?;
    let s2_signed = t[0] * t[0] - t[1] * t[1] - t[2] * t[2] - t[3] * t[3];
    let eps = if s2_signed >= 0.0 { 1.0 } else { -1.0 };
    let s2 = s2_signed.abs();
    let xi = xi_t(par, t);
    let t_low = [t[0], -t[1], -t[2], -t[3]];
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut v = if i == j { 1.0 } else { 0.0 };
            v += eps * par.gamma * t[i] * t_low[j] / s2;
            out[i][j] = xi * v / par.h;
        }
    }
    Ok(out)
}

/// Image momentum P_n u = -i xi ktilde_n^j d_j (u / xi), with ktilde the
/// inverse of the image flattening Jacobian.
pub fn momentum_image<F>(par: &DeformParam, n: usize, u: F, t: &V4) -> Result<Complex64>
where
    F: Fn(&V4) -> Complex64 + Copy,
{
    require_regular_image(par, t, FIELD_BAND)?;
    let scale = t[0].abs() + (t[1] * t[1] + t[2] * t[2] + t[3] * t[3]).sqrt();
    let h = step2(scale);
    let kmat = image_k_matrix(par, t)?;
    let kinv = inverse(&kmat).ok_or(Error::Branch("image flattening Jacobian is singular"))?;
    let stripped = move |x: &V4| u(x) / xi_t(par, x);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..4 {
        acc += partial_r(stripped, t, j, h) * kinv[j][n];
    }
    Ok(Complex64::new(0.0, -xi_t(par, t)) * acc)
}

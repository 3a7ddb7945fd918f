//! Spinor fields on the deformed space: the spin connection built from the
//! invariant frames, the Dirac operator with position-dependent mass weight,
//! its exact conformally-plane solutions, the conserved current, and the
//! frame identities of the norm-preserving picture.
//!
//! Frames, and hence everything here in R coordinates, live on the future
//! timelike sector. The image-coordinate identities work wherever the image
//! point is timelike.

use num_complex::Complex64;

use crate::conformal::kappa;
use crate::core::frames::ricci_rotation;
use crate::core::norm::{aux_forms, fmf, require_regular, spatial_norm, DEFAULT_BAND};
use crate::core::param::DeformParam;
use crate::fields::gamma::{
    curved_gammas, dirac_gammas, gamma_slash, image_gammas, lower_gammas, spinor_amplitudes,
};
use crate::quasi::{quasi_rotation, sigma};
use crate::support::linalg::{
    cmatmul, cmatvec, cscale, csub, cvadd, cvscale, czeros, CM4, CV4, V4,
};
use crate::support::numdiff::{partial, step2, step3};
use crate::Result;

const FIELD_BAND: f64 = 32.0 * DEFAULT_BAND;

fn scale_of(r: &V4) -> f64 {
    r[0].abs() + spatial_norm(r)
}

fn commutator_half(a: &CM4, b: &CM4) -> CM4 {
    csub(&cmatmul(a, b), &cmatmul(b, a))
}

/// Slash of an upper flat vector: sum_P gamma_P t^P with lowered gammas.
fn slash_upper(gs: &[CM4; 4], t: &V4) -> CM4 {
    gamma_slash(gs, &[t[0], -t[1], -t[2], -t[3]])
}

/// Spin connection Omega_p = (1/8) R^{PQ}_p (gamma_P gamma_Q - gamma_Q gamma_P)
/// from the closed rotation coefficients of the invariant frame.
pub fn spin_connection(par: &DeformParam, r: &V4, gs: &[CM4; 4]) -> Result<[CM4; 4]> {
    let rot = ricci_rotation(par, r)?;
    let lows = lower_gammas(gs);
    let mut omega = [czeros(); 4];
    for p in 0..4 {
        let mut acc = czeros();
        for cap_p in 0..4 {
            for cap_q in 0..4 {
                let w = rot[cap_p][cap_q][p];
                if w != 0.0 {
                    let comm = commutator_half(&lows[cap_p], &lows[cap_q]);
                    acc = cadd_scaled(&acc, &comm, 0.125 * w);
                }
            }
        }
        omega[p] = acc;
    }
    Ok(omega)
}

fn cadd_scaled(a: &CM4, b: &CM4, s: f64) -> CM4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j] * s;
        }
    }
    out
}

/// Image-side spin connection from the rotation coefficients of the
/// norm-preserving frame field.
pub fn image_spin_connection(par: &DeformParam, t: &V4, gs: &[CM4; 4]) -> Result<[CM4; 4]> {
    let rot = quasi_rotation(par, t)?;
    let lows = lower_gammas(gs);
    let mut omega = [czeros(); 4];
    for i in 0..4 {
        let mut acc = czeros();
        for cap_p in 0..4 {
            for cap_q in 0..4 {
                let w = rot[cap_p][cap_q][i];
                if w != 0.0 {
                    let comm = commutator_half(&lows[cap_p], &lows[cap_q]);
                    acc = cadd_scaled(&acc, &comm, 0.125 * w);
                }
            }
        }
        omega[i] = acc;
    }
    Ok(omega)
}

/// Dirac residual i gamma^p (d_p + Omega_p) psi - kappa m psi in a chosen
/// flat representation.
pub fn dirac_residual_with<F>(
    par: &DeformParam,
    m: f64,
    gs: &[CM4; 4],
    psi: F,
    r: &V4,
) -> Result<CV4>
where
    F: Fn(&V4) -> CV4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h = step2(super::fd_scale(par, r));
    let gamma_up = curved_gammas(par, r, gs)?;
    let omega = spin_connection(par, r, gs)?;
    let v = psi(r);
    let i = Complex64::new(0.0, 1.0);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for p in 0..4 {
        let comp = |j: usize| move |x: &V4| -> Complex64 { psi(x)[j] };
        let mut slot = [Complex64::new(0.0, 0.0); 4];
        for j in 0..4 {
            slot[j] = partial(comp(j), r, p, h);
        }
        let slot = cvadd(&slot, &cmatvec(&omega[p], &v));
        let term = cmatvec(&gamma_up[p], &slot);
        out = cvadd(&out, &cvscale(&term, i));
    }
    let mass = cvscale(&v, Complex64::new(kappa(par, r) * m, 0.0));
    Ok([
        out[0] - mass[0],
        out[1] - mass[1],
        out[2] - mass[2],
        out[3] - mass[3],
    ])
}

/// Dirac residual in the standard representation.
pub fn dirac_residual<F>(par: &DeformParam, m: f64, psi: F, r: &V4) -> Result<CV4>
where
    F: Fn(&V4) -> CV4 + Copy,
{
    let gs = dirac_gammas();
    dirac_residual_with(par, m, &gs, psi, r)
}

/// Conformally-plane spinor wave psi = kappa^{3/2} u e^{i Phi} with u an
/// on-shell amplitude; exact kernel of the Dirac operator.
pub fn conformal_spinor_wave(
    par: &DeformParam,
    k: &V4,
    m: f64,
    which: usize,
    r: &V4,
) -> Result<CV4> {
    spinor_wave_alpha(par, k, m, 1.5, which, r)
}

/// The same mode with a tunable conformal weight kappa^alpha; only
/// alpha = 3/2 is annihilated.
pub fn spinor_wave_alpha(
    par: &DeformParam,
    k: &V4,
    m: f64,
    alpha: f64,
    which: usize,
    r: &V4,
) -> Result<CV4> {
    let gs = dirac_gammas();
    let u = spinor_amplitudes(&gs, k, m)?[which];
    let ph = crate::conformal::phase(par, k, r)?;
    let w = kappa(par, r).powf(alpha) * Complex64::cis(ph);
    Ok(cvscale(&u, w))
}

/// Closed form of the weight defect: for psi_alpha = kappa^alpha u e^{i Phi},
/// D psi_alpha = i (h - 1)(alpha - 3/2) (gamma_P sigma^P / F^2) psi_alpha.
pub fn alpha_defect_closed(
    par: &DeformParam,
    k: &V4,
    m: f64,
    alpha: f64,
    which: usize,
    r: &V4,
) -> Result<CV4> {
    let gs = dirac_gammas();
    let t = sigma(par, r)?;
    let slash = slash_upper(&gs, &t);
    let psi = spinor_wave_alpha(par, k, m, alpha, which, r)?;
    let f2 = fmf(par, r).powi(2);
    let c = Complex64::new(0.0, (par.h - 1.0) * (alpha - 1.5) / f2);
    Ok(cvscale(&cmatvec(&slash, &psi), c))
}

/// Adjoint row vector psi-bar = psi^dagger gamma^0 in the standard
/// representation (gamma^0 = diag(1, 1, -1, -1)).
pub fn bar_spinor(psi: &CV4) -> CV4 {
    [
        psi[0].conj(),
        psi[1].conj(),
        -psi[2].conj(),
        -psi[3].conj(),
    ]
}

/// Weighted vector current J^p = j^4 Re(psi-bar gamma^p psi); plainly
/// conserved on Dirac solutions.
pub fn spinor_current<F>(par: &DeformParam, psi: F, r: &V4) -> Result<V4>
where
    F: Fn(&V4) -> CV4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let gs = dirac_gammas();
    let gamma_up = curved_gammas(par, r, &gs)?;
    let v = psi(r);
    let bar = bar_spinor(&v);
    let j4 = aux_forms(par, r).j.powi(4);
    let mut out = [0.0; 4];
    for p in 0..4 {
        let gv = cmatvec(&gamma_up[p], &v);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            acc += bar[i] * gv[i];
        }
        out[p] = j4 * acc.re;
    }
    Ok(out)
}

/// Finite-difference divergence of the weighted spinor current.
pub fn spinor_current_divergence<F>(par: &DeformParam, psi: F, r: &V4) -> Result<f64>
where
    F: Fn(&V4) -> CV4 + Copy,
{
    require_regular(par, r, FIELD_BAND)?;
    let h = step3(scale_of(r));
    let comp = |p: usize| move |x: &V4| -> f64 { spinor_current(par, psi, x).expect("regular")[p] };
    let mut div = 0.0;
    for p in 0..4 {
        div += partial(comp(p), r, p, h);
    }
    Ok(div)
}

/// Contracted image identity: sum_i gamma^i Omega_i equals
/// -(3/2)(h - 1) gamma_P t^P / S^2 at the image point t. Returns both sides.
pub fn quasi_gamma_identity(par: &DeformParam, t: &V4) -> Result<(CM4, CM4)> {
    let gs = dirac_gammas();
    let gups = image_gammas(par, t, &gs)?;
    let omega = image_spin_connection(par, t, &gs)?;
    let mut lhs = czeros();
    for i in 0..4 {
        lhs = cadd_scaled(&cmatmul(&gups[i], &omega[i]), &lhs, 1.0);
    }
    let s2 = (t[0] * t[0] - t[1] * t[1] - t[2] * t[2] - t[3] * t[3]).abs();
    let rhs = cscale(
        &slash_upper(&gs, t),
        Complex64::new(-1.5 * (par.h - 1.0) / s2, 0.0),
    );
    Ok((lhs, rhs))
}

/// Single first-order spinor mode psi = u e^{i k.sigma(R)} with a constant
/// on-shell amplitude; Dirac residual scales as g^2.
pub fn quasi_spinor_mode(
    par: &DeformParam,
    k: &V4,
    m: f64,
    which: usize,
    r: &V4,
) -> Result<CV4> {
    let gs = dirac_gammas();
    let u = spinor_amplitudes(&gs, k, m)?[which];
    let t = sigma(par, r)?;
    let ph = k[0] * t[0] + k[1] * t[1] + k[2] * t[2] + k[3] * t[3];
    Ok(cvscale(&u, Complex64::cis(ph)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::rho_jacobian;
    use crate::core::frames::invariant_frame;
    use crate::fields::gamma::{givens_unitary, similar_set};
    use crate::fields::scalar::on_shell;
    use crate::support::linalg::{cnorm_inf, cvnorm, cvsub};

    fn par(g: f64) -> DeformParam {
        DeformParam::new(g).unwrap()
    }

    const RA: V4 = [2.0, 0.4, 0.3, 0.1];

    #[test]
    fn flattening_jacobian_is_kappa_times_frame() {
        for &g in &[0.5, 1.2, -0.7] {
            let p = par(g);
            let jac = rho_jacobian(&p, &RA).unwrap();
            let fr = invariant_frame(&p, &RA).unwrap();
            let kap = kappa(&p, &RA);
            for i in 0..4 {
                for q in 0..4 {
                    assert!(
                        (jac[i][q] - kap * fr.frame[i][q]).abs() < 1e-12 * (1.0 + jac[i][q].abs()),
                        "g={g} i={i} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn conformal_wave_is_annihilated() {
        for &g in &[0.5, 1.0, -0.5] {
            let p = par(g);
            let m = 1.0;
            let k = on_shell(m, 0.4, 0.1, -0.3);
            for which in 0..2 {
                let psi = |x: &V4| conformal_spinor_wave(&p, &k, m, which, x).unwrap();
                let res = dirac_residual(&p, m, psi, &RA).unwrap();
                let scale = cvnorm(&psi(&RA));
                assert!(
                    cvnorm(&res) < 1e-6 * (1.0 + (1.0 + m) * scale),
                    "g={g} which={which} res {:.3e}",
                    cvnorm(&res)
                );
            }
        }
    }

    #[test]
    fn weight_defect_matches_closed_form() {
        let p = par(1.0);
        let m = 1.0;
        let k = on_shell(m, 0.3, -0.2, 0.1);
        for &alpha in &[1.0, 2.0, 0.5] {
            for which in 0..2 {
                let psi = |x: &V4| spinor_wave_alpha(&p, &k, m, alpha, which, x).unwrap();
                let res = dirac_residual(&p, m, psi, &RA).unwrap();
                let closed = alpha_defect_closed(&p, &k, m, alpha, which, &RA).unwrap();
                let diff = cvnorm(&cvsub(&res, &closed));
                assert!(
                    diff < 1e-6 * (1.0 + cvnorm(&closed)),
                    "alpha={alpha} which={which} diff {diff:.3e}"
                );
                // the defect itself is an order-one object away from 3/2
                assert!(cvnorm(&closed) > 1e-2 * (alpha - 1.5).abs());
            }
        }
    }

    #[test]
    fn residual_transforms_under_representation_change() {
        let p = par(0.8);
        let m = 1.0;
        let k = on_shell(m, 0.3, 0.0, 0.2);
        let gs = dirac_gammas();
        let u = givens_unitary(0, 2, 0.7, 0.3);
        let gs2 = similar_set(&u, &gs);
        // psi in the standard rep, with a deliberately wrong weight so the
        // residual is nonzero
        let alpha = 1.0;
        let psi = |x: &V4| spinor_wave_alpha(&p, &k, m, alpha, 0, x).unwrap();
        let psi2 = |x: &V4| cmatvec(&u, &psi(x));
        let res = dirac_residual_with(&p, m, &gs, psi, &RA).unwrap();
        let res2 = dirac_residual_with(&p, m, &gs2, psi2, &RA).unwrap();
        let want = cmatvec(&u, &res);
        let diff = cvnorm(&cvsub(&res2, &want));
        assert!(diff < 1e-9 * (1.0 + cvnorm(&want)), "diff {diff:.3e}");
        assert!(cvnorm(&res) > 1e-3);
    }

    #[test]
    fn current_is_conserved_on_solutions() {
        for &g in &[0.5, 1.2] {
            let p = par(g);
            let m = 1.0;
            let k = on_shell(m, 0.4, 0.1, -0.3);
            let psi = |x: &V4| conformal_spinor_wave(&p, &k, m, 0, x).unwrap();
            let div = spinor_current_divergence(&p, psi, &RA).unwrap();
            let cur = spinor_current(&p, psi, &RA).unwrap();
            let scale: f64 = cur.iter().map(|x| x.abs()).sum();
            assert!(div.abs() < 1e-5 * (1.0 + scale), "g={g} div {div:.3e}");
        }
    }

    #[test]
    fn image_gamma_contraction_identity() {
        for &g in &[0.5, 1.2, -0.7] {
            let p = par(g);
            let t = sigma(&p, &RA).unwrap();
            let (lhs, rhs) = quasi_gamma_identity(&p, &t).unwrap();
            let diff = cnorm_inf(&csub(&lhs, &rhs));
            assert!(
                diff < 1e-10 * (1.0 + cnorm_inf(&rhs)),
                "g={g} diff {diff:.3e}"
            );
        }
    }

    #[test]
    fn quasi_mode_residual_shrinks_like_g_squared() {
        let m = 1.0;
        let k = on_shell(m, 0.3, 0.0, 0.0);
        let res_at = |g: f64| -> f64 {
            let p = par(g);
            let psi = |x: &V4| quasi_spinor_mode(&p, &k, m, 0, x).unwrap();
            cvnorm(&dirac_residual(&p, m, psi, &RA).unwrap())
        };
        let r1 = res_at(0.2);
        let r2 = res_at(0.1);
        let ratio = r1 / r2;
        assert!(
            ratio > 3.0 && ratio < 5.0,
            "ratio {ratio:.3} ({r1:.3e} vs {r2:.3e})"
        );
    }

    #[test]
    fn spacelike_points_are_refused() {
        let p = par(0.8);
        let m = 1.0;
        let k = on_shell(m, 0.2, 0.0, 0.0);
        let psi = |x: &V4| conformal_spinor_wave(&p, &k, m, 0, x).unwrap();
        assert!(dirac_residual(&p, m, psi, &[0.3, 2.0, 1.0, 0.5]).is_err());
    }
}

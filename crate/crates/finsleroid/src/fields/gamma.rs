//! Gamma-matrix algebra: the standard representation, curved-index gammas
//! built from the invariant frame, the spinor connection term, and on-shell
//! plane-wave amplitudes.
//!
//! Only the anticommutator {gamma_P, gamma_Q} = 2 a_PQ is fixed; everything
//! else must be representation independent, which the tests enforce through
//! a unitary similarity.

use num_complex::Complex64;

use crate::core::frames::invariant_frame;
use crate::core::metric::metric_inverse;
use crate::core::param::DeformParam;
use crate::support::linalg::{cadd, cdagger, cmatmul, cscale, czeros, CM4, CV4, V4};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Flat gamma matrices with an upper frame index, standard representation:
/// gamma^0 = diag(1,1,-1,-1), gamma^a = [[0, sigma^a], [-sigma^a, 0]].
pub fn dirac_gammas() -> [CM4; 4] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let g0 = [
        [one, z, z, z],
        [z, one, z, z],
        [z, z, -one, z],
        [z, z, z, -one],
    ];
    let g1 = [
        [z, z, z, one],
        [z, z, one, z],
        [z, -one, z, z],
        [-one, z, z, z],
    ];
    let g2 = [
        [z, z, z, -i],
        [z, z, i, z],
        [z, i, z, z],
        [-i, z, z, z],
    ];
    let g3 = [
        [z, z, one, z],
        [z, z, z, -one],
        [-one, z, z, z],
        [z, one, z, z],
    ];
    [g0, g1, g2, g3]
}

/// Lower-index companions gamma_P = a_PQ gamma^Q.
pub fn lower_gammas(gs: &[CM4; 4]) -> [CM4; 4] {
    let m1 = c(-1.0, 0.0);
    [gs[0], cscale(&gs[1], m1), cscale(&gs[2], m1), cscale(&gs[3], m1)]
}

/// Max-norm defect of {gamma^P, gamma^Q} - 2 a^PQ I over all index pairs.
pub fn anticommutator_defect(gs: &[CM4; 4]) -> f64 {
    let mut worst: f64 = 0.0;
    for p in 0..4 {
        for q in 0..4 {
            let anti = cadd(&cmatmul(&gs[p], &gs[q]), &cmatmul(&gs[q], &gs[p]));
            let a = if p != q {
                0.0
            } else if p == 0 {
                1.0
            } else {
                -1.0
            };
            for r in 0..4 {
                for s in 0..4 {
                    let expect = if r == s { c(2.0 * a, 0.0) } else { c(0.0, 0.0) };
                    worst = worst.max((anti[r][s] - expect).norm());
                }
            }
        }
    }
    worst
}

/// Contraction gamma^P k_P with a covector k.
pub fn gamma_slash(gs: &[CM4; 4], k: &V4) -> CM4 {
    let mut out = czeros();
    for p in 0..4 {
        for r in 0..4 {
            for s in 0..4 {
                out[r][s] += gs[p][r][s] * c(k[p], 0.0);
            }
        }
    }
    out
}

/// Unitary plane rotation in spinor components (i, j) with an extra phase on
/// component i; building block for representation-independence checks.
pub fn givens_unitary(i: usize, j: usize, theta: f64, phase: f64) -> CM4 {
    let mut u = crate::support::linalg::cidentity();
    let e = c(phase.cos(), phase.sin());
    u[i][i] = e * c(theta.cos(), 0.0);
    u[i][j] = e * c(theta.sin(), 0.0);
    u[j][i] = c(-theta.sin(), 0.0);
    u[j][j] = c(theta.cos(), 0.0);
    u
}

/// Similarity transform U A U^dagger of a matrix, and of a whole gamma set.
pub fn similar(u: &CM4, a: &CM4) -> CM4 {
    cmatmul(&cmatmul(u, a), &cdagger(u))
}

pub fn similar_set(u: &CM4, gs: &[CM4; 4]) -> [CM4; 4] {
    [
        similar(u, &gs[0]),
        similar(u, &gs[1]),
        similar(u, &gs[2]),
        similar(u, &gs[3]),
    ]
}

/// Curved upper-index gammas gamma^p(R) = e_P^p(R) gamma^P on the future
/// timelike sector; they close on the direction-dependent inverse metric.
pub fn curved_gammas(par: &DeformParam, r: &V4, gs: &[CM4; 4]) -> Result<[CM4; 4]> {
    let fr = invariant_frame(par, r)?;
    let mut out = [czeros(); 4];
    for p in 0..4 {
        for cap_p in 0..4 {
            let w = c(fr.inverse[cap_p][p], 0.0);
            for a in 0..4 {
                for b in 0..4 {
                    out[p][a][b] += w * gs[cap_p][a][b];
                }
            }
        }
    }
    Ok(out)
}

/// Image-side gammas gamma^i(t) = n^{ij} f_j^P gamma_P for the
/// quasi-pseudoeuclidean picture.
pub fn image_gammas(par: &DeformParam, t: &V4, gs: &[CM4; 4]) -> Result<[CM4; 4]> {
    let n_up = crate::quasi::n_upper(par, t)?;
    let (f, _) = crate::quasi::quasi_frame(par, t)?;
    let lows = lower_gammas(gs);
    let mut out = [czeros(); 4];
    for i in 0..4 {
        for j in 0..4 {
            for cap_p in 0..4 {
                let w = c(n_up[i][j] * f[cap_p][j], 0.0);
                for a in 0..4 {
                    for b in 0..4 {
                        out[i][a][b] += w * lows[cap_p][a][b];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Two independent on-shell amplitudes: columns of (gamma.k - m), which span
/// the kernel of (gamma.k + m) when k_P k^P = m^2.
pub fn spinor_amplitudes(gs: &[CM4; 4], k: &V4, m: f64) -> Result<[CV4; 2]> {
    if m <= 0.0 {
        return Err(Error::Config(
            "spinor amplitudes need a strictly positive mass shell".into(),
        ));
    }
    let shell = k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3] - m * m;
    let scale = k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3] + m * m;
    if shell.abs() > 1e-12 * scale {
        return Err(Error::OffShell(shell.abs()));
    }
    let slash = gamma_slash(gs, k);
    let mut mat = slash;
    for d in 0..4 {
        mat[d][d] -= c(m, 0.0);
    }
    // columns of mat span a 2-dimensional space; pick the two with the best
    // mutual independence via modified Gram-Schmidt
    let mut cols: Vec<CV4> = (0..4)
        .map(|j| [mat[0][j], mat[1][j], mat[2][j], mat[3][j]])
        .collect();
    cols.sort_by(|a, b| {
        crate::support::linalg::cvnorm(b)
            .partial_cmp(&crate::support::linalg::cvnorm(a))
            .unwrap()
    });
    let mut basis: Vec<CV4> = Vec::new();
    for col in cols {
        let mut v = col;
        for b in &basis {
            let mut proj = c(0.0, 0.0);
            for d in 0..4 {
                proj += b[d].conj() * v[d];
            }
            for d in 0..4 {
                v[d] -= proj * b[d];
            }
        }
        let n = crate::support::linalg::cvnorm(&v);
        if n > 1e-10 * (m + scale.sqrt()) {
            let inv = c(1.0 / n, 0.0);
            basis.push([v[0] * inv, v[1] * inv, v[2] * inv, v[3] * inv]);
        }
        if basis.len() == 2 {
            break;
        }
    }
    if basis.len() != 2 {
        return Err(Error::Branch("amplitude space is not 2-dimensional"));
    }
    Ok([basis[0], basis[1]])
}

/// Curved anticommutator defect max |{gamma^p, gamma^q} - 2 g^{pq} I|.
pub fn curved_anticommutator_defect(par: &DeformParam, r: &V4, gs: &[CM4; 4]) -> Result<f64> {
    let cg = curved_gammas(par, r, gs)?;
    let gi = metric_inverse(par, r);
    let mut worst: f64 = 0.0;
    for p in 0..4 {
        for q in 0..4 {
            let anti = cadd(&cmatmul(&cg[p], &cg[q]), &cmatmul(&cg[q], &cg[p]));
            for a in 0..4 {
                for b in 0..4 {
                    let expect = if a == b {
                        c(2.0 * gi[p][q], 0.0)
                    } else {
                        c(0.0, 0.0)
                    };
                    worst = worst.max((anti[a][b] - expect).norm());
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::linalg::{cnorm_inf, csub};

    #[test]
    fn flat_algebra_exact() {
        let gs = dirac_gammas();
        assert_eq!(anticommutator_defect(&gs), 0.0);
    }

    #[test]
    fn lowered_algebra() {
        // gamma_P gamma_Q + gamma_Q gamma_P = 2 a_PQ as well
        let gs = lower_gammas(&dirac_gammas());
        assert_eq!(anticommutator_defect(&gs), 0.0);
    }

    #[test]
    fn similarity_preserves_algebra() {
        let u = cmatmul(
            &givens_unitary(0, 2, 0.7, 0.3),
            &givens_unitary(1, 3, -0.4, 1.1),
        );
        let gs = similar_set(&u, &dirac_gammas());
        assert!(anticommutator_defect(&gs) < 1e-14);
    }

    #[test]
    fn curved_gammas_close_on_inverse_metric() {
        let par = DeformParam::new(1.2).unwrap();
        let r = [2.0, 0.4, 0.3, 0.1];
        let gs = dirac_gammas();
        let d = curved_anticommutator_defect(&par, &r, &gs).unwrap();
        assert!(d < 1e-12, "defect {d:.3e}");
    }

    #[test]
    fn image_gammas_close_on_image_metric() {
        let par = DeformParam::new(0.8).unwrap();
        let t = crate::quasi::sigma(&par, &[2.0, 0.4, 0.3, 0.1]).unwrap();
        let gs = dirac_gammas();
        let ig = image_gammas(&par, &t, &gs).unwrap();
        let n_up = crate::quasi::n_upper(&par, &t).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let anti = cadd(&cmatmul(&ig[i], &ig[j]), &cmatmul(&ig[j], &ig[i]));
                for a in 0..4 {
                    for b in 0..4 {
                        let expect = if a == b {
                            Complex64::new(2.0 * n_up[i][j], 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        worst = worst.max((anti[a][b] - expect).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-12, "defect {worst:.3e}");
    }

    #[test]
    fn amplitudes_annihilated_on_shell() {
        let gs = dirac_gammas();
        let m = 1.0;
        let k = [(m * m + 1.15f64).sqrt(), 0.5, -0.3, 0.9];
        let amps = spinor_amplitudes(&gs, &k, m).unwrap();
        let mut op = gamma_slash(&gs, &k);
        for d in 0..4 {
            op[d][d] += Complex64::new(m, 0.0);
        }
        for u in amps {
            let v = crate::support::linalg::cmatvec(&op, &u);
            assert!(crate::support::linalg::cvnorm(&v) < 1e-12);
        }
    }

    #[test]
    fn rest_frame_amplitudes_span_lower_block() {
        let gs = dirac_gammas();
        let amps = spinor_amplitudes(&gs, &[1.0, 0.0, 0.0, 0.0], 1.0).unwrap();
        for u in amps {
            assert!(u[0].norm() < 1e-14 && u[1].norm() < 1e-14);
            assert!((u[2].norm() + u[3].norm()) > 0.9);
        }
    }

    #[test]
    fn off_shell_and_massless_rejected() {
        let gs = dirac_gammas();
        assert!(matches!(
            spinor_amplitudes(&gs, &[2.0, 0.5, 0.0, 0.0], 1.0),
            Err(crate::Error::OffShell(_))
        ));
        assert!(matches!(
            spinor_amplitudes(&gs, &[1.0, 1.0, 0.0, 0.0], 0.0),
            Err(crate::Error::Config(_))
        ));
    }

    #[test]
    fn flat_limit_curved_equals_flat() {
        let par = DeformParam::new(0.0).unwrap();
        let gs = dirac_gammas();
        let cg = curved_gammas(&par, &[2.0, 0.4, 0.3, 0.1], &gs).unwrap();
        for p in 0..4 {
            assert!(cnorm_inf(&csub(&cg[p], &gs[p])) < 1e-14);
        }
    }
}

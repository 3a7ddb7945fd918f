//! Fixed-size 4x4 real and complex linear algebra.
//!
//! Everything in this crate lives in four dimensions, so the matrices are
//! plain arrays: no allocation, no panics on the hot path, explicit pivoting
//! where an inverse is taken.

use num_complex::Complex64;

pub type V4 = [f64; 4];
pub type M4 = [[f64; 4]; 4];
pub type CV4 = [Complex64; 4];
pub type CM4 = [[Complex64; 4]; 4];

/// Minkowski matrix diag(1,-1,-1,-1). Numerically identical with both
/// indices up or both down.
pub const MINK: M4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
];

pub fn zeros() -> M4 {
    [[0.0; 4]; 4]
}

pub fn identity() -> M4 {
    let mut m = zeros();
    for i in 0..4 {
        m[i][i] = 1.0;
    }
    m
}

pub fn add(a: &M4, b: &M4) -> M4 {
    let mut r = zeros();
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = a[i][j] + b[i][j];
        }
    }
    r
}

pub fn sub(a: &M4, b: &M4) -> M4 {
    let mut r = zeros();
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = a[i][j] - b[i][j];
        }
    }
    r
}

pub fn scale(a: &M4, s: f64) -> M4 {
    let mut r = *a;
    for row in r.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    r
}

pub fn matmul(a: &M4, b: &M4) -> M4 {
    let mut r = zeros();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..4 {
                r[i][j] += aik * b[k][j];
            }
        }
    }
    r
}

pub fn matvec(a: &M4, x: &V4) -> V4 {
    let mut r = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i] += a[i][j] * x[j];
        }
    }
    r
}

pub fn transpose(a: &M4) -> M4 {
    let mut r = zeros();
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = a[j][i];
        }
    }
    r
}

pub fn vdot(a: &V4, b: &V4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Minkowski product a.e.b with e = diag(1,-1,-1,-1).
pub fn mink_dot(a: &V4, b: &V4) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Lower (or raise) an index with the Minkowski matrix.
pub fn mink_flip(a: &V4) -> V4 {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn vsub(a: &V4, b: &V4) -> V4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn vadd(a: &V4, b: &V4) -> V4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn vscale(a: &V4, s: f64) -> V4 {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

pub fn vnorm_inf(a: &V4) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn norm_inf(a: &M4) -> f64 {
    a.iter().fold(0.0f64, |m, row| {
        row.iter().fold(m, |mm, x| mm.max(x.abs()))
    })
}

/// Determinant by cofactor expansion on 2x2 minors (exact flop count, no
/// pivot growth issues at this size).
pub fn det(a: &M4) -> f64 {
    let m01 = a[2][0] * a[3][1] - a[2][1] * a[3][0];
    let m02 = a[2][0] * a[3][2] - a[2][2] * a[3][0];
    let m03 = a[2][0] * a[3][3] - a[2][3] * a[3][0];
    let m12 = a[2][1] * a[3][2] - a[2][2] * a[3][1];
    let m13 = a[2][1] * a[3][3] - a[2][3] * a[3][1];
    let m23 = a[2][2] * a[3][3] - a[2][3] * a[3][2];

    let c0 = a[1][1] * m23 - a[1][2] * m13 + a[1][3] * m12;
    let c1 = a[1][0] * m23 - a[1][2] * m03 + a[1][3] * m02;
    let c2 = a[1][0] * m13 - a[1][1] * m03 + a[1][3] * m01;
    let c3 = a[1][0] * m12 - a[1][1] * m02 + a[1][2] * m01;

    a[0][0] * c0 - a[0][1] * c1 + a[0][2] * c2 - a[0][3] * c3
}

/// Inverse by Gauss-Jordan with partial pivoting. Returns None when the
/// pivot collapses below 1e-300 (effectively singular).
pub fn inverse(a: &M4) -> Option<M4> {
    let mut aug = [[0.0f64; 8]; 4];
    for i in 0..4 {
        aug[i][..4].copy_from_slice(&a[i]);
        aug[i][4 + i] = 1.0;
    }
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if aug[r][col].abs() > aug[piv][col].abs() {
                piv = r;
            }
        }
        if aug[piv][col].abs() < 1e-300 {
            return None;
        }
        aug.swap(col, piv);
        let d = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= d;
        }
        for r in 0..4 {
            if r == col {
                continue;
            }
            let f = aug[r][col];
            if f == 0.0 {
                continue;
            }
            for c in 0..8 {
                aug[r][c] -= f * aug[col][c];
            }
        }
    }
    let mut inv = zeros();
    for i in 0..4 {
        inv[i].copy_from_slice(&aug[i][4..]);
    }
    Some(inv)
}

/// Eigenvalues of a symmetric 4x4 matrix by cyclic Jacobi rotations,
/// returned in ascending order. Used for signature checks only.
pub fn sym_eigenvalues(a: &M4) -> V4 {
    let mut m = *a;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..4 {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev = [m[0][0], m[1][1], m[2][2], m[3][3]];
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

// ---- complex helpers (gamma-matrix algebra, spinors) ----

pub fn czeros() -> CM4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn cidentity() -> CM4 {
    let mut m = czeros();
    for i in 0..4 {
        m[i][i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn cmatmul(a: &CM4, b: &CM4) -> CM4 {
    let mut r = czeros();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..4 {
                r[i][j] += aik * b[k][j];
            }
        }
    }
    r
}

pub fn cmatvec(a: &CM4, x: &CV4) -> CV4 {
    let mut r = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i] += a[i][j] * x[j];
        }
    }
    r
}

pub fn cadd(a: &CM4, b: &CM4) -> CM4 {
    let mut r = *a;
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] += b[i][j];
        }
    }
    r
}

pub fn csub(a: &CM4, b: &CM4) -> CM4 {
    let mut r = *a;
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] -= b[i][j];
        }
    }
    r
}

pub fn cscale(a: &CM4, s: Complex64) -> CM4 {
    let mut r = *a;
    for row in r.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    r
}

/// Conjugate transpose.
pub fn cdagger(a: &CM4) -> CM4 {
    let mut r = czeros();
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = a[j][i].conj();
        }
    }
    r
}

pub fn cnorm_inf(a: &CM4) -> f64 {
    a.iter().fold(0.0f64, |m, row| {
        row.iter().fold(m, |mm, x| mm.max(x.norm()))
    })
}

pub fn cvnorm(a: &CV4) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn cvsub(a: &CV4, b: &CV4) -> CV4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn cvadd(a: &CV4, b: &CV4) -> CV4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn cvscale(a: &CV4, s: Complex64) -> CV4 {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

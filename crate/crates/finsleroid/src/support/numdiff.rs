//! Central finite differences with Richardson extrapolation.
//!
//! All derivative-defined tensors in this crate (metric, Cartan, curvature,
//! Christoffel symbols, field-equation residuals) have an FD path built from
//! these stencils, used either as the primary construction or as the
//! independent oracle against a closed form. Stencils are 4th order; the
//! `_r` variants add one Richardson level (two step sizes, h and h/2),
//! giving ~6th order on smooth data.

use std::ops::{Add, Sub};

use super::linalg::{M4, V4};

/// Scalar-like values the stencils accept (f64 and Complex64).
pub trait Lin: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn scl(self, s: f64) -> Self;
    fn zero() -> Self;
}

impl Lin for f64 {
    fn scl(self, s: f64) -> Self {
        self * s
    }
    fn zero() -> Self {
        0.0
    }
}

impl Lin for num_complex::Complex64 {
    fn scl(self, s: f64) -> Self {
        self * s
    }
    fn zero() -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
}

/// Step sizes balancing truncation (h^4) against rounding (eps/h^k) for a
/// k-th derivative: h ~ eps^(1/(4+k)).
pub fn step1(scale: f64) -> f64 {
    6.0e-4 * scale.max(1e-8)
}

pub fn step2(scale: f64) -> f64 {
    2.0e-3 * scale.max(1e-8)
}

pub fn step3(scale: f64) -> f64 {
    6.0e-3 * scale.max(1e-8)
}

/// 4th-order central first derivative.
pub fn deriv1<T: Lin, F: Fn(f64) -> T>(f: F, x: f64, h: f64) -> T {
    let a = f(x + h) - f(x - h);
    let b = f(x + 2.0 * h) - f(x - 2.0 * h);
    (a.scl(8.0) - b).scl(1.0 / (12.0 * h))
}

/// Richardson-extrapolated first derivative: (16 D(h/2) - D(h)) / 15.
pub fn deriv1_r<T: Lin, F: Fn(f64) -> T + Copy>(f: F, x: f64, h: f64) -> T {
    let d_h = deriv1(f, x, h);
    let d_h2 = deriv1(f, x, h / 2.0);
    (d_h2.scl(16.0) - d_h).scl(1.0 / 15.0)
}

/// 4th-order central second derivative.
pub fn deriv2<T: Lin, F: Fn(f64) -> T>(f: F, x: f64, h: f64) -> T {
    let c0 = f(x).scl(-30.0);
    let c1 = (f(x + h) + f(x - h)).scl(16.0);
    let c2 = (f(x + 2.0 * h) + f(x - 2.0 * h)).scl(-1.0);
    (c0 + c1 + c2).scl(1.0 / (12.0 * h * h))
}

pub fn deriv2_r<T: Lin, F: Fn(f64) -> T + Copy>(f: F, x: f64, h: f64) -> T {
    let d_h = deriv2(f, x, h);
    let d_h2 = deriv2(f, x, h / 2.0);
    (d_h2.scl(16.0) - d_h).scl(1.0 / 15.0)
}

fn shifted(x: &V4, p: usize, dx: f64) -> V4 {
    let mut y = *x;
    y[p] += dx;
    y
}

/// Partial derivative of f along coordinate p.
pub fn partial<T: Lin, F: Fn(&V4) -> T>(f: F, x: &V4, p: usize, h: f64) -> T {
    deriv1(|s| f(&shifted(x, p, s - x[p])), x[p], h)
}

pub fn partial_r<T: Lin, F: Fn(&V4) -> T + Copy>(f: F, x: &V4, p: usize, h: f64) -> T {
    deriv1_r(|s| f(&shifted(x, p, s - x[p])), x[p], h)
}

/// Gradient of a scalar function of four variables.
pub fn gradient<T: Lin, F: Fn(&V4) -> T + Copy>(f: F, x: &V4, h: f64) -> [T; 4] {
    let mut g = [T::zero(); 4];
    for (p, gp) in g.iter_mut().enumerate() {
        *gp = partial_r(f, x, p, h);
    }
    g
}

/// Jacobian of a four-component map, indexed jac[i][p] = d map^i / d x^p.
pub fn jacobian<F: Fn(&V4) -> V4 + Copy>(map: F, x: &V4, h: f64) -> M4 {
    let mut j = [[0.0; 4]; 4];
    for p in 0..4 {
        for i in 0..4 {
            j[i][p] = partial_r(|y: &V4| map(y)[i], x, p, h);
        }
    }
    j
}

/// Hessian of a scalar function, 4th-order diagonal stencils and nested
/// 4th-order stencils for the mixed entries, one Richardson level on both.
pub fn hessian<F: Fn(&V4) -> f64 + Copy>(f: F, x: &V4, h: f64) -> M4 {
    let mut hs = [[0.0; 4]; 4];
    for p in 0..4 {
        hs[p][p] = deriv2_r(|s| f(&shifted(x, p, s - x[p])), x[p], h);
        for q in p + 1..4 {
            let dq = |y: &V4| partial_r(f, y, q, h);
            let v = deriv1_r(|s| dq(&shifted(x, p, s - x[p])), x[p], h);
            hs[p][q] = v;
            hs[q][p] = v;
        }
    }
    hs
}

/// Third-derivative tensor T[p][q][r] = d^3 f / dx^p dx^q dx^r, built as an
/// outer first-derivative stencil over Hessians at shifted points. The outer
/// step should be larger than the inner one (noise in the inner Hessian is
/// amplified by 1/h_outer).
pub fn third_tensor<F: Fn(&V4) -> f64 + Copy>(
    f: F,
    x: &V4,
    h_outer: f64,
    h_inner: f64,
) -> [[[f64; 4]; 4]; 4] {
    let mut t = [[[0.0; 4]; 4]; 4];
    for r in 0..4 {
        let hpq_at = |s: f64| hessian(f, &shifted(x, r, s - x[r]), h_inner);
        let d_at = |h: f64| {
            let hm2 = hpq_at(x[r] - 2.0 * h);
            let hm1 = hpq_at(x[r] - h);
            let hp1 = hpq_at(x[r] + h);
            let hp2 = hpq_at(x[r] + 2.0 * h);
            let mut d = [[0.0; 4]; 4];
            for p in 0..4 {
                for q in 0..4 {
                    d[p][q] =
                        (8.0 * (hp1[p][q] - hm1[p][q]) - (hp2[p][q] - hm2[p][q])) / (12.0 * h);
                }
            }
            d
        };
        // Richardson across the outer layer: the plain truncation grows like
        // (h / distance-to-cone)^4 and can breach 1e-5 on near-cone draws
        let coarse = d_at(h_outer);
        let fine = d_at(0.5 * h_outer);
        for p in 0..4 {
            for q in 0..4 {
                t[p][q][r] = (16.0 * fine[p][q] - coarse[p][q]) / 15.0;
            }
        }
    }
    // symmetrize: the tensor is totally symmetric for smooth f, averaging
    // cancels part of the stencil noise
    let mut sym = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for r in 0..4 {
                sym[p][q][r] =
                    (t[p][q][r] + t[q][r][p] + t[r][p][q] + t[p][r][q] + t[q][p][r] + t[r][q][p])
                        / 6.0;
            }
        }
    }
    sym
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_of_exp() {
        let f = |x: f64| (1.5 * x).exp();
        let d = deriv1_r(f, 0.7, step1(1.0));
        let exact = 1.5 * (1.5f64 * 0.7).exp();
        assert!((d - exact).abs() / exact < 1e-11, "d = {d}, exact = {exact}");
    }

    #[test]
    fn second_derivative_of_sin() {
        let f = |x: f64| x.sin();
        let d = deriv2_r(f, 1.1, step2(1.0));
        let exact = -(1.1f64).sin();
        assert!((d - exact).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn gradient_and_hessian_of_quartic() {
        // f = (x0^2 - x1 x2 + x3)^2 has polynomial derivatives
        let f = |x: &V4| {
            let u = x[0] * x[0] - x[1] * x[2] + x[3];
            u * u
        };
        let x = [1.2, 0.7, -0.4, 0.3];
        let u = x[0] * x[0] - x[1] * x[2] + x[3];
        let du = [2.0 * x[0], -x[2], -x[1], 1.0];
        let g = gradient(f, &x, step1(1.0));
        for p in 0..4 {
            let exact = 2.0 * u * du[p];
            assert!((g[p] - exact).abs() < 1e-9, "grad[{p}] = {}", g[p]);
        }
        let hs = hessian(f, &x, step2(1.0));
        // H_pq = 2 du_p du_q + 2 u d2u_pq, with d2u nonzero only on (0,0),(1,2)
        for p in 0..4 {
            for q in 0..4 {
                let mut exact = 2.0 * du[p] * du[q];
                if p == 0 && q == 0 {
                    exact += 2.0 * u * 2.0;
                }
                if (p == 1 && q == 2) || (p == 2 && q == 1) {
                    exact += 2.0 * u * (-1.0);
                }
                assert!(
                    (hs[p][q] - exact).abs() < 1e-7,
                    "H[{p}][{q}] = {}, exact {exact}",
                    hs[p][q]
                );
            }
        }
    }

    #[test]
    fn third_tensor_of_cubic() {
        // f = x0 x1 x2 + x3^3: third derivatives are 1 on permutations of
        // (0,1,2) and 6 on (3,3,3), zero elsewhere
        let f = |x: &V4| x[0] * x[1] * x[2] + x[3] * x[3] * x[3];
        let x = [0.9, -0.3, 0.5, 0.2];
        let t = third_tensor(f, &x, 10.0 * step3(1.0), step3(1.0));
        for p in 0..4 {
            for q in 0..4 {
                for r in 0..4 {
                    let mut idx = [p, q, r];
                    idx.sort_unstable();
                    let exact = if idx == [0, 1, 2] {
                        1.0
                    } else if idx == [3, 3, 3] {
                        6.0
                    } else {
                        0.0
                    };
                    assert!(
                        (t[p][q][r] - exact).abs() < 1e-6,
                        "T[{p}][{q}][{r}] = {}",
                        t[p][q][r]
                    );
                }
            }
        }
    }

    #[test]
    fn complex_partial() {
        use num_complex::Complex64;
        let f = |x: &V4| Complex64::new(0.0, x[0] * x[1]).exp();
        let x = [0.8, 0.5, 0.0, 0.0];
        let d = partial_r(f, &x, 0, step1(1.0));
        let exact = Complex64::new(0.0, x[1]) * Complex64::new(0.0, x[0] * x[1]).exp();
        assert!((d - exact).norm() < 1e-10);
    }
}

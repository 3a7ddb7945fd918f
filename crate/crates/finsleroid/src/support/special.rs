//! Special functions computed in-module: the gamma function, the Bessel
//! function J1, and the Macdonald functions K0/K1 by three independent
//! routes (power series, the cosh-integral representation, and a Laplace
//! integral representation). The routes cross-validate each other in the
//! verification suite, so none of them is trusted alone.

use super::quad::{gauss_legendre, integrate_adaptive, integrate_gl};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Gamma function for positive argument, Lanczos approximation (g = 7,
/// 9 coefficients), relative error below 1e-13 on the range used here.
pub fn gamma_fn(x: f64) -> f64 {
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x));
    }
    let z = x - 1.0;
    let mut a = C[0];
    for (k, &c) in C.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + 7.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
}

/// Bessel J1. Power series for small argument, spectrally convergent
/// trapezoid rule on the angular integral representation otherwise.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    if ax < 1.0 {
        // sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!)
        let q = 0.25 * ax * ax;
        let mut term = 0.5 * ax;
        let mut sum = term;
        for k in 1..30 {
            term *= -q / (k as f64 * (k as f64 + 1.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-30) {
                break;
            }
        }
        return sign * sum;
    }
    // J1(x) = (1/pi) int_0^pi cos(theta - x sin theta) dtheta; the extended
    // integrand is even and 2pi-periodic, so the endpoint-halved trapezoid
    // rule converges spectrally
    let n = 96usize;
    let hstep = std::f64::consts::PI / n as f64;
    let f = |theta: f64| (theta - ax * theta.sin()).cos();
    let mut s = 0.5 * (f(0.0) + f(std::f64::consts::PI));
    for k in 1..n {
        s += f(k as f64 * hstep);
    }
    sign * s * hstep / std::f64::consts::PI
}

/// Macdonald function K_nu (nu = 0 or 1), best route for the argument:
/// power series below z = 1, Laplace representation above (its e^{-z}
/// prefactor keeps the accuracy relative, not absolute).
pub fn bessel_k(nu: u8, z: f64) -> f64 {
    assert!(nu <= 1);
    if z <= 1.0 {
        bessel_k_series(nu, z)
    } else {
        bessel_k_laplace_rep(nu, z).expect("laplace-rep quadrature converges for z > 1")
    }
}

/// Power-series route (ascending series around z = 0; truncation error is
/// negligible for z <= 2).
pub fn bessel_k_series(nu: u8, z: f64) -> f64 {
    assert!(z > 0.0);
    let q = 0.25 * z * z;
    let lg = (0.5 * z).ln();
    match nu {
        0 => {
            // K0 = -(ln(z/2) + gamma_E) I0 + sum_{k>=1} q^k / (k!)^2 * H_k
            let mut i0 = 1.0;
            let mut term = 1.0;
            let mut hsum = 0.0;
            let mut corr = 0.0;
            for k in 1..60 {
                term *= q / ((k * k) as f64);
                i0 += term;
                hsum += 1.0 / k as f64;
                corr += term * hsum;
                if term < 1e-19 {
                    break;
                }
            }
            -(lg + EULER_GAMMA) * i0 + corr
        }
        1 => {
            // K1 = 1/z + ln(z/2) I1 - (z/4) sum_k (psi(k+1)+psi(k+2)) q^k / (k!(k+1)!)
            let mut i1 = 0.5 * z;
            let mut term = 0.5 * z;
            let mut s = term * (2.0 * -EULER_GAMMA + 1.0); // k=0: psi(1)+psi(2) = -2g + 1
            let mut h_k = 0.0;
            let mut h_k1 = 1.0;
            for k in 1..60 {
                term *= q / (k as f64 * (k as f64 + 1.0));
                i1 += term;
                h_k += 1.0 / k as f64;
                h_k1 += 1.0 / (k as f64 + 1.0);
                s += term * (-2.0 * EULER_GAMMA + h_k + h_k1);
                if term < 1e-19 {
                    break;
                }
            }
            1.0 / z + lg * i1 - 0.5 * s
        }
        _ => unreachable!(),
    }
}

/// Cosh-integral route: K_nu(z) = int_0^inf e^{-z cosh u} cosh(nu u) du,
/// truncated where the integrand underflows, adaptive quadrature inside.
pub fn bessel_k_cosh_rep(nu: u8, z: f64) -> Result<f64, String> {
    if z <= 0.0 {
        return Err(format!("argument must be positive, got {z}"));
    }
    let u_max = (746.0 / z).max(1.5).acosh() + 0.5;
    let f = move |u: f64| {
        let e = -z * u.cosh();
        if e < -745.0 {
            0.0
        } else {
            e.exp() * (nu as f64 * u).cosh()
        }
    };
    integrate_adaptive(f, 0.0, u_max, 1e-13)
}

/// Laplace-integral route:
/// K_nu(z) = sqrt(pi/2z) e^{-z} / Gamma(nu + 1/2) *
///           int_0^inf e^{-s} s^{nu-1/2} (1 + s/2z)^{nu-1/2} ds,
/// with s = w^2 substituted so the integrand is smooth at the origin.
pub fn bessel_k_laplace_rep(nu: u8, z: f64) -> Result<f64, String> {
    if z <= 0.0 {
        return Err(format!("argument must be positive, got {z}"));
    }
    let exponent = nu as f64 - 0.5;
    let f = move |w: f64| {
        let s = w * w;
        2.0 * (-s).exp() * s.powf(nu as f64) * (1.0 + s / (2.0 * z)).powf(exponent)
    };
    // Gaussian decay: [0, 9] keeps the tail below 1e-35
    let rule = gauss_legendre(120);
    let integral = integrate_gl(f, 0.0, 9.0, &rule);
    let prefactor = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp()
        / gamma_fn(nu as f64 + 0.5);
    Ok(prefactor * integral)
}

/// d K1 / dz = -K1/z - K0 (derivative recurrence used as a cross-check).
pub fn bessel_k1_derivative(z: f64) -> f64 {
    -bessel_k(1, z) / z - bessel_k(0, z)
}

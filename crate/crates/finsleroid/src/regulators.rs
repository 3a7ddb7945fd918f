//! Momentum-space regulator weights. The deformation parameter g doubles as
//! the damping strength: every weight carries a factor exp(-const g^2 ...),
//! so the g -> 0 limit restores unweighted flat integrals but the
//! normalization constants themselves blow up. Requests at g = 0 are refused
//! rather than extrapolated.

use crate::core::norm::{co_cone_factors, fhf};
use crate::core::param::DeformParam;
use crate::support::linalg::V4;
use crate::support::quad::integrate_0_inf;
use crate::support::special::{bessel_k, bessel_k1_derivative, gamma_fn};
use crate::{Error, Result};

/// Knobs of the weight family. `c` scales the isotropic exponent, `nu` is
/// its power, `c2` scales the Gaussian kernel, `c4` scales the on-shell
/// exponent, `m` is the mass unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegulatorConfig {
    pub c: f64,
    pub nu: f64,
    pub c2: f64,
    pub c4: f64,
    pub m: f64,
}

impl Default for RegulatorConfig {
    fn default() -> Self {
        RegulatorConfig {
            c: 1.0,
            nu: 2.0,
            c2: 1.0,
            c4: 1.0,
            m: 1.0,
        }
    }
}

impl RegulatorConfig {
    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.nu > 0.0 && self.c2 > 0.0 && self.c4 > 0.0 && self.m > 0.0) {
            return Err(Error::Config(
                "regulator constants must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn require_damping(g: f64) -> Result<()> {
    if g == 0.0 {
        return Err(Error::Config(
            "non-analytic normalization: the weight family has no g = 0 member".into(),
        ));
    }
    if !g.is_finite() {
        return Err(Error::NonFinite(g));
    }
    Ok(())
}

/// Isotropic exponent coefficient alpha = C g^2.
pub fn alpha(cfg: &RegulatorConfig, g: f64) -> Result<f64> {
    cfg.validate()?;
    require_damping(g)?;
    Ok(cfg.c * g * g)
}

/// On-shell exponent coefficient beta = C4 g^2.
pub fn beta(cfg: &RegulatorConfig, g: f64) -> Result<f64> {
    cfg.validate()?;
    require_damping(g)?;
    Ok(cfg.c4 * g * g)
}

/// Closed normalization C1 = nu alpha^{4/nu} / Gamma(4/nu), fixed by
/// int_0^inf W(P) P^3 dP = 1.
pub fn normalization_c1(cfg: &RegulatorConfig, g: f64) -> Result<f64> {
    let a = alpha(cfg, g)?;
    Ok(cfg.nu * a.powf(4.0 / cfg.nu) / gamma_fn(4.0 / cfg.nu))
}

/// Isotropic weight W(P) = C1 exp(-alpha P^nu) on the Euclidean radius P.
pub fn weight_w(cfg: &RegulatorConfig, g: f64, p: f64) -> Result<f64> {
    if p < 0.0 {
        return Err(Error::Config("radial momentum must be nonnegative".into()));
    }
    let a = alpha(cfg, g)?;
    Ok(normalization_c1(cfg, g)? * (-a * p.powf(cfg.nu)).exp())
}

/// Radial normalization integral evaluated by quadrature; equals 1 when the
/// closed constant is right.
pub fn normalization_quad(cfg: &RegulatorConfig, g: f64) -> Result<f64> {
    let a = alpha(cfg, g)?;
    let c1 = normalization_c1(cfg, g)?;
    let nu = cfg.nu;
    integrate_0_inf(move |p: f64| c1 * p.powi(3) * (-a * p.powf(nu)).exp(), 1e-13)
        .map_err(Error::Quadrature)
}

/// Closed radial moment <P^z> = Gamma((4+z)/nu)/Gamma(4/nu) alpha^{-z/nu}.
pub fn moment_closed(cfg: &RegulatorConfig, g: f64, z: f64) -> Result<f64> {
    if z <= -4.0 {
        return Err(Error::Config("moment order must exceed -4".into()));
    }
    let a = alpha(cfg, g)?;
    Ok(gamma_fn((4.0 + z) / cfg.nu) / gamma_fn(4.0 / cfg.nu) * a.powf(-z / cfg.nu))
}

/// The same moment by quadrature against the weight.
pub fn moment_quad(cfg: &RegulatorConfig, g: f64, z: f64) -> Result<f64> {
    if z <= -4.0 {
        return Err(Error::Config("moment order must exceed -4".into()));
    }
    let a = alpha(cfg, g)?;
    let c1 = normalization_c1(cfg, g)?;
    let nu = cfg.nu;
    integrate_0_inf(
        move |p: f64| {
            if p == 0.0 && z < 0.0 {
                0.0
            } else {
                c1 * p.powf(3.0 + z) * (-a * p.powf(nu)).exp()
            }
        },
        1e-13,
    )
    .map_err(Error::Quadrature)
}

/// Four-fold Gaussian Fourier pair: the product of one-dimensional cosine
/// transforms of exp(-c2 g^2 k^2 / m^2) against the closed Gaussian image
/// m^4 exp(-r^2 m^2 / (4 c2 g^2)) / (16 pi^2 c2^2 g^4 h^2).
/// Returns (quadrature, closed).
pub fn gaussian_fourier_pair(cfg: &RegulatorConfig, g: f64, r: &V4) -> Result<(f64, f64)> {
    cfg.validate()?;
    require_damping(g)?;
    let par = DeformParam::new(g)?;
    let m = cfg.m;
    let a = cfg.c2 * g * g / (m * m);
    let mut lhs = 1.0 / ((2.0 * std::f64::consts::PI).powi(4) * par.h * par.h);
    for j in 0..4 {
        let rj = r[j];
        let one_d = integrate_0_inf(move |k: f64| 2.0 * (k * rj).cos() * (-a * k * k).exp(), 1e-13)
            .map_err(Error::Quadrature)?;
        lhs *= one_d;
    }
    let r2: f64 = r.iter().map(|x| x * x).sum();
    let rhs = m.powi(4) * (-r2 * m * m / (4.0 * cfg.c2 * g * g)).exp()
        / (16.0 * std::f64::consts::PI.powi(2) * cfg.c2 * cfg.c2 * g.powi(4) * par.h * par.h);
    Ok((lhs, rhs))
}

/// Macdonald pair (K0, K1); the argument must be positive.
pub fn macdonald(z: f64) -> Result<(f64, f64)> {
    if !(z > 0.0) {
        return Err(Error::Config(format!(
            "Macdonald functions need a positive argument, got {z}"
        )));
    }
    Ok((bessel_k(0, z), bessel_k(1, z)))
}

/// Integral representation check: int_0^inf exp(-z cosh u) sinh^2 u du
/// against K1(z)/z. Returns (quadrature, closed).
pub fn cosh_representation_pair(z: f64) -> Result<(f64, f64)> {
    let (_, k1) = macdonald(z)?;
    let quad = integrate_0_inf(
        move |u: f64| {
            let c = u.cosh();
            // sinh^2 overflows long after the exponential underflows
            if z * c > 745.0 {
                return 0.0;
            }
            let s = u.sinh();
            (-z * c).exp() * s * s
        },
        1e-14,
    )
    .map_err(Error::Quadrature)?;
    Ok((quad, k1 / z))
}

/// Derivative recurrence check: K1'(z) against -K1(z)/z - K0(z).
/// Returns (finite-difference derivative, recurrence value).
pub fn k1_derivative_pair(z: f64) -> Result<(f64, f64)> {
    let (k0, k1) = macdonald(z)?;
    Ok((bessel_k1_derivative(z), -k1 / z - k0))
}

/// Leading large-argument form sqrt(pi / 2z) exp(-z) shared by K0 and K1.
pub fn macdonald_asymptotic(z: f64) -> f64 {
    (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp()
}

/// Simplified shell energy K0(x) = sqrt(1 + x^2) in mass units.
pub fn shell_energy_simplified(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Closed shell integral int_0^inf exp(-b sqrt(1+x^2)) x^2 dx
/// = 2 K1(b)/b^2 + K0(b)/b.
pub fn shell_integral_closed(b: f64) -> Result<f64> {
    let (k0, k1) = macdonald(b)?;
    Ok(2.0 * k1 / (b * b) + k0 / b)
}

/// The same integral by direct quadrature.
pub fn shell_integral_quad(b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Config(format!(
            "shell integral needs a positive exponent, got {b}"
        )));
    }
    integrate_0_inf(
        move |x: f64| (-b * (1.0 + x * x).sqrt()).exp() * x * x,
        1e-14,
    )
    .map_err(Error::Quadrature)
}

/// Normalization C3 = 1 / (4 pi m^3 I) of the on-shell weight, with I the
/// shell integral; fixes int W1 d^3p = 1.
pub fn normalization_c3(cfg: &RegulatorConfig, g: f64) -> Result<f64> {
    let b = beta(cfg, g)?;
    Ok(1.0 / (4.0 * std::f64::consts::PI * cfg.m.powi(3) * shell_integral_closed(b)?))
}

/// On-shell weight W1(p) = C3 exp(-beta sqrt(1 + (p/m)^2)).
pub fn weight_w1(cfg: &RegulatorConfig, g: f64, p: f64) -> Result<f64> {
    if p < 0.0 {
        return Err(Error::Config("radial momentum must be nonnegative".into()));
    }
    let b = beta(cfg, g)?;
    let x = p / cfg.m;
    Ok(normalization_c3(cfg, g)? * (-b * shell_energy_simplified(x)).exp())
}

/// Exact dispersion: the positive root K0 of H(g; K0, x) = 1 on the future
/// branch, by bisection plus Newton polish. At g = 0 this is sqrt(1 + x^2).
pub fn dispersion_k0(par: &DeformParam, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Dispersion(format!(
            "spatial momentum must be nonnegative, got {x}"
        )));
    }
    let hval = |p0: f64| fhf(par, &[p0, x, 0.0, 0.0]);
    let floor = par.g_plus * x;
    let scale = 1.0 + x;
    let mut lo = floor + 1e-14 * scale;
    let mut hi = floor + scale;
    let mut n = 0;
    while hval(hi) < 1.0 {
        hi = floor + (hi - floor) * 2.0;
        n += 1;
        if n > 200 {
            return Err(Error::Dispersion("bracketing the shell failed".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hval(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * scale {
            break;
        }
    }
    let mut p0 = 0.5 * (lo + hi);
    for _ in 0..50 {
        let h = hval(p0);
        let (u, v) = co_cone_factors(par, &[p0, x, 0.0, 0.0]);
        let dh = h * (0.5 * par.big_g_sup_plus / u - 0.5 * par.big_g_sup_minus / v);
        let step = (h - 1.0) / dh;
        p0 -= step;
        if step.abs() < 1e-15 * scale {
            break;
        }
    }
    // the achievable absolute accuracy of H - 1 degrades linearly with the
    // root magnitude, so the acceptance threshold is scale-relative
    if (hval(p0) - 1.0).abs() > 1e-12 * scale {
        return Err(Error::Dispersion(format!(
            "shell solve did not converge at x = {x}"
        )));
    }
    Ok(p0)
}

/// On-shell weight using the exact dispersion, with the normalization fixed
/// by quadrature over the exact shell.
pub fn weight_w1_exact(cfg: &RegulatorConfig, par: &DeformParam, p: f64) -> Result<f64> {
    if p < 0.0 {
        return Err(Error::Config("radial momentum must be nonnegative".into()));
    }
    let b = beta(cfg, par.g)?;
    let shell = move |x: f64| dispersion_k0(par, x).expect("dispersion converges");
    let i = integrate_0_inf(
        move |x: f64| {
            let e = -b * shell(x);
            if e < -700.0 {
                0.0
            } else {
                e.exp() * x * x
            }
        },
        1e-11,
    )
    .map_err(Error::Quadrature)?;
    let c3 = 1.0 / (4.0 * std::f64::consts::PI * cfg.m.powi(3) * i);
    Ok(c3 * (-b * dispersion_k0(par, p / cfg.m)?).exp())
}

/// Low-momentum ratio of the on-shell weight to its Maxwell form
/// C3 exp(-beta) exp(-beta p^2 / 2 m^2); tends to 1 as p -> 0.
pub fn maxwell_regime_ratio(cfg: &RegulatorConfig, g: f64, p: f64) -> Result<f64> {
    let b = beta(cfg, g)?;
    let w = weight_w1(cfg, g, p)?;
    let x = p / cfg.m;
    let maxwell = normalization_c3(cfg, g)? * (-b).exp() * (-0.5 * b * x * x).exp();
    Ok(w / maxwell)
}

/// Logarithmic slope d ln W1 / dp, which approaches -beta/m for p >> m.
pub fn log_slope_w1(cfg: &RegulatorConfig, g: f64, p: f64) -> Result<f64> {
    let b = beta(cfg, g)?;
    let x = p / cfg.m;
    Ok(-b * x / (cfg.m * (1.0 + x * x).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RegulatorConfig {
        RegulatorConfig::default()
    }

    #[test]
    fn zero_damping_is_refused() {
        let c = cfg();
        assert!(matches!(alpha(&c, 0.0), Err(Error::Config(_))));
        assert!(matches!(beta(&c, 0.0), Err(Error::Config(_))));
        assert!(weight_w(&c, 0.0, 1.0).is_err());
        assert!(weight_w1(&c, 0.0, 1.0).is_err());
        assert!(gaussian_fourier_pair(&c, 0.0, &[0.0; 4]).is_err());
    }

    #[test]
    fn closed_normalization_integrates_to_one() {
        for &nu in &[1.0, 2.0, 4.0] {
            for &g in &[0.5, 1.0, 2.0] {
                let c = RegulatorConfig {
                    nu,
                    ..RegulatorConfig::default()
                };
                let q = normalization_quad(&c, g).unwrap();
                assert!((q - 1.0).abs() < 1e-10, "nu={nu} g={g}: {q}");
            }
        }
        // nu = 2 closed constant is 2 alpha^2
        let c = cfg();
        let g = 1.3;
        let a = alpha(&c, g).unwrap();
        assert!((normalization_c1(&c, g).unwrap() - 2.0 * a * a).abs() < 1e-14);
    }

    #[test]
    fn moments_match_gamma_ratios() {
        let c = cfg();
        for &g in &[0.5, 1.0, 2.0] {
            for z in 1..=8 {
                let closed = moment_closed(&c, g, z as f64).unwrap();
                let quad = moment_quad(&c, g, z as f64).unwrap();
                assert!(
                    (closed - quad).abs() < 1e-9 * (1.0 + closed.abs()),
                    "g={g} z={z}: {closed} vs {quad}"
                );
            }
            // nu = 2: <P^2> = 2/alpha
            let a = alpha(&c, g).unwrap();
            assert!((moment_closed(&c, g, 2.0).unwrap() - 2.0 / a).abs() < 1e-13 / a);
        }
    }

    #[test]
    fn gaussian_fourier_closed_form() {
        let c = cfg();
        for &g in &[0.5, 1.0] {
            for r in [[0.0; 4], [0.3, 0.2, -0.1, 0.4], [1.0, 0.0, 0.0, 0.0]] {
                let (lhs, rhs) = gaussian_fourier_pair(&c, g, &r).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()),
                    "g={g} r={r:?}: {lhs} vs {rhs}"
                );
            }
        }
        // at the origin the closed value is m^4 / (16 pi^2 g^4 h^2)
        let g = 1.0f64;
        let h2 = 1.0 + g * g / 4.0;
        let (_, rhs) = gaussian_fourier_pair(&c, g, &[0.0; 4]).unwrap();
        let want = 1.0 / (16.0 * std::f64::consts::PI.powi(2) * g.powi(4) * h2);
        assert!((rhs - want).abs() < 1e-15);
    }

    #[test]
    fn shell_integral_matches_macdonald_form() {
        for &g in &[0.5, 1.0, 2.0] {
            let b = g * g / 8.0;
            let quad = shell_integral_quad(b).unwrap();
            let closed = shell_integral_closed(b).unwrap();
            assert!(
                (quad - closed).abs() < 1e-8 * (1.0 + closed.abs()),
                "g={g}: {quad} vs {closed}"
            );
        }
    }

    #[test]
    fn macdonald_domain_and_identities() {
        assert!(macdonald(0.0).is_err());
        assert!(macdonald(-1.0).is_err());
        for &z in &[0.3, 1.0, 5.0] {
            let (quad, closed) = cosh_representation_pair(z).unwrap();
            assert!((quad - closed).abs() < 1e-10 * (1.0 + closed.abs()), "z={z}");
            let (fd, rec) = k1_derivative_pair(z).unwrap();
            assert!((fd - rec).abs() < 1e-8 * (1.0 + rec.abs()), "z={z}");
        }
        let z = 20.0;
        let (k0, k1) = macdonald(z).unwrap();
        let asym = macdonald_asymptotic(z);
        // leading form: K0 error is -1/(8z), K1 error is +3/(8z)
        assert!((k0 / asym - 1.0).abs() < 0.01);
        assert!((k1 / asym - 1.0).abs() < 0.025);
        assert!((k0 / (asym * (1.0 - 1.0 / (8.0 * z))) - 1.0).abs() < 1e-3);
        assert!((k1 / (asym * (1.0 + 3.0 / (8.0 * z))) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn dispersion_solves_the_shell() {
        for &g in &[0.0, 0.5, 1.0, 2.0, -0.8] {
            let par = DeformParam::new(g).unwrap();
            let k0 = dispersion_k0(&par, 0.0).unwrap();
            assert!((k0 - 1.0).abs() < 1e-12, "g={g}: rest energy {k0}");
            let mut prev = k0;
            for &x in &[0.5, 1.0, 2.0, 5.0, 20.0] {
                let k0 = dispersion_k0(&par, x).unwrap();
                assert!((fhf(&par, &[k0, x, 0.0, 0.0]) - 1.0).abs() < 1e-12, "g={g} x={x}");
                assert!(k0 > prev, "g={g} x={x} not monotone");
                prev = k0;
            }
            if g == 0.0 {
                let k0 = dispersion_k0(&par, 1.5).unwrap();
                assert!((k0 - (1.0f64 + 1.5 * 1.5).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn regimes_of_the_on_shell_weight() {
        let c = cfg();
        let g = 1.0;
        let ratio = maxwell_regime_ratio(&c, g, 0.01).unwrap();
        assert!((ratio - 1.0).abs() < 1e-3, "ratio {ratio}");
        let b = beta(&c, g).unwrap();
        let slope = log_slope_w1(&c, g, 50.0).unwrap();
        assert!((slope + b).abs() < 0.01 * b, "slope {slope}");
        // finite-difference slope of ln W1 agrees
        let p = 50.0;
        let dp = 1e-4;
        let fd = (weight_w1(&c, g, p + dp).unwrap().ln()
            - weight_w1(&c, g, p - dp).unwrap().ln())
            / (2.0 * dp);
        assert!((fd - slope).abs() < 1e-8 * slope.abs());
    }

    #[test]
    fn exact_shell_weight_is_normalized() {
        let c = cfg();
        let par = DeformParam::new(1.0).unwrap();
        let b = beta(&c, 1.0).unwrap();
        // reconstruct the normalization integral from the weight itself
        let w0 = weight_w1_exact(&c, &par, 0.0).unwrap();
        let k00 = dispersion_k0(&par, 0.0).unwrap();
        let i = (-b * k00).exp() / (4.0 * std::f64::consts::PI * w0);
        let quad = integrate_0_inf(
            |x: f64| {
                let e = -b * dispersion_k0(&par, x).unwrap();
                if e < -700.0 {
                    0.0
                } else {
                    e.exp() * x * x
                }
            },
            1e-9,
        )
        .unwrap();
        assert!((i - quad).abs() < 1e-8 * quad, "{i} vs {quad}");
    }
}

//! The deformation parameter and its derived constants.
//!
//! Everything is algebra on g and h = sqrt(1 + g^2/4). The paired constants
//! come in a lower family (g_plus, g_minus: the two slopes of the deformed
//! light cone) and an upper family (their negative reciprocals); each has a
//! scaled variant divided by h. gamma = h - 1 is the conformal weight
//! exponent that controls every first-order expansion.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformParam {
    pub g: f64,
    /// h = sqrt(1 + g^2/4) >= 1
    pub h: f64,
    /// G = g/h
    pub big_g: f64,
    /// g_plus = -g/2 + h (> 0)
    pub g_plus: f64,
    /// g_minus = -g/2 - h (< 0); g_plus * g_minus = -1
    pub g_minus: f64,
    /// G_plus = g_plus/h = 1 - G/2
    pub big_g_plus: f64,
    /// G_minus = g_minus/h = -G/2 - 1; G_plus - G_minus = 2
    pub big_g_minus: f64,
    /// g^+ = 1/g_plus = -g_minus = g/2 + h
    pub g_sup_plus: f64,
    /// g^- = 1/g_minus = -g_plus
    pub g_sup_minus: f64,
    /// G^+ = g^+/h = G/2 + 1
    pub big_g_sup_plus: f64,
    /// G^- = g^-/h = G/2 - 1
    pub big_g_sup_minus: f64,
    /// gamma = h - 1; gamma(2 + gamma) = g^2/4
    pub gamma: f64,
}

impl DeformParam {
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::NonFinite(g));
        }
        let h = (1.0 + 0.25 * g * g).sqrt();
        let g_plus = -0.5 * g + h;
        let g_minus = -0.5 * g - h;
        Ok(DeformParam {
            g,
            h,
            big_g: g / h,
            g_plus,
            g_minus,
            big_g_plus: g_plus / h,
            big_g_minus: g_minus / h,
            g_sup_plus: 0.5 * g + h,
            g_sup_minus: -g_plus,
            big_g_sup_plus: (0.5 * g + h) / h,
            big_g_sup_minus: -g_plus / h,
            gamma: h - 1.0,
        })
    }

    /// Correspondence limit: all deformation constants collapse.
    pub fn is_flat(&self) -> bool {
        self.g == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_limit() {
        let p = DeformParam::new(0.0).unwrap();
        assert_eq!(p.h, 1.0);
        assert_eq!(p.g_plus, 1.0);
        assert_eq!(p.g_minus, -1.0);
        assert_eq!(p.big_g, 0.0);
        assert_eq!(p.gamma, 0.0);
        assert!(p.is_flat());
    }

    #[test]
    fn g_two_values() {
        let p = DeformParam::new(2.0).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert!((p.h - s2).abs() < 1e-15);
        assert!((p.g_plus - (s2 - 1.0)).abs() < 1e-15);
        assert!((p.g_minus - (-s2 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn algebraic_identities_over_grid() {
        for &g in &[-2.5, -1.2, -0.5, 0.0, 0.3, 0.8, 1.2, 2.0, 3.7] {
            let p = DeformParam::new(g).unwrap();
            assert!((p.g_plus * p.g_minus + 1.0).abs() < 1e-15, "g+ g- = -1");
            assert!((p.g_sup_plus - 1.0 / p.g_plus).abs() < 1e-14);
            assert!((p.g_sup_plus + p.g_sup_minus - g).abs() < 1e-14);
            assert!((p.big_g_plus - p.big_g_minus - 2.0).abs() < 1e-15);
            assert!((p.big_g_sup_plus - (0.5 * p.big_g + 1.0)).abs() < 1e-15);
            assert!((p.big_g_sup_minus - (0.5 * p.big_g - 1.0)).abs() < 1e-15);
            // gamma(2 + gamma) = g^2/4 and gamma - g^2/4 = -gamma h
            assert!((p.gamma * (2.0 + p.gamma) - 0.25 * g * g).abs() < 1e-14);
            assert!((p.gamma - 0.25 * g * g + p.gamma * p.h).abs() < 1e-14);
            assert_eq!(p.gamma == 0.0, g == 0.0);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(DeformParam::new(f64::NAN).is_err());
        assert!(DeformParam::new(f64::INFINITY).is_err());
    }
}

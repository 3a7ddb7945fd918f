//! The deformed norm on vectors, its dual on covectors, sector
//! classification, and the auxiliary factors every other module reuses.
//!
//! A point R = (R0, R) is graded by the two deformed cone factors
//! u = R0 + g_minus |R| and v = R0 + g_plus |R| (v >= u always). The norm is
//! F = |u|^{G_plus/2} |v|^{-G_minus/2}, which factorizes as F = j sqrt|B|
//! with B = -uv and j = |u/v|^{-G/4}. The power factors are evaluated in
//! log space; near the cone the exponents make direct powf lose digits.

use crate::core::param::DeformParam;
use crate::support::linalg::V4;
use crate::{Error, Result};

/// Default relative guard band around the cone factors and |R| = 0.
pub const DEFAULT_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    FutureTimelike,
    FutureIsotropic,
    Spacelike,
    PastIsotropic,
    PastTimelike,
}

impl Sector {
    pub fn name(&self) -> &'static str {
        match self {
            Sector::FutureTimelike => "future-timelike",
            Sector::FutureIsotropic => "future-isotropic",
            Sector::Spacelike => "spacelike",
            Sector::PastIsotropic => "past-isotropic",
            Sector::PastTimelike => "past-timelike",
        }
    }

    pub fn is_timelike(&self) -> bool {
        matches!(self, Sector::FutureTimelike | Sector::PastTimelike)
    }
}

pub fn spatial_norm(r: &V4) -> f64 {
    (r[1] * r[1] + r[2] * r[2] + r[3] * r[3]).sqrt()
}

/// Unit spatial direction n_a = R^a/|R|.
pub fn unit_spatial(r: &V4) -> [f64; 3] {
    let q = spatial_norm(r);
    [r[1] / q, r[2] / q, r[3] / q]
}

/// The two cone factors (u, v), u <= v, vanishing on the two sheets of the
/// deformed light cone.
pub fn cone_factors(par: &DeformParam, r: &V4) -> (f64, f64) {
    let q = spatial_norm(r);
    (r[0] + par.g_minus * q, r[0] + par.g_plus * q)
}

pub fn sector(par: &DeformParam, r: &V4) -> Sector {
    let (u, v) = cone_factors(par, r);
    if u > 0.0 {
        Sector::FutureTimelike
    } else if u == 0.0 {
        Sector::FutureIsotropic
    } else if v > 0.0 {
        Sector::Spacelike
    } else if v == 0.0 {
        Sector::PastIsotropic
    } else {
        Sector::PastTimelike
    }
}

/// Sector sign: +1 where the image of the norm-preserving map is
/// pseudoeuclidean-timelike, -1 where it is spacelike. Several closed
/// metric formulas carry this sign.
pub fn sector_sign(par: &DeformParam, r: &V4) -> f64 {
    match sector(par, r) {
        Sector::Spacelike => -1.0,
        _ => 1.0,
    }
}

/// Reject points inside the relative guard band around the cone factors or
/// the spatial axis |R| = 0, where derivative formulas blow up.
pub fn require_regular(par: &DeformParam, r: &V4, band: f64) -> Result<()> {
    let q = spatial_norm(r);
    let scale = r[0].abs() + q;
    if scale == 0.0 {
        return Err(Error::ConeProximity {
            locus: "origin",
            value: 0.0,
            band,
        });
    }
    let (u, v) = cone_factors(par, r);
    if u.abs() < band * scale {
        return Err(Error::ConeProximity {
            locus: "cone factor u",
            value: u,
            band,
        });
    }
    if v.abs() < band * scale {
        return Err(Error::ConeProximity {
            locus: "cone factor v",
            value: v,
            band,
        });
    }
    if q < band * scale {
        return Err(Error::ConeProximity {
            locus: "spatial axis |R| = 0",
            value: q,
            band,
        });
    }
    Ok(())
}

/// Auxiliary factors of the norm at a point.
#[derive(Debug, Clone, Copy)]
pub struct AuxForms {
    pub u: f64,
    pub v: f64,
    /// B = -uv = -((R0)^2 - g R0 |R| - |R|^2); negative timelike, positive spacelike
    pub b: f64,
    /// j = |u/v|^{-G/4}; infinite/zero on the cone sheets for g != 0
    pub j: f64,
    pub f: f64,
    /// A = R0 - (g/2)|R|
    pub a_form: f64,
    /// spatial companion of A: |R| - (g/2) R0
    pub l_form: f64,
    pub sector: Sector,
}

/// All auxiliary factors at once. Total functions of the point; on the cone
/// F is exactly 0 and j degenerates.
pub fn aux_forms(par: &DeformParam, r: &V4) -> AuxForms {
    let q = spatial_norm(r);
    let (u, v) = cone_factors(par, r);
    let f = fmf(par, r);
    let j = if u == 0.0 || v == 0.0 {
        if par.big_g == 0.0 {
            1.0
        } else if (u == 0.0) == (par.big_g > 0.0) {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        (-par.big_g / 4.0 * (u / v).abs().ln()).exp()
    };
    AuxForms {
        u,
        v,
        b: -u * v,
        j,
        f,
        a_form: r[0] - 0.5 * par.g * q,
        l_form: q - 0.5 * par.g * r[0],
        sector: sector(par, r),
    }
}

/// The deformed norm F(g; R) >= 0 (the metric function). Zero exactly on
/// the deformed cone, sqrt(|R0^2 - |R|^2|) at g = 0.
pub fn fmf(par: &DeformParam, r: &V4) -> f64 {
    let (u, v) = cone_factors(par, r);
    if u == 0.0 || v == 0.0 {
        return 0.0;
    }
    // exponents G_plus/2 and -G_minus/2 are both positive for every real g
    (0.5 * par.big_g_plus * u.abs().ln() - 0.5 * par.big_g_minus * v.abs().ln()).exp()
}

/// Co-space cone factors (u_hat, v_hat) of a covector P.
pub fn co_cone_factors(par: &DeformParam, p: &V4) -> (f64, f64) {
    let q = spatial_norm(p);
    (p[0] - par.g_plus * q, p[0] + par.g_sup_plus * q)
}

pub fn co_sector(par: &DeformParam, p: &V4) -> Sector {
    let (u, v) = co_cone_factors(par, p);
    if u > 0.0 {
        Sector::FutureTimelike
    } else if u == 0.0 {
        Sector::FutureIsotropic
    } else if v > 0.0 {
        Sector::Spacelike
    } else if v == 0.0 {
        Sector::PastIsotropic
    } else {
        Sector::PastTimelike
    }
}

/// Co-space auxiliary factors: B_hat, j_hat, A_hat paralleling the vector
/// side, with the cone slopes replaced by their reciprocals.
pub fn co_aux_forms(par: &DeformParam, p: &V4) -> AuxForms {
    let q = spatial_norm(p);
    let (u, v) = co_cone_factors(par, p);
    let f = fhf(par, p);
    let j = if u == 0.0 || v == 0.0 {
        if par.big_g == 0.0 {
            1.0
        } else if (u == 0.0) == (par.big_g < 0.0) {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        (par.big_g / 4.0 * (u / v).abs().ln()).exp()
    };
    AuxForms {
        u,
        v,
        b: -u * v,
        j,
        f,
        a_form: p[0] + 0.5 * par.g * q,
        l_form: q + 0.5 * par.g * p[0],
        sector: co_sector(par, p),
    }
}

/// The dual norm H(g; P) on covectors (the Hamiltonian function):
/// H = |u_hat|^{G_sup_plus/2} |v_hat|^{-G_sup_minus/2}. Satisfies
/// H(g; dF^2/2 dR) = F(g; R) in the future-timelike sector.
pub fn fhf(par: &DeformParam, p: &V4) -> f64 {
    let (u, v) = co_cone_factors(par, p);
    if u == 0.0 || v == 0.0 {
        return 0.0;
    }
    (0.5 * par.big_g_sup_plus * u.abs().ln() - 0.5 * par.big_g_sup_minus * v.abs().ln()).exp()
}

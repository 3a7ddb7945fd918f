//! First order in the deformation parameter.
//!
//! Every closed object in the crate collapses, at O(g), to a rational table
//! in (R^0, |R|) over the signed flat interval S^2 = (R^0)^2 - |R|^2 plus
//! the logarithm l = ln|(R^0 - |R|)/(R^0 + |R|)|. This module holds those
//! linearized tables and the drivers that certify each remainder shrinks at
//! the advertised power of g. The metric-level tables expand around +e and
//! belong to the timelike sector (the exact metric tends to -e on spacelike
//! arguments); j, det, the trace covector, phases and exported amplitudes
//! are sector-uniform.

use serde::Serialize;

use crate::conformal::{phase, rho_jacobian};
use crate::core::cartan::{cartan_closed, cartan_trace, T3};
use crate::core::metric::{metric_closed, metric_inverse};
use crate::core::norm::{aux_forms, spatial_norm, DEFAULT_BAND};
use crate::core::param::DeformParam;
use crate::fields::em::coulomb_potential;
use crate::fields::scalar::yukawa;
use crate::quasi::{n_connection, n_lower};
use crate::support::fit::order_fit;
use crate::support::linalg::{M4, V4};
use crate::support::numdiff::{partial_r, step1};
use crate::{Error, Result};

/// Flat-cone data (|R|, S^2) of a point, refusing the loci where the
/// linearized tables degenerate: the flat cone S^2 = 0 and the spatial axis.
pub fn flat_interval(r: &V4) -> Result<(f64, f64)> {
    for x in r {
        if !x.is_finite() {
            return Err(Error::NonFinite(*x));
        }
    }
    let q = spatial_norm(r);
    let s2 = r[0] * r[0] - q * q;
    let scale2 = r[0] * r[0] + q * q;
    if scale2 == 0.0 || q * q < DEFAULT_BAND * DEFAULT_BAND * scale2 {
        return Err(Error::ConeProximity {
            locus: "spatial axis |R| = 0",
            value: q,
            band: DEFAULT_BAND,
        });
    }
    if s2.abs() < DEFAULT_BAND * scale2 {
        return Err(Error::ConeProximity {
            locus: "flat cone",
            value: s2,
            band: DEFAULT_BAND,
        });
    }
    Ok((q, s2))
}

/// l = ln|(R^0 - |R|)/(R^0 + |R|)|, the logarithm carrying all first-order
/// deformation of the conformal weight.
pub fn log_ratio(r: &V4) -> Result<f64> {
    let (q, _) = flat_interval(r)?;
    Ok(((r[0] - q) / (r[0] + q)).abs().ln())
}

/// Linearized metric (timelike sector):
/// g_00 = 1 - g|R|R^0/S^2 - (g/2)l, g_0a = g|R|R^a/S^2,
/// g_ab = -d_ab + (g/2)l d_ab - g R^a R^b R^0 / (|R| S^2).
pub fn metric_o1(par: &DeformParam, r: &V4) -> Result<M4> {
    let (q, s2) = flat_interval(r)?;
    let l = log_ratio(r)?;
    let g = par.g;
    let mut out = [[0.0; 4]; 4];
    out[0][0] = 1.0 - g * q * r[0] / s2 - 0.5 * g * l;
    for a in 0..3 {
        let ra = r[a + 1];
        out[0][a + 1] = g * q * ra / s2;
        out[a + 1][0] = out[0][a + 1];
        for b in 0..3 {
            let d = if a == b { 1.0 } else { 0.0 };
            out[a + 1][b + 1] =
                -d + 0.5 * g * l * d - g * ra * r[b + 1] * r[0] / (q * s2);
        }
    }
    Ok(out)
}

/// Linearized inverse metric: the l and R^0 terms of `metric_o1` flip sign.
pub fn metric_inverse_o1(par: &DeformParam, r: &V4) -> Result<M4> {
    let (q, s2) = flat_interval(r)?;
    let l = log_ratio(r)?;
    let g = par.g;
    let mut out = [[0.0; 4]; 4];
    out[0][0] = 1.0 + g * q * r[0] / s2 + 0.5 * g * l;
    for a in 0..3 {
        let ra = r[a + 1];
        out[0][a + 1] = g * q * ra / s2;
        out[a + 1][0] = out[0][a + 1];
        for b in 0..3 {
            let d = if a == b { 1.0 } else { 0.0 };
            out[a + 1][b + 1] =
                -d - 0.5 * g * l * d + g * ra * r[b + 1] * r[0] / (q * s2);
        }
    }
    Ok(out)
}

/// Linearized conformal factor j = 1 - (g/4) l. Sector-uniform.
pub fn j_o1(par: &DeformParam, r: &V4) -> Result<f64> {
    Ok(1.0 - 0.25 * par.g * log_ratio(r)?)
}

/// Linearized metric determinant det g = -1 + 2 g l (the exact value is
/// -j^8). Sector-uniform.
pub fn det_o1(par: &DeformParam, r: &V4) -> Result<f64> {
    Ok(-1.0 + 2.0 * par.g * log_ratio(r)?)
}

/// Linearized Cartan tensor C_pqr = g S_pqr (timelike sector), with
/// S_000 = |R|^3/S^4,
/// S_a00 = -R^0 |R| R^a / S^4,
/// S_ab0 = (|R|/2) d_ab/S^2 + (R^a R^b/2)((R^0)^2 + |R|^2)/(|R| S^4),
/// S_abc = -(R^0/2)(d_ab R^c + d_ac R^b + d_bc R^a)/(|R| S^2)
///         + R^0 R^a R^b R^c ((R^0)^2 - 3|R|^2) / (2 |R|^3 S^4).
pub fn cartan_o1(par: &DeformParam, r: &V4) -> Result<T3> {
    let (q, s2) = flat_interval(r)?;
    let g = par.g;
    let t = r[0];
    let mut s = [[[0.0; 4]; 4]; 4];
    s[0][0][0] = q.powi(3) / (s2 * s2);
    for a in 0..3 {
        let ra = r[a + 1];
        let val = -t * q * ra / (s2 * s2);
        s[a + 1][0][0] = val;
        s[0][a + 1][0] = val;
        s[0][0][a + 1] = val;
        for b in 0..3 {
            let rb = r[b + 1];
            let d_ab = if a == b { 1.0 } else { 0.0 };
            let val = 0.5 * q * d_ab / s2
                + 0.5 * ra * rb * (t * t + q * q) / (q * s2 * s2);
            s[a + 1][b + 1][0] = val;
            s[a + 1][0][b + 1] = val;
            s[0][a + 1][b + 1] = val;
            for c in 0..3 {
                let rc = r[c + 1];
                let d_ac = if a == c { 1.0 } else { 0.0 };
                let d_bc = if b == c { 1.0 } else { 0.0 };
                s[a + 1][b + 1][c + 1] = -0.5 * t * (d_ab * rc + d_ac * rb + d_bc * ra)
                    / (q * s2)
                    + t * ra * rb * rc * (t * t - 3.0 * q * q)
                        / (2.0 * q.powi(3) * s2 * s2);
            }
        }
    }
    for chunk in s.iter_mut() {
        for row in chunk.iter_mut() {
            for x in row.iter_mut() {
                *x *= g;
            }
        }
    }
    Ok(s)
}

/// Linearized trace covector C_p: C_0 = -2g|R|/S^2,
/// C_a = 2g R^0 R^a / (|R| S^2). Sector-uniform (it is the gradient of
/// ln j^4).
pub fn cartan_trace_o1(par: &DeformParam, r: &V4) -> Result<V4> {
    let (q, s2) = flat_interval(r)?;
    let g = par.g;
    Ok([
        -2.0 * g * q / s2,
        2.0 * g * r[0] * r[1] / (q * s2),
        2.0 * g * r[0] * r[2] / (q * s2),
        2.0 * g * r[0] * r[3] / (q * s2),
    ])
}

/// Linearized raised trace (timelike sector): C^0 = C_0, C^a = -C_a.
pub fn cartan_trace_raised_o1(par: &DeformParam, r: &V4) -> Result<V4> {
    let c = cartan_trace_o1(par, r)?;
    Ok([c[0], -c[1], -c[2], -c[3]])
}

/// Linearized divergence of the raised trace:
/// d_p C^p = -4 g R^0 / (|R| S^2) (timelike sector).
pub fn trace_divergence_o1(par: &DeformParam, r: &V4) -> Result<f64> {
    let (q, s2) = flat_interval(r)?;
    Ok(-4.0 * par.g * r[0] / (q * s2))
}

/// Linearized transported phase: k.rho = (1 - (g/4) l) k_p R^p
/// - (g/2)|R| k_0. Sector-uniform.
pub fn phase_o1(par: &DeformParam, k: &V4, r: &V4) -> Result<f64> {
    let (q, _) = flat_interval(r)?;
    let l = log_ratio(r)?;
    let kr = k[0] * r[0] + k[1] * r[1] + k[2] * r[2] + k[3] * r[3];
    Ok((1.0 - 0.25 * par.g * l) * kr - 0.5 * par.g * q * k[0])
}

/// Linearized screened static potential:
/// (1 + (g/4)(1 + m|R|) l) e^{-m|R|} / (m|R|).
pub fn yukawa_o1(par: &DeformParam, m: f64, r: &V4) -> Result<f64> {
    let (q, _) = flat_interval(r)?;
    let l = log_ratio(r)?;
    Ok((1.0 + 0.25 * par.g * (1.0 + m * q) * l) * (-m * q).exp() / (m * q))
}

/// Linearized static charge potential:
/// A_0 = e/|R| - (g/2) e R^0 / S^2, A_a = (g/2) e R^a / S^2
/// (signed S^2; on the spacelike side S^2 < 0 the corrections read
/// +(g/2) e R^0/|S^2| and -(g/2) e R^a/|S^2|).
pub fn coulomb_o1(par: &DeformParam, charge: f64, r: &V4) -> Result<V4> {
    let (q, s2) = flat_interval(r)?;
    let g = par.g;
    Ok([
        charge / q - 0.5 * g * charge * r[0] / s2,
        0.5 * g * charge * r[1] / s2,
        0.5 * g * charge * r[2] / s2,
        0.5 * g * charge * r[3] / s2,
    ])
}

/// Linearized transverse amplitude columns rho_p^3 for p = 0, 1, 2 (the
/// entries that vanish in the flat limit; p = 3 stays -independently- close
/// to 1):
/// rho_0^3 = -(g/2)|R| R^3 / S^2, rho_a^3 = (g/2) R^0 R^a R^3 / (|R| S^2).
pub fn em_amplitude_o1(par: &DeformParam, r: &V4) -> Result<[f64; 3]> {
    let (q, s2) = flat_interval(r)?;
    let g = par.g;
    Ok([
        -0.5 * g * q * r[3] / s2,
        0.5 * g * r[0] * r[1] * r[3] / (q * s2),
        0.5 * g * r[0] * r[2] * r[3] / (q * s2),
    ])
}

fn max_abs_v4(a: &V4, b: &V4) -> f64 {
    let mut m = 0.0f64;
    for p in 0..4 {
        m = m.max((a[p] - b[p]).abs());
    }
    m
}

fn max_abs_m4(a: &M4, b: &M4) -> f64 {
    let mut m = 0.0f64;
    for p in 0..4 {
        for q in 0..4 {
            m = m.max((a[p][q] - b[p][q]).abs());
        }
    }
    m
}

fn max_abs_t3(a: &T3, b: &T3) -> f64 {
    let mut m = 0.0f64;
    for p in 0..4 {
        for q in 0..4 {
            for s in 0..4 {
                m = m.max((a[p][q][s] - b[p][q][s]).abs());
            }
        }
    }
    m
}

/// |closed metric - linearized metric|_inf at a timelike point.
pub fn metric_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok(max_abs_m4(&metric_closed(&par, r), &metric_o1(&par, r)?))
}

pub fn metric_inverse_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok(max_abs_m4(
        &metric_inverse(&par, r),
        &metric_inverse_o1(&par, r)?,
    ))
}

pub fn cartan_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok(max_abs_t3(&cartan_closed(&par, r), &cartan_o1(&par, r)?))
}

pub fn cartan_trace_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok(max_abs_v4(
        &cartan_trace(&par, r),
        &cartan_trace_o1(&par, r)?,
    ))
}

/// Divergence of the exact raised trace by finite differences against the
/// linearized closed form.
pub fn trace_divergence_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    let raised = |x: &V4, p: usize| -> f64 {
        let c = cartan_trace(&par, x);
        let gi = metric_inverse(&par, x);
        (0..4).map(|q| gi[p][q] * c[q]).sum()
    };
    let scale = r[0].abs() + spatial_norm(r);
    let h = step1(scale);
    let mut div = 0.0;
    for p in 0..4 {
        div += partial_r(|x: &V4| raised(x, p), r, p, h);
    }
    Ok((div - trace_divergence_o1(&par, r)?).abs())
}

pub fn j_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok((aux_forms(&par, r).j - j_o1(&par, r)?).abs())
}

pub fn det_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    let j = aux_forms(&par, r).j;
    Ok((-j.powi(8) - det_o1(&par, r)?).abs())
}

pub fn phase_deviation(g: f64, k: &V4, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok((phase(&par, k, r)? - phase_o1(&par, k, r)?).abs())
}

pub fn yukawa_deviation(g: f64, m: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok((yukawa(&par, m, r)? - yukawa_o1(&par, m, r)?).abs())
}

pub fn coulomb_deviation(g: f64, charge: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok(max_abs_v4(
        &coulomb_potential(&par, charge, r)?,
        &coulomb_o1(&par, charge, r)?,
    ))
}

pub fn em_amplitude_deviation(g: f64, r: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    let jac = rho_jacobian(&par, r)?;
    let o1 = em_amplitude_o1(&par, r)?;
    let mut m = 0.0f64;
    for p in 0..3 {
        m = m.max((jac[3][p] - o1[p]).abs());
    }
    Ok(m)
}

/// Image metric against the flat e = diag(1,-1,-1,-1); the gap is O(g^2).
pub fn image_metric_deviation(g: f64, t: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    let n = n_lower(&par, t)?;
    let e = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
    ];
    Ok(max_abs_m4(&n, &e))
}

/// Image connection coefficients vanish in the flat limit at order g^2.
pub fn image_connection_deviation(g: f64, t: &V4) -> Result<f64> {
    let par = DeformParam::new(g)?;
    let n = n_connection(&par, t)?;
    let mut m = 0.0f64;
    for p in 0..4 {
        for q in 0..4 {
            for s in 0..4 {
                m = m.max(n[p][q][s].abs());
            }
        }
    }
    Ok(m)
}

/// The conformal weight exponent gamma = h - 1 deviates from g^2/8 at
/// order g^4 (exactly -g^4/128 + ...).
pub fn weight_exponent_deviation(g: f64) -> Result<f64> {
    let par = DeformParam::new(g)?;
    Ok((par.gamma - g * g / 8.0).abs())
}

/// One remainder-order certificate: deviations at a ladder of g values and
/// the fitted log-log slope against the expected power.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub name: &'static str,
    pub expected_order: f64,
    pub gs: Vec<f64>,
    pub deviations: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
}

impl ExpansionReport {
    /// Slope within ten percent of the expected power with a tight fit.
    pub fn passes(&self) -> bool {
        (self.slope - self.expected_order).abs() <= 0.1 * self.expected_order && self.r2 >= 0.99
    }
}

/// Fit the remainder order of a deviation over a ladder of g values.
pub fn expansion_order<F>(
    name: &'static str,
    expected: f64,
    gs: &[f64],
    dev: F,
) -> Result<ExpansionReport>
where
    F: Fn(f64) -> Result<f64>,
{
    if gs.len() < 2 {
        return Err(Error::Config(
            "order fit needs at least two parameter values".into(),
        ));
    }
    let mut deviations = Vec::with_capacity(gs.len());
    for &g in gs {
        let d = dev(g)?;
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::Config(format!(
                "degenerate deviation {d} at g = {g} in {name}"
            )));
        }
        deviations.push(d);
    }
    let f = order_fit(gs, &deviations);
    Ok(ExpansionReport {
        name,
        expected_order: expected,
        gs: gs.to_vec(),
        deviations,
        slope: f.slope,
        r2: f.r2,
    })
}

/// Parameter ladder for the convergence certificates.
pub const DEFAULT_GS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// All remainder-order certificates at fixed probe points: a timelike and a
/// spacelike base point, a generic covector, unit mass and charge.
pub fn convergence_suite(gs: &[f64]) -> Result<Vec<ExpansionReport>> {
    let ra = [2.0, 0.4, 0.3, 0.1];
    let rs = [0.3, 2.0, 1.0, 0.5];
    let tt = [2.0, 0.4, 0.3, 0.1];
    let k = [1.0, -0.6, 0.5, 0.3];
    let mut out = Vec::new();
    out.push(expansion_order("metric table", 2.0, gs, |g| {
        metric_deviation(g, &ra)
    })?);
    out.push(expansion_order("inverse metric table", 2.0, gs, |g| {
        metric_inverse_deviation(g, &ra)
    })?);
    out.push(expansion_order("cartan table", 2.0, gs, |g| {
        cartan_deviation(g, &ra)
    })?);
    out.push(expansion_order("trace covector", 2.0, gs, |g| {
        Ok(cartan_trace_deviation(g, &ra)?.max(cartan_trace_deviation(g, &rs)?))
    })?);
    out.push(expansion_order("trace divergence", 2.0, gs, |g| {
        trace_divergence_deviation(g, &ra)
    })?);
    out.push(expansion_order("conformal factor", 2.0, gs, |g| {
        Ok(j_deviation(g, &ra)?.max(j_deviation(g, &rs)?))
    })?);
    out.push(expansion_order("metric determinant", 2.0, gs, |g| {
        Ok(det_deviation(g, &ra)?.max(det_deviation(g, &rs)?))
    })?);
    out.push(expansion_order("transported phase", 2.0, gs, |g| {
        Ok(phase_deviation(g, &k, &ra)?.max(phase_deviation(g, &k, &rs)?))
    })?);
    out.push(expansion_order("screened static potential", 2.0, gs, |g| {
        Ok(yukawa_deviation(g, 1.0, &ra)?.max(yukawa_deviation(g, 1.0, &rs)?))
    })?);
    out.push(expansion_order("static charge potential", 2.0, gs, |g| {
        Ok(coulomb_deviation(g, 1.0, &ra)?.max(coulomb_deviation(g, 1.0, &rs)?))
    })?);
    out.push(expansion_order("transverse amplitude columns", 2.0, gs, |g| {
        Ok(em_amplitude_deviation(g, &ra)?.max(em_amplitude_deviation(g, &rs)?))
    })?);
    out.push(expansion_order("image metric", 2.0, gs, |g| {
        image_metric_deviation(g, &tt)
    })?);
    out.push(expansion_order("image connection", 2.0, gs, |g| {
        image_connection_deviation(g, &tt)
    })?);
    out.push(expansion_order("weight exponent", 4.0, gs, |g| {
        weight_exponent_deviation(g)
    })?);
    Ok(out)
}

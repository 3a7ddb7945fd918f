//! Result records and writers.
//!
//! A verification run produces one [`CheckRecord`] per (suite, identity):
//! the worst residual seen, where it happened, and the tolerance it was
//! held against. Writers render record lists as CSV (17 significant
//! digits, stable column order) or JSON, front samples as CSV or a small
//! hand-drawn SVG profile.

use serde::Serialize;

use crate::support::linalg::V4;
use crate::wavefronts::FrontSample;
use crate::{Error, Result};

/// Worst-case outcome of one identity over all sampled points and g values.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub identity: String,
    /// number of (point, g) evaluations aggregated into this row
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// deformation parameter at the worst sample
    pub g_at_max: f64,
    /// evaluation point of the worst sample
    pub argmax: V4,
    pub pass: bool,
}

/// Running worst-case aggregation for one identity. NaN residuals are
/// sticky: once seen, the record cannot pass.
#[derive(Debug, Clone)]
pub struct Aggregator {
    suite: &'static str,
    identity: String,
    tolerance: f64,
    samples: usize,
    max_residual: f64,
    g_at_max: f64,
    argmax: V4,
}

impl Aggregator {
    pub fn new(suite: &'static str, identity: impl Into<String>, tolerance: f64) -> Self {
        Aggregator {
            suite,
            identity: identity.into(),
            tolerance,
            samples: 0,
            max_residual: 0.0,
            g_at_max: 0.0,
            argmax: [0.0; 4],
        }
    }

    pub fn feed(&mut self, g: f64, point: &V4, residual: f64) {
        self.samples += 1;
        if self.max_residual.is_nan() {
            return;
        }
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
            self.g_at_max = g;
            self.argmax = *point;
        }
    }

    pub fn finish(self) -> CheckRecord {
        let pass = self.max_residual <= self.tolerance;
        CheckRecord {
            suite: self.suite,
            identity: self.identity,
            samples: self.samples,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            g_at_max: self.g_at_max,
            argmax: self.argmax,
            pass,
        }
    }
}

/// Float formatting used in every CSV cell: 17 significant digits, enough
/// to round-trip f64 exactly.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CHECK_CSV_HEADER: &str =
    "suite,identity,samples,max_residual,tolerance,g_at_max,r0,r1,r2,r3,pass";

pub fn checks_to_csv(records: &[CheckRecord]) -> String {
    let mut out = String::from(CHECK_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.suite,
            r.identity,
            r.samples,
            fmt_f(r.max_residual),
            fmt_f(r.tolerance),
            fmt_f(r.g_at_max),
            fmt_f(r.argmax[0]),
            fmt_f(r.argmax[1]),
            fmt_f(r.argmax[2]),
            fmt_f(r.argmax[3]),
            if r.pass { "pass" } else { "FAIL" },
        ));
    }
    out
}

pub fn checks_to_json(records: &[CheckRecord]) -> Result<String> {
    serde_json::to_string_pretty(records)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))
}

pub const FRONT_CSV_HEADER: &str = "g,R0,Rperp,azimuth,R1,R2,R3";

pub fn front_to_csv(samples: &[FrontSample]) -> String {
    let mut out = String::from(FRONT_CSV_HEADER);
    out.push('\n');
    for s in samples {
        for p in &s.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt_f(s.g),
                fmt_f(s.r0),
                fmt_f(p.r_perp),
                fmt_f(p.azimuth),
                fmt_f(p.r1),
                fmt_f(p.r2),
                fmt_f(p.r3),
            ));
        }
    }
    out
}

/// Meridian profile of each sampled front as an SVG polyline: horizontal
/// axis R^1 (propagation), vertical axis the transverse radius mirrored to
/// both signs. Pure string assembly, no drawing dependency.
pub fn front_to_svg(samples: &[FrontSample]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 600.0;
    const MARGIN: f64 = 50.0;
    let mut profiles: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymax: f64 = 0.0;
    for s in samples {
        // one meridian: the first azimuth of each transverse radius
        let mut seen = Vec::new();
        let mut prof = Vec::new();
        for p in &s.points {
            if seen.last().map(|&v: &f64| v == p.r_perp) != Some(true) {
                seen.push(p.r_perp);
                prof.push((p.r1, p.r_perp));
                xmin = xmin.min(p.r1);
                xmax = xmax.max(p.r1);
                ymax = ymax.max(p.r_perp);
            }
        }
        profiles.push((format!("g={} R0={}", s.g, s.r0), prof));
    }
    if !xmin.is_finite() || !xmax.is_finite() || xmax == xmin {
        xmin = -1.0;
        xmax = 1.0;
    }
    if ymax == 0.0 {
        ymax = 1.0;
    }
    let sx = (W - 2.0 * MARGIN) / (xmax - xmin);
    let sy = (H - 2.0 * MARGIN) / (2.0 * ymax);
    let px = |x: f64| MARGIN + (x - xmin) * sx;
    let py = |y: f64| H / 2.0 - y * sy;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    );
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\"/>\n",
        MARGIN,
        H / 2.0,
        W - MARGIN,
        H / 2.0
    ));
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    for (i, (label, prof)) in profiles.iter().enumerate() {
        let color = colors[i % colors.len()];
        for mirror in [1.0, -1.0] {
            let pts: Vec<String> = prof
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(mirror * y)))
                .collect();
            svg.push_str(&format!(
                "  <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                color,
                pts.join(" ")
            ));
        }
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" fill=\"{}\" font-size=\"13\">{}</text>\n",
            MARGIN + 6.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            color,
            label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

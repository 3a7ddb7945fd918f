//! Numerical library for a one-parameter deformation of Minkowski space.
//!
//! A single real parameter `g` bends the pseudoeuclidean norm into a
//! direction-dependent one. Everything downstream of that norm is computed
//! here: the metric tensor and its Cartan/curvature tensors, two nonlinear
//! coordinate maps that flatten the geometry (an isometry onto a constant
//! metric, and a conformal map onto the genuinely flat metric), exact scalar,
//! electromagnetic and spinor field solutions carried through those maps,
//! the geometry of zero-phase wavefronts, and exponentially suppressed
//! momentum-space weights.
//!
//! At `g = 0` every object reduces to its special-relativistic value; the
//! test suite checks that limit, all closed-form identities, finite-difference
//! cross-checks of every derivative object, and the `O(g²)` scaling of every
//! first-order approximation.
//!
//! Entry points:
//!
//! - [`core`] — deformation constants, norms, metric, Cartan and curvature
//!   tensors, orthonormal frames, geodesics
//! - [`quasi`] — the norm-preserving nonlinear map and its constant metric
//! - [`conformal`] — the conformal multiplier, flat coordinates, flatness
//!   certificate, wave phase
//! - [`fields`] — scalar / electromagnetic / spinor solutions, conservation
//!   residuals, momentum operators
//! - [`regulators`] — momentum-space suppression weights and their
//!   normalizations
//! - [`wavefronts`] — zero-phase front geometry
//! - [`o1g`] — first-order-in-`g` expansions and convergence-order fits
//! - [`verify`] — the machine-checkable identity suites behind the CLI
//!
//! The `examples/` directory has one runnable program per capability; the
//! thin `finsleroid` binary exposes the same machinery as `verify`, `front`,
//! `field` and `weights` subcommands.

pub mod cli;
pub mod conformal;
pub mod core;
pub mod fields;
pub mod o1g;
pub mod quasi;
pub mod regulators;
pub mod report;
pub mod support;
pub mod verify;
pub mod wavefronts;

/// Errors for operations with restricted domains.
///
/// Numerical-domain failures (cone proximity, wrong sector, root-finder
/// breakdown) are typed so callers can distinguish them from usage errors;
/// the CLI maps them onto its own exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter must be finite, got {0}")]
    NonFinite(f64),
    #[error("point lies within the guard band of a singular locus ({locus}: |{value:.3e}| < {band:.3e} * scale)")]
    ConeProximity {
        locus: &'static str,
        value: f64,
        band: f64,
    },
    #[error("operation requires the {expected} sector, point classifies as {found}")]
    SectorMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("frame formulas are real-valued only in the timelike sector, point classifies as {0}")]
    FrameSector(&'static str),
    #[error("branch condition violated: {0}")]
    Branch(&'static str),
    #[error("dispersion root-finder failed to converge: {0}")]
    Dispersion(String),
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("wave vector off shell: |k.k - m^2| = {0:.3e}")]
    OffShell(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Numerical support: small fixed-size linear algebra, finite differences
//! with Richardson extrapolation, special functions, quadrature, and
//! least-squares order fits.

pub mod fit;
pub mod linalg;
pub mod numdiff;
pub mod quad;
pub mod special;

//! Core geometry: the deformation constants, the deformed norm on vectors
//! and its dual on covectors, the direction-dependent metric tensor, Cartan
//! and curvature tensors, invariant orthonormal frames, and geodesic flow.

pub mod cartan;
pub mod frames;
pub mod geodesic;
pub mod metric;
pub mod norm;
pub mod param;

pub use cartan::{cartan_closed, cartan_fd, cartan_trace, curvature_tensor, indicatrix_curvature};
pub use frames::{invariant_frame, ricci_rotation, Frame4};
pub use geodesic::{geodesic_accel, integrate_geodesic, GeodesicState};
pub use metric::{angular_part, metric_closed, metric_fd, metric_inverse, r_lower, unit_covector};
pub use norm::{
    aux_forms, cone_factors, fhf, fmf, require_regular, sector, spatial_norm, AuxForms, Sector,
};
pub use param::DeformParam;

//! Eisenhart lift of the Schwarzian model: a 4d metric of signature
//! `(+,+,−,−)` whose null geodesics reduce to `S(ρ) = λ`.

pub mod curvature;
pub mod einstein;
pub mod geodesic;
pub mod killing;
pub mod metric;

pub use curvature::{christoffel, curvature, curvature_fd, Curvature, RiemannSymmetry};
pub use einstein::{einstein_residual, einstein_residual_in, stress_tensor, stress_tensor_at};
pub use geodesic::{geodesic_flow, geodesic_flow_in, h4d, h4d_in, GeodesicPhase, GeodesicState};
pub use killing::{
    covariant_constancy_residual, covariant_constancy_residual_in, killing_residual,
    killing_residual_in, KillingField,
};
pub use metric::{
    metric_at, Coord4, EisenhartMetric, MetricField, MetricPoint, PerturbedEisenhart,
};

//! Numerical toolkit for Schwarzian mechanics.
//!
//! * [`jet`], [`schwarzian`], [`mobius`], [`sampled`]: the Schwarzian
//!   derivative on exact third-order jets and on sampled paths, and its
//!   invariance under fractional linear maps.
//! * [`coset`]: the SL(2,R)×R generators, their action on the Goldstone
//!   fields, Maurer–Cartan forms and the inverse Higgs reduction.
//! * [`dynamics`]: the model `S(ρ) = λ` as a third-order equation, a
//!   two-field Lagrangian system and its Hamiltonian, with Noether charges.
//! * [`geometry`]: the 4d Eisenhart metric, its curvature, Killing fields,
//!   Einstein equations and null geodesics.

pub mod coset;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod mobius;
pub mod ode;
pub mod sampled;
pub mod schwarzian;

pub use error::{Error, Result};
pub use jet::Jet3;
pub use mobius::{mobius_apply, Mobius};
pub use ode::{IntegratorConfig, Method};
pub use sampled::{schwarzian_sampled, SampledPath};
pub use schwarzian::{schwarzian_compose_law_residual, schwarzian_jet};

use thiserror::Error;

/// Failures raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The first derivative is too small for the Schwarzian to be defined.
    #[error("velocity {velocity:e} is below the singular threshold {eps:e}")]
    VelocityVanishes { velocity: f64, eps: f64 },

    /// The Möbius denominator `c·ρ + d` vanished.
    #[error("Möbius denominator {denominator:e} is below the pole threshold {eps:e}")]
    PoleCrossing { denominator: f64, eps: f64 },

    #[error("Möbius matrix is degenerate (ad - bc = {det:e})")]
    DegenerateMobius { det: f64 },

    #[error("stencil at index {index} does not fit in a path of {len} samples")]
    IndexOutOfStencil { index: usize, len: usize },

    #[error("sampled path is invalid: {0}")]
    InvalidPath(String),

    /// `|u|` is large enough for `e^{±u}` to overflow.
    #[error("exponent u = {u:e} is out of range")]
    ExponentOverflow { u: f64 },

    #[error("logarithm argument {value:e} is not positive")]
    NegativeArgument { value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The trajectory reached the singular locus `ρ̇ = 0`.
    #[error("velocity {velocity:e} vanished at t = {t}")]
    VelocityVanishesAt { t: f64, velocity: f64 },

    #[error("trajectory blew up at t = {t} (|value| = {value:e})")]
    BlowUp { t: f64, value: f64 },

    #[error("step limit {max_steps} exceeded at t = {t}")]
    StepLimitExceeded { t: f64, max_steps: usize },

    #[error("adaptive step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    /// A geodesic with `p_v = 0` cannot be reduced along `v`.
    #[error("geodesic with p_v = 0 is not null-reducible")]
    NonReducible,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

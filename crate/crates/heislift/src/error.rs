//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// Every operation in the library is a pure function returning `Result`;
/// no operation panics or produces NaN for a diagnosable failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A finite-difference stencil touched a non-finite value.
    #[error("derivative stencil produced a non-finite value")]
    NonFiniteDerivative,

    /// Denominator of a Möbius-type action is numerically zero.
    #[error("singular denominator in group action (|ic·ζ + d| = {0:e})")]
    SingularDenominator(f64),

    /// A curve carries fewer samples than the operation needs.
    #[error("curve has too few samples ({got}, need at least {need})")]
    TooFewSamples { got: usize, need: usize },

    /// A length was requested for a curve that fails the horizontality gate.
    #[error("curve is not horizontal (defect {defect:e} exceeds tolerance {tol:e})")]
    NotHorizontal { defect: f64, tol: f64 },

    /// A point that must lie in the left half-plane ℒ = {Re ζ < 0} does not.
    #[error("point ξ + iη = {re} + {im}i is not in the left half-plane")]
    LeftHalfPlaneViolation { re: f64, im: f64 },

    /// Endpoints of a supposedly closed curve differ beyond tolerance.
    #[error("curve is not closed (endpoint gap {gap:e})")]
    NotClosed { gap: f64 },

    /// |f_I| vanished where a logarithmic derivative was required.
    #[error("map image vanishes (|f_I| below 1e-150)")]
    ZeroImage,

    /// λ (or λ*) came out non-positive: the map reverses orientation here.
    #[error("map is orientation-reversing (λ = {0:e})")]
    OrientationReversed(f64),

    /// λ₂ ≤ 0: the differential is degenerate, the map is not quasiconformal here.
    #[error("degenerate map (λ₂ = {0:e})")]
    DegenerateMap(f64),

    /// Adaptive quadrature failed to converge within the maximum bisection depth.
    #[error("quadrature did not converge within depth {0}")]
    QuadratureNonConvergence(u32),

    /// A planar map failed the symplectic gate.
    #[error("map is not symplectic (max residual {residual:e} > {tol:e})")]
    NotSymplectic { residual: f64, tol: f64 },

    /// SU(1,1) parameters violate ad + bc = 1.
    #[error("SU(1,1) determinant violation (|ad + bc - 1| = {0:e})")]
    DeterminantViolation(f64),

    /// Input lies outside an operation's domain.
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// A curve file failed to parse.
    #[error("malformed curve file: {0}")]
    MalformedCurveFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

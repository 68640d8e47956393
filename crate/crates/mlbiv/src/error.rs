//! Error and warning types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by evaluation routines.
#[derive(Debug, Clone, Error)]
pub enum MlbivError {
    /// Gamma has a pole at (or within tolerance of) the requested point.
    #[error("gamma pole at or within 1e-12 of z = {0}")]
    PoleAtZ(Complex64),

    /// Adaptive quadrature exhausted its node budget before reaching the
    /// requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),

    /// The integrand does not decay fast enough at the truncation radius for
    /// the ray tails to be summed reliably.
    #[error("integrand tail not negligible at truncation radius: {0}")]
    TailNotNegligible(String),

    /// Series summation exceeded the diagonal/term budget.
    #[error("series did not converge within {0} diagonals")]
    SeriesNoConvergence(usize),

    /// A residue-term denominator x^(beta/alpha) - y (or its mirror) is too
    /// close to zero for the representation to be used.
    #[error("degenerate residue denominator: |{0}| below threshold")]
    DegenerateDenominator(f64),

    /// No admissible contour keeps both arguments clear of the scaled paths.
    #[error("no admissible contour found after bounded (epsilon, eta) search")]
    NoAdmissibleContour,

    /// Parameter or argument violates a method hypothesis.
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    /// Every applicable method failed; causes are listed per method.
    #[error("all methods failed: {}", .0.join("; "))]
    AllMethodsFailed(Vec<String>),

    /// Neither the series nor the contour oracle converged at the sample
    /// radii requested by a decay check.
    #[error("no oracle available: {0}")]
    OracleUnavailable(String),

    /// Malformed sweep or configuration input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, MlbivError>;

/// Non-fatal conditions reported alongside a value.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Catastrophic cancellation detected in series summation; the quoted
    /// ratio is max partial-sum magnitude over result magnitude.
    CancellationLoss { ratio: f64 },
    /// An argument lies within 1e-6 radians of a sector boundary, where the
    /// asymptotic case assignment is fragile.
    SectorBoundary { arg: f64, boundary: f64 },
    /// Asymptotic evaluation requested below its validity floor.
    ValidityFloor { min_modulus: f64, floor: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::CancellationLoss { ratio } => {
                write!(f, "cancellation-loss ratio {ratio:.3e}")
            }
            Warning::SectorBoundary { arg, boundary } => {
                write!(f, "arg {arg:.6} within 1e-6 of sector boundary {boundary:.6}")
            }
            Warning::ValidityFloor { min_modulus, floor } => {
                write!(f, "min modulus {min_modulus:.3} below asymptotic floor {floor}")
            }
        }
    }
}

use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the evaluation engines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Rank outside the supported range for the requested operation.
    RankUnsupported { rank: usize },
    /// A vector argument has the wrong length.
    DimensionMismatch { expected: usize, found: usize },
    /// The multiplicity is not of the form m(ℓ) with m standard.
    NotRepresentable,
    /// The τ layer requires m_l = 1.
    LongMultiplicityNotOne,
    /// Gamma function evaluated at a nonpositive integer.
    PoleAtNonpositiveInteger,
    /// Lower ₂F₁ parameter is a nonpositive integer.
    ParameterPole,
    /// Series did not reach the requested accuracy.
    NonConvergent,
    /// Quadrature levels diverge.
    NonIntegrableEndpoint,
    /// A c-function numerator factor sits at a pole.
    NumeratorPole { root: usize },
    /// The c-function normalisation c̃(ρ) is zero or infinite.
    CFunctionPole,
    /// ⟨μ, μ−2λ⟩ vanishes for the given lattice point.
    GenericityViolation { mu: Vec<u32> },
    /// Point is not in the positive chamber with the required margin.
    OutsideChamber,
    /// Consecutive shell contributions do not decay.
    TruncationNotConverged,
    /// The layered Cherednik system has no consistent solution.
    InconsistentSystem { degree: usize, residual: f64 },
    /// Reflection difference not divisible by the root.
    DivisionNotExact { degree: usize },
    /// Layer linear system is singular.
    SingularLayer { degree: usize },
    /// Requested Taylor degree too large.
    DegreeTooLarge { degree: usize },
    /// Point outside the Taylor trust radius.
    OutsideTrustRadius,
    /// Spectral parameter outside the integral representation's strip.
    StripViolation,
    /// No evaluation method applies to the request.
    MethodUnavailable,
    /// Finite-difference stencil touches a singular hyperplane.
    SingularPoint,
    /// Coefficient table exceeds the memory cap.
    TableTooLarge,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RankUnsupported { rank } => write!(f, "rank {rank} is not supported"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            Error::NotRepresentable => f.write_str("multiplicity is not in M+ or M3"),
            Error::LongMultiplicityNotOne => f.write_str("tau functions require m_l = 1"),
            Error::PoleAtNonpositiveInteger => f.write_str("gamma function pole"),
            Error::ParameterPole => f.write_str("hypergeometric parameter c is a nonpositive integer"),
            Error::NonConvergent => f.write_str("series did not converge"),
            Error::NonIntegrableEndpoint => f.write_str("quadrature diverges at an endpoint"),
            Error::NumeratorPole { root } => write!(f, "c-function numerator pole at root {root}"),
            Error::CFunctionPole => f.write_str("c-function normalisation is singular"),
            Error::GenericityViolation { mu } => write!(f, "non-generic spectral parameter at mu = {mu:?}"),
            Error::OutsideChamber => f.write_str("point outside the positive chamber margin"),
            Error::TruncationNotConverged => f.write_str("Harish-Chandra series truncation did not converge"),
            Error::InconsistentSystem { degree, residual } => {
                write!(f, "inconsistent layer system at degree {degree} (residual {residual:e})")
            }
            Error::DivisionNotExact { degree } => write!(f, "inexact root division at degree {degree}"),
            Error::SingularLayer { degree } => write!(f, "singular layer system at degree {degree}"),
            Error::DegreeTooLarge { degree } => write!(f, "Taylor degree {degree} too large"),
            Error::OutsideTrustRadius => f.write_str("point outside the Taylor trust radius"),
            Error::StripViolation => f.write_str("spectral parameter outside the integral strip"),
            Error::MethodUnavailable => f.write_str("no evaluation method applies"),
            Error::SingularPoint => f.write_str("stencil touches a singular hyperplane"),
            Error::TableTooLarge => f.write_str("coefficient table too large"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

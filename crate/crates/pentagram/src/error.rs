//! Error type shared by every module.

use thiserror::Error;

/// Everything that can go wrong in the laboratory.
///
/// Degeneracy errors (`MapUndefined`, `NonGeneric`, ...) are expected
/// outcomes on the complement of the generic stratum and map to exit code 3
/// in the CLI; the remaining variants are contract violations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate line: the two points coincide projectively")]
    DegenerateLine,
    #[error("degenerate intersection: the two lines coincide projectively")]
    DegenerateIntersection,
    #[error("degenerate diagonal while applying the pentagram map at vertex {0}")]
    DegenerateDiagonal(usize),
    #[error("pentagram map undefined: {0}")]
    MapUndefined(String),
    #[error("pentagram map undefined at orbit step {0}")]
    MapUndefinedAtStep(usize),
    #[error("chain violates genericity: three consecutive vertices are collinear near index {0}")]
    DegenerateChain(usize),
    #[error("n = {0} is divisible by 3: the (a, b) coordinates do not exist")]
    IndivisibilityViolated(usize),
    #[error("lift inconsistent: coefficient of V_j deviates from 1 by {0:.3e}")]
    InconsistentLift(f64),
    #[error("unsupported vertex count n = {0}: {1}")]
    UnsupportedN(usize, &'static str),
    #[error("lambda denominator product vanishes at index {0}")]
    DegenerateLambda(usize),
    #[error("gauge constraint violated: |product - 1| = {0:.3e}")]
    ConstraintViolated(f64),
    #[error("no preimage: the multiplicative system for (a, b) is inconsistent")]
    NoPreimage,
    #[error("trace support mismatch: exponent {exponent} outside the window [{lo}, {hi}]")]
    SupportMismatch { exponent: i64, lo: i64, hi: i64 },
    #[error("non-generic spectral data: {0}")]
    NonGeneric(String),
    #[error("eigenvalues too close to a branch point (relative gap {0:.3e})")]
    NearBranchPoint(f64),
    #[error("spectral function is undefined at z = 0")]
    ZeroZ,
    #[error("degenerate expansion data: {0}")]
    Degenerate(String),
    #[error("sheet tracking failed: {0}")]
    SheetTrackingFailed(String),
    #[error("division by zero in Casimir map")]
    DivisionByZero,
    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("invalid polygon file: {0}")]
    InvalidFile(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for the errors that signal a degenerate input rather than a bug
    /// or a failed check (CLI exit code 3).
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::DegenerateLine
                | Error::DegenerateIntersection
                | Error::DegenerateDiagonal(_)
                | Error::MapUndefined(_)
                | Error::MapUndefinedAtStep(_)
                | Error::DegenerateChain(_)
                | Error::DegenerateLambda(_)
                | Error::NonGeneric(_)
                | Error::NearBranchPoint(_)
                | Error::Degenerate(_)
                | Error::SheetTrackingFailed(_)
                | Error::GenerationFailed(_)
        )
    }
}

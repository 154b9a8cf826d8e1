use thiserror::Error;

/// Errors raised by the evaluation, spectral and checking routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },

    #[error("matrix is not upper-triangular: a[{i}][{j}] = {value}")]
    NotTriangular { i: usize, j: usize, value: f64 },

    #[error("declared structure `{declared}` does not hold: {reason}")]
    StructureMismatch { declared: String, reason: String },

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("spectrum has a nonreal node {re} + {im}i")]
    ComplexSpectrum { re: f64, im: f64 },

    #[error("circulant evaluation left an imaginary residue {residue:e} (bound {bound:e})")]
    ImaginaryResidue { residue: f64, bound: f64 },

    #[error("diagonal blocks have overlapping spectra: {0}")]
    SpectraOverlap(String),

    #[error("polynomial does not annihilate the matrix: ||p(A)||_max = {residual:e} > {bound:e}")]
    NotAnnihilating { residual: f64, bound: f64 },

    #[error("series terms kept growing for {terms} consecutive terms")]
    SeriesDivergenceGuard { terms: usize },

    #[error("anti-bidiagonal power pattern violated at A^{power}[{i}][{j}]: {detail}")]
    PatternViolation {
        power: usize,
        i: usize,
        j: usize,
        detail: String,
    },

    #[error("function is neither even nor odd")]
    MixedParity,

    #[error("parity factor `{0}` has no closed form for this function")]
    ParityFactorUnavailable(&'static str),

    #[error("shift r = {r} is below the spectral radius {radius}")]
    ShiftTooSmall { r: f64, radius: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

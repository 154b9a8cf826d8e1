//! Primary matrix functions on structured nonnegative matrices, and
//! checkers deciding whether an entire function preserves entrywise
//! nonnegativity on a given matrix class.
//!
//! `f(A)` can be evaluated by several independent routes (Taylor series,
//! Newton interpolation on the spectrum, the explicit triangular expansion,
//! circulant diagonalization, the block-triangular Sylvester formula and
//! the companion-matrix formula). [`matfun::apply_taylor`] is the reference
//! every other route is tested against.

pub mod checkers;
pub mod divdiff;
pub mod error;
pub mod funcspec;
pub mod matfun;
pub mod niep;
pub mod spectra;
pub mod structmat;

pub use checkers::{CheckReport, MatrixClass, SamplerConfig, Verdict, Witness};
pub use divdiff::{divided_difference, DivDiffResult};
pub use error::{Error, Result};
pub use funcspec::{FunctionSpec, Named, ParityParts, Polynomial, RationalPolynomial};
pub use matfun::{Matrix, Structure, SylvesterSolution};
pub use niep::SpectrumTuple;
pub use spectra::{Spectrum, SpectrumMethod};
pub use structmat::AntiBidiagonalSpec;

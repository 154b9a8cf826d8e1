//! Constructors and verifiers for the structured matrices: the nilpotent
//! shift, circulants, symmetric anti-bidiagonal matrices and their power
//! patterns, and the two embeddings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matfun::{Matrix, Structure};

/// Ones on the first superdiagonal.
pub fn shift_nilpotent(n: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| if j == i + 1 { 1.0 } else { 0.0 }).tagged(Structure::UpperTriangular)
}

/// Circulant whose rows are successive cyclic right-shifts of `row`.
pub fn circulant_from_row(row: &[f64]) -> Matrix {
    let n = row.len();
    Matrix::from_fn(n, |i, j| row[(j + n - i) % n]).tagged(Structure::Circulant)
}

/// Upper-triangular Toeplitz matrix with `c[k]` on the `k`-th superdiagonal.
pub fn upper_toeplitz(c: &[f64]) -> Matrix {
    Matrix::from_fn(c.len(), |i, j| if j >= i { c[j - i] } else { 0.0 }).tagged(Structure::UpperTriangular)
}

/// Parameters `(a_1, ..., a_n)` of a symmetric anti-bidiagonal matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntiBidiagonalSpec {
    pub a: Vec<f64>,
}

impl AntiBidiagonalSpec {
    pub fn new(a: impl Into<Vec<f64>>) -> Result<Self> {
        let a = a.into();
        if a.is_empty() {
            return Err(Error::InvalidInput("anti-bidiagonal matrix needs n >= 1".into()));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("anti-bidiagonal entries must be finite".into()));
        }
        Ok(AntiBidiagonalSpec { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `a_k`, one-based.
    pub fn a(&self, k: usize) -> f64 {
        self.a[k - 1]
    }
}

/// The symmetric anti-bidiagonal matrix of `spec`.
///
/// Walking the anti-band from the corner `(1, n)` the entries read
/// `a_n, a_{n-1}, ..., a_1`, alternating between the antidiagonal and the
/// band just below it (1-based positions `(s+1, n-s)` then `(s+2, n-s)`),
/// mirrored to keep the matrix symmetric. `a_1` lands on the diagonal.
pub fn anti_bidiagonal(spec: &AntiBidiagonalSpec) -> Matrix {
    let n = spec.n();
    let mut m = Matrix::zeros(n, n);
    for t in 0..n {
        let s = t / 2;
        // zero-based row and column of position p_t
        let (i, j) = if t % 2 == 0 { (s, n - 1 - s) } else { (s + 1, n - 1 - s) };
        let v = spec.a(n - t);
        m.set(i, j, v);
        m.set(j, i, v);
    }
    m.tagged(Structure::AntiBidiagonal)
}

/// Outcome of [`antipower_pattern_verify`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternReport {
    pub n: usize,
    pub qmax: usize,
    pub zero_entries_checked: usize,
    pub products_checked: usize,
    /// Largest absolute value met on a supposedly zero entry.
    pub max_zero_residual: f64,
    /// Largest relative error of a product identity.
    pub max_product_error: f64,
}

/// Checks the zero patterns and corner products of the powers of an
/// anti-bidiagonal matrix (1-based indices throughout):
///
/// * `A^{2q-1}_{ij} = 0` for `2 <= i + j <= n - q + 1`;
/// * `A^{2q}_{ij} = 0` for `1 + q <= j - i <= n - 1`;
/// * `A^{2q-1}_{1, n-q+1} = a_n a_{n-1} ... a_{n-2q+2}`, `q <= (n+1)/2`;
/// * `A^{2q}_{1, 1+q} = a_n a_{n-1} ... a_{n-2q+1}`, `q <= n/2`.
pub fn antipower_pattern_verify(spec: &AntiBidiagonalSpec, qmax: usize) -> Result<PatternReport> {
    let n = spec.n();
    let a = anti_bidiagonal(spec);
    let mut report = PatternReport {
        n,
        qmax,
        zero_entries_checked: 0,
        products_checked: 0,
        max_zero_residual: 0.0,
        max_product_error: 0.0,
    };
    let mut powers = vec![Matrix::identity(n)];
    for p in 1..=2 * qmax {
        let next = powers[p - 1].matmul(&a);
        powers.push(next);
    }
    let get = |p: usize, i: usize, j: usize| powers[p].get(i - 1, j - 1);

    let zero = |report: &mut PatternReport, p: usize, i: usize, j: usize| -> Result<()> {
        let v = get(p, i, j);
        report.zero_entries_checked += 1;
        report.max_zero_residual = report.max_zero_residual.max(v.abs());
        if v.abs() > 1e-12 {
            return Err(Error::PatternViolation {
                power: p,
                i,
                j,
                detail: format!("expected 0, found {v:e}"),
            });
        }
        Ok(())
    };
    for q in 1..=qmax {
        for i in 1..=n {
            for j in 1..=n {
                if i + j >= 2 && i + j + q <= n + 1 {
                    zero(&mut report, 2 * q - 1, i, j)?;
                }
                if j >= i + 1 + q {
                    zero(&mut report, 2 * q, i, j)?;
                }
            }
        }
    }

    let product = |report: &mut PatternReport, p: usize, j: usize, len: usize| -> Result<()> {
        let expected: f64 = (0..len).map(|t| spec.a(n - t)).product();
        let v = get(p, 1, j);
        let err = (v - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        report.products_checked += 1;
        report.max_product_error = report.max_product_error.max(err);
        if (v - expected).abs() > 1e-10 * expected.abs() {
            return Err(Error::PatternViolation {
                power: p,
                i: 1,
                j,
                detail: format!("expected product {expected}, found {v}"),
            });
        }
        Ok(())
    };
    for q in 1..=qmax {
        if q <= n.div_ceil(2) {
            product(&mut report, 2 * q - 1, n - q + 1, 2 * q - 1)?;
        }
        if q <= n / 2 {
            product(&mut report, 2 * q, 1 + q, 2 * q)?;
        }
    }
    Ok(report)
}

/// `diag(A, 0)`.
pub fn embed_pad_zero(a: &Matrix) -> Matrix {
    let n = a.order();
    let mut b = Matrix::zeros(n + 1, n + 1);
    b.set_block(0, 0, a);
    match a.structure() {
        s @ (Structure::UpperTriangular | Structure::Symmetric) => b.tagged(s),
        _ => b,
    }
}

/// `[[0, B], [B, 0]]` for symmetric `B`, with an extra zero row and column
/// when `odd_pad` is set.
pub fn embed_antidiag(b: &Matrix, odd_pad: bool) -> Result<Matrix> {
    if !b.is_square() {
        return Err(Error::InvalidInput("embedded block must be square".into()));
    }
    b.verify(Structure::Symmetric)?;
    let m = b.order();
    let size = 2 * m + usize::from(odd_pad);
    let mut a = Matrix::zeros(size, size);
    a.set_block(0, m, b);
    a.set_block(m, 0, b);
    Ok(a.tagged(Structure::Symmetric))
}

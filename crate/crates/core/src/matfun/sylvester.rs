use crate::error::{Error, Result};
use crate::spectra::{diagonal_spectrum, sym_eigs, Spectrum};

use super::{Matrix, Structure};

const GAP_TOL: f64 = 1e-8;

/// Solution of `AX - XC = B` with its max-norm residual.
#[derive(Clone, Debug, PartialEq)]
pub struct SylvesterSolution {
    pub x: Matrix,
    pub residual: f64,
}

// Real spectrum when the block is visibly triangular or symmetric.
fn spectrum_hint(m: &Matrix) -> Option<Spectrum> {
    if m.satisfies(Structure::UpperTriangular) {
        diagonal_spectrum(m).ok()
    } else if m.satisfies(Structure::Symmetric) {
        sym_eigs(m).ok()
    } else {
        None
    }
}

/// Solves `AX - XC = B` through the Kronecker system
/// `(I kron A - C^T kron I) vec(X) = vec(B)` by Gaussian elimination with
/// partial pivoting.
pub fn solve_sylvester(a: &Matrix, c: &Matrix, b: &Matrix) -> Result<SylvesterSolution> {
    if !a.is_square() || !c.is_square() || b.rows() != a.rows() || b.cols() != c.rows() {
        return Err(Error::InvalidInput(format!(
            "Sylvester shapes do not fit: A {}x{}, C {}x{}, B {}x{}",
            a.rows(),
            a.cols(),
            c.rows(),
            c.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if let (Some(sa), Some(sc)) = (spectrum_hint(a), spectrum_hint(c)) {
        let gap = sa
            .values
            .iter()
            .flat_map(|x| sc.values.iter().map(move |y| (x - y).norm()))
            .fold(f64::INFINITY, f64::min);
        if gap <= GAP_TOL {
            return Err(Error::SpectraOverlap(format!("eigenvalue gap {gap:e} between the diagonal blocks")));
        }
    }

    let (n1, n2) = (a.rows(), c.rows());
    let size = n1 * n2;
    // unknown x_{ij} sits at index i + n1 * j
    let mut k = vec![0.0; size * size];
    let mut rhs = vec![0.0; size];
    for j in 0..n2 {
        for i in 0..n1 {
            let r = i + n1 * j;
            rhs[r] = b.get(i, j);
            for l in 0..n1 {
                k[r * size + l + n1 * j] += a.get(i, l);
            }
            for l in 0..n2 {
                k[r * size + i + n1 * l] -= c.get(l, j);
            }
        }
    }
    let sol = gauss_solve(&mut k, &mut rhs, size)?;
    let x = Matrix::from_vec(n1, n2, (0..n1 * n2).map(|t| sol[(t % n2) * n1 + t / n2]).collect())?;
    let residual = (&(a * &x) - &(&x * c)).max_abs_diff(b);
    let bound = 1e-8 * (1.0 + b.max_norm());
    if residual >= bound {
        return Err(Error::SpectraOverlap(format!("residual {residual:e} exceeds {bound:e}")));
    }
    Ok(SylvesterSolution { x, residual })
}

fn gauss_solve(k: &mut [f64], rhs: &mut [f64], n: usize) -> Result<Vec<f64>> {
    let scale = k.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tiny = 1e-14 * scale.max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| k[p * n + col].abs().total_cmp(&k[q * n + col].abs()))
            .expect("nonempty pivot range");
        if k[piv * n + col].abs() <= tiny {
            return Err(Error::SpectraOverlap("Kronecker system is singular to working precision".into()));
        }
        if piv != col {
            for t in 0..n {
                k.swap(piv * n + t, col * n + t);
            }
            rhs.swap(piv, col);
        }
        let p = k[col * n + col];
        for r in col + 1..n {
            let factor = k[r * n + col] / p;
            if factor == 0.0 {
                continue;
            }
            for t in col..n {
                k[r * n + t] -= factor * k[col * n + t];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|t| k[r * n + t] * x[t]).sum();
        x[r] = (rhs[r] - s) / k[r * n + r];
    }
    Ok(x)
}

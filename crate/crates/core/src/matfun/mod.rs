//! Primary matrix functions `f(A)`.
//!
//! [`apply_taylor`] needs no spectral information and serves as the
//! reference; the other routes exploit structure.

mod matrix;
mod sylvester;

pub use matrix::{Matrix, Structure, SYMMETRY_TOL};
pub use sylvester::{solve_sylvester, SylvesterSolution};

use num_complex::Complex64;

use crate::divdiff::{divided_difference, newton_coefficients};
use crate::error::{Error, Result};
use crate::funcspec::{FunctionSpec, Named, Polynomial, Term};
use crate::spectra::{circ_eigenvalues, root_of_unity, Spectrum};
use crate::structmat::circulant_from_row;

const DIVERGENCE_RUN: usize = 200;
const MAX_SERIES_TERMS: usize = 2000;

fn require_square(a: &Matrix) -> Result<usize> {
    if a.is_square() && a.order() > 0 {
        Ok(a.order())
    } else {
        Err(Error::InvalidInput(format!("expected a nonempty square matrix, got {}x{}", a.rows(), a.cols())))
    }
}

/// `f(A)` by summing the Taylor series of `f` at `A`.
///
/// Polynomials use Horner's scheme. Named functions sum the series of
/// `A / 2^s` with `s = ceil(log2 max(1, ||A||_max))` and undo the scaling by
/// the doubling formulas.
pub fn apply_taylor(f: &FunctionSpec, a: &Matrix) -> Result<Matrix> {
    require_square(a)?;
    match f {
        FunctionSpec::Polynomial(p) => Ok(horner(p, a)),
        FunctionSpec::Named(name) => named_series(*name, a),
        FunctionSpec::Sum(terms) => {
            let mut out = Matrix::zeros(a.order(), a.order());
            for (w, term) in terms {
                let v = match term {
                    Term::Polynomial(p) => horner(p, a),
                    Term::Named(name) => named_series(*name, a)?,
                };
                out.axpy(*w, &v);
            }
            Ok(out)
        }
    }
}

/// `p(A)` by Horner's scheme.
pub fn horner(p: &Polynomial, a: &Matrix) -> Matrix {
    let c = p.coeffs();
    let mut out = Matrix::identity(a.order()).scale(c[c.len() - 1]);
    for &cj in c.iter().rev().skip(1) {
        out = out.matmul(a).shift(cj);
    }
    out
}

fn named_series(name: Named, a: &Matrix) -> Result<Matrix> {
    let n = a.order();
    let norm = a.max_norm();
    let s = if norm > 1.0 { norm.log2().ceil() as i32 } else { 0 };
    let b = a.scale(0.5_f64.powi(s));
    let alternating = matches!(name, Named::Sin | Named::Cos);

    let mut even = Matrix::identity(n);
    let mut odd = Matrix::zeros(n, n);
    let mut term = Matrix::identity(n);
    let mut prev_norm = 1.0;
    let mut growing = 0;
    let mut k = 0;
    loop {
        k += 1;
        if k > MAX_SERIES_TERMS {
            return Err(Error::SeriesDivergenceGuard { terms: k });
        }
        term = term.matmul(&b).scale(1.0 / k as f64);
        let sign = if alternating && (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
        let acc = if k % 2 == 0 { &mut even } else { &mut odd };
        acc.axpy(sign, &term);
        let t = term.max_norm();
        growing = if t > prev_norm { growing + 1 } else { 0 };
        if growing >= DIVERGENCE_RUN {
            return Err(Error::SeriesDivergenceGuard { terms: growing });
        }
        prev_norm = t;
        let partial = even.max_norm().max(odd.max_norm());
        if k > n && t < 1e-16 * (1.0 + partial) {
            break;
        }
    }

    // even/odd now hold cosh/sinh (or cos/sin) of B
    for _ in 0..s {
        let cc = even.matmul(&even);
        let ss = odd.matmul(&odd);
        let sc = odd.matmul(&even);
        even = if alternating { &cc - &ss } else { &cc + &ss };
        odd = sc.scale(2.0);
    }
    Ok(match name {
        Named::Exp => &even + &odd,
        Named::Cosh | Named::Cos => even,
        Named::Sinh | Named::Sin => odd,
    })
}

/// `f(A)` from the Newton form on the spectrum:
/// `f[r_1] I + f[r_1, r_2](A - r_1 I) + ... + f[r_1..r_n] prod (A - r_i I)`.
pub fn apply_newton(f: &FunctionSpec, a: &Matrix, spectrum: &Spectrum) -> Result<Matrix> {
    let n = require_square(a)?;
    if spectrum.len() != n {
        return Err(Error::InvalidInput(format!("spectrum has {} values for a matrix of order {n}", spectrum.len())));
    }
    let mut nodes = spectrum.real_values()?;
    nodes.sort_by(f64::total_cmp);
    let coef = newton_coefficients(f, &nodes)?;
    let mut out = Matrix::identity(n).scale(coef[0]);
    let mut prod = Matrix::identity(n);
    for j in 1..n {
        prod = prod.matmul(&a.shift(-nodes[j - 1]));
        out.axpy(coef[j], &prod);
    }
    Ok(out)
}

/// `f(A)` for upper-triangular `A` from the explicit chain expansion:
/// entry `(i, j)` sums `a_{i i1} ... a_{ik j} f[a_ii, a_{i1 i1}, ..., a_jj]`
/// over increasing chains `i < i1 < ... < ik < j`.
pub fn apply_triangular_explicit(f: &FunctionSpec, a: &Matrix) -> Result<Matrix> {
    let n = require_square(a)?;
    a.verify(Structure::UpperTriangular)?;
    let d = a.diag();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        out.set(i, i, f.eval_real(d[i]));
        for j in i + 1..n {
            let mut path = vec![d[i]];
            let mut sum = 0.0;
            chains(f, a, &d, i, j, 1.0, &mut path, &mut sum)?;
            out.set(i, j, sum);
        }
    }
    Ok(out.tagged(Structure::UpperTriangular))
}

#[allow(clippy::too_many_arguments)]
fn chains(
    f: &FunctionSpec,
    a: &Matrix,
    d: &[f64],
    u: usize,
    target: usize,
    prod: f64,
    path: &mut Vec<f64>,
    sum: &mut f64,
) -> Result<()> {
    for v in u + 1..=target {
        let w = a.get(u, v);
        if w == 0.0 {
            continue;
        }
        path.push(d[v]);
        if v == target {
            *sum += prod * w * divided_difference(f, path)?.value;
        } else {
            chains(f, a, d, v, target, prod * w, path, sum)?;
        }
        path.pop();
    }
    Ok(())
}

/// First row of `f(A)` for the circulant `A` with first row `row`:
/// `f_l = (1/n) sum_k w^{-lk} f(lambda_k)`.
pub fn apply_circulant(f: &FunctionSpec, row: &[f64]) -> Result<Vec<f64>> {
    let n = row.len();
    if n == 0 {
        return Err(Error::InvalidInput("circulant row is empty".into()));
    }
    let fl: Vec<Complex64> = circ_eigenvalues(row).into_iter().map(|z| f.eval(z)).collect();
    let scale = fl.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let mut out = Vec::with_capacity(n);
    let mut residue = 0.0_f64;
    for l in 0..n {
        let v = fl
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &fk)| acc + root_of_unity(n - (l * k) % n, n) * fk)
            / n as f64;
        residue = residue.max(v.im.abs());
        out.push(v.re);
    }
    let bound = 1e-9 * (1.0 + scale);
    if residue >= bound {
        return Err(Error::ImaginaryResidue { residue, bound });
    }
    Ok(out)
}

/// [`apply_circulant`] on a circulant-tagged or circulant-valued matrix.
pub fn apply_circulant_matrix(f: &FunctionSpec, a: &Matrix) -> Result<Matrix> {
    require_square(a)?;
    a.verify(Structure::Circulant)?;
    Ok(circulant_from_row(&apply_circulant(f, a.row(0))?))
}

/// `f(M)` for `M = [[A, B], [0, C]]` tagged block-upper-triangular:
/// `[[f(A), f(A) X - X f(C)], [0, f(C)]]` with `AX - XC = B`.
pub fn apply_block_triangular(f: &FunctionSpec, m: &Matrix) -> Result<Matrix> {
    let n = require_square(m)?;
    let Structure::BlockUpperTriangular { n1, n2 } = m.structure() else {
        return Err(Error::InvalidInput(format!("expected a block-upper-triangular matrix, got {}", m.structure())));
    };
    m.verify(m.structure())?;
    let a = m.submatrix(0, 0, n1, n1);
    let b = m.submatrix(0, n1, n1, n2);
    let c = m.submatrix(n1, n1, n2, n2);
    let x = solve_sylvester(&a, &c, &b)?.x;
    let fa = apply_taylor(f, &a)?;
    let fc = apply_taylor(f, &c)?;
    let top = &(&fa * &x) - &(&x * &fc);
    let mut out = Matrix::zeros(n, n);
    out.set_block(0, 0, &fa);
    out.set_block(0, n1, &top);
    out.set_block(n1, n1, &fc);
    Ok(out)
}

/// Companion matrix of the monic `p` (ascending coefficients): ones on the
/// subdiagonal and `-p_0, ..., -p_{m-1}` down the last column.
pub fn companion(p: &[f64]) -> Result<Matrix> {
    let m = monic_degree(p)?;
    let mut c = Matrix::zeros(m, m);
    for i in 0..m {
        if i + 1 < m {
            c.set(i + 1, i, 1.0);
        }
        c.set(i, m - 1, -p[i]);
    }
    Ok(c)
}

fn monic_degree(p: &[f64]) -> Result<usize> {
    if p.len() < 2 {
        return Err(Error::InvalidInput("annihilating polynomial must have degree at least 1".into()));
    }
    if p.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("polynomial coefficients must be finite".into()));
    }
    let lead = p[p.len() - 1];
    if (lead - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("polynomial is not monic (leading coefficient {lead})")));
    }
    Ok(p.len() - 1)
}

/// `f(A) = sum_j f(C)_{j1} A^{j-1}` with `C` the companion matrix of an
/// annihilating polynomial `p` of `A`.
pub fn apply_companion(f: &FunctionSpec, a: &Matrix, p: &[f64]) -> Result<Matrix> {
    let n = require_square(a)?;
    let m = monic_degree(p)?;
    if m > n {
        return Err(Error::InvalidInput(format!("polynomial degree {m} exceeds the matrix order {n}")));
    }
    let residual = horner(&Polynomial::new(p.to_vec()), a).max_norm();
    let bound = 1e-8 * (1.0 + a.max_norm().powi(m as i32));
    if residual > bound {
        return Err(Error::NotAnnihilating { residual, bound });
    }
    let fc = apply_taylor(f, &companion(p)?)?;
    let mut out = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for j in 0..m {
        if j > 0 {
            power = power.matmul(a);
        }
        out.axpy(fc.get(j, 0), &power);
    }
    Ok(out)
}

/// Characteristic polynomial `det(xI - A)`, ascending and monic, by the
/// Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(a: &Matrix) -> Result<Vec<f64>> {
    let n = require_square(a)?;
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = a.matmul(&mk).shift(c[n - k + 1]);
        c[n - k] = -a.matmul(&mk).trace() / k as f64;
    }
    Ok(c)
}

/// Monic polynomial with the given roots, ascending.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (j, &cj) in c.iter().enumerate() {
            next[j + 1] += cj;
            next[j] -= r * cj;
        }
        c = next;
    }
    c
}

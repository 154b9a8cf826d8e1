//! Small dense eigenvalue routines for the structured classes used here:
//! cyclic Jacobi for symmetric matrices, direct DFT sums for circulants,
//! diagonal read-off for triangular matrices and shifted power iteration
//! for the Perron root.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matfun::{Matrix, Structure};

const JACOBI_MAX_SWEEPS: usize = 50;
const JACOBI_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;
const POWER_TOL: f64 = 1e-10;

/// How a [`Spectrum`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    JacobiRotation,
    Dft,
    ClosedForm2x2,
    DiagonalReadoff,
    PowerIteration,
}

/// Eigenvalues sorted ascending by real part, then imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub method: SpectrumMethod,
}

impl Spectrum {
    pub fn new(mut values: Vec<Complex64>, method: SpectrumMethod) -> Self {
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Spectrum { values, method }
    }

    pub fn from_real(values: &[f64], method: SpectrumMethod) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), method)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Real parts, provided every imaginary part is negligible
    /// (`|im| <= 1e-12 (1 + |re|)`).
    pub fn real_values(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .map(|z| {
                if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
                    Ok(z.re)
                } else {
                    Err(Error::ComplexSpectrum { re: z.re, im: z.im })
                }
            })
            .collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigs(a: &Matrix) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::InvalidInput("eigenvalues need a square matrix".into()));
    }
    a.verify(Structure::Symmetric)?;
    let n = a.order();
    let mut m: Vec<f64> = a.data().to_vec();
    // symmetrize exactly so rotations act on a truly symmetric array
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    let norm = a.frobenius_norm();
    let off = |m: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&m) <= JACOBI_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    Ok(Spectrum::from_real(&diag, SpectrumMethod::JacobiRotation))
}

/// `e^{2 pi i m / n}`, exact at quarter turns.
pub fn root_of_unity(m: usize, n: usize) -> Complex64 {
    let m = m % n;
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * m == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * m == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * m == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
}

/// Unsorted circulant eigenvalues `lambda_k = sum_j w^{jk} a_j`, indexed by `k`.
pub fn circ_eigenvalues(row: &[f64]) -> Vec<Complex64> {
    let n = row.len();
    (0..n)
        .map(|k| {
            row.iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (j, &a)| acc + root_of_unity(j * k, n) * a)
        })
        .collect()
}

/// Spectrum of the circulant matrix with first row `row`.
pub fn circ_spectrum(row: &[f64]) -> Result<Spectrum> {
    if row.is_empty() {
        return Err(Error::InvalidInput("circulant row is empty".into()));
    }
    Ok(Spectrum::new(circ_eigenvalues(row), SpectrumMethod::Dft))
}

/// Closed-form eigenvalues `r1 <= r2` of `[[a11, b], [b, a22]]`.
pub fn eig2x2_sym(a11: f64, a22: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a11 + a22);
    let rad = 0.5 * (a11 - a22).hypot(2.0 * b);
    (mid - rad, mid + rad)
}

/// Eigenvalues of a triangular matrix.
pub fn diagonal_spectrum(a: &Matrix) -> Result<Spectrum> {
    a.verify(Structure::UpperTriangular)?;
    Ok(Spectrum::from_real(&a.diag(), SpectrumMethod::DiagonalReadoff))
}

/// Spectrum by the method matching the structure tag, or `None` for
/// general and block-triangular matrices.
pub fn structured_spectrum(a: &Matrix) -> Result<Option<Spectrum>> {
    Ok(match a.structure() {
        Structure::Symmetric | Structure::AntiBidiagonal | Structure::Jacobi => {
            if a.order() == 2 {
                let (r1, r2) = eig2x2_sym(a.get(0, 0), a.get(1, 1), a.get(0, 1));
                Some(Spectrum::from_real(&[r1, r2], SpectrumMethod::ClosedForm2x2))
            } else {
                Some(sym_eigs(a)?)
            }
        }
        Structure::UpperTriangular => Some(diagonal_spectrum(a)?),
        Structure::Circulant => Some(circ_spectrum(a.row(0))?),
        Structure::General | Structure::BlockUpperTriangular { .. } => None,
    })
}

/// Perron root of a nonnegative matrix.
///
/// Triangular and circulant tags read it off exactly (largest diagonal
/// entry, row sum) and symmetric tags take the largest eigenvalue modulus;
/// untagged matrices go through [`power_iteration`].
pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::InvalidInput("spectral radius needs a square matrix".into()));
    }
    if !a.is_nonnegative() {
        return Err(Error::InvalidInput("spectral radius routine expects a nonnegative matrix".into()));
    }
    match a.structure() {
        Structure::UpperTriangular => Ok(a.diag().into_iter().fold(0.0, f64::max)),
        Structure::Circulant => Ok(a.row(0).iter().sum()),
        s if s.is_symmetric() => Ok(sym_eigs(a)?.max_modulus()),
        _ => power_iteration(a),
    }
}

/// Perron root by power iteration on `A + I`, stopping when successive
/// Rayleigh quotients agree to `1e-10` relative.
///
/// Slow or no convergence when the top eigenvalues are close or defective.
pub fn power_iteration(a: &Matrix) -> Result<f64> {
    if !a.is_square() || !a.is_nonnegative() {
        return Err(Error::InvalidInput("power iteration expects a square nonnegative matrix".into()));
    }
    let n = a.order();
    let b = a.shift(1.0);
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut prev = f64::NAN;
    for _ in 0..POWER_MAX_ITER {
        let y: Vec<f64> = (0..n)
            .map(|i| b.row(i).iter().zip(&x).map(|(bij, xj)| bij * xj).sum())
            .collect();
        let est: f64 = x.iter().zip(&y).map(|(xi, yi)| xi * yi).sum();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.iter().map(|v| v / norm).collect();
        if (est - prev).abs() < POWER_TOL * est.abs() {
            return Ok(est - 1.0);
        }
        prev = est;
    }
    Err(Error::NoConvergence {
        iterations: POWER_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn reals(s: &Spectrum) -> Vec<f64> {
        s.real_values().unwrap()
    }

    #[test]
    fn sym_eigs_examples() {
        let s = sym_eigs(&m(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert_relative_eq!(reals(&s)[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(reals(&s)[1], 3.0, epsilon = 1e-14);
        let s = sym_eigs(&m(&[&[0.0, 2.0], &[2.0, 0.0]])).unwrap();
        assert_relative_eq!(reals(&s)[0], -2.0, epsilon = 1e-14);
        assert_relative_eq!(reals(&s)[1], 2.0, epsilon = 1e-14);
        assert_eq!(reals(&sym_eigs(&m(&[&[5.0]])).unwrap()), vec![5.0]);
        assert_eq!(s.method, SpectrumMethod::JacobiRotation);
    }

    #[test]
    fn sym_eigs_rejects_nonsymmetric() {
        let err = sym_eigs(&m(&[&[1.0, 2.0], &[0.0, 1.0]])).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { i: 0, j: 1, .. }));
    }

    #[test]
    fn circ_spectrum_examples() {
        let (x, y) = (0.7, 2.5);
        let s = circ_spectrum(&[x, y]).unwrap();
        assert_eq!(s.values, vec![Complex64::new(x - y, 0.0), Complex64::new(x + y, 0.0)]);
        let s = circ_spectrum(&[1.0, 1.0, 1.0]).unwrap();
        let mut mods: Vec<f64> = s.values.iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        assert!(mods[0] < 1e-15 && mods[1] < 1e-15);
        assert_relative_eq!(mods[2], 3.0, epsilon = 1e-15);
        assert_eq!(reals(&circ_spectrum(&[4.2]).unwrap()), vec![4.2]);
        assert!(circ_spectrum(&[]).is_err());
    }

    #[test]
    fn eig2x2_examples() {
        assert_eq!(eig2x2_sym(0.0, 0.0, 3.0), (-3.0, 3.0));
        assert_eq!(eig2x2_sym(1.5, 1.5, 0.5), (1.0, 2.0));
        assert_eq!(eig2x2_sym(1.0, 4.0, 0.0), (1.0, 4.0));
    }

    #[test]
    fn spectral_radius_examples() {
        assert_relative_eq!(spectral_radius(&m(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap(), 1.0, epsilon = 1e-10);
        assert_relative_eq!(spectral_radius(&m(&[&[0.0, 7.0], &[7.0, 0.0]])).unwrap(), 7.0, epsilon = 1e-9);
        assert_relative_eq!(spectral_radius(&Matrix::diagonal(&[1.0, 2.0, 3.0])).unwrap(), 3.0, epsilon = 1e-8);
        assert!(spectral_radius(&m(&[&[0.0, -1.0], &[1.0, 0.0]])).is_err());
    }

    #[test]
    fn spectral_radius_gives_up_on_jordan_block() {
        let jordan = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let err = spectral_radius(&jordan).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
        let tagged = jordan.with_structure(Structure::UpperTriangular).unwrap();
        assert_eq!(spectral_radius(&tagged).unwrap(), 0.0);
    }

    fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-3.0..3.0);
                a.set(i, j, v);
                a.set(j, i, v);
            }
        }
        a
    }

    #[test]
    fn sym_eigs_preserves_trace_and_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for case in 0..200 {
            let n = 1 + case % 8;
            let a = random_symmetric(&mut rng, n);
            let ev = reals(&sym_eigs(&a).unwrap());
            let tr: f64 = ev.iter().sum();
            let fro: f64 = ev.iter().map(|v| v * v).sum();
            assert!((tr - a.trace()).abs() <= 1e-9 * (1.0 + a.trace().abs()));
            let f2 = a.frobenius_norm().powi(2);
            assert!((fro - f2).abs() <= 1e-9 * f2);
            assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn closed_form_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let (a, d, b) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let (r1, r2) = eig2x2_sym(a, d, b);
            let ev = reals(&sym_eigs(&m(&[&[a, b], &[b, d]])).unwrap());
            assert!((r1 - ev[0]).abs() <= 1e-10 && (r2 - ev[1]).abs() <= 1e-10);
        }
    }

    #[test]
    fn real_circulant_spectrum_is_conjugation_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 1..=8 {
            let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..4.0)).collect();
            let vals = circ_spectrum(&row).unwrap().values;
            for z in &vals {
                let best = vals.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
                assert!(best <= 1e-12 * (1.0 + z.norm()));
            }
        }
    }

    #[test]
    fn spectral_radius_matches_class_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for n in 1..=6 {
            let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
            let circ = Matrix::from_fn(n, |i, j| row[(j + n - i) % n]);
            let rho = spectral_radius(&circ).unwrap();
            let expected = circ_spectrum(&row).unwrap().max_modulus();
            assert!((rho - expected).abs() <= 1e-8 * (1.0 + expected));

            let mut sym = random_symmetric(&mut rng, n);
            for v in sym.clone().data().iter().enumerate() {
                let (i, j) = (v.0 / n, v.0 % n);
                sym.set(i, j, v.1.abs());
            }
            let rho = spectral_radius(&sym).unwrap();
            let expected = sym_eigs(&sym).unwrap().max_modulus();
            assert!((rho - expected).abs() <= 1e-8 * (1.0 + expected), "{rho} vs {expected}");
        }
    }
}

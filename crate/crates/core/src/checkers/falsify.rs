use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::cauchy_bound;
use super::{confirm_entry, confirm_negative, CheckReport, SamplerConfig, Verdict, Witness, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::matfun::{apply_circulant, apply_newton, apply_taylor, apply_triangular_explicit, Matrix, Structure};
use crate::spectra::structured_spectrum;
use crate::structmat::circulant_from_row;

const CHUNK: usize = 1024;
const SCALES: [f64; 3] = [0.1, 1.0, 10.0];

// For polynomials, every sign change of f and its derivatives lies below
// the largest Cauchy bound; when that is beyond 10 the search also samples
// out to twice the bound.
fn search_scales(f: &FunctionSpec) -> Vec<f64> {
    let mut scales = SCALES.to_vec();
    if let Some(p) = f.as_polynomial() {
        let mut q = p.clone();
        let mut bound = 0.0_f64;
        while q.degree() > 0 {
            bound = bound.max(cauchy_bound(&q));
            q = q.derivative();
        }
        if bound > SCALES[2] {
            scales.push(2.0 * bound);
        }
    }
    scales
}

/// Matrix class searched by [`falsify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixClass {
    General,
    Triangular,
    Circulant,
    Symmetric,
}

impl MatrixClass {
    pub fn parse(name: &str) -> Option<MatrixClass> {
        Some(match name {
            "general" => MatrixClass::General,
            "triangular" | "upper-triangular" => MatrixClass::Triangular,
            "circulant" => MatrixClass::Circulant,
            "symmetric" => MatrixClass::Symmetric,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            MatrixClass::General => "general",
            MatrixClass::Triangular => "triangular",
            MatrixClass::Circulant => "circulant",
            MatrixClass::Symmetric => "symmetric",
        }
    }

    /// Positions `(i, j)` filled by the parameters, in order.
    fn positions(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            MatrixClass::General => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
            MatrixClass::Triangular | MatrixClass::Symmetric => {
                (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
            }
            MatrixClass::Circulant => (0..n).map(|j| (0, j)).collect(),
        }
    }

    pub fn param_count(self, n: usize) -> usize {
        match self {
            MatrixClass::General => n * n,
            MatrixClass::Triangular | MatrixClass::Symmetric => n * (n + 1) / 2,
            MatrixClass::Circulant => n,
        }
    }
}

/// Builds a member of `class` of order `n` from its free entries: all
/// `n^2` row-major for general, the upper triangle row by row for
/// triangular and symmetric, the first row for circulant.
pub fn class_matrix(class: MatrixClass, n: usize, params: &[f64]) -> Result<Matrix> {
    if params.len() != class.param_count(n) {
        return Err(Error::InvalidInput(format!(
            "{} matrices of order {n} take {} parameters, got {}",
            class.name(),
            class.param_count(n),
            params.len()
        )));
    }
    if class == MatrixClass::Circulant {
        return Ok(circulant_from_row(params));
    }
    let mut m = Matrix::zeros(n, n);
    for (&(i, j), &v) in class.positions(n).iter().zip(params) {
        m.set(i, j, v);
        if class == MatrixClass::Symmetric {
            m.set(j, i, v);
        }
    }
    match class {
        MatrixClass::Triangular => m.with_structure(Structure::UpperTriangular),
        MatrixClass::Symmetric => m.with_structure(Structure::Symmetric),
        _ => Ok(m),
    }
}

// f(A) by the method matching the class
fn evaluate(f: &FunctionSpec, class: MatrixClass, a: &Matrix) -> Result<Matrix> {
    match class {
        MatrixClass::General => apply_taylor(f, a),
        MatrixClass::Triangular => apply_triangular_explicit(f, a),
        MatrixClass::Circulant => {
            let row = apply_circulant(f, a.row(0))?;
            Ok(circulant_from_row(&row))
        }
        MatrixClass::Symmetric => {
            let spec = structured_spectrum(a)?.expect("symmetric matrices have a structured spectrum");
            apply_newton(f, a, &spec)
        }
    }
}

// most negative entry when it is below tolerance
fn negative_entry(f: &FunctionSpec, class: MatrixClass, a: &Matrix, tol: f64) -> Option<([usize; 2], f64)> {
    let fa = evaluate(f, class, a).ok()?;
    if fa.data().iter().any(|v| !v.is_finite()) {
        return None;
    }
    let (i, j, v) = fa.min_entry();
    (v < -tol * (1.0 + fa.max_norm())).then_some(([i, j], v))
}

fn sample_params(class: MatrixClass, n: usize, seed: u64, index: usize, scales: &[f64]) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let s = scales[index % scales.len()];
    let positions = class.positions(n);
    match rng.random_range(0..4) {
        0 | 1 => positions.iter().map(|_| rng.random_range(0.0..=s)).collect(),
        2 => positions
            .iter()
            .map(|_| if rng.random_bool(0.5) { 0.0 } else { rng.random_range(0.0..=s) })
            .collect(),
        _ => {
            // banded, with a clustered diagonal: close to a Jordan block
            let c = rng.random_range(0.0..=s);
            positions
                .iter()
                .map(|&(i, j)| match j as isize - i as isize {
                    0 => c + 1e-3 * s * rng.random::<f64>(),
                    1 => rng.random_range(0.0..=s),
                    _ if rng.random_bool(0.5) => 0.0,
                    _ => 1e-2 * s * rng.random::<f64>(),
                })
                .collect()
        }
    }
}

fn round_sig2(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let e = v.abs().log10().floor() as i32 - 1;
    let p = 10f64.powi(e);
    (v / p).round() * p
}

// zero or round parameters while the Taylor image stays at least as negative
fn minimize(f: &FunctionSpec, class: MatrixClass, n: usize, params: &mut [f64], worst: &mut f64, tol: f64) -> Result<()> {
    for simplify in [(|_: f64| 0.0) as fn(f64) -> f64, round_sig2] {
        for t in 0..params.len() {
            let old = params[t];
            let new = simplify(old);
            if new == old {
                continue;
            }
            params[t] = new;
            let a = class_matrix(class, n, params)?;
            match confirm_negative(f, &a, tol)? {
                Some((_, v)) if v <= *worst => *worst = v,
                _ => params[t] = old,
            }
        }
    }
    Ok(())
}

// permutation-similar matrix with the entry moved to (0, 0) or (0, 1)
fn canonicalize(class: MatrixClass, n: usize, params: &[f64], entry: [usize; 2]) -> Result<(Vec<f64>, [usize; 2])> {
    let [mut i, mut j] = entry;
    match class {
        MatrixClass::Triangular => Ok((params.to_vec(), entry)),
        MatrixClass::Circulant => Ok((params.to_vec(), [0, (j + n - i) % n])),
        MatrixClass::General | MatrixClass::Symmetric => {
            if class == MatrixClass::Symmetric && i > j {
                std::mem::swap(&mut i, &mut j);
            }
            let mut order: Vec<usize> = vec![i];
            if j != i {
                order.push(j);
            }
            order.extend((0..n).filter(|&k| k != i && k != j));
            let a = class_matrix(class, n, params)?;
            let b = Matrix::from_fn(n, |r, c| a.get(order[r], order[c]));
            let new: Vec<f64> = class.positions(n).iter().map(|&(r, c)| b.get(r, c)).collect();
            Ok((new, if i == j { [0, 0] } else { [0, 1] }))
        }
    }
}

fn build_witness(
    f: &FunctionSpec,
    class: MatrixClass,
    n: usize,
    mut params: Vec<f64>,
    mut worst: f64,
    tol: f64,
) -> Result<Witness> {
    minimize(f, class, n, &mut params, &mut worst, tol)?;
    let a = class_matrix(class, n, &params)?;
    let (entry, _) = confirm_negative(f, &a, tol)?.expect("minimized witness stays negative");
    let (params, entry) = canonicalize(class, n, &params, entry)?;
    let a = class_matrix(class, n, &params)?;
    let value = confirm_entry(f, &a, entry, tol)?.expect("permutation keeps the entry");
    Ok(Witness {
        matrix: Some(a),
        entry: Some(entry),
        value,
        condition: "f(A) >= 0 entrywise".into(),
        params,
        condition_value: value,
    })
}

/// [`falsify_with_tol`] at the default tolerance.
pub fn falsify(f: &FunctionSpec, class: MatrixClass, n: usize, budget: usize, seed: u64) -> Result<CheckReport> {
    falsify_with_tol(f, class, n, budget, seed, DEFAULT_TOL)
}

/// Searches for a nonnegative matrix of the class whose image under `f` has
/// an entry below `-tol (1 + ||f(A)||_max)`.
///
/// The integer lattice `{0, 1, 2}` is enumerated first (up to a quarter of
/// the budget), then random matrices at scales 0.1, 1 and 10 (and, for
/// polynomials with far-out sign changes, twice their root bound): dense,
/// sparse, and banded with clustered diagonals. Candidates are confirmed
/// with the Taylor oracle, shrunk, and permuted so the negative entry sits
/// in the first row. The result depends only on the inputs and the seed.
pub fn falsify_with_tol(
    f: &FunctionSpec,
    class: MatrixClass,
    n: usize,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    if n == 0 || budget == 0 {
        return Err(Error::InvalidInput("falsify needs n >= 1 and a positive budget".into()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let cfg = SamplerConfig {
        seed,
        tol,
        ..SamplerConfig::default()
    };
    let p = class.param_count(n);
    let mut samples = 0;

    let lattice_cap = budget / 4;
    let mut digits = vec![0usize; p];
    let mut lattice_done = false;
    while samples < lattice_cap && !lattice_done {
        samples += 1;
        let params: Vec<f64> = digits.iter().map(|&d| d as f64).collect();
        let a = class_matrix(class, n, &params)?;
        if negative_entry(f, class, &a, tol).is_some() {
            if let Some((_, v)) = confirm_negative(f, &a, tol)? {
                let w = build_witness(f, class, n, params, v, tol)?;
                return Ok(CheckReport::fail(w, samples, &cfg));
            }
        }
        lattice_done = true;
        for d in digits.iter_mut().rev() {
            if *d < 2 {
                *d += 1;
                lattice_done = false;
                break;
            }
            *d = 0;
        }
    }

    let scales = search_scales(f);
    let mut start = 0;
    while samples < budget {
        let len = CHUNK.min(budget - samples);
        let mut hits: Vec<(f64, usize, Vec<f64>)> = (start..start + len)
            .into_par_iter()
            .filter_map(|idx| {
                let params = sample_params(class, n, seed, idx, &scales);
                let a = class_matrix(class, n, &params).ok()?;
                negative_entry(f, class, &a, tol).map(|(_, v)| (v, idx, params))
            })
            .collect();
        samples += len;
        start += len;
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, _, params) in hits {
            let a = class_matrix(class, n, &params)?;
            if let Some((_, v)) = confirm_negative(f, &a, tol)? {
                let w = build_witness(f, class, n, params, v, tol)?;
                return Ok(CheckReport::fail(w, samples, &cfg));
            }
        }
    }
    Ok(CheckReport::pass(Verdict::PassSampled, samples, &cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic() -> FunctionSpec {
        FunctionSpec::polynomial([1.0, 1.0, 0.5, -2.0 / 3.0, 0.25])
    }

    #[test]
    fn class_matrices() {
        let s = class_matrix(MatrixClass::Symmetric, 2, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.to_rows(), vec![vec![1.0, 2.0], vec![2.0, 3.0]]);
        let t = class_matrix(MatrixClass::Triangular, 2, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t.to_rows(), vec![vec![1.0, 2.0], vec![0.0, 3.0]]);
        let c = class_matrix(MatrixClass::Circulant, 3, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(c.row(1), &[3.0, 1.0, 2.0]);
        assert!(class_matrix(MatrixClass::General, 2, &[1.0]).is_err());
        assert_eq!(MatrixClass::parse("circulant"), Some(MatrixClass::Circulant));
    }

    #[test]
    fn quartic_lattice_witness() {
        let r = falsify(&quartic(), MatrixClass::Symmetric, 2, 1000, 0).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.matrix.unwrap().to_rows(), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert_eq!(w.entry, Some([0, 1]));
        assert!((w.value + 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exp_survives() {
        for class in [MatrixClass::General, MatrixClass::Triangular, MatrixClass::Circulant, MatrixClass::Symmetric] {
            let r = falsify(&FunctionSpec::exp(), class, 3, 2000, 1).unwrap();
            assert_eq!(r.verdict, Verdict::PassSampled, "{class:?}");
            assert_eq!(r.samples, 2000);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let f = FunctionSpec::polynomial([0.1, -1.0, 1.0]);
        let a = falsify(&f, MatrixClass::General, 3, 3000, 42).unwrap();
        let b = falsify(&f, MatrixClass::General, 3, 3000, 42).unwrap();
        assert_eq!(a, b);
        assert!(!a.passed());
    }

    #[test]
    fn canonical_entry_in_first_row() {
        let f = FunctionSpec::polynomial([1.0, -2.0, 1.0]);
        for class in [MatrixClass::General, MatrixClass::Symmetric, MatrixClass::Circulant] {
            let r = falsify(&f, class, 3, 500, 3).unwrap();
            let w = r.witness.unwrap();
            assert_eq!(w.entry.unwrap()[0], 0, "{class:?}");
            let m = w.matrix.unwrap();
            assert!(m.is_nonnegative());
            let fm = apply_taylor(&f, &m).unwrap();
            let [i, j] = w.entry.unwrap();
            assert_eq!(fm.get(i, j), w.value);
        }
    }

    #[test]
    fn far_tail_is_reached() {
        // negative only beyond x = 1000
        let f = FunctionSpec::polynomial([1.0, 1.0, 0.0, -1e-3]);
        assert!(search_scales(&f).len() == 4);
        assert!(!falsify(&f, MatrixClass::Triangular, 2, 5000, 0).unwrap().passed());
        assert_eq!(search_scales(&FunctionSpec::exp()), SCALES.to_vec());
    }

    #[test]
    fn rounding_to_two_digits() {
        assert_eq!(round_sig2(0.123456), 0.12);
        assert_eq!(round_sig2(987.0), 990.0);
        assert_eq!(round_sig2(0.0), 0.0);
    }

    #[test]
    fn rejects_empty_search() {
        assert!(falsify(&FunctionSpec::exp(), MatrixClass::General, 0, 10, 0).is_err());
        assert!(falsify(&FunctionSpec::exp(), MatrixClass::General, 2, 0, 0).is_err());
    }
}

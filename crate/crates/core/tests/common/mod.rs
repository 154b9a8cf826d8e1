#![allow(dead_code)]

use nnpres::matfun::Matrix;
use nnpres::{FunctionSpec, Named, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `1 + x + x^2/2 - (2/3) x^3 + x^4/4`.
pub fn quartic() -> FunctionSpec {
    FunctionSpec::polynomial([1.0, 1.0, 0.5, -2.0 / 3.0, 0.25])
}

/// Frozen output of `cargo run --example sextic_params`.
pub const SEXTIC_BETA: f64 = 0.3;
pub const SEXTIC_ALPHA: f64 = 0.1;
pub const SEXTIC_GAMMA: f64 = 1.1;

/// `alpha + beta z - z^3 + z^5 + gamma z^6`.
pub fn sextic() -> FunctionSpec {
    FunctionSpec::polynomial([SEXTIC_ALPHA, SEXTIC_BETA, 0.0, -1.0, 0.0, 1.0, SEXTIC_GAMMA])
}

/// `beta z - z^3 + z^5 = z h(z^2)` with `h(u) = beta - u + u^2`.
pub fn odd_family(beta: f64) -> FunctionSpec {
    FunctionSpec::polynomial([0.0, beta, 0.0, -1.0, 0.0, 1.0])
}

pub fn random_poly(rng: &mut impl Rng, max_degree: usize, lo: f64, hi: f64) -> FunctionSpec {
    let d = rng.random_range(0..=max_degree);
    let mut c: Vec<f64> = (0..=d).map(|_| rng.random_range(lo..=hi)).collect();
    if c[d] == 0.0 {
        c[d] = 1.0;
    }
    FunctionSpec::polynomial(c)
}

/// Named functions, the worked polynomials and a few sums.
pub fn function_corpus() -> Vec<(&'static str, FunctionSpec)> {
    vec![
        ("exp", FunctionSpec::exp()),
        ("sinh", Named::Sinh.into()),
        ("cosh", Named::Cosh.into()),
        ("sin", Named::Sin.into()),
        ("cos", Named::Cos.into()),
        ("quartic", quartic()),
        ("sextic", sextic()),
        ("odd-part", odd_family(SEXTIC_BETA)),
        ("square-shift", FunctionSpec::polynomial([1.0, -2.0, 1.0])),
        (
            "exp-plus-poly",
            FunctionSpec::sum([(2.0, FunctionSpec::exp()), (1.0, FunctionSpec::polynomial([0.0, 1.0, -1.0]))]).unwrap(),
        ),
        (
            "sin-minus-cosh",
            FunctionSpec::sum([(1.0, Named::Sin.into()), (-0.5, Named::Cosh.into())]).unwrap(),
        ),
    ]
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, scale: f64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(0.0..=scale);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m.with_structure(Structure::Symmetric).unwrap()
}

pub fn random_upper(rng: &mut impl Rng, n: usize, scale: f64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, rng.random_range(0.0..=scale));
        }
    }
    m.with_structure(Structure::UpperTriangular).unwrap()
}

pub fn random_row(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..=scale)).collect()
}

/// `[[A, B], [0, C]]` with `C` shifted so the diagonal blocks have
/// well-separated spectra.
pub fn random_block(rng: &mut impl Rng, n1: usize, n2: usize) -> Matrix {
    let n = n1 + n2;
    let symmetric = rng.random_bool(0.5);
    let a = if symmetric { random_symmetric(rng, n1, 1.0) } else { random_upper(rng, n1, 1.0) };
    let c = if symmetric { random_symmetric(rng, n2, 1.0) } else { random_upper(rng, n2, 1.0) };
    let mut m = Matrix::zeros(n, n);
    m.set_block(0, 0, &a);
    m.set_block(n1, n1, &c.shift(n as f64 + 2.0));
    for i in 0..n1 {
        for j in n1..n {
            m.set(i, j, rng.random_range(0.0..=1.0));
        }
    }
    m.with_structure(Structure::BlockUpperTriangular { n1, n2 }).unwrap()
}

/// `|a - b| <= tol (1 + scale)`.
pub fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + scale)
}

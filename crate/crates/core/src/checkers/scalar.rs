use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{confirm_entry, majorant, roots::min_on_halfline, CheckReport, SamplerConfig, Verdict, Witness};
use crate::divdiff::divided_difference;
use crate::error::{Error, Result};
use crate::funcspec::{FunctionSpec, Polynomial};
use crate::matfun::{apply_circulant, Matrix};
use crate::structmat::circulant_from_row;

/// Polynomials up to this degree get the exact half-line minimum.
const EXACT_DEGREE: usize = 6;
const DENSE_POINTS: usize = 10_000;
const LATTICE_CAP: usize = 20_000;

fn rng_for(cfg: &SamplerConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    rng
}

fn lattice_max(cfg: &SamplerConfig) -> usize {
    cfg.grid_max.floor() as usize
}

/// Sample points of `[0, X]`: integers, uniform grid, log-spaced grid,
/// random draws and, if asked, a dense uniform scan.
fn halfline_points(cfg: &SamplerConfig, dense: bool) -> Vec<f64> {
    let x = cfg.grid_max;
    let gp = cfg.grid_points;
    let mut pts: Vec<f64> = (0..=lattice_max(cfg)).map(|i| i as f64).collect();
    pts.extend((0..gp).map(|i| x * i as f64 / (gp - 1) as f64));
    pts.extend((0..gp).map(|i| x * 10f64.powf(-6.0 + 6.0 * i as f64 / (gp - 1) as f64)));
    let mut rng = rng_for(cfg, 1);
    pts.extend((0..cfg.random_samples).map(|_| rng.random_range(0.0..=x)));
    if dense {
        pts.extend((0..DENSE_POINTS).map(|i| x * i as f64 / (DENSE_POINTS - 1) as f64));
    }
    pts
}

// xI + N of order k + 1; entry (0, k) of f at it is f^{(k)}(x) / k!
fn jordan_block(x: f64, k: usize) -> Matrix {
    Matrix::from_fn(k + 1, |i, j| {
        if i == j {
            x
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    })
}

fn derivative_condition(k: usize) -> String {
    if k == 0 {
        "f(x) >= 0".into()
    } else {
        format!("f^({k})(x) >= 0")
    }
}

enum Outcome {
    Fail(Box<Witness>),
    Pass { exact: bool },
}

fn derivative_witness(f: &FunctionSpec, k: usize, x: f64, value: f64, cfg: &SamplerConfig, with_k: bool) -> Result<Witness> {
    let jb = jordan_block(x, k);
    let confirmed = confirm_entry(f, &jb, [0, k], cfg.tol)?;
    let mut params = if with_k { vec![k as f64] } else { Vec::new() };
    params.push(x);
    Ok(match confirmed {
        Some(v) => Witness {
            matrix: Some(jb),
            entry: Some([0, k]),
            value: v,
            condition: derivative_condition(k),
            params,
            condition_value: value,
        },
        None => Witness {
            matrix: None,
            entry: None,
            value,
            condition: derivative_condition(k),
            params,
            condition_value: value,
        },
    })
}

// f^{(k)} >= 0 on [0, inf): sampled, then tail sign and exact minimum for
// low-degree polynomials
fn scan_derivative(f: &FunctionSpec, k: usize, cfg: &SamplerConfig, with_k: bool, samples: &mut usize) -> Result<Outcome> {
    let poly_k: Option<Polynomial> = f.as_polynomial().map(|p| (0..k).fold(p.clone(), |q, _| q.derivative()));
    let exact_ok = f.as_polynomial().is_some_and(|p| p.degree() <= EXACT_DEGREE);
    let value_at = |x: f64| match &poly_k {
        Some(p) => p.eval_real(x),
        None => f.derivatives(x, k)[k],
    };
    for x in halfline_points(cfg, exact_ok) {
        *samples += 1;
        let v = value_at(x);
        if v < cfg.threshold(majorant(f, x, k)) {
            return Ok(Outcome::Fail(Box::new(derivative_witness(f, k, x, v, cfg, with_k)?)));
        }
    }
    let Some(p) = poly_k else {
        return Ok(Outcome::Pass { exact: false });
    };
    if p.degree() > 0 && p.leading() < 0.0 {
        // negative leading coefficient: f^{(k)} -> -inf
        let mut x = cfg.grid_max;
        for _ in 0..1100 {
            x *= 2.0;
            let v = p.eval_real(x);
            if v < cfg.threshold(majorant(f, x, k)) {
                *samples += 1;
                return Ok(Outcome::Fail(Box::new(derivative_witness(f, k, x, v, cfg, with_k)?)));
            }
        }
    }
    if !exact_ok {
        return Ok(Outcome::Pass { exact: false });
    }
    match min_on_halfline(&p) {
        Some((x, v)) if v < cfg.threshold(majorant(f, x, k)) => {
            *samples += 1;
            Ok(Outcome::Fail(Box::new(derivative_witness(f, k, x, v, cfg, with_k)?)))
        }
        Some(_) => Ok(Outcome::Pass { exact: true }),
        None => Ok(Outcome::Pass { exact: false }),
    }
}

/// `f(x) >= 0` on `[0, inf)`: sampled on `[0, X]`, plus the asymptotic
/// sign and, for polynomials of degree at most 6, the exact minimum.
pub fn check_f1(f: &FunctionSpec, cfg: &SamplerConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mut samples = 0;
    Ok(match scan_derivative(f, 0, cfg, false, &mut samples)? {
        Outcome::Fail(w) => CheckReport::fail(*w, samples, cfg),
        Outcome::Pass { exact } => {
            CheckReport::pass(if exact { Verdict::PassExact } else { Verdict::PassSampled }, samples, cfg)
        }
    })
}

/// `f^{(k)} >= 0` on `[0, inf)` for `k = 0..n-1`, which characterizes the
/// functions preserving nonnegativity of triangular matrices of order `n`.
///
/// A failure at order `k` and point `x` comes with the Jordan block
/// `xI + N` of order `k + 1`, whose image has `f^{(k)}(x)/k!` in the corner.
pub fn check_divdiff_criterion(f: &FunctionSpec, n: usize, cfg: &SamplerConfig) -> Result<CheckReport> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InvalidInput("order n must be at least 1".into()));
    }
    let mut samples = 0;
    let mut exact = true;
    for k in 0..n {
        match scan_derivative(f, k, cfg, true, &mut samples)? {
            Outcome::Fail(w) => return Ok(CheckReport::fail(*w, samples, cfg)),
            Outcome::Pass { exact: e } => exact &= e,
        }
    }
    Ok(CheckReport::pass(if exact { Verdict::PassExact } else { Verdict::PassSampled }, samples, cfg))
}

/// The two conditions on a pair `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairConditions {
    /// `f(x+y) - f(x-y)`.
    pub sum_difference: f64,
    /// `(x+y) f(x-y) + (y-x) f(x+y)`.
    pub weighted: f64,
}

pub fn pair_conditions(f: &FunctionSpec, x: f64, y: f64) -> PairConditions {
    let (fp, fm) = (f.eval_real(x + y), f.eval_real(x - y));
    PairConditions {
        sum_difference: fp - fm,
        weighted: (x + y) * fm + (y - x) * fp,
    }
}

/// `(x+y-z) f(x-y) + (z-x+y) f(x+y)`.
pub fn triple_condition(f: &FunctionSpec, x: f64, y: f64, z: f64) -> f64 {
    (x + y - z) * f.eval_real(x - y) + (z - x + y) * f.eval_real(x + y)
}

const COND_SUM: &str = "f(x+y) - f(x-y) >= 0";
const COND_WEIGHTED: &str = "(x+y) f(x-y) + (y-x) f(x+y) >= 0";
const COND_TRIPLE: &str = "(x+y-z) f(x-y) + (z-x+y) f(x+y) >= 0";

// [[z, b], [b, 2x - z]] with b = sqrt(y^2 - (x-z)^2) has eigenvalues x -+ y
// and (0,0) entry of f equal to the triple condition over 2y
fn triple_matrix(x: f64, y: f64, z: f64) -> Matrix {
    let b = (y * y - (x - z) * (x - z)).max(0.0).sqrt();
    Matrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => z,
        (1, 1) => 2.0 * x - z,
        _ => b,
    })
}

struct Hit {
    witness: Witness,
}

fn scan_points<I>(points: I, samples: &mut usize, mut probe: impl FnMut(&[f64]) -> Result<Option<Hit>>) -> Result<Option<Hit>>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    for p in points {
        *samples += 1;
        if let Some(hit) = probe(&p)? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

fn matrix_or_condition(
    f: &FunctionSpec,
    m: Matrix,
    entry: [usize; 2],
    cond: &str,
    params: Vec<f64>,
    value: f64,
    cfg: &SamplerConfig,
) -> Result<Witness> {
    let confirmed = confirm_entry(f, &m, entry, cfg.tol)?;
    Ok(Witness {
        value: confirmed.unwrap_or(value),
        matrix: confirmed.map(|_| m),
        entry: confirmed.map(|_| entry),
        condition: cond.into(),
        params,
        condition_value: value,
    })
}

fn pair_points(cfg: &SamplerConfig, stream: u64) -> Vec<Vec<f64>> {
    let x = cfg.grid_max;
    let gp = cfg.grid_points;
    let l = lattice_max(cfg);
    let mut pts = Vec::new();
    for a in 0..=l {
        for b in 0..=l {
            pts.push(vec![a as f64, b as f64]);
        }
    }
    for a in 0..gp {
        for b in 0..gp {
            pts.push(vec![x * a as f64 / (gp - 1) as f64, x * b as f64 / (gp - 1) as f64]);
        }
    }
    let mut rng = rng_for(cfg, stream);
    pts.extend((0..cfg.random_samples).map(|_| vec![rng.random_range(0.0..=x), rng.random_range(0.0..=x)]));
    pts
}

fn triple_points(cfg: &SamplerConfig) -> Vec<Vec<f64>> {
    let x = cfg.grid_max;
    let l = lattice_max(cfg);
    let mut pts = Vec::new();
    for a in 0..=l {
        for b in 0..=l {
            for c in 0..=l {
                pts.push(vec![a as f64, b as f64, c as f64]);
            }
        }
    }
    let m = (cfg.grid_points as f64).powf(2.0 / 3.0).ceil() as usize;
    let g = |i: usize| x * i as f64 / (m - 1) as f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                pts.push(vec![g(a), g(b), g(c)]);
            }
        }
    }
    let mut rng = rng_for(cfg, 4);
    pts.extend((0..cfg.random_samples).map(|_| (0..3).map(|_| rng.random_range(0.0..=x)).collect()));
    pts
}

/// The two-by-two symmetric conditions: `f(x+y) - f(x-y) >= 0` for
/// `x, y >= 0` together with `(x+y) f(x-y) + (y-x) f(x+y) >= 0` for
/// `y >= x >= 0`, cross-checked against the three-parameter form
/// `(x+y-z) f(x-y) + (z-x+y) f(x+y) >= 0` for `x >= z >= 0`, `y >= x - z`.
///
/// The two condition sets are equivalent; a sampled disagreement between
/// them is recorded in the report notes.
pub fn check_f2(f: &FunctionSpec, cfg: &SamplerConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mut samples = 0;

    let sum_hit = scan_points(pair_points(cfg, 2), &mut samples, |p| {
        let (x, y) = (p[0], p[1]);
        let c = pair_conditions(f, x, y).sum_difference;
        let scale = f.eval_real(x + y).abs() + f.eval_real(x - y).abs();
        if c < cfg.threshold(scale) {
            let m = Matrix::from_fn(2, |i, j| if i == j { x } else { y });
            let w = matrix_or_condition(f, m, [0, 1], COND_SUM, vec![x, y], c, cfg)?;
            return Ok(Some(Hit { witness: w }));
        }
        Ok(None)
    })?;

    // (x, y) with y >= x, y > 0
    let weighted_point = |p: &[f64]| -> Option<(f64, f64)> {
        let (x, y) = (p[0].min(p[1]), p[0].max(p[1]));
        (y > 0.0).then_some((x, y))
    };
    let weighted_probe = |x: f64, y: f64| -> Result<Option<Hit>> {
        let c = pair_conditions(f, x, y).weighted;
        let scale = (x + y) * f.eval_real(x - y).abs() + (y - x) * f.eval_real(x + y).abs();
        if c < cfg.threshold(scale) {
            let w = matrix_or_condition(f, triple_matrix(x, y, 0.0), [0, 0], COND_WEIGHTED, vec![x, y], c, cfg)?;
            return Ok(Some(Hit { witness: w }));
        }
        Ok(None)
    };
    let weighted_hit = scan_points(pair_points(cfg, 3), &mut samples, |p| match weighted_point(p) {
        Some((x, y)) => weighted_probe(x, y),
        None => Ok(None),
    })?;

    // (x, y, z) with x >= z >= 0 and y >= x - z; the z = 0 pairs come first
    let triple_probe = |x: f64, y: f64, z: f64| -> Result<Option<Hit>> {
        let c = triple_condition(f, x, y, z);
        let scale = (x + y - z) * f.eval_real(x - y).abs() + (z - x + y) * f.eval_real(x + y).abs();
        if c < cfg.threshold(scale) {
            let w = matrix_or_condition(f, triple_matrix(x, y, z), [0, 0], COND_TRIPLE, vec![x, y, z], c, cfg)?;
            return Ok(Some(Hit { witness: w }));
        }
        Ok(None)
    };
    let mut triple_hit = scan_points(pair_points(cfg, 3), &mut samples, |p| match weighted_point(p) {
        Some((x, y)) => triple_probe(x, y, 0.0),
        None => Ok(None),
    })?;
    if triple_hit.is_none() {
        triple_hit = scan_points(triple_points(cfg), &mut samples, |p| {
            let (z, x) = (p[0].min(p[1]), p[0].max(p[1]));
            let y = (x - z) + p[2];
            if y > 0.0 {
                triple_probe(x, y, z)
            } else {
                Ok(None)
            }
        })?;
    }

    let first_set = sum_hit.is_some() || weighted_hit.is_some();
    let second_set = sum_hit.is_some() || triple_hit.is_some();
    let mut notes = Vec::new();
    if first_set != second_set {
        notes.push(format!(
            "internal inconsistency: the pair conditions {} while the three-parameter form {}",
            if first_set { "failed" } else { "held" },
            if second_set { "failed" } else { "held" }
        ));
    }
    let mut report = match sum_hit.or(weighted_hit).or(triple_hit) {
        Some(hit) => CheckReport::fail(hit.witness, samples, cfg),
        None => CheckReport::pass(Verdict::PassSampled, samples, cfg),
    };
    report.notes = notes;
    Ok(report)
}

/// For even `f(z) = g(z^2)` checks the divided-difference criterion of
/// order `n` on `g`; for odd `f(z) = z h(z^2)` on `h`.
///
/// A failing report's witness refers to `g` or `h`, as noted.
pub fn check_sym_parity(f: &FunctionSpec, n: usize, cfg: &SamplerConfig) -> Result<CheckReport> {
    let parts = f.parity_decompose();
    let (factor, name) = if parts.f_odd.is_identically_zero() {
        (parts.g.ok_or(Error::ParityFactorUnavailable("g"))?, "g")
    } else if parts.f_even.is_identically_zero() {
        (parts.h.ok_or(Error::ParityFactorUnavailable("h"))?, "h")
    } else {
        return Err(Error::MixedParity);
    };
    let mut report = check_divdiff_criterion(&factor, n, cfg)?;
    let form = if name == "g" { "f(z) = g(z^2)" } else { "f(z) = z h(z^2)" };
    report.notes.push(format!("{form}; criterion checked on {name} = {factor}"));
    Ok(report)
}

/// Values of the alternating-node conditions at `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct NewncValues {
    /// `f[x_1, ..., x_n]`.
    pub full: f64,
    /// `f[x without x_k] - (sum_{j != k} x_j) f[x_1, ..., x_n]`, per `k`.
    pub dropped: Vec<f64>,
}

pub fn newnc_values(f: &FunctionSpec, x: &[f64]) -> Result<NewncValues> {
    if x.len() < 2 {
        return Err(Error::InvalidInput("need at least two nodes".into()));
    }
    let full = divided_difference(f, x)?.value;
    let total: f64 = x.iter().sum();
    let mut dropped = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let rest: Vec<f64> = x.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
        dropped.push(divided_difference(f, &rest)?.value - (total - x[k]) * full);
    }
    Ok(NewncValues { full, dropped })
}

// sum_i |f(x_i)| / prod_{j != i} |x_i - x_j|, the size of f[x] for distinct nodes
fn divdiff_size(f: &FunctionSpec, x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let den: f64 = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &xj)| (xi - xj).abs()).product();
            f.eval_real(xi).abs() / den
        })
        .sum()
}

fn alternating(magnitudes: &[f64]) -> Vec<f64> {
    magnitudes.iter().enumerate().map(|(i, &m)| if i % 2 == 0 { m } else { -m }).collect()
}

// descending integer magnitudes in 1..=l, lexicographic
fn descending_tuples(l: usize, n: usize, cap: usize) -> Vec<Vec<f64>> {
    fn rec(top: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if cur.len() == n {
            out.push(cur.iter().map(|&v| v as f64).collect());
            return;
        }
        let need = n - cur.len();
        for v in need..=top {
            cur.push(v);
            rec(v - 1, n, cur, out, cap);
            cur.pop();
            if out.len() >= cap {
                return;
            }
        }
    }
    let mut out = Vec::new();
    rec(l, n, &mut Vec::new(), &mut out, cap);
    out
}

/// Necessary conditions for order-`n` symmetric preservation, sampled over
/// alternating tuples `x_1 > -x_2 > x_3 > ... > 0`:
/// `f[x_1, ..., x_n] >= 0` and, for every `k`,
/// `f[x without x_k] - (sum_{j != k} x_j) f[x_1, ..., x_n] >= 0`.
///
/// At `n = 2` a violation comes with the anti-bidiagonal matrix
/// `[[0, a_2], [a_2, a_1]]`, `a_1 = x_1 + x_2`, `a_2 = sqrt(-x_1 x_2)`,
/// whose image carries `a_2 f[x_1, x_2]` at `(0, 1)` and the second
/// condition at `(0, 0)`.
pub fn check_newnc(f: &FunctionSpec, n: usize, cfg: &SamplerConfig) -> Result<CheckReport> {
    cfg.validate()?;
    if n < 2 {
        return Err(Error::InvalidInput("alternating-node conditions need n >= 2".into()));
    }
    let mut tuples = descending_tuples(lattice_max(cfg), n, LATTICE_CAP);
    let mut rng = rng_for(cfg, 5);
    for i in 0..cfg.random_samples {
        let scale = if i % 2 == 0 { cfg.grid_max } else { 0.1 * cfg.grid_max };
        let mut m: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=scale)).collect();
        m.sort_by(|a, b| b.total_cmp(a));
        if m.windows(2).all(|w| w[0] > w[1]) && m[n - 1] > 0.0 {
            tuples.push(m);
        }
    }
    let mut samples = 0;
    for mags in tuples {
        samples += 1;
        let x = alternating(&mags);
        let vals = newnc_values(f, &x)?;
        let full_size = divdiff_size(f, &x);
        let mut failed: Option<(String, f64, [usize; 2])> = None;
        if vals.full < cfg.threshold(full_size) {
            failed = Some(("f[x_1..x_n] >= 0".into(), vals.full, [0, 1]));
        } else {
            let total: f64 = x.iter().sum();
            for (k, &v) in vals.dropped.iter().enumerate() {
                let rest: Vec<f64> = x.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
                let size = divdiff_size(f, &rest) + (total - x[k]).abs() * full_size;
                if v < cfg.threshold(size) {
                    failed = Some((
                        format!("f[x without x_{}] - (sum of the other nodes) f[x_1..x_n] >= 0", k + 1),
                        v,
                        [0, 0],
                    ));
                    break;
                }
            }
        }
        let Some((condition, value, entry)) = failed else {
            continue;
        };
        let witness = if n == 2 {
            let (a1, a2) = (x[0] + x[1], (-x[0] * x[1]).sqrt());
            let m = Matrix::from_rows(&[[0.0, a2], [a2, a1]])?;
            matrix_or_condition(f, m, entry, &condition, x, value, cfg)?
        } else {
            Witness {
                matrix: None,
                entry: None,
                value,
                condition,
                params: x,
                condition_value: value,
            }
        };
        return Ok(CheckReport::fail(witness, samples, cfg));
    }
    Ok(CheckReport::pass(Verdict::PassSampled, samples, cfg))
}

fn circulant_rows(cfg: &SamplerConfig, n: usize) -> Vec<Vec<f64>> {
    let mut rows = Vec::new();
    if let Some(count) = 3usize.checked_pow(n as u32).filter(|&c| c <= 6561) {
        for idx in 0..count {
            let mut t = idx;
            let mut row = vec![0.0; n];
            for slot in row.iter_mut().rev() {
                *slot = (t % 3) as f64;
                t /= 3;
            }
            rows.push(row);
        }
    }
    let x = cfg.grid_max;
    let mut rng = rng_for(cfg, 6);
    for i in 0..cfg.random_samples {
        let row = (0..n)
            .map(|_| match i % 3 {
                0 => rng.random_range(0.0..=x),
                1 => {
                    if rng.random_bool(0.5) {
                        0.0
                    } else {
                        rng.random_range(0.0..=x)
                    }
                }
                _ => {
                    if rng.random_bool(0.5) {
                        rng.random_range(0.0..=1e-3 * x)
                    } else {
                        rng.random_range(0.0..=x)
                    }
                }
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Samples nonnegative circulant rows and checks that the first row of
/// `f(A)`, `f_l = (1/n) sum_k w^{-lk} f(lambda_k)`, stays nonnegative.
pub fn check_circulant_preservation(f: &FunctionSpec, n: usize, cfg: &SamplerConfig) -> Result<CheckReport> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InvalidInput("order n must be at least 1".into()));
    }
    let mut samples = 0;
    for row in circulant_rows(cfg, n) {
        samples += 1;
        let fl = apply_circulant(f, &row)?;
        let scale = fl.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let Some(l) = (0..n).filter(|&l| fl[l] < cfg.threshold(scale)).min_by(|&a, &b| fl[a].total_cmp(&fl[b])) else {
            continue;
        };
        let a = circulant_from_row(&row);
        let condition = "sum_k w^(-lk) f(lambda_k) >= 0";
        let w = matrix_or_condition(f, a, [0, l], condition, row, n as f64 * fl[l], cfg)?;
        return Ok(CheckReport::fail(w, samples, cfg));
    }
    Ok(CheckReport::pass(Verdict::PassSampled, samples, cfg))
}

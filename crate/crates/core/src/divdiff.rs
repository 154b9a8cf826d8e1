//! Divided differences `f[x_1, ..., x_k]`, confluent nodes included.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspec::{FunctionSpec, RationalPolynomial};
use crate::matfun::{apply_taylor, Matrix};

/// Node blocks narrower than this (absolute) are evaluated from a Taylor
/// expansion about their midpoint instead of the difference quotient.
const CLUSTER_WIDTH: f64 = 0.5;
const CLUSTER_MAX_TERMS: usize = 80;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivDiffResult {
    /// Node multiset, ascending.
    pub nodes: Vec<f64>,
    pub order: usize,
    pub value: f64,
}

/// Gap below which two nodes are treated as the same node.
pub fn confluence_tolerance(nodes: &[f64]) -> f64 {
    let scale = nodes.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    1e-9 * (1.0 + scale)
}

fn sorted_nodes(nodes: &[f64]) -> Result<Vec<f64>> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("divided difference needs at least one node".into()));
    }
    if let Some(x) = nodes.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("node {x} is not finite")));
    }
    let mut z = nodes.to_vec();
    z.sort_by(f64::total_cmp);
    Ok(z)
}

/// `f[x_1, ..., x_k]` over the sorted node multiset.
pub fn divided_difference(f: &FunctionSpec, nodes: &[f64]) -> Result<DivDiffResult> {
    let z = sorted_nodes(nodes)?;
    let table = table(f, &z);
    let k = z.len();
    Ok(DivDiffResult {
        value: table[0][k - 1],
        order: k,
        nodes: z,
    })
}

/// Top edge of the table, `f[x_1], f[x_1, x_2], ..., f[x_1, ..., x_k]`,
/// for nodes already in the order the Newton form should use.
pub fn newton_coefficients(f: &FunctionSpec, nodes: &[f64]) -> Result<Vec<f64>> {
    if nodes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("Newton nodes must be ascending".into()));
    }
    let z = sorted_nodes(nodes)?;
    Ok(table(f, &z).swap_remove(0))
}

// t[i][j - i] = f[z_i, ..., z_j]
fn table(f: &FunctionSpec, z: &[f64]) -> Vec<Vec<f64>> {
    let k = z.len();
    let tau = confluence_tolerance(z);
    let mut t: Vec<Vec<f64>> = z.iter().map(|&x| vec![f.eval_real(x)]).collect();
    for width in 1..k {
        for i in 0..k - width {
            let j = i + width;
            let spread = z[j] - z[i];
            let v = if spread <= tau {
                let d = f.derivatives(z[i], width);
                d[width] / factorial(width)
            } else if spread <= CLUSTER_WIDTH {
                clustered(f, &z[i..=j])
            } else {
                (t[i + 1][width - 1] - t[i][width - 1]) / spread
            };
            t[i].push(v);
        }
    }
    t
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// `f[x_1..x_k] = sum_m f^{(m)}(c)/m! h_{m-k+1}(x - c)` with `h_p` the
/// complete homogeneous symmetric polynomials and `c` the midpoint.
fn clustered(f: &FunctionSpec, x: &[f64]) -> f64 {
    let k = x.len();
    let c = 0.5 * (x[0] + x[k - 1]);
    let y: Vec<f64> = x.iter().map(|v| v - c).collect();
    let last = k - 1 + CLUSTER_MAX_TERMS;
    let d = f.derivatives(c, last);
    let degree_cap = f.as_polynomial().map(|p| p.degree());
    // h[p] over all k shifted nodes, built one node at a time
    let mut h = vec![0.0; CLUSTER_MAX_TERMS + 1];
    h[0] = 1.0;
    for &yj in &y {
        for p in 1..=CLUSTER_MAX_TERMS {
            h[p] += yj * h[p - 1];
        }
    }
    let mut sum = 0.0;
    let mut inv_fact = 1.0 / factorial(k - 1);
    let mut quiet = 0;
    for p in 0..=CLUSTER_MAX_TERMS {
        let m = k - 1 + p;
        if p > 0 {
            inv_fact /= m as f64;
        }
        if degree_cap.is_some_and(|deg| m > deg) {
            break;
        }
        let term = d[m] * inv_fact * h[p];
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

/// Entry `(1, n)` of `f` applied to the bidiagonal matrix with the nodes on
/// the diagonal and ones above it, evaluated by the Taylor series.
pub fn opitz_matrix_check(f: &FunctionSpec, nodes: &[f64]) -> Result<f64> {
    let z = sorted_nodes(nodes)?;
    let n = z.len();
    let a = Matrix::from_fn(n, |i, j| {
        if i == j {
            z[i]
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    });
    Ok(apply_taylor(f, &a)?.get(0, n - 1))
}

/// Exact divided difference of a rational polynomial; equal nodes use
/// the scaled derivative.
pub fn divided_difference_exact(p: &RationalPolynomial, nodes: &[BigRational]) -> Result<BigRational> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("divided difference needs at least one node".into()));
    }
    let mut z = nodes.to_vec();
    z.sort();
    let k = z.len();
    let mut t: Vec<Vec<BigRational>> = z.iter().map(|x| vec![p.eval(x)]).collect();
    for width in 1..k {
        for i in 0..k - width {
            let j = i + width;
            let spread = &z[j] - &z[i];
            let v = if spread.is_zero() {
                p.scaled_derivative(&z[i], width)
            } else {
                (&t[i + 1][width - 1] - &t[i][width - 1]) / spread
            };
            t[i].push(v);
        }
    }
    Ok(t.swap_remove(0).pop().expect("nonempty table row"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::ratio;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quartic() -> FunctionSpec {
        FunctionSpec::polynomial([1.0, 1.0, 0.5, -2.0 / 3.0, 0.25])
    }

    fn dd(f: &FunctionSpec, nodes: &[f64]) -> f64 {
        divided_difference(f, nodes).unwrap().value
    }

    #[test]
    fn examples() {
        assert_eq!(dd(&FunctionSpec::polynomial([0.0, 0.0, 1.0]), &[1.0, 2.0]), 3.0);
        assert_relative_eq!(dd(&FunctionSpec::exp(), &[0.0, 0.0, 0.0]), 0.5, epsilon = 1e-15);
        assert_relative_eq!(dd(&quartic(), &[-2.0, 2.0]), -5.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn result_reports_sorted_nodes() {
        let r = divided_difference(&FunctionSpec::exp(), &[3.0, -1.0, 2.0]).unwrap();
        assert_eq!(r.nodes, vec![-1.0, 2.0, 3.0]);
        assert_eq!(r.order, 3);
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(divided_difference(&FunctionSpec::exp(), &[]).is_err());
        assert!(divided_difference(&FunctionSpec::exp(), &[f64::NAN]).is_err());
    }

    #[test]
    fn exact_quartic_difference() {
        let f = RationalPolynomial::from_ratios(&[(1, 1), (1, 1), (1, 2), (-2, 3), (1, 4)]);
        let v = divided_difference_exact(&f, &[ratio(2, 1), ratio(-2, 1)]).unwrap();
        assert_eq!(v, ratio(-5, 3));
        let v = divided_difference_exact(&f, &vec![ratio(0, 1); 4]).unwrap();
        assert_eq!(v, ratio(-2, 3));
    }

    #[test]
    fn opitz_examples() {
        let sq = FunctionSpec::polynomial([0.0, 0.0, 1.0]);
        assert_relative_eq!(opitz_matrix_check(&sq, &[1.0, 2.0]).unwrap(), 3.0, epsilon = 1e-14);
        assert_relative_eq!(opitz_matrix_check(&FunctionSpec::exp(), &[0.7]).unwrap(), 0.7_f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(opitz_matrix_check(&FunctionSpec::exp(), &[0.0, 0.0]).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn near_confluent_nodes_stay_accurate() {
        // exp[x, x+e, x+2e] -> exp(x)/2 as e -> 0
        let f = FunctionSpec::exp();
        for (e, tol) in [(1e-3, 1e-13), (1e-5, 1e-13), (1e-7, 1e-13), (1e-8, 1e-13), (1e-10, 1e-9)] {
            let v = dd(&f, &[1.0, 1.0 + e, 1.0 + 2.0 * e]);
            let exact = 1.0_f64.exp() * e.exp_m1().powi(2) / (2.0 * e * e);
            assert_relative_eq!(v, exact, max_relative = tol);
        }
    }

    #[test]
    fn clustered_matches_recurrence_on_moderate_gaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = FunctionSpec::polynomial([0.3, -1.0, 2.0, 0.5, -0.25, 0.1]);
        for _ in 0..100 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..0.4)).collect();
            let exact = {
                let mut z = x.clone();
                z.sort_by(f64::total_cmp);
                let mut t: Vec<f64> = z.iter().map(|&v| f.eval_real(v)).collect();
                for w in 1..z.len() {
                    for i in 0..z.len() - w {
                        t[i] = (t[i + 1] - t[i]) / (z[i + w] - z[i]);
                    }
                }
                t[0]
            };
            let v = clustered(&f, &{
                let mut z = x.clone();
                z.sort_by(f64::total_cmp);
                z
            });
            assert!((v - exact).abs() <= 1e-8 * (1.0 + exact.abs()));
        }
    }
}

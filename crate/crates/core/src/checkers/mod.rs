//! Membership checkers for the classes of entire functions that preserve
//! entrywise nonnegativity, and a seeded counterexample search.
//!
//! Every failing report carries a witness. Whenever the witness includes a
//! matrix, its negative entry has been re-evaluated with
//! [`apply_taylor`](crate::matfun::apply_taylor) before the report is made.

mod falsify;
mod roots;
mod scalar;

pub use falsify::{class_matrix, falsify, falsify_with_tol, MatrixClass};
pub use roots::{min_on_halfline, real_roots};
pub use scalar::{
    check_circulant_preservation, check_divdiff_criterion, check_f1, check_f2, check_newnc, check_sym_parity,
    newnc_values, pair_conditions, triple_condition, NewncValues, PairConditions,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspec::{FunctionSpec, Named, Term};
use crate::matfun::{apply_taylor, Matrix};

/// Default nonnegativity tolerance before scaling.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default sample budget of [`falsify`].
pub const DEFAULT_BUDGET: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PassExact,
    PassSampled,
    Fail,
}

/// Concrete evidence of a violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Nonnegative matrix whose image has a negative entry, when one is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry: Option<[usize; 2]>,
    /// The negative entry of `f(matrix)`, or the condition value when
    /// there is no matrix.
    pub value: f64,
    /// The inequality that failed.
    pub condition: String,
    /// Sample point of the condition.
    pub params: Vec<f64>,
    pub condition_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    fn pass(verdict: Verdict, samples: usize, cfg: &SamplerConfig) -> Self {
        CheckReport {
            verdict,
            witness: None,
            samples,
            seed: cfg.seed,
            tolerance: cfg.tol,
            notes: Vec::new(),
        }
    }

    fn fail(witness: Witness, samples: usize, cfg: &SamplerConfig) -> Self {
        CheckReport {
            verdict: Verdict::Fail,
            witness: Some(witness),
            samples,
            seed: cfg.seed,
            tolerance: cfg.tol,
            notes: Vec::new(),
        }
    }
}

/// Sampling parameters shared by the checkers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    /// Right end `X` of the sampled range `[0, X]`.
    pub grid_max: f64,
    /// Uniform grid points per axis.
    pub grid_points: usize,
    pub random_samples: usize,
    pub seed: u64,
    /// A value `v` of natural size `s` counts as negative when
    /// `v < -tol (1 + s)`.
    pub tol: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            grid_max: 10.0,
            grid_points: 200,
            random_samples: 2000,
            seed: 0,
            tol: DEFAULT_TOL,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_max.is_finite() && self.grid_max > 0.0) {
            return Err(Error::InvalidInput(format!("grid_max must be positive, got {}", self.grid_max)));
        }
        if self.grid_points < 2 {
            return Err(Error::InvalidInput("grid_points must be at least 2".into()));
        }
        if self.random_samples == 0 {
            return Err(Error::InvalidInput("random_samples must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    fn threshold(&self, scale: f64) -> f64 {
        -self.tol * (1.0 + scale)
    }
}

/// Upper bound on the size of the terms making up `f^{(k)}(x)`, used to
/// scale tolerances.
pub(crate) fn majorant(f: &FunctionSpec, x: f64, k: usize) -> f64 {
    fn poly(c: &[f64], x: f64, k: usize) -> f64 {
        let ax = x.abs();
        c.iter()
            .enumerate()
            .skip(k)
            .map(|(j, a)| a.abs() * ((j - k + 1)..=j).map(|t| t as f64).product::<f64>() * ax.powi((j - k) as i32))
            .sum()
    }
    fn named(n: Named, x: f64) -> f64 {
        match n {
            Named::Exp | Named::Sinh | Named::Cosh => x.abs().exp(),
            Named::Sin | Named::Cos => 1.0,
        }
    }
    match f {
        FunctionSpec::Polynomial(p) => poly(p.coeffs(), x, k),
        FunctionSpec::Named(n) => named(*n, x),
        FunctionSpec::Sum(terms) => terms
            .iter()
            .map(|(w, t)| {
                w.abs()
                    * match t {
                        Term::Polynomial(p) => poly(p.coeffs(), x, k),
                        Term::Named(n) => named(*n, x),
                    }
            })
            .sum(),
    }
}

/// Re-evaluates `f(a)` with the Taylor oracle and returns its most negative
/// entry when it lies below `-tol (1 + ||f(a)||_max)`.
pub fn confirm_negative(f: &FunctionSpec, a: &Matrix, tol: f64) -> Result<Option<([usize; 2], f64)>> {
    let fa = apply_taylor(f, a)?;
    let (i, j, v) = fa.min_entry();
    if v < -tol * (1.0 + fa.max_norm()) {
        Ok(Some(([i, j], v)))
    } else {
        Ok(None)
    }
}

/// Entry `[i, j]` of the Taylor image when it is below tolerance.
pub(crate) fn confirm_entry(f: &FunctionSpec, a: &Matrix, entry: [usize; 2], tol: f64) -> Result<Option<f64>> {
    let fa = apply_taylor(f, a)?;
    let v = fa.get(entry[0], entry[1]);
    Ok((v < -tol * (1.0 + fa.max_norm())).then_some(v))
}

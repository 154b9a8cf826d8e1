//! Entire functions with exact derivative access.
//!
//! A [`FunctionSpec`] is a polynomial, one of a fixed set of named analytic
//! functions, or a one-level weighted sum of those. Every variant can be
//! evaluated at complex points, differentiated to any order at real points,
//! expanded into Taylor coefficients at the origin and split into even and
//! odd parts.

mod rational;

pub use rational::{ratio, RationalPolynomial};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named entire functions with closed-form derivative cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Named {
    Exp,
    Sinh,
    Cosh,
    Sin,
    Cos,
}

impl Named {
    pub const ALL: [Named; 5] = [Named::Exp, Named::Sinh, Named::Cosh, Named::Sin, Named::Cos];

    pub fn name(self) -> &'static str {
        match self {
            Named::Exp => "exp",
            Named::Sinh => "sinh",
            Named::Cosh => "cosh",
            Named::Sin => "sin",
            Named::Cos => "cos",
        }
    }

    pub fn eval(self, z: Complex64) -> Complex64 {
        match self {
            Named::Exp => z.exp(),
            Named::Sinh => z.sinh(),
            Named::Cosh => z.cosh(),
            Named::Sin => z.sin(),
            Named::Cos => z.cos(),
        }
    }

    pub fn eval_real(self, x: f64) -> f64 {
        match self {
            Named::Exp => x.exp(),
            Named::Sinh => x.sinh(),
            Named::Cosh => x.cosh(),
            Named::Sin => x.sin(),
            Named::Cos => x.cos(),
        }
    }

    /// `k`-th derivative at a real point.
    pub fn derivative(self, x: f64, k: usize) -> f64 {
        match self {
            Named::Exp => x.exp(),
            Named::Sinh if k % 2 == 0 => x.sinh(),
            Named::Sinh => x.cosh(),
            Named::Cosh if k % 2 == 0 => x.cosh(),
            Named::Cosh => x.sinh(),
            Named::Sin => match k % 4 {
                0 => x.sin(),
                1 => x.cos(),
                2 => -x.sin(),
                _ => -x.cos(),
            },
            Named::Cos => match k % 4 {
                0 => x.cos(),
                1 => -x.sin(),
                2 => -x.cos(),
                _ => x.sin(),
            },
        }
    }

    /// `f^{(k)}(0)`, which is always one of -1, 0, 1.
    fn derivative_at_zero(self, k: usize) -> f64 {
        match self {
            Named::Exp => 1.0,
            Named::Sinh => (k % 2) as f64,
            Named::Cosh => ((k + 1) % 2) as f64,
            Named::Sin => [0.0, 1.0, 0.0, -1.0][k % 4],
            Named::Cos => [1.0, 0.0, -1.0, 0.0][k % 4],
        }
    }
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Real polynomial with ascending coefficients `a_0, ..., a_d`.
///
/// Trailing zeros are trimmed on construction; the zero polynomial is `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Panics if a coefficient is not finite.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        assert!(
            coeffs.iter().all(|c| c.is_finite()),
            "polynomial coefficients must be finite"
        );
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| j as f64 * c)
                .collect::<Vec<_>>(),
        )
    }

    /// Polynomial with coefficients `a_{start}, a_{start+2}, ...`.
    fn every_other(&self, start: usize) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .skip(start)
                .step_by(2)
                .copied()
                .collect::<Vec<_>>(),
        )
    }

    /// Coefficients of `p(z)` restricted to indices with the given parity;
    /// the other slots are zero.
    fn parity_part(&self, odd: bool) -> Polynomial {
        let start = usize::from(odd);
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| if j % 2 == start { c } else { 0.0 })
                .collect::<Vec<_>>(),
        )
    }
}

/// One summand of a [`FunctionSpec::Sum`].
#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Polynomial(Polynomial),
    Named(Named),
}

impl Term {
    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Term::Polynomial(p) => p.eval(z),
            Term::Named(n) => n.eval(z),
        }
    }

    fn eval_real(&self, x: f64) -> f64 {
        match self {
            Term::Polynomial(p) => p.eval_real(x),
            Term::Named(n) => n.eval_real(x),
        }
    }
}

/// An entire function given in closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Polynomial(Polynomial),
    Named(Named),
    /// Weighted sum of polynomials and named functions; never nested.
    Sum(Vec<(f64, Term)>),
}

impl From<Polynomial> for FunctionSpec {
    fn from(p: Polynomial) -> Self {
        FunctionSpec::Polynomial(p)
    }
}

impl From<Named> for FunctionSpec {
    fn from(n: Named) -> Self {
        FunctionSpec::Named(n)
    }
}

impl FunctionSpec {
    pub fn polynomial(coeffs: impl Into<Vec<f64>>) -> Self {
        FunctionSpec::Polynomial(Polynomial::new(coeffs))
    }

    pub fn exp() -> Self {
        FunctionSpec::Named(Named::Exp)
    }

    /// Builds a weighted sum, flattening nested sums into one level.
    pub fn sum(terms: impl IntoIterator<Item = (f64, FunctionSpec)>) -> Result<Self> {
        let mut flat = Vec::new();
        for (w, f) in terms {
            if !w.is_finite() {
                return Err(Error::InvalidInput(format!("sum weight {w} is not finite")));
            }
            match f {
                FunctionSpec::Polynomial(p) => flat.push((w, Term::Polynomial(p))),
                FunctionSpec::Named(n) => flat.push((w, Term::Named(n))),
                FunctionSpec::Sum(inner) => {
                    flat.extend(inner.into_iter().map(|(v, t)| (w * v, t)));
                }
            }
        }
        if flat.is_empty() {
            return Err(Error::InvalidInput("sum needs at least one term".into()));
        }
        Ok(FunctionSpec::Sum(flat))
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            FunctionSpec::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Value at a complex point. Real coefficients and real `z` give an
    /// imaginary part of exactly zero.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            FunctionSpec::Polynomial(p) => p.eval(z),
            FunctionSpec::Named(n) => n.eval(z),
            FunctionSpec::Sum(terms) => terms
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, (w, t)| acc + t.eval(z) * *w),
        }
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        match self {
            FunctionSpec::Polynomial(p) => p.eval_real(x),
            FunctionSpec::Named(n) => n.eval_real(x),
            FunctionSpec::Sum(terms) => terms
                .iter()
                .fold(0.0, |acc, (w, t)| acc + t.eval_real(x) * *w),
        }
    }

    /// `[f(x), f'(x), ..., f^{(k)}(x)]`.
    pub fn derivatives(&self, x: f64, k: usize) -> Vec<f64> {
        match self {
            FunctionSpec::Polynomial(p) => poly_derivatives(p, x, k),
            FunctionSpec::Named(n) => (0..=k).map(|j| n.derivative(x, j)).collect(),
            FunctionSpec::Sum(terms) => {
                let mut out = vec![0.0; k + 1];
                for (w, t) in terms {
                    let d = match t {
                        Term::Polynomial(p) => poly_derivatives(p, x, k),
                        Term::Named(n) => (0..=k).map(|j| n.derivative(x, j)).collect(),
                    };
                    for (o, v) in out.iter_mut().zip(d) {
                        *o += v * *w;
                    }
                }
                out
            }
        }
    }

    /// Taylor coefficients `a_j = f^{(j)}(0) / j!` for `j = 0..=m`.
    pub fn taylor_coefficients(&self, m: usize) -> Vec<f64> {
        match self {
            FunctionSpec::Polynomial(p) => poly_taylor(p, m),
            FunctionSpec::Named(n) => named_taylor(*n, m),
            FunctionSpec::Sum(terms) => {
                let mut out = vec![0.0; m + 1];
                for (w, t) in terms {
                    let c = match t {
                        Term::Polynomial(p) => poly_taylor(p, m),
                        Term::Named(n) => named_taylor(*n, m),
                    };
                    for (o, v) in out.iter_mut().zip(c) {
                        *o += v * *w;
                    }
                }
                out
            }
        }
    }

    /// Splits `f` into even and odd parts and, where a polynomial form
    /// exists, the factors `g`, `h` with `f_even(z) = g(z^2)` and
    /// `f_odd(z) = z h(z^2)`.
    pub fn parity_decompose(&self) -> ParityParts {
        let canon = Canonical::of(self);
        let even = canon.parity_part(false);
        let odd = canon.parity_part(true);
        let g = even.poly_only().map(|p| FunctionSpec::Polynomial(p.every_other(0)));
        let h = odd.poly_only().map(|p| FunctionSpec::Polynomial(p.every_other(1)));
        let exact = g.is_some() && h.is_some();
        ParityParts {
            f_even: even.into_spec(),
            f_odd: odd.into_spec(),
            g,
            h,
            exact,
        }
    }

    /// True when the function is identically zero after merging like terms.
    pub fn is_identically_zero(&self) -> bool {
        Canonical::of(self).is_zero()
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Polynomial(p) => write!(f, "poly{:?}", p.coeffs()),
            FunctionSpec::Named(n) => write!(f, "{n}"),
            FunctionSpec::Sum(terms) => {
                for (i, (w, t)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match t {
                        Term::Polynomial(p) => write!(f, "{w}*poly{:?}", p.coeffs())?,
                        Term::Named(n) => write!(f, "{w}*{n}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

fn poly_derivatives(p: &Polynomial, x: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    let mut d = p.clone();
    for _ in 0..=k {
        out.push(d.eval_real(x));
        d = d.derivative();
    }
    out
}

fn poly_taylor(p: &Polynomial, m: usize) -> Vec<f64> {
    (0..=m).map(|j| p.coeffs.get(j).copied().unwrap_or(0.0)).collect()
}

fn named_taylor(n: Named, m: usize) -> Vec<f64> {
    let mut inv_fact = 1.0;
    (0..=m)
        .map(|j| {
            if j > 0 {
                inv_fact /= j as f64;
            }
            n.derivative_at_zero(j) * inv_fact
        })
        .collect()
}

/// Result of [`FunctionSpec::parity_decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParityParts {
    pub f_even: FunctionSpec,
    pub f_odd: FunctionSpec,
    /// `f_even(z) = g(z^2)`, when `g` is a polynomial.
    pub g: Option<FunctionSpec>,
    /// `f_odd(z) = z h(z^2)`, when `h` is a polynomial.
    pub h: Option<FunctionSpec>,
    /// Both `g` and `h` are available in closed form.
    pub exact: bool,
}

/// Like terms merged: one polynomial plus one weight per named function,
/// with `exp` rewritten as `cosh + sinh`.
#[derive(Clone, Debug)]
struct Canonical {
    poly: Vec<f64>,
    sinh: f64,
    cosh: f64,
    sin: f64,
    cos: f64,
}

impl Canonical {
    fn of(f: &FunctionSpec) -> Self {
        let mut c = Canonical {
            poly: vec![0.0],
            sinh: 0.0,
            cosh: 0.0,
            sin: 0.0,
            cos: 0.0,
        };
        match f {
            FunctionSpec::Polynomial(p) => c.add_poly(1.0, p),
            FunctionSpec::Named(n) => c.add_named(1.0, *n),
            FunctionSpec::Sum(terms) => {
                for (w, t) in terms {
                    match t {
                        Term::Polynomial(p) => c.add_poly(*w, p),
                        Term::Named(n) => c.add_named(*w, *n),
                    }
                }
            }
        }
        c
    }

    fn add_poly(&mut self, w: f64, p: &Polynomial) {
        if self.poly.len() < p.coeffs.len() {
            self.poly.resize(p.coeffs.len(), 0.0);
        }
        for (a, b) in self.poly.iter_mut().zip(&p.coeffs) {
            *a += w * b;
        }
    }

    fn add_named(&mut self, w: f64, n: Named) {
        match n {
            Named::Exp => {
                self.sinh += w;
                self.cosh += w;
            }
            Named::Sinh => self.sinh += w,
            Named::Cosh => self.cosh += w,
            Named::Sin => self.sin += w,
            Named::Cos => self.cos += w,
        }
    }

    fn parity_part(&self, odd: bool) -> Canonical {
        let p = Polynomial::new(self.poly.clone()).parity_part(odd);
        Canonical {
            poly: p.coeffs,
            sinh: if odd { self.sinh } else { 0.0 },
            sin: if odd { self.sin } else { 0.0 },
            cosh: if odd { 0.0 } else { self.cosh },
            cos: if odd { 0.0 } else { self.cos },
        }
    }

    fn named_weights(&self) -> [(f64, Named); 4] {
        [
            (self.sinh, Named::Sinh),
            (self.cosh, Named::Cosh),
            (self.sin, Named::Sin),
            (self.cos, Named::Cos),
        ]
    }

    fn poly_only(&self) -> Option<Polynomial> {
        self.named_weights()
            .iter()
            .all(|(w, _)| *w == 0.0)
            .then(|| Polynomial::new(self.poly.clone()))
    }

    fn is_zero(&self) -> bool {
        self.poly_only().is_some_and(|p| p.is_zero())
    }

    fn into_spec(self) -> FunctionSpec {
        let poly = Polynomial::new(self.poly.clone());
        let named: Vec<(f64, Named)> = self
            .named_weights()
            .into_iter()
            .filter(|(w, _)| *w != 0.0)
            .collect();
        match (poly.is_zero(), named.as_slice()) {
            (_, []) => FunctionSpec::Polynomial(poly),
            (true, [(w, n)]) if *w == 1.0 => FunctionSpec::Named(*n),
            _ => {
                let mut terms = Vec::new();
                if !poly.is_zero() {
                    terms.push((1.0, Term::Polynomial(poly)));
                }
                terms.extend(named.into_iter().map(|(w, n)| (w, Term::Named(n))));
                FunctionSpec::Sum(terms)
            }
        }
    }
}

// JSON wire format.

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum FunctionJson {
    Polynomial { coeffs: Vec<f64> },
    Named { name: Named },
    Sum { terms: Vec<SumTermJson> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SumTermJson {
    weight: f64,
    func: FunctionJson,
}

impl TryFrom<FunctionJson> for FunctionSpec {
    type Error = Error;

    fn try_from(json: FunctionJson) -> Result<Self> {
        match json {
            FunctionJson::Polynomial { coeffs } => {
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidInput("polynomial coefficient is not finite".into()));
                }
                Ok(FunctionSpec::polynomial(coeffs))
            }
            FunctionJson::Named { name } => Ok(FunctionSpec::Named(name)),
            FunctionJson::Sum { terms } => {
                let terms = terms
                    .into_iter()
                    .map(|t| Ok((t.weight, FunctionSpec::try_from(t.func)?)))
                    .collect::<Result<Vec<_>>>()?;
                FunctionSpec::sum(terms)
            }
        }
    }
}

impl From<&FunctionSpec> for FunctionJson {
    fn from(f: &FunctionSpec) -> Self {
        let term_json = |t: &Term| match t {
            Term::Polynomial(p) => FunctionJson::Polynomial {
                coeffs: p.coeffs.clone(),
            },
            Term::Named(n) => FunctionJson::Named { name: *n },
        };
        match f {
            FunctionSpec::Polynomial(p) => FunctionJson::Polynomial {
                coeffs: p.coeffs.clone(),
            },
            FunctionSpec::Named(n) => FunctionJson::Named { name: *n },
            FunctionSpec::Sum(terms) => FunctionJson::Sum {
                terms: terms
                    .iter()
                    .map(|(w, t)| SumTermJson {
                        weight: *w,
                        func: term_json(t),
                    })
                    .collect(),
            },
        }
    }
}

impl Serialize for FunctionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = FunctionJson::deserialize(d)?;
        FunctionSpec::try_from(json).map_err(serde::de::Error::custom)
    }
}

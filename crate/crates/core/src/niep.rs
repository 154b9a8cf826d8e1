//! Necessary-condition screens for the nonnegative inverse eigenvalue
//! problem: moment nonnegativity, the JLL inequalities and Newton's
//! inequalities for the normalized characteristic coefficients of the
//! shifted M-matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::circ_spectrum;

/// Relative slack of the moment and JLL comparisons.
pub const SCREEN_SLACK: f64 = 1e-9;
const MOMENT_SLACK: f64 = 1e-12;
const NEWTON_SLACK: f64 = 1e-10;
/// Relative allowance when comparing the shift with the largest modulus;
/// a power-iteration Perron estimate approaches the root from below.
const SHIFT_SLACK: f64 = 1e-8;

/// A candidate spectrum, kept sorted by real part then imaginary part.
///
/// Tuples are real except when built from a circulant row, where the
/// values come in conjugate pairs and every symmetric function is real.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTuple {
    values: Vec<Complex64>,
}

impl SpectrumTuple {
    pub fn real(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("spectrum tuple is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("tuple entry {v} is not finite")));
        }
        Ok(Self::sorted(values.iter().map(|&v| Complex64::new(v, 0.0)).collect()))
    }

    /// Spectrum of the circulant with first row `row`.
    pub fn from_circulant_row(row: &[f64]) -> Result<Self> {
        Ok(Self::sorted(circ_spectrum(row)?.values))
    }

    fn sorted(mut values: Vec<Complex64>) -> Self {
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        SpectrumTuple { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Real parts, if every value is real to `1e-12 (1 + |re|)`.
    pub fn real_values(&self) -> Option<Vec<f64>> {
        self.values
            .iter()
            .map(|z| (z.im.abs() <= 1e-12 * (1.0 + z.re.abs())).then_some(z.re))
            .collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `s_1, ..., s_{m_max}` with `s_m = sum lambda^m`.
    pub fn power_sums(&self, m_max: usize) -> Vec<f64> {
        (1..=m_max).map(|m| self.values.iter().map(|z| z.powu(m as u32)).sum::<Complex64>().re).collect()
    }

    /// `sum |lambda|^m`, the natural size of `s_m`.
    fn abs_power_sum(&self, m: usize) -> f64 {
        self.values.iter().map(|z| z.norm().powi(m as i32)).sum()
    }

    /// `sigma_1, ..., sigma_n` of the values.
    pub fn elementary_symmetric(&self) -> Vec<f64> {
        elementary(&self.values).into_iter().map(|z| z.re).collect()
    }

    /// Normalized coefficients `c_0 = 1, c_1, ..., c_n` of
    /// `det(x I - M) = sum_j (-1)^j C(n, j) c_j x^{n-j}` for the M-matrix
    /// `M = rI - A` whose eigenvalues are `r - lambda_i`.
    pub fn normalized_coefficients(&self, r: f64) -> Vec<f64> {
        let n = self.len();
        let mu: Vec<Complex64> = self.values.iter().map(|z| Complex64::new(r, 0.0) - z).collect();
        let sigma = elementary(&mu);
        let mut c = vec![1.0];
        for (j, s) in sigma.iter().enumerate() {
            c.push(s.re / binomial(n, j + 1));
        }
        c
    }

    /// True when every nonreal value has its conjugate in the tuple.
    pub fn is_conjugation_closed(&self) -> bool {
        self.values.iter().all(|z| {
            let tol = 1e-9 * (1.0 + z.norm());
            z.im.abs() <= tol || self.values.iter().any(|w| (w - z.conj()).norm() <= tol)
        })
    }
}

fn elementary(values: &[Complex64]) -> Vec<Complex64> {
    // coefficients of prod (x + lambda_i), highest power first
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &lambda in values {
        poly.push(Complex64::new(0.0, 0.0));
        for j in (1..poly.len()).rev() {
            let prev = poly[j - 1];
            poly[j] += lambda * prev;
        }
    }
    poly.split_off(1)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sigma_1..sigma_n` of a real tuple.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    elementary(&values.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>())
        .into_iter()
        .map(|z| z.re)
        .collect()
}

/// `s_1..s_{m_max}` of a real tuple.
pub fn power_sums(values: &[f64], m_max: usize) -> Vec<f64> {
    (1..=m_max).map(|m| values.iter().map(|v| v.powi(m as i32)).sum()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Screen {
    Moments,
    Jll,
    Newton,
}

impl Screen {
    pub fn parse(name: &str) -> Option<Screen> {
        match name {
            "moments" => Some(Screen::Moments),
            "jll" => Some(Screen::Jll),
            "newton" => Some(Screen::Newton),
            _ => None,
        }
    }
}

/// First inequality found violated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScreenViolation {
    pub condition: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScreenReport {
    pub screen: Screen,
    pub passed: bool,
    pub checked: usize,
    pub violation: Option<ScreenViolation>,
}

impl ScreenReport {
    fn new(screen: Screen) -> Self {
        ScreenReport {
            screen,
            passed: true,
            checked: 0,
            violation: None,
        }
    }

    // records `lhs <= rhs` (within `slack`); keeps the first violation
    fn record(&mut self, condition: impl FnOnce() -> String, lhs: f64, rhs: f64, slack: f64) {
        self.checked += 1;
        if self.passed && lhs > rhs + slack {
            self.passed = false;
            self.violation = Some(ScreenViolation {
                condition: condition(),
                lhs,
                rhs,
            });
        }
    }
}

/// `s_m >= 0` for `m = 1..=m_max`.
pub fn check_moments(tuple: &SpectrumTuple, m_max: usize) -> ScreenReport {
    let mut report = ScreenReport::new(Screen::Moments);
    for (i, s) in tuple.power_sums(m_max).into_iter().enumerate() {
        let m = i + 1;
        let slack = MOMENT_SLACK * tuple.abs_power_sum(m);
        report.record(|| format!("s_{m} >= 0"), -s, 0.0, slack);
    }
    report
}

/// `s_k^m <= n^{m-1} s_{km}` for `k <= k_max`, `2 <= m <= m_max`, after
/// the moment screen up to `k_max * m_max`.
pub fn check_jll(tuple: &SpectrumTuple, k_max: usize, m_max: usize) -> ScreenReport {
    let mut report = check_moments(tuple, k_max * m_max);
    report.screen = Screen::Jll;
    let n = tuple.len() as f64;
    let s = tuple.power_sums(k_max * m_max);
    for k in 1..=k_max {
        for m in 2..=m_max {
            let lhs = s[k - 1].powi(m as i32);
            let rhs = n.powi(m as i32 - 1) * s[k * m - 1];
            let size = tuple.abs_power_sum(k).powi(m as i32) + n.powi(m as i32 - 1) * tuple.abs_power_sum(k * m);
            report.record(|| format!("s_{k}^{m} <= n^{} s_{}", m - 1, k * m), lhs, rhs, SCREEN_SLACK * size);
        }
    }
    report
}

/// `c_j^2 >= c_{j-1} c_{j+1}` for `j = 1..n-1` with `c_j` the normalized
/// coefficients of `rI - A`.
pub fn check_newton_ineq(tuple: &SpectrumTuple, r: f64) -> Result<ScreenReport> {
    let radius = tuple.max_modulus();
    if !r.is_finite() || r < radius - SHIFT_SLACK * (1.0 + radius) {
        return Err(Error::ShiftTooSmall { r, radius });
    }
    let c = tuple.normalized_coefficients(r);
    let n = tuple.len();
    let mu_max = tuple.values.iter().fold(0.0_f64, |m, z| m.max((Complex64::new(r, 0.0) - z).norm()));
    let mut report = ScreenReport::new(Screen::Newton);
    for j in 1..n {
        let lhs = c[j - 1] * c[j + 1];
        let rhs = c[j] * c[j];
        let size = rhs.max(lhs.abs()).max(mu_max.powi(2 * j as i32));
        report.record(|| format!("c_{j}^2 >= c_{} c_{}", j - 1, j + 1), lhs, rhs, NEWTON_SLACK * size);
    }
    Ok(report)
}

/// Consequences of moment nonnegativity, reported as diagnostics only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronDiagnostic {
    /// Largest modulus among the values.
    pub spectral_radius: f64,
    /// Whether a real nonnegative value attains the largest modulus.
    pub perron_value_present: bool,
    pub conjugation_closed: bool,
}

pub fn perron_diagnostic(tuple: &SpectrumTuple) -> PerronDiagnostic {
    let radius = tuple.max_modulus();
    let tol = 1e-9 * (1.0 + radius);
    PerronDiagnostic {
        spectral_radius: radius,
        perron_value_present: tuple.values.iter().any(|z| z.im.abs() <= tol && (z.re - radius).abs() <= tol),
        conjugation_closed: tuple.is_conjugation_closed(),
    }
}

/// Selected screens run together.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NiepReport {
    pub passed: bool,
    pub screens: Vec<ScreenReport>,
    pub diagnostics: PerronDiagnostic,
}

/// Default JLL grid bound for both `k` and `m`.
pub const JLL_DEFAULT_MAX: usize = 4;

/// Runs the requested screens; Newton's inequalities use the shift `r`,
/// defaulting to the largest modulus.
pub fn screen(tuple: &SpectrumTuple, screens: &[Screen], r: Option<f64>) -> Result<NiepReport> {
    let mut out = Vec::new();
    for s in screens {
        out.push(match s {
            Screen::Moments => check_moments(tuple, JLL_DEFAULT_MAX * JLL_DEFAULT_MAX),
            Screen::Jll => check_jll(tuple, JLL_DEFAULT_MAX, JLL_DEFAULT_MAX),
            Screen::Newton => check_newton_ineq(tuple, r.unwrap_or_else(|| tuple.max_modulus()))?,
        });
    }
    Ok(NiepReport {
        passed: out.iter().all(|s| s.passed),
        screens: out,
        diagnostics: perron_diagnostic(tuple),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[f64]) -> SpectrumTuple {
        SpectrumTuple::real(v).unwrap()
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(t(&[2.0, -1.0, -1.0]).power_sums(3), vec![0.0, 6.0, 6.0]);
        assert_eq!(t(&[1.0]).power_sums(4), vec![1.0; 4]);
        assert_eq!(t(&[1.0, -2.0]).power_sums(1), vec![-1.0]);
        assert!(!check_moments(&t(&[1.0, -2.0]), 4).passed);
        assert_eq!(power_sums(&[2.0, -1.0, -1.0], 2), vec![0.0, 6.0]);
    }

    #[test]
    fn jll_examples() {
        let r = check_jll(&t(&[2.0, -1.0, -1.0]), 1, 2);
        assert!(r.passed);
        assert!(check_jll(&t(&[1.0, 1.0]), 1, 2).passed);
        assert!(check_jll(&t(&[1.7]), 4, 4).passed);
        assert!(check_jll(&t(&[2.0, -1.0, -1.0]), 4, 4).passed);
        // s_1 = 0 but s_1^2 = 0 <= 2 s_2 holds; a tuple with big s_1 and small s_2 fails
        let r = check_jll(&t(&[3.0, 3.0, -2.9, -2.9]), 1, 2);
        assert!(r.passed);
    }

    #[test]
    fn jll_reports_first_violation() {
        let r = check_jll(&t(&[1.0, -2.0]), 4, 4);
        assert!(!r.passed);
        assert_eq!(r.violation.unwrap().condition, "s_1 >= 0");
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0]), vec![6.0, 11.0, 6.0]);
        assert_eq!(*elementary_symmetric(&[4.0, 0.0, -1.5]).last().unwrap(), 0.0);
        assert_eq!(elementary_symmetric(&[2.5]), vec![2.5]);
    }

    #[test]
    fn newton_examples() {
        let tup = t(&[1.0, -1.0]);
        assert_eq!(tup.normalized_coefficients(1.0), vec![1.0, 1.0, 0.0]);
        assert!(check_newton_ineq(&tup, 1.0).unwrap().passed);
        let ones = t(&[0.0, 0.0]);
        assert_eq!(ones.normalized_coefficients(1.0), vec![1.0, 1.0, 1.0]);
        assert!(check_newton_ineq(&ones, 1.0).unwrap().passed);
        let flat = t(&[2.0, 2.0, 2.0]);
        assert_eq!(flat.normalized_coefficients(2.0), vec![1.0, 0.0, 0.0, 0.0]);
        assert!(check_newton_ineq(&flat, 2.0).unwrap().passed);
        assert!(matches!(check_newton_ineq(&tup, 0.5), Err(Error::ShiftTooSmall { .. })));
    }

    #[test]
    fn circulant_tuple_is_real_after_pairing() {
        let tup = SpectrumTuple::from_circulant_row(&[0.0, 1.0, 1.0]).unwrap();
        let v = tup.real_values().unwrap();
        let expected = [-1.0, -1.0, 2.0];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let tup = SpectrumTuple::from_circulant_row(&[1.0, 2.0, 0.5]).unwrap();
        assert!(tup.real_values().is_none());
        assert!(tup.is_conjugation_closed());
        assert!(check_jll(&tup, 4, 4).passed);
        let d = perron_diagnostic(&tup);
        assert!(d.perron_value_present && (d.spectral_radius - 3.5).abs() < 1e-12);
    }

    #[test]
    fn screen_bundles_checks() {
        let r = screen(&t(&[2.0, -1.0, -1.0]), &[Screen::Moments, Screen::Jll], None).unwrap();
        assert!(r.passed && r.screens.len() == 2);
        let r = screen(&t(&[1.0, -2.0]), &[Screen::Moments], None).unwrap();
        assert!(!r.passed);
        assert!(!r.diagnostics.perron_value_present);
    }
}

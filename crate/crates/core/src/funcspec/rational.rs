use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::Polynomial;

/// Polynomial with exact rational coefficients, ascending order.
///
/// Used where a regression value must be reproduced without rounding,
/// e.g. divided differences of polynomials with rational constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

/// Shorthand for the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl RationalPolynomial {
    pub fn new(coeffs: impl Into<Vec<BigRational>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1].is_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RationalPolynomial { coeffs }
    }

    /// Builds from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(n, d)| ratio(n, d)).collect::<Vec<_>>())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RationalPolynomial {
        if self.coeffs.len() == 1 {
            return RationalPolynomial::new(vec![BigRational::zero()]);
        }
        RationalPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
                .collect::<Vec<_>>(),
        )
    }

    /// `p^{(k)}(x) / k!`, exactly.
    pub fn scaled_derivative(&self, x: &BigRational, k: usize) -> BigRational {
        let mut d = self.clone();
        let mut fact = BigRational::one();
        for j in 1..=k {
            d = d.derivative();
            fact *= BigRational::from_integer(BigInt::from(j));
        }
        d.eval(x) / fact
    }

    /// Nearest binary64 polynomial.
    pub fn to_f64(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect::<Vec<_>>(),
        )
    }
}

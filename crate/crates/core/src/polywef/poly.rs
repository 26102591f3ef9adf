use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`. The representation is kept
/// normalized: no trailing zero coefficients, and the zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `(a + b x)^n` expanded with the binomial theorem.
    pub fn binomial_power(a: i64, b: i64, n: usize) -> Self {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut binom = BigInt::one();
        for i in 0..=n {
            coeffs.push(&binom * num_traits::pow(b.clone(), i) * num_traits::pow(a.clone(), n - i));
            binom = binom * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Self::new(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coef(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Product keeping only terms of degree `<= max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(max_degree.saturating_add(1));
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::new(self.coeffs.iter().take(max_degree.saturating_add(1)).cloned().collect())
    }

    /// `self^n` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, n: u64) -> Self {
        self.pow_truncated(n, usize::MAX)
    }

    /// `self^n` keeping only terms of degree `<= max_degree` at every step.
    pub fn pow_truncated(&self, mut n: u64, max_degree: usize) -> Self {
        let mut result = Self::one();
        let mut base = self.truncate(max_degree);
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_truncated(&base, max_degree);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_truncated(&base, max_degree);
            }
        }
        result
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        self.mul_truncated(rhs, usize::MAX)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

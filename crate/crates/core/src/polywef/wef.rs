use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::IntPoly;
use crate::error::{GldpcError, Result};
use crate::gf2::{span_weight_histogram, BitMatrix};

/// Largest code (or dual code) dimension `Wef::from_parity_matrix` will enumerate.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 30;

/// Weight enumerating function of a binary linear code of length `s` and
/// dimension `k`: `A(z) = sum_u A_u z^u` with exact coefficients.
///
/// Every constructor checks `A_0 = 1` and `sum_u A_u = 2^k`.
#[derive(Clone)]
pub struct Wef {
    coeffs: Vec<BigUint>,
    dimension: usize,
    min_distance: Option<usize>,
    // (u, ln A_u) for nonzero A_u, used by the log-domain evaluators
    log_terms: Vec<(usize, f64)>,
}

/// Moments of the codeword weight under the tilted distribution
/// `P(u) = A_u z^u / A(z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TiltedMoments {
    /// `ln A(z)`
    pub ln_value: f64,
    /// `z A'(z) / A(z)`
    pub mean: f64,
    pub variance: f64,
}

pub(crate) fn ln_biguint(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits <= 1000 {
        b.to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        let shift = bits - 64;
        (b >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

impl Wef {
    /// Builds a WEF from its coefficient list (index = weight) and the code dimension.
    pub fn from_coeffs(coeffs: Vec<BigUint>, dimension: usize) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(GldpcError::InvalidLength {
                length: coeffs.len().saturating_sub(1),
                reason: "code length must be positive",
            });
        }
        if !coeffs[0].is_one() {
            return Err(GldpcError::InconsistentWef(format!(
                "A_0 = {} but a linear code has exactly one all-zero word",
                coeffs[0]
            )));
        }
        let total: BigUint = coeffs.iter().sum();
        if total != BigUint::one() << dimension {
            return Err(GldpcError::InconsistentWef(format!(
                "coefficients sum to {total}, expected 2^{dimension}"
            )));
        }
        let min_distance = coeffs.iter().skip(1).position(|c| !c.is_zero()).map(|p| p + 1);
        let log_terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(u, c)| (u, ln_biguint(c)))
            .collect();
        Ok(Self {
            coeffs,
            dimension,
            min_distance,
            log_terms,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_u64(coeffs: &[u64], dimension: usize) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigUint::from(c)).collect(), dimension)
    }

    /// Even-weight (single parity-check) code of length `s`.
    pub fn spc(s: usize) -> Result<Self> {
        if s < 2 {
            return Err(GldpcError::InvalidLength {
                length: s,
                reason: "single parity-check codes need length >= 2",
            });
        }
        let mut coeffs = Vec::with_capacity(s + 1);
        let mut binom = BigUint::one();
        for u in 0..=s {
            coeffs.push(if u % 2 == 0 { binom.clone() } else { BigUint::zero() });
            binom = binom * BigUint::from(s - u) / BigUint::from(u + 1);
        }
        Self::from_coeffs(coeffs, s - 1)
    }

    /// Hamming code of length `s = 2^m - 1`, from the closed form
    /// `[(1+z)^s + s (1+z)^((s-1)/2) (1-z)^((s+1)/2)] / (s+1)` in exact arithmetic.
    pub fn hamming(s: usize) -> Result<Self> {
        if s < 3 || !(s + 1).is_power_of_two() {
            return Err(GldpcError::InvalidHammingLength(s));
        }
        let m = (s + 1).trailing_zeros() as usize;
        let s_i = s as i64;
        let numerator = {
            let head = IntPoly::binomial_power(1, 1, s);
            let tail = &IntPoly::binomial_power(1, 1, (s - 1) / 2)
                * &IntPoly::binomial_power(1, -1, s.div_ceil(2));
            let tail = &tail * &IntPoly::from_i64(&[s_i]);
            add(&head, &tail)
        };
        let divisor = BigInt::from(s + 1);
        let coeffs = (0..=s)
            .map(|u| {
                let c = numerator.coef(u);
                if !(&c % &divisor).is_zero() || c.sign() == Sign::Minus {
                    return Err(GldpcError::InconsistentWef(format!(
                        "Hamming({s}) closed form: coefficient {u} = {c} not divisible by {divisor}"
                    )));
                }
                Ok((c / &divisor).to_biguint().unwrap())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(coeffs, s - m)
    }

    /// Exact WEF of the null space of `h`. Enumerates whichever of the code or
    /// its dual has the smaller dimension, transforming back with MacWilliams
    /// when the dual was enumerated. Refuses when that dimension exceeds `limit`.
    pub fn from_parity_matrix(h: &BitMatrix, limit: usize) -> Result<Self> {
        let s = h.cols();
        if s == 0 {
            return Err(GldpcError::InvalidLength {
                length: 0,
                reason: "parity-check matrix has no columns",
            });
        }
        let width = crate::gf2::words_for(s);
        let rank = h.rank();
        let k = s - rank;
        if k.min(rank) > limit {
            return Err(GldpcError::EnumerationLimit {
                dimension: k.min(rank),
                limit,
            });
        }
        if k <= rank {
            let hist = span_weight_histogram(&h.null_space_basis(), width, s);
            Self::from_u64(&hist, k)
        } else {
            let hist = span_weight_histogram(&h.row_space_basis(), width, s);
            Self::from_u64(&hist, rank)?.dual()
        }
    }

    /// WEF of the dual code via the MacWilliams transform
    /// `B(z) = 2^-k sum_w A_w (1-z)^w (1+z)^(s-w)`.
    pub fn dual(&self) -> Result<Self> {
        let s = self.length();
        let mut acc = IntPoly::zero();
        for (w, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = &IntPoly::binomial_power(1, -1, w) * &IntPoly::binomial_power(1, 1, s - w);
            let scaled = IntPoly::new(
                term.coeffs()
                    .iter()
                    .map(|c| c * BigInt::from(a.clone()))
                    .collect(),
            );
            acc = add(&acc, &scaled);
        }
        let shift = self.dimension;
        let coeffs = (0..=s)
            .map(|u| {
                let c = acc.coef(u);
                let mag = c.magnitude();
                let low_bits = mag.trailing_zeros().unwrap_or(u64::MAX);
                if c.sign() == Sign::Minus || (!mag.is_zero() && low_bits < shift as u64) {
                    return Err(GldpcError::InconsistentWef(format!(
                        "MacWilliams transform: coefficient {u} = {c} is not a nonnegative multiple of 2^{shift}"
                    )));
                }
                Ok(mag >> shift)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(coeffs, s - self.dimension)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coef(&self, u: usize) -> BigUint {
        self.coeffs.get(u).cloned().unwrap_or_default()
    }

    pub fn length(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Smallest nonzero codeword weight; `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        self.min_distance
    }

    /// Largest weight with a nonzero coefficient (the polynomial degree).
    pub fn degree(&self) -> usize {
        self.log_terms.last().map_or(0, |&(u, _)| u)
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| BigInt::from(c.clone())).collect())
    }

    /// `ln A(z)` in nats, for `z > 0`.
    pub fn log_eval(&self, z: f64) -> f64 {
        assert!(z > 0.0, "log_eval requires z > 0, got {z}");
        if z == f64::INFINITY {
            return if self.degree() > 0 { f64::INFINITY } else { 0.0 };
        }
        self.log_eval_ln(z.ln())
    }

    /// `ln A(e^t)`, evaluated as a shifted log-sum-exp so that no term overflows.
    pub fn log_eval_ln(&self, ln_z: f64) -> f64 {
        let (imax, max) = self.max_term(ln_z);
        let rest: f64 = self
            .log_terms
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != imax)
            .map(|(_, &(u, ln_a))| (ln_a + u as f64 * ln_z - max).exp())
            .sum();
        max + rest.ln_1p()
    }

    /// Log value, mean and variance of the weight under `A_u z^u / A(z)`, at `z = e^t`.
    pub fn tilted_moments(&self, ln_z: f64) -> TiltedMoments {
        let (imax, max) = self.max_term(ln_z);
        let mut rest = 0.0;
        let mut total = 0.0;
        let mut first = 0.0;
        let mut second = 0.0;
        for (i, &(u, ln_a)) in self.log_terms.iter().enumerate() {
            let w = (ln_a + u as f64 * ln_z - max).exp();
            if i != imax {
                rest += w;
            }
            total += w;
            first += u as f64 * w;
            second += (u * u) as f64 * w;
        }
        let mean = first / total;
        TiltedMoments {
            ln_value: max + rest.ln_1p(),
            mean,
            variance: (second / total - mean * mean).max(0.0),
        }
    }

    fn max_term(&self, ln_z: f64) -> (usize, f64) {
        self.log_terms
            .iter()
            .enumerate()
            .map(|(i, &(u, ln_a))| (i, ln_a + u as f64 * ln_z))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
    }
}

impl PartialEq for Wef {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.coeffs == other.coeffs
    }
}

impl Eq for Wef {}

fn add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.coeffs().len().max(b.coeffs().len());
    IntPoly::new((0..n).map(|i| a.coef(i) + b.coef(i)).collect())
}

impl fmt::Debug for Wef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Wef(s={}, k={}, d={:?}, coeffs=[",
            self.length(),
            self.dimension,
            self.min_distance
        )?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "])")
    }
}

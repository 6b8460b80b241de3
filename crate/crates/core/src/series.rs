//! Truncated power series over an exact coefficient ring.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Coefficient ring for [`PowerSeries`]: an integral domain with exact division
/// wherever a quotient is known to be integral.
pub trait Coeff: Clone + Num + Neg<Output = Self> + FromPrimitive + PartialOrd + Debug {}

impl<T> Coeff for T where T: Clone + Num + Neg<Output = T> + FromPrimitive + PartialOrd + Debug {}

/// `Σ_{k=0}^{N} c_k t^k`, everything above degree `N` discarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> PowerSeries<T> {
    pub fn zero(degree: usize) -> Self {
        PowerSeries {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = T::one();
        s
    }

    /// Pads or truncates `coeffs` to degree `degree`.
    pub fn from_coeffs(mut coeffs: Vec<T>, degree: usize) -> Self {
        coeffs.resize(degree + 1, T::zero());
        PowerSeries { coeffs }
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Product truncated at the smaller of the two degrees.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerSeries { coeffs: out }
    }

    /// `1 / (1 - Σ_j t^{g_j})`, one term per entry of `exponents` (repeats add up).
    pub fn geometric(exponents: &[usize], degree: usize) -> Self {
        let mut out = vec![T::zero(); degree + 1];
        out[0] = T::one();
        for k in 1..=degree {
            let mut acc = T::zero();
            for &g in exponents {
                if g >= 1 && g <= k {
                    acc = acc + out[k - g].clone();
                }
            }
            out[k] = acc;
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplies in place by `(1 + sign·t^step)^exponent` for an integer `exponent`
    /// of either sign, using the generalized binomial series.
    pub fn mul_binomial_power(&mut self, step: usize, sign: &T, exponent: &T) {
        assert!(step >= 1, "binomial step must be positive");
        let n = self.degree();
        let terms = n / step;
        // c_k = binom(exponent, k) * sign^k
        let mut factor = Vec::with_capacity(terms + 1);
        factor.push(T::one());
        let mut binom = T::one();
        let mut sign_pow = T::one();
        for k in 0..terms {
            let kk = T::from_usize(k).expect("term index fits coefficient type");
            binom = binom * (exponent.clone() - kk.clone()) / (kk + T::one());
            sign_pow = sign_pow * sign.clone();
            factor.push(binom.clone() * sign_pow.clone());
        }
        let old = std::mem::replace(&mut self.coeffs, vec![T::zero(); n + 1]);
        for (deg, slot) in self.coeffs.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (k, c) in factor.iter().enumerate().take(deg / step + 1) {
                if !c.is_zero() {
                    acc = acc + c.clone() * old[deg - k * step].clone();
                }
            }
            *slot = acc;
        }
    }
}

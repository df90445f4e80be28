use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{factorial, Rational};

/// Coefficients `c_0..c_N` of a power series in `x`, truncated at order `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Panics on an empty coefficient vector; a series always has order ≥ 0.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// `c·x^k`, which is the zero series when `k > order`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut Rational {
        &mut self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![Rational::zero(); n];
        if k < n {
            coeffs[k..].clone_from_slice(&self.coeffs[..n - k]);
        }
        TruncatedSeries { coeffs }
    }

    /// Substitutes `x -> c·x`.
    pub fn scale_argument(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &pow);
            pow *= c;
        }
        TruncatedSeries { coeffs }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Smallest order where the two series differ, compared up to the
    /// common order.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }
}

/// Coefficientwise sum, truncated to the smaller order.
pub fn series_add(s: &TruncatedSeries, t: &TruncatedSeries) -> TruncatedSeries {
    let coeffs = s.coeffs.iter().zip(&t.coeffs).map(|(a, b)| a + b).collect();
    TruncatedSeries { coeffs }
}

/// Cauchy product, truncated to the smaller order.
pub fn series_mul(s: &TruncatedSeries, t: &TruncatedSeries) -> TruncatedSeries {
    let n = s.order().min(t.order());
    let sv = s.valuation();
    let tv = t.valuation();
    let mut coeffs = vec![Rational::zero(); n + 1];
    let (Some(sv), Some(tv)) = (sv, tv) else {
        return TruncatedSeries { coeffs };
    };
    for (k, slot) in coeffs.iter_mut().enumerate().skip(sv + tv) {
        let mut acc = Rational::zero();
        for i in sv..=(k - tv) {
            let (a, b) = (&s.coeffs[i], &t.coeffs[k - i]);
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        *slot = acc;
    }
    TruncatedSeries { coeffs }
}

/// Taylor coefficients of `exp(λx)` through order `n`.
pub fn series_exp(lambda: &Rational, n: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut pow = Rational::one();
    for k in 0..=n {
        coeffs.push(&pow / Rational::from_integer(factorial(k)));
        pow *= lambda;
    }
    TruncatedSeries { coeffs }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        series_add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        TruncatedSeries { coeffs }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        series_mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

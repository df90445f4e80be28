//! Exact arithmetic: rationals over big integers, Pochhammer symbols,
//! truncated formal power series and numbers of the form `q·(√π)^k`.

mod series;
mod sqrtpi;

pub use series::{series_add, series_exp, series_mul, TruncatedSeries};
pub use sqrtpi::{gamma_ratio_exact, SqrtPiNumber};

use num_bigint::BigInt;
#[cfg(test)]
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("gamma pole in numerator at {0}")]
    NumeratorPole(String),
    #[error("gamma argument {0} is neither an integer nor a half-odd-integer")]
    NonHalfInteger(String),
    #[error("cannot add multiples of different powers of sqrt(pi): {0} and {1}")]
    InhomogeneousSqrtPi(i32, i32),
    #[error("division by zero")]
    DivisionByZero,
}

impl ExactError {
    pub fn name(&self) -> &'static str {
        match self {
            ExactError::NumeratorPole(_) => "NumeratorPole",
            ExactError::NonHalfInteger(_) => "NonHalfInteger",
            ExactError::InhomogeneousSqrtPi(..) => "InhomogeneousSqrtPi",
            ExactError::DivisionByZero => "DivisionByZero",
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rising factorial `(a)_n = a(a+1)…(a+n-1)`, with `(a)_0 = 1`.
pub fn rat_pochhammer(a: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `Some(m)` when `q = -m` for a natural number `m`.
pub fn nonpositive_integer(q: &Rational) -> Option<u64> {
    if q.is_integer() && !q.is_positive() {
        (-q.to_integer()).to_u64()
    } else {
        None
    }
}

pub fn is_half_odd_integer(q: &Rational) -> bool {
    q.denom() == &BigInt::from(2)
}

/// Parses `p`, `p/q`, or a decimal like `-1.25` / `1e-30` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

/// Canonical `p/q` rendering; integers keep the `/1` suffix.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[cfg(test)]
pub(crate) fn gcd_check(q: &Rational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
        && (!q.numer().is_zero() || q.denom().is_one())
}

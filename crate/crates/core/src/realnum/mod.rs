//! High-precision reals on top of `astro-float`, with a Spouge gamma
//! function and explicit pole handling.

mod gamma;

pub use gamma::{gamma, recip_gamma};

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactnum::Rational;

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("gamma pole at {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite result in {0}")]
    NotFinite(&'static str),
    #[error("precision must be at least {min} digits, got {got}", min = Precision::MIN_DIGITS)]
    PrecisionTooLow { got: u32 },
}

impl RealError {
    pub fn name(&self) -> &'static str {
        match self {
            RealError::Pole(_) => "PoleError",
            RealError::Domain(_) => "DomainError",
            RealError::NotFinite(_) => "NotFinite",
            RealError::PrecisionTooLow { .. } => "PrecisionTooLow",
        }
    }
}

/// Number of significant decimal digits carried by an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT_DIGITS: u32 = 40;

    pub fn new(digits: u32) -> Result<Self, RealError> {
        if digits < Self::MIN_DIGITS {
            return Err(RealError::PrecisionTooLow { got: digits });
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Binary precision covering the decimal digits plus a few guard bits.
    pub fn bits(self) -> usize {
        (self.digits as f64 * LOG2_10).ceil() as usize + 8
    }

    /// A wider context for intermediate work.
    pub fn widened(self, extra_digits: u32) -> Self {
        Precision { digits: self.digits + extra_digits }
    }

    /// `10^-(P-5)`: distance below which an argument counts as an integer.
    pub fn snap_tolerance(self) -> HighReal {
        HighReal::pow10(-(self.digits as i64 - 5), self)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: Self::DEFAULT_DIGITS }
    }
}

/// A finite real number with a binary working precision.
#[derive(Clone)]
pub struct HighReal {
    v: BigFloat,
    p: usize,
}

impl fmt::Debug for HighReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HighReal({})", self.to_decimal_string(30))
    }
}

fn bigint_to_bigfloat(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::new(p);
    }
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let words = n.magnitude().to_u64_digits();
    let mut f = BigFloat::from_words(&words, sign, (words.len() * 64) as i32);
    if f.precision().unwrap_or(0) > p {
        let _ = f.set_precision(p, RM);
    }
    f
}

impl HighReal {
    fn wrap(v: BigFloat, p: usize) -> Self {
        HighReal { v, p }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::wrap(BigFloat::new(prec.bits()), prec.bits())
    }

    pub fn from_i64(n: i64, prec: Precision) -> Self {
        let p = prec.bits();
        Self::wrap(BigFloat::from_i64(n, p), p)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_rational(q: &Rational, prec: Precision) -> Self {
        let p = prec.bits();
        let n = bigint_to_bigfloat(q.numer(), p + 64);
        let d = bigint_to_bigfloat(q.denom(), p + 64);
        Self::wrap(n.div(&d, p, RM), p)
    }

    pub fn pi(prec: Precision) -> Self {
        let p = prec.bits();
        Self::wrap(with_consts(|cc| cc.pi(p, RM)), p)
    }

    /// `10^k` for integer `k`.
    pub fn pow10(k: i64, prec: Precision) -> Self {
        let ten = Self::from_i64(10, prec);
        ten.powi(k)
    }

    pub fn bits(&self) -> usize {
        self.p
    }

    /// Re-rounds to another precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let mut v = self.v.clone();
        let _ = v.set_precision(prec.bits(), RM);
        Self::wrap(v, prec.bits())
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    /// Converts a possibly non-finite intermediate into an error.
    pub fn check(self, context: &'static str) -> Result<Self, RealError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(RealError::NotFinite(context))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.p)
    }

    pub fn floor(&self) -> Self {
        Self::wrap(self.v.floor(), self.p)
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> Self {
        let half = BigFloat::from_f64(0.5, self.p);
        if self.is_negative() {
            Self::wrap(self.v.sub(&half, self.p, RM).ceil(), self.p)
        } else {
            Self::wrap(self.v.add(&half, self.p, RM).floor(), self.p)
        }
    }

    /// The nearest integer as `i64`, when it fits.
    pub fn to_i64_round(&self) -> Option<i64> {
        if !self.is_finite() {
            return None;
        }
        let r = self.round();
        let lim = BigFloat::from_f64(9.0e18, self.p);
        if r.v.abs().cmp(&lim)? > 0 {
            return None;
        }
        let s = r.to_decimal_string(20);
        let (mant, exp) = s.split_once('e')?;
        let exp: i32 = exp.parse().ok()?;
        let neg = mant.starts_with('-');
        let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
        let take = (exp + 1).max(0) as usize;
        let int_digits: String = digits.chars().take(take).collect();
        let mut n: i64 = if int_digits.is_empty() { 0 } else { int_digits.parse().ok()? };
        for _ in digits.len()..take {
            n = n.checked_mul(10)?;
        }
        Some(if neg { -n } else { n })
    }

    /// `Some(m)` when the value lies within `10^-(P-5)` of the integer `-m ≤ 0`.
    pub fn near_nonpositive_integer(&self, prec: Precision) -> Option<u64> {
        let r = self.round();
        if r.is_positive() {
            return None;
        }
        let dist = (self - &r).abs();
        if dist <= prec.snap_tolerance() {
            r.to_i64_round().map(|m| (-m) as u64)
        } else {
            None
        }
    }

    /// `Some(k)` when the value lies within `10^-(P-5)` of the integer `k`.
    pub fn near_integer(&self, prec: Precision) -> Option<i64> {
        let r = self.round();
        let dist = (self - &r).abs();
        if dist <= prec.snap_tolerance() {
            r.to_i64_round()
        } else {
            None
        }
    }

    pub fn powi(&self, k: i64) -> Self {
        let base = if k < 0 {
            Self::wrap(BigFloat::from_i64(1, self.p).div(&self.v, self.p, RM), self.p)
        } else {
            self.clone()
        };
        Self::wrap(base.v.powi(k.unsigned_abs() as usize, self.p, RM), self.p)
    }

    pub fn exp(&self) -> Result<Self, RealError> {
        let p = self.p;
        Self::wrap(with_consts(|cc| self.v.exp(p, RM, cc)), p).check("exp")
    }

    pub fn ln(&self) -> Result<Self, RealError> {
        if !self.is_positive() {
            return Err(RealError::Domain(format!("ln at {}", self.to_decimal_string(20))));
        }
        let p = self.p;
        Self::wrap(with_consts(|cc| self.v.ln(p, RM, cc)), p).check("ln")
    }

    pub fn sqrt(&self) -> Result<Self, RealError> {
        if !self.is_positive() {
            return Err(RealError::Domain(format!("sqrt at {}", self.to_decimal_string(20))));
        }
        Self::wrap(self.v.sqrt(self.p, RM), self.p).check("sqrt")
    }

    pub fn sin(&self) -> Result<Self, RealError> {
        let p = self.p;
        Self::wrap(with_consts(|cc| self.v.sin(p, RM, cc)), p).check("sin")
    }

    pub fn cos(&self) -> Result<Self, RealError> {
        let p = self.p;
        Self::wrap(with_consts(|cc| self.v.cos(p, RM, cc)), p).check("cos")
    }

    /// `self^r` for `self > 0`.
    pub fn pow(&self, r: &HighReal) -> Result<Self, RealError> {
        if !self.is_positive() {
            return Err(RealError::Domain(format!("pow base {}", self.to_decimal_string(20))));
        }
        (&self.ln()? * r).exp()
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Exactly `digits` significant decimal digits as `d.ddd…e±X`.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let digits = digits.max(1) as usize;
        if self.v.is_nan() {
            return "NaN".into();
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { "-inf".into() } else { "inf".into() };
        }
        if self.v.is_zero() {
            return format!("0.{}e+0", "0".repeat(digits - 1));
        }
        let (sign, mut ds, e) = with_consts(|cc| self.v.convert_to_radix(Radix::Dec, RM, cc))
            .expect("finite value converts");
        // value = 0.d1 d2 ... × 10^e
        while ds.first() == Some(&0) {
            ds.remove(0);
        }
        let mut exp10 = e as i64 - 1;
        let mut kept: Vec<u8> = ds.iter().copied().take(digits).collect();
        kept.resize(digits, 0);
        if ds.len() > digits && ds[digits] >= 5 {
            let mut i = digits;
            loop {
                if i == 0 {
                    kept.insert(0, 1);
                    kept.truncate(digits);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if kept[i] == 9 {
                    kept[i] = 0;
                } else {
                    kept[i] += 1;
                    break;
                }
            }
        }
        let mut out = String::new();
        if sign == Sign::Neg {
            out.push('-');
        }
        out.push((b'0' + kept[0]) as char);
        if digits > 1 {
            out.push('.');
            out.extend(kept[1..].iter().map(|d| (b'0' + d) as char));
        }
        out.push('e');
        out.push(if exp10 < 0 { '-' } else { '+' });
        out.push_str(&exp10.abs().to_string());
        out
    }

    /// Lossy conversion for diagnostics and tests.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal_string(20).parse().unwrap_or(f64::NAN)
    }
}

impl PartialEq for HighReal {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for HighReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for &HighReal {
            type Output = HighReal;
            fn $m(self, rhs: Self) -> HighReal {
                let p = self.p.max(rhs.p);
                HighReal::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr for HighReal {
            type Output = HighReal;
            fn $m(self, rhs: Self) -> HighReal {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &HighReal {
    type Output = HighReal;
    fn neg(self) -> HighReal {
        HighReal::wrap(self.v.clone().neg(), self.p)
    }
}

impl Neg for HighReal {
    type Output = HighReal;
    fn neg(self) -> HighReal {
        -&self
    }
}

/// `|l − r| / max(|l|, |r|, 10^-P)`.
pub fn rel_error(l: &HighReal, r: &HighReal, prec: Precision) -> HighReal {
    let floor = HighReal::pow10(-(prec.digits() as i64), prec);
    let denom = l.abs().max(r.abs()).max(floor);
    &(l - r).abs() / &denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn p40() -> Precision {
        Precision::new(40).unwrap()
    }

    fn close(a: &HighReal, expect: &str, digits: i64) {
        let prec = p40();
        let e = HighReal::from_rational(&crate::exactnum::parse_rational(expect).unwrap(), prec);
        let err = rel_error(a, &e, prec);
        assert!(err <= HighReal::pow10(-digits, prec), "{a:?} vs {expect}");
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(29).is_err());
        assert_eq!(Precision::default().digits(), 40);
    }

    #[test]
    fn decimal_rendering() {
        let p = p40();
        let third = HighReal::from_rational(&rat(1, 3), p);
        assert_eq!(third.to_decimal_string(5), "3.3333e-1");
        assert_eq!(HighReal::from_i64(-24, p).to_decimal_string(3), "-2.40e+1");
        assert_eq!(HighReal::from_rational(&rat(99999, 100000), p).to_decimal_string(3), "1.00e+0");
        assert_eq!(HighReal::zero(p).to_decimal_string(3), "0.00e+0");
        assert_eq!(third.to_decimal_string(40).len(), "3.".len() + 39 + "e-1".len());
    }

    #[test]
    fn elementary_examples() {
        let p = p40();
        close(&HighReal::one(p).exp().unwrap(), "2.718281828459045235360287471352662497757", 38);
        let four = HighReal::from_i64(4, p);
        close(&four.pow(&HighReal::from_rational(&rat(1, 2), p)).unwrap(), "2", 38);
        close(&HighReal::from_i64(2, p).sin().unwrap(), "0.9092974268256816953960198659117448427023", 38);
        assert!(HighReal::zero(p).sqrt().is_err());
        assert!(HighReal::from_i64(-1, p).pow(&four).is_err());
    }

    #[test]
    fn sin_matches_taylor_oracle() {
        // sum of (-1)^k 2^(2k+1)/(2k+1)! in exact arithmetic
        let p = p40();
        let mut acc = Rational::zero();
        let mut term = rat(2, 1);
        for k in 0..40i64 {
            acc += &term;
            term = -term * rat(4, 1) / rat((2 * k + 2) * (2 * k + 3), 1);
        }
        let oracle = HighReal::from_rational(&acc, p);
        let s = HighReal::from_i64(2, p).sin().unwrap();
        assert!(rel_error(&s, &oracle, p) <= HighReal::pow10(-38, p));
    }

    #[test]
    fn integer_snapping() {
        let p = p40();
        assert_eq!(HighReal::from_i64(-3, p).near_nonpositive_integer(p), Some(3));
        assert_eq!(HighReal::from_i64(2, p).near_nonpositive_integer(p), None);
        assert_eq!(HighReal::from_rational(&rat(-5, 2), p).near_nonpositive_integer(p), None);
        assert_eq!(HighReal::from_rational(&rat(-7, 1), p).near_integer(p), Some(-7));
        assert_eq!(HighReal::from_i64(123456789, p).to_i64_round(), Some(123456789));
    }
}

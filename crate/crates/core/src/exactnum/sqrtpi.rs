use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{
    factorial, format_rational, is_half_odd_integer, nonpositive_integer, rat, rat_pochhammer,
    ExactError, Rational,
};

/// The number `rat · (√π)^sqrtpi_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtPiNumber {
    rat: Rational,
    sqrtpi_power: i32,
}

impl SqrtPiNumber {
    pub fn new(rat: Rational, sqrtpi_power: i32) -> Self {
        let sqrtpi_power = if rat.is_zero() { 0 } else { sqrtpi_power };
        SqrtPiNumber { rat, sqrtpi_power }
    }

    pub fn rational(rat: Rational) -> Self {
        SqrtPiNumber { rat, sqrtpi_power: 0 }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn sqrtpi_power(&self) -> i32 {
        self.sqrtpi_power
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    /// The plain rational value, if no factor of √π remains.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.sqrtpi_power == 0).then_some(&self.rat)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.rat * &other.rat, self.sqrtpi_power + other.sqrtpi_power)
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::new(&self.rat / &other.rat, self.sqrtpi_power - other.sqrtpi_power))
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.sqrtpi_power != other.sqrtpi_power {
            return Err(ExactError::InhomogeneousSqrtPi(self.sqrtpi_power, other.sqrtpi_power));
        }
        Ok(Self::new(&self.rat + &other.rat, self.sqrtpi_power))
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.rat, self.sqrtpi_power)
    }

    pub fn powi(&self, k: i64) -> Result<Self, ExactError> {
        if k < 0 {
            return Self::one().div(&self.powi(-k)?);
        }
        let k32 = i32::try_from(k).map_err(|_| ExactError::DivisionByZero)?;
        Ok(Self::new(num_traits::pow(self.rat.clone(), k as usize), self.sqrtpi_power * k32))
    }
}

impl std::fmt::Display for SqrtPiNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sqrtpi_power {
            0 => write!(f, "{}", format_rational(&self.rat)),
            k => write!(f, "{}*sqrt(pi)^{}", format_rational(&self.rat), k),
        }
    }
}

/// Γ at a positive integer or any half-odd-integer, as `q·(√π)^k`.
fn gamma_single(x: &Rational) -> Result<SqrtPiNumber, ExactError> {
    if x.is_integer() {
        let n = x.to_integer().to_usize().expect("positive integer argument");
        return Ok(SqrtPiNumber::rational(Rational::from_integer(factorial(n - 1))));
    }
    if !is_half_odd_integer(x) {
        return Err(ExactError::NonHalfInteger(format_rational(x)));
    }
    let half = rat(1, 2);
    // Γ(1/2 + k) = √π·(1/2)_k;  Γ(1/2 − m) = √π / (1/2 − m)_m
    let k = (x - &half).to_integer();
    let value = if !k.is_negative() {
        rat_pochhammer(&half, k.to_usize().expect("small shift"))
    } else {
        let m = (-k).to_usize().expect("small shift");
        Rational::one() / rat_pochhammer(x, m)
    };
    Ok(SqrtPiNumber::new(value, 1))
}

/// `∏Γ(numer) / ∏Γ(denom)` evaluated exactly in `Q·(√π)^k`.
///
/// A denominator pole gives exactly zero. A numerator argument and a
/// denominator argument that differ by an integer are cancelled into a
/// Pochhammer ratio before the remaining arguments are required to be
/// integers or half-odd-integers.
pub fn gamma_ratio_exact(
    numer_args: &[Rational],
    denom_args: &[Rational],
) -> Result<SqrtPiNumber, ExactError> {
    if let Some(p) = numer_args.iter().find(|a| nonpositive_integer(a).is_some()) {
        return Err(ExactError::NumeratorPole(format_rational(p)));
    }
    if denom_args.iter().any(|a| nonpositive_integer(a).is_some()) {
        return Ok(SqrtPiNumber::zero());
    }

    let mut acc = Rational::one();
    let mut denom_left: Vec<Option<&Rational>> = denom_args.iter().map(Some).collect();
    let mut numer_left = Vec::new();
    for x in numer_args {
        let partner = denom_left
            .iter()
            .position(|y| matches!(y, Some(y) if (x - *y).is_integer()));
        match partner {
            Some(i) => {
                let y = denom_left[i].take().expect("unused partner");
                let shift = (x - y).to_integer();
                if !shift.is_negative() {
                    acc *= rat_pochhammer(y, shift.to_usize().expect("small shift"));
                } else {
                    acc /= rat_pochhammer(x, (-shift).to_usize().expect("small shift"));
                }
            }
            None => numer_left.push(x),
        }
    }

    let mut out = SqrtPiNumber::rational(acc);
    for x in numer_left {
        out = out.mul(&gamma_single(x)?);
    }
    for y in denom_left.into_iter().flatten() {
        out = out.div(&gamma_single(y)?)?;
    }
    Ok(out)
}

use num_traits::One;

use super::numeric::pfq_numeric;
use super::{pfq_exact_scalar, pfq_series_exact, HypSpec, HyperError, DEFAULT_MAX_TERMS};
use crate::exactnum::{factorial, rat_pochhammer, Rational, TruncatedSeries};
use crate::realnum::{recip_gamma, HighReal, Precision, RealError};

fn laguerre_prefactor(n: usize, v: &Rational) -> Rational {
    rat_pochhammer(&(v + Rational::one()), n) / Rational::from_integer(factorial(n))
}

fn laguerre_spec(n: usize, v: &Rational) -> HypSpec<Rational> {
    HypSpec::new(vec![-Rational::from_integer(n.into())], vec![v + Rational::one()])
}

/// `L_n^{(v)}(x) = ((v+1)_n/n!)·₁F₁[−n; v+1; x]` at a rational point.
pub fn laguerre_exact(n: usize, v: &Rational, x: &Rational) -> Result<Rational, HyperError> {
    let f = pfq_exact_scalar(&laguerre_spec(n, v), x)?;
    Ok(laguerre_prefactor(n, v) * f)
}

/// `L_n^{(v)}(scale·x)` as a polynomial in `x`, truncated at `order`.
pub fn laguerre_series(
    n: usize,
    v: &Rational,
    scale: &Rational,
    order: usize,
) -> Result<TruncatedSeries, HyperError> {
    let f = pfq_series_exact(&laguerre_spec(n, v), scale, 1, order)?;
    Ok(f.scale(&laguerre_prefactor(n, v)))
}

pub fn laguerre_numeric(
    n: usize,
    v: &HighReal,
    x: &HighReal,
    prec: Precision,
) -> Result<HighReal, HyperError> {
    let b = v + &HighReal::one(prec);
    let spec = HypSpec::new(vec![HighReal::from_i64(-(n as i64), prec)], vec![b.clone()]);
    let (f, _) = pfq_numeric(&spec, x, prec, n + 4)?;
    let mut pre = HighReal::one(prec);
    for k in 0..n {
        pre = &(&pre * &(&b + &HighReal::from_i64(k as i64, prec))) / &HighReal::from_i64(k as i64 + 1, prec);
    }
    Ok(&pre * &f)
}

/// Bessel function of the first kind through
/// `J_ν(z) = (z/2)^ν/Γ(ν+1)·₀F₁[; ν+1; −z²/4]`.
pub fn bessel_j(order: &HighReal, z: &HighReal, prec: Precision) -> Result<HighReal, HyperError> {
    let integer_order = order.near_integer(prec);
    if matches!(integer_order, Some(k) if k < 0) {
        return Err(RealError::Pole(format!("negative integer Bessel order {}", integer_order.unwrap())).into());
    }
    if z.is_zero() {
        if order.is_zero() || integer_order == Some(0) {
            return Ok(HighReal::one(prec));
        }
        if order.is_positive() {
            return Ok(HighReal::zero(prec));
        }
        return Err(RealError::Domain("J at z = 0 needs order >= 0".into()).into());
    }
    if z.is_negative() {
        return match integer_order {
            Some(k) => {
                let v = bessel_j(order, &-z, prec)?;
                Ok(if k % 2 == 0 { v } else { -v })
            }
            None => Err(RealError::Domain("J at z < 0 needs integer order".into()).into()),
        };
    }
    let b = order + &HighReal::one(prec);
    let arg = -&(&(z * z) / &HighReal::from_i64(4, prec));
    let (f, _) = pfq_numeric(&HypSpec::new(vec![], vec![b.clone()]), &arg, prec, DEFAULT_MAX_TERMS)?;
    let half = z / &HighReal::from_i64(2, prec);
    let lead = match integer_order {
        Some(k) => half.powi(k),
        None => half.pow(order)?,
    };
    Ok(&(&lead * &recip_gamma(&b, prec)?) * &f)
}

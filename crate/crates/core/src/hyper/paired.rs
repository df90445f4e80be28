//! The paired-parameter function `₂F₂[α, g+1; β, g; z]`, whose term ratio
//! `(g+1)_m/(g)_m` collapses to `(g+m)/g`.
//!
//! It arises from the Kummer-type transformation
//! `e^{-x}₂F₂[A, D+1; B+1, D; x] = ₂F₂[B−A, g+1; B+1, g; −x]`, with
//! `g = D(A−B)/(A−D)`. At `A = B` both `α` and `g` vanish and the printed
//! right side is `0/0`; the two conventions below say what to put there.

use num_traits::{One, Zero};

use super::numeric::{classify, direct_sum};
use super::{pfq_series_exact, HypSpec, HyperError};
use crate::exactnum::{Rational, TruncatedSeries};
use crate::realnum::{HighReal, Precision};

/// How to read the removable `α = g = 0` case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convention {
    /// The upper parameter 0 terminates the series: the function is 1.
    Naive,
    /// The `A → B` limit of the transformed side.
    Limit,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Naive => "naive",
            Convention::Limit => "limit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "naive" => Some(Convention::Naive),
            "limit" => Some(Convention::Limit),
            _ => None,
        }
    }
}

/// Which inner function of the expansion theorems: `g` pairs with `e`,
/// `g'` with `e+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    G,
    GPrime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitData {
    pub e: Rational,
    pub v: Rational,
    pub tier: Tier,
}

impl LimitData {
    /// `(v+1−e)/e'` with `e' = e` or `e+1`.
    pub fn kappa(&self) -> Result<Rational, HyperError> {
        let ep = match self.tier {
            Tier::G => self.e.clone(),
            Tier::GPrime => &self.e + Rational::one(),
        };
        if ep.is_zero() {
            return Err(HyperError::SingularDenominator);
        }
        Ok((&self.v + Rational::one() - &self.e) / ep)
    }
}

/// Parameters of the transformed side for `e^{-x}₂F₂[A, D+1; B+1, D; x]`
/// scaled by `mult`: `g = mult(A−B)/(A−D)`, `α = B−A` and the limit
/// coefficient `κ = (B−D)/mult`.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerPair<T> {
    pub alpha: T,
    pub g: T,
    pub kappa: T,
}

pub fn kummer_pair(
    a: &Rational,
    b: &Rational,
    d: &Rational,
    mult: &Rational,
) -> Result<KummerPair<Rational>, HyperError> {
    if mult.is_zero() {
        return Err(HyperError::SingularDenominator);
    }
    // A = B is the removable case even when D coincides as well
    if a == b {
        return Ok(KummerPair { alpha: Rational::zero(), g: Rational::zero(), kappa: (b - d) / mult });
    }
    if a == d {
        return Err(HyperError::SingularDenominator);
    }
    Ok(KummerPair {
        alpha: b - a,
        g: mult * (a - b) / (a - d),
        kappa: (b - d) / mult,
    })
}

pub fn kummer_pair_real(
    a: &HighReal,
    b: &HighReal,
    d: &HighReal,
    mult: &HighReal,
    prec: Precision,
) -> Result<KummerPair<HighReal>, HyperError> {
    let tol = prec.snap_tolerance();
    if mult.abs() <= tol {
        return Err(HyperError::SingularDenominator);
    }
    let ab = a - b;
    if ab.abs() <= tol {
        let zero = HighReal::zero(prec);
        return Ok(KummerPair { alpha: zero.clone(), g: zero, kappa: &(b - d) / mult });
    }
    let ad = a - d;
    if ad.abs() <= tol {
        return Err(HyperError::SingularDenominator);
    }
    Ok(KummerPair { alpha: -&ab, g: &(mult * &ab) / &ad, kappa: &(b - d) / mult })
}

/// Exact series through order `n` of `₂F₂[α, g+1; β, g; scale·x]`.
///
/// `kappa` is only consulted in the removable case under [`Convention::Limit`].
pub fn paired_2f2_series(
    alpha: &Rational,
    g: &Rational,
    beta: &Rational,
    scale: &Rational,
    convention: Convention,
    kappa: Option<&Rational>,
    n: usize,
) -> Result<TruncatedSeries, HyperError> {
    if g.is_zero() {
        if !alpha.is_zero() {
            return Err(HyperError::SingularG);
        }
        return match convention {
            Convention::Naive => Ok(TruncatedSeries::one(n)),
            Convention::Limit => {
                let kappa = kappa.ok_or(HyperError::MissingLimitData)?;
                let spec = HypSpec::new(vec![Rational::one()], vec![beta.clone()]);
                let mut f = pfq_series_exact(&spec, scale, 1, n)?;
                *f.coeff_mut(0) = Rational::zero();
                let mut out = f.scale(&-kappa);
                *out.coeff_mut(0) += Rational::one();
                Ok(out)
            }
        };
    }
    let spec = HypSpec::new(vec![alpha.clone()], vec![beta.clone()]);
    let mut out = pfq_series_exact(&spec, scale, 1, n)?;
    for m in 1..=n {
        let w = (g + Rational::from_integer(m.into())) / g;
        let c = out.coeff_mut(m);
        *c = &*c * w;
    }
    Ok(out)
}

/// Numeric value of `₂F₂[α, g+1; β, g; z]`. The removable case is detected
/// when both `α` and `g` are within the snapping tolerance of zero.
#[allow(clippy::too_many_arguments)]
pub fn paired_2f2_numeric(
    alpha: &HighReal,
    g: &HighReal,
    beta: &HighReal,
    z: &HighReal,
    convention: Convention,
    kappa: Option<&HighReal>,
    prec: Precision,
    max_terms: usize,
) -> Result<HighReal, HyperError> {
    let tol = prec.snap_tolerance();
    if g.abs() <= tol {
        if alpha.abs() > tol {
            return Err(HyperError::SingularG);
        }
        return match convention {
            Convention::Naive => Ok(HighReal::one(prec)),
            Convention::Limit => {
                let kappa = kappa.ok_or(HyperError::MissingLimitData)?;
                let spec = HypSpec::new(vec![HighReal::one(prec)], vec![beta.clone()]);
                let class = classify(&spec, z, prec);
                let (f, _) = direct_sum(&spec, z, prec, max_terms, None, class)?;
                Ok(&HighReal::one(prec) - &(kappa * &(&f - &HighReal::one(prec))))
            }
        };
    }
    let spec = HypSpec::new(vec![alpha.clone()], vec![beta.clone()]);
    let class = classify(&spec, z, prec);
    let weight = |m: usize| {
        if m == 0 {
            HighReal::one(prec)
        } else {
            &(g + &HighReal::from_i64(m as i64, prec)) / g
        }
    };
    let (v, _) = direct_sum(&spec, z, prec, max_terms, Some(&weight), class)?;
    Ok(v)
}

/// Evaluation point for [`paired_2f2`].
#[derive(Debug, Clone)]
pub enum PairedMode {
    /// Formal series through this order.
    Series(usize),
    /// Numeric value at `x`.
    Numeric(HighReal, Precision),
}

#[derive(Debug, Clone)]
pub enum PairedValue {
    Series(TruncatedSeries),
    Numeric(HighReal),
}

/// The theorem inner function `₂F₂[−n, g+1; β, g; x]`.
///
/// With `limit_data` the removable `n = 0, g = 0` case follows
/// [`Convention::Limit`]; without it the naive reading is used.
pub fn paired_2f2(
    n: usize,
    g: &Rational,
    beta: &Rational,
    mode: PairedMode,
    limit_data: Option<&LimitData>,
) -> Result<PairedValue, HyperError> {
    let alpha = -Rational::from_integer(n.into());
    let convention = if limit_data.is_some() { Convention::Limit } else { Convention::Naive };
    let kappa = limit_data.map(LimitData::kappa).transpose()?;
    match mode {
        PairedMode::Series(order) => {
            paired_2f2_series(&alpha, g, beta, &Rational::one(), convention, kappa.as_ref(), order)
                .map(PairedValue::Series)
        }
        PairedMode::Numeric(x, prec) => {
            let hr = |q: &Rational| HighReal::from_rational(q, prec);
            let kappa = kappa.as_ref().map(hr);
            paired_2f2_numeric(
                &hr(&alpha),
                &hr(g),
                &hr(beta),
                &x,
                convention,
                kappa.as_ref(),
                prec,
                super::DEFAULT_MAX_TERMS,
            )
            .map(PairedValue::Numeric)
        }
    }
}

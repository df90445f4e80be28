//! Generalized hypergeometric series in exact and numeric form, plus the
//! special functions built from them.

mod numeric;
mod ode;
mod paired;
mod special;

pub use numeric::{pfq_numeric, DEFAULT_MAX_TERMS};
pub use ode::{ode_residual, OdeResidual};
pub use paired::{
    kummer_pair, kummer_pair_real, paired_2f2, paired_2f2_numeric, paired_2f2_series, Convention, KummerPair,
    LimitData, PairedMode, PairedValue, Tier,
};
pub use special::{bessel_j, laguerre_exact, laguerre_numeric, laguerre_series};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{format_rational, nonpositive_integer, ExactError, Rational, TruncatedSeries};
use crate::realnum::{HighReal, RealError};

/// Upper parameters `a_1..a_p` and lower parameters `b_1..b_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypSpec<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
}

impl<T> HypSpec<T> {
    pub fn new(upper: Vec<T>, lower: Vec<T>) -> Self {
        HypSpec { upper, lower }
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceClass {
    AlwaysConverges,
    UnitDisk,
    BoundaryConditional,
    Divergent,
    Terminating,
}

#[derive(Debug, Clone)]
pub struct EvalDiagnostics {
    pub terms_used: usize,
    pub est_rel_error: HighReal,
    pub classification: ConvergenceClass,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperError {
    #[error("series diverges (p > q+1 or |z| > 1)")]
    Divergent,
    #[error("boundary convergence condition fails: {0}")]
    BoundaryViolation(String),
    #[error("no convergence within {0} terms")]
    NoConvergence(usize),
    #[error("lower parameter {0} hits a pole before the series terminates")]
    LowerPole(String),
    #[error("paired parameter g vanishes at n >= 1")]
    SingularG,
    #[error("zero denominator in derived parameter")]
    SingularDenominator,
    #[error("removable case needs limit data")]
    MissingLimitData,
    #[error("scalar argument needs a terminating series in exact mode")]
    NonTerminating,
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl HyperError {
    pub fn name(&self) -> &'static str {
        match self {
            HyperError::Divergent => "Divergent",
            HyperError::BoundaryViolation(_) => "BoundaryViolation",
            HyperError::NoConvergence(_) => "NoConvergence",
            HyperError::LowerPole(_) => "LowerPole",
            HyperError::SingularG => "SingularG",
            HyperError::SingularDenominator => "SingularDenominator",
            HyperError::MissingLimitData => "MissingLimitData",
            HyperError::NonTerminating => "NonTerminating",
            HyperError::Real(e) => e.name(),
            HyperError::Exact(e) => e.name(),
        }
    }
}

/// Outcome of advancing the term index from `m` to `m+1`.
pub(crate) enum Step<T> {
    Terminate,
    Ratio(T),
}

/// `∏(a+m) / (∏(b+m)·(m+1))`, applying the terminating-before-pole rule.
pub(crate) fn exact_step(spec: &HypSpec<Rational>, m: usize) -> Result<Step<Rational>, HyperError> {
    let mm = Rational::from_integer(m.into());
    let mut num = Rational::one();
    for a in &spec.upper {
        let f = a + &mm;
        if f.is_zero() {
            return Ok(Step::Terminate);
        }
        num *= f;
    }
    let mut den = Rational::from_integer((m + 1).into());
    for b in &spec.lower {
        let f = b + &mm;
        if f.is_zero() {
            return Err(HyperError::LowerPole(format_rational(b)));
        }
        den *= f;
    }
    Ok(Step::Ratio(num / den))
}

/// Formal series of `pFq(scale·x^power)` through order `n`.
pub fn pfq_series_exact(
    spec: &HypSpec<Rational>,
    scale: &Rational,
    power: usize,
    n: usize,
) -> Result<TruncatedSeries, HyperError> {
    assert!(power >= 1, "argument must be scale·x^k with k >= 1");
    let mut out = TruncatedSeries::zero(n);
    *out.coeff_mut(0) = Rational::one();
    if scale.is_zero() {
        return Ok(out);
    }
    let mut term = Rational::one();
    let mut m = 0usize;
    while power * (m + 1) <= n {
        match exact_step(spec, m)? {
            Step::Terminate => break,
            Step::Ratio(r) => term = term * r * scale,
        }
        m += 1;
        *out.coeff_mut(power * m) = term.clone();
    }
    Ok(out)
}

/// Index of the last nonzero term when some upper parameter is `-m`.
pub fn terminating_degree(spec: &HypSpec<Rational>) -> Option<u64> {
    spec.upper.iter().filter_map(nonpositive_integer).min()
}

/// Exact value of a terminating series at a rational point.
pub fn pfq_exact_scalar(spec: &HypSpec<Rational>, z: &Rational) -> Result<Rational, HyperError> {
    let mut sum = Rational::one();
    if z.is_zero() {
        return Ok(sum);
    }
    let degree = terminating_degree(spec).ok_or(HyperError::NonTerminating)?;
    let mut term = Rational::one();
    for m in 0..degree as usize {
        match exact_step(spec, m)? {
            Step::Terminate => break,
            Step::Ratio(r) => term = term * r * z,
        }
        sum += &term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int, rat_pochhammer, factorial};
    use proptest::prelude::*;

    fn spec(u: &[Rational], l: &[Rational]) -> HypSpec<Rational> {
        HypSpec::new(u.to_vec(), l.to_vec())
    }

    fn ser(v: Vec<Rational>) -> TruncatedSeries {
        TruncatedSeries::new(v)
    }

    #[test]
    fn series_examples() {
        let s = spec(&[rat(1, 3)], &[rat(2, 5)]);
        assert_eq!(pfq_series_exact(&s, &rat_int(0), 1, 4).unwrap(), TruncatedSeries::one(4));
        let s = spec(&[rat_int(1)], &[rat_int(2)]);
        assert_eq!(
            pfq_series_exact(&s, &rat_int(1), 1, 2).unwrap(),
            ser(vec![rat_int(1), rat(1, 2), rat(1, 6)])
        );
        let s = spec(&[rat_int(1), rat_int(4)], &[rat_int(2), rat_int(3)]);
        assert_eq!(pfq_series_exact(&s, &rat_int(1), 1, 1).unwrap(), ser(vec![rat_int(1), rat(2, 3)]));
        let s = spec(&[], &[rat_int(3)]);
        assert_eq!(
            pfq_series_exact(&s, &rat_int(-1), 2, 4).unwrap(),
            ser(vec![rat_int(1), rat_int(0), rat(-1, 3), rat_int(0), rat(1, 24)])
        );
    }

    #[test]
    fn pole_rule() {
        // lower -2 with upper -1: terminates first
        let s = spec(&[rat_int(-1)], &[rat_int(-2)]);
        assert!(pfq_series_exact(&s, &rat_int(1), 1, 6).is_ok());
        // equal magnitude still terminates first
        let s = spec(&[rat_int(-2)], &[rat_int(-2)]);
        assert!(pfq_series_exact(&s, &rat_int(1), 1, 6).is_ok());
        let s = spec(&[rat_int(-3)], &[rat_int(-1)]);
        assert!(matches!(pfq_series_exact(&s, &rat_int(1), 1, 6), Err(HyperError::LowerPole(_))));
        // the pole lies beyond the requested order
        assert!(pfq_series_exact(&s, &rat_int(1), 1, 1).is_ok());
    }

    #[test]
    fn terminating_scalar() {
        // 2F1[-2, 1; 1; 1] = (1-1)^2 = 0
        let s = spec(&[rat_int(-2), rat_int(1)], &[rat_int(1)]);
        assert_eq!(pfq_exact_scalar(&s, &rat_int(1)).unwrap(), rat_int(0));
        let s = spec(&[rat_int(1)], &[rat_int(2)]);
        assert_eq!(pfq_exact_scalar(&s, &rat_int(1)), Err(HyperError::NonTerminating));
    }

    fn rat_strategy() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..7).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn coefficient_formula(
            up in proptest::collection::vec(rat_strategy(), 0..3),
            lo in proptest::collection::vec((1i64..30, 1i64..7).prop_map(|(p, q)| rat(p, q)), 0..3),
            scale in rat_strategy(),
            power in 1usize..3,
        ) {
            let s = spec(&up, &lo);
            let n = 12;
            let got = pfq_series_exact(&s, &scale, power, n).unwrap();
            for k in 0..=n {
                let expect = if k % power == 0 {
                    let m = k / power;
                    let mut c = num_traits::pow(scale.clone(), m) / Rational::from_integer(factorial(m));
                    for a in &up { c *= rat_pochhammer(a, m); }
                    for b in &lo { c /= rat_pochhammer(b, m); }
                    c
                } else {
                    rat_int(0)
                };
                prop_assert_eq!(got.coeff(k), expect);
            }
        }

        #[test]
        fn terminating_degree_bound(m in 0i64..8, b in (1i64..20, 1i64..5).prop_map(|(p, q)| rat(p, q))) {
            let s = spec(&[rat_int(-m), rat(3, 7)], &[b]);
            for power in 1..=2usize {
                let got = pfq_series_exact(&s, &rat_int(1), power, 30).unwrap();
                for k in (power * m as usize + 1)..=30 {
                    prop_assert!(got.coeff(k).is_zero());
                }
            }
        }
    }
}

use num_traits::{One, Zero};

use super::{pfq_series_exact, HypSpec, HyperError};
use crate::exactnum::{Rational, TruncatedSeries};

/// Residual of `θ∏(θ+b_j−1)w − z∏(θ+a_i)w` on the truncated series `w`.
///
/// `interior` holds the coefficients of `z^0..z^N`; `edge` is the
/// coefficient of `z^{N+1}`, which only the truncation produces.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeResidual {
    pub interior: TruncatedSeries,
    pub edge: Rational,
}

fn theta_product(params: &[Rational], n: usize, shift: i64) -> Rational {
    let k = Rational::from_integer((n as i64 + shift).into());
    params.iter().fold(Rational::one(), |acc, p| acc * (&k + p))
}

pub fn ode_residual(spec: &HypSpec<Rational>, n: usize) -> Result<OdeResidual, HyperError> {
    let c = pfq_series_exact(spec, &Rational::one(), 1, n)?;
    let mut r = TruncatedSeries::zero(n);
    for k in 0..=n {
        let mut v = c.coeff(k) * Rational::from_integer(k.into()) * theta_product(&spec.lower, k, -1);
        if k >= 1 {
            v -= c.coeff(k - 1) * theta_product(&spec.upper, k - 1, 0);
        }
        *r.coeff_mut(k) = v;
    }
    let edge = -(c.coeff(n) * theta_product(&spec.upper, n, 0));
    Ok(OdeResidual { interior: r, edge })
}

impl OdeResidual {
    pub fn is_zero(&self) -> bool {
        self.interior.is_zero() && self.edge.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = HypSpec::new(vec![rat_int(-2)], vec![rat_int(1)]);
        assert!(ode_residual(&s, 6).unwrap().is_zero());
        let s = HypSpec::new(vec![rat_int(-1), rat_int(5)], vec![rat_int(2)]);
        assert!(ode_residual(&s, 6).unwrap().is_zero());
        let s = HypSpec::new(vec![], vec![rat_int(3)]);
        let r = ode_residual(&s, 10).unwrap();
        assert!(r.interior.is_zero());
        assert!(!r.edge.is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(25))]

        #[test]
        fn terminating_specs_solve_the_equation(
            m in 0i64..10,
            up in proptest::collection::vec((-20i64..20, 1i64..6).prop_map(|(p, q)| rat(p, q)), 0..3),
            lo in proptest::collection::vec((1i64..20, 1i64..6).prop_map(|(p, q)| rat(p, q)), 0..4),
        ) {
            let mut upper = vec![rat_int(-m)];
            upper.extend(up);
            let s = HypSpec::new(upper, lo);
            let r = ode_residual(&s, m as usize + 3).unwrap();
            prop_assert!(r.is_zero());
        }
    }
}

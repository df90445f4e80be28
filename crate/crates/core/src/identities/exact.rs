use num_traits::{One, ToPrimitive, Zero};

use super::expr::Expr;
use super::{EvalCtx, ExprError};
use crate::exactnum::{
    gamma_ratio_exact, rat_pochhammer, series_mul, Rational, SqrtPiNumber, TruncatedSeries,
};
use crate::hyper::{
    kummer_pair, laguerre_exact, laguerre_series, paired_2f2_series, pfq_exact_scalar, pfq_series_exact,
    HypSpec,
};

/// Exact value of a subexpression: a constant in `Q·(√π)^k` or a truncated
/// series times `(√π)^k`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactValue {
    Scalar(SqrtPiNumber),
    Series(TruncatedSeries, i32),
}

impl ExactValue {
    fn rational(q: Rational) -> Self {
        ExactValue::Scalar(SqrtPiNumber::rational(q))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactValue::Scalar(s) => s.is_zero(),
            ExactValue::Series(s, _) => s.is_zero(),
        }
    }

    /// Series through `order`, with its `√π` power.
    pub fn into_series(self, order: usize) -> (TruncatedSeries, i32) {
        match self {
            ExactValue::Scalar(s) => (TruncatedSeries::constant(s.rat().clone(), order), s.sqrtpi_power()),
            ExactValue::Series(s, k) => (s, k),
        }
    }

    fn scalar_rational(&self, what: &'static str) -> Result<Rational, ExprError> {
        match self {
            ExactValue::Scalar(s) if s.is_zero() => Ok(Rational::zero()),
            ExactValue::Scalar(s) => s.as_rational().cloned().ok_or(ExprError::NotRational(what)),
            ExactValue::Series(..) => Err(ExprError::NonScalar(what)),
        }
    }
}

fn add(a: ExactValue, b: ExactValue, order: usize) -> Result<ExactValue, ExprError> {
    use ExactValue::*;
    match (a, b) {
        (Scalar(x), Scalar(y)) => Ok(Scalar(x.add(&y)?)),
        (a, b) => {
            if a.is_zero() {
                return Ok(b);
            }
            if b.is_zero() {
                return Ok(a);
            }
            let (s, k) = a.into_series(order);
            let (t, j) = b.into_series(order);
            if k != j {
                return Err(crate::exactnum::ExactError::InhomogeneousSqrtPi(k, j).into());
            }
            Ok(Series(&s + &t, k))
        }
    }
}

fn mul(a: ExactValue, b: ExactValue) -> ExactValue {
    use ExactValue::*;
    match (a, b) {
        (Scalar(x), Scalar(y)) => Scalar(x.mul(&y)),
        (Scalar(x), Series(s, k)) | (Series(s, k), Scalar(x)) => Series(s.scale(x.rat()), k + x.sqrtpi_power()),
        (Series(s, k), Series(t, j)) => Series(series_mul(&s, &t), k + j),
    }
}

fn neg(a: ExactValue) -> ExactValue {
    match a {
        ExactValue::Scalar(x) => ExactValue::Scalar(x.neg()),
        ExactValue::Series(s, k) => ExactValue::Series(-&s, k),
    }
}

fn integer(v: &ExactValue, what: &'static str) -> Result<i64, ExprError> {
    let q = v.scalar_rational(what)?;
    if !q.is_integer() {
        return Err(ExprError::NonIntegerExponent(what));
    }
    q.to_integer().to_i64().ok_or(ExprError::NonIntegerExponent(what))
}

fn natural(v: &ExactValue, what: &'static str) -> Result<usize, ExprError> {
    let k = integer(v, what)?;
    usize::try_from(k).map_err(|_| ExprError::NegativeIndex(what))
}

/// `(c, j)` when the series is the single monomial `c·x^j`.
fn as_monomial(s: &TruncatedSeries) -> Option<(Rational, usize)> {
    let mut found = None;
    for (j, c) in s.coeffs().iter().enumerate() {
        if !c.is_zero() {
            if found.is_some() {
                return None;
            }
            found = Some((c.clone(), j));
        }
    }
    found
}

fn int_pow(base: ExactValue, k: i64, order: usize) -> Result<ExactValue, ExprError> {
    match base {
        ExactValue::Scalar(s) => Ok(ExactValue::Scalar(s.powi(k)?)),
        ExactValue::Series(s, sp) => {
            if k < 0 {
                return Err(ExprError::UnsupportedNode("negative power of a series"));
            }
            let k = k as usize;
            let sp = sp * k as i32;
            if k == 0 {
                return Ok(ExactValue::Series(TruncatedSeries::one(order), 0));
            }
            if let Some((c, j)) = as_monomial(&s) {
                let out = if j * k <= order {
                    TruncatedSeries::monomial(num_traits::pow(c, k), j * k, order)
                } else {
                    TruncatedSeries::zero(order)
                };
                return Ok(ExactValue::Series(out, sp));
            }
            let mut acc = TruncatedSeries::one(order);
            let mut sq = s;
            let mut e = k;
            while e > 0 {
                if e & 1 == 1 {
                    acc = series_mul(&acc, &sq);
                }
                e >>= 1;
                if e > 0 {
                    sq = series_mul(&sq, &sq);
                }
            }
            Ok(ExactValue::Series(acc, sp))
        }
    }
}

/// `exp(s)` for a series without constant term, via
/// `e_k = (1/k)·Σ_{j=1..k} j·s_j·e_{k−j}`.
fn series_exp_of(s: &TruncatedSeries) -> TruncatedSeries {
    let n = s.order();
    let mut e = vec![Rational::zero(); n + 1];
    e[0] = Rational::one();
    for k in 1..=n {
        let mut acc = Rational::zero();
        for j in 1..=k {
            let sj = &s.coeffs()[j];
            if !sj.is_zero() {
                acc += sj * Rational::from_integer(j.into()) * &e[k - j];
            }
        }
        e[k] = acc / Rational::from_integer(k.into());
    }
    TruncatedSeries::new(e)
}

fn scalars(items: &[Expr], ctx: &EvalCtx<'_>, what: &'static str) -> Result<Vec<Rational>, ExprError> {
    items.iter().map(|e| eval(e, ctx, 0)?.scalar_rational(what)).collect()
}

/// Horner composition `p(s)` of the polynomial `p` with the series `s`.
fn compose(p: &TruncatedSeries, s: &TruncatedSeries, order: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(order);
    for c in p.coeffs().iter().rev() {
        acc = series_mul(&acc, s);
        *acc.coeff_mut(0) += c;
    }
    acc
}

pub(crate) fn eval(expr: &Expr, ctx: &EvalCtx<'_>, order: usize) -> Result<ExactValue, ExprError> {
    use Expr::*;
    Ok(match expr {
        Const(q) => ExactValue::rational(q.clone()),
        SqrtPiConst(s) => ExactValue::Scalar(s.clone()),
        Param(name) => ExactValue::rational(ctx.param(name)?.clone()),
        SumIndex => ExactValue::rational(Rational::from_integer(ctx.index()?.into())),
        X => ExactValue::Series(TruncatedSeries::monomial(Rational::one(), 1, order), 0),
        Add(items) => {
            let mut acc = ExactValue::rational(Rational::zero());
            for e in items {
                acc = add(acc, eval(e, ctx, order)?, order)?;
            }
            acc
        }
        Mul(items) => {
            let mut acc = ExactValue::rational(Rational::one());
            for e in items {
                acc = mul(acc, eval(e, ctx, order)?);
                if acc.is_zero() {
                    return Ok(ExactValue::rational(Rational::zero()));
                }
            }
            acc
        }
        Div(a, b) => {
            let den = match eval(b, ctx, order)? {
                ExactValue::Scalar(s) => s,
                ExactValue::Series(..) => return Err(ExprError::UnsupportedNode("division by a series")),
            };
            if den.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            let inv = SqrtPiNumber::one().div(&den)?;
            mul(eval(a, ctx, order)?, ExactValue::Scalar(inv))
        }
        Neg(a) => neg(eval(a, ctx, order)?),
        IntPow(base, e) => {
            let k = integer(&eval(e, ctx, 0)?, "exponent")?;
            int_pow(eval(base, ctx, order)?, k, order)?
        }
        RealPow(base, e) => {
            let ev = eval(e, ctx, 0)?;
            match integer(&ev, "exponent") {
                Ok(k) => int_pow(eval(base, ctx, order)?, k, order)?,
                Err(_) => return Err(ExprError::UnsupportedNode("real power")),
            }
        }
        ExpOf(a) => match eval(a, ctx, order)? {
            ExactValue::Scalar(s) if s.is_zero() => ExactValue::rational(Rational::one()),
            ExactValue::Scalar(_) => return Err(ExprError::UnsupportedNode("exp of a nonzero constant")),
            ExactValue::Series(s, k) => {
                if !s.coeff(0).is_zero() {
                    return Err(ExprError::UnsupportedNode("exp of a series with a constant term"));
                }
                if k != 0 && !s.is_zero() {
                    return Err(ExprError::NotRational("exp argument"));
                }
                ExactValue::Series(series_exp_of(&s), 0)
            }
        },
        GammaRatio { numer, denom } => {
            let num = scalars(numer, ctx, "gamma argument")?;
            let den = scalars(denom, ctx, "gamma argument")?;
            ExactValue::Scalar(gamma_ratio_exact(&num, &den)?)
        }
        Pochhammer(a, k) => {
            let k = natural(&eval(k, ctx, 0)?, "Pochhammer index")?;
            let a = eval(a, ctx, 0)?.scalar_rational("Pochhammer base")?;
            ExactValue::rational(rat_pochhammer(&a, k))
        }
        Pfq { upper, lower, scale, power } => {
            let spec = HypSpec::new(scalars(upper, ctx, "pFq parameter")?, scalars(lower, ctx, "pFq parameter")?);
            let scale = eval(scale, ctx, 0)?.scalar_rational("pFq argument")?;
            if *power == 0 {
                ExactValue::rational(pfq_exact_scalar(&spec, &scale)?)
            } else {
                ExactValue::Series(pfq_series_exact(&spec, &scale, *power as usize, order)?, 0)
            }
        }
        PairedF { a, b, d, mult, beta, scale, .. } => {
            let s = |e: &Expr| eval(e, ctx, 0)?.scalar_rational("paired parameter");
            let kp = kummer_pair(&s(a)?, &s(b)?, &s(d)?, &s(mult)?)?;
            let f = paired_2f2_series(&kp.alpha, &kp.g, &s(beta)?, &s(scale)?, ctx.convention, Some(&kp.kappa), order)?;
            ExactValue::Series(f, 0)
        }
        LaguerreOf { n, v, x } => {
            let k = natural(&eval(n, ctx, 0)?, "Laguerre degree")?;
            let v = eval(v, ctx, 0)?.scalar_rational("Laguerre order")?;
            match eval(x, ctx, order)? {
                ExactValue::Scalar(s) => {
                    let z = s.as_rational().cloned().ok_or(ExprError::NotRational("Laguerre argument"))?;
                    ExactValue::rational(laguerre_exact(k, &v, &z)?)
                }
                ExactValue::Series(s, 0) => match as_monomial(&s) {
                    Some((c, 1)) => ExactValue::Series(laguerre_series(k, &v, &c, order)?, 0),
                    _ => {
                        let poly = laguerre_series(k, &v, &Rational::one(), k)?;
                        ExactValue::Series(compose(&poly, &s, order), 0)
                    }
                },
                ExactValue::Series(..) => return Err(ExprError::NotRational("Laguerre argument")),
            }
        }
        BesselJOf { .. } => return Err(ExprError::UnsupportedNode("BesselJOf")),
        InfiniteSum(body) => {
            let mut acc = ExactValue::rational(Rational::zero());
            for k in 0..=order {
                let inner = ctx.with_index(k as i64);
                let t = eval(body, &inner, order)?;
                let ok = match &t {
                    ExactValue::Scalar(s) => k == 0 || s.is_zero(),
                    ExactValue::Series(s, _) => s.valuation().is_none_or(|v| v >= k),
                };
                if !ok {
                    return Err(ExprError::DegreeInvariant(k));
                }
                acc = add(acc, t, order)?;
            }
            acc
        }
    })
}

/// Formal series of `expr` through `order`, which must be rational (no
/// leftover power of `√π`).
pub fn eval_expr_exact(expr: &Expr, ctx: &EvalCtx<'_>, order: usize) -> Result<TruncatedSeries, ExprError> {
    let (s, k) = eval(expr, ctx, order)?.into_series(order);
    if k != 0 && !s.is_zero() {
        return Err(ExprError::NotRational("expression value"));
    }
    Ok(s.truncate(order))
}

/// Exact rational value of an `x`-free expression.
pub fn eval_scalar_exact(expr: &Expr, ctx: &EvalCtx<'_>) -> Result<Rational, ExprError> {
    eval(expr, ctx, 0)?.scalar_rational("scalar expression")
}

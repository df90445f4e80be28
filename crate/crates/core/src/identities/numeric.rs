use num_traits::{One, Signed, ToPrimitive, Zero};

use super::expr::Expr;
use super::{EvalCtx, ExprError};
use crate::exactnum::{gamma_ratio_exact, rat_pochhammer, ExactError, Rational};
use crate::hyper::{
    kummer_pair, kummer_pair_real, laguerre_exact, laguerre_numeric, paired_2f2_numeric, paired_2f2_series,
    pfq_exact_scalar, pfq_numeric, terminating_degree, Convention, HypSpec, HyperError, DEFAULT_MAX_TERMS,
};
use crate::realnum::{gamma, recip_gamma, HighReal, Precision};

/// Intermediate value: exact while every input seen so far was rational.
#[derive(Debug, Clone)]
pub(crate) enum NumValue {
    Q(Rational),
    R(HighReal),
}

impl NumValue {
    pub(crate) fn real(&self, prec: Precision) -> HighReal {
        match self {
            NumValue::Q(q) => HighReal::from_rational(q, prec),
            NumValue::R(r) => r.with_precision(prec),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            NumValue::Q(q) => q.is_zero(),
            NumValue::R(r) => r.is_zero(),
        }
    }
}

struct Num<'a> {
    x: &'a Rational,
    prec: Precision,
    max_terms: usize,
}

fn binary(
    a: NumValue,
    b: NumValue,
    prec: Precision,
    fq: impl Fn(Rational, Rational) -> Rational,
    fr: impl Fn(&HighReal, &HighReal) -> HighReal,
) -> NumValue {
    match (a, b) {
        (NumValue::Q(x), NumValue::Q(y)) => NumValue::Q(fq(x, y)),
        (a, b) => NumValue::R(fr(&a.real(prec), &b.real(prec))),
    }
}

fn integer(v: &NumValue, prec: Precision, what: &'static str) -> Result<Option<i64>, ExprError> {
    Ok(match v {
        NumValue::Q(q) if q.is_integer() => Some(q.to_integer().to_i64().ok_or(ExprError::NonIntegerExponent(what))?),
        NumValue::Q(_) => None,
        NumValue::R(r) => r.near_integer(prec),
    })
}

fn natural(v: &NumValue, prec: Precision, what: &'static str) -> Result<usize, ExprError> {
    match integer(v, prec, what)? {
        Some(k) => usize::try_from(k).map_err(|_| ExprError::NegativeIndex(what)),
        None => Err(ExprError::NonIntegerExponent(what)),
    }
}

fn int_pow(base: NumValue, k: i64, prec: Precision) -> Result<NumValue, ExprError> {
    Ok(match base {
        NumValue::Q(q) => {
            if q.is_zero() && k < 0 {
                return Err(ExprError::DivisionByZero);
            }
            let m = num_traits::pow(q, k.unsigned_abs() as usize);
            NumValue::Q(if k < 0 { m.recip() } else { m })
        }
        NumValue::R(r) => NumValue::R(r.with_precision(prec).powi(k)),
    })
}

fn all_rational(vals: &[NumValue]) -> Option<Vec<Rational>> {
    vals.iter()
        .map(|v| match v {
            NumValue::Q(q) => Some(q.clone()),
            NumValue::R(_) => None,
        })
        .collect()
}

impl Num<'_> {
    fn list(&self, items: &[Expr], ctx: &EvalCtx<'_>) -> Result<Vec<NumValue>, ExprError> {
        items.iter().map(|e| self.eval(e, ctx)).collect()
    }

    fn reals(&self, vals: &[NumValue]) -> Vec<HighReal> {
        vals.iter().map(|v| v.real(self.prec)).collect()
    }

    fn gamma_ratio(&self, numer: &[NumValue], denom: &[NumValue]) -> Result<NumValue, ExprError> {
        let p = self.prec;
        if let (Some(n), Some(d)) = (all_rational(numer), all_rational(denom)) {
            match gamma_ratio_exact(&n, &d) {
                Ok(s) => {
                    if s.sqrtpi_power() == 0 || s.is_zero() {
                        return Ok(NumValue::Q(s.rat().clone()));
                    }
                    let sp = HighReal::pi(p).sqrt()?.powi(s.sqrtpi_power() as i64);
                    return Ok(NumValue::R(&HighReal::from_rational(s.rat(), p) * &sp));
                }
                Err(ExactError::NonHalfInteger(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        let mut acc = HighReal::one(p);
        for a in self.reals(numer) {
            acc = &acc * &gamma(&a, p)?;
        }
        for b in self.reals(denom) {
            acc = &acc * &recip_gamma(&b, p)?;
        }
        Ok(NumValue::R(acc))
    }

    fn pfq(&self, upper: Vec<NumValue>, lower: Vec<NumValue>, z: NumValue) -> Result<NumValue, ExprError> {
        if z.is_zero() {
            return Ok(NumValue::Q(Rational::one()));
        }
        if let (Some(u), Some(l), NumValue::Q(zq)) = (all_rational(&upper), all_rational(&lower), &z) {
            let spec = HypSpec::new(u, l);
            if terminating_degree(&spec).is_some() {
                return Ok(NumValue::Q(pfq_exact_scalar(&spec, zq)?));
            }
        }
        let spec = HypSpec::new(self.reals(&upper), self.reals(&lower));
        let (v, _) = pfq_numeric(&spec, &z.real(self.prec), self.prec, DEFAULT_MAX_TERMS)?;
        Ok(NumValue::R(v))
    }

    #[allow(clippy::too_many_arguments)]
    fn paired(
        &self,
        a: NumValue,
        b: NumValue,
        d: NumValue,
        mult: NumValue,
        beta: NumValue,
        z: NumValue,
        convention: Convention,
    ) -> Result<NumValue, ExprError> {
        let p = self.prec;
        let vals = [a, b, d, mult, beta, z];
        if let Some(q) = all_rational(&vals) {
            let kp = kummer_pair(&q[0], &q[1], &q[2], &q[3])?;
            let (beta, z) = (&q[4], &q[5]);
            let removable = kp.g.is_zero() && kp.alpha.is_zero();
            if z.is_zero() || (removable && convention == Convention::Naive) {
                return Ok(NumValue::Q(Rational::one()));
            }
            if !removable && kp.alpha.is_integer() && !kp.alpha.is_positive() {
                let m = (-&kp.alpha).to_integer().to_usize().expect("small degree");
                let s = paired_2f2_series(&kp.alpha, &kp.g, beta, z, convention, Some(&kp.kappa), m)?;
                return Ok(NumValue::Q(s.eval(&Rational::one())));
            }
        }
        let r = self.reals(&vals);
        let kp = kummer_pair_real(&r[0], &r[1], &r[2], &r[3], p)?;
        let v = paired_2f2_numeric(&kp.alpha, &kp.g, &r[4], &r[5], convention, Some(&kp.kappa), p, DEFAULT_MAX_TERMS)?;
        Ok(NumValue::R(v))
    }

    fn eval(&self, expr: &Expr, ctx: &EvalCtx<'_>) -> Result<NumValue, ExprError> {
        use Expr::*;
        let p = self.prec;
        Ok(match expr {
            Const(q) => NumValue::Q(q.clone()),
            SqrtPiConst(s) => {
                if s.sqrtpi_power() == 0 || s.is_zero() {
                    NumValue::Q(s.rat().clone())
                } else {
                    let sp = HighReal::pi(p).sqrt()?.powi(s.sqrtpi_power() as i64);
                    NumValue::R(&HighReal::from_rational(s.rat(), p) * &sp)
                }
            }
            Param(name) => NumValue::Q(ctx.param(name)?.clone()),
            SumIndex => NumValue::Q(Rational::from_integer(ctx.index()?.into())),
            X => NumValue::Q(self.x.clone()),
            Add(items) => {
                let mut acc = NumValue::Q(Rational::zero());
                for e in items {
                    acc = binary(acc, self.eval(e, ctx)?, p, |a, b| a + b, |a, b| a + b);
                }
                acc
            }
            Mul(items) => {
                let mut acc = NumValue::Q(Rational::one());
                for e in items {
                    acc = binary(acc, self.eval(e, ctx)?, p, |a, b| a * b, |a, b| a * b);
                }
                acc
            }
            Div(a, b) => {
                let den = self.eval(b, ctx)?;
                if den.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                binary(self.eval(a, ctx)?, den, p, |a, b| a / b, |a, b| a / b)
            }
            Neg(a) => match self.eval(a, ctx)? {
                NumValue::Q(q) => NumValue::Q(-q),
                NumValue::R(r) => NumValue::R(-r),
            },
            IntPow(base, e) => {
                let k = integer(&self.eval(e, ctx)?, p, "exponent")?.ok_or(ExprError::NonIntegerExponent("exponent"))?;
                int_pow(self.eval(base, ctx)?, k, p)?
            }
            RealPow(base, e) => {
                let ev = self.eval(e, ctx)?;
                let bv = self.eval(base, ctx)?;
                match integer(&ev, p, "exponent")? {
                    Some(k) => int_pow(bv, k, p)?,
                    None => {
                        let b = bv.real(p);
                        if b.is_zero() && ev.real(p).is_positive() {
                            NumValue::Q(Rational::zero())
                        } else {
                            NumValue::R(b.pow(&ev.real(p))?)
                        }
                    }
                }
            }
            ExpOf(a) => match self.eval(a, ctx)? {
                NumValue::Q(q) if q.is_zero() => NumValue::Q(Rational::one()),
                v => NumValue::R(v.real(p).exp()?),
            },
            GammaRatio { numer, denom } => self.gamma_ratio(&self.list(numer, ctx)?, &self.list(denom, ctx)?)?,
            Pochhammer(a, k) => {
                let k = natural(&self.eval(k, ctx)?, p, "Pochhammer index")?;
                match self.eval(a, ctx)? {
                    NumValue::Q(q) => NumValue::Q(rat_pochhammer(&q, k)),
                    NumValue::R(r) => {
                        let mut acc = HighReal::one(p);
                        for j in 0..k {
                            acc = &acc * &(&r + &HighReal::from_i64(j as i64, p));
                        }
                        NumValue::R(acc)
                    }
                }
            }
            Pfq { upper, lower, scale, power } => {
                let z = binary(
                    self.eval(scale, ctx)?,
                    int_pow(NumValue::Q(self.x.clone()), *power as i64, p)?,
                    p,
                    |a, b| a * b,
                    |a, b| a * b,
                );
                self.pfq(self.list(upper, ctx)?, self.list(lower, ctx)?, z)?
            }
            PairedF { a, b, d, mult, beta, scale, .. } => {
                let z = binary(self.eval(scale, ctx)?, NumValue::Q(self.x.clone()), p, |a, b| a * b, |a, b| a * b);
                self.paired(
                    self.eval(a, ctx)?,
                    self.eval(b, ctx)?,
                    self.eval(d, ctx)?,
                    self.eval(mult, ctx)?,
                    self.eval(beta, ctx)?,
                    z,
                    ctx.convention,
                )?
            }
            LaguerreOf { n, v, x } => {
                let k = natural(&self.eval(n, ctx)?, p, "Laguerre degree")?;
                match (self.eval(v, ctx)?, self.eval(x, ctx)?) {
                    (NumValue::Q(v), NumValue::Q(z)) => NumValue::Q(laguerre_exact(k, &v, &z)?),
                    (v, z) => NumValue::R(laguerre_numeric(k, &v.real(p), &z.real(p), p)?),
                }
            }
            BesselJOf { order, arg } => {
                let o = self.eval(order, ctx)?.real(p);
                let z = self.eval(arg, ctx)?.real(p);
                NumValue::R(crate::hyper::bessel_j(&o, &z, p)?)
            }
            InfiniteSum(body) => NumValue::R(self.infinite_sum(body, ctx)?),
        })
    }

    /// Stops after three consecutive terms with `|t| ≤ 10^-(P+5)·|S|`.
    fn infinite_sum(&self, body: &Expr, ctx: &EvalCtx<'_>) -> Result<HighReal, ExprError> {
        let p = self.prec;
        let eps = HighReal::pow10(-(p.digits() as i64 + 5), p);
        let mut sum = HighReal::zero(p);
        let mut small = 0;
        for k in 0..self.max_terms {
            let t = self.eval(body, &ctx.with_index(k as i64))?.real(p);
            sum = &sum + &t;
            if t.abs() <= &eps * &sum.abs() {
                small += 1;
                if small == 3 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        Err(HyperError::NoConvergence(self.max_terms).into())
    }
}

/// Numeric value of `expr` at the rational point `x`, computed at
/// precision `prec`. Bindings stay exact as long as possible, so
/// terminating pieces are summed in `Q`.
pub fn eval_expr_numeric(
    expr: &Expr,
    ctx: &EvalCtx<'_>,
    x: &Rational,
    prec: Precision,
    max_terms: usize,
) -> Result<HighReal, ExprError> {
    let v = Num { x, prec, max_terms }.eval(expr, ctx)?;
    let r = v.real(prec);
    if !r.is_finite() {
        return Err(crate::realnum::RealError::NotFinite("expression value").into());
    }
    Ok(r)
}

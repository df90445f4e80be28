use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::exactnum::{format_rational, rat, Rational, SqrtPiNumber};
use crate::hyper::Tier;

/// Expression tree for one side of an identity, as a function of the
/// expansion variable `x`, the declared parameters and (inside a sum) the
/// summation index `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rational),
    SqrtPiConst(SqrtPiNumber),
    Param(String),
    /// Index of the innermost enclosing [`Expr::InfiniteSum`].
    SumIndex,
    X,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Integer-valued exponent (checked at evaluation).
    IntPow(Box<Expr>, Box<Expr>),
    /// Arbitrary real exponent; numeric mode only.
    RealPow(Box<Expr>, Box<Expr>),
    ExpOf(Box<Expr>),
    /// `∏Γ(numer)/∏Γ(denom)`, kept together so integer-offset pairs cancel
    /// exactly.
    GammaRatio { numer: Vec<Expr>, denom: Vec<Expr> },
    Pochhammer(Box<Expr>, Box<Expr>),
    /// `pFq(upper; lower; scale·x^power)`; `power = 0` means the scalar
    /// argument `scale`.
    Pfq { upper: Vec<Expr>, lower: Vec<Expr>, scale: Box<Expr>, power: u32 },
    /// `₂F₂[B−A, g+1; β, g; scale·x]` with `g = mult(A−B)/(A−D)`.
    PairedF {
        a: Box<Expr>,
        b: Box<Expr>,
        d: Box<Expr>,
        mult: Box<Expr>,
        beta: Box<Expr>,
        scale: Box<Expr>,
        tier: Tier,
    },
    LaguerreOf { n: Box<Expr>, v: Box<Expr>, x: Box<Expr> },
    BesselJOf { order: Box<Expr>, arg: Box<Expr> },
    InfiniteSum(Box<Expr>),
}

impl Expr {
    fn children(&self) -> Vec<&Expr> {
        use Expr::*;
        match self {
            Const(_) | SqrtPiConst(_) | Param(_) | SumIndex | X => vec![],
            Add(v) | Mul(v) => v.iter().collect(),
            Div(a, b) | IntPow(a, b) | RealPow(a, b) | Pochhammer(a, b) => vec![a, b],
            BesselJOf { order, arg } => vec![order, arg],
            Neg(a) | ExpOf(a) | InfiniteSum(a) => vec![a],
            GammaRatio { numer, denom } => numer.iter().chain(denom.iter()).collect(),
            Pfq { upper, lower, scale, .. } => {
                upper.iter().chain(lower.iter()).chain(std::iter::once(&**scale)).collect()
            }
            PairedF { a, b, d, mult, beta, scale, .. } => vec![a, b, d, mult, beta, scale],
            LaguerreOf { n, v, x } => vec![n, v, x],
        }
    }

    /// Every parameter name referenced anywhere in the tree.
    pub fn params(&self, out: &mut std::collections::BTreeSet<String>) {
        if let Expr::Param(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.params(out);
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        matches!(self, Expr::Param(p) if p == name) || self.children().iter().any(|c| c.mentions(name))
    }

    /// True when exact evaluation is structurally possible (no Bessel or
    /// real powers).
    pub fn exact_capable(&self) -> bool {
        !matches!(self, Expr::BesselJOf { .. } | Expr::RealPow(..))
            && self.children().iter().all(|c| c.exact_capable())
    }
}

// -- builders ---------------------------------------------------------------

pub fn c(n: i64) -> Expr {
    Expr::Const(Rational::from_integer(n.into()))
}

pub fn q(n: i64, d: i64) -> Expr {
    Expr::Const(rat(n, d))
}

pub fn p(name: &str) -> Expr {
    Expr::Param(name.to_string())
}

pub fn n() -> Expr {
    Expr::SumIndex
}

pub fn x() -> Expr {
    Expr::X
}

pub fn pow(base: Expr, e: Expr) -> Expr {
    Expr::IntPow(Box::new(base), Box::new(e))
}

pub fn rpow(base: Expr, e: Expr) -> Expr {
    Expr::RealPow(Box::new(base), Box::new(e))
}

pub fn exp_of(a: Expr) -> Expr {
    Expr::ExpOf(Box::new(a))
}

pub fn gamma_ratio(numer: Vec<Expr>, denom: Vec<Expr>) -> Expr {
    Expr::GammaRatio { numer, denom }
}

pub fn gamma_of(a: Expr) -> Expr {
    gamma_ratio(vec![a], vec![])
}

pub fn recip_gamma_of(a: Expr) -> Expr {
    gamma_ratio(vec![], vec![a])
}

pub fn poch(a: Expr, k: Expr) -> Expr {
    Expr::Pochhammer(Box::new(a), Box::new(k))
}

pub fn fact(k: Expr) -> Expr {
    poch(c(1), k)
}

pub fn pfq(upper: Vec<Expr>, lower: Vec<Expr>, scale: Expr, power: u32) -> Expr {
    Expr::Pfq { upper, lower, scale: Box::new(scale), power }
}

#[allow(clippy::too_many_arguments)]
pub fn paired(a: Expr, b: Expr, d: Expr, mult: Expr, beta: Expr, scale: Expr, tier: Tier) -> Expr {
    Expr::PairedF {
        a: Box::new(a),
        b: Box::new(b),
        d: Box::new(d),
        mult: Box::new(mult),
        beta: Box::new(beta),
        scale: Box::new(scale),
        tier,
    }
}

pub fn laguerre(k: Expr, v: Expr, arg: Expr) -> Expr {
    Expr::LaguerreOf { n: Box::new(k), v: Box::new(v), x: Box::new(arg) }
}

pub fn bessel_j(order: Expr, arg: Expr) -> Expr {
    Expr::BesselJOf { order: Box::new(order), arg: Box::new(arg) }
}

pub fn sum(body: Expr) -> Expr {
    Expr::InfiniteSum(Box::new(body))
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        match self {
            Expr::Add(mut v) => {
                v.push(o);
                Expr::Add(v)
            }
            s => Expr::Add(vec![s, o]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        self + (-o)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        match self {
            Expr::Mul(mut v) => {
                v.push(o);
                Expr::Mul(v)
            }
            s => Expr::Mul(vec![s, o]),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, o: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(o))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

// -- display ----------------------------------------------------------------

fn list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

fn atom(e: &Expr) -> bool {
    use Expr::*;
    !matches!(e, Add(_) | Mul(_) | Div(..) | Neg(_))
        && !matches!(e, Const(q) if !q.is_integer() || q < &Rational::from_integer(0.into()))
}

fn wrapped(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    if atom(e) {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Expr::*;
        match self {
            Const(q) => write!(f, "{}", format_rational(q).trim_end_matches("/1")),
            SqrtPiConst(s) => write!(f, "{s}"),
            Param(p) => write!(f, "{p}"),
            SumIndex => write!(f, "n"),
            X => write!(f, "x"),
            Add(v) => {
                for (i, e) in v.iter().enumerate() {
                    match (i, e) {
                        (0, _) => write!(f, "{e}")?,
                        (_, Neg(inner)) => {
                            write!(f, " - ")?;
                            wrapped(f, inner)?
                        }
                        _ => write!(f, " + {e}")?,
                    }
                }
                Ok(())
            }
            Mul(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    wrapped(f, e)?;
                }
                Ok(())
            }
            Div(a, b) => {
                wrapped(f, a)?;
                write!(f, "/")?;
                wrapped(f, b)
            }
            Neg(a) => {
                write!(f, "-")?;
                wrapped(f, a)
            }
            IntPow(a, b) | RealPow(a, b) => {
                wrapped(f, a)?;
                write!(f, "^")?;
                wrapped(f, b)
            }
            ExpOf(a) => write!(f, "exp({a})"),
            GammaRatio { numer, denom } => {
                write!(f, "Gamma[")?;
                list(f, numer)?;
                write!(f, " / ")?;
                list(f, denom)?;
                write!(f, "]")
            }
            Pochhammer(a, k) => {
                write!(f, "(")?;
                write!(f, "{a}")?;
                write!(f, ")_")?;
                wrapped(f, k)
            }
            Pfq { upper, lower, scale, power } => {
                write!(f, "{}F{}[", upper.len(), lower.len())?;
                list(f, upper)?;
                write!(f, "; ")?;
                list(f, lower)?;
                write!(f, "; ")?;
                match power {
                    0 => write!(f, "{scale}")?,
                    1 => {
                        wrapped(f, scale)?;
                        write!(f, "*x")?
                    }
                    k => {
                        wrapped(f, scale)?;
                        write!(f, "*x^{k}")?
                    }
                }
                write!(f, "]")
            }
            PairedF { a, b, d, mult, beta, scale, tier } => {
                let t = match tier {
                    Tier::G => "g",
                    Tier::GPrime => "g'",
                };
                write!(
                    f,
                    "2F2[({b}) - ({a}), {t}+1; {beta}, {t}; ({scale})*x] with {t} = ({mult})(({a}) - ({b}))/(({a}) - ({d}))"
                )
            }
            LaguerreOf { n, v, x } => write!(f, "L_{n}^({v})({x})"),
            BesselJOf { order, arg } => write!(f, "J_({order})({arg})"),
            InfiniteSum(body) => write!(f, "sum_{{n>=0}} [{body}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_flatten_sums_and_products() {
        let e = p("a") + p("b") + c(1);
        assert!(matches!(&e, Expr::Add(v) if v.len() == 3));
        let e = p("a") * p("b") * x();
        assert!(matches!(&e, Expr::Mul(v) if v.len() == 3));
    }

    #[test]
    fn params_and_capability() {
        let e = exp_of(-x()) * pfq(vec![p("a"), p("d") + c(1)], vec![p("b") + c(1), p("d")], c(1), 1);
        let mut s = std::collections::BTreeSet::new();
        e.params(&mut s);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec!["a", "b", "d"]);
        assert!(e.exact_capable());
        assert!(!bessel_j(p("v"), c(2) * x()).exact_capable());
    }

    #[test]
    fn display_is_readable() {
        let e = p("d") * (p("a") - p("b")) / (p("a") - p("d"));
        assert_eq!(e.to_string(), "(d*(a - b))/(a - d)");
        assert_eq!(pfq(vec![], vec![p("v") + c(2)], c(-1), 2).to_string(), "0F1[; v + 2; (-1)*x^2]");
    }
}

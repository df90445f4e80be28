//! Expression trees and the registry of hypergeometric identities.

mod exact;
pub mod expr;
mod numeric;
mod registry;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{format_rational, nonpositive_integer, ExactError, Rational};
use crate::hyper::{Convention, HyperError};
use crate::realnum::RealError;

pub use exact::{eval_expr_exact, eval_scalar_exact, ExactValue};
pub use expr::Expr;
pub use numeric::eval_expr_numeric;
pub use registry::{build_registry, chain_links, registry, ChainLink, N_MAX};

pub type Bindings = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("unknown parameter {0}")]
    UnknownParam(String),
    #[error("summation index used outside a sum")]
    IndexOutsideSum,
    #[error("unsupported in exact mode: {0}")]
    UnsupportedNode(&'static str),
    #[error("{0} must be a constant")]
    NonScalar(&'static str),
    #[error("{0} is not rational")]
    NotRational(&'static str),
    #[error("{0} must be an integer")]
    NonIntegerExponent(&'static str),
    #[error("{0} must be nonnegative")]
    NegativeIndex(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("sum term {0} has a coefficient below degree {0}")]
    DegreeInvariant(usize),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl ExprError {
    pub fn name(&self) -> &'static str {
        match self {
            ExprError::UnknownParam(_) => "UnknownParam",
            ExprError::IndexOutsideSum => "IndexOutsideSum",
            ExprError::UnsupportedNode(_) => "UnsupportedNode",
            ExprError::NonScalar(_) => "NonScalar",
            ExprError::NotRational(_) => "NotRational",
            ExprError::NonIntegerExponent(_) => "NonIntegerExponent",
            ExprError::NegativeIndex(_) => "NegativeIndex",
            ExprError::DivisionByZero => "DivisionByZero",
            ExprError::DegreeInvariant(_) => "DegreeInvariant",
            ExprError::Hyper(e) => e.name(),
            ExprError::Real(e) => e.name(),
            ExprError::Exact(e) => e.name(),
        }
    }
}

/// Bindings, convention and the current summation index.
#[derive(Debug, Clone, Copy)]
pub struct EvalCtx<'a> {
    pub bindings: &'a Bindings,
    pub convention: Convention,
    index: Option<i64>,
}

impl<'a> EvalCtx<'a> {
    pub fn new(bindings: &'a Bindings, convention: Convention) -> Self {
        EvalCtx { bindings, convention, index: None }
    }

    fn param(&self, name: &str) -> Result<&'a Rational, ExprError> {
        self.bindings.get(name).ok_or_else(|| ExprError::UnknownParam(name.to_string()))
    }

    fn index(&self) -> Result<i64, ExprError> {
        self.index.ok_or(ExprError::IndexOutsideSum)
    }

    fn with_index(&self, n: i64) -> Self {
        EvalCtx { index: Some(n), ..*self }
    }
}

// -- derived parameters -----------------------------------------------------

/// `f = d(a−b)/(a−d)`.
pub fn derived_f(a: &Rational, b: &Rational, d: &Rational) -> Result<Rational, HyperError> {
    if a == d {
        return Err(HyperError::SingularDenominator);
    }
    Ok(d * (a - b) / (a - d))
}

/// `f' = (d+1)(a−b)/(a−d)`.
pub fn derived_fprime(a: &Rational, b: &Rational, d: &Rational) -> Result<Rational, HyperError> {
    if a == d {
        return Err(HyperError::SingularDenominator);
    }
    Ok((d + Rational::one()) * (a - b) / (a - d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedG {
    pub value: Rational,
    /// `n = 0`: the zero numerator makes the paired function removable.
    pub removable: bool,
}

fn g_with(mult: Rational, n: usize, e: &Rational, v: &Rational) -> Result<DerivedG, HyperError> {
    if n == 0 {
        return Ok(DerivedG { value: Rational::zero(), removable: true });
    }
    let nn = Rational::from_integer(n.into());
    let den = v + Rational::one() + &nn - e;
    if den.is_zero() {
        return Err(HyperError::SingularDenominator);
    }
    Ok(DerivedG { value: mult * nn / den, removable: false })
}

/// `g = en/(v+1+n−e)`.
pub fn derived_g(n: usize, e: &Rational, v: &Rational) -> Result<DerivedG, HyperError> {
    g_with(e.clone(), n, e, v)
}

/// `g' = (e+1)n/(v+1+n−e)`.
pub fn derived_gprime(n: usize, e: &Rational, v: &Rational) -> Result<DerivedG, HyperError> {
    g_with(e + Rational::one(), n, e, v)
}

// -- registry types ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Series,
    Summation,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Series => "series",
            Kind::Summation => "summation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Exact,
    Numeric,
    Summation,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
            Mode::Summation => "summation",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" => Some(Mode::Exact),
            "numeric" => Some(Mode::Numeric),
            "summation" => Some(Mode::Summation),
            _ => None,
        }
    }
}

/// Where the numeric grid may place `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XDomain {
    All,
    Positive,
}

/// Sampling distribution of one parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Dist {
    /// `p/q` with `1 ≤ q ≤ max_denom`, inside `[lo, hi]`.
    Uniform { lo: Rational, hi: Rational, max_denom: i64 },
    Integers { lo: i64, hi: i64 },
    /// Another parameter plus an integer offset in `lo..=hi`.
    Offset { base: String, lo: i64, hi: i64 },
    /// Picks one of the component distributions with equal weight.
    Mixture(Vec<Dist>),
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Uniform { lo, hi, max_denom } => write!(
                f,
                "rational in [{}, {}], denominator <= {max_denom}",
                format_rational(lo),
                format_rational(hi)
            ),
            Dist::Integers { lo, hi } => write!(f, "integer in [{lo}, {hi}]"),
            Dist::Offset { base, lo, hi } => write!(f, "{base} + k, k integer in [{lo}, {hi}]"),
            Dist::Mixture(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " or ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamDecl {
    pub name: String,
    pub dist: Dist,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derived {
    pub name: String,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pred {
    NotEqual(Expr, Expr),
    NotNonPosInt(Expr),
    IsNonPosInt(Expr),
    NotInteger(Expr),
    /// Not in `{1, 2, ..., bound}`.
    NotPosIntUpTo(Expr, u64),
    Greater(Expr, Rational),
    Any(Vec<Pred>),
}

impl Pred {
    pub fn holds(&self, bindings: &Bindings) -> Result<bool, ExprError> {
        let ctx = EvalCtx::new(bindings, Convention::Naive);
        let val = |e: &Expr| eval_scalar_exact(e, &ctx);
        Ok(match self {
            Pred::NotEqual(a, b) => val(a)? != val(b)?,
            Pred::NotNonPosInt(a) => nonpositive_integer(&val(a)?).is_none(),
            Pred::IsNonPosInt(a) => nonpositive_integer(&val(a)?).is_some(),
            Pred::NotInteger(a) => !val(a)?.is_integer(),
            Pred::NotPosIntUpTo(a, bound) => {
                let q = val(a)?;
                !(q.is_integer() && q.is_positive() && q <= Rational::from_integer((*bound).into()))
            }
            Pred::Greater(a, q) => &val(a)? > q,
            Pred::Any(ps) => {
                for p in ps {
                    if p.holds(bindings)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    fn exprs(&self) -> Vec<&Expr> {
        match self {
            Pred::NotEqual(a, b) => vec![a, b],
            Pred::NotNonPosInt(a)
            | Pred::IsNonPosInt(a)
            | Pred::NotInteger(a)
            | Pred::NotPosIntUpTo(a, _)
            | Pred::Greater(a, _) => vec![a],
            Pred::Any(ps) => ps.iter().flat_map(|p| p.exprs()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub label: String,
    pub pred: Pred,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Conventions to run; empty when neither side has a removable case.
    pub conventions: Vec<Convention>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Identity {
    pub id: String,
    pub title: String,
    pub kind: Kind,
    /// Short descriptive label of where the identity comes from.
    pub source: String,
    pub params: Vec<ParamDecl>,
    pub derived: Vec<Derived>,
    pub constraints: Vec<Constraint>,
    pub variants: Vec<Variant>,
    pub modes: Vec<Mode>,
    pub x_domain: XDomain,
}

/// Why a binding cannot be used.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Inadmissible {
    #[error("constraint violated: {0}")]
    Violated(String),
    #[error("missing parameter {0}")]
    Missing(String),
    #[error("cannot evaluate constraint {0}: {1}")]
    Undefined(String, ExprError),
}

impl Identity {
    pub fn variant(&self, name: &str) -> Option<&Variant> {
        self.variants.iter().find(|v| v.name == name)
    }

    pub fn supports(&self, mode: Mode) -> bool {
        self.modes.contains(&mode)
    }

    fn derived_names(&self) -> BTreeSet<&str> {
        self.derived.iter().map(|d| d.name.as_str()).collect()
    }

    fn check(&self, c: &Constraint, b: &Bindings) -> Result<(), Inadmissible> {
        match c.pred.holds(b) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Inadmissible::Violated(c.label.clone())),
            Err(e) => Err(Inadmissible::Undefined(c.label.clone(), e)),
        }
    }

    /// Checks every constraint and adds the derived parameters. Constraints
    /// on base parameters are checked before any derived value is computed.
    pub fn resolve(&self, base: &Bindings) -> Result<Bindings, Inadmissible> {
        for p in &self.params {
            if !base.contains_key(&p.name) {
                return Err(Inadmissible::Missing(p.name.clone()));
            }
        }
        let derived = self.derived_names();
        let uses_derived = |c: &Constraint| c.pred.exprs().iter().any(|e| derived.iter().any(|d| e.mentions(d)));
        let mut b: Bindings = self
            .params
            .iter()
            .map(|p| (p.name.clone(), base[&p.name].clone()))
            .collect();
        for c in self.constraints.iter().filter(|c| !uses_derived(c)) {
            self.check(c, &b)?;
        }
        for d in &self.derived {
            let v = eval_scalar_exact(&d.expr, &EvalCtx::new(&b, Convention::Naive))
                .map_err(|e| Inadmissible::Undefined(d.name.clone(), e))?;
            b.insert(d.name.clone(), v);
        }
        for c in self.constraints.iter().filter(|c| uses_derived(c)) {
            self.check(c, &b)?;
        }
        Ok(b)
    }

    /// Every parameter symbol used by a variant, derived formula or
    /// constraint must be declared.
    pub fn check_closure(&self) -> Result<(), String> {
        let mut declared: BTreeSet<String> = self.params.iter().map(|p| p.name.clone()).collect();
        let mut used = BTreeSet::new();
        for d in &self.derived {
            d.expr.params(&mut used);
            declared.insert(d.name.clone());
        }
        for v in &self.variants {
            v.lhs.params(&mut used);
            v.rhs.params(&mut used);
        }
        for c in &self.constraints {
            for e in c.pred.exprs() {
                e.params(&mut used);
            }
        }
        for p in &self.params {
            if let Dist::Offset { base, .. } = &p.dist {
                used.insert(base.clone());
            }
        }
        let missing: Vec<_> = used.difference(&declared).cloned().collect();
        if missing.is_empty() && !self.variants.is_empty() {
            Ok(())
        } else {
            Err(format!("{}: undeclared symbols {missing:?}", self.id))
        }
    }
}

/// Coefficient extraction through diagonals: entry `k` of the result is
/// `Σ_{j≤k} A(j, k−j)`, so summing it reorders `Σ_{j,m} A(j, m)`.
pub fn diagonal_sums(a: &[Vec<Rational>]) -> Vec<Rational> {
    let width = a.iter().map(|r| r.len()).max().unwrap_or(0);
    let len = (a.len() + width).saturating_sub(1);
    let mut out = vec![Rational::zero(); len];
    for (j, row) in a.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            out[j + m] += v;
        }
    }
    out
}

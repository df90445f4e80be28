//! Verification engines: exact coefficient comparison, numeric sweeps,
//! scalar summation checks and proof-chain localization.

mod sampler;

use std::time::Instant;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::{parse_rational, rat, Rational, TruncatedSeries};
use crate::hyper::{Convention, HyperError, DEFAULT_MAX_TERMS};
use crate::identities::{
    chain_links, eval_expr_exact, eval_expr_numeric, eval_scalar_exact, registry, Bindings, EvalCtx, Expr, ExprError,
    Identity, Inadmissible, Mode, XDomain,
};
use crate::realnum::{rel_error, HighReal, Precision};

pub use sampler::{draw, sample_bindings, SamplerExhausted, MAX_RETRIES};

/// Extra digits carried while evaluating before comparing at the target precision.
pub const GUARD_DIGITS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Real(HighReal),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Detail {
    Exact {
        order: usize,
        first_bad_order: Option<usize>,
        lhs_coeff: Option<Rational>,
        rhs_coeff: Option<Rational>,
    },
    Numeric {
        max_rel_error: HighReal,
        worst_point: Rational,
        /// Grid points outside the identity's domain.
        skipped_points: Vec<Rational>,
    },
    Summation {
        lhs_value: Value,
        rhs_value: Value,
        rel_error: Value,
    },
    Skip {
        reason: String,
    },
    Error {
        error: String,
        message: String,
        point: Option<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub id: String,
    pub variant: String,
    pub convention: Option<Convention>,
    pub mode: Mode,
    pub binding_index: usize,
    pub bindings: Bindings,
    pub seed: Option<u64>,
    pub verdict: Verdict,
    pub detail: Detail,
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub order: usize,
    pub precision: Precision,
    pub tolerance: Rational,
    pub grid: Vec<Rational>,
    pub max_terms: usize,
}

pub fn default_grid() -> Vec<Rational> {
    vec![rat(1, 4), rat(1, 2), rat(1, 1), rat(2, 1)]
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            order: 40,
            precision: Precision::new(40).expect("valid precision"),
            tolerance: parse_rational("1e-30").expect("valid literal"),
            grid: default_grid(),
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown identity {0}")]
    UnknownIdentity(String),
    #[error("{id} has no variant {variant}")]
    UnknownVariant { id: String, variant: String },
    #[error("{id} does not support {mode} mode")]
    UnsupportedMode { id: String, mode: &'static str },
    #[error("{0} has no proof chain")]
    NoChain(String),
}

pub fn find_identity(id: &str) -> Result<&'static Identity, VerifyError> {
    registry().iter().find(|i| i.id == id).ok_or_else(|| VerifyError::UnknownIdentity(id.to_string()))
}

fn error_detail(e: &ExprError, point: Option<Rational>) -> Detail {
    Detail::Error { error: e.name().to_string(), message: e.to_string(), point }
}

/// Convergence-domain failures that make a point or instance inapplicable.
fn outside_domain(e: &ExprError) -> bool {
    matches!(e, ExprError::Hyper(HyperError::BoundaryViolation(_) | HyperError::Divergent))
}

// -- comparators on a pair of expressions --------------------------------------

/// Coefficientwise comparison of `lhs − rhs` through order `order`.
pub fn compare_exact(lhs: &Expr, rhs: &Expr, ctx: &EvalCtx, order: usize) -> (Verdict, Detail) {
    let sides = eval_expr_exact(lhs, ctx, order).and_then(|l| Ok((l, eval_expr_exact(rhs, ctx, order)?)));
    let (l, r) = match sides {
        Ok(s) => s,
        Err(e) => return (Verdict::Error, error_detail(&e, None)),
    };
    let diff = &l.truncate(order) - &r.truncate(order);
    match diff.valuation() {
        None => (Verdict::Pass, Detail::Exact { order, first_bad_order: None, lhs_coeff: None, rhs_coeff: None }),
        Some(k) => (
            Verdict::Fail,
            Detail::Exact { order, first_bad_order: Some(k), lhs_coeff: Some(l.coeff(k)), rhs_coeff: Some(r.coeff(k)) },
        ),
    }
}

/// Both sides at each grid point, evaluated with guard digits and compared
/// at the target precision.
pub fn compare_numeric(lhs: &Expr, rhs: &Expr, ctx: &EvalCtx, domain: XDomain, s: &Settings) -> (Verdict, Detail) {
    let p = s.precision;
    let w = p.widened(GUARD_DIGITS);
    let mut skipped = Vec::new();
    let mut worst: Option<(HighReal, Rational)> = None;
    for x in &s.grid {
        if domain == XDomain::Positive && !x.is_positive() {
            skipped.push(x.clone());
            continue;
        }
        let sides = eval_expr_numeric(lhs, ctx, x, w, s.max_terms)
            .and_then(|l| Ok((l, eval_expr_numeric(rhs, ctx, x, w, s.max_terms)?)));
        let (l, r) = match sides {
            Ok(v) => v,
            Err(e) if outside_domain(&e) => {
                skipped.push(x.clone());
                continue;
            }
            Err(e) => return (Verdict::Error, error_detail(&e, Some(x.clone()))),
        };
        let err = rel_error(&l, &r, p);
        if worst.as_ref().is_none_or(|(m, _)| err > *m) {
            worst = Some((err, x.clone()));
        }
    }
    match worst {
        None => {
            let pts: Vec<String> = skipped.iter().map(crate::exactnum::format_rational).collect();
            let why = match domain {
                XDomain::Positive => "the identity needs x > 0",
                XDomain::All => "outside the convergence domain",
            };
            (Verdict::Skip, Detail::Skip { reason: format!("no usable grid point ({}): {why}", pts.join(", ")) })
        }
        Some((max, at)) => {
            let tol = HighReal::from_rational(&s.tolerance, w);
            let v = if max <= tol { Verdict::Pass } else { Verdict::Fail };
            (v, Detail::Numeric { max_rel_error: max, worst_point: at, skipped_points: skipped })
        }
    }
}

/// Scalar comparison: exact when both sides reduce to rationals, otherwise
/// numeric against the tolerance.
pub fn compare_summation(lhs: &Expr, rhs: &Expr, ctx: &EvalCtx, s: &Settings) -> (Verdict, Detail) {
    if let (Ok(l), Ok(r)) = (eval_scalar_exact(lhs, ctx), eval_scalar_exact(rhs, ctx)) {
        let err = if l == r {
            Rational::zero()
        } else {
            (&l - &r).abs() / l.abs().max(r.abs())
        };
        let v = if err.is_zero() { Verdict::Pass } else { Verdict::Fail };
        return (v, Detail::Summation { lhs_value: Value::Exact(l), rhs_value: Value::Exact(r), rel_error: Value::Exact(err) });
    }
    let p = s.precision;
    let w = p.widened(GUARD_DIGITS);
    let zero = Rational::zero();
    let sides = eval_expr_numeric(lhs, ctx, &zero, w, s.max_terms)
        .and_then(|l| Ok((l, eval_expr_numeric(rhs, ctx, &zero, w, s.max_terms)?)));
    match sides {
        Ok((l, r)) => {
            let err = rel_error(&l, &r, p);
            let v = if err <= HighReal::from_rational(&s.tolerance, w) { Verdict::Pass } else { Verdict::Fail };
            (v, Detail::Summation { lhs_value: Value::Real(l), rhs_value: Value::Real(r), rel_error: Value::Real(err) })
        }
        Err(e) if outside_domain(&e) => (Verdict::Skip, Detail::Skip { reason: format!("{}: {e}", e.name()) }),
        Err(e) => (Verdict::Error, error_detail(&e, None)),
    }
}

// -- identity-level operations -------------------------------------------------

#[allow(clippy::result_large_err)]
fn admissible(identity: &Identity, base: &Bindings) -> Result<Bindings, (Verdict, Detail, Bindings)> {
    identity.resolve(base).map_err(|e| {
        let detail = match &e {
            Inadmissible::Violated(label) => {
                return (Verdict::Skip, Detail::Skip { reason: format!("constraint violated: {label}") }, base.clone())
            }
            Inadmissible::Missing(name) => {
                Detail::Error { error: "MissingParameter".into(), message: format!("missing parameter {name}"), point: None }
            }
            Inadmissible::Undefined(label, err) => Detail::Error {
                error: err.name().to_string(),
                message: format!("cannot evaluate {label}: {err}"),
                point: None,
            },
        };
        (Verdict::Error, detail, base.clone())
    })
}

#[allow(clippy::too_many_arguments)]
fn run_check(
    identity: &Identity,
    variant: String,
    lhs: &Expr,
    rhs: &Expr,
    mode: Mode,
    convention: Option<Convention>,
    base: &Bindings,
    s: &Settings,
) -> Report {
    let (verdict, detail, bindings) = match admissible(identity, base) {
        Err(skip) => skip,
        Ok(b) => {
            let ctx = EvalCtx::new(&b, convention.unwrap_or(Convention::Naive));
            let (v, d) = match mode {
                Mode::Exact => compare_exact(lhs, rhs, &ctx, s.order),
                Mode::Numeric => compare_numeric(lhs, rhs, &ctx, identity.x_domain, s),
                Mode::Summation => compare_summation(lhs, rhs, &ctx, s),
            };
            (v, d, b)
        }
    };
    Report {
        id: identity.id.clone(),
        variant,
        convention,
        mode,
        binding_index: 0,
        bindings,
        seed: None,
        verdict,
        detail,
        runtime_ms: None,
    }
}

fn variant_of<'a>(identity: &'a Identity, name: &str) -> Result<&'a crate::identities::Variant, VerifyError> {
    identity
        .variant(name)
        .ok_or_else(|| VerifyError::UnknownVariant { id: identity.id.clone(), variant: name.to_string() })
}

fn run_variant(
    identity: &Identity,
    variant: &str,
    mode: Mode,
    base: &Bindings,
    convention: Option<Convention>,
    s: &Settings,
) -> Result<Report, VerifyError> {
    if !identity.supports(mode) {
        return Err(VerifyError::UnsupportedMode { id: identity.id.clone(), mode: mode.name() });
    }
    let v = variant_of(identity, variant)?;
    Ok(run_check(identity, v.name.clone(), &v.lhs, &v.rhs, mode, convention, base, s))
}

pub fn verify_exact(
    identity: &Identity,
    variant: &str,
    bindings: &Bindings,
    convention: Option<Convention>,
    order: usize,
) -> Result<Report, VerifyError> {
    let s = Settings { order, ..Settings::default() };
    run_variant(identity, variant, Mode::Exact, bindings, convention, &s)
}

pub fn verify_numeric(
    identity: &Identity,
    variant: &str,
    bindings: &Bindings,
    convention: Option<Convention>,
    settings: &Settings,
) -> Result<Report, VerifyError> {
    run_variant(identity, variant, Mode::Numeric, bindings, convention, settings)
}

pub fn verify_summation(
    identity: &Identity,
    variant: &str,
    bindings: &Bindings,
    settings: &Settings,
) -> Result<Report, VerifyError> {
    run_variant(identity, variant, Mode::Summation, bindings, None, settings)
}

pub const CHAIN_PREFIX: &str = "chain:";

/// One report per proof checkpoint, in proof order.
pub fn verify_chain(
    id: &str,
    bindings: &Bindings,
    convention: Convention,
    settings: &Settings,
) -> Result<Vec<Report>, VerifyError> {
    let identity = find_identity(id)?;
    let links = chain_links(id).ok_or_else(|| VerifyError::NoChain(id.to_string()))?;
    Ok(links
        .iter()
        .map(|l| {
            let conv = l.uses_convention.then_some(convention);
            run_check(identity, format!("{CHAIN_PREFIX}{}", l.name), &l.lhs, &l.rhs, l.mode, conv, bindings, settings)
        })
        .collect())
}

// -- task planning ---------------------------------------------------------------

/// Which checks to run.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub ids: Vec<String>,
    pub variant: Option<String>,
    pub convention: Option<Convention>,
    pub mode: Option<Mode>,
    /// Fixed bindings instead of sampled ones.
    pub bindings: Option<Bindings>,
    /// Also run the proof chains of the theorems that have one.
    pub chains: bool,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone)]
enum TaskBindings {
    Fixed(Bindings),
    Sampled(Bindings, u64),
    Exhausted(u64),
}

#[derive(Debug, Clone)]
pub struct Task {
    identity: &'static Identity,
    /// Index into the identity's variants, or the chain link when `chain` is set.
    item: usize,
    chain: bool,
    mode: Mode,
    convention: Option<Convention>,
    binding_index: usize,
    bindings: TaskBindings,
}

impl Task {
    fn sort_key(&self, reg_index: usize) -> (usize, bool, usize, usize, Option<&'static str>, Mode) {
        (reg_index, self.chain, self.item, self.binding_index, self.convention.map(|c| c.name()), self.mode)
    }
}

fn conventions_for(listed: &[Convention], wanted: Option<Convention>) -> Vec<Option<Convention>> {
    if listed.is_empty() {
        return vec![None];
    }
    listed.iter().copied().filter(|c| wanted.is_none_or(|w| w == *c)).map(Some).collect()
}

fn trial_bindings(identity: &Identity, sel: &Selection) -> Vec<TaskBindings> {
    match &sel.bindings {
        Some(b) => vec![TaskBindings::Fixed(b.clone())],
        None => sample_bindings(identity, sel.seed, sel.trials)
            .into_iter()
            .map(|r| match r {
                Ok(b) => TaskBindings::Sampled(b, sel.seed),
                Err(_) => TaskBindings::Exhausted(sel.seed),
            })
            .collect(),
    }
}

/// Expands a selection into independent tasks.
pub fn plan(sel: &Selection) -> Result<Vec<Task>, VerifyError> {
    let explicit = !sel.ids.is_empty();
    let identities: Vec<&'static Identity> = if explicit {
        sel.ids.iter().map(|id| find_identity(id)).collect::<Result<_, _>>()?
    } else {
        registry().iter().collect()
    };
    let mut tasks = Vec::new();
    for identity in identities {
        if let Some(name) = &sel.variant {
            if explicit {
                variant_of(identity, name)?;
            }
        }
        let modes: Vec<Mode> = identity.modes.iter().copied().filter(|m| sel.mode.is_none_or(|w| w == *m)).collect();
        if modes.is_empty() && explicit {
            let mode = sel.mode.expect("mode filter emptied the list");
            return Err(VerifyError::UnsupportedMode { id: identity.id.clone(), mode: mode.name() });
        }
        let trials = trial_bindings(identity, sel);
        for (item, v) in identity.variants.iter().enumerate() {
            if sel.variant.as_ref().is_some_and(|name| name != &v.name) {
                continue;
            }
            for &mode in &modes {
                for conv in conventions_for(&v.conventions, sel.convention) {
                    for (k, b) in trials.iter().enumerate() {
                        tasks.push(Task {
                            identity,
                            item,
                            chain: false,
                            mode,
                            convention: conv,
                            binding_index: k,
                            bindings: b.clone(),
                        });
                    }
                }
            }
        }
        if sel.chains && sel.variant.is_none() {
            if let Some(links) = chain_links(&identity.id) {
                for (item, l) in links.iter().enumerate() {
                    if sel.mode.is_some_and(|m| m != l.mode) {
                        continue;
                    }
                    let convs = if l.uses_convention {
                        conventions_for(&[Convention::Naive, Convention::Limit], sel.convention)
                    } else {
                        vec![None]
                    };
                    for conv in convs {
                        for (k, b) in trials.iter().enumerate() {
                            tasks.push(Task {
                                identity,
                                item,
                                chain: true,
                                mode: l.mode,
                                convention: conv,
                                binding_index: k,
                                bindings: b.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(tasks)
}

/// Runs one task. Timing is opt-in because it would make reports differ
/// between runs.
pub fn run_task(task: &Task, s: &Settings, timed: bool) -> Report {
    let start = Instant::now();
    let identity = task.identity;
    let (base, seed) = match &task.bindings {
        TaskBindings::Fixed(b) => (b.clone(), None),
        TaskBindings::Sampled(b, seed) => (b.clone(), Some(*seed)),
        TaskBindings::Exhausted(seed) => (Bindings::new(), Some(*seed)),
    };
    let mut report = if task.chain {
        let links = chain_links(&identity.id).expect("planned chain exists");
        let l = &links[task.item];
        run_check(identity, format!("{CHAIN_PREFIX}{}", l.name), &l.lhs, &l.rhs, task.mode, task.convention, &base, s)
    } else {
        let v = &identity.variants[task.item];
        run_check(identity, v.name.clone(), &v.lhs, &v.rhs, task.mode, task.convention, &base, s)
    };
    if let TaskBindings::Exhausted(_) = task.bindings {
        report.verdict = Verdict::Error;
        report.detail = Detail::Error {
            error: "SamplerExhausted".into(),
            message: SamplerExhausted { retries: MAX_RETRIES }.to_string(),
            point: None,
        };
    }
    report.binding_index = task.binding_index;
    report.seed = seed;
    if timed {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Runs tasks in parallel and returns reports in canonical order: registry
/// order of the identity, variants before chain links, then declaration
/// order, binding index, convention and mode.
pub fn run_tasks(tasks: &[Task], s: &Settings, timed: bool) -> Vec<Report> {
    let reg_index = |t: &Task| registry().iter().position(|i| i.id == t.identity.id).unwrap_or(usize::MAX);
    let mut out: Vec<(_, Report)> = tasks
        .par_iter()
        .map(|t| (t.sort_key(reg_index(t)), run_task(t, s, timed)))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, r)| r).collect()
}

/// Exit status of a run: 0 when no non-skipped result failed or errored.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| matches!(r.verdict, Verdict::Fail | Verdict::Error)) {
        1
    } else {
        0
    }
}

/// `lhs − rhs` as a series, for checks that need the difference itself.
pub fn difference_series(lhs: &Expr, rhs: &Expr, ctx: &EvalCtx, order: usize) -> Result<TruncatedSeries, ExprError> {
    let l = eval_expr_exact(lhs, ctx, order)?;
    let r = eval_expr_exact(rhs, ctx, order)?;
    Ok(&l.truncate(order) - &r.truncate(order))
}

#[cfg(test)]
mod tests;

use super::{ConvergenceClass, EvalDiagnostics, HypSpec, HyperError, Step};
use crate::realnum::{HighReal, Precision};

pub const DEFAULT_MAX_TERMS: usize = 20_000;

/// Richardson fit: partial sums at `N0·2^j`, `j = 0..=K`.
const RICH_N0: usize = 16;
const RICH_K: usize = 12;
const RICH_EXTRA_DIGITS: u32 = 60;

fn numeric_step(
    spec: &HypSpec<HighReal>,
    m: usize,
    prec: Precision,
) -> Result<Step<HighReal>, HyperError> {
    let w = HighReal::from_i64(m as i64, prec);
    let tol = prec.snap_tolerance();
    let mut num = HighReal::one(prec);
    for a in &spec.upper {
        let f = a + &w;
        if f.abs() <= tol {
            return Ok(Step::Terminate);
        }
        num = &num * &f;
    }
    let mut den = HighReal::from_i64(m as i64 + 1, prec);
    for b in &spec.lower {
        let f = b + &w;
        if f.abs() <= tol {
            return Err(HyperError::LowerPole(b.to_decimal_string(12)));
        }
        den = &den * &f;
    }
    Ok(Step::Ratio(&num / &den))
}

pub(crate) fn classify(
    spec: &HypSpec<HighReal>,
    z: &HighReal,
    prec: Precision,
) -> ConvergenceClass {
    if spec.upper.iter().any(|a| a.near_nonpositive_integer(prec).is_some()) {
        return ConvergenceClass::Terminating;
    }
    let (p, q) = (spec.p(), spec.q());
    if p <= q || z.is_zero() {
        return ConvergenceClass::AlwaysConverges;
    }
    if p > q + 1 {
        return ConvergenceClass::Divergent;
    }
    let gap = &z.abs() - &HighReal::one(prec);
    if gap.abs() <= prec.snap_tolerance() {
        ConvergenceClass::BoundaryConditional
    } else if gap.is_negative() {
        ConvergenceClass::UnitDisk
    } else {
        ConvergenceClass::Divergent
    }
}

/// Plain partial summation with the three-small-terms stopping rule. Each
/// term may be multiplied by `weight(m)`.
pub(crate) fn direct_sum(
    spec: &HypSpec<HighReal>,
    z: &HighReal,
    prec: Precision,
    max_terms: usize,
    weight: Option<&dyn Fn(usize) -> HighReal>,
    class: ConvergenceClass,
) -> Result<(HighReal, EvalDiagnostics), HyperError> {
    let tol = HighReal::pow10(-(prec.digits() as i64 + 5), prec);
    let mut term = HighReal::one(prec);
    let mut sum = match weight {
        Some(w) => w(0),
        None => HighReal::one(prec),
    };
    let mut last = HighReal::zero(prec);
    let mut small = 0;
    let mut m = 0usize;
    loop {
        match numeric_step(spec, m, prec)? {
            Step::Terminate => break,
            Step::Ratio(r) => term = &(&term * &r) * z,
        }
        m += 1;
        let t = match weight {
            Some(w) => &term * &w(m),
            None => term.clone(),
        };
        sum = &sum + &t;
        if t.abs() <= &tol * &sum.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        last = t;
        if m >= max_terms {
            return Err(HyperError::NoConvergence(max_terms));
        }
    }
    let est = if sum.is_zero() { last.abs() } else { &last.abs() / &sum.abs() };
    let sum = sum.check("pfq partial sum")?;
    Ok((sum, EvalDiagnostics { terms_used: m + 1, est_rel_error: est, classification: class }))
}

/// Numeric value of `pFq(z)` at precision `prec`.
///
/// On the unit circle with `p = q+1` the series converges algebraically
/// slowly; the partial sums there are extrapolated in powers of `n^-1`
/// instead of summed to the tolerance.
pub fn pfq_numeric(
    spec: &HypSpec<HighReal>,
    z: &HighReal,
    prec: Precision,
    max_terms: usize,
) -> Result<(HighReal, EvalDiagnostics), HyperError> {
    let class = classify(spec, z, prec);
    match class {
        ConvergenceClass::Divergent => Err(HyperError::Divergent),
        ConvergenceClass::BoundaryConditional => boundary_sum(spec, z, prec),
        _ => direct_sum(spec, z, prec, max_terms, None, class),
    }
}

fn param_excess(spec: &HypSpec<HighReal>, prec: Precision) -> HighReal {
    let mut s = HighReal::zero(prec);
    for b in &spec.lower {
        s = &s + b;
    }
    for a in &spec.upper {
        s = &s - a;
    }
    s
}

fn boundary_sum(
    spec: &HypSpec<HighReal>,
    z: &HighReal,
    prec: Precision,
) -> Result<(HighReal, EvalDiagnostics), HyperError> {
    let s = param_excess(spec, prec);
    let tol = prec.snap_tolerance();
    let alternating = z.is_negative();
    let ok = if alternating {
        !(&(&s + &HighReal::one(prec)) - &tol).is_negative() && (&s + &HighReal::one(prec)) > tol
    } else {
        s > tol
    };
    if !ok {
        let rule = if alternating { "> -1 at z = -1" } else { "> 0 at z = 1" };
        return Err(HyperError::BoundaryViolation(format!(
            "sum(lower) - sum(upper) = {} must be {rule}",
            s.to_decimal_string(12)
        )));
    }

    let w = prec.widened(RICH_EXTRA_DIGITS);
    let wspec = HypSpec::new(
        spec.upper.iter().map(|a| a.with_precision(w)).collect(),
        spec.lower.iter().map(|b| b.with_precision(w)).collect(),
    );
    let zw = z.with_precision(w);
    // tail of partial sums decays like n^-sigma
    let sigma = if alternating { &s.with_precision(w) + &HighReal::one(w) } else { s.with_precision(w) };

    let samples: Vec<usize> = (0..=RICH_K).map(|j| RICH_N0 << j).collect();
    let needed = *samples.last().unwrap();
    let mut partial = Vec::with_capacity(samples.len());
    let mut term = HighReal::one(w);
    let mut sum = HighReal::zero(w);
    let mut m = 0usize;
    let mut next = 0usize;
    for count in 1..=needed {
        let reps = if alternating { 2 } else { 1 };
        for _ in 0..reps {
            sum = &sum + &term;
            match numeric_step(&wspec, m, w)? {
                Step::Terminate => term = HighReal::zero(w),
                Step::Ratio(r) => term = &(&term * &r) * &zw,
            }
            m += 1;
        }
        if count == samples[next] {
            partial.push(sum.clone());
            next += 1;
        }
    }

    let fit = |rows: &[usize], ncols: usize| -> Result<HighReal, HyperError> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &i in rows {
            let n = HighReal::from_i64(samples[i] as i64, w);
            let base = n.pow(&-&sigma)?;
            let mut row = vec![HighReal::one(w)];
            let mut col = base;
            for _ in 1..ncols {
                row.push(col.clone());
                col = &col / &n;
            }
            a.push(row);
            b.push(partial[i].clone());
        }
        Ok(solve_linear(a, b)?[0].clone())
    };
    let all: Vec<usize> = (0..=RICH_K).collect();
    let best = fit(&all, RICH_K + 1)?;
    let coarse = fit(&all[1..], RICH_K)?;
    let est = &(&best - &coarse).abs() / &best.abs().max(HighReal::pow10(-(prec.digits() as i64), w));
    Ok((
        best.with_precision(prec).check("boundary extrapolation")?,
        EvalDiagnostics {
            terms_used: m,
            est_rel_error: est.with_precision(prec),
            classification: ConvergenceClass::BoundaryConditional,
        },
    ))
}

/// Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<HighReal>>, mut b: Vec<HighReal>) -> Result<Vec<HighReal>, HyperError> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        if a[col][col].is_zero() {
            return Err(HyperError::NoConvergence(0));
        }
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            #[allow(clippy::needless_range_loop)]
            for c in col..n {
                let v = &a[r][c] - &(&f * &a[col][c]);
                a[r][c] = v;
            }
            let v = &b[r] - &(&f * &b[col]);
            b[r] = v;
        }
    }
    let mut x = vec![HighReal::zero(Precision::default()); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = &acc - &(&a[r][c] * &x[c]);
        }
        x[r] = &acc / &a[r][r];
    }
    Ok(x)
}

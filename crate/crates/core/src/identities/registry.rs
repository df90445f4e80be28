use std::sync::OnceLock;

use super::expr::*;
use super::{Constraint, Derived, Dist, Identity, Kind, Mode, ParamDecl, Pred, Variant, XDomain};
use crate::exactnum::{rat, Rational};
use crate::hyper::{Convention, Tier};

/// Largest index for which `e = v+1+n` is excluded by the theorem
/// constraints; larger than any order or term count the harness uses.
pub const N_MAX: u64 = 100_000;

const BOTH: [Convention; 2] = [Convention::Naive, Convention::Limit];

fn h() -> Expr {
    q(1, 2)
}

fn uni(lo: (i64, i64), hi: (i64, i64), max_denom: i64) -> Dist {
    Dist::Uniform { lo: rat(lo.0, lo.1), hi: rat(hi.0, hi.1), max_denom }
}

fn param(name: &str, dist: Dist) -> ParamDecl {
    ParamDecl { name: name.into(), dist }
}

fn con(label: &str, pred: Pred) -> Constraint {
    Constraint { label: label.into(), pred }
}

fn nonpos(label: &str, e: Expr) -> Constraint {
    con(label, Pred::NotNonPosInt(e))
}

fn variant(name: &str, lhs: Expr, rhs: Expr, conventions: &[Convention]) -> Variant {
    Variant { name: name.into(), lhs, rhs, conventions: conventions.to_vec() }
}

fn scaled_x_pow(sign: i64) -> Expr {
    if sign < 0 {
        pow(c(-1), n()) * pow(x(), n())
    } else {
        pow(x(), n())
    }
}

// -- shared building blocks -------------------------------------------------

/// `₂F₂(a, d+2; b, d; x) = e^x{₂F₂(b−a, f+1; b+1, f; −x) + ax/((b+1)d)·₂F₂(b−a, f'+1; b+2, f'; −x)}`
/// for the rhs of the extended transformation.
fn extended_kummer_rhs() -> Expr {
    let (a, b, d) = (p("a"), p("b"), p("d"));
    exp_of(x())
        * (paired(a.clone(), b.clone(), d.clone(), d.clone(), b.clone() + c(1), c(-1), Tier::G)
            + a.clone() * x() / ((b.clone() + c(1)) * d.clone())
                * paired(a, b.clone(), d.clone(), d + c(1), b + c(2), c(-1), Tier::GPrime))
}

/// `P_g − (v+1+n)x/(e(v+2))·P_g'`, the bracket of the expansion theorems.
fn theorem_bracket() -> Expr {
    let (v, e) = (p("v"), p("e"));
    let a = v.clone() + c(1) + n();
    let pg = paired(a.clone(), v.clone() + c(1), e.clone(), e.clone(), v.clone() + c(2), c(1), Tier::G);
    let pgp = paired(a.clone(), v.clone() + c(1), e.clone(), e.clone() + c(1), v.clone() + c(3), c(1), Tier::GPrime);
    pg - a * x() / (e * (v + c(2))) * pgp
}

/// `e^{-x}Σ pre_n·(±x)^n·[bracket]`.
fn transformed_lhs(pre: Expr, sign: i64) -> Expr {
    exp_of(-x()) * sum(pre * scaled_x_pow(sign) * theorem_bracket())
}

/// `Σ pre_n·(±x)^n·₂F₂[v+1+n, e+2; v+2, e; −x]`.
fn direct_lhs(pre: Expr, sign: i64) -> Expr {
    let (v, e) = (p("v"), p("e"));
    sum(pre * scaled_x_pow(sign) * pfq(vec![v.clone() + c(1) + n(), e.clone() + c(2)], vec![v + c(2), e], c(-1), 1))
}

/// `(v+1)_n(e+2)_n/((v+2)_n(e)_n n!)`.
fn theorem_prefactor() -> Expr {
    let (v, e) = (p("v"), p("e"));
    poch(v.clone() + c(1), n()) * poch(e.clone() + c(2), n()) / (poch(v + c(2), n()) * poch(e, n()) * fact(n()))
}

/// `Σ prefactor·(−x)^n·₃F₂[−n, 1−e−n, −v−1−n; −1−e−n, b1; y]`.
fn three_f2_form(b1: Expr, y: Expr) -> Expr {
    let (v, e) = (p("v"), p("e"));
    sum(theorem_prefactor()
        * scaled_x_pow(-1)
        * pfq(
            vec![-n(), c(1) - e.clone() - n(), -v - c(1) - n()],
            vec![-c(1) - e - n(), b1],
            y,
            0,
        ))
}

/// Per-term gamma form of the `b1 = v+1` inner sums, via the first
/// contiguous summation at −1 (with the `×2^n` reading of the prefactor).
fn gamma_form_theorem1() -> Expr {
    let (v, e) = (p("v"), p("e"));
    let s = v.clone() + c(1) + n();
    let d1 = c(1) + e.clone() + n();
    let d0 = e + n();
    let t1 = c(1) - c(2) * s.clone() / d1.clone()
        + s.clone() * (n() - c(1)) / (c(2) * d1.clone() * d0.clone());
    let t2 = c(1) - n() * s / (c(2) * d1 * d0);
    let g1 = gamma_ratio(vec![h(), v.clone() + c(1)], vec![-n() / c(2), n() / c(2) + v.clone() + q(3, 2)]);
    let g2 = gamma_ratio(vec![h(), v.clone() + c(1)], vec![-n() / c(2) + h(), n() / c(2) + v + c(1)]);
    sum(theorem_prefactor() * scaled_x_pow(-1) * pow(c(2), n()) * (t1 * g1 + t2 * g2))
}

/// Gamma form of the `b1 = 2−v` inner sums, via the second contiguous
/// summation at −1, as printed.
fn gamma_form_theorem2() -> Expr {
    let (v, e) = (p("v"), p("e"));
    let s = v.clone() + c(1) + n();
    let d1 = c(1) + e.clone() + n();
    let d0 = e + n();
    let b1 = -v.clone() + (c(2) * v.clone() - c(2) - n()) * s.clone() / d1.clone()
        - (v.clone() - c(2)) * v.clone() * s / (d1.clone() * d0.clone())
        + (n() - c(1)) * (c(2) + n()) / (c(2) * d1.clone() * d0.clone());
    let b2 = c(2)
        * (-c(1) + (c(2) * v.clone() + n()) / d1.clone()
            - (v.clone() - c(1)) * (v.clone() + n()) / (c(2) * d1 * d0));
    let g1 = gamma_ratio(vec![], vec![-n() / c(2) - v.clone() / c(2), n() / c(2) - v.clone() / c(2) + q(3, 2)]);
    let g2 = gamma_ratio(vec![], vec![-n() / c(2) - v.clone() / c(2) - h(), n() / c(2) - v.clone() / c(2) + c(1)]);
    let pre = gamma_ratio(vec![h(), c(2) - v.clone()], vec![]) * rpow(c(2), v + c(1) + n())
        / ((c(2) + n()) * (n() + c(1)));
    sum(theorem_prefactor() * scaled_x_pow(-1) * pre * (b1 * g1 + b2 * g2))
}

/// Gamma form of the `b1 = μ`, `y = 1` inner sums, via the contiguous
/// summation at 1.
fn gamma_form_theorem3() -> Expr {
    let (v, e, mu) = (p("v"), p("e"), p("mu"));
    let s = v.clone() + c(1) + n();
    let d1 = c(1) + e.clone() + n();
    let d0 = e + n();
    let cab = mu.clone() + v.clone() + c(2) * n();
    let g = gamma_ratio(
        vec![mu.clone(), cab.clone()],
        vec![mu.clone() + n(), mu + v.clone() + c(1) + n()],
    );
    let brace = cab.clone() - c(2) * n() * s.clone() / d1.clone()
        + n() * s * (c(1) - n()) * (-v - n()) / (d1 * d0 * (cab - c(1)));
    sum(theorem_prefactor() * scaled_x_pow(-1) * g * brace)
}

fn theorem1_rhs() -> Expr {
    let (v, e) = (p("v"), p("e"));
    let t1 = pfq(
        vec![v.clone() / c(2) + h(), e.clone() / c(2) + c(1), e.clone() / c(2) + q(3, 2)],
        vec![v.clone() + c(1), v.clone() / c(2) + q(3, 2), e.clone() / c(2) + h(), e.clone() / c(2)],
        c(-1),
        2,
    );
    let t2 = pow(x(), c(2)) / (e.clone() * (e.clone() + c(1))) * pfq(vec![], vec![v.clone() + c(2)], c(-1), 2);
    let t3 = (e.clone() + c(2)) * x() / ((v.clone() + c(2)) * e.clone())
        * pfq(
            vec![v.clone() / c(2) + c(1), e.clone() / c(2) + c(2), e.clone() / c(2) + q(3, 2)],
            vec![v.clone() + c(2), v.clone() / c(2) + c(2), e.clone() / c(2) + h(), e.clone() / c(2) + c(1)],
            c(-1),
            2,
        );
    let t4 = c(2) * x() / e.clone() * pfq(vec![e.clone() / c(2) + q(3, 2)], vec![v.clone() + c(2), e.clone() / c(2) + h()], c(-1), 2);
    let t5 = pow(x(), c(3)) / (e.clone() * (e + c(1)) * (v.clone() + c(2))) * pfq(vec![], vec![v + c(3)], c(-1), 2);
    t1 + t2 + t3 - t4 - t5
}

/// Group prefactor `x^k·Γ(1/2)Γ(2−v)·2^{v+s}/(Γ(u1)Γ(u2))`.
fn group(shift: i64, with_x: bool, u1: Expr, u2: Expr, body: Expr) -> Expr {
    let v = p("v");
    let g = gamma_ratio(vec![h(), c(2) - v.clone()], vec![u1, u2]) * rpow(c(2), v + c(shift));
    if with_x {
        x() * g * body
    } else {
        g * body
    }
}

fn f(upper: Vec<Expr>, lower: Vec<Expr>) -> Expr {
    pfq(upper, lower, c(-1), 2)
}

fn theorem2_rhs() -> Expr {
    let (v, e) = (p("v"), p("e"));
    let v2 = || v.clone() / c(2);
    let e2 = || e.clone() / c(2);
    let vv = || v.clone();
    let ee = || e.clone();
    let group_a = -vv()
        * f(
            vec![c(1), v2() + c(1), v2() + h(), e2() + c(1), e2() + q(3, 2)],
            vec![c(2), q(3, 2), v2() + q(3, 2), e2(), e2() + h(), -v2() + q(3, 2)],
        )
        + c(2) * (vv() * vv() - c(1)) / (c(1) + ee())
            * f(
                vec![c(1), v2() + c(1), e2() + c(1), c(2) - vv()],
                vec![c(2), q(3, 2), e2(), c(1) - vv(), -v2() + q(3, 2)],
            )
        - vv() * (vv() + c(1)) * (vv() - c(2)) / (ee() * (c(1) + ee()))
            * f(vec![c(1), v2() + c(1)], vec![c(2), q(3, 2), -v2() + q(3, 2)])
        - c(1) / (ee() * (c(1) + ee()))
            * f(vec![h(), v2() + c(1), v2() + h()], vec![q(3, 2), -h(), v2() + q(3, 2), -v2() + q(3, 2)]);
    let group_b = -f(
        vec![c(1), v2() + h(), e2() + c(1), e2() + q(3, 2)],
        vec![c(2), q(3, 2), e2(), e2() + h(), -v2() + c(1)],
    ) + c(2) * vv() / (c(1) + ee())
        * f(vec![c(1), v2() + h(), e2() + c(1), vv() + c(1)], vec![c(2), q(3, 2), e2(), vv(), -v2() + c(1)])
        - vv() * (vv() - c(1)) / (ee() * (c(1) + ee()))
            * f(vec![c(1), v2() + h(), v2() + c(1)], vec![c(2), q(3, 2), v2(), -v2() + c(1)]);
    let group_c = c(2) * vv() * (vv() + c(1)) * (ee() + c(2)) / (c(3) * ee() * (vv() + c(2)))
        * f(
            vec![c(1), v2() + c(1), v2() + q(3, 2), e2() + c(2), e2() + q(3, 2)],
            vec![c(2), q(5, 2), v2() + c(2), e2() + c(1), e2() + h(), -v2() + c(2)],
        )
        - c(2) * (c(2) * vv() - c(3)) * (vv() + c(1)) / (c(3) * ee())
            * f(
                vec![c(1), v2() + q(3, 2), e2() + q(3, 2), -vv() + q(5, 2)],
                vec![c(2), q(5, 2), e2() + h(), -vv() + q(3, 2), -v2() + c(2)],
            )
        + c(2) * vv() * (vv() + c(1)) * (vv() - c(2)) / (c(3) * ee() * (c(1) + ee()))
            * f(vec![c(1), v2() + q(3, 2)], vec![c(2), q(5, 2), -v2() + c(2)])
        - c(2) * (vv() + c(3)) * (vv() + c(1)) / (c(3) * ee() * (c(1) + ee()) * (c(4) - vv() * vv()))
            * f(vec![c(2), v2() + c(2), v2() + q(5, 2)], vec![c(3), q(5, 2), v2() + c(3), -v2() + c(3)]);
    let group_d = c(2) * (vv() + c(1)) * (ee() + c(2)) / (c(3) * ee() * (vv() + c(2)))
        * f(
            vec![c(1), v2() + c(1), e2() + c(2), e2() + q(3, 2)],
            vec![c(2), q(5, 2), e2() + c(1), e2() + h(), -v2() + q(3, 2)],
        )
        - c(2) * (c(2) * vv() + c(1)) * (vv() + c(1)) / (c(3) * ee() * (vv() + c(2)))
            * f(
                vec![c(1), v2() + c(1), e2() + q(3, 2), vv() + q(3, 2)],
                vec![c(2), q(5, 2), e2() + h(), vv() + h(), -v2() + q(3, 2)],
            )
        + c(2) * pow(vv() + c(1), c(2)) * (vv() - c(1)) / (c(3) * ee() * (c(1) + ee()) * (vv() + c(2)))
            * f(vec![c(1), v2() + c(1), v2() + q(3, 2)], vec![c(2), q(5, 2), -v2() + q(3, 2), v2() + h()]);
    group(0, false, -v2() + q(3, 2), -v2(), group_a)
        + group(1, false, -v2() - h(), -v2() + c(1), group_b)
        + group(0, true, -v2() + c(2), -v2() - h(), group_c)
        + group(1, true, -v2() - c(1), -v2() + q(3, 2), group_d)
}

fn theorem3_rhs() -> Expr {
    let (v, e, mu) = (p("v"), p("e"), p("mu"));
    let m = || mu.clone() / c(2) + v.clone() / c(2);
    let t1 = pfq(
        vec![v.clone() + c(1), e.clone() + c(2), m() + c(1), m() + h()],
        vec![v.clone() + c(2), e.clone(), mu.clone(), mu.clone() + v.clone() + c(1)],
        c(-4),
        1,
    );
    let t2 = c(2) * (v.clone() + c(1)) * x() / (e.clone() * mu.clone())
        * pfq(
            vec![e.clone() + c(2), m() + c(1), m() + q(3, 2)],
            vec![e.clone() + c(1), mu.clone() + c(1), mu.clone() + v.clone() + c(2)],
            c(-4),
            1,
        );
    let t3 = (v.clone() + c(1)) * (v.clone() + c(2)) * pow(x(), c(2))
        / (e.clone() * (e + c(1)) * mu.clone() * (mu.clone() + c(1)))
        * pfq(
            vec![v.clone() + c(3), m() + c(2), m() + q(3, 2)],
            vec![v.clone() + c(2), mu.clone() + c(2), mu + v + c(3)],
            c(-4),
            1,
        );
    t1 + t2 + t3
}

// -- Laguerre special cases ---------------------------------------------------

fn laguerre_bracket() -> Expr {
    let v = p("v");
    laguerre(n(), v.clone(), x()) - x() / (v.clone() + c(2)) * laguerre(n(), v + c(1), x())
}

fn special_theorem2_rhs() -> Expr {
    let v = p("v");
    let v2 = || v.clone() / c(2);
    let vv = || v.clone();
    let group_a = -vv() * f(vec![c(1), v2() + c(2)], vec![c(2), q(3, 2), -v2() + q(3, 2)])
        + c(2) * (vv() * vv() - c(1)) / (c(2) + vv())
            * f(
                vec![c(1), v2() + c(1), v2() + q(3, 2), c(2) - vv()],
                vec![c(2), q(3, 2), v2() + h(), c(1) - vv(), -v2() + q(3, 2)],
            )
        - vv() * (vv() - c(2)) / (vv() + c(2)) * f(vec![c(1), v2() + c(1)], vec![c(2), q(3, 2), -v2() + q(3, 2)])
        - c(1) / ((vv() + c(1)) * (c(2) + vv()))
            * f(vec![h(), v2() + c(1), v2() + h()], vec![q(3, 2), -h(), v2() + q(3, 2), -v2() + q(3, 2)]);
    let group_b = -f(vec![c(1), v2() + q(3, 2), v2() + c(2)], vec![c(2), q(3, 2), v2() + c(1), -v2() + c(1)])
        + c(2) * vv() / (vv() + c(2))
            * f(vec![c(1), v2() + q(3, 2), vv() + c(1)], vec![c(2), q(3, 2), vv(), -v2() + c(1)])
        - vv() * (vv() - c(1)) / ((vv() + c(1)) * (vv() + c(2)))
            * f(vec![c(1), v2() + h(), v2() + c(1)], vec![c(2), q(3, 2), v2(), -v2() + c(1)]);
    let group_c = c(2) * vv() * (vv() + c(3)) / (c(3) * (vv() + c(2)))
        * f(vec![c(1), v2() + q(5, 2)], vec![c(2), q(5, 2), -v2() + c(2)])
        - c(2) * (c(2) * vv() - c(3)) / c(3)
            * f(
                vec![c(1), v2() + q(3, 2), v2() + c(2), -vv() + q(5, 2)],
                vec![c(2), q(5, 2), v2() + c(1), -vv() + q(3, 2), -v2() + c(2)],
            )
        + c(2) * vv() * (vv() - c(2)) / (c(3) * (vv() + c(2)))
            * f(vec![c(1), v2() + q(3, 2)], vec![c(2), q(5, 2), -v2() + c(2)])
        - c(2) * (vv() + c(3)) / (c(3) * (vv() + c(2)) * (c(4) - vv() * vv()))
            * f(vec![c(2), v2() + c(2), v2() + q(5, 2)], vec![c(3), q(5, 2), v2() + c(3), -v2() + c(3)]);
    let group_d = c(2) * (vv() + c(3)) / (c(3) * (vv() + c(2)))
        * f(vec![c(1), v2() + q(5, 2)], vec![c(2), q(5, 2), -v2() + q(3, 2)])
        - c(2) * (c(2) * vv() + c(1)) / (c(3) * (vv() + c(2)))
            * f(vec![c(1), v2() + c(2), vv() + q(3, 2)], vec![c(2), q(5, 2), vv() + h(), -v2() + q(3, 2)])
        + c(2) * (vv() + c(1)) * (vv() - c(1)) / (c(3) * pow(vv() + c(2), c(2)))
            * f(vec![c(1), v2() + c(1), v2() + q(3, 2)], vec![c(2), q(5, 2), -v2() + q(3, 2), v2() + h()]);
    group(0, false, -v2() + q(3, 2), -v2(), group_a)
        + group(1, false, -v2() - h(), -v2() + c(1), group_b)
        + group(0, true, -v2() + c(2), -v2() - h(), group_c)
        + group(1, true, -v2() - c(1), -v2() + q(3, 2), group_d)
}

fn special_theorem3_rhs() -> Expr {
    let (v, mu) = (p("v"), p("mu"));
    let m = || mu.clone() / c(2) + v.clone() / c(2);
    let t1 = pfq(
        vec![v.clone() + c(3), m() + c(1), m() + h()],
        vec![v.clone() + c(2), mu.clone(), mu.clone() + v.clone() + c(1)],
        c(-4),
        1,
    );
    let t2 = c(2) * x() / mu.clone()
        * pfq(
            vec![v.clone() + c(3), m() + c(1), m() + q(3, 2)],
            vec![v.clone() + c(2), mu.clone() + c(1), mu.clone() + v.clone() + c(2)],
            c(-4),
            1,
        );
    let t3 = pow(x(), c(2)) / (mu.clone() * (mu.clone() + c(1)))
        * pfq(
            vec![v.clone() + c(3), m() + c(2), m() + q(3, 2)],
            vec![v.clone() + c(2), mu.clone() + c(2), mu + v + c(3)],
            c(-4),
            1,
        );
    t1 + t2 + t3
}

// -- constraints shared by the theorems --------------------------------------

fn theorem_constraints() -> Vec<Constraint> {
    let (v, e) = (p("v"), p("e"));
    vec![
        nonpos("e ∉ nonpositive integers", e.clone()),
        con(
            "e−v−1 ∉ positive integers ≤ n_max",
            Pred::NotPosIntUpTo(e - v.clone() - c(1), N_MAX),
        ),
        nonpos("v+1 ∉ nonpositive integers", v.clone() + c(1)),
        nonpos("v+2 ∉ nonpositive integers", v + c(2)),
    ]
}

fn theorem_params() -> Vec<ParamDecl> {
    vec![param("v", uni((0, 1), (3, 1), 6)), param("e", uni((1, 2), (5, 1), 6))]
}

fn series_identity(id: &str, title: &str, source: &str) -> Identity {
    Identity {
        id: id.into(),
        title: title.into(),
        kind: Kind::Series,
        source: source.into(),
        params: vec![],
        derived: vec![],
        constraints: vec![],
        variants: vec![],
        modes: vec![Mode::Exact, Mode::Numeric],
        x_domain: XDomain::All,
    }
}

fn summation_identity(id: &str, title: &str, source: &str) -> Identity {
    Identity { kind: Kind::Summation, modes: vec![Mode::Summation], ..series_identity(id, title, source) }
}

fn f_derived() -> Vec<Derived> {
    let (a, b, d) = (p("a"), p("b"), p("d"));
    vec![
        Derived { name: "f".into(), expr: d.clone() * (a.clone() - b.clone()) / (a.clone() - d.clone()) },
        Derived { name: "fp".into(), expr: (d.clone() + c(1)) * (a.clone() - b) / (a - d) },
    ]
}

/// Contiguous Gauss-type closed form `Γ(1/2)Γ(lo)/2^a·{T1/(Γ(a/2)Γ(a/2−b+s)) + T2/(Γ(a/2+1/2)Γ(a/2−b+s−1/2))}`.
fn i2_rhs() -> Expr {
    let (a, b, d) = (p("a"), p("b"), p("d"));
    let t1 = c(1) - c(2) * b.clone() / d.clone()
        + b.clone() * (a.clone() + c(1)) / (c(2) * d.clone() * (d.clone() + c(1)));
    let t2 = c(1) - a.clone() * b.clone() / (c(2) * d.clone() * (d + c(1)));
    let lo = a.clone() - b.clone();
    let g1 = gamma_ratio(vec![h(), lo.clone()], vec![a.clone() / c(2), a.clone() / c(2) - b.clone() + h()]);
    let g2 = gamma_ratio(vec![h(), lo], vec![a.clone() / c(2) + h(), a.clone() / c(2) - b]);
    rpow(c(2), -a) * (t1 * g1 + t2 * g2)
}

fn i3_rhs() -> Expr {
    let (a, b, d) = (p("a"), p("b"), p("d"));
    let dd1 = d.clone() * (d.clone() + c(1));
    let t1 = c(-2) + c(2) * (c(2) * a.clone() - b.clone() + c(2)) / d.clone()
        - c(2) * (a.clone() - b.clone() + c(2)) * (a.clone() + c(1)) / dd1.clone();
    let t2 = (a.clone() - b.clone() + c(1))
        + a.clone() * (c(-2) * a.clone() + c(3) * b.clone() - c(4)) / d
        + a.clone()
            * (c(2) * (a.clone() - b.clone() + c(3)) * (a.clone() - b.clone() + c(1)) - (b.clone() + c(1)) * (b.clone() - c(2)))
            / (c(2) * dd1);
    let lo = c(3) + a.clone() - b.clone();
    let g1 = gamma_ratio(vec![h(), lo.clone()], vec![a.clone() / c(2), a.clone() / c(2) - b.clone() + q(3, 2)]);
    let g2 = gamma_ratio(vec![h(), lo], vec![a.clone() / c(2) + h(), a.clone() / c(2) - b.clone() + c(2)]);
    rpow(c(2), -a) / ((c(1) - b.clone()) * (c(2) - b)) * (t1 * g1 + t2 * g2)
}

fn i4_rhs() -> Expr {
    let (a, b, cc, d) = (p("a"), p("b"), p("c"), p("d"));
    let cab = cc.clone() - a.clone() - b.clone();
    let g = gamma_ratio(
        vec![cc.clone() + c(1), cab.clone()],
        vec![cc.clone() - a.clone() + c(1), cc - b.clone() + c(1)],
    );
    let brace = cab.clone()
        + c(2) * a.clone() * b.clone() / d.clone()
        + a.clone() * b.clone() * (a + c(1)) * (b + c(1)) / (d.clone() * (d + c(1)) * (cab - c(1)));
    g * brace
}

fn a_mixture() -> Dist {
    Dist::Mixture(vec![uni((-4, 1), (4, 1), 6), Dist::Integers { lo: -6, hi: 0 }])
}

pub fn build_registry() -> Vec<Identity> {
    let (a, b, d, e, v) = (p("a"), p("b"), p("d"), p("e"), p("v"));
    let mut out = Vec::new();

    // I1
    let mut i = series_identity("I1", "Kummer-type transformation with one paired parameter", "Kummer-type transformation of 2F2(a, d+1; b+1, d; x)");
    i.params = vec![param("a", uni((-4, 1), (4, 1), 6)), param("b", uni((-4, 1), (4, 1), 6)), param("d", uni((-4, 1), (4, 1), 6))];
    i.derived = vec![f_derived().remove(0)];
    i.constraints = vec![
        con("a ≠ d", Pred::NotEqual(a.clone(), d.clone())),
        nonpos("b+1 ∉ nonpositive integers", b.clone() + c(1)),
        nonpos("d ∉ nonpositive integers", d.clone()),
        nonpos("f ∉ nonpositive integers", p("f")),
    ];
    i.variants = vec![variant(
        "as-printed",
        exp_of(-x()) * pfq(vec![a.clone(), d.clone() + c(1)], vec![b.clone() + c(1), d.clone()], c(1), 1),
        paired(a.clone(), b.clone(), d.clone(), d.clone(), b.clone() + c(1), c(-1), Tier::G),
        &[],
    )];
    out.push(i);

    // I2
    let mut i = summation_identity("I2", "Contiguous 3F2 summation at -1 with lower parameter a-b", "first contiguous 3F2(-1) summation");
    i.params = vec![param("a", a_mixture()), param("b", uni((-3, 1), (-3, 5), 6)), param("d", uni((1, 2), (5, 1), 6))];
    i.constraints = vec![
        nonpos("d ∉ nonpositive integers", d.clone()),
        nonpos("a−b ∉ nonpositive integers", a.clone() - b.clone()),
        con(
            "a ∈ nonpositive integers or b < −1/2",
            Pred::Any(vec![Pred::IsNonPosInt(a.clone()), Pred::Greater(-c(2) * b.clone() - c(1), Rational::from_integer(0.into()))]),
        ),
    ];
    i.variants = vec![
        variant("as-printed", pfq(vec![a.clone(), b.clone(), d.clone() + c(2)], vec![a.clone() - b.clone(), d.clone()], c(-1), 0), i2_rhs(), &[]),
        variant(
            "corrected-candidate",
            pfq(vec![a.clone(), b.clone(), d.clone() + c(2)], vec![c(1) + a.clone() - b.clone(), d.clone()], c(-1), 0),
            i2_rhs(),
            &[],
        ),
    ];
    out.push(i);

    // I3
    let mut i = summation_identity("I3", "Contiguous 3F2 summation at -1 with lower parameter 3+a-b", "second contiguous 3F2(-1) summation");
    i.params = vec![param("a", a_mixture()), param("b", uni((-3, 1), (9, 10), 6)), param("d", uni((1, 2), (5, 1), 6))];
    i.constraints = vec![
        nonpos("d ∉ nonpositive integers", d.clone()),
        nonpos("3+a−b ∉ nonpositive integers", c(3) + a.clone() - b.clone()),
        con("b ≠ 1", Pred::NotEqual(b.clone(), c(1))),
        con("b ≠ 2", Pred::NotEqual(b.clone(), c(2))),
        con(
            "a ∈ nonpositive integers or b < 1",
            Pred::Any(vec![Pred::IsNonPosInt(a.clone()), Pred::Greater(c(1) - b.clone(), Rational::from_integer(0.into()))]),
        ),
    ];
    i.variants = vec![variant(
        "as-printed",
        pfq(vec![a.clone(), b.clone(), d.clone() + c(2)], vec![c(3) + a.clone() - b.clone(), d.clone()], c(-1), 0),
        i3_rhs(),
        &[],
    )];
    out.push(i);

    // I4
    let cc = p("c");
    let mut i = summation_identity("I4", "Contiguous 3F2 summation at 1", "contiguous Gauss-type 3F2(1) summation");
    i.params = vec![
        param("a", Dist::Mixture(vec![uni((-2, 1), (2, 1), 6), Dist::Integers { lo: -5, hi: 0 }])),
        param("b", uni((-2, 1), (2, 1), 6)),
        param("c", uni((3, 1), (7, 1), 6)),
        param("d", uni((1, 2), (5, 1), 6)),
    ];
    let cab = cc.clone() - a.clone() - b.clone();
    i.constraints = vec![
        nonpos("d ∉ nonpositive integers", d.clone()),
        nonpos("c+1 ∉ nonpositive integers", cc.clone() + c(1)),
        nonpos("c−a−b ∉ nonpositive integers", cab.clone()),
        con("c−a−b−1 ≠ 0", Pred::NotEqual(cab.clone() - c(1), c(0))),
        con(
            "a ∈ nonpositive integers or c−a−b−1 > 0",
            Pred::Any(vec![Pred::IsNonPosInt(a.clone()), Pred::Greater(cab - c(1), Rational::from_integer(0.into()))]),
        ),
    ];
    i.variants = vec![variant(
        "as-printed",
        pfq(vec![a.clone(), b.clone(), d.clone() + c(2)], vec![cc + c(1), d.clone()], c(1), 0),
        i4_rhs(),
        &[],
    )];
    out.push(i);

    // I5
    let mut i = series_identity("I5", "Kummer-type transformation with parameters d+2 over d", "extended Kummer-type transformation of 2F2(a, d+2; b, d; x)");
    i.params = vec![param("a", uni((-4, 1), (4, 1), 6)), param("b", uni((-4, 1), (4, 1), 6)), param("d", uni((-4, 1), (4, 1), 6))];
    i.derived = f_derived();
    i.constraints = vec![
        con("a ≠ d", Pred::NotEqual(a.clone(), d.clone())),
        nonpos("b ∉ nonpositive integers", b.clone()),
        nonpos("d ∉ nonpositive integers", d.clone()),
        nonpos("f ∉ nonpositive integers", p("f")),
    ];
    i.variants = vec![
        variant("as-printed", pfq(vec![a.clone(), d.clone() + c(2)], vec![b.clone(), d.clone()], c(1), 1), extended_kummer_rhs(), &[]),
        variant("corrected", pfq(vec![a.clone(), d.clone() + c(2)], vec![b.clone() + c(1), d.clone()], c(1), 1), extended_kummer_rhs(), &[]),
    ];
    out.push(i);

    // I6 and I7 share the direct lhs
    let (b1, ff, y) = (p("b1"), p("f"), p("y"));
    let i6_lhs = sum(poch(d.clone(), n()) * pow(y.clone(), n()) * pow(x(), n()) / (poch(b1.clone(), n()) * fact(n()))
        * pfq(vec![d.clone() + n(), e.clone() + c(2)], vec![ff.clone() + c(1), e.clone()], c(1), 1));
    let six_params = |f_dist: Dist| {
        vec![
            param("b1", uni((1, 2), (4, 1), 6)),
            param("d", uni((-3, 1), (3, 1), 6)),
            param("e", uni((1, 2), (4, 1), 6)),
            param("f", f_dist),
            param("y", uni((-2, 1), (2, 1), 6)),
        ]
    };
    let six_constraints = || {
        vec![
            nonpos("b1 ∉ nonpositive integers", b1.clone()),
            nonpos("e ∉ nonpositive integers", e.clone()),
            nonpos("f+1 ∉ nonpositive integers", ff.clone() + c(1)),
        ]
    };

    let mut i = series_identity("I6", "Expansion of a 2F2 series in terms of terminating 3F2 sums", "series rearrangement with p = 0, q = 1");
    i.params = six_params(uni((-3, 1), (3, 1), 6));
    i.constraints = six_constraints();
    i.variants = vec![variant(
        "as-printed",
        i6_lhs.clone(),
        sum(poch(d.clone(), n()) * poch(e.clone() + c(2), n()) * pow(x(), n())
            / (poch(ff.clone() + c(1), n()) * poch(e.clone(), n()) * fact(n()))
            * pfq(
                vec![-n(), c(1) - e.clone() - n(), -ff.clone() - n()],
                vec![-c(1) - e.clone() - n(), b1.clone()],
                y.clone(),
                0,
            )),
        &[],
    )];
    out.push(i);

    let mut i = series_identity("I7", "Transformed form of the 2F2 expansion", "extended Kummer transformation applied termwise");
    i.params = six_params(Dist::Offset { base: "d".into(), lo: 0, hi: 2 });
    i.constraints = six_constraints();
    i.constraints.push(nonpos("e−d ∉ nonnegative integers", d.clone() - e.clone()));
    let an = d.clone() + n();
    let i7_rhs = exp_of(x())
        * sum(poch(d.clone(), n()) * pow(y.clone(), n()) * pow(x(), n()) / (poch(b1.clone(), n()) * fact(n()))
            * (paired(an.clone(), ff.clone(), e.clone(), e.clone(), ff.clone() + c(1), c(-1), Tier::G)
                + an.clone() * x() / (e.clone() * (ff.clone() + c(1)))
                    * paired(an, ff.clone(), e.clone(), e.clone() + c(1), ff.clone() + c(2), c(-1), Tier::GPrime)));
    i.variants = vec![variant("as-printed", i6_lhs, i7_rhs, &BOTH)];
    out.push(i);

    // I8
    let mut i = series_identity("I8", "Expansion in terminating 3F2(-1) sums with b1 = v+1", "case p = 0, q = 1 with b1 = v+1, y = -1");
    i.params = theorem_params();
    i.constraints = theorem_constraints();
    let one_over_fact = c(1) / fact(n());
    i.variants = vec![
        variant("transformed", transformed_lhs(one_over_fact.clone(), 1), three_f2_form(v.clone() + c(1), c(-1)), &BOTH),
        variant("direct", direct_lhs(one_over_fact.clone(), 1), three_f2_form(v.clone() + c(1), c(-1)), &[]),
    ];
    out.push(i);

    // I9
    let mut i = series_identity("I9", "Gamma form of the terminating 3F2(-1) sums", "first contiguous summation applied to each inner sum");
    i.params = theorem_params();
    i.constraints = theorem_constraints();
    i.variants = vec![variant("as-printed", three_f2_form(v.clone() + c(1), c(-1)), gamma_form_theorem1(), &[])];
    out.push(i);

    // I10
    let mut i = series_identity("I10", "First expansion theorem with paired 2F2 functions", "first expansion theorem, g = en/(v+1+n-e)");
    i.params = theorem_params();
    i.constraints = theorem_constraints();
    i.variants = vec![variant("as-printed", transformed_lhs(one_over_fact.clone(), 1), theorem1_rhs(), &BOTH)];
    out.push(i);

    // I11
    let mut i = series_identity("I11", "Second expansion theorem with gamma prefactors", "second expansion theorem, second contiguous summation");
    i.params = vec![param("v", uni((1, 5), (9, 5), 6)), param("e", uni((1, 2), (5, 1), 6))];
    i.constraints = theorem_constraints();
    i.constraints.push(con("2v ∉ integers", Pred::NotInteger(c(2) * v.clone())));
    i.modes = vec![Mode::Numeric];
    i.variants = vec![
        variant(
            "statement",
            transformed_lhs(poch(v.clone() + c(1), n()) / (poch(c(2) - v.clone(), n()) * fact(n())), 1),
            theorem2_rhs(),
            &BOTH,
        ),
        variant(
            "proof",
            transformed_lhs(poch(c(1) - v.clone(), n()) / (poch(c(2) - v.clone(), n()) * fact(n())), 1),
            theorem2_rhs(),
            &BOTH,
        ),
    ];
    out.push(i);

    // I12
    let mu = p("mu");
    let mut i = series_identity("I12", "Third expansion theorem in gamma-free form", "third expansion theorem, contiguous summation at 1");
    i.params = vec![param("v", uni((0, 1), (3, 1), 6)), param("e", uni((1, 2), (5, 1), 6)), param("mu", uni((1, 2), (4, 1), 6))];
    i.constraints = theorem_constraints();
    i.constraints.extend([
        nonpos("μ ∉ nonpositive integers", mu.clone()),
        nonpos("μ+v+1 ∉ nonpositive integers", mu.clone() + v.clone() + c(1)),
        nonpos("μ+v−1 ∉ nonpositive integers", mu.clone() + v.clone() - c(1)),
    ]);
    i.variants = vec![variant(
        "as-printed",
        transformed_lhs(poch(v.clone() + c(1), n()) / (poch(mu.clone(), n()) * fact(n())), -1),
        theorem3_rhs(),
        &BOTH,
    )];
    out.push(i);

    // I13
    let mut i = series_identity("I13", "Laguerre series with Bessel closed form", "first theorem at e = v+1");
    i.params = vec![param("v", uni((-1, 2), (3, 1), 6))];
    i.constraints = vec![con("v+1 > 0", Pred::Greater(v.clone() + c(1), Rational::from_integer(0.into())))];
    i.modes = vec![Mode::Numeric];
    i.x_domain = XDomain::Positive;
    i.variants = vec![variant(
        "as-printed",
        exp_of(-x()) * sum(pow(x(), n()) / poch(c(1) + v.clone(), n()) * laguerre(n(), v.clone() + c(1), x())),
        gamma_of(v.clone() + c(1))
            * rpow(x(), -v.clone() - c(1))
            * ((x() + v.clone() + c(1)) * bessel_j(v.clone() + c(1), c(2) * x()) - x() * bessel_j(v.clone() + c(2), c(2) * x())),
        &[],
    )];
    out.push(i);

    // I14
    let mut i = series_identity("I14", "Known Laguerre series with Bessel closed form", "known Laguerre expansion recovered from the first theorem");
    i.params = vec![param("v", uni((1, 2), (3, 1), 6))];
    i.constraints = vec![con("v > 0", Pred::Greater(v.clone(), Rational::from_integer(0.into())))];
    i.modes = vec![Mode::Numeric];
    i.x_domain = XDomain::Positive;
    let i14_lhs = exp_of(-x()) * sum(pow(x(), n()) / poch(v.clone(), n()) * laguerre(n(), v.clone(), x()));
    let i14_pre = gamma_of(v.clone()) * rpow(x(), c(1) - v.clone());
    i.variants = vec![
        variant(
            "as-printed",
            i14_lhs.clone(),
            i14_pre.clone() * (bessel_j(v.clone() - c(1), c(2) * x()) + x() * bessel_j(v.clone(), c(2) * x())),
            &[],
        ),
        variant(
            "corrected",
            i14_lhs,
            i14_pre * (bessel_j(v.clone() - c(1), c(2) * x()) + bessel_j(v.clone(), c(2) * x())),
            &[],
        ),
    ];
    out.push(i);

    // I15
    let mut i = series_identity("I15", "Two-Laguerre series from the second theorem", "second theorem at e = v+1");
    i.params = vec![param("v", uni((1, 5), (9, 5), 6))];
    i.constraints = vec![
        con("2v ∉ integers", Pred::NotInteger(c(2) * v.clone())),
        nonpos("v+1 ∉ nonpositive integers", v.clone() + c(1)),
    ];
    i.modes = vec![Mode::Numeric];
    i.variants = vec![variant(
        "as-printed",
        exp_of(-x()) * sum(pow(x(), n()) / poch(c(2) - v.clone(), n()) * laguerre_bracket()),
        special_theorem2_rhs(),
        &[],
    )];
    out.push(i);

    // I16
    let mut i = series_identity("I16", "Two-Laguerre series from the third theorem", "third theorem at e = v+1");
    i.params = vec![param("v", uni((0, 1), (3, 1), 6)), param("mu", uni((1, 2), (4, 1), 6))];
    i.constraints = vec![
        nonpos("v+1 ∉ nonpositive integers", v.clone() + c(1)),
        nonpos("μ ∉ nonpositive integers", mu.clone()),
        nonpos("μ+v+1 ∉ nonpositive integers", mu.clone() + v.clone() + c(1)),
    ];
    i.variants = vec![variant(
        "as-printed",
        exp_of(-x()) * sum(pow(c(-1), n()) * pow(x(), n()) / poch(mu.clone(), n()) * laguerre_bracket()),
        special_theorem3_rhs(),
        &[],
    )];
    out.push(i);

    out
}

/// The shared registry, checked for symbol closure on first use.
pub fn registry() -> &'static [Identity] {
    static REG: OnceLock<Vec<Identity>> = OnceLock::new();
    REG.get_or_init(|| {
        let reg = build_registry();
        for i in &reg {
            if let Err(msg) = i.check_closure() {
                panic!("registry is not closed over its symbols: {msg}");
            }
        }
        reg
    })
}

/// One checkpoint of a theorem's proof.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub mode: Mode,
    /// Whether either side contains a removable paired function.
    pub uses_convention: bool,
}

fn link(name: &str, lhs: Expr, rhs: Expr, mode: Mode, uses_convention: bool) -> ChainLink {
    ChainLink { name: name.into(), lhs, rhs, mode, uses_convention }
}

/// Proof checkpoints for I10, I11 and I12, in proof order.
pub fn chain_links(id: &str) -> Option<Vec<ChainLink>> {
    let v = p("v");
    Some(match id {
        "I10" => {
            let pre = c(1) / fact(n());
            vec![
                link("direct~transformed", direct_lhs(pre.clone(), 1), transformed_lhs(pre.clone(), 1), Mode::Exact, true),
                link("direct~3F2-form", direct_lhs(pre, 1), three_f2_form(v.clone() + c(1), c(-1)), Mode::Exact, false),
                link("3F2-form~gamma-form", three_f2_form(v + c(1), c(-1)), gamma_form_theorem1(), Mode::Exact, false),
                link("gamma-form~theorem-rhs", gamma_form_theorem1(), theorem1_rhs(), Mode::Exact, false),
            ]
        }
        "I11" => {
            let pre = poch(v.clone() + c(1), n()) / (poch(c(2) - v.clone(), n()) * fact(n()));
            let form = three_f2_form(c(2) - v.clone(), c(-1));
            vec![
                link("direct~transformed", direct_lhs(pre.clone(), 1), transformed_lhs(pre.clone(), 1), Mode::Exact, true),
                link("direct~3F2-form", direct_lhs(pre, 1), form.clone(), Mode::Exact, false),
                link("3F2-form~gamma-form", form, gamma_form_theorem2(), Mode::Numeric, false),
                link("gamma-form~theorem-rhs", gamma_form_theorem2(), theorem2_rhs(), Mode::Numeric, false),
            ]
        }
        "I12" => {
            let mu = p("mu");
            let pre = poch(v.clone() + c(1), n()) / (poch(mu.clone(), n()) * fact(n()));
            let form = three_f2_form(mu, c(1));
            vec![
                link("direct~transformed", direct_lhs(pre.clone(), -1), transformed_lhs(pre.clone(), -1), Mode::Exact, true),
                link("direct~3F2-form", direct_lhs(pre, -1), form.clone(), Mode::Exact, false),
                link("3F2-form~gamma-form", form, gamma_form_theorem3(), Mode::Exact, false),
                link("gamma-form~theorem-rhs", gamma_form_theorem3(), theorem3_rhs(), Mode::Exact, false),
            ]
        }
        _ => return None,
    })
}

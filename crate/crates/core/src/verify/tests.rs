use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::*;
use crate::exactnum::rat_int;
use crate::identities::expr::{c, p};

fn binds(pairs: &[(&str, Rational)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn ident(id: &str) -> &'static Identity {
    find_identity(id).unwrap()
}

fn exact_detail(r: &Report) -> (Option<usize>, Option<Rational>, Option<Rational>) {
    match &r.detail {
        Detail::Exact { first_bad_order, lhs_coeff, rhs_coeff, .. } => (*first_bad_order, lhs_coeff.clone(), rhs_coeff.clone()),
        d => panic!("not an exact detail: {d:?}"),
    }
}

/// Reference SplitMix64 stepping with the published constants.
fn splitmix_reference(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[test]
fn generator_is_standard_splitmix() {
    for seed in [0u64, 1, 7, 42, u64::MAX] {
        let mut ours = SplitMix64::seed_from_u64(seed);
        let mut state = seed;
        for _ in 0..16 {
            assert_eq!(ours.next_u64(), splitmix_reference(&mut state));
        }
    }
}

#[test]
fn sampler_examples() {
    let i1 = ident("I1");
    let five = sample_bindings(i1, 42, 5);
    assert_eq!(five.len(), 5);
    for b in &five {
        let b = b.as_ref().unwrap();
        assert!(i1.resolve(b).is_ok());
        assert_ne!(b["a"], b["d"]);
    }
    assert_eq!(sample_bindings(i1, 42, 5), five);
    assert_ne!(sample_bindings(i1, 43, 5), five);
}

#[test]
fn sampler_respects_distributions() {
    let i7 = ident("I7");
    for b in sample_bindings(i7, 3, 20) {
        let b = b.unwrap();
        let k = &b["f"] - &b["d"];
        assert!(k.is_integer() && k >= rat_int(0) && k <= rat_int(2));
        assert!(b["e"].denom() <= &6.into());
    }
}

#[test]
fn sampler_reports_exhaustion() {
    let mut i = ident("I1").clone();
    i.constraints.push(crate::identities::Constraint {
        label: "never".into(),
        pred: crate::identities::Pred::NotEqual(p("a"), p("a")),
    });
    let out = sample_bindings(&i, 1, 2);
    assert_eq!(out, vec![Err(SamplerExhausted { retries: MAX_RETRIES }); 2]);
}

#[test]
fn exact_examples() {
    let r = verify_exact(ident("I1"), "as-printed", &binds(&[("a", rat(1, 1)), ("b", rat(2, 1)), ("d", rat(3, 1))]), None, 40)
        .unwrap();
    assert_eq!(r.verdict, Verdict::Pass);

    let b = binds(&[("a", rat(3, 1)), ("b", rat(2, 1)), ("d", rat(5, 1))]);
    let r = verify_exact(ident("I5"), "as-printed", &b, None, 8).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert_eq!(exact_detail(&r), (Some(1), Some(rat(21, 10)), Some(rat(7, 5))));
    let r = verify_exact(ident("I5"), "corrected", &b, None, 8).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn theorem_naive_fails_at_order_one() {
    // generic (v, e): lhs −(v+1)/(e(v+2)), rhs (e−2v−2)/(e(v+2))
    let (v, e) = (rat(1, 1), rat(5, 2));
    let b = binds(&[("v", v.clone()), ("e", e.clone())]);
    let r = verify_exact(ident("I10"), "as-printed", &b, Some(Convention::Naive), 8).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let den = &e * (&v + rat(2, 1));
    let lhs = -(&v + rat(1, 1)) / &den;
    let rhs = (&e - rat(2, 1) * &v - rat(2, 1)) / &den;
    assert_eq!(exact_detail(&r), (Some(1), Some(lhs), Some(rhs)));

    // e − v − 1 = 1 makes g singular at n = 1, so this binding is excluded
    let b = binds(&[("v", v), ("e", rat(3, 1))]);
    let r = verify_exact(ident("I10"), "as-printed", &b, Some(Convention::Naive), 8).unwrap();
    assert_eq!(r.verdict, Verdict::Skip);
    match r.detail {
        Detail::Skip { reason } => assert!(reason.contains("e−v−1"), "{reason}"),
        d => panic!("{d:?}"),
    }
}

#[test]
fn chain_reports_every_link() {
    let b = binds(&[("v", rat(1, 1)), ("e", rat(5, 2))]);
    let s = Settings { order: 8, ..Settings::default() };
    let limit = verify_chain("I10", &b, Convention::Limit, &s).unwrap();
    assert_eq!(limit.len(), 4);
    assert!(limit.iter().all(|r| r.variant.starts_with(CHAIN_PREFIX)));
    assert_eq!(limit[1].variant, "chain:direct~3F2-form");
    assert_eq!(limit[1].verdict, Verdict::Pass);
    assert_eq!(limit[0].convention, Some(Convention::Limit));
    assert_eq!(limit[1].convention, None);

    let naive = verify_chain("I10", &b, Convention::Naive, &s).unwrap();
    assert_eq!(naive[0].verdict, Verdict::Fail);
    assert_eq!(exact_detail(&naive[0]).0, Some(1));
    assert_eq!(verify_chain("I1", &b, Convention::Naive, &s), Err(VerifyError::NoChain("I1".into())));
}

#[test]
fn numeric_examples() {
    let b = binds(&[("v", rat(1, 1))]);
    let s = Settings { grid: vec![rat(1, 1)], ..Settings::default() };
    for variant in ["as-printed", "corrected"] {
        let r = verify_numeric(ident("I14"), variant, &b, None, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{variant} {:?}", r.detail);
    }
    let s = Settings { grid: vec![rat(0, 1)], ..Settings::default() };
    let r = verify_numeric(ident("I14"), "corrected", &b, None, &s).unwrap();
    assert_eq!(r.verdict, Verdict::Skip);
    assert!(matches!(&r.detail, Detail::Skip { reason } if reason.contains("x > 0")));
}

#[test]
fn numeric_failure_names_worst_point() {
    let b = binds(&[("v", rat(1, 1))]);
    let s = Settings { grid: vec![rat(1, 4), rat(1, 1), rat(2, 1)], ..Settings::default() };
    let r = verify_numeric(ident("I14"), "as-printed", &b, None, &s).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    match r.detail {
        Detail::Numeric { worst_point, max_rel_error, .. } => {
            // mpmath: relative gaps 0.15388790950137 at x = 1/4, 0.12478982889033 at x = 2
            assert_eq!(worst_point, rat(1, 4));
            assert!((max_rel_error.to_f64() - 0.15388790950137).abs() < 1e-12);
        }
        d => panic!("{d:?}"),
    }
}

#[test]
fn summation_examples() {
    let s = Settings::default();
    let b = binds(&[("a", rat(-1, 1)), ("b", rat(1, 3)), ("c", rat(2, 1)), ("d", rat(5, 1))]);
    let r = verify_summation(ident("I4"), "as-printed", &b, &s).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(
        r.detail,
        Detail::Summation {
            lhs_value: Value::Exact(rat(38, 45)),
            rhs_value: Value::Exact(rat(38, 45)),
            rel_error: Value::Exact(rat(0, 1))
        }
    );

    let s = Settings { tolerance: parse_rational("1e-25").unwrap(), ..Settings::default() };
    let b = binds(&[("a", rat(1, 2)), ("b", rat(1, 2)), ("c", rat(3, 1)), ("d", rat(2, 1))]);
    let r = verify_summation(ident("I4"), "as-printed", &b, &s).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.detail);
    match r.detail {
        // 6(2 + 1/4 + 3/32)/Γ(7/2)² with Γ(7/2) = 15√π/8 reduces to 4/π
        Detail::Summation { rhs_value: Value::Real(v), .. } => {
            assert!((v.to_f64() - 4.0 / std::f64::consts::PI).abs() < 1e-12)
        }
        d => panic!("{d:?}"),
    }
}

#[test]
fn boundary_violation_skips() {
    // 3F2(1,1,1; 1,1; −1) has Σlower − Σupper = −1
    let one = || c(1);
    let lhs = crate::identities::expr::pfq(vec![one(), one(), one()], vec![one(), one()], c(-1), 0);
    let b = Bindings::new();
    let ctx = EvalCtx::new(&b, Convention::Naive);
    let (v, d) = compare_summation(&lhs, &c(0), &ctx, &Settings::default());
    assert_eq!(v, Verdict::Skip);
    assert!(matches!(d, Detail::Skip { reason } if reason.starts_with("BoundaryViolation")));
}

#[test]
fn skip_and_error_are_distinct() {
    let i1 = ident("I1");
    let same = binds(&[("a", rat(2, 1)), ("b", rat(1, 1)), ("d", rat(2, 1))]);
    let r = verify_exact(i1, "as-printed", &same, None, 4).unwrap();
    assert_eq!(r.verdict, Verdict::Skip);
    assert_eq!(r.detail, Detail::Skip { reason: "constraint violated: a ≠ d".into() });

    let missing = binds(&[("a", rat(2, 1))]);
    let r = verify_exact(i1, "as-printed", &missing, None, 4).unwrap();
    assert_eq!(r.verdict, Verdict::Error);

    let mut broken = i1.clone();
    broken.variants[0].lhs = c(1) / (p("a") - p("a"));
    let ok = binds(&[("a", rat(1, 1)), ("b", rat(2, 1)), ("d", rat(3, 1))]);
    let r = verify_exact(&broken, "as-printed", &ok, None, 4).unwrap();
    assert_eq!(r.verdict, Verdict::Error);
    assert!(matches!(&r.detail, Detail::Error { error, .. } if error == "DivisionByZero"));
}

#[test]
fn request_errors() {
    let b = Bindings::new();
    assert_eq!(
        verify_exact(ident("I14"), "corrected", &b, None, 4),
        Err(VerifyError::UnsupportedMode { id: "I14".into(), mode: "exact" })
    );
    assert!(matches!(verify_exact(ident("I1"), "nope", &b, None, 4), Err(VerifyError::UnknownVariant { .. })));
    assert_eq!(find_identity("I99"), Err(VerifyError::UnknownIdentity("I99".into())));
    let sel = Selection { ids: vec!["I14".into()], mode: Some(Mode::Exact), trials: 1, ..Selection::default() };
    assert!(matches!(plan(&sel), Err(VerifyError::UnsupportedMode { .. })));
}

#[test]
fn planned_runs_are_ordered_and_repeatable() {
    let sel = Selection {
        ids: vec!["I5".into(), "I1".into()],
        mode: Some(Mode::Exact),
        seed: 9,
        trials: 3,
        ..Selection::default()
    };
    let s = Settings { order: 10, ..Settings::default() };
    let tasks = plan(&sel).unwrap();
    assert_eq!(tasks.len(), 3 + 2 * 3);
    let a = run_tasks(&tasks, &s, false);
    let b = run_tasks(&tasks, &s, false);
    assert_eq!(a, b);
    let order: Vec<_> = a.iter().map(|r| (r.id.as_str(), r.variant.as_str(), r.binding_index)).collect();
    assert_eq!(order[0], ("I1", "as-printed", 0));
    assert_eq!(order[3], ("I5", "as-printed", 0));
    assert_eq!(order[8], ("I5", "corrected", 2));
    assert!(a.iter().all(|r| r.seed == Some(9) && r.runtime_ms.is_none()));
    // the as-printed extension fails, so the run fails
    assert_eq!(exit_code(&a), 1);
    assert_eq!(exit_code(&a[..3]), 0);
    assert_eq!(exit_code(&[]), 0);
}

#[test]
fn chains_expand_per_convention() {
    let sel = Selection { ids: vec!["I10".into()], chains: true, trials: 1, seed: 2, ..Selection::default() };
    let tasks = plan(&sel).unwrap();
    // as-printed: 2 modes × 2 conventions; chain: link 1 twice, links 2..4 once
    assert_eq!(tasks.len(), 4 + 5);
}

fn synthetic(verdicts: &[Verdict]) -> Vec<Report> {
    verdicts
        .iter()
        .map(|&v| Report {
            id: "I1".into(),
            variant: "as-printed".into(),
            convention: None,
            mode: Mode::Exact,
            binding_index: 0,
            bindings: Bindings::new(),
            seed: None,
            verdict: v,
            detail: Detail::Skip { reason: String::new() },
            runtime_ms: None,
        })
        .collect()
}

fn small_x() -> impl Strategy<Value = Rational> {
    (1i64..50, 101i64..400).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exit_code_contract(vs in proptest::collection::vec(0u8..4, 0..12)) {
        let verdicts: Vec<Verdict> = vs.iter().map(|k| [Verdict::Pass, Verdict::Fail, Verdict::Skip, Verdict::Error][*k as usize]).collect();
        let bad = verdicts.iter().any(|v| matches!(v, Verdict::Fail | Verdict::Error));
        prop_assert_eq!(exit_code(&synthetic(&verdicts)), if bad { 1 } else { 0 });
    }

    #[test]
    fn sampled_bindings_are_admissible_and_repeatable(seed in any::<u64>()) {
        for id in ["I1", "I5", "I10", "I12"] {
            let i = ident(id);
            let a = sample_bindings(i, seed, 4);
            prop_assert_eq!(&a, &sample_bindings(i, seed, 4));
            for b in a {
                prop_assert!(i.resolve(&b.unwrap()).is_ok());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn exact_pass_is_sound(seed in any::<u64>(), xs in proptest::collection::vec(small_x(), 3)) {
        let i = ident("I1");
        let base = sample_bindings(i, seed, 1).remove(0).unwrap();
        let b = i.resolve(&base).unwrap();
        let v = &i.variants[0];
        let ctx = EvalCtx::new(&b, Convention::Naive);
        let (verdict, _) = compare_exact(&v.lhs, &v.rhs, &ctx, 12);
        prop_assert_eq!(verdict, Verdict::Pass);
        let diff = difference_series(&v.lhs, &v.rhs, &ctx, 12).unwrap();
        for x in &xs {
            prop_assert!(diff.eval(x).is_zero());
        }
    }

    #[test]
    fn failures_are_localized_minimally(seed in any::<u64>()) {
        for (id, variant, conv) in [("I5", "as-printed", None), ("I10", "as-printed", Some(Convention::Naive))] {
            let i = ident(id);
            let base = sample_bindings(i, seed, 1).remove(0).unwrap();
            let r = verify_exact(i, variant, &base, conv, 6).unwrap();
            if let (Some(k), _, _) = exact_detail(&r) {
                prop_assert_eq!(r.verdict, Verdict::Fail);
                if k > 0 {
                    let again = verify_exact(i, variant, &base, conv, k - 1).unwrap();
                    prop_assert_eq!(again.verdict, Verdict::Pass);
                }
            }
        }
    }
}

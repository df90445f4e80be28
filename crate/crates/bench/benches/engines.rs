use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hypverify::exactnum::{gamma_ratio_exact, rat, rat_int};
use hypverify::hyper::{pfq_numeric, pfq_series_exact, Convention, HypSpec, DEFAULT_MAX_TERMS};
use hypverify::realnum::{gamma, HighReal, Precision};
use hypverify::verify::{find_identity, verify_exact, verify_numeric, verify_summation, Settings};
use hypverify_bench::{bindings, half, theorem_point};

fn exact_series(c: &mut Criterion) {
    let spec = HypSpec::new(vec![rat(1, 3), rat(7, 2)], vec![rat(5, 4), rat(2, 1)]);
    c.bench_function("2F2 series to order 40", |b| b.iter(|| pfq_series_exact(black_box(&spec), &rat_int(-1), 1, 40)));
    c.bench_function("gamma ratio exact", |b| {
        b.iter(|| gamma_ratio_exact(black_box(&[half(), rat(7, 2), rat(-5, 2)]), &[rat(3, 1), rat(-1, 2)]))
    });
}

fn numerics(c: &mut Criterion) {
    let p = Precision::new(40).unwrap();
    let x = HighReal::from_rational(&rat(37, 7), p);
    c.bench_function("gamma P=40", |b| b.iter(|| gamma(black_box(&x), p)));
    let spec = HypSpec::new(
        vec![HighReal::from_rational(&rat(1, 3), p), HighReal::from_rational(&rat(7, 2), p)],
        vec![HighReal::from_rational(&rat(5, 4), p), HighReal::from_rational(&rat(2, 1), p)],
    );
    let z = HighReal::from_i64(-2, p);
    c.bench_function("2F2 numeric P=40", |b| b.iter(|| pfq_numeric(black_box(&spec), &z, p, DEFAULT_MAX_TERMS)));
    let boundary = HypSpec::new(vec![HighReal::from_rational(&half(), p); 2], vec![HighReal::from_i64(2, p)]);
    let one = HighReal::one(p);
    c.bench_function("2F1 at 1 extrapolated P=40", |b| b.iter(|| pfq_numeric(black_box(&boundary), &one, p, DEFAULT_MAX_TERMS)));
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("identity checks");
    g.sample_size(10);
    let i1 = find_identity("I1").unwrap();
    let b1 = bindings(&[("a", 1, 3), ("b", 7, 4), ("d", 5, 2)]);
    g.bench_function("I1 exact order 40", |b| b.iter(|| verify_exact(i1, "as-printed", &b1, None, 40)));
    let i10 = find_identity("I10").unwrap();
    let t = theorem_point();
    g.bench_function("I10 limit exact order 20", |b| b.iter(|| verify_exact(i10, "as-printed", &t, Some(Convention::Limit), 20)));
    let s = Settings::default();
    let i11 = find_identity("I11").unwrap();
    g.bench_function("I11 numeric default grid", |b| b.iter(|| verify_numeric(i11, "statement", &t, Some(Convention::Limit), &s)));
    let i4 = find_identity("I4").unwrap();
    let b4 = bindings(&[("a", 1, 2), ("b", 1, 2), ("c", 3, 1), ("d", 2, 1)]);
    g.bench_function("I4 summation at 1", |b| b.iter(|| verify_summation(i4, "as-printed", &b4, &s)));
    g.finish();
}

criterion_group!(benches, exact_series, numerics, identities);
criterion_main!(benches);

//! Fixtures shared by the benchmarks in `benches/`.

use hypverify::exactnum::{rat, Rational};
use hypverify::identities::Bindings;

pub fn bindings(pairs: &[(&str, i64, i64)]) -> Bindings {
    pairs.iter().map(|&(k, p, q)| (k.to_string(), rat(p, q))).collect()
}

/// A generic point of the expansion theorems.
pub fn theorem_point() -> Bindings {
    bindings(&[("v", 1, 3), ("e", 19, 6)])
}

pub fn half() -> Rational {
    rat(1, 2)
}

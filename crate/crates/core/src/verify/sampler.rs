use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::exactnum::{rat_int, Rational};
use crate::identities::{Bindings, Dist, Identity};

pub const MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no admissible binding after {retries} draws")]
pub struct SamplerExhausted {
    pub retries: usize,
}

/// One value from `dist`; `Offset` reads earlier draws from `so_far`.
pub fn draw(dist: &Dist, rng: &mut SplitMix64, so_far: &Bindings) -> Rational {
    match dist {
        Dist::Uniform { lo, hi, max_denom } => loop {
            let q: i64 = rng.gen_range(1..=*max_denom);
            let qb = BigInt::from(q);
            let plo = (lo.numer() * &qb).div_ceil(lo.denom());
            let phi = (hi.numer() * &qb).div_floor(hi.denom());
            if plo > phi {
                continue;
            }
            let span: u64 = (&phi - &plo).try_into().expect("range fits in u64");
            let k = rng.gen_range(0..=span);
            return Rational::new(plo + BigInt::from(k), qb);
        },
        Dist::Integers { lo, hi } => rat_int(rng.gen_range(*lo..=*hi)),
        Dist::Offset { base, lo, hi } => {
            let b = so_far.get(base).cloned().expect("offset base is drawn first");
            b + rat_int(rng.gen_range(*lo..=*hi))
        }
        Dist::Mixture(parts) => {
            let k = rng.gen_range(0..parts.len());
            draw(&parts[k], rng, so_far)
        }
    }
}

/// `trials` admissible bindings from one SplitMix64 stream seeded with
/// `seed`. A trial that finds nothing admissible within [`MAX_RETRIES`]
/// draws is reported in place and the stream continues.
pub fn sample_bindings(identity: &Identity, seed: u64, trials: usize) -> Vec<Result<Bindings, SamplerExhausted>> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            for _ in 0..MAX_RETRIES {
                let mut b = Bindings::new();
                for p in &identity.params {
                    let v = draw(&p.dist, &mut rng, &b);
                    b.insert(p.name.clone(), v);
                }
                if identity.resolve(&b).is_ok() {
                    return Ok(b);
                }
            }
            Err(SamplerExhausted { retries: MAX_RETRIES })
        })
        .collect()
}

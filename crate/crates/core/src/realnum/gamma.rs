use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{HighReal, Precision, RealError};

/// Spouge coefficients `c_0..c_{a-1}` for one target precision.
struct Spouge {
    a: i64,
    work: Precision,
    coeffs: Vec<HighReal>,
}

thread_local! {
    static CACHE: RefCell<HashMap<u32, Rc<Spouge>>> = RefCell::new(HashMap::new());
}

impl Spouge {
    fn build(prec: Precision) -> Spouge {
        let digits = prec.digits() as i64;
        let a = (1.25 * (digits + 10) as f64).ceil() as i64;
        // the alternating coefficient sum cancels roughly `a` digits
        let work = prec.widened(prec.digits() + 30);
        let two_pi = &HighReal::pi(work) * &HighReal::from_i64(2, work);
        let mut coeffs = vec![two_pi.sqrt().expect("2π > 0")];
        let half = HighReal::from_rational(&crate::exactnum::rat(1, 2), work);
        let mut fact = HighReal::one(work); // (k-1)!
        for k in 1..a {
            if k > 1 {
                fact = &fact * &HighReal::from_i64(k - 1, work);
            }
            let base = HighReal::from_i64(a - k, work);
            let expo = &HighReal::from_i64(k - 1, work) + &half;
            let mut c = &base.pow(&expo).expect("a-k > 0") * &base.exp().expect("finite");
            c = &c / &fact;
            if k % 2 == 0 {
                c = -c;
            }
            coeffs.push(c);
        }
        Spouge { a, work, coeffs }
    }

    fn get(prec: Precision) -> Rc<Spouge> {
        CACHE.with(|c| {
            c.borrow_mut()
                .entry(prec.digits())
                .or_insert_with(|| Rc::new(Spouge::build(prec)))
                .clone()
        })
    }

    /// Γ(x) for x ≥ 1/2 via Γ(z+1) with z = x − 1.
    fn eval(&self, x: &HighReal) -> Result<HighReal, RealError> {
        let w = self.work;
        let x = x.with_precision(w);
        let z = &x - &HighReal::one(w);
        let mut sum = self.coeffs[0].clone();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            sum = &sum + &(c / &(&z + &HighReal::from_i64(k as i64, w)));
        }
        let za = &z + &HighReal::from_i64(self.a, w);
        let half = HighReal::from_rational(&crate::exactnum::rat(1, 2), w);
        let lead = za.pow(&(&z + &half))?;
        let damp = (-&za).exp()?;
        (&(&lead * &damp) * &sum).check("gamma")
    }
}

/// Γ(x), with reflection below 1/2 and an error at nonpositive integers.
pub fn gamma(x: &HighReal, prec: Precision) -> Result<HighReal, RealError> {
    if !x.is_finite() {
        return Err(RealError::NotFinite("gamma argument"));
    }
    if let Some(m) = x.near_nonpositive_integer(prec) {
        return Err(RealError::Pole(format!("-{m}")));
    }
    let sp = Spouge::get(prec);
    let half = HighReal::from_rational(&crate::exactnum::rat(1, 2), prec);
    let out = if *x < half {
        // Γ(x) = π / (sin(πx) Γ(1−x))
        let w = sp.work;
        let xw = x.with_precision(w);
        let pi = HighReal::pi(w);
        let s = (&pi * &xw).sin()?;
        let g = sp.eval(&(&HighReal::one(w) - &xw))?;
        (&pi / &(&s * &g)).check("gamma reflection")?
    } else {
        sp.eval(x)?
    };
    Ok(out.with_precision(prec))
}

/// 1/Γ(x); exactly zero at (snapped) nonpositive integers.
pub fn recip_gamma(x: &HighReal, prec: Precision) -> Result<HighReal, RealError> {
    if x.near_nonpositive_integer(prec).is_some() {
        return Ok(HighReal::zero(prec));
    }
    let g = gamma(x, prec)?;
    (&HighReal::one(prec) / &g).check("recip_gamma")
}

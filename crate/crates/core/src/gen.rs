//! Seeded random inputs for the identity suites and tests.

use rand::Rng;

use crate::resfield::{Poly, RatFunc};
use crate::skew::SkewSeries;

/// Random polynomial of degree at most `max_deg`.
pub fn poly<R: Rng>(rng: &mut R, p: u32, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(0..p) as i64).collect();
    Poly::from_coeffs(p, &coeffs)
}

/// Random nonzero monic polynomial of degree at most `max_deg`.
pub fn monic<R: Rng>(rng: &mut R, p: u32, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..p) as i64).collect();
    coeffs.push(1);
    Poly::from_coeffs(p, &coeffs)
}

/// Random rational function; a polynomial with probability about one half.
pub fn ratfunc<R: Rng>(rng: &mut R, p: u32, max_deg: usize) -> RatFunc {
    let num = poly(rng, p, max_deg);
    if rng.gen_bool(0.5) {
        return RatFunc::from_poly(num);
    }
    let den = monic(rng, p, max_deg.max(1));
    RatFunc::new(num, den).expect("nonzero denominator within the degree limit")
}

pub fn nonzero_ratfunc<R: Rng>(rng: &mut R, p: u32, max_deg: usize) -> RatFunc {
    loop {
        let f = ratfunc(rng, p, max_deg);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random series with `prec` coefficients from `z^val`; each coefficient is
/// zero with probability `sparsity`.
pub fn series<R: Rng>(
    rng: &mut R,
    p: u32,
    val: i64,
    prec: usize,
    max_deg: usize,
    sparsity: f64,
    polynomial: bool,
) -> SkewSeries {
    let coeffs = (0..prec)
        .map(|k| {
            if k > 0 && rng.gen_bool(sparsity) {
                return RatFunc::zero(p);
            }
            if polynomial {
                loop {
                    let f = RatFunc::from_poly(poly(rng, p, max_deg));
                    if k > 0 || !f.is_zero() {
                        return f;
                    }
                }
            } else if k == 0 {
                nonzero_ratfunc(rng, p, max_deg)
            } else {
                ratfunc(rng, p, max_deg)
            }
        })
        .collect();
    SkewSeries::from_coeffs(p, val, coeffs)
}

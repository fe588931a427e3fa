use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::resfield::{Mobius, RatFunc};
use crate::skew::{SkewSeries, SkewStructure};

/// A change of parameter: `z' = z + b z^{q+1}` or `z' = b z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reparam {
    Shift { b: RatFunc, q: usize },
    Scale { b: RatFunc },
}

impl Reparam {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Reparam::Shift { b, q } => json!({"shift": {"b": b.to_string(), "q": q}}),
            Reparam::Scale { b } => json!({"scale": {"b": b.to_string()}}),
        }
    }
}

impl fmt::Display for Reparam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reparam::Shift { b, q } => write!(f, "z -> z + ({b})*z^{}", q + 1),
            Reparam::Scale { b } => write!(f, "z -> ({b})*z"),
        }
    }
}

/// A new lift `t + b z^q` of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reembed {
    pub b: RatFunc,
    pub q: usize,
}

/// The new parameter as a series in the old one.
pub fn parameter_series(s: &SkewStructure, r: &Reparam) -> Result<SkewSeries> {
    let p = s.p();
    let n = s.precision();
    match r {
        Reparam::Shift { b, q } => {
            if *q == 0 {
                return Err(Error::InvalidIndex("shift order q must be at least 1".into()));
            }
            if q + 1 >= n {
                return Err(Error::PrecisionExceeded {
                    requested: q + 1,
                    available: n,
                });
            }
            let mut coeffs = vec![RatFunc::zero(p); n];
            coeffs[0] = RatFunc::one(p);
            coeffs[*q] = b.clone();
            Ok(SkewSeries::from_coeffs(p, 1, coeffs))
        }
        Reparam::Scale { b } => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(SkewSeries::monomial(b, 1, n))
        }
    }
}

/// The same ring presented with the parameter `z'` of `r`.
pub fn reparam(s: &SkewStructure, r: &Reparam) -> Result<SkewStructure> {
    let zp = parameter_series(s, r)?;
    reparametrize(s, &zp)
}

/// Present the ring with an arbitrary parameter `zp` of valuation 1.
pub fn reparametrize(s: &SkewStructure, zp: &SkewSeries) -> Result<SkewStructure> {
    if zp.val() != Some(1) {
        return Err(Error::InvalidIndex("a parameter has valuation 1".into()));
    }
    let n = s.precision();
    let p = s.p();
    let x = s.mul(&s.mul(zp, &s.lift_embed(&s.t()))?, &s.inv(zp)?)?;
    let mut rest = x;
    let mut w = s.lift_embed(&RatFunc::one(p));
    let mut conj = Vec::with_capacity(n);
    for k in 0..n {
        let y = rest.coeff(k as i64)?.checked_div(&w.coeff(k as i64)?)?;
        y.check_degree()?;
        if !y.is_zero() {
            rest = &rest - &s.mul(&s.lift_embed(&y), &w)?;
        }
        conj.push(y);
        if k + 1 < n {
            w = s.mul(&w, zp)?;
        }
    }
    SkewStructure::new(p as u64, *s.alpha(), conj, n)
}

fn require_identity(s: &SkewStructure) -> Result<()> {
    if !s.alpha().is_identity() {
        return Err(Error::Unsupported(
            "embedding changes are implemented for alpha = id only".into(),
        ));
    }
    Ok(())
}

/// The lift `t + b z^q`.
pub fn reembed_lift(s: &SkewStructure, r: &Reembed) -> Result<SkewSeries> {
    let p = s.p();
    let n = s.precision();
    if r.q == 0 {
        return Err(Error::InvalidIndex("embedding shift q must be at least 1".into()));
    }
    if r.q >= n {
        return Err(Error::PrecisionExceeded {
            requested: r.q,
            available: n,
        });
    }
    let mut coeffs = vec![RatFunc::zero(p); n];
    coeffs[0] = s.t();
    coeffs[r.q] = r.b.clone();
    Ok(SkewSeries::from_coeffs(p, 0, coeffs))
}

/// The same ring with generator lift `t + b z^q`.
pub fn reembed(s: &SkewStructure, r: &Reembed) -> Result<SkewStructure> {
    require_identity(s)?;
    let lift = reembed_lift(s, r)?;
    change_generator(s, &Mobius::identity(s.p()), &lift)
}

/// The same ring with a new generator whose residue is `sigma(t)` and whose
/// lift is `lift`. Coefficients of the result are written in the new
/// generator.
pub fn change_generator(
    s: &SkewStructure,
    sigma: &Mobius,
    lift: &SkewSeries,
) -> Result<SkewStructure> {
    require_identity(s)?;
    let p = s.p();
    let n = s.precision();
    if lift.val() != Some(0) || lift.prec() < n {
        return Err(Error::InvalidIndex("lift must be a unit known to full precision".into()));
    }
    if lift.coeff(0)? != sigma.image_of_t() {
        return Err(Error::InconsistentStructure(
            "lift residue differs from sigma(t)".into(),
        ));
    }
    let back = sigma.inverse();
    let mut powers = PowerCache::new(s, lift.truncate_abs(n as i64));
    let y = s.mul(&s.mul(&s.z_pow(1), lift)?, &s.z_pow(-1))?;
    let mut rest = y;
    let mut conj = Vec::with_capacity(n);
    for k in 0..n {
        let g = rest.coeff(k as i64)?;
        let h = back.apply(&g);
        h.check_degree()?;
        if !h.is_zero() {
            let hv = powers.eval(&h)?;
            rest = &rest - &s.mul(&hv, &s.z_pow(k as i64))?;
        }
        conj.push(h);
    }
    SkewStructure::new(p as u64, *s.alpha(), conj, n)
}

struct PowerCache<'a> {
    s: &'a SkewStructure,
    pows: Vec<SkewSeries>,
}

impl<'a> PowerCache<'a> {
    fn new(s: &'a SkewStructure, base: SkewSeries) -> Self {
        let one = s.lift_embed(&RatFunc::one(s.p()));
        PowerCache {
            s,
            pows: vec![one, base],
        }
    }

    fn pow(&mut self, k: usize) -> Result<&SkewSeries> {
        while self.pows.len() <= k {
            let next = self.s.mul(self.pows.last().expect("nonempty"), &self.pows[1])?;
            self.pows.push(next);
        }
        Ok(&self.pows[k])
    }

    fn eval_poly(&mut self, f: &crate::resfield::Poly) -> Result<SkewSeries> {
        let p = self.s.p();
        let mut acc = SkewSeries::zero(p, self.s.precision() as i64);
        for (k, &c) in f.coeffs().iter().enumerate() {
            if c != 0 {
                acc = &acc + &self.pow(k)?.scale(c);
            }
        }
        Ok(acc)
    }

    /// `h(base)`.
    fn eval(&mut self, h: &RatFunc) -> Result<SkewSeries> {
        let num = self.eval_poly(h.num())?;
        if h.is_poly() {
            return Ok(num);
        }
        let den = self.eval_poly(h.den())?;
        self.s.mul(&num, &self.s.inv(&den)?)
    }
}

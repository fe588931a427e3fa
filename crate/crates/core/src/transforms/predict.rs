//! Closed-form predictions for how the maps `ₘδ_k` move under parameter and
//! embedding changes, and a checker comparing them with recomputation.

use crate::error::{Error, Result};
use crate::resfield::{Mobius, RatFunc};
use crate::skew::{CheckReport, IdentityCheck, SkewStructure};

use super::reparam::Reembed;

/// `ₘδ_k(a)` is unchanged for `1 <= k < unchanged_below` and `ₘδ_index(a)`
/// becomes `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub m: i64,
    pub arg: RatFunc,
    pub unchanged_below: usize,
    pub index: usize,
    pub value: RatFunc,
}

impl Prediction {
    /// Compare against the transformed structure. `new_arg` is the argument
    /// in the new coordinates.
    pub fn check(&self, old: &SkewStructure, new: &SkewStructure, new_arg: &RatFunc) -> Result<CheckReport> {
        let mut checks = Vec::new();
        for k in 1..self.unchanged_below {
            checks.push(IdentityCheck {
                law: "prefix",
                lhs: new.delta(self.m, k, new_arg)?,
                rhs: old.delta(self.m, k, &self.arg)?,
            });
        }
        checks.push(IdentityCheck {
            law: "first-change",
            lhs: new.delta(self.m, self.index, new_arg)?,
            rhs: self.value.clone(),
        });
        Ok(CheckReport { checks })
    }
}

/// `b' = Σ_{k=0}^{m-1} α^k(b)` for `m >= 1`, `-Σ_{k=1}^{|m|} α^{-k}(b)` for `m < 0`.
fn twisted_sum(s: &SkewStructure, b: &RatFunc, m: i64) -> RatFunc {
    let mut acc = RatFunc::zero(s.p());
    if m > 0 {
        for k in 0..m {
            acc = &acc + &s.alpha_pow(k, b);
        }
    } else {
        for k in 1..=-m {
            acc = &acc - &s.alpha_pow(-k, b);
        }
    }
    acc
}

fn check_m(m: i64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidIndex("m must be nonzero".into()));
    }
    Ok(())
}

fn in_range(s: &SkewStructure, index: usize) -> Result<()> {
    if index >= s.precision() {
        return Err(Error::PrecisionExceeded {
            requested: index,
            available: s.precision(),
        });
    }
    Ok(())
}

/// Shift `z' = z + b z^{q+1}`, any α: change at index `q`.
pub fn shift_first_order(s: &SkewStructure, b: &RatFunc, q: usize, m: i64, a: &RatFunc) -> Result<Prediction> {
    check_m(m)?;
    in_range(s, q)?;
    let bp = twisted_sum(s, b, m);
    let diff = &s.alpha_pow(q as i64 + m, a) - &s.alpha_pow(m, a);
    Ok(Prediction {
        m,
        arg: a.clone(),
        unchanged_below: q,
        index: q,
        value: &s.delta(m, q, a)? + &(&bp * &diff),
    })
}

/// First `j >= 1` with `δ_j(α^l(a)) != 0` for some `l`.
fn first_index_over_orbit(s: &SkewStructure, a: &RatFunc) -> Result<Option<usize>> {
    let n = s.alpha_order() as i64;
    for j in 1..s.precision() {
        for l in 0..n {
            if !s.delta(1, j, &s.alpha_pow(l, a))?.is_zero() {
                return Ok(Some(j));
            }
        }
    }
    Ok(None)
}

/// Shift `z' = z + b z^{q+1}` when `δ_1..δ_{j-1}` vanish on the α-orbit of
/// `a`: change at index `q + j`. Needs `n | q` or `α(a) = a`, and `m >= 1`
/// unless `α = id`. `None` when `j` is beyond the precision.
pub fn shift_higher_order(
    s: &SkewStructure,
    b: &RatFunc,
    q: usize,
    m: i64,
    a: &RatFunc,
) -> Result<Option<Prediction>> {
    check_m(m)?;
    let n = s.alpha_order() as usize;
    let fixed = s.alpha_pow(1, a) == *a;
    if !q.is_multiple_of(n) && !fixed {
        return Err(Error::NotDefined("needs n | q or alpha(a) = a".into()));
    }
    if m < 0 && !s.alpha().is_identity() {
        return Err(Error::Unsupported("negative m with alpha != id".into()));
    }
    let Some(j) = first_index_over_orbit(s, a)? else {
        return Ok(None);
    };
    if q + j >= s.precision() {
        return Ok(None);
    }
    let dj = s.delta(m, j, a)?;
    let base = s.delta(m, q + j, a)?;
    let value = if s.alpha().is_identity() {
        let first = s.delta(1, j, a)?;
        let mq = (m * q as i64).rem_euclid(s.p() as i64) as u32;
        let coeff = &first.scale(mq) - &dj.scale((j as u64 % s.p() as u64) as u32);
        &base + &(b * &coeff)
    } else {
        let bp = twisted_sum(s, b, m);
        let mut sum = RatFunc::zero(s.p());
        for k in 1..=q as i64 {
            let inner = s.delta(1, j, &s.alpha_pow(k + m - 1, a))?;
            sum = &sum + &s.alpha_pow(q as i64 - k, &inner);
        }
        let mut orbit_b = RatFunc::zero(s.p());
        for k in 0..j as i64 {
            orbit_b = &orbit_b + &s.alpha_pow(k, b);
        }
        let t1 = &bp * &s.alpha_pow(q as i64, &dj);
        let t2 = &dj * &s.alpha_pow(j as i64, &bp);
        let t3 = &bp * &sum;
        let t4 = &dj * &orbit_b;
        &(&(&(&base + &t1) - &t2) + &t3) - &t4
    };
    Ok(Some(Prediction {
        m,
        arg: a.clone(),
        unchanged_below: q + j,
        index: q + j,
        value,
    }))
}

/// Scale `z' = b z`, `m = 1`: change at the first index `j` with `δ_j(a) != 0`.
pub fn scale(s: &SkewStructure, b: &RatFunc, a: &RatFunc) -> Result<Option<Prediction>> {
    let binv = b.inv()?;
    for j in 1..s.precision() {
        let dj = s.delta(1, j, a)?;
        if dj.is_zero() {
            continue;
        }
        let mut value = dj;
        for l in 1..=j as i64 {
            value = &value * &s.alpha_pow(l, &binv);
        }
        return Ok(Some(Prediction {
            m: 1,
            arg: a.clone(),
            unchanged_below: j,
            index: j,
            value,
        }));
    }
    Ok(None)
}

/// First `j >= 1` with `ₘδ_j(t) != 0`.
fn first_map(s: &SkewStructure, m: i64) -> Result<Option<usize>> {
    let t = s.t();
    for j in 1..s.precision() {
        if !s.delta(m, j, &t)?.is_zero() {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Embedding change `t -> t + b z^q`, `α = id`: change at index `q + j`.
pub fn reembed(s: &SkewStructure, r: &Reembed, m: i64) -> Result<Option<Prediction>> {
    check_m(m)?;
    if !s.alpha().is_identity() {
        return Err(Error::Unsupported("alpha != id".into()));
    }
    let Some(j) = first_map(s, m)? else {
        return Ok(None);
    };
    if r.q + j >= s.precision() {
        return Ok(None);
    }
    let t = s.t();
    let dj = s.delta(m, j, &t)?;
    let value = &(&s.delta(m, r.q + j, &t)? + &s.delta(m, j, &r.b)?) - &(&dj.derive() * &r.b);
    Ok(Some(Prediction {
        m,
        arg: t,
        unchanged_below: r.q + j,
        index: r.q + j,
        value,
    }))
}

/// Generator change to a lift of `sigma(t)`, `α = id`: the first map is
/// multiplied by `d sigma(t)/dt`, written in the new generator.
pub fn change_generator(s: &SkewStructure, sigma: &Mobius, m: i64) -> Result<Option<Prediction>> {
    check_m(m)?;
    if !s.alpha().is_identity() {
        return Err(Error::Unsupported("alpha != id".into()));
    }
    let Some(j) = first_map(s, m)? else {
        return Ok(None);
    };
    let t = s.t();
    let value = &s.delta(m, j, &t)? * &sigma.image_of_t().derive();
    Ok(Some(Prediction {
        m,
        arg: t,
        unchanged_below: j,
        index: j,
        value: sigma.inverse().apply(&value),
    }))
}

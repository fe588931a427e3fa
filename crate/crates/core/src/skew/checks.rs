//! Executable forms of the δ-map identities.

use crate::error::{Error, Result};
use crate::freering::{eval_free, sigma_poly, s_poly, FreePoly, FreeWord, Interpretation, Letter, SPolyMode};
use crate::resfield::{signed_binomial_mod, RatFunc};

use super::structure::SkewStructure;

/// Anything that can answer `ₘδᵢ(a)` queries. Implemented by
/// [`SkewStructure`]; test code wraps it to inject faults.
pub trait DeltaSource: Sync {
    fn p(&self) -> u32;
    fn precision(&self) -> usize;
    fn alpha_is_identity(&self) -> bool;
    /// `α^m(a)`.
    fn alpha_pow(&self, m: i64, a: &RatFunc) -> RatFunc;
    /// `ₘδᵢ(a)`, with `ₘδ_0 = α^m` and `₀δᵢ = 0` for `i >= 1`.
    fn delta(&self, m: i64, i: usize, a: &RatFunc) -> Result<RatFunc>;
}

impl DeltaSource for SkewStructure {
    fn p(&self) -> u32 {
        SkewStructure::p(self)
    }

    fn precision(&self) -> usize {
        SkewStructure::precision(self)
    }

    fn alpha_is_identity(&self) -> bool {
        self.alpha().is_identity()
    }

    fn alpha_pow(&self, m: i64, a: &RatFunc) -> RatFunc {
        SkewStructure::alpha_pow(self, m, a)
    }

    fn delta(&self, m: i64, i: usize, a: &RatFunc) -> Result<RatFunc> {
        SkewStructure::delta(self, m, i, a)
    }
}

/// A query `ₘδᵢ(arg)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaQuery {
    pub m: i64,
    pub i: usize,
    pub arg: RatFunc,
}

impl DeltaQuery {
    pub fn eval(&self, src: &dyn DeltaSource) -> Result<RatFunc> {
        src.delta(self.m, self.i, &self.arg)
    }
}

/// One side-by-side comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub law: &'static str,
    pub lhs: RatFunc,
    pub rhs: RatFunc,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub checks: Vec<IdentityCheck>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.holds())
    }
}

fn check_index(src: &dyn DeltaSource, i: usize) -> Result<()> {
    if i == 0 {
        return Err(Error::InvalidIndex("identity index must be at least 1".into()));
    }
    if i >= src.precision() {
        return Err(Error::PrecisionExceeded {
            requested: i,
            available: src.precision(),
        });
    }
    Ok(())
}

/// Sum of `δ_{j_1} ∘ … ∘ δ_{j_l}(b)` over compositions of `k` into `l` parts.
fn composition_sum(src: &dyn DeltaSource, k: usize, l: usize, b: &RatFunc) -> Result<RatFunc> {
    let p = src.p();
    if l == 0 {
        return Ok(if k == 0 { b.clone() } else { RatFunc::zero(p) });
    }
    let mut acc = RatFunc::zero(p);
    // the innermost map is applied first
    for j in 1..=k + 1 - l {
        let inner = src.delta(1, j, b)?;
        if inner.is_zero() {
            continue;
        }
        acc = &acc + &composition_sum(src, k - j, l - 1, &inner)?;
    }
    Ok(acc)
}

/// `_rδ_k(b)` through binomials in the first-order maps; `α = id` only.
pub fn binomial_delta(src: &dyn DeltaSource, r: i64, k: usize, b: &RatFunc) -> Result<RatFunc> {
    let p = src.p();
    if k == 0 {
        return Ok(b.clone());
    }
    let mut acc = RatFunc::zero(p);
    for l in 1..=k {
        let c = signed_binomial_mod(r, l as u64, p);
        if c == 0 {
            continue;
        }
        acc = &acc + &composition_sum(src, k, l, b)?.scale(c);
    }
    Ok(acc)
}

/// The product rule for `ₘδᵢ(ab)`; with `α = id` also its binomial form.
pub fn check_flyii(
    src: &dyn DeltaSource,
    a: &RatFunc,
    b: &RatFunc,
    m: i64,
    i: usize,
) -> Result<CheckReport> {
    check_index(src, i)?;
    let ab = a * b;
    let lhs = src.delta(m, i, &ab)?;
    let da = |k: usize| src.delta(m, k, a);
    let edge = &(&da(i)? * &src.alpha_pow(i as i64 + m, b)) + &(&src.alpha_pow(m, a) * &src.delta(m, i, b)?);
    let mut rhs = edge.clone();
    for k in 1..i {
        let left = da(i - k)?;
        if left.is_zero() {
            continue;
        }
        rhs = &rhs + &(&left * &src.delta((i - k) as i64 + m, k, b)?);
    }
    let mut report = CheckReport {
        checks: vec![IdentityCheck {
            law: "flyii/product",
            lhs: lhs.clone(),
            rhs,
        }],
    };
    if src.alpha_is_identity() {
        let mut rhs2 = edge;
        for k in 1..i {
            let left = da(i - k)?;
            if left.is_zero() {
                continue;
            }
            let r = (i - k) as i64 + m;
            rhs2 = &rhs2 + &(&left * &binomial_delta(src, r, k, b)?);
        }
        report.checks.push(IdentityCheck {
            law: "flyii/binomial",
            lhs,
            rhs: rhs2,
        });
    }
    Ok(report)
}

/// `ₘδ_0..ₘδ_i (a)` built from the maps of step `±1` alone.
fn stepped_deltas(src: &dyn DeltaSource, a: &RatFunc, m: i64, i: usize) -> Result<Vec<RatFunc>> {
    let s = m.signum();
    let step = |k: usize, x: &RatFunc| -> Result<RatFunc> {
        if k == 0 {
            Ok(src.alpha_pow(s, x))
        } else {
            src.delta(s, k, x)
        }
    };
    let mut cur: Vec<RatFunc> = (0..=i).map(|k| step(k, a)).collect::<Result<_>>()?;
    for _ in 1..m.unsigned_abs() {
        let mut next = Vec::with_capacity(i + 1);
        for n in 0..=i {
            let mut acc = RatFunc::zero(src.p());
            for (j, cj) in cur.iter().enumerate().take(n + 1) {
                if !cj.is_zero() {
                    acc = &acc + &step(n - j, cj)?;
                }
            }
            next.push(acc);
        }
        cur = next;
    }
    Ok(cur)
}

/// The recursion expressing `ₘδᵢ` through the maps of step `±1`, and the
/// identity pairing `ₘδ` with `₋ₘδ`.
pub fn check_triviall(src: &dyn DeltaSource, a: &RatFunc, m: i64, i: usize) -> Result<CheckReport> {
    check_index(src, i)?;
    if m == 0 {
        return Err(Error::InvalidIndex("the recursion needs m != 0".into()));
    }
    let p = src.p();
    let direct = src.delta(m, i, a)?;
    let stepped = stepped_deltas(src, a, m, i)?;
    let mut inv = &src.alpha_pow(-m, &direct) + &src.delta(-m, i, &src.alpha_pow(m, a))?;
    for j in 1..i {
        let inner = src.delta(m, i - j, a)?;
        if !inner.is_zero() {
            inv = &inv + &src.delta(-m, j, &inner)?;
        }
    }
    Ok(CheckReport {
        checks: vec![
            IdentityCheck {
                law: "triviall/recursion",
                lhs: direct,
                rhs: stepped[i].clone(),
            },
            IdentityCheck {
                law: "triviall/inverse",
                lhs: inv,
                rhs: RatFunc::zero(p),
            },
        ],
    })
}

struct SourceInterpretation<'a>(&'a dyn DeltaSource);

impl Interpretation for SourceInterpretation<'_> {
    fn alpha(&self, a: &RatFunc) -> Result<RatFunc> {
        Ok(self.0.alpha_pow(1, a))
    }

    fn delta(&self, b: u32, a: &RatFunc) -> Result<RatFunc> {
        self.0.delta(1, b as usize, a)
    }
}

/// `σ(δ^{i-k} α)` and `σ(S_i^k α)` for `k = 0..=i`.
pub fn ooo_operators(i: u32) -> Result<Vec<(FreePoly, FreePoly)>> {
    let alpha = FreePoly::letter(Letter::A);
    (0..=i)
        .map(|k| {
            let mut word = vec![Letter::Dplain; (i - k) as usize];
            word.push(Letter::A);
            let left = sigma_poly(&FreePoly::word(FreeWord::new(word)))?;
            let right = sigma_poly(&s_poly(i, k, SPolyMode::Recursion)?.mul(&alpha))?;
            Ok((left, right))
        })
        .collect()
}

/// `δᵢ(ab) = Σ_k σ(δ^{i-k}α)(a) σ(S_i^k α)(b)`.
pub fn check_ooo(src: &dyn DeltaSource, a: &RatFunc, b: &RatFunc, i: usize) -> Result<CheckReport> {
    check_index(src, i)?;
    let interp = SourceInterpretation(src);
    let lhs = src.delta(1, i, &(a * b))?;
    let mut rhs = RatFunc::zero(src.p());
    for (left, right) in ooo_operators(i as u32)? {
        let x = eval_free(&left, &interp, a)?;
        if x.is_zero() {
            continue;
        }
        rhs = &rhs + &(&x * &eval_free(&right, &interp, b)?);
    }
    Ok(CheckReport {
        checks: vec![IdentityCheck {
            law: "ooo/sigma",
            lhs,
            rhs,
        }],
    })
}

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::resfield::RatFunc;

/// Truncated Laurent series `Σ a_k z^k`, known modulo `z^{val + prec}`.
///
/// A nonzero series has `coeffs.len() == prec` and a nonzero first
/// coefficient at `z^val`. The zero series has no coefficients and `val`
/// records the order below which it is known to vanish.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SkewSeries {
    p: u32,
    val: i64,
    coeffs: Vec<RatFunc>,
}

impl SkewSeries {
    /// Build from coefficients of `z^start, z^{start+1}, …`; leading zeros
    /// are stripped.
    pub fn from_coeffs(p: u32, start: i64, mut coeffs: Vec<RatFunc>) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => SkewSeries::zero(p, start + coeffs.len() as i64),
            Some(s) => {
                coeffs.drain(..s);
                SkewSeries {
                    p,
                    val: start + s as i64,
                    coeffs,
                }
            }
        }
    }

    /// The zero series known modulo `z^abs`.
    pub fn zero(p: u32, abs: i64) -> Self {
        SkewSeries {
            p,
            val: abs,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u32, prec: usize) -> Self {
        Self::constant(&RatFunc::one(p), prec)
    }

    pub fn constant(f: &RatFunc, prec: usize) -> Self {
        Self::monomial(f, 0, prec)
    }

    /// `f z^k` with `prec` known coefficients.
    pub fn monomial(f: &RatFunc, k: i64, prec: usize) -> Self {
        let p = f.modulus();
        let mut coeffs = vec![RatFunc::zero(p); prec];
        if prec > 0 {
            coeffs[0] = f.clone();
        }
        Self::from_coeffs(p, k, coeffs)
    }

    /// `z^k`.
    pub fn z_pow(p: u32, k: i64, prec: usize) -> Self {
        Self::monomial(&RatFunc::one(p), k, prec)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation, `None` for the zero series.
    pub fn val(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Number of known coefficients from the valuation on (0 for zero).
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of the first unknown coefficient.
    pub fn abs_precision(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Start of the stored window; equals the valuation when nonzero.
    pub(crate) fn start(&self) -> i64 {
        self.val
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn lead(&self) -> Option<&RatFunc> {
        self.coeffs.first()
    }

    /// Coefficient of `z^k`; an error past the known precision.
    pub fn coeff(&self, k: i64) -> Result<RatFunc> {
        if k >= self.abs_precision() {
            return Err(Error::PrecisionExceeded {
                requested: k.max(0) as usize,
                available: self.abs_precision().max(0) as usize,
            });
        }
        if k < self.val {
            return Ok(RatFunc::zero(self.p));
        }
        Ok(self.coeffs[(k - self.val) as usize].clone())
    }

    /// Forget everything from `z^abs` on.
    pub fn truncate_abs(&self, abs: i64) -> SkewSeries {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        if abs <= self.val {
            return SkewSeries::zero(self.p, abs);
        }
        let keep = (abs - self.val) as usize;
        SkewSeries {
            p: self.p,
            val: self.val,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Equal on the common range of known coefficients.
    pub fn agrees_with(&self, other: &SkewSeries) -> bool {
        let abs = self.abs_precision().min(other.abs_precision());
        self.truncate_abs(abs) == other.truncate_abs(abs)
    }

    /// Multiply every coefficient by an element of F_p.
    pub fn scale(&self, c: u32) -> SkewSeries {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        SkewSeries::from_coeffs(self.p, self.val, coeffs)
    }

    fn combine(&self, other: &SkewSeries, negate: bool) -> SkewSeries {
        debug_assert_eq!(self.p, other.p);
        let abs = self.abs_precision().min(other.abs_precision());
        let start = self.val.min(other.val).min(abs);
        let coeffs = (start..abs)
            .map(|k| {
                let a = self.coeff(k).expect("within precision");
                let b = other.coeff(k).expect("within precision");
                if negate {
                    &a - &b
                } else {
                    &a + &b
                }
            })
            .collect();
        SkewSeries::from_coeffs(self.p, start, coeffs)
    }
}

impl Add for &SkewSeries {
    type Output = SkewSeries;
    fn add(self, o: &SkewSeries) -> SkewSeries {
        self.combine(o, false)
    }
}

impl Sub for &SkewSeries {
    type Output = SkewSeries;
    fn sub(self, o: &SkewSeries) -> SkewSeries {
        self.combine(o, true)
    }
}

impl Neg for &SkewSeries {
    type Output = SkewSeries;
    fn neg(self) -> SkewSeries {
        SkewSeries {
            p: self.p,
            val: self.val,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let e = self.val + k as i64;
            if c.is_poly() {
                write!(f, "{c}")?;
            } else {
                write!(f, "[{c}]")?;
            }
            if e != 0 {
                write!(f, "*z^{e}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.abs_precision())
    }
}

//! Dense univariate polynomials over F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::fp;

/// Polynomial with coefficients in ascending degree order and no trailing
/// zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    p: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(p: u32) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::from_coeffs(p, &[c])
    }

    /// The polynomial `t`.
    pub fn var(p: u32) -> Self {
        Poly { p, coeffs: vec![0, 1 % p] }.trimmed()
    }

    pub fn monomial(p: u32, c: i64, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = fp::reduce(c, p);
        Poly { p, coeffs }.trimmed()
    }

    pub fn from_coeffs(p: u32, coeffs: &[i64]) -> Self {
        Poly {
            p,
            coeffs: coeffs.iter().map(|&c| fp::reduce(c, p)).collect(),
        }
        .trimmed()
    }

    /// Coefficients must already be reduced mod p.
    pub(crate) fn from_raw(p: u32, coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < p));
        Poly { p, coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn scale(&self, c: u32) -> Poly {
        let c = c % self.p;
        if c == 0 {
            return Poly::zero(self.p);
        }
        Poly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| fp::mul(a, c, self.p)).collect(),
        }
    }

    /// Divide by the leading coefficient; returns the monic polynomial and
    /// the coefficient removed.
    pub fn monic(&self) -> (Poly, u32) {
        let lc = self.lead();
        if lc == 0 || lc == 1 {
            return (self.clone(), lc);
        }
        (self.scale(fp::inv(lc, self.p)), lc)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = fp::add(fp::mul(acc, x, self.p), c, self.p);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| fp::mul(c, (i as u64 % p as u64) as u32, p))
            .collect();
        Poly::from_raw(p, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let p = self.p;
        let dd = d.degree().expect("polynomial division by zero");
        if self.coeffs.len() <= dd {
            return (Poly::zero(p), self.clone());
        }
        let inv_lead = fp::inv(d.lead(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = fp::mul(rem[i + dd], inv_lead, p);
            quot[i] = c;
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = fp::sub(rem[i + j], fp::mul(c, dc, p), p);
                }
            }
        }
        rem.truncate(dd);
        (Poly::from_raw(p, quot), Poly::from_raw(p, rem))
    }

    /// Exact division; the caller guarantees `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_one() || other.is_one() {
            return Poly::one(self.p);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic().0
    }

    /// Substitute `t -> a t + b`.
    pub fn compose_affine(&self, a: u32, b: u32) -> Poly {
        let p = self.p;
        let lin = Poly::from_raw(p, vec![b, a]);
        let mut acc = Poly::zero(p);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::from_raw(p, vec![c]);
        }
        acc
    }

    /// Formal evaluation at another polynomial.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::from_raw(self.p, vec![c]);
        }
        acc
    }

    /// Formal `p`-th power map `f(t) -> f(t^p)`.
    pub fn inflate(&self, factor: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * factor + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * factor] = c;
        }
        Poly::from_raw(self.p, coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        debug_assert_eq!(self.p, o.p);
        let p = self.p;
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = fp::add(*c, s, p);
        }
        Poly::from_raw(p, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        debug_assert_eq!(self.p, o.p);
        let p = self.p;
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|i| fp::sub(self.coeff(i), o.coeff(i), p))
            .collect();
        Poly::from_raw(p, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| fp::neg(c, self.p)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        debug_assert_eq!(self.p, o.p);
        let p = self.p;
        if self.is_zero() || o.is_zero() {
            return Poly::zero(p);
        }
        if o.coeffs.len() == 1 {
            return self.scale(o.coeffs[0]);
        }
        if self.coeffs.len() == 1 {
            return o.scale(self.coeffs[0]);
        }
        let pp = p as u64;
        // Delay reductions while the accumulator cannot overflow.
        let budget = (u64::MAX / ((pp - 1) * (pp - 1)).max(1)) as usize;
        let mut acc = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        if budget > self.coeffs.len().min(o.coeffs.len()) {
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.coeffs.iter().enumerate() {
                    acc[i + j] += a as u64 * b as u64;
                }
            }
        } else {
            for (i, &a) in self.coeffs.iter().enumerate() {
                for (j, &b) in o.coeffs.iter().enumerate() {
                    acc[i + j] = (acc[i + j] + a as u64 * b as u64) % pp;
                }
            }
        }
        Poly::from_raw(p, acc.into_iter().map(|c| (c % pp) as u32).collect())
    }
}

impl fmt::Display for Poly {
    /// Descending degree in the text grammar, e.g. `2*t^2+t+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, 't')
    }
}

pub(crate) fn write_poly(f: &mut impl fmt::Write, poly: &Poly, var: char) -> fmt::Result {
    if poly.is_zero() {
        return f.write_str("0");
    }
    let mut first = true;
    for (deg, &c) in poly.coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            f.write_char('+')?;
        }
        first = false;
        match (deg, c) {
            (0, c) => write!(f, "{c}")?,
            (1, 1) => write!(f, "{var}")?,
            (1, c) => write!(f, "{c}*{var}")?,
            (d, 1) => write!(f, "{var}^{d}")?,
            (d, c) => write!(f, "{c}*{var}^{d}")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u32, c: &[i64]) -> Poly {
        Poly::from_coeffs(p, c)
    }

    #[test]
    fn trims_and_reduces() {
        let a = poly(3, &[4, 0, 3]);
        assert_eq!(a.coeffs(), &[1]);
        assert!(poly(5, &[0, 0]).is_zero());
        assert_eq!(poly(3, &[1, 2]).scale(3), Poly::zero(3));
        assert_eq!(poly(3, &[1, 2]).scale(4), poly(3, &[1, 2]));
    }

    #[test]
    fn division_identity() {
        let a = poly(7, &[3, 1, 4, 1, 5, 2]);
        let d = poly(7, &[2, 0, 3]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        // (t+1)(t+2) and (t+1)(t+3) over F_5
        let a = &poly(5, &[1, 1]) * &poly(5, &[2, 1]);
        let b = &poly(5, &[1, 1]) * &poly(5, &[3, 1]);
        assert_eq!(a.gcd(&b), poly(5, &[1, 1]));
        assert!(poly(5, &[2]).gcd(&poly(5, &[0, 3])).is_one());
    }

    #[test]
    fn frobenius_kills_derivative() {
        let t3 = Poly::monomial(3, 1, 3);
        assert!(t3.derivative().is_zero());
    }

    #[test]
    fn affine_composition() {
        // (t+1)^3 = t^3 + 1 over F_3
        let t3 = Poly::monomial(3, 1, 3);
        assert_eq!(t3.compose_affine(1, 1), poly(3, &[1, 0, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(poly(5, &[1, 2, 0, 1]).to_string(), "t^3+2*t+1");
        assert_eq!(poly(5, &[0, 1]).to_string(), "t");
        assert_eq!(Poly::zero(5).to_string(), "0");
    }
}

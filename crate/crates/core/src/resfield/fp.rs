//! Prime field helpers.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted anywhere in the crate.
pub const MAX_PRIME: u64 = 65_521;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<u32> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(Error::BadModulus(p));
    }
    Ok(p as u32)
}

#[inline]
pub(crate) fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue. Panics on zero; callers check first.
pub(crate) fn inv(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    pow(a, p as u64 - 2, p)
}

/// Reduce a signed integer into `[0, p)`.
pub(crate) fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Element of the prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u32,
    p: u32,
}

impl FpElem {
    pub fn new(value: i64, p: u32) -> Self {
        FpElem {
            value: reduce(value, p),
            p,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FpElem {
            value: inv(self.value, self.p),
            p: self.p,
        })
    }

    pub fn pow(self, e: u64) -> Self {
        FpElem {
            value: pow(self.value, e, self.p),
            p: self.p,
        }
    }

    /// Multiplicative order, or `None` for zero.
    pub fn multiplicative_order(self) -> Option<u32> {
        if self.value == 0 {
            return None;
        }
        let mut x = self.value;
        let mut n = 1;
        while x != 1 {
            x = mul(x, self.value, self.p);
            n += 1;
        }
        Some(n)
    }
}

impl std::ops::Add for FpElem {
    type Output = FpElem;
    fn add(self, o: FpElem) -> FpElem {
        debug_assert_eq!(self.p, o.p);
        FpElem {
            value: add(self.value, o.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Sub for FpElem {
    type Output = FpElem;
    fn sub(self, o: FpElem) -> FpElem {
        debug_assert_eq!(self.p, o.p);
        FpElem {
            value: sub(self.value, o.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Mul for FpElem {
    type Output = FpElem;
    fn mul(self, o: FpElem) -> FpElem {
        debug_assert_eq!(self.p, o.p);
        FpElem {
            value: mul(self.value, o.value, self.p),
            p: self.p,
        }
    }
}

impl std::ops::Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        FpElem {
            value: neg(self.value, self.p),
            p: self.p,
        }
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Binomial coefficient `C(n, k) mod p` for `n >= 0`, via Lucas' theorem.
pub fn binomial_mod(mut n: u64, mut k: u64, p: u32) -> u32 {
    let pp = p as u64;
    let mut result = 1u32;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % pp, k % pp);
        if ki > ni {
            return 0;
        }
        result = mul(result, small_binomial(ni as u32, ki as u32, p), p);
        n /= pp;
        k /= pp;
    }
    result
}

fn small_binomial(n: u32, k: u32, p: u32) -> u32 {
    let mut num = 1;
    let mut den = 1;
    for i in 0..k {
        num = mul(num, n - i, p);
        den = mul(den, i + 1, p);
    }
    mul(num, inv(den, p), p)
}

/// Binomial coefficient with a possibly non-positive upper index.
///
/// For `n <= 0` the upper index is lifted to `n + p^q` with `q` minimal such
/// that `n + p^q > k`; this agrees with the generalized binomial
/// `n(n-1)...(n-k+1)/k!` reduced mod p. `C(0, k) = 0` for `k >= 1`.
pub fn signed_binomial_mod(n: i64, k: u64, p: u32) -> u32 {
    if n >= 0 {
        return binomial_mod(n as u64, k, p);
    }
    let mut pq: i64 = 1;
    while n + pq <= k as i64 {
        pq *= p as i64;
    }
    binomial_mod((n + pq) as u64, k, p)
}

//! Rational functions over F_p in canonical form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::fp;
use super::mobius::Mobius;
use super::poly::{write_poly, Poly};
use crate::error::{Error, Result};

/// Largest numerator or denominator degree accepted by checked operations.
pub const DEGREE_LIMIT: usize = 4096;

/// `num / den` with `den` monic, `gcd(num, den) = 1`, and zero stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Canonicalize `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.modulus() != den.modulus() {
            return Err(Error::ModulusMismatch(num.modulus(), den.modulus()));
        }
        let r = Self::normalize(num, den);
        r.check_degree()?;
        Ok(r)
    }

    pub(crate) fn normalize(num: Poly, den: Poly) -> Self {
        let p = num.modulus();
        if num.is_zero() {
            return Self::zero(p);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        Self::from_coprime(num, den)
    }

    /// Make the denominator monic; inputs must already be coprime.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        let lc = den.lead();
        if lc == 1 {
            return RatFunc { num, den };
        }
        let inv = fp::inv(lc, den.modulus());
        RatFunc {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    pub fn from_poly(num: Poly) -> Self {
        let p = num.modulus();
        RatFunc {
            num,
            den: Poly::one(p),
        }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_poly(Poly::zero(p))
    }

    pub fn one(p: u32) -> Self {
        Self::from_poly(Poly::one(p))
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::from_poly(Poly::constant(p, c))
    }

    /// The generator `t`.
    pub fn t(p: u32) -> Self {
        Self::from_poly(Poly::var(p))
    }

    pub fn monomial(p: u32, c: i64, degree: usize) -> Self {
        Self::from_poly(Poly::monomial(p, c, degree))
    }

    pub fn modulus(&self) -> u32 {
        self.num.modulus()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// The value of a constant, `None` otherwise.
    pub fn constant_value(&self) -> Option<u32> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// Largest of the numerator and denominator degrees.
    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn check_degree(&self) -> Result<()> {
        let degree = self.degree();
        if degree > DEGREE_LIMIT {
            return Err(Error::DegreeOverflow {
                degree,
                limit: DEGREE_LIMIT,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: u32) -> Self {
        if c.is_multiple_of(self.modulus()) {
            return Self::zero(self.modulus());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Formal derivative `d/dt`.
    pub fn derive(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalize(num, &self.den * &self.den)
    }

    /// `f(sigma(t))`.
    pub fn apply(&self, sigma: &Mobius) -> Self {
        sigma.apply(self)
    }

    /// Substitute `t -> g` for an arbitrary rational function `g`.
    pub fn compose(&self, g: &RatFunc) -> Result<Self> {
        let n = eval_poly_at(&self.num, g);
        let d = eval_poly_at(&self.den, g);
        n.checked_div(&d)
    }

    pub fn to_string_var(&self, var: char) -> String {
        let mut s = String::new();
        write_ratfunc(&mut s, self, var).expect("writing to a String");
        s
    }
}

fn eval_poly_at(f: &Poly, g: &RatFunc) -> RatFunc {
    let p = f.modulus();
    let mut acc = RatFunc::zero(p);
    for &c in f.coeffs().iter().rev() {
        acc = &(&acc * g) + &RatFunc::constant(p, c as i64);
    }
    acc
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(&self.num + &o.num);
        }
        if self.den == o.den {
            return RatFunc::normalize(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            if num.is_zero() {
                return RatFunc::zero(self.modulus());
            }
            return RatFunc {
                num,
                den: &self.den * &o.den,
            };
        }
        let d1 = self.den.div_exact(&g);
        let d2 = o.den.div_exact(&g);
        let t = &(&self.num * &d2) + &(&o.num * &d1);
        if t.is_zero() {
            return RatFunc::zero(self.modulus());
        }
        let g2 = t.gcd(&g);
        RatFunc {
            num: t.div_exact(&g2),
            den: &d1 * &o.den.div_exact(&g2),
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.modulus());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let num = &self.num.div_exact(&g1) * &o.num.div_exact(&g2);
        let den = &self.den.div_exact(&g2) * &o.den.div_exact(&g1);
        RatFunc::from_coprime(num, den)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

pub(crate) fn write_ratfunc(f: &mut impl fmt::Write, r: &RatFunc, var: char) -> fmt::Result {
    if r.den.is_one() {
        return write_poly(f, &r.num, var);
    }
    f.write_char('(')?;
    write_poly(f, &r.num, var)?;
    f.write_str(")/(")?;
    write_poly(f, &r.den, var)?;
    f.write_char(')')
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratfunc(f, self, 't')
    }
}

//! Möbius automorphisms `t -> (a t + b) / (c t + d)` of F_p(t).

use std::fmt;

use super::fp;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// A PGL_2(F_p) class, stored as the representative whose first nonzero
/// entry (row-major) is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mobius {
    m: [[u32; 2]; 2],
    p: u32,
}

impl Mobius {
    pub fn new(p: u32, matrix: [[i64; 2]; 2]) -> Result<Self> {
        let m = [
            [fp::reduce(matrix[0][0], p), fp::reduce(matrix[0][1], p)],
            [fp::reduce(matrix[1][0], p), fp::reduce(matrix[1][1], p)],
        ];
        Self::from_residues(p, m)
    }

    fn from_residues(p: u32, m: [[u32; 2]; 2]) -> Result<Self> {
        let det = fp::sub(fp::mul(m[0][0], m[1][1], p), fp::mul(m[0][1], m[1][0], p), p);
        if det == 0 {
            return Err(Error::InconsistentStructure(
                "singular Möbius matrix".into(),
            ));
        }
        let lead = [m[0][0], m[0][1], m[1][0], m[1][1]]
            .into_iter()
            .find(|&x| x != 0)
            .expect("nonsingular matrix has a nonzero entry");
        let s = fp::inv(lead, p);
        let m = m.map(|row| row.map(|x| fp::mul(x, s, p)));
        Ok(Mobius { m, p })
    }

    pub fn identity(p: u32) -> Self {
        Mobius {
            m: [[1, 0], [0, 1]],
            p,
        }
    }

    /// `t -> zeta t`.
    pub fn scaling(p: u32, zeta: i64) -> Result<Self> {
        Self::new(p, [[zeta, 0], [0, 1]])
    }

    /// `t -> t + b`.
    pub fn translation(p: u32, b: i64) -> Self {
        Self::new(p, [[1, b], [0, 1]]).expect("translations are invertible")
    }

    /// Recover the map from the image of `t`, which must have degree at most 1.
    pub fn from_image(image: &RatFunc) -> Result<Self> {
        let p = image.modulus();
        let bad = || Error::InconsistentStructure(format!("{image} is not a Möbius image of t"));
        if image.num().degree_or_zero() > 1 || image.den().degree_or_zero() > 1 {
            return Err(bad());
        }
        let (n, d) = (image.num(), image.den());
        Self::from_residues(p, [[n.coeff(1), n.coeff(0)], [d.coeff(1), d.coeff(0)]])
            .map_err(|_| bad())
    }

    pub fn matrix(&self) -> [[u32; 2]; 2] {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_identity(&self) -> bool {
        self.m == [[1, 0], [0, 1]]
    }

    pub fn is_affine(&self) -> bool {
        self.m[1][0] == 0
    }

    /// Matrix product `M_self · M_other`, i.e. the map `t -> self(other(t))`.
    /// As substitutions, `a.compose(b).apply(f) = b.apply(a.apply(f))`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let p = self.p;
        let (a, b) = (self.m, other.m);
        let mut c = [[0u32; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = fp::add(fp::mul(a[i][0], b[0][j], p), fp::mul(a[i][1], b[1][j], p), p);
            }
        }
        Self::from_residues(p, c).expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> Mobius {
        let p = self.p;
        let [[a, b], [c, d]] = self.m;
        Self::from_residues(p, [[d, fp::neg(b, p)], [fp::neg(c, p), a]])
            .expect("adjugate of an invertible matrix")
    }

    pub fn pow(&self, e: i64) -> Mobius {
        let base = if e < 0 { self.inverse() } else { *self };
        let mut acc = Mobius::identity(self.p);
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Least `n >= 1` with `self^n = id`.
    pub fn order(&self) -> u32 {
        let mut acc = *self;
        let mut n = 1;
        while !acc.is_identity() {
            acc = acc.compose(self);
            n += 1;
        }
        n
    }

    /// `sigma(t)` as a rational function.
    pub fn image_of_t(&self) -> RatFunc {
        let p = self.p;
        let [[a, b], [c, d]] = self.m;
        RatFunc::normalize(
            Poly::from_raw(p, vec![b, a]),
            Poly::from_raw(p, vec![d, c]),
        )
    }

    /// `f(sigma(t))`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        if self.is_identity() || f.is_constant() {
            return f.clone();
        }
        let p = self.p;
        let [[a, b], [c, d]] = self.m;
        if c == 0 {
            let s = fp::inv(d, p);
            let (a, b) = (fp::mul(a, s, p), fp::mul(b, s, p));
            return RatFunc::normalize(
                f.num().compose_affine(a, b),
                f.den().compose_affine(a, b),
            );
        }
        let deg = f.num().degree_or_zero().max(f.den().degree_or_zero());
        let lin_a = Poly::from_raw(p, vec![b, a]);
        let lin_c = Poly::from_raw(p, vec![d, c]);
        let pow_a: Vec<Poly> = powers(&lin_a, deg);
        let pow_c: Vec<Poly> = powers(&lin_c, deg);
        let hom = |g: &Poly| {
            let mut acc = Poly::zero(p);
            for (k, &gk) in g.coeffs().iter().enumerate() {
                if gk != 0 {
                    acc = &acc + &(&pow_a[k] * &pow_c[deg - k]).scale(gk);
                }
            }
            acc
        };
        RatFunc::normalize(hom(f.num()), hom(f.den()))
    }
}

fn powers(base: &Poly, n: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Poly::one(base.modulus()));
    for k in 1..=n {
        out.push(&out[k - 1] * base);
    }
    out
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t->{}", self.image_of_t())
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::resfield::{check_prime, Poly};

/// `F_{q^n}` over `F_q`, `q = p^r`, as `F_p[x]` modulo an irreducible
/// polynomial of degree `r n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFieldExt {
    p: u32,
    r: u32,
    n: u32,
    modulus: Poly,
}

const EXHAUSTIVE_LIMIT: u64 = 10_000;
const SAMPLE_CAP: u64 = 1_000_000;
const SEARCH_SEED: u64 = 0x6e6f_726d;

fn pinned(p: u32, r: u32, n: u32) -> Option<&'static [i64]> {
    Some(match (p, r, n) {
        (3, 1, 2) => &[1, 0, 1],
        (3, 1, 3) => &[1, 2, 0, 1],
        (5, 1, 2) => &[2, 0, 1],
        (2, 2, 2) => &[1, 1, 0, 0, 1],
        _ => return None,
    })
}

fn pow_mod(base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut acc = Poly::one(base.modulus());
    let mut b = base.div_rem(m).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &b).div_rem(m).1;
        }
        b = (&b * &b).div_rem(m).1;
        e >>= 1;
    }
    acc
}

fn is_irreducible(f: &Poly) -> bool {
    let Some(d) = f.degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let p = f.modulus();
    let x = Poly::var(p);
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = pow_mod(&xp, p as u64, f);
        if !(&xp - &x).gcd(f).is_one() {
            return false;
        }
    }
    true
}

impl FiniteFieldExt {
    /// The extension with its pinned modulus.
    pub fn pinned(p: u64, r: u32, n: u32) -> Result<Self> {
        let p = check_prime(p)?;
        let coeffs = pinned(p, r, n)
            .ok_or_else(|| Error::Unsupported(format!("no pinned modulus for p={p}, r={r}, n={n}")))?;
        Self::new(p as u64, r, n, Poly::from_coeffs(p, coeffs))
    }

    pub fn new(p: u64, r: u32, n: u32, modulus: Poly) -> Result<Self> {
        let p = check_prime(p)?;
        if r == 0 || n == 0 {
            return Err(Error::InvalidIndex("r and n must be at least 1".into()));
        }
        if modulus.modulus() != p {
            return Err(Error::ModulusMismatch(modulus.modulus(), p));
        }
        if modulus.degree() != Some((r * n) as usize) || !modulus.is_monic() || !is_irreducible(&modulus) {
            return Err(Error::InconsistentStructure(format!(
                "{modulus} is not a monic irreducible of degree {}",
                r * n
            )));
        }
        Ok(FiniteFieldExt { p, r, n, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Size of the base field.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.r)
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Size of the extension field.
    pub fn order(&self) -> u64 {
        self.q().pow(self.n)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.div_rem(&self.modulus).1
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&(a * b))
    }

    pub fn pow(&self, a: &Poly, e: u64) -> Poly {
        pow_mod(a, e, &self.modulus)
    }

    /// Element number `k` in the enumeration by base-`p` digits.
    pub fn element(&self, mut k: u64) -> Poly {
        let mut coeffs = Vec::new();
        while k > 0 {
            coeffs.push((k % self.p as u64) as i64);
            k /= self.p as u64;
        }
        Poly::from_coeffs(self.p, &coeffs)
    }

    pub fn in_base(&self, a: &Poly) -> bool {
        self.pow(a, self.q()) == self.reduce(a)
    }

    /// `Π_{k<n} b^{q^k}`.
    pub fn norm(&self, b: &Poly) -> Result<Poly> {
        let b = self.reduce(b);
        let mut acc = Poly::one(self.p);
        let mut conj = b;
        for _ in 0..self.n {
            acc = self.mul(&acc, &conj);
            conj = self.pow(&conj, self.q());
        }
        if !self.in_base(&acc) {
            return Err(Error::Internal(format!("norm {acc} left the base field")));
        }
        Ok(acc)
    }

    /// Some `b` with `N(b) = c`; the least in enumeration order when the
    /// field is small, otherwise the first seeded sample that works.
    pub fn solve_norm(&self, c: &Poly) -> Result<Poly> {
        let c = self.reduce(c);
        if c.is_zero() {
            return Err(Error::NoSolution("the norm of a unit is never zero".into()));
        }
        if !self.in_base(&c) {
            return Err(Error::InvalidIndex(format!("{c} is not in the base field")));
        }
        let order = self.order();
        if order > SAMPLE_CAP {
            return Err(Error::Unsupported(format!("field of size {order} is too large")));
        }
        let hits = |k: u64| {
            let b = self.element(k);
            matches!(self.norm(&b), Ok(nb) if nb == c)
        };
        let found = if order <= EXHAUSTIVE_LIMIT {
            (1..order).into_par_iter().find_first(|&k| hits(k))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
            (0..SAMPLE_CAP).map(|_| rng.gen_range(1..order)).find(|&k| hits(k))
        };
        found
            .map(|k| self.element(k))
            .ok_or_else(|| Error::NoSolution(format!("no preimage of {c} found")))
    }
}

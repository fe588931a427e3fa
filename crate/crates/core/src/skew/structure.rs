use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::series::SkewSeries;
use crate::error::{Error, Result};
use crate::resfield::{check_prime, Mobius, Poly, RatFunc};

type Coeffs = Arc<Vec<RatFunc>>;

#[derive(Default)]
struct Cache {
    phi: RwLock<HashMap<(i64, RatFunc), Coeffs>>,
    pow: RwLock<HashMap<(i64, usize), Coeffs>>,
}

impl Cache {
    fn get_phi(&self, m: i64, f: &RatFunc, prec: usize) -> Option<Coeffs> {
        let map = self.phi.read().expect("cache lock poisoned");
        map.get(&(m, f.clone())).filter(|v| v.len() >= prec).cloned()
    }

    fn put_phi(&self, m: i64, f: &RatFunc, v: Coeffs) {
        let mut map = self.phi.write().expect("cache lock poisoned");
        let slot = map.entry((m, f.clone())).or_insert_with(|| v.clone());
        if slot.len() < v.len() {
            *slot = v;
        }
    }

    fn get_pow(&self, m: i64, k: usize, prec: usize) -> Option<Coeffs> {
        let map = self.pow.read().expect("cache lock poisoned");
        map.get(&(m, k)).filter(|v| v.len() >= prec).cloned()
    }

    fn put_pow(&self, m: i64, k: usize, v: Coeffs) {
        let mut map = self.pow.write().expect("cache lock poisoned");
        let slot = map.entry((m, k)).or_insert_with(|| v.clone());
        if slot.len() < v.len() {
            *slot = v;
        }
    }

    fn len(&self) -> usize {
        self.phi.read().map(|m| m.len()).unwrap_or(0) + self.pow.read().map(|m| m.len()).unwrap_or(0)
    }
}

/// The ring `F_p(t)((z))` with `z t z^{-1} = Σ_k c_k z^k`, known to `N` terms.
///
/// Conjugation results are memoized inside the structure; the cache is
/// synchronized, so a structure can be shared between threads. Cloning
/// yields an empty cache.
pub struct SkewStructure {
    p: u32,
    alpha: Mobius,
    conj: Vec<RatFunc>,
    precision: usize,
    alpha_order: u32,
    alpha_pows: Vec<Mobius>,
    cache: Cache,
}

impl Clone for SkewStructure {
    fn clone(&self) -> Self {
        SkewStructure {
            p: self.p,
            alpha: self.alpha,
            conj: self.conj.clone(),
            precision: self.precision,
            alpha_order: self.alpha_order,
            alpha_pows: self.alpha_pows.clone(),
            cache: Cache::default(),
        }
    }
}

impl PartialEq for SkewStructure {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.alpha == other.alpha
            && self.precision == other.precision
            && self.conj == other.conj
    }
}

impl Eq for SkewStructure {}

impl fmt::Debug for SkewStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkewStructure")
            .field("p", &self.p)
            .field("alpha", &self.alpha.to_string())
            .field("precision", &self.precision)
            .field("conj", &self.conj.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

pub fn build_structure(
    p: u64,
    alpha: Mobius,
    conj: Vec<RatFunc>,
    precision: usize,
) -> Result<SkewStructure> {
    SkewStructure::new(p, alpha, conj, precision)
}

impl SkewStructure {
    pub fn new(p: u64, alpha: Mobius, mut conj: Vec<RatFunc>, precision: usize) -> Result<Self> {
        let p = check_prime(p)?;
        if alpha.modulus() != p {
            return Err(Error::ModulusMismatch(alpha.modulus(), p));
        }
        if precision == 0 {
            return Err(Error::EmptyPrecision);
        }
        if precision < 2 {
            return Err(Error::InconsistentStructure(
                "precision must be at least 2".into(),
            ));
        }
        if conj.is_empty() {
            return Err(Error::InconsistentStructure(
                "the conjugation series needs its constant term".into(),
            ));
        }
        if conj.len() > precision {
            return Err(Error::InconsistentStructure(format!(
                "{} conjugation terms given for precision {precision}",
                conj.len()
            )));
        }
        for c in &conj {
            if c.modulus() != p {
                return Err(Error::ModulusMismatch(c.modulus(), p));
            }
            c.check_degree()?;
        }
        let expected = alpha.image_of_t();
        if conj[0] != expected {
            return Err(Error::InconsistentStructure(format!(
                "constant term {} differs from alpha(t) = {expected}",
                conj[0]
            )));
        }
        conj.resize(precision, RatFunc::zero(p));
        let alpha_order = alpha.order();
        let mut alpha_pows = vec![Mobius::identity(p)];
        for k in 1..alpha_order as usize {
            alpha_pows.push(alpha_pows[k - 1].compose(&alpha));
        }
        Ok(SkewStructure {
            p,
            alpha,
            conj,
            precision,
            alpha_order,
            alpha_pows,
            cache: Cache::default(),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn alpha(&self) -> &Mobius {
        &self.alpha
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn alpha_order(&self) -> u32 {
        self.alpha_order
    }

    /// `c_0, …, c_{N-1}`.
    pub fn conj(&self) -> &[RatFunc] {
        &self.conj
    }

    /// Number of memoized conjugation results.
    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    /// Same presentation at a lower precision.
    pub fn with_precision(&self, precision: usize) -> Result<SkewStructure> {
        let mut conj = self.conj.clone();
        conj.truncate(precision.max(1));
        while conj.len() > 1 && conj.last().is_some_and(|c| c.is_zero()) {
            conj.pop();
        }
        SkewStructure::new(self.p as u64, self.alpha, conj, precision)
    }

    pub fn t(&self) -> RatFunc {
        RatFunc::t(self.p)
    }

    /// `α^m(f)`.
    pub fn alpha_pow(&self, m: i64, f: &RatFunc) -> RatFunc {
        let k = m.rem_euclid(self.alpha_order as i64) as usize;
        if k == 0 {
            return f.clone();
        }
        self.alpha_pows[k].apply(f)
    }

    fn check_prec(&self, prec: usize) -> Result<()> {
        if prec == 0 {
            return Err(Error::EmptyPrecision);
        }
        if prec > self.precision {
            return Err(Error::PrecisionExceeded {
                requested: prec,
                available: self.precision,
            });
        }
        Ok(())
    }

    /// `z^m a z^{-m}` to `prec` coefficients.
    pub fn conj_pow(&self, m: i64, a: &RatFunc, prec: usize) -> Result<SkewSeries> {
        self.check_prec(prec)?;
        if a.is_zero() {
            return Ok(SkewSeries::zero(self.p, prec as i64));
        }
        let v = self.phi(m, a, prec)?;
        Ok(SkewSeries::from_coeffs(self.p, 0, v[..prec].to_vec()))
    }

    /// Coefficient of `z^i` in `z^m a z^{-m}`; zero for `m = 0`, `i >= 1`.
    pub fn delta(&self, m: i64, i: usize, a: &RatFunc) -> Result<RatFunc> {
        if i >= self.precision {
            return Err(Error::PrecisionExceeded {
                requested: i,
                available: self.precision,
            });
        }
        if m == 0 {
            return Ok(if i == 0 { a.clone() } else { RatFunc::zero(self.p) });
        }
        if a.is_zero() {
            return Ok(a.clone());
        }
        Ok(self.phi(m, a, i + 1)?[i].clone())
    }

    /// The constant series `f`.
    pub fn lift_embed(&self, f: &RatFunc) -> SkewSeries {
        SkewSeries::constant(f, self.precision)
    }

    /// `z^k` at full precision.
    pub fn z_pow(&self, k: i64) -> SkewSeries {
        SkewSeries::z_pow(self.p, k, self.precision)
    }

    pub fn mul(&self, a: &SkewSeries, b: &SkewSeries) -> Result<SkewSeries> {
        if a.modulus() != self.p || b.modulus() != self.p {
            return Err(Error::ModulusMismatch(a.modulus().max(b.modulus()), self.p));
        }
        if a.is_zero() || b.is_zero() {
            let abs = (a.start() + b.abs_precision()).min(a.abs_precision() + b.start());
            return Ok(SkewSeries::zero(self.p, abs));
        }
        let prec = a.prec().min(b.prec()).min(self.precision);
        let out = self.mul_core(a.coeffs(), a.start(), b.coeffs(), prec)?;
        Ok(SkewSeries::from_coeffs(self.p, a.start() + b.start(), out))
    }

    pub fn inv(&self, a: &SkewSeries) -> Result<SkewSeries> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let prec = a.prec().min(self.precision);
        let mut g = vec![RatFunc::zero(self.p); prec];
        g[0] = RatFunc::one(self.p);
        let x = self.divide(&g, a.coeffs(), -a.start(), prec)?;
        Ok(SkewSeries::from_coeffs(self.p, -a.start(), x))
    }

    /// `Σ_k a_k z^{shift+k} · Σ_j b_j z^j` as coefficients from `z^shift`.
    fn mul_core(
        &self,
        a: &[RatFunc],
        shift: i64,
        b: &[RatFunc],
        prec: usize,
    ) -> Result<Vec<RatFunc>> {
        let mut out = vec![RatFunc::zero(self.p); prec];
        for (i, ai) in a.iter().enumerate().take(prec) {
            if ai.is_zero() {
                continue;
            }
            let m = shift + i as i64;
            for (j, bj) in b.iter().enumerate().take(prec - i) {
                if bj.is_zero() {
                    continue;
                }
                if m == 0 || bj.is_constant() {
                    out[i + j] = &out[i + j] + &(ai * bj);
                    continue;
                }
                let rest = prec - i - j;
                let r = self.phi(m, bj, rest)?;
                for (k, rk) in r.iter().enumerate().take(rest) {
                    if !rk.is_zero() {
                        out[i + j + k] = &out[i + j + k] + &(ai * rk);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Solve `X ⋆ H = G` where `X = Σ x_n z^{shift+n}`, `H = Σ h_b z^b`
    /// with `h_0 ≠ 0`, and `G` is given from `z^shift`.
    fn divide(&self, g: &[RatFunc], h: &[RatFunc], shift: i64, prec: usize) -> Result<Vec<RatFunc>> {
        let zero = RatFunc::zero(self.p);
        let mut acc = vec![zero.clone(); prec];
        let mut x = Vec::with_capacity(prec);
        for n in 0..prec {
            let m = shift + n as i64;
            let pivot = self.alpha_pow(m, &h[0]);
            let rhs = &g.get(n).cloned().unwrap_or_else(|| zero.clone()) - &acc[n];
            let xn = rhs.checked_div(&pivot)?;
            xn.check_degree()?;
            if !xn.is_zero() {
                for (b, hb) in h.iter().enumerate().take(prec - n) {
                    if hb.is_zero() {
                        continue;
                    }
                    if m == 0 || hb.is_constant() {
                        acc[n + b] = &acc[n + b] + &(&xn * hb);
                        continue;
                    }
                    let rest = prec - n - b;
                    let r = self.phi(m, hb, rest)?;
                    for (c, rc) in r.iter().enumerate().take(rest) {
                        if !rc.is_zero() {
                            acc[n + b + c] = &acc[n + b + c] + &(&xn * rc);
                        }
                    }
                }
            }
            x.push(xn);
        }
        Ok(x)
    }

    /// Coefficients of `z^m f z^{-m}`, at least `prec` of them.
    pub(crate) fn phi(&self, m: i64, f: &RatFunc, prec: usize) -> Result<Coeffs> {
        debug_assert!(prec >= 1 && prec <= self.precision);
        if m == 0 || f.is_constant() {
            let mut v = vec![RatFunc::zero(self.p); prec];
            v[0] = f.clone();
            return Ok(Arc::new(v));
        }
        if prec == 1 {
            return Ok(Arc::new(vec![self.alpha_pow(m, f)]));
        }
        if let Some(v) = self.cache.get_phi(m, f, prec) {
            return Ok(v);
        }
        let v = if *f == self.t() {
            self.conj_of_t(m, prec)?
        } else if f.is_poly() {
            self.eval_poly(m, f.num(), prec)?
        } else {
            let g = self.eval_poly(m, f.num(), prec)?;
            let h = self.eval_poly(m, f.den(), prec)?;
            self.divide(&g, &h, 0, prec)?
        };
        for c in &v {
            c.check_degree()?;
        }
        let v = Arc::new(v);
        self.cache.put_phi(m, f, v.clone());
        Ok(v)
    }

    /// `Σ_k f_k (z^m t z^{-m})^k`.
    fn eval_poly(&self, m: i64, f: &Poly, prec: usize) -> Result<Vec<RatFunc>> {
        let mut out = vec![RatFunc::zero(self.p); prec];
        for (k, &fk) in f.coeffs().iter().enumerate() {
            if fk == 0 {
                continue;
            }
            if k == 0 {
                out[0] = &out[0] + &RatFunc::constant(self.p, fk as i64);
                continue;
            }
            let pw = self.pow_t(m, k, prec)?;
            for (n, c) in pw.iter().take(prec).enumerate() {
                if !c.is_zero() {
                    out[n] = &out[n] + &c.scale(fk);
                }
            }
        }
        Ok(out)
    }

    /// `(z^m t z^{-m})^k`.
    fn pow_t(&self, m: i64, k: usize, prec: usize) -> Result<Coeffs> {
        if k == 1 {
            return self.phi(m, &self.t(), prec);
        }
        if let Some(v) = self.cache.get_pow(m, k, prec) {
            return Ok(v);
        }
        let base = self.phi(m, &self.t(), prec)?;
        let mut start = 1;
        let mut cur = base.clone();
        for j in (2..k).rev() {
            if let Some(v) = self.cache.get_pow(m, j, prec) {
                start = j;
                cur = v;
                break;
            }
        }
        for j in start + 1..=k {
            let next = Arc::new(self.mul_core(&cur[..prec], 0, &base[..prec], prec)?);
            self.cache.put_pow(m, j, next.clone());
            cur = next;
        }
        Ok(cur)
    }

    /// `z^m t z^{-m}`.
    fn conj_of_t(&self, m: i64, prec: usize) -> Result<Vec<RatFunc>> {
        let zero = RatFunc::zero(self.p);
        if m == 1 {
            return Ok(self.conj[..prec].to_vec());
        }
        if m == -1 {
            let mut y: Vec<RatFunc> = Vec::with_capacity(prec);
            let mut images: Vec<Coeffs> = Vec::with_capacity(prec);
            let t = self.t();
            for n in 0..prec {
                let mut s = if n == 0 { t.clone() } else { zero.clone() };
                for (l, img) in images.iter().enumerate() {
                    s = &s - &img[n - l];
                }
                let yn = self.alpha_pow(-1, &s);
                if n + 1 < prec {
                    images.push(if yn.is_zero() {
                        Arc::new(vec![zero.clone(); prec - n])
                    } else {
                        self.phi(1, &yn, prec - n)?
                    });
                }
                y.push(yn);
            }
            return Ok(y);
        }
        let (inner, step) = if m > 1 {
            (self.conj[..prec].to_vec(), m - 1)
        } else {
            (self.phi(-1, &self.t(), prec)?[..prec].to_vec(), m + 1)
        };
        let mut out = vec![zero; prec];
        for (l, c) in inner.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = self.phi(step, c, prec - l)?;
            for (k, rk) in r.iter().enumerate().take(prec - l) {
                if !rk.is_zero() {
                    out[l + k] = &out[l + k] + rk;
                }
            }
        }
        Ok(out)
    }
}

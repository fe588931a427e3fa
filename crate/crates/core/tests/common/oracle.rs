//! Brute-force normal-form multiplier for polynomial presentations.
//!
//! Elements are `Σ_n e_n(t) z^n` with polynomial coefficients and `n >= 0`,
//! truncated at `z^q`. Left multiplication by `z` is rewritten with
//! `z t^k = (Σ_j c_j z^j)(z t^{k-1})`; the recursion terminates because
//! every rewrite either lowers `k` or the remaining truncation order.

use std::collections::HashMap;

use skewforge_core::{Poly, RatFunc, SkewSeries};

type P = Vec<u64>;
type Ser = Vec<P>;

pub struct Oracle {
    p: u64,
    conj: Vec<P>,
    memo: HashMap<(usize, usize), Ser>,
}

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

impl Oracle {
    /// `conj[j]` lists the coefficients of `c_j` in ascending degree.
    pub fn new(p: u64, conj: &[Vec<i64>]) -> Self {
        let conj = conj
            .iter()
            .map(|c| trim(c.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()))
            .collect();
        Oracle {
            p,
            conj,
            memo: HashMap::new(),
        }
    }

    fn add(&self, a: &P, b: &P) -> P {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }

    fn mul(&self, a: &P, b: &P) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(out)
    }

    fn zero_ser(q: usize) -> Ser {
        vec![Vec::new(); q]
    }

    /// `z t^k` truncated at `z^q`.
    fn z_tk(&mut self, k: usize, q: usize) -> Ser {
        if let Some(s) = self.memo.get(&(k, q)) {
            return s.clone();
        }
        let mut out = Self::zero_ser(q);
        if k == 0 {
            if q > 1 {
                out[1] = vec![1];
            }
        } else {
            let prev = self.z_tk(k - 1, q);
            let conj = self.conj.clone();
            for (j, c) in conj.iter().enumerate() {
                if c.is_empty() || j >= q {
                    continue;
                }
                let mut y = prev.clone();
                for _ in 0..j {
                    y = self.left_z(&y, q);
                }
                for n in 0..q {
                    let term = self.mul(c, &y[n]);
                    out[n] = self.add(&out[n], &term);
                }
            }
        }
        self.memo.insert((k, q), out.clone());
        out
    }

    /// `z · y` truncated at `z^q`.
    pub fn left_z(&mut self, y: &Ser, q: usize) -> Ser {
        let mut out = Self::zero_ser(q);
        for n in 0..q.min(y.len()) {
            for (k, &e) in y[n].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let zk = self.z_tk(k, q - n);
                for (r, c) in zk.iter().enumerate() {
                    let term: P = c.iter().map(|x| x * e % self.p).collect();
                    out[n + r] = self.add(&out[n + r], &term);
                }
            }
        }
        out
    }

    /// `A · B` for series with nonnegative exponents.
    pub fn mul_series(&mut self, a: &Ser, b: &Ser, q: usize) -> Ser {
        let mut out = Self::zero_ser(q);
        let mut zb = b.clone();
        zb.resize(q, Vec::new());
        for i in 0..q.min(a.len()) {
            if i > 0 {
                zb = self.left_z(&zb, q);
            }
            if a[i].is_empty() {
                continue;
            }
            for n in 0..q {
                let term = self.mul(&a[i], &zb[n]);
                out[n] = self.add(&out[n], &term);
            }
        }
        out
    }

    /// Coefficients of `z^m a z^{-m}` for `m >= 1`, read off `z^m a`.
    pub fn conj_pow(&mut self, m: usize, a: &P, q: usize) -> Ser {
        let mut y = Self::zero_ser(q + m);
        y[0] = a.clone();
        for _ in 0..m {
            y = self.left_z(&y, q + m);
        }
        y[m..].to_vec()
    }
}

pub fn to_poly_vec(f: &RatFunc) -> P {
    assert!(f.is_poly(), "oracle handles polynomial coefficients only");
    f.num().coeffs().iter().map(|&c| c as u64).collect()
}

/// Series with start `val >= 0` as a dense vector of length `q`.
pub fn from_series(s: &SkewSeries, q: usize) -> Ser {
    let mut out = vec![Vec::new(); q];
    if let Some(v) = s.val() {
        for (k, c) in s.coeffs().iter().enumerate() {
            let n = v as usize + k;
            if n < q {
                out[n] = to_poly_vec(c);
            }
        }
    }
    out
}

pub fn to_ratfuncs(p: u32, s: &Ser) -> Vec<RatFunc> {
    s.iter()
        .map(|c| {
            let v: Vec<i64> = c.iter().map(|&x| x as i64).collect();
            RatFunc::from_poly(Poly::from_coeffs(p, &v))
        })
        .collect()
}

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resfield::{FpElem, RatFunc};
use crate::skew::{CheckReport, IdentityCheck, SkewStructure};

use super::reparam::{reparam, Reparam};

/// A value known exactly, or only bounded below by the precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Finite(usize),
    AtLeast(usize),
}

impl Bound {
    pub fn finite(self) -> Option<usize> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::AtLeast(_) => None,
        }
    }
}

fn require_identity(s: &SkewStructure, what: &str) -> Result<()> {
    if !s.alpha().is_identity() {
        return Err(Error::NotDefined(format!("{what} needs alpha = id")));
    }
    Ok(())
}

/// Least `j >= 1` with `δ_j(t) != 0`.
pub fn local_height(s: &SkewStructure) -> Result<Bound> {
    require_identity(s, "local height")?;
    Ok(match (1..s.precision()).find(|&j| !s.conj()[j].is_zero()) {
        Some(j) => Bound::Finite(j),
        None => Bound::AtLeast(s.precision()),
    })
}

/// Least `i >= 1` with `δ_i(a) != 0`.
pub fn element_height(s: &SkewStructure, a: &RatFunc) -> Result<Bound> {
    for j in 1..s.precision() {
        if !s.delta(1, j, a)?.is_zero() {
            return Ok(Bound::Finite(j));
        }
    }
    Ok(Bound::AtLeast(s.precision()))
}

#[derive(Clone, Debug)]
pub struct DOutcome {
    pub i: usize,
    pub d: Bound,
    pub trail: Vec<Reparam>,
    pub structure: SkewStructure,
}

/// Least `k > i` with `₋ᵢδ_k(a) != 0`.
fn d_prime(s: &SkewStructure, a: &RatFunc, i: usize) -> Result<Bound> {
    let m = -(i as i64);
    for k in i + 1..s.precision() {
        if !s.delta(m, k, a)?.is_zero() {
            return Ok(Bound::Finite(k));
        }
    }
    Ok(Bound::AtLeast(s.precision()))
}

/// The invariant `d(u, a)`, maximized over parameters by successive shifts.
pub fn d_invariant(s: &SkewStructure, a: &RatFunc) -> Result<DOutcome> {
    require_identity(s, "d")?;
    if a.is_constant() {
        return Err(Error::NotDefined("constants commute with z".into()));
    }
    let p = s.p() as usize;
    let i = match element_height(s, a)? {
        Bound::Finite(i) => i,
        Bound::AtLeast(n) => {
            return Err(Error::NotDefined(format!("i(u,s) is at least {n}")));
        }
    };
    if i % p == 0 {
        return Err(Error::Unsupported(format!("p divides i = {i}")));
    }
    let m = -(i as i64);
    let mut cur = s.clone();
    let mut trail = Vec::new();
    loop {
        let d = match d_prime(&cur, a, i)? {
            Bound::Finite(d) => d,
            at_least => {
                return Ok(DOutcome {
                    i,
                    d: at_least,
                    trail,
                    structure: cur,
                })
            }
        };
        let gap = (d as i64 - 2 * i as i64).rem_euclid(p as i64) as u32;
        if gap == 0 {
            return Ok(DOutcome {
                i,
                d: Bound::Finite(d),
                trail,
                structure: cur,
            });
        }
        let den = cur.delta(m, i, a)?.scale(gap);
        let b = -&cur.delta(m, d, a)?.checked_div(&den)?;
        let r = Reparam::Shift { b, q: d - i };
        let next = reparam(&cur, &r)?;
        if !next.delta(m, d, a)?.is_zero() {
            return Err(Error::Internal(format!("index {d} survived the shift")));
        }
        trail.push(r);
        cur = next;
    }
}

/// The coefficients `c_{n,m,k}` writing `ₙδ_m` on F_p(t) through powers of
/// `d/dt`, keyed by `(m, k)`.
#[derive(Clone, Debug)]
pub struct CTable {
    pub n: i64,
    pub j: usize,
    pub kmax: usize,
    pub entries: BTreeMap<(usize, usize), RatFunc>,
}

struct CMemo<'a> {
    s: &'a SkewStructure,
    j: usize,
    memo: HashMap<(i64, usize, usize), RatFunc>,
}

impl CMemo<'_> {
    fn get(&mut self, n: i64, m: usize, k: usize) -> Result<RatFunc> {
        let p = self.s.p();
        if m < k * self.j {
            return Ok(RatFunc::zero(p));
        }
        if k == 1 {
            return self.s.delta(n, m, &self.s.t());
        }
        if let Some(v) = self.memo.get(&(n, m, k)) {
            return Ok(v.clone());
        }
        let t = self.s.t();
        let mut acc = RatFunc::zero(p);
        for s in self.j..=m - (k - 1) * self.j {
            let d = self.s.delta(n, s, &t)?;
            if d.is_zero() {
                continue;
            }
            acc = &acc + &(&d * &self.get(n + s as i64, m - s, k - 1)?);
        }
        let v = acc.scale(FpElem::new(k as i64, p).inv()?.value());
        self.memo.insert((n, m, k), v.clone());
        Ok(v)
    }
}

pub fn c_table(s: &SkewStructure, n: i64, j: usize, kmax: usize) -> Result<CTable> {
    require_identity(s, "c_table")?;
    if n == 0 {
        return Err(Error::InvalidIndex("n must be nonzero".into()));
    }
    if kmax == 0 {
        return Err(Error::InvalidIndex("kmax must be at least 1".into()));
    }
    if kmax >= s.p() as usize {
        return Err(Error::Unsupported(format!("kmax = {kmax} must be below p")));
    }
    if local_height(s)? != Bound::Finite(j) {
        return Err(Error::InvalidIndex(format!("{j} is not the local height")));
    }
    let top = (kmax + 1) * j - 1;
    if top >= s.precision() {
        return Err(Error::PrecisionExceeded {
            requested: top,
            available: s.precision(),
        });
    }
    let mut memo = CMemo {
        s,
        j,
        memo: HashMap::new(),
    };
    let mut entries = BTreeMap::new();
    for m in j..=top {
        for k in 1..=m / j {
            entries.insert((m, k), memo.get(n, m, k)?);
        }
    }
    Ok(CTable { n, j, kmax, entries })
}

impl CTable {
    /// `c_{n,kj,k} = (k!)^{-1} ₙδ_j(t) ₙ₊ⱼδ_j(t) ⋯ ₙ₊₍ₖ₋₁₎ⱼδ_j(t)`.
    pub fn closed_form(s: &SkewStructure, n: i64, j: usize, k: usize) -> Result<RatFunc> {
        let p = s.p();
        let t = s.t();
        let mut acc = RatFunc::one(p);
        let mut fact = FpElem::new(1, p);
        for l in 0..k {
            acc = &acc * &s.delta(n + (l * j) as i64, j, &t)?;
            fact = fact * FpElem::new(l as i64 + 1, p);
        }
        Ok(acc.scale(fact.inv()?.value()))
    }

    pub fn check_closed_form(&self, s: &SkewStructure) -> Result<CheckReport> {
        let mut checks = Vec::new();
        for k in 1..=self.kmax {
            checks.push(IdentityCheck {
                law: "c_table/closed",
                lhs: self.entries[&(k * self.j, k)].clone(),
                rhs: Self::closed_form(s, self.n, self.j, k)?,
            });
        }
        Ok(CheckReport { checks })
    }

    /// `ₙδ_m(f) = Σ_k c_{n,m,k} (d/dt)^k f` for every tabulated `m`.
    pub fn check_operator(&self, s: &SkewStructure, f: &RatFunc) -> Result<CheckReport> {
        let p = s.p();
        let mut derivs = vec![f.clone()];
        for k in 1..=self.kmax {
            derivs.push(derivs[k - 1].derive());
        }
        let mut rows: BTreeMap<usize, RatFunc> = BTreeMap::new();
        for (&(m, k), c) in &self.entries {
            let row = rows.entry(m).or_insert_with(|| RatFunc::zero(p));
            *row = &*row + &(c * &derivs[k]);
        }
        let mut checks = Vec::new();
        for (m, rhs) in rows {
            checks.push(IdentityCheck {
                law: "c_table/operator",
                lhs: s.delta(self.n, m, f)?,
                rhs,
            });
        }
        Ok(CheckReport { checks })
    }
}

/// `c_k = (i+1)(2i+1)⋯((k-1)i+1) / k!` in F_p.
pub fn svva_constants(i: usize, k: usize, p: u32) -> Result<FpElem> {
    if k == 0 {
        return Err(Error::InvalidIndex("k must be at least 1".into()));
    }
    if k >= p as usize {
        return Err(Error::Unsupported(format!("k = {k} must be below p = {p}")));
    }
    let mut num = FpElem::new(1, p);
    let mut den = FpElem::new(1, p);
    for l in 1..k {
        num = num * FpElem::new((i * l + 1) as i64, p);
    }
    for l in 1..=k {
        den = den * FpElem::new(l as i64, p);
    }
    Ok(num * den.inv()?)
}

/// `δ_{ki}(f) = c_k δ_i^k(f)`.
pub fn check_svva(s: &SkewStructure, i: usize, k: usize, f: &RatFunc) -> Result<IdentityCheck> {
    let c = svva_constants(i, k, s.p())?;
    let mut g = f.clone();
    for _ in 0..k {
        g = s.delta(1, i, &g)?;
    }
    Ok(IdentityCheck {
        law: "svva",
        lhs: s.delta(1, k * i, f)?,
        rhs: g.scale(c.value()),
    })
}

/// Summary of the invariants of a structure at its generator.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub alpha_order: u32,
    pub local_height: Option<Bound>,
    pub d: Option<Bound>,
    pub trail: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub obstructions: Vec<(usize, String)>,
}

pub fn invariant_report(s: &SkewStructure) -> Result<InvariantReport> {
    let mut report = InvariantReport {
        alpha_order: s.alpha_order(),
        local_height: None,
        d: None,
        trail: Vec::new(),
        obstructions: Vec::new(),
    };
    if !s.alpha().is_identity() {
        return Ok(report);
    }
    let h = local_height(s)?;
    report.local_height = Some(h);
    let Bound::Finite(i) = h else {
        return Ok(report);
    };
    if i % s.p() as usize == 0 {
        report.obstructions.push((i, "p divides the local height".into()));
        return Ok(report);
    }
    let out = d_invariant(s, &s.t())?;
    if let Bound::Finite(d) = out.d {
        if (d as i64 - 2 * out.i as i64).rem_euclid(s.p() as i64) != 0 {
            return Err(Error::Internal(format!("d = {d} is not 2i mod p")));
        }
    }
    report.d = Some(out.d);
    report.trail = out.trail.iter().map(Reparam::to_json).collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resfield::{parse_ratfunc, Mobius};

    fn rf(s: &str, p: u32) -> RatFunc {
        parse_ratfunc(s, p).unwrap()
    }

    fn build(p: u32, conj: &[&str], n: usize) -> SkewStructure {
        SkewStructure::new(p as u64, Mobius::identity(p), conj.iter().map(|c| rf(c, p)).collect(), n).unwrap()
    }

    #[test]
    fn local_height_examples() {
        assert_eq!(local_height(&build(3, &["t", "1"], 16)).unwrap(), Bound::Finite(1));
        assert_eq!(local_height(&build(5, &["t", "0", "0", "t^2"], 16)).unwrap(), Bound::Finite(3));
        assert_eq!(local_height(&build(3, &["t"], 16)).unwrap(), Bound::AtLeast(16));
        let a = Mobius::scaling(5, 2).unwrap();
        let s = SkewStructure::new(5, a, vec![rf("2*t", 5)], 8).unwrap();
        assert!(matches!(local_height(&s), Err(Error::NotDefined(_))));
    }

    #[test]
    fn d_of_reference() {
        let s = build(3, &["t", "1"], 16);
        let out = d_invariant(&s, &s.t()).unwrap();
        assert_eq!(out.i, 1);
        assert_eq!(out.d, Bound::AtLeast(16));
        assert!(out.trail.is_empty());
        assert!(matches!(d_invariant(&s, &rf("2", 3)), Err(Error::NotDefined(_))));
        let s = build(3, &["t", "0", "0", "1"], 8);
        assert!(matches!(d_invariant(&s, &s.t()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn c_table_examples() {
        let s = build(5, &["t", "1"], 8);
        let table = c_table(&s, 1, 1, 2).unwrap();
        assert_eq!(table.entries[&(2, 2)], rf("1", 5));
        assert_eq!(table.entries[&(1, 1)], s.delta(1, 1, &s.t()).unwrap());
        assert!(table.check_closed_form(&s).unwrap().holds());
        assert!(table.check_operator(&s, &rf("t^2", 5)).unwrap().holds());
        assert_eq!(s.delta(1, 2, &rf("t^2", 5)).unwrap(), rf("2", 5));
        assert!(matches!(c_table(&s, 1, 1, 5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn c_table_vanishing_pattern() {
        let s = build(5, &["t", "1"], 8);
        let table = c_table(&s, 5, 1, 3).unwrap();
        for k in 1..=3 {
            assert!(table.entries[&(k, k)].is_zero());
        }
        let table = c_table(&s, 2, 1, 4).unwrap();
        assert!(!table.entries[&(3, 3)].is_zero());
        assert!(table.entries[&(4, 4)].is_zero());
    }

    #[test]
    fn svva_examples() {
        assert_eq!(svva_constants(1, 2, 5).unwrap().value(), 1);
        assert_eq!(svva_constants(7, 1, 5).unwrap().value(), 1);
        assert_eq!(svva_constants(2, 2, 5).unwrap().value(), 4);
        assert!(matches!(svva_constants(1, 5, 5), Err(Error::Unsupported(_))));
        let s = build(5, &["t", "1"], 8);
        assert!(check_svva(&s, 1, 2, &rf("t^2", 5)).unwrap().holds());
    }

    #[test]
    fn report_of_reference() {
        let s = build(3, &["t", "1"], 16);
        let r = invariant_report(&s).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"alpha_order":1,"local_height":{"finite":1},"d":{"at_least":16},"trail":[]})
        );
    }
}

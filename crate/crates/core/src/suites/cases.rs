use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebras::{preset, Preset};
use crate::error::{Error, Result};
use crate::gen;
use crate::io::print_structure;
use crate::resfield::{FpElem, Mobius, RatFunc};
use crate::skew::{check_flyii, check_ooo, check_triviall, CheckReport, DeltaSource, IdentityCheck, SkewSeries, SkewStructure};
use crate::transforms::{
    c_table, change_generator, check_svva, d_invariant, element_height, local_height, predict, reembed, reparam,
    Bound, Reembed, Reparam,
};

use super::Suite;

/// One randomized input. Fields a suite does not use keep their defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub structure: SkewStructure,
    pub a: RatFunc,
    pub b: RatFunc,
    pub m: i64,
    pub i: usize,
    pub q: usize,
    pub variant: u8,
}

impl Case {
    fn new(structure: SkewStructure) -> Self {
        let p = structure.p();
        Case {
            structure,
            a: RatFunc::t(p),
            b: RatFunc::one(p),
            m: 1,
            i: 1,
            q: 1,
            variant: 0,
        }
    }

    pub fn inputs(&self, suite: Suite) -> serde_json::Value {
        let s: serde_json::Value = serde_json::from_str(&print_structure(&self.structure)).expect("valid json");
        let mut v = json!({"structure": s, "a": self.a.to_string()});
        let obj = v.as_object_mut().expect("object");
        let mut put = |k: &str, x: serde_json::Value| {
            obj.insert(k.into(), x);
        };
        match suite {
            Suite::Flyii => {
                put("b", json!(self.b.to_string()));
                put("m", json!(self.m));
                put("i", json!(self.i));
            }
            Suite::Triviall => {
                put("m", json!(self.m));
                put("i", json!(self.i));
            }
            Suite::Ooo => {
                put("b", json!(self.b.to_string()));
                put("i", json!(self.i));
            }
            Suite::Ozamene => {
                put("b", json!(self.b.to_string()));
                put("m", json!(self.m));
                put("q", json!(self.q));
                put("variant", json!(OZAMENE_VARIANTS[self.variant as usize]));
            }
            Suite::Lemma5 => {
                put("b", json!(self.b.to_string()));
                put("n", json!(self.m));
            }
            Suite::Svva => {
                put("i", json!(self.i));
                put("k", json!(self.q));
            }
            Suite::Vtorinv | Suite::Posledn => {}
        }
        v
    }
}

pub const OZAMENE_VARIANTS: [&str; 5] = ["shift", "shift-higher", "scale", "reembed", "generator"];

fn primitive_root(p: u32) -> i64 {
    (1..p as i64)
        .find(|&g| FpElem::new(g, p).multiplicative_order() == Some(p - 1))
        .expect("F_p* is cyclic")
}

fn random_slots<R: Rng>(rng: &mut R, p: u32, n: usize, first: RatFunc) -> Vec<RatFunc> {
    let mut conj = vec![first];
    for _ in 1..n.min(6) {
        conj.push(if rng.gen_bool(0.5) {
            RatFunc::from_poly(gen::poly(rng, p, 1))
        } else {
            RatFunc::zero(p)
        });
    }
    conj
}

/// The structures a suite draws from: presets plus seeded random ones.
pub fn roster(p: u32, n: usize, rng: &mut ChaCha8Rng, identity_only: bool) -> Result<Vec<SkewStructure>> {
    let pu = p as u64;
    let mut out = Vec::new();
    if !identity_only {
        out.push(preset(pu, &Preset::TameSymbol { zeta: primitive_root(p) }, n)?);
    }
    out.push(preset(pu, &Preset::WildLevel { i: 1, a: RatFunc::one(p) }, n)?);
    if n > 2 {
        out.push(preset(pu, &Preset::WildLevel { i: 2, a: RatFunc::t(p) }, n)?);
    }
    if (p as usize) < n {
        out.push(preset(pu, &Preset::WildPLevel { q: 1 }, n)?);
    }
    let t = RatFunc::t(p);
    for _ in 0..2 {
        let conj = random_slots(rng, p, n, t.clone());
        out.push(SkewStructure::new(pu, Mobius::identity(p), conj, n)?);
    }
    if !identity_only {
        let shift = Mobius::translation(p, 1);
        let conj = random_slots(rng, p, n, shift.image_of_t());
        out.push(SkewStructure::new(pu, shift, conj, n)?);
        if p > 2 {
            let scale = Mobius::scaling(p, primitive_root(p))?;
            let conj = random_slots(rng, p, n, scale.image_of_t());
            out.push(SkewStructure::new(pu, scale, conj, n)?);
        }
    }
    Ok(out)
}

fn nonzero_m<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    let m = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -m
    } else {
        m
    }
}

fn nonconstant<R: Rng>(rng: &mut R, p: u32, deg: usize) -> RatFunc {
    loop {
        let f = gen::ratfunc(rng, p, deg);
        if !f.is_constant() {
            return f;
        }
    }
}

/// Product over the α-orbit, which α fixes.
fn orbit_product(s: &SkewStructure, a: &RatFunc) -> RatFunc {
    (0..s.alpha_order() as i64).fold(RatFunc::one(s.p()), |acc, k| &acc * &s.alpha_pow(k, a))
}

pub fn generate(suite: Suite, p: u32, n: usize, rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Case>> {
    let identity_only = matches!(suite, Suite::Lemma5 | Suite::Vtorinv | Suite::Posledn);
    let pool = roster(p, n, rng, identity_only)?;
    let ident: Vec<SkewStructure> = pool.iter().filter(|s| s.alpha().is_identity()).cloned().collect();
    let top = n - 1;
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let s = pool.choose(rng).expect("nonempty roster").clone();
        let mut c = Case::new(s);
        match suite {
            Suite::Flyii => {
                c.a = gen::ratfunc(rng, p, 2);
                c.b = gen::ratfunc(rng, p, 2);
                c.m = nonzero_m(rng, 4);
                c.i = rng.gen_range(1..=top.min(8));
            }
            Suite::Triviall => {
                c.a = gen::ratfunc(rng, p, 2);
                c.m = nonzero_m(rng, 4);
                c.i = rng.gen_range(1..=top.min(8));
            }
            Suite::Ooo => {
                c.a = gen::ratfunc(rng, p, 2);
                c.b = gen::ratfunc(rng, p, 2);
                c.i = rng.gen_range(1..=top.min(5));
            }
            Suite::Ozamene => {
                c.variant = rng.gen_range(0..OZAMENE_VARIANTS.len() as u8);
                if c.variant >= 3 {
                    c.structure = ident.choose(rng).expect("identity structures").clone();
                }
                c.b = gen::nonzero_ratfunc(rng, p, 1);
                c.q = rng.gen_range(1..=3.min(n.saturating_sub(2)).max(1));
                c.m = nonzero_m(rng, 3);
                c.a = nonconstant(rng, p, 2);
                if c.variant == 1 && !c.structure.alpha().is_identity() {
                    c.m = c.m.abs();
                    c.a = orbit_product(&c.structure, &c.a);
                }
            }
            Suite::Lemma5 => {
                c.m = nonzero_m(rng, 4);
                c.a = gen::ratfunc(rng, p, 2);
                c.b = gen::ratfunc(rng, p, 2);
            }
            Suite::Svva => {
                let mut levels: Vec<usize> = (1..=2).filter(|i| i % p as usize != 0 && *i < n).collect();
                if levels.is_empty() {
                    levels.push(1);
                }
                c.i = *levels.choose(rng).expect("a level");
                let slot = RatFunc::constant(p, rng.gen_range(1..p) as i64);
                c.structure = preset(p as u64, &Preset::WildLevel { i: c.i, a: slot }, n)?;
                let kmax = (p as usize - 1).min(top / c.i).max(1);
                c.q = rng.gen_range(1..=kmax);
                c.a = gen::ratfunc(rng, p, 2);
            }
            Suite::Vtorinv | Suite::Posledn => {
                let mut slots = vec![RatFunc::t(p)];
                let i0 = rng.gen_range(1..=2.min(top));
                for k in 1..n.min(7) {
                    slots.push(if k == i0 {
                        RatFunc::from_poly(gen::monic(rng, p, 1))
                    } else if k > i0 && rng.gen_bool(0.5) {
                        RatFunc::from_poly(gen::poly(rng, p, 1))
                    } else {
                        RatFunc::zero(p)
                    });
                }
                c.structure = if rng.gen_bool(0.8) {
                    SkewStructure::new(p as u64, Mobius::identity(p), slots, n)?
                } else {
                    ident.choose(rng).expect("identity structures").clone()
                };
                c.a = if suite == Suite::Vtorinv && rng.gen_bool(0.5) {
                    nonconstant(rng, p, 2)
                } else {
                    RatFunc::t(p)
                };
            }
        }
        cases.push(c);
    }
    Ok(cases)
}

fn flag(law: &'static str, ok: bool, p: u32) -> IdentityCheck {
    IdentityCheck {
        law,
        lhs: RatFunc::constant(p, ok as i64),
        rhs: RatFunc::one(p),
    }
}

fn generator_change(p: u32, q: usize) -> Mobius {
    let choices: [[i64; 2]; 2] = match q % 3 {
        0 => [[1, 1], [0, 1]],
        1 => [[0, 1], [1, 0]],
        _ => [[1, 1], [1, 2]],
    };
    Mobius::new(p, choices).unwrap_or_else(|_| Mobius::translation(p, 1))
}

fn eval_ozamene(c: &Case) -> Result<CheckReport> {
    let s = &c.structure;
    let p = s.p();
    let q = c.q.min(s.precision().saturating_sub(2)).max(1);
    let pred = match c.variant {
        0 => {
            let new = reparam(s, &Reparam::Shift { b: c.b.clone(), q })?;
            Some((predict::shift_first_order(s, &c.b, q, c.m, &c.a)?, new, c.a.clone()))
        }
        1 => {
            let new = reparam(s, &Reparam::Shift { b: c.b.clone(), q })?;
            predict::shift_higher_order(s, &c.b, q, c.m, &c.a)?.map(|pr| (pr, new, c.a.clone()))
        }
        2 => {
            let new = reparam(s, &Reparam::Scale { b: c.b.clone() })?;
            predict::scale(s, &c.b, &c.a)?.map(|pr| (pr, new, c.a.clone()))
        }
        3 => {
            let r = Reembed { b: c.b.clone(), q };
            let new = reembed(s, &r)?;
            predict::reembed(s, &r, c.m)?.map(|pr| (pr, new, s.t()))
        }
        _ => {
            let sigma = generator_change(p, c.q);
            let n = s.precision();
            let mut tail = vec![RatFunc::zero(p); n];
            tail[0] = sigma.image_of_t();
            tail[1] = c.b.clone();
            let lift = SkewSeries::from_coeffs(p, 0, tail);
            let new = change_generator(s, &sigma, &lift)?;
            predict::change_generator(s, &sigma, c.m)?.map(|pr| (pr, new, s.t()))
        }
    };
    match pred {
        Some((pr, new, arg)) => pr.check(s, &new, &arg),
        None => Ok(CheckReport::default()),
    }
}

fn eval_lemma5(c: &Case) -> Result<CheckReport> {
    let s = &c.structure;
    let p = s.p() as usize;
    let Bound::Finite(j) = local_height(s)? else {
        return Ok(CheckReport::default());
    };
    let kmax = (p - 1).min(s.precision() / j - 1);
    if kmax == 0 {
        return Ok(CheckReport::default());
    }
    let table = c_table(s, c.m, j, kmax)?;
    let mut report = table.check_closed_form(s)?;
    report.checks.extend(table.check_operator(s, &c.a)?.checks);
    report.checks.extend(table.check_operator(s, &c.b)?.checks);
    Ok(report)
}

fn first_nonzero(s: &SkewStructure, m: i64, a: &RatFunc) -> Result<Option<usize>> {
    for k in 1..s.precision() {
        if !s.delta(m, k, a)?.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn eval_vtorinv(c: &Case) -> Result<CheckReport> {
    let s = &c.structure;
    let p = s.p();
    let pu = p as usize;
    let n = s.precision();
    let mut checks = Vec::new();
    let Bound::Finite(i) = element_height(s, &c.a)? else {
        return Ok(CheckReport::default());
    };
    if i % pu == 0 {
        let mut power = c.a.clone();
        let mut level = i;
        while level < n {
            let first = first_nonzero(s, 1, &power)?;
            checks.push(flag("vtorinv/p-divisible", first == Some(level), p));
            power = power.pow(p as i64)?;
            level *= pu;
        }
        return Ok(CheckReport { checks });
    }
    let out = d_invariant(s, &c.a)?;
    let sp = c.a.pow(p as i64)?;
    let first = first_nonzero(&out.structure, -(i as i64), &sp)?;
    match out.d {
        Bound::Finite(d) => {
            let congruent = (d as i64 - 2 * i as i64).rem_euclid(p as i64) == 0;
            checks.push(flag("vtorinv/congruence", congruent, p));
            let want = d + (pu - 1) * i;
            let ok = if want < n { first == Some(want) } else { first.is_none() };
            checks.push(flag("vtorinv/p-power", ok, p));
        }
        Bound::AtLeast(_) => checks.push(flag("vtorinv/p-power", first.is_none(), p)),
    }
    Ok(CheckReport { checks })
}

fn eval_posledn(c: &Case) -> Result<CheckReport> {
    let s = &c.structure;
    let p = s.p();
    let Bound::Finite(i) = local_height(s)? else {
        return Ok(CheckReport::default());
    };
    if i % p as usize == 0 {
        return Ok(CheckReport::default());
    }
    let out = d_invariant(s, &s.t())?;
    let ok = match out.d {
        Bound::Finite(d) => d > i,
        Bound::AtLeast(n) => n > i,
    };
    Ok(CheckReport {
        checks: vec![flag("posledn/d-above-height", ok, p)],
    })
}

/// Run one case. `src` answers the δ queries of the identity suites.
pub fn eval_case(suite: Suite, c: &Case, src: &dyn DeltaSource) -> Result<CheckReport> {
    match suite {
        Suite::Flyii => check_flyii(src, &c.a, &c.b, c.m, c.i),
        Suite::Triviall => check_triviall(src, &c.a, c.m, c.i),
        Suite::Ooo => check_ooo(src, &c.a, &c.b, c.i),
        Suite::Ozamene => eval_ozamene(c),
        Suite::Lemma5 => eval_lemma5(c),
        Suite::Svva => Ok(CheckReport {
            checks: vec![check_svva(&c.structure, c.i, c.q, &c.a)?],
        }),
        Suite::Vtorinv => eval_vtorinv(c),
        Suite::Posledn => eval_posledn(c),
    }
}

fn size(f: &RatFunc) -> usize {
    let terms = |c: &[u32]| c.iter().filter(|&&x| x != 0).count();
    f.num().degree_or_zero() + f.den().degree_or_zero() + terms(f.num().coeffs()) + terms(f.den().coeffs())
}

fn simpler(f: &RatFunc) -> Vec<RatFunc> {
    let p = f.modulus();
    let mut out = Vec::new();
    if !f.is_poly() {
        out.push(RatFunc::from_poly(f.num().clone()));
    }
    let drop_top = |c: &[u32]| -> Vec<i64> {
        let mut v: Vec<i64> = c.iter().map(|&x| x as i64).collect();
        v.pop();
        v
    };
    let num = crate::resfield::Poly::from_coeffs(p, &drop_top(f.num().coeffs()));
    if let Ok(g) = RatFunc::new(num, f.den().clone()) {
        out.push(g);
    }
    if f.den().degree_or_zero() > 0 {
        let den = crate::resfield::Poly::from_coeffs(p, &drop_top(f.den().coeffs()));
        if !den.is_zero() {
            if let Ok(g) = RatFunc::new(f.num().clone(), den) {
                out.push(g);
            }
        }
    }
    out.push(RatFunc::t(p));
    out.push(RatFunc::one(p));
    let s = size(f);
    out.retain(|g| size(g) < s);
    out
}

fn candidates(c: &Case) -> Vec<Case> {
    let mut out = Vec::new();
    for i in 1..c.i {
        out.push(Case { i, ..c.clone() });
    }
    for m in 1..c.m.abs() {
        out.push(Case {
            m: m * c.m.signum(),
            ..c.clone()
        });
    }
    for a in simpler(&c.a) {
        out.push(Case { a, ..c.clone() });
    }
    for b in simpler(&c.b) {
        out.push(Case { b, ..c.clone() });
    }
    for q in 1..c.q {
        out.push(Case { q, ..c.clone() });
    }
    out
}

const SHRINK_STEPS: usize = 200;

/// Greedy input reduction while `fails` keeps holding.
pub fn shrink(c: &Case, fails: impl Fn(&Case) -> bool) -> Case {
    let mut cur = c.clone();
    for _ in 0..SHRINK_STEPS {
        match candidates(&cur).into_iter().find(|cand| fails(cand)) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

pub(super) fn check_config(suite: Suite, p: u32, n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidIndex("suites need precision at least 4".into()));
    }
    if suite == Suite::Posledn && p == 2 {
        return Err(Error::Unsupported("the posledn sweep needs p > 2".into()));
    }
    Ok(())
}

use crate::error::{Error, Result};
use crate::resfield::RatFunc;
use crate::skew::SkewStructure;

use super::invariants::{local_height, Bound};
use super::reparam::{reparam, Reparam};

/// Result of [`normalize_galois`]. `clean_below` is the output precision;
/// when it is smaller than the input precision the last slot could not be
/// cleared.
#[derive(Clone, Debug)]
pub struct GaloisOutcome {
    pub structure: SkewStructure,
    pub steps: Vec<Reparam>,
    pub clean_below: Bound,
}

/// Clear every slot `δ_j(t)` with `n ∤ j` by shifts of the parameter.
pub fn normalize_galois(s: &SkewStructure) -> Result<GaloisOutcome> {
    let n = s.alpha_order() as usize;
    if n < 2 {
        return Err(Error::Unsupported("normalize_galois needs alpha of order at least 2".into()));
    }
    let mut cur = s.clone();
    let mut steps = Vec::new();
    loop {
        let next = (1..cur.precision()).find(|&j| j % n != 0 && !cur.conj()[j].is_zero());
        let Some(j) = next else {
            let clean_below = Bound::AtLeast(cur.precision());
            return Ok(GaloisOutcome {
                structure: cur,
                steps,
                clean_below,
            });
        };
        if j + 1 >= cur.precision() {
            let truncated = cur.with_precision(j)?;
            return Ok(GaloisOutcome {
                structure: truncated,
                steps,
                clean_below: Bound::Finite(j),
            });
        }
        let r = Reparam::Shift {
            b: galois_step(&cur, j)?,
            q: j,
        };
        let next = reparam(&cur, &r)?;
        if !next.conj()[j].is_zero() {
            return Err(Error::Internal(format!("slot {j} survived the galois shift")));
        }
        steps.push(r);
        cur = next;
    }
}

#[derive(Clone, Debug)]
pub enum KillOutcome {
    Killed { structure: SkewStructure, step: Option<Reparam> },
    Obstructed { target: usize },
}

fn height_coprime(s: &SkewStructure) -> Result<usize> {
    if !s.alpha().is_identity() {
        return Err(Error::Unsupported("kill_coefficient needs alpha = id".into()));
    }
    match local_height(s)? {
        Bound::Finite(i) => Ok(i),
        Bound::AtLeast(_) => Err(Error::Unsupported("local height is beyond the precision".into())),
    }
}

/// Clear `δ_target(t)` with one shift, or report the congruence obstruction.
pub fn kill_coefficient(s: &SkewStructure, target: usize) -> Result<KillOutcome> {
    let i = height_coprime(s)?;
    if target <= i {
        return Err(Error::Unsupported(format!("target {target} is not above the local height {i}")));
    }
    if target >= s.precision() {
        return Err(Error::PrecisionExceeded {
            requested: target,
            available: s.precision(),
        });
    }
    let p = s.p() as usize;
    let c = &s.conj()[target];
    if c.is_zero() {
        return Ok(KillOutcome::Killed {
            structure: s.clone(),
            step: None,
        });
    }
    let q = target - i;
    if (q + p - i % p).is_multiple_of(p) {
        return Ok(KillOutcome::Obstructed { target });
    }
    let factor = ((q as i64 - i as i64).rem_euclid(p as i64)) as u32;
    let den = s.conj()[i].scale(factor);
    let b = -&c.checked_div(&den)?;
    let r = Reparam::Shift { b, q };
    let next = reparam(s, &r)?;
    if !next.conj()[target].is_zero() {
        return Err(Error::Internal(format!("slot {target} survived the shift")));
    }
    Ok(KillOutcome::Killed {
        structure: next,
        step: Some(r),
    })
}

#[derive(Clone, Debug)]
pub struct ModulusOutcome {
    pub structure: SkewStructure,
    pub steps: Vec<Reparam>,
    pub obstructions: Vec<(usize, String)>,
}

/// Clear every slot whose index `d` does not divide, lowest first.
pub fn normalize_modulus(s: &SkewStructure, d: usize) -> Result<ModulusOutcome> {
    if d == 0 {
        return Err(Error::InvalidIndex("modulus must be at least 1".into()));
    }
    let mut out = ModulusOutcome {
        structure: s.clone(),
        steps: Vec::new(),
        obstructions: Vec::new(),
    };
    if d == 1 {
        return Ok(out);
    }
    let i = height_coprime(s)?;
    if i % d != 0 {
        out.obstructions.push((i, "the local height itself is not divisible".into()));
    }
    for target in i + 1..s.precision() {
        if target % d == 0 || out.structure.conj()[target].is_zero() {
            continue;
        }
        match kill_coefficient(&out.structure, target)? {
            KillOutcome::Killed { structure, step } => {
                out.structure = structure;
                out.steps.extend(step);
            }
            KillOutcome::Obstructed { target } => {
                out.obstructions.push((target, format!("target is congruent to 2i mod p with i = {i}")));
            }
        }
    }
    Ok(out)
}

/// The shift coefficient `-δ_j(t)/(α^{j+1}(t) - α(t))` clearing slot `j`.
pub fn galois_step(s: &SkewStructure, j: usize) -> Result<RatFunc> {
    let t = s.t();
    let den = &s.alpha_pow(j as i64 + 1, &t) - &s.alpha_pow(1, &t);
    Ok(-&s.conj()[j].checked_div(&den)?)
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen;
use crate::resfield::{check_prime, FpElem, Mobius, RatFunc};
use crate::skew::{SkewSeries, SkewStructure};

/// Named example structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `α: t -> ζ t` and no δ-slots.
    TameSymbol { zeta: i64 },
    /// `α = id` and the single slot `a` at index `i`.
    WildLevel { i: usize, a: RatFunc },
    /// `α = id` and the single slot `1` at index `p q`.
    WildPLevel { q: usize },
}

pub fn preset(p: u64, pr: &Preset, precision: usize) -> Result<SkewStructure> {
    let p = check_prime(p)?;
    let t = RatFunc::t(p);
    let slot = |i: usize, a: RatFunc| -> Result<SkewStructure> {
        if i >= precision {
            return Err(Error::BadPreset(format!("slot {i} lies beyond precision {precision}")));
        }
        let mut conj = vec![RatFunc::zero(p); i + 1];
        conj[0] = t.clone();
        conj[i] = a;
        SkewStructure::new(p as u64, Mobius::identity(p), conj, precision)
    };
    match pr {
        Preset::TameSymbol { zeta } => {
            let z = FpElem::new(*zeta, p);
            if z.is_zero() {
                return Err(Error::BadPreset("zeta must be nonzero".into()));
            }
            let alpha = Mobius::scaling(p, z.value() as i64)?;
            SkewStructure::new(p as u64, alpha, vec![alpha.image_of_t()], precision)
        }
        Preset::WildLevel { i, a } => {
            if *i == 0 {
                return Err(Error::BadPreset("level must be at least 1".into()));
            }
            if a.is_zero() || a.modulus() != p {
                return Err(Error::BadPreset("slot value must be a nonzero element of F_p(t)".into()));
            }
            slot(*i, a.clone())
        }
        Preset::WildPLevel { q } => {
            if *q == 0 {
                return Err(Error::BadPreset("q must be at least 1".into()));
            }
            slot(p as usize * q, RatFunc::one(p))
        }
    }
}

/// Which generator a probe failed against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeAgainst {
    T,
    Z,
    Random,
}

/// The first nonzero commutator found by [`center_probe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeWitness {
    pub against: ProbeAgainst,
    pub valuation: i64,
    pub lead: RatFunc,
}

const PROBE_SEED: u64 = 0x5eed_cafe;

/// Whether `x` commutes with `u(t)`, `z` and one seeded random element, to
/// the precision available.
pub fn center_probe(s: &SkewStructure, x: &SkewSeries) -> Result<Option<ProbeWitness>> {
    let p = s.p();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED ^ p as u64);
    let random = gen::series(&mut rng, p, 0, s.precision(), 2, 0.3, false);
    let others = [
        (ProbeAgainst::T, s.lift_embed(&s.t())),
        (ProbeAgainst::Z, s.z_pow(1)),
        (ProbeAgainst::Random, random),
    ];
    for (against, y) in others {
        let c = &s.mul(x, &y)? - &s.mul(&y, x)?;
        if let (Some(valuation), Some(lead)) = (c.val(), c.lead()) {
            return Ok(Some(ProbeWitness {
                against,
                valuation,
                lead: lead.clone(),
            }));
        }
    }
    Ok(None)
}

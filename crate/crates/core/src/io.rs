//! JSON structure files.
//!
//! ```json
//! {"p": 3, "alpha": {"matrix": [[1, 0], [0, 1]]}, "precision": 16, "conj": ["t", "1"]}
//! ```
//!
//! Missing tail entries of `conj` are zero and `alpha` defaults to the
//! identity. A `"preset"` object may replace `alpha` and `conj`.

use serde::{Deserialize, Serialize};

use crate::algebras::{preset, Preset};
use crate::error::{Error, Result};
use crate::resfield::{check_prime, parse_ratfunc, Mobius};
use crate::skew::SkewStructure;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct AlphaSpec {
    pub matrix: [[i64; 2]; 2],
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PresetSpec {
    TameSymbol { zeta: i64 },
    WildLevel { i: usize, a: String },
    WildPLevel { q: usize },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaSpec>,
    pub precision: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conj: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<PresetSpec>,
}

fn json_error(src: &str, e: serde_json::Error) -> Error {
    let line = e.line().saturating_sub(1);
    let pos = src.split_inclusive('\n').take(line).map(str::len).sum::<usize>() + e.column().saturating_sub(1);
    Error::Parse {
        pos,
        msg: e.to_string(),
    }
}

impl StructureFile {
    pub fn parse(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| json_error(src, e))
    }

    pub fn build(&self) -> Result<SkewStructure> {
        let p = check_prime(self.p)?;
        if let Some(pr) = &self.preset {
            if self.alpha.is_some() || self.conj.is_some() {
                return Err(Error::BadPreset("a preset replaces alpha and conj".into()));
            }
            let pr = match pr {
                PresetSpec::TameSymbol { zeta } => Preset::TameSymbol { zeta: *zeta },
                PresetSpec::WildLevel { i, a } => Preset::WildLevel {
                    i: *i,
                    a: parse_ratfunc(a, p)?,
                },
                PresetSpec::WildPLevel { q } => Preset::WildPLevel { q: *q },
            };
            return preset(self.p, &pr, self.precision);
        }
        let alpha = match &self.alpha {
            Some(a) => Mobius::new(p, a.matrix)?,
            None => Mobius::identity(p),
        };
        let conj = match &self.conj {
            Some(c) => c
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    parse_ratfunc(s, p).map_err(|e| match e {
                        Error::Parse { pos, msg } => Error::Parse {
                            pos,
                            msg: format!("conj[{k}]: {msg}"),
                        },
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![alpha.image_of_t()],
        };
        SkewStructure::new(self.p, alpha, conj, self.precision)
    }

    /// The explicit form of a structure, trailing zero slots dropped.
    pub fn from_structure(s: &SkewStructure) -> Self {
        let conj = s.conj();
        let keep = conj.iter().rposition(|c| !c.is_zero()).unwrap_or(0) + 1;
        let m = s.alpha().matrix();
        StructureFile {
            p: s.p() as u64,
            alpha: Some(AlphaSpec {
                matrix: m.map(|row| row.map(i64::from)),
            }),
            precision: s.precision(),
            conj: Some(conj[..keep].iter().map(ToString::to_string).collect()),
            preset: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure files always serialize")
    }
}

pub fn load_structure(src: &str) -> Result<SkewStructure> {
    StructureFile::parse(src)?.build()
}

pub fn print_structure(s: &SkewStructure) -> String {
    StructureFile::from_structure(s).to_json()
}

//! Seeded randomized sweeps over the δ-map identities and transform laws.
//!
//! Cases are generated sequentially from the seed, evaluated in parallel and
//! reported in case order, so a report depends only on its configuration.
//! Set `SKEWFORGE_THREADS` to bound the worker pool.

mod cases;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::resfield::check_prime;
use crate::skew::{CheckReport, DeltaSource, SkewStructure};

pub use cases::{eval_case, generate, roster, shrink, Case, OZAMENE_VARIANTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Flyii,
    Triviall,
    Ooo,
    Ozamene,
    Lemma5,
    Svva,
    Vtorinv,
    Posledn,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Flyii,
        Suite::Triviall,
        Suite::Ooo,
        Suite::Ozamene,
        Suite::Lemma5,
        Suite::Svva,
        Suite::Vtorinv,
        Suite::Posledn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Flyii => "flyii",
            Suite::Triviall => "triviall",
            Suite::Ooo => "ooo",
            Suite::Ozamene => "ozamene",
            Suite::Lemma5 => "lemma5",
            Suite::Svva => "svva",
            Suite::Vtorinv => "vtorinv",
            Suite::Posledn => "posledn",
        }
    }

    /// Suites whose checks go through a [`DeltaSource`].
    pub fn uses_source(self) -> bool {
        matches!(self, Suite::Flyii | Suite::Triviall | Suite::Ooo)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidIndex(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub p: u64,
    pub precision: usize,
    pub seed: u64,
    pub cases: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub flaky: bool,
    /// The generated inputs before shrinking, when they differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub original: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub p: u64,
    pub precision: usize,
    pub seed: u64,
    pub status: Status,
    pub cases_run: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// Builds the δ oracle used for one case.
pub type SourceFactory<'a> = dyn Fn(&SkewStructure) -> Box<dyn DeltaSource> + Sync + 'a;

fn plain_source(s: &SkewStructure) -> Box<dyn DeltaSource> {
    Box::new(s.clone())
}

pub fn thread_count() -> Option<usize> {
    std::env::var("SKEWFORGE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_suite_with(cfg, &plain_source)
}

type Outcome = std::result::Result<CheckReport, Error>;

fn evaluate(suite: Suite, c: &Case, make: &SourceFactory<'_>) -> Outcome {
    let src = make(&c.structure);
    eval_case(suite, c, src.as_ref())
}

fn mismatch(o: &Outcome) -> bool {
    matches!(o, Ok(r) if !r.holds())
}

/// Same as [`run_suite`] with a custom δ oracle for the identity suites.
pub fn run_suite_with(cfg: &SuiteConfig, make: &SourceFactory<'_>) -> Result<Report> {
    let start = Instant::now();
    let p = check_prime(cfg.p)?;
    cases::check_config(cfg.suite, p, cfg.precision)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let all = generate(cfg.suite, p, cfg.precision, &mut rng, cfg.cases)?;
    let suite = cfg.suite;

    let failures = pool()?.install(|| {
        let outcomes: Vec<Outcome> = all.par_iter().map(|c| evaluate(suite, c, make)).collect();
        let bad: Vec<usize> = (0..all.len())
            .filter(|&k| !matches!(&outcomes[k], Ok(r) if r.holds()))
            .collect();
        bad.into_par_iter()
            .map(|k| describe(suite, k, &all[k], &outcomes[k], make))
            .collect::<Vec<_>>()
    });

    let status = if failures.is_empty() {
        Status::Pass
    } else if failures.iter().all(|f| f.error.is_some()) {
        Status::Error
    } else {
        Status::Fail
    };
    Ok(Report {
        suite,
        p: cfg.p,
        precision: cfg.precision,
        seed: cfg.seed,
        status,
        cases_run: all.len(),
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn describe(suite: Suite, k: usize, c: &Case, first: &Outcome, make: &SourceFactory<'_>) -> Failure {
    let fresh = Case {
        structure: c.structure.clone(),
        ..c.clone()
    };
    let rerun = evaluate(suite, &fresh, make);
    let flaky = rerun != *first;
    let (shrunk, outcome) = if !flaky && mismatch(first) {
        let small = shrink(c, |cand| mismatch(&evaluate(suite, cand, make)));
        let out = evaluate(suite, &small, make);
        (small, out)
    } else {
        (c.clone(), first.clone())
    };
    let inputs = shrunk.inputs(suite);
    let before = c.inputs(suite);
    let original = (inputs != before).then_some(before);
    let mut f = Failure {
        case: k,
        inputs,
        law: None,
        lhs: None,
        rhs: None,
        error: None,
        flaky,
        original,
    };
    match &outcome {
        Ok(r) => {
            if let Some(bad) = r.first_failure() {
                f.law = Some(bad.law.to_string());
                f.lhs = Some(bad.lhs.to_string());
                f.rhs = Some(bad.rhs.to_string());
            }
        }
        Err(e) => f.error = Some(e.to_string()),
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resfield::RatFunc;

    struct Faulty {
        inner: SkewStructure,
        index: usize,
    }

    impl DeltaSource for Faulty {
        fn p(&self) -> u32 {
            self.inner.p()
        }
        fn precision(&self) -> usize {
            self.inner.precision()
        }
        fn alpha_is_identity(&self) -> bool {
            self.inner.alpha().is_identity()
        }
        fn alpha_pow(&self, m: i64, a: &RatFunc) -> RatFunc {
            self.inner.alpha_pow(m, a)
        }
        fn delta(&self, m: i64, i: usize, a: &RatFunc) -> Result<RatFunc> {
            let v = self.inner.delta(m, i, a)?;
            Ok(if i == self.index { &v + &RatFunc::one(self.inner.p()) } else { v })
        }
    }

    fn cfg(suite: Suite, p: u64, cases: usize) -> SuiteConfig {
        SuiteConfig {
            suite,
            p,
            precision: 10,
            seed: 7,
            cases,
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn deterministic_and_passing() {
        for suite in Suite::ALL {
            let a = run_suite(&cfg(suite, 3, 12)).unwrap();
            let b = run_suite(&cfg(suite, 3, 12)).unwrap();
            assert_eq!(a.status, Status::Pass, "{suite}: {}", a.to_json());
            assert_eq!(a.failures, b.failures);
            assert_eq!(a.cases_run, 12);
        }
    }

    #[test]
    fn fault_shrinks_to_index() {
        let make = |s: &SkewStructure| -> Box<dyn DeltaSource> {
            Box::new(Faulty {
                inner: s.clone(),
                index: 3,
            })
        };
        let rep = run_suite_with(&cfg(Suite::Flyii, 5, 40), &make).unwrap();
        assert_eq!(rep.status, Status::Fail);
        assert!(!rep.failures.is_empty());
        let mut sorted = rep.failures.iter().map(|f| f.case).collect::<Vec<_>>();
        sorted.sort();
        assert_eq!(sorted, rep.failures.iter().map(|f| f.case).collect::<Vec<_>>());
        for f in &rep.failures {
            assert_eq!(f.inputs["i"], 3, "{}", f.inputs);
            for key in ["a", "b"] {
                let v = crate::resfield::parse_ratfunc(f.inputs[key].as_str().unwrap(), 5).unwrap();
                assert!(v.num().degree_or_zero() <= 1 && v.den().degree_or_zero() == 0, "{v}");
            }
            assert!(!f.flaky);
        }
    }

    #[test]
    fn posledn_rejects_two() {
        assert!(matches!(run_suite(&cfg(Suite::Posledn, 2, 4)), Err(Error::Unsupported(_))));
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use skewforge_core::algebras::{center_probe, preset, FiniteFieldExt, Preset, ProbeWitness};
use skewforge_core::freering::{s_poly, sigma_poly, SPolyMode};
use skewforge_core::io::{load_structure, print_structure};
use skewforge_core::resfield::{check_prime, parse_poly_var, parse_ratfunc};
use skewforge_core::suites::{run_suite, Status, Suite, SuiteConfig};
use skewforge_core::transforms::{
    d_invariant, invariant_report, local_height, normalize_galois, normalize_modulus, reparam, Bound, Reparam,
};
use skewforge_core::{Error, RatFunc, SkewSeries, SkewStructure};

#[derive(Parser)]
#[command(name = "skewforge", version, about = "Exact skew Laurent series over F_p(t)")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded identity suite and print its report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 12)]
        precision: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Local height and d of a structure file.
    Invariants { file: PathBuf },
    /// Clear conj slots by parameter shifts.
    Normalize {
        file: PathBuf,
        #[arg(long, conflicts_with = "galois", required_unless_present = "galois")]
        modulus: Option<usize>,
        #[arg(long)]
        galois: bool,
        /// Write the normalized structure here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print `ₘδᵢ(elem)` for i = 1..=max-i.
    Delta {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        max_i: usize,
        #[arg(long, default_value = "t")]
        elem: String,
    },
    #[command(subcommand)]
    Demo(Demo),
    /// Print the words of `S_i^k` and their images under σ.
    DumpSpoly {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Solve a norm equation in a pinned finite field extension.
    Norm(NormArgs),
    /// Build a wild structure, normalize it and compare d with the local height.
    Posledn(PoslednArgs),
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    n: u32,
    /// Target in the base field, as a polynomial in x.
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct PoslednArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    i: usize,
    #[arg(long, default_value = "1")]
    a: String,
    #[arg(long, default_value_t = 16)]
    precision: usize,
}

enum Failure {
    Usage(Error),
    Violation(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<SkewStructure, Failure> {
    let src = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(Error::InvalidIndex(format!("cannot read {}: {e}", path.display()))))?;
    load_structure(&src).map_err(|e| match e {
        Error::Parse { pos, msg } => Failure::Usage(Error::Parse {
            pos,
            msg: format!("{}: {msg}", path.display()),
        }),
        other => Failure::Usage(other),
    })
}

fn structure_json(s: &SkewStructure) -> Value {
    serde_json::from_str(&print_structure(s)).expect("valid json")
}

fn verify(suite: &str, p: u64, precision: usize, seed: u64, cases: usize) -> Outcome {
    let suite: Suite = suite.parse()?;
    let report = run_suite(&SuiteConfig {
        suite,
        p,
        precision,
        seed,
        cases,
    })?;
    let v = serde_json::to_value(&report).expect("report serializes");
    match report.status {
        Status::Pass => Ok(v),
        Status::Fail | Status::Error => Err(Failure::Violation(v)),
    }
}

fn normalize(file: &Path, modulus: Option<usize>, out: Option<&Path>) -> Outcome {
    let s = read(file)?;
    let (structure, mut v) = match modulus {
        Some(d) => {
            let o = normalize_modulus(&s, d)?;
            let obstructions: Vec<Value> = o
                .obstructions
                .iter()
                .map(|(target, reason)| json!({"target": target, "reason": reason}))
                .collect();
            let steps: Vec<Value> = o.steps.iter().map(Reparam::to_json).collect();
            let v = json!({"mode": "modulus", "d": d, "steps": steps, "obstructions": obstructions});
            (o.structure, v)
        }
        None => {
            let o = normalize_galois(&s)?;
            let steps: Vec<Value> = o.steps.iter().map(Reparam::to_json).collect();
            let v = json!({"mode": "galois", "steps": steps, "clean_below": o.clean_below});
            (o.structure, v)
        }
    };
    v["structure"] = structure_json(&structure);
    if let Some(path) = out {
        fs::write(path, print_structure(&structure) + "\n").map_err(|e| {
            Failure::Usage(Error::InvalidIndex(format!("cannot write {}: {e}", path.display())))
        })?;
    }
    Ok(v)
}

fn delta(file: &Path, m: i64, max_i: usize, elem: &str) -> Outcome {
    let s = read(file)?;
    let a = parse_ratfunc(elem, s.p())?;
    let values = (1..=max_i)
        .map(|i| Ok(json!({"i": i, "value": s.delta(m, i, &a)?.to_string()})))
        .collect::<Result<Vec<Value>, Error>>()?;
    Ok(json!({"m": m, "elem": a.to_string(), "values": values}))
}

fn demo_norm(args: &NormArgs) -> Outcome {
    let field = FiniteFieldExt::pinned(args.p, args.r, args.n)?;
    let target = parse_poly_var(&args.target, field.p(), 'x')?;
    let b = field.solve_norm(&target)?;
    let n = field.norm(&b)?;
    let show = |f: &skewforge_core::Poly| RatFunc::from_poly(f.clone()).to_string_var('x');
    Ok(json!({
        "p": args.p,
        "r": args.r,
        "n": args.n,
        "modulus": show(field.modulus()),
        "target": show(&target),
        "witness": show(&b),
        "norm": show(&n),
    }))
}

fn probe_json(w: Option<ProbeWitness>) -> Value {
    match w {
        None => json!({"central": true}),
        Some(w) => json!({
            "central": false,
            "against": w.against,
            "valuation": w.valuation,
            "lead": w.lead.to_string(),
        }),
    }
}

fn demo_posledn(args: &PoslednArgs) -> Outcome {
    let p = check_prime(args.p)?;
    let a = parse_ratfunc(&args.a, p)?;
    let mut s = preset(args.p, &Preset::WildLevel { i: args.i, a: a.clone() }, args.precision)?;
    let mut steps = Vec::new();
    if args.i == 1 && !a.is_one() {
        let r = Reparam::Scale { b: a };
        s = reparam(&s, &r)?;
        steps.push(r.to_json());
    }
    let mut obstructions = Vec::new();
    if !args.i.is_multiple_of(p as usize) {
        let o = normalize_modulus(&s, p as usize)?;
        steps.extend(o.steps.iter().map(Reparam::to_json));
        obstructions = o
            .obstructions
            .iter()
            .map(|(target, reason)| json!({"target": target, "reason": reason}))
            .collect();
        s = o.structure;
    }
    let height = local_height(&s)?;
    let i = match height {
        Bound::Finite(i) if i % p as usize != 0 => i,
        _ => return Err(Error::Unsupported("needs a finite local height prime to p".into()).into()),
    };
    let d = d_invariant(&s, &s.t())?.d;
    let holds = match d {
        Bound::Finite(d) => d > i,
        Bound::AtLeast(n) => n > i,
    };
    let n = s.precision();
    let tp = s.lift_embed(&s.t().pow(p as i64)?);
    let zp = SkewSeries::z_pow(p, p as i64, n);
    let v = json!({
        "p": args.p,
        "steps": steps,
        "obstructions": obstructions,
        "structure": structure_json(&s),
        "local_height": height,
        "d": d,
        "d_above_height": holds,
        "center": {
            "t^p": probe_json(center_probe(&s, &tp)?),
            "z^p": probe_json(center_probe(&s, &zp)?),
        },
    });
    if holds {
        Ok(v)
    } else {
        Err(Failure::Violation(v))
    }
}

fn dump_spoly(i: u32, k: u32) -> Outcome {
    let poly = s_poly(i, k, SPolyMode::Recursion)?;
    let words: Vec<Value> = poly
        .terms()
        .map(|(w, c)| json!({"word": w.to_string(), "coeff": c}))
        .collect();
    let sigma = sigma_poly(&poly)?;
    Ok(json!({"i": i, "k": k, "poly": poly.to_string(), "words": words, "sigma": sigma.to_string()}))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Verify {
            suite,
            p,
            precision,
            seed,
            cases,
        } => verify(&suite, p, precision, seed, cases),
        Command::Invariants { file } => {
            let s = read(&file)?;
            Ok(serde_json::to_value(invariant_report(&s)?).expect("report serializes"))
        }
        Command::Normalize {
            file, modulus, out, ..
        } => normalize(&file, modulus, out.as_deref()),
        Command::Delta { file, m, max_i, elem } => delta(&file, m, max_i, &elem),
        Command::Demo(Demo::Norm(args)) => demo_norm(&args),
        Command::Demo(Demo::Posledn(args)) => demo_posledn(&args),
        Command::DumpSpoly { i, k } => dump_spoly(i, k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(Failure::Violation(v)) => {
            println!("{v}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            println!("{}", json!({"status": "error", "error": e.to_string()}));
            eprintln!("skewforge: {e}");
            ExitCode::from(2)
        }
    }
}

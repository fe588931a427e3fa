//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::oracle::{from_series, to_poly_vec, to_ratfuncs, Oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewforge_core::algebras::{center_probe, preset, FiniteFieldExt, Preset};
use skewforge_core::freering::{s_poly, SPolyMode};
use skewforge_core::skew::{check_flyii, check_ooo, check_triviall};
use skewforge_core::suites::{eval_case, generate, roster, Suite, OZAMENE_VARIANTS};
use skewforge_core::transforms::{
    c_table, check_svva, d_invariant, local_height, normalize_galois, svva_constants, Bound, CTable,
};
use skewforge_core::{gen, FpElem, Mobius, Poly, RatFunc, SkewSeries, SkewStructure};

const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const TOTAL_BUDGET: Duration = Duration::from_secs(300);

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rf(s: &str, p: u32) -> RatFunc {
    skewforge_core::resfield::parse_ratfunc(s, p).unwrap()
}

fn nonzero_m(r: &mut ChaCha8Rng, bound: i64) -> i64 {
    let m = r.gen_range(1..=bound);
    if r.gen_bool(0.5) {
        -m
    } else {
        m
    }
}

fn preset_structures(p: u32, n: usize) -> Vec<(String, SkewStructure)> {
    let pu = p as u64;
    let zeta = (1..p as i64)
        .find(|&g| FpElem::new(g, p).multiplicative_order() == Some(p - 1))
        .unwrap();
    let mut out = vec![
        (format!("tame(p={p})"), preset(pu, &Preset::TameSymbol { zeta }, n).unwrap()),
        (format!("wild(1,1,p={p})"), preset(pu, &Preset::WildLevel { i: 1, a: RatFunc::one(p) }, n).unwrap()),
        (format!("wild(2,t,p={p})"), preset(pu, &Preset::WildLevel { i: 2, a: RatFunc::t(p) }, n).unwrap()),
    ];
    if (p as usize) < n {
        out.push((format!("wildp(1,p={p})"), preset(pu, &Preset::WildPLevel { q: 1 }, n).unwrap()));
    }
    out
}

fn oracle_for(s: &SkewStructure) -> Oracle {
    let conj: Vec<Vec<i64>> = s
        .conj()
        .iter()
        .map(|c| to_poly_vec(c).into_iter().map(|x| x as i64).collect())
        .collect();
    Oracle::new(s.p() as u64, &conj)
}

fn oracle_associativity() -> Outcome {
    let start = Instant::now();
    let n = 10;
    let mut r = rng(101);
    let mut triples = 0;
    for p in [2, 3, 5] {
        for (name, s) in preset_structures(p, n) {
            let mut o = oracle_for(&s);
            for _ in 0..200 {
                let a = gen::series(&mut r, p, 0, n, 2, 0.4, true);
                let b = gen::series(&mut r, p, 0, n, 2, 0.4, true);
                let c = gen::series(&mut r, p, 0, n, 2, 0.4, true);
                let ab = s.mul(&a, &b).unwrap();
                let left = s.mul(&ab, &c).unwrap();
                let right = s.mul(&a, &s.mul(&b, &c).unwrap()).unwrap();
                if !left.agrees_with(&right) {
                    return fail(format!("{name}: (ab)c != a(bc)"));
                }
                let oab = o.mul_series(&from_series(&a, n), &from_series(&b, n), n);
                let oabc = o.mul_series(&oab, &from_series(&c, n), n);
                let expect = SkewSeries::from_coeffs(p, 0, to_ratfuncs(p, &oabc));
                if !left.agrees_with(&expect) {
                    return fail(format!("{name}: engine and oracle disagree"));
                }
                triples += 1;
            }
        }
    }
    let took = start.elapsed();
    if took >= ORACLE_BUDGET {
        return fail(format!("{triples} triples took {took:?}"));
    }
    pass(format!("{triples} triples exact in {:.1}s", took.as_secs_f64()))
}

fn product_identities() -> Outcome {
    let n = 10;
    let mut r = rng(202);
    let mut count = 0;
    for p in [2, 3, 5] {
        for s in roster(p, n, &mut r, false).unwrap() {
            for _ in 0..100 {
                let a = gen::ratfunc(&mut r, p, 2);
                let b = gen::ratfunc(&mut r, p, 2);
                let m = nonzero_m(&mut r, 4);
                let i = r.gen_range(1..=8);
                let rep = check_flyii(&s, &a, &b, m, i).unwrap();
                if let Some(bad) = rep.first_failure() {
                    return fail(format!("{s:?} a={a} b={b} m={m} i={i}: {}", bad.law));
                }
                count += 1;
            }
        }
    }
    pass(format!("{count} cases, zero failures"))
}

fn sigma_identity() -> Outcome {
    let mut r = rng(303);
    let mut count = 0;
    for p in [3, 5] {
        for s in roster(p, 8, &mut r, false).unwrap() {
            for i in 1..=5 {
                for _ in 0..50 {
                    let a = gen::ratfunc(&mut r, p, 2);
                    let b = gen::ratfunc(&mut r, p, 2);
                    let m = nonzero_m(&mut r, 4);
                    for rep in [check_ooo(&s, &a, &b, i).unwrap(), check_triviall(&s, &a, m, i).unwrap()] {
                        if let Some(bad) = rep.first_failure() {
                            return fail(format!("{s:?} a={a} b={b} m={m} i={i}: {}", bad.law));
                        }
                    }
                    count += 1;
                }
            }
        }
    }
    pass(format!("{count} (a,b) pairs, zero failures"))
}

fn s_polys() -> Outcome {
    for i in 0..=6u32 {
        for k in 0..=i {
            let d = s_poly(i, k, SPolyMode::Definition).unwrap();
            let rec = s_poly(i, k, SPolyMode::Recursion).unwrap();
            if d != rec {
                return fail(format!("S_{i}^{k}: modes differ"));
            }
            let want = (1..=k as u64).fold(1u64, |acc, l| acc * (i as u64 - k as u64 + l) / l);
            if d.len() as u64 != want {
                return fail(format!("S_{i}^{k}: {} terms, want {want}", d.len()));
            }
        }
    }
    pass("i <= 6, all k")
}

fn transform_predictions() -> Outcome {
    let n = 10;
    let mut summary = Vec::new();
    for p in [3u32, 5] {
        let mut r = rng(404 + p as u64);
        let mut checked = [0usize; 5];
        let mut rounds = 0;
        while checked.iter().any(|&c| c < 50) {
            rounds += 1;
            if rounds > 40 {
                return fail(format!("p={p}: too few applicable transforms {checked:?}"));
            }
            for c in generate(Suite::Ozamene, p, n, &mut r, 100).unwrap() {
                let v = c.variant as usize;
                if checked[v] >= 50 {
                    continue;
                }
                let rep = match eval_case(Suite::Ozamene, &c, &c.structure) {
                    Ok(rep) => rep,
                    Err(e) => return fail(format!("{}: {e}", OZAMENE_VARIANTS[v])),
                };
                if let Some(bad) = rep.first_failure() {
                    return fail(format!("{} {:?}: {}", OZAMENE_VARIANTS[v], c.inputs(Suite::Ozamene), bad.law));
                }
                if !rep.checks.is_empty() {
                    checked[v] += 1;
                }
            }
        }
        summary.push(format!("p={p} {checked:?}"));
    }
    pass(format!("per variant {}", summary.join(", ")))
}

fn galois_normalization() -> Outcome {
    let p = 5;
    let n = 8;
    let alphas = [
        (2, Mobius::scaling(p, 4).unwrap()),
        (3, Mobius::new(p, [[0, 1], [-1, 1]]).unwrap()),
        (4, Mobius::scaling(p, 2).unwrap()),
    ];
    let mut r = rng(505);
    for k in 0..20 {
        let (order, alpha) = &alphas[k % 3];
        let order = *order as usize;
        if alpha.order() as usize != order {
            return fail(format!("alpha {alpha:?} has order {}", alpha.order()));
        }
        let mut conj = vec![alpha.image_of_t()];
        for _ in 1..n {
            conj.push(RatFunc::from_poly(gen::poly(&mut r, p, 1)));
        }
        let s = SkewStructure::new(p as u64, *alpha, conj, n).unwrap();
        let out = match normalize_galois(&s) {
            Ok(o) => o,
            Err(e) => return fail(format!("structure {k}: {e}")),
        };
        let t = &out.structure;
        for j in 1..t.precision() {
            if j % order != 0 && !t.conj()[j].is_zero() {
                return fail(format!("structure {k}: slot {j} survived"));
            }
        }
        let again = normalize_galois(t).unwrap();
        if !again.steps.is_empty() || again.structure != *t {
            return fail(format!("structure {k}: not idempotent"));
        }
    }
    pass("20 structures, n in {2,3,4}")
}

fn c_tables() -> Outcome {
    let p = 5;
    let n = 12;
    let mut r = rng(606);
    let mut entries = 0;
    for j in [1usize, 2] {
        for _ in 0..2 {
            let a = RatFunc::from_poly(gen::monic(&mut r, p, 1));
            let s = preset(p as u64, &Preset::WildLevel { i: j, a }, n).unwrap();
            for shift in [1i64, -1, 2] {
                let table: CTable = c_table(&s, shift, j, p as usize - 1).unwrap();
                if !table.check_closed_form(&s).unwrap().holds() {
                    return fail(format!("closed form, j={j} n={shift}"));
                }
                for _ in 0..20 {
                    let f = gen::ratfunc(&mut r, p, 2);
                    if !table.check_operator(&s, &f).unwrap().holds() {
                        return fail(format!("operator identity, j={j} n={shift} f={f}"));
                    }
                }
                entries += table.entries.len();
            }
        }
    }
    pass(format!("{entries} entries, p=5, j in {{1,2}}"))
}

fn level_constants() -> Outcome {
    if svva_constants(1, 2, 5).unwrap() != FpElem::new(1, 5) {
        return fail("c_2 at i=1, p=5 is not 1");
    }
    let mut r = rng(707);
    let mut count = 0;
    for p in [3u32, 5] {
        let n = 12;
        for i in (1..=3).filter(|i| i % p as usize != 0) {
            for c in 1..p as i64 {
                let s = preset(p as u64, &Preset::WildLevel { i, a: RatFunc::constant(p, c) }, n).unwrap();
                for k in (1..p as usize).filter(|k| k * i < n) {
                    for _ in 0..10 {
                        let f = gen::ratfunc(&mut r, p, 2);
                        let chk = check_svva(&s, i, k, &f).unwrap();
                        if !chk.holds() {
                            return fail(format!("p={p} i={i} a={c} k={k} f={f}"));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    pass(format!("c_2(1,5) = 1; {count} sampled maps"))
}

fn random_identity_structure(r: &mut ChaCha8Rng, p: u32, n: usize) -> SkewStructure {
    let i0 = r.gen_range(1..=2);
    let mut conj = vec![RatFunc::t(p)];
    for k in 1..n.min(8) {
        conj.push(if k == i0 {
            RatFunc::from_poly(gen::monic(r, p, 1))
        } else if k > i0 && r.gen_bool(0.5) {
            RatFunc::from_poly(gen::poly(r, p, 1))
        } else {
            RatFunc::zero(p)
        });
    }
    SkewStructure::new(p as u64, Mobius::identity(p), conj, n).unwrap()
}

fn d_congruence() -> Outcome {
    let mut r = rng(808);
    let mut finite = 0;
    let mut swept = 0;
    while swept < 30 {
        let p = if swept % 2 == 0 { 3 } else { 5 };
        let s = random_identity_structure(&mut r, p, 12);
        let Bound::Finite(i) = local_height(&s).unwrap() else { continue };
        if i % p as usize == 0 {
            continue;
        }
        swept += 1;
        let out = d_invariant(&s, &s.t()).unwrap();
        if let Bound::Finite(d) = out.d {
            finite += 1;
            if (d as i64 - 2 * i as i64).rem_euclid(p as i64) != 0 {
                return fail(format!("d = {d}, i = {i}, p = {p}"));
            }
        }
    }
    let s = SkewStructure::new(3, Mobius::identity(3), vec![RatFunc::t(3), RatFunc::one(3)], 16).unwrap();
    let out = d_invariant(&s, &s.t()).unwrap();
    if out.d != Bound::AtLeast(16) {
        return fail(format!("reference d = {:?}", out.d));
    }
    let t3 = s.lift_embed(&rf("t^3", 3));
    let z = s.z_pow(1);
    let comm = &s.mul(&t3, &z).unwrap() - &s.mul(&z, &t3).unwrap();
    if !comm.is_zero() {
        return fail("[t^3, z] != 0 on the reference structure");
    }
    pass(format!("30 structures ({finite} finite d); reference d = AtLeast(16), [t^3, z] = 0"))
}

fn p_divisible_height() -> Outcome {
    let p = 3;
    let s = preset(3, &Preset::WildPLevel { q: 1 }, 12).unwrap();
    let mut r = rng(909);
    for k in 0..=1u32 {
        let inner = RatFunc::from_poly(Poly::monomial(p, 1, 3usize.pow(k)));
        let want = 3usize.pow(k) * 3;
        let mut first = usize::MAX;
        for trial in 0..12 {
            let f = if trial == 0 { RatFunc::t(p) } else { gen::nonzero_ratfunc(&mut r, p, 2) };
            let g = f.compose(&inner).unwrap();
            if g.is_constant() {
                continue;
            }
            let hit = (1..s.precision()).find(|&j| !s.delta(1, j, &g).unwrap().is_zero());
            first = first.min(hit.unwrap_or(usize::MAX));
        }
        if first != want {
            return fail(format!("k={k}: first index {first}, want {want}"));
        }
    }
    pass("first indices 3 and 9")
}

fn height_bound() -> Outcome {
    let mut checked = 0;
    for p in [3u32, 5] {
        let mut r = rng(1000 + p as u64);
        for c in generate(Suite::Posledn, p, 12, &mut r, 60).unwrap() {
            let rep = eval_case(Suite::Posledn, &c, &c.structure).unwrap();
            if !rep.holds() {
                return fail(format!("counterexample {:?}", c.inputs(Suite::Posledn)));
            }
            checked += rep.checks.len();
        }
    }
    if checked < 60 {
        return fail(format!("only {checked} structures met the hypotheses"));
    }
    pass(format!("{checked} structures, zero counterexamples"))
}

fn norm_step() -> Outcome {
    for (p, n) in [(3u64, 2u32), (3, 3), (5, 2)] {
        let e = FiniteFieldExt::pinned(p, 1, n).unwrap();
        for c in 1..p as i64 {
            let target = Poly::constant(p as u32, c);
            let b = e.solve_norm(&target).unwrap();
            if e.norm(&b).unwrap() != target {
                return fail(format!("F_{}^{n}: target {c}", p));
            }
        }
    }
    let e = FiniteFieldExt::pinned(3, 1, 2).unwrap();
    let two = Poly::constant(3, 2);
    let b = e.solve_norm(&two).unwrap();
    if e.pow(&b, 4) != two {
        return fail(format!("F9 witness {b}: b^4 != 2"));
    }
    pass("F9/F3, F27/F3, F25/F5 all targets; F9 witness b^4 = 2")
}

fn center_checks(start: Instant) -> Outcome {
    for (p, zeta) in [(3u64, 2i64), (5, 2), (5, 4)] {
        let s = preset(p, &Preset::TameSymbol { zeta }, 10).unwrap();
        let zn = s.z_pow(s.alpha_order() as i64);
        if let Some(w) = center_probe(&s, &zn).unwrap() {
            return fail(format!("tame p={p} zeta={zeta}: z^n fails against {:?}", w.against));
        }
    }
    let s = preset(3, &Preset::WildLevel { i: 1, a: RatFunc::one(3) }, 16).unwrap();
    for (name, x) in [("t^3", s.lift_embed(&rf("t^3", 3))), ("z^3", s.z_pow(3))] {
        if let Some(w) = center_probe(&s, &x).unwrap() {
            return fail(format!("{name} fails against {:?}", w.against));
        }
    }
    let total = start.elapsed();
    if total >= TOTAL_BUDGET {
        return fail(format!("suite took {total:?}"));
    }
    pass(format!("all central; total {:.1}s", total.as_secs_f64()))
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("oracle associativity", Box::new(oracle_associativity)),
        ("product identities", Box::new(product_identities)),
        ("sigma identity and recursions", Box::new(sigma_identity)),
        ("S polynomials", Box::new(s_polys)),
        ("transform predictions", Box::new(transform_predictions)),
        ("galois normalization", Box::new(galois_normalization)),
        ("c table", Box::new(c_tables)),
        ("level constants", Box::new(level_constants)),
        ("d congruence", Box::new(d_congruence)),
        ("p-divisible height", Box::new(p_divisible_height)),
        ("d above height", Box::new(height_bound)),
        ("norm step", Box::new(norm_step)),
        ("center checks", Box::new(move || center_checks(start))),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let tag = if out.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!out.ok);
        println!("{tag} {:>2} {name}: {} [{:.2}s]", k + 1, out.detail, t.elapsed().as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

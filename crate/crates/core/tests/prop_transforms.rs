use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewforge_core::suites::{eval_case, generate, Suite};
use skewforge_core::transforms::{
    d_invariant, element_height, kill_coefficient, normalize_galois, reparam, Bound, KillOutcome, Reparam,
};
use skewforge_core::{gen, Mobius, RatFunc, SkewStructure};

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5])
}

fn run(suite: Suite, p: u32, n: usize, seed: u64, count: usize) -> Result<usize, TestCaseError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for c in generate(suite, p, n, &mut r, count).unwrap() {
        let rep = eval_case(suite, &c, &c.structure).unwrap();
        prop_assert!(rep.holds(), "{} {:?}", suite, c.inputs(suite));
        checked += rep.checks.len();
    }
    Ok(checked)
}

fn twisted(r: &mut ChaCha8Rng, p: u32, n: usize) -> SkewStructure {
    let alphas = [Mobius::scaling(p, p as i64 - 1).unwrap(), Mobius::translation(p, 1), Mobius::new(p, [[0, 1], [-1, 1]]).unwrap()];
    let alpha = alphas[r.gen_range(0..alphas.len())];
    let mut conj = vec![alpha.image_of_t()];
    for _ in 1..n {
        conj.push(if r.gen_bool(0.6) { RatFunc::from_poly(gen::poly(r, p, 1)) } else { RatFunc::zero(p) });
    }
    SkewStructure::new(p as u64, alpha, conj, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn predictions_match_recomputation(p in prime(), seed in any::<u64>()) {
        run(Suite::Ozamene, p, 9, seed, 10)?;
    }

    #[test]
    fn d_congruence_and_p_power_propagation(p in prime(), seed in any::<u64>()) {
        run(Suite::Vtorinv, p, 12, seed, 4)?;
    }

    #[test]
    fn d_exceeds_local_height(p in prime(), seed in any::<u64>()) {
        run(Suite::Posledn, p, 12, seed, 4)?;
    }

    #[test]
    fn c_table_and_level_constants(p in prime(), seed in any::<u64>()) {
        run(Suite::Lemma5, p, 12, seed, 4)?;
        run(Suite::Svva, p, 12, seed, 4)?;
    }

    #[test]
    fn galois_normalization_clears_and_preserves(seed in any::<u64>()) {
        let p = 5;
        let n = 8;
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let s = twisted(&mut r, p, n);
        let order = s.alpha_order() as usize;
        let out = normalize_galois(&s).unwrap();
        let t = &out.structure;
        prop_assert_eq!(t.alpha(), s.alpha());
        for j in 1..t.precision() {
            if j % order != 0 {
                prop_assert!(t.conj()[j].is_zero(), "slot {}", j);
            }
        }
        let first_killed = (1..n).find(|&j| j % order != 0 && !s.conj()[j].is_zero()).unwrap_or(n);
        for j in (order..first_killed.min(t.precision())).step_by(order) {
            prop_assert_eq!(&t.conj()[j], &s.conj()[j]);
        }
        let again = normalize_galois(t).unwrap();
        prop_assert!(again.steps.is_empty());
        match out.clean_below {
            Bound::AtLeast(k) => prop_assert_eq!(k, n),
            Bound::Finite(k) => prop_assert_eq!(k, t.precision()),
        }
    }

    #[test]
    fn shifts_keep_the_first_map(p in prime(), seed in any::<u64>(), q in 1usize..4) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let s = twisted(&mut r, p, 8);
        let b = gen::nonzero_ratfunc(&mut r, p, 1);
        let t = reparam(&s, &Reparam::Shift { b, q }).unwrap();
        prop_assert_eq!(t.alpha(), s.alpha());
        prop_assert_eq!(t.precision(), s.precision());
        for k in 1..q {
            prop_assert_eq!(&t.conj()[k], &s.conj()[k]);
        }
    }

    #[test]
    fn killing_clears_the_target(p in prime(), seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let n = 10;
        let mut conj = vec![RatFunc::t(p), RatFunc::from_poly(gen::monic(&mut r, p, 1))];
        for _ in 2..n {
            conj.push(RatFunc::from_poly(gen::poly(&mut r, p, 1)));
        }
        let s = SkewStructure::new(p as u64, Mobius::identity(p), conj, n).unwrap();
        let target = r.gen_range(2..n);
        match kill_coefficient(&s, target).unwrap() {
            KillOutcome::Killed { structure, .. } => {
                prop_assert!(structure.conj()[target].is_zero());
                prop_assert_eq!(&structure.conj()[1], &s.conj()[1]);
            }
            KillOutcome::Obstructed { target } => prop_assert_eq!((target as u32 - 2) % p, 0),
        }
        let h = element_height(&s, &s.t()).unwrap();
        prop_assert_eq!(h, Bound::Finite(1));
        let d = d_invariant(&s, &s.t()).unwrap();
        if let Bound::Finite(d) = d.d {
            prop_assert_eq!((d as u32 + 2 * p - 2) % p, 0);
        }
    }
}

use fm_alba::alba::run_alba;
use fm_alba::fo::{correspondent, predicate_name, st, st_inequality, st_quasi};
use fm_alba::formula::{print_formula, Formula, Polarity};
use fm_alba::harness::{inductive_corpus, sample_frames};
use fm_alba::inductive::{classify_inductive, is_omega_inductive, is_pia, DependenceOrder};
use fm_alba::semantics::{eval_fo, Assertion, FmFrame, FoEnv, Model, RoAlgebra, Valuation};
use fm_alba::{parse_formula, Inequality, QuasiInequality};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn leaf(nominals: bool) -> BoxedStrategy<Formula> {
    let mut names = vec![
        Just(Formula::Top).boxed(),
        Just(Formula::Bot).boxed(),
        prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(|p| Formula::Var(p.into())).boxed(),
    ];
    if nominals {
        names.push(prop_oneof![Just("i"), Just("j")].prop_map(|i| Formula::Nominal(i.into())).boxed());
    }
    proptest::strategy::Union::new(names).boxed()
}

/// Formulas of depth at most `depth`; `expanded` adds nominals and the black diamond.
fn formula(depth: u32, expanded: bool) -> BoxedStrategy<Formula> {
    leaf(expanded)
        .prop_recursive(depth, 64, 2, move |inner| {
            let mut ops = vec![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))).boxed(),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))).boxed(),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))).boxed(),
                inner.clone().prop_map(|a| Formula::Box(Box::new(a))).boxed(),
            ];
            if expanded {
                ops.push(inner.prop_map(|a| Formula::BlackDiamond(Box::new(a))).boxed());
            }
            proptest::strategy::Union::new(ops)
        })
        .boxed()
}

fn chain(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|s| s.to_string()).collect()
}

/// A suborder of the total order `chain`: blocks cut at `cuts` are unordered inside.
fn coarsen(chain: &[String], cuts: &[bool]) -> DependenceOrder {
    let mut level = 0;
    let mut levels = Vec::new();
    for (k, _) in chain.iter().enumerate() {
        if k > 0 && cuts[k - 1] {
            level += 1;
        }
        levels.push(level);
    }
    let mut pairs = Vec::new();
    for a in 0..chain.len() {
        for b in 0..chain.len() {
            if levels[a] < levels[b] {
                pairs.push((chain[a].clone(), chain[b].clone()));
            }
        }
    }
    DependenceOrder::from_pairs(pairs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(f in formula(6, true)) {
        prop_assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
    }

    #[test]
    fn polarity_none_iff_absent(f in formula(5, true)) {
        for p in ["p", "q", "r"] {
            prop_assert_eq!(f.polarity(p) == Polarity::None, !f.occurs(p));
        }
    }

    #[test]
    fn substitute_self_is_identity(f in formula(5, true)) {
        prop_assert_eq!(f.substitute("p", &Formula::Var("p".into())), f);
    }

    #[test]
    fn polarity_composes(f in formula(4, false), theta in formula(3, false)) {
        // `s` is absent from `f` and occurs in `theta` only positively.
        let theta = Formula::And(Box::new(theta), Box::new(Formula::Var("s".into())));
        let g = f.substitute("p", &theta);
        match f.polarity("p") {
            Polarity::Positive => prop_assert!(g.polarity("s").is_positive_or_none()),
            Polarity::Negative => prop_assert!(g.polarity("s").is_negative_or_none()),
            _ => {}
        }
    }

    #[test]
    fn pia_is_monotone_in_the_order(
        f in formula(4, false),
        perm in Just(chain(&["p", "q", "r"])).prop_shuffle(),
        cuts in proptest::collection::vec(any::<bool>(), 2),
    ) {
        let total = DependenceOrder::total(&perm);
        let smaller = coarsen(&perm, &cuts);
        prop_assert!(smaller.is_subset_of(&total));
        for p in ["p", "q", "r"] {
            if is_pia(&f, p, &smaller) {
                prop_assert!(is_pia(&f, p, &total));
            }
        }
    }

    #[test]
    fn classifier_witness_is_sound(a in formula(3, false), b in formula(3, false)) {
        let f = Formula::Implies(Box::new(a), Box::new(b));
        if let Some(order) = classify_inductive(&f).unwrap() {
            prop_assert!(is_omega_inductive(&f, &order));
        }
    }

    #[test]
    fn translation_is_adequate(f in formula(3, true), seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = sample_frames(n, 1, &mut rng).pop().unwrap();
        let alg = RoAlgebra::new(&frame);
        let members = alg.members();
        let pick = |k: u64| members[(k % members.len() as u64) as usize];
        let v = Valuation::new()
            .with_prop("p", pick(seed))
            .with_prop("q", pick(seed >> 8))
            .with_prop("r", pick(seed >> 16))
            .with_nominal("i", (seed >> 24) as usize % n)
            .with_nominal("j", (seed >> 32) as usize % n);
        let model = Model::new(&frame, &v).unwrap();
        let mut env = FoEnv::new().with_nominal("i", v.nominals["i"]).with_nominal("j", v.nominals["j"]);
        for (p, y) in &v.props {
            env = env.with_pred(&predicate_name(p), *y);
        }
        let translated = st("x", &f);
        for w in 0..n {
            let fo = eval_fo(&frame, &env.clone().with_world("x", w), &translated).unwrap();
            prop_assert_eq!(model.satisfies(w, &f).unwrap(), fo);
        }
        let ineq = Inequality::new(f.clone(), Formula::Var("p".into()));
        prop_assert_eq!(
            model.holds(Assertion::Inequality(&ineq)).unwrap(),
            eval_fo(&frame, &env, &st_inequality(&ineq)).unwrap()
        );
        let q = QuasiInequality::new(vec![Inequality::new(Formula::Var("q".into()), f.clone())], Inequality::new(f, Formula::Nominal("j".into())));
        prop_assert_eq!(
            model.holds(Assertion::Quasi(&q)).unwrap(),
            eval_fo(&frame, &env, &st_quasi(&q)).unwrap()
        );
    }
}

#[test]
fn inductive_formulas_reduce_to_pure_sentences() {
    for f in inductive_corpus(11, 60) {
        let out = run_alba(&f).unwrap_or_else(|e| panic!("{f}: {e}"));
        assert!(out.systems.iter().all(QuasiInequality::is_pure), "{f}");
        assert!(out.trace.replays(), "{f}");
        let sentence = correspondent(&out.systems).unwrap();
        assert!(sentence.is_sentence(), "{f}");
        assert!(sentence.predicates().is_empty(), "{f}");
        assert!(sentence.bound_vars_distinct(), "{f}");
    }
}

#[test]
fn correspondent_of_reflexivity_holds_exactly_on_reflexive_points() {
    let f = parse_formula("[]p -> p").unwrap();
    let sentence = correspondent(&run_alba(&f).unwrap().systems).unwrap();
    let irreflexive = FmFrame::from_generators::<&str>(&["a"], &[], &[], &[]).unwrap();
    let reflexive = FmFrame::from_generators(&["a"], &[], &[], &[("a", "a")]).unwrap();
    assert!(!eval_fo(&irreflexive, &FoEnv::new(), &sentence).unwrap());
    assert!(eval_fo(&reflexive, &FoEnv::new(), &sentence).unwrap());
}

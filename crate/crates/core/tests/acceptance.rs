//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any FAIL.

use fm_alba::alba::run_alba;
use fm_alba::fo::{correspondent, FoFormula, Term};
use fm_alba::formula::{diamond, nom, Formula};
use fm_alba::harness::{
    adequacy_suite, algebra_suite, crosscheck, fixed_corpus, inductive_corpus, rule_soundness_suite, SuiteOptions,
};
use fm_alba::inductive::classify_inductive;
use fm_alba::semantics::Relation;
use fm_alba::{parse_formula, Inequality, QuasiInequality};
use std::time::{Duration, Instant};

const WORKED_EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const SUCCESS_LIMIT: Duration = Duration::from_secs(10);
const SOUNDNESS_LIMIT: Duration = Duration::from_secs(300);
const FRAME_BOUND: usize = 3;
const CORPUS_SEED: u64 = 0;
const CORPUS_SIZE: usize = 20;
const MIN_ADEQUACY_TRIPLES: u64 = 500;
const SAMPLED_FOUR_POINT_FRAMES: usize = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// `RO_x(α) = ∀y(x ≤₁ y → ∃z(y ≤₂ z ∧ ∃z′(z′ ≤₁ z ∧ α(z′))))`, with the
/// bound names chosen by the caller.
fn ro(x: &str, [y, z, zz]: [&str; 3], body: FoFormula) -> FoFormula {
    let t = Term::var;
    FoFormula::forall(
        y,
        FoFormula::implies(
            FoFormula::rel(Relation::Leq1, &t(x), &t(y)),
            FoFormula::exists(
                z,
                FoFormula::and(
                    FoFormula::rel(Relation::Leq2, &t(y), &t(z)),
                    FoFormula::exists(zz, FoFormula::and(FoFormula::rel(Relation::Leq1, &t(zz), &t(z)), body)),
                ),
            ),
        ),
    )
}

/// `∀i∀x(RO_x(i = x) → RO_x(∃y(R y x ∧ RO_y(i = y))))`, each `RO` expanded
/// with its own bound names and the inner `x`, `y` being the innermost
/// witnesses of the enclosing expansions.
fn expected_reflexivity_sentence(inner_subscript: &str) -> FoFormula {
    let eq = |a: &str, b: &str| FoFormula::Eq(Term::var(a), Term::var(b));
    let antecedent = ro("x", ["a1", "a2", "a3"], eq("i", "a3"));
    let inner = ro(inner_subscript, ["c1", "c2", "c3"], eq("i", "c3"));
    let diamond = FoFormula::exists("y", FoFormula::and(FoFormula::rel(Relation::R, &Term::var("y"), &Term::var("b3")), inner));
    let consequent = ro("x", ["b1", "b2", "b3"], diamond);
    FoFormula::forall("i", FoFormula::forall("x", FoFormula::implies(antecedent, consequent)))
}

fn worked_example() -> Outcome {
    let started = Instant::now();
    let f = parse_formula("[]p -> p").unwrap();
    let out = match run_alba(&f) {
        Ok(out) => out,
        Err(e) => return outcome(false, format!("ALBA failed: {e}")),
    };
    let expected = QuasiInequality::new(vec![], Inequality::new(nom("j"), diamond(nom("j"))));
    let system_ok = out.systems.len() == 1 && out.systems[0].alpha_eq(&expected);
    let sentence = match correspondent(&out.systems) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("no correspondent: {e}")),
    };
    // With subscript `x` on the innermost closure the sentence says something
    // else, so it must not match.
    let sentence_ok = sentence.alpha_eq(&expected_reflexivity_sentence("y"))
        && !sentence.alpha_eq(&expected_reflexivity_sentence("x"));
    let elapsed = started.elapsed();
    let systems: Vec<String> = out.systems.iter().map(ToString::to_string).collect();
    outcome(
        system_ok && sentence_ok && elapsed < WORKED_EXAMPLE_LIMIT,
        format!("systems {systems:?}, sentence match {sentence_ok}, {elapsed:?}"),
    )
}

fn alba_succeeds_on_corpus() -> Outcome {
    let started = Instant::now();
    let corpus = inductive_corpus(CORPUS_SEED, CORPUS_SIZE);
    let mut failures = Vec::new();
    for f in &corpus {
        match classify_inductive(f) {
            Ok(Some(_)) => {}
            other => failures.push(format!("classify {f}: {other:?}")),
        }
        match run_alba(f) {
            Ok(out) if out.systems.iter().all(QuasiInequality::is_pure) => {}
            Ok(_) => failures.push(format!("impure output for {f}")),
            Err(e) => failures.push(format!("alba {f}: {e}")),
        }
    }
    let elapsed = started.elapsed();
    let fixed_included = ["[]p -> p", "[]p -> [][]p", "p -> []p", "([]q & (q -> []p)) -> []p"]
        .iter()
        .all(|s| corpus.contains(&parse_formula(s).unwrap()));
    let enough = corpus.len() >= CORPUS_SIZE + 4 && corpus.iter().all(|f| f.depth() <= 4 && f.vars().len() <= 3);
    outcome(
        failures.is_empty() && fixed_included && enough && elapsed < SUCCESS_LIMIT,
        format!("{} formulas, {} failures {:?}, {elapsed:?}", corpus.len(), failures.len(), failures.first()),
    )
}

fn correspondents_agree() -> Outcome {
    let started = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for f in fixed_corpus() {
        match crosscheck(&f, FRAME_BOUND, SuiteOptions::default()) {
            Ok(r) => {
                pass &= r.passed();
                details.push(format!("{}: {}/{} valid, {} mismatches", r.formula, r.frames_valid, r.frames_checked, r.mismatches.len()));
            }
            Err(e) => {
                pass = false;
                details.push(format!("{f}: {e}"));
            }
        }
    }
    let elapsed = started.elapsed();
    outcome(pass && elapsed < SOUNDNESS_LIMIT, format!("{}; {elapsed:?}", details.join("; ")))
}

fn translation_adequacy() -> Outcome {
    match adequacy_suite(200, 3, 4, CORPUS_SEED) {
        Ok(r) => outcome(
            r.passed() && r.pointwise_checks >= MIN_ADEQUACY_TRIPLES,
            format!("{} triples, {} global checks, {} discrepancies", r.pointwise_checks, r.global_checks, r.discrepancies.len()),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn algebra() -> Outcome {
    let required = [
        "nucleus-laws",
        "join-density",
        "closure-adjunction",
        "box-diamond-adjunction",
        "residuation",
        "box-complete-multiplicativity",
    ];
    match algebra_suite(FRAME_BOUND, SAMPLED_FOUR_POINT_FRAMES, 40, CORPUS_SEED, SuiteOptions::default()) {
        Ok(r) => {
            let covered = required.iter().all(|k| r.properties.get(*k).is_some_and(|p| p.checks > 0));
            let failing: Vec<&String> = r.properties.iter().filter(|(_, p)| p.violations > 0).map(|(k, _)| k).collect();
            outcome(
                r.passed() && covered && r.sampled_frames >= SAMPLED_FOUR_POINT_FRAMES,
                format!("{} frames plus {} sampled, failing {failing:?}", r.exhaustive_frames, r.sampled_frames),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn rule_soundness() -> Outcome {
    let corpus: Vec<Formula> = inductive_corpus(CORPUS_SEED, CORPUS_SIZE);
    match rule_soundness_suite(&corpus, FRAME_BOUND, SuiteOptions::default()) {
        Ok(r) => outcome(
            r.passed(),
            format!(
                "{} distinct steps, {} valuation-level and {} frame-level frame checks, {} violations, {} ms",
                r.steps_by_rule.values().sum::<usize>(),
                r.valuation_level_checks,
                r.frame_level_checks,
                r.violations.len(),
                r.elapsed_ms
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 worked example", worked_example),
        ("2 success on inductive corpus", alba_succeeds_on_corpus),
        ("3 correspondent agrees with validity", correspondents_agree),
        ("4 translation adequacy", translation_adequacy),
        ("5 algebra suite", algebra),
        ("6 per-rule soundness", rule_soundness),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let o = run();
        all &= o.pass;
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}

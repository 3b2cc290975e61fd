use super::corpus::sample_expanded;
use super::frames::{frames_up_to, sample_frames, EnumerationError, EnumerationOptions};
use crate::alba::{run_alba, AlbaError, Item, TraceStep};
use crate::fo::{correspondent, predicate_name, st, st_inequality, st_quasi, CorrespondentError, FoFormula};
use crate::formula::{Formula, Inequality};
use crate::semantics::{
    for_each_valuation, Assertion, CompiledAssertion, CompiledFo, FmFrame, FoEnv, FrameFile, Model, RoAlgebra,
    SemanticsError, Valuation, WorldSet, DEFAULT_BUDGET,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::Instant;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Alba(#[from] AlbaError),
    #[error(transparent)]
    Correspondent(#[from] CorrespondentError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Limits shared by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub enumeration: EnumerationOptions,
    /// Valuations allowed per validity check.
    pub budget: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { enumeration: EnumerationOptions::default(), budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub frame_index: usize,
    pub frame: FrameFile,
    pub modal_valid: bool,
    pub correspondent_true: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub formula: String,
    pub systems: Vec<String>,
    pub correspondent: String,
    pub max_size: usize,
    /// Frames checked, indexed by size minus one.
    pub frames_by_size: Vec<usize>,
    pub frames_checked: usize,
    pub frames_valid: usize,
    pub mismatches: Vec<Mismatch>,
    /// Frames skipped because the valuation space exceeded the budget.
    pub over_budget: Vec<usize>,
    pub elapsed_ms: u128,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.over_budget.is_empty()
    }
}

/// Compares validity of `f` with truth of its first-order correspondent on
/// every frame with at most `max_n` worlds.
pub fn crosscheck(f: &Formula, max_n: usize, options: SuiteOptions) -> Result<CrosscheckReport, HarnessError> {
    let started = Instant::now();
    let out = run_alba(f)?;
    let sentence = correspondent(&out.systems)?;
    let compiled_fo = CompiledFo::new(&sentence, &FoEnv::new())?;
    let compiled = CompiledAssertion::new(Assertion::Formula(f));
    let frames = frames_up_to(max_n, options.enumeration)?;
    let mut frames_by_size = vec![0; max_n];
    for fr in &frames {
        frames_by_size[fr.len() - 1] += 1;
    }
    let results: Vec<(usize, Result<bool, SemanticsError>, bool)> = frames
        .par_iter()
        .enumerate()
        .map(|(k, fr)| {
            let alg = RoAlgebra::new(fr);
            let modal = compiled.counterexample(&alg, options.budget).map(|c| c.is_none());
            (k, modal, compiled_fo.eval(fr))
        })
        .collect();
    let mut mismatches = Vec::new();
    let mut over_budget = Vec::new();
    let mut frames_valid = 0;
    for (k, modal, fo) in results {
        match modal {
            Ok(valid) => {
                frames_valid += usize::from(valid);
                if valid != fo {
                    mismatches.push(Mismatch {
                        frame_index: k,
                        frame: frames[k].to_file(),
                        modal_valid: valid,
                        correspondent_true: fo,
                    });
                }
            }
            Err(_) => over_budget.push(k),
        }
    }
    Ok(CrosscheckReport {
        formula: f.to_string(),
        systems: out.systems.iter().map(ToString::to_string).collect(),
        correspondent: sentence.to_string(),
        max_size: max_n,
        frames_checked: frames.len(),
        frames_by_size,
        frames_valid,
        mismatches,
        over_budget,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleViolation {
    pub formula: String,
    pub rule: String,
    pub before: String,
    pub after: Vec<String>,
    pub frame: FrameFile,
    /// Set for valuation-level violations.
    pub valuation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleSoundnessReport {
    pub formulas: usize,
    pub max_size: usize,
    pub frames: usize,
    /// Distinct steps checked per rule name.
    pub steps_by_rule: BTreeMap<String, usize>,
    pub valuation_level_checks: u64,
    pub frame_level_checks: u64,
    pub violations: Vec<RuleViolation>,
    pub alba_failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl RuleSoundnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.alba_failures.is_empty()
    }
}

fn item_assertion(item: &Item) -> Assertion<'_> {
    match item {
        Item::Ineq(i) => Assertion::Inequality(i),
        Item::Quasi(q) => Assertion::Quasi(q),
    }
}

fn item_symbols(item: &Item, vars: &mut BTreeSet<String>, noms: &mut BTreeSet<String>) {
    let a = item_assertion(item);
    vars.extend(a.vars());
    noms.extend(a.nominals());
}

fn describe_valuation(props: &[String], pv: &[WorldSet], noms: &[String], nv: &[WorldSet], frame: &FmFrame) -> String {
    let mut parts = Vec::new();
    for (p, v) in props.iter().zip(pv) {
        parts.push(format!("{p}={:?}", frame.set_names(*v)));
    }
    for (i, v) in noms.iter().zip(nv) {
        parts.push(format!("@{i}={:?}", frame.set_names(*v)));
    }
    parts.join(", ")
}

/// Per-frame memo of validity for the distinct frame-level items.
struct ValidityCache<'a> {
    items: &'a [CompiledAssertion],
    known: Vec<Option<bool>>,
}

impl<'a> ValidityCache<'a> {
    fn new(items: &'a [CompiledAssertion]) -> Self {
        ValidityCache { items, known: vec![None; items.len()] }
    }

    fn valid(&mut self, k: usize, alg: &RoAlgebra, budget: u64) -> Result<bool, SemanticsError> {
        if let Some(v) = self.known[k] {
            return Ok(v);
        }
        let v = self.items[k].counterexample(alg, budget)?.is_none();
        self.known[k] = Some(v);
        Ok(v)
    }
}

/// A trace step compiled once for checking on many frames.
struct CompiledStep {
    formula: String,
    step: TraceStep,
    frame_level: bool,
    /// Symbol table shared by `before` and `after` at valuation level.
    vars: Vec<String>,
    noms: Vec<String>,
    before: CompiledAssertion,
    after: Vec<CompiledAssertion>,
    /// Indices into the suite's table of distinct frame-level items.
    frame_items: Option<(usize, Vec<usize>)>,
}

impl CompiledStep {
    fn new(formula: String, step: TraceStep) -> CompiledStep {
        let frame_level = step.rule.is_frame_level();
        let (mut vars, mut noms) = (BTreeSet::new(), BTreeSet::new());
        item_symbols(&step.before, &mut vars, &mut noms);
        for a in &step.after {
            item_symbols(a, &mut vars, &mut noms);
        }
        let (vars, noms): (Vec<String>, Vec<String>) = (vars.into_iter().collect(), noms.into_iter().collect());
        let compile = |item: &Item| {
            if frame_level {
                CompiledAssertion::new(item_assertion(item))
            } else {
                CompiledAssertion::with_symbols(item_assertion(item), vars.clone(), noms.clone())
            }
        };
        let before = compile(&step.before);
        let after = step.after.iter().map(compile).collect();
        CompiledStep { formula, step, frame_level, vars, noms, before, after, frame_items: None }
    }

    /// Checks the step on one frame. Returns `Some(witness)` on a violation,
    /// where the witness is a valuation for valuation-level rules.
    fn check(&self, alg: &RoAlgebra, budget: u64, validity: &mut ValidityCache) -> Result<Option<Option<String>>, SemanticsError> {
        if let Some((b, after)) = &self.frame_items {
            let before = validity.valid(*b, alg, budget)?;
            let mut all = true;
            for &a in after {
                if !validity.valid(a, alg, budget)? {
                    all = false;
                    break;
                }
            }
            return Ok((before != all).then_some(None));
        }
        if self.frame_level {
            let before = self.before.counterexample(alg, budget)?.is_none();
            let mut after = true;
            for a in &self.after {
                if a.counterexample(alg, budget)?.is_some() {
                    after = false;
                    break;
                }
            }
            return Ok((before != after).then_some(None));
        }
        let frame = alg.frame();
        let needed = (alg.len() as u128)
            .saturating_pow(self.vars.len() as u32)
            .saturating_mul((frame.len() as u128).saturating_pow(self.noms.len() as u32));
        if needed > budget as u128 {
            return Err(SemanticsError::BudgetExceeded { needed, budget });
        }
        let mut scratch = Vec::new();
        let mut witness = None;
        for_each_valuation(alg, self.vars.len(), self.noms.len(), |pv, nv| {
            let b = self.before.holds(alg, pv, nv, &mut scratch);
            let a = self.after.iter().all(|c| c.holds(alg, pv, nv, &mut scratch));
            if a != b {
                witness = Some(describe_valuation(&self.vars, pv, &self.noms, nv, frame));
                return false;
            }
            true
        });
        Ok(witness.map(Some))
    }

    fn violation(&self, frame: &FmFrame, valuation: Option<String>) -> RuleViolation {
        RuleViolation {
            formula: self.formula.clone(),
            rule: self.step.rule.to_string(),
            before: self.step.before.to_string(),
            after: self.step.after.iter().map(ToString::to_string).collect(),
            frame: frame.to_file(),
            valuation,
        }
    }
}

/// Runs ALBA on every formula and checks each distinct recorded step on every
/// frame with at most `max_n` worlds: per valuation for splitting,
/// residuation, deletion and distribution, and as validity on the frame for
/// first approximation, approximation and the Ackermann rule.
pub fn rule_soundness_suite(
    corpus: &[Formula],
    max_n: usize,
    options: SuiteOptions,
) -> Result<RuleSoundnessReport, HarnessError> {
    let started = Instant::now();
    let frames = frames_up_to(max_n, options.enumeration)?;
    let mut seen = HashSet::new();
    let mut steps = Vec::new();
    let mut alba_failures = Vec::new();
    for f in corpus {
        match run_alba(f) {
            Ok(out) => {
                for s in out.trace.steps {
                    if seen.insert((s.rule.clone(), s.before.clone())) {
                        steps.push(CompiledStep::new(f.to_string(), s));
                    }
                }
            }
            Err(e) => alba_failures.push(format!("{f}: {e}")),
        }
    }
    let mut table: Vec<CompiledAssertion> = Vec::new();
    let mut index: HashMap<Item, usize> = HashMap::new();
    let mut intern = |item: &Item| {
        *index.entry(item.clone()).or_insert_with(|| {
            table.push(CompiledAssertion::new(item_assertion(item)));
            table.len() - 1
        })
    };
    for s in steps.iter_mut().filter(|s| s.frame_level) {
        let b = intern(&s.step.before);
        let after = s.step.after.iter().map(&mut intern).collect();
        s.frame_items = Some((b, after));
    }
    let mut steps_by_rule = BTreeMap::new();
    let (mut valuation_level_checks, mut frame_level_checks) = (0u64, 0u64);
    for s in &steps {
        *steps_by_rule.entry(s.step.rule.name().to_string()).or_insert(0) += 1;
        if s.frame_level {
            frame_level_checks += frames.len() as u64;
        } else {
            valuation_level_checks += frames.len() as u64;
        }
    }
    let results: Vec<Result<Vec<RuleViolation>, SemanticsError>> = frames
        .par_iter()
        .map(|fr| {
            let alg = RoAlgebra::new(fr);
            let mut validity = ValidityCache::new(&table);
            let mut out = Vec::new();
            for s in &steps {
                if let Some(valuation) = s.check(&alg, options.budget, &mut validity)? {
                    out.push(s.violation(fr, valuation));
                }
            }
            Ok(out)
        })
        .collect();
    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    Ok(RuleSoundnessReport {
        formulas: corpus.len(),
        max_size: max_n,
        frames: frames.len(),
        steps_by_rule,
        valuation_level_checks,
        frame_level_checks,
        violations,
        alba_failures,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

/// Outcome of one algebraic property over all frames.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub checks: u64,
    pub violations: u64,
    /// The first few violations, described.
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub max_size: usize,
    pub exhaustive_frames: usize,
    pub sampled_frames: usize,
    pub properties: BTreeMap<String, PropertyResult>,
    /// Frames on which `c(∅) = ∅`; recorded, not required.
    pub dense_frames: usize,
    pub elapsed_ms: u128,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.properties.values().all(|p| p.violations == 0)
    }
}

pub const PROPERTY_NAMES: [&str; 11] = [
    "carrier-is-fixpoints",
    "meet-closed",
    "nucleus-laws",
    "closure-is-least-member-above",
    "closure-adjunction",
    "join-density",
    "residuation",
    "box-diamond-adjunction",
    "box-complete-multiplicativity",
    "clause-algebra-agreement",
    "nominal-clause",
];

#[derive(Default)]
struct Tally {
    props: BTreeMap<&'static str, PropertyResult>,
}

impl Tally {
    fn check(&mut self, name: &'static str, ok: bool, describe: impl FnOnce() -> String) {
        let p = self.props.entry(name).or_default();
        p.checks += 1;
        if !ok {
            p.violations += 1;
            if p.examples.len() < 5 {
                p.examples.push(describe());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for (k, v) in other.props {
            let p = self.props.entry(k).or_default();
            p.checks += v.checks;
            p.violations += v.violations;
            for e in v.examples {
                if p.examples.len() < 5 {
                    p.examples.push(e);
                }
            }
        }
    }
}

/// Subfamilies of the carrier visited for complete meets; larger carriers
/// are skipped for that property.
const MAX_SUBFAMILY_CARRIER: usize = 16;

fn check_frame_algebra(frame: &FmFrame, formulas: &[Formula]) -> Tally {
    let mut t = Tally::default();
    let alg = RoAlgebra::new(frame);
    let n = frame.len();
    let all = frame.all();
    let members = alg.members();
    let name = |y: WorldSet| format!("{:?}", frame.set_names(y));
    let ctx = || serde_json::to_string(&frame.to_file()).unwrap_or_default();

    let subsets: Vec<WorldSet> = (0..1u64 << n).map(WorldSet).collect();
    let fixpoints: Vec<WorldSet> = subsets.iter().copied().filter(|&y| frame.nucleus12(y) == y).collect();
    t.check("carrier-is-fixpoints", fixpoints == members, || format!("{} carrier differs from fixpoints", ctx()));

    for &y in members {
        for &z in members {
            t.check("meet-closed", alg.contains(y.intersection(z)), || format!("{} {} ∩ {}", ctx(), name(y), name(z)));
        }
    }

    let upsets = frame.upsets1();
    t.check("nucleus-laws", frame.nucleus12(all) == all, || format!("{} j(X) != X", ctx()));
    for &u in &upsets {
        let ju = frame.nucleus12(u);
        t.check("nucleus-laws", u.is_subset(ju) && frame.nucleus12(ju) == ju, || {
            format!("{} not inflationary or idempotent at {}", ctx(), name(u))
        });
        for &v in &upsets {
            let ok = frame.nucleus12(u.intersection(v)) == ju.intersection(frame.nucleus12(v));
            t.check("nucleus-laws", ok, || format!("{} meet not preserved at {}, {}", ctx(), name(u), name(v)));
        }
    }

    for &a in &subsets {
        let c = alg.closure(a);
        t.check("closure-is-least-member-above", alg.contains(c) && c == alg.closure_by_meet(a), || {
            format!("{} c({}) = {}", ctx(), name(a), name(c))
        });
        for &z in members {
            t.check("closure-adjunction", c.is_subset(z) == a.is_subset(z), || {
                format!("{} c({}) vs {}", ctx(), name(a), name(z))
            });
        }
    }

    for &y in members {
        let joined = frame.nucleus12(y.iter().fold(WorldSet::EMPTY, |acc, x| acc.union(alg.nominal(x))));
        t.check("join-density", joined == y, || format!("{} {} rebuilt as {}", ctx(), name(y), name(joined)));
    }

    for &y in members {
        for &w in members {
            for &z in members {
                let ok = y.intersection(w).is_subset(z) == y.is_subset(alg.implies(w, z));
                t.check("residuation", ok, || format!("{} {} {} {}", ctx(), name(y), name(w), name(z)));
            }
            let ok = alg.diamond(y).is_subset(w) == y.is_subset(alg.boxed(w));
            t.check("box-diamond-adjunction", ok, || format!("{} {} {}", ctx(), name(y), name(w)));
        }
    }

    if members.len() <= MAX_SUBFAMILY_CARRIER {
        for mask in 0u64..1 << members.len() {
            let family: Vec<WorldSet> = (0..members.len()).filter(|k| mask >> k & 1 == 1).map(|k| members[k]).collect();
            let meet = alg.big_meet(family.iter().copied());
            let ok = alg.contains(meet) && alg.boxed(meet) == alg.big_meet(family.iter().map(|&y| alg.boxed(y)));
            t.check("box-complete-multiplicativity", ok, || format!("{} family mask {mask:#b}", ctx()));
        }
    }

    let noms = ["i".to_string(), "j".to_string()];
    for w in 0..n {
        for i in 0..n {
            let v = Valuation::new().with_nominal("i", i);
            let m = Model::new(frame, &v).expect("valid valuation");
            let clause = m.satisfies(w, &Formula::Nominal("i".into())).expect("bound");
            let direct = frame.nucleus12(frame.upset1(WorldSet::singleton(i))).contains(w);
            t.check("nominal-clause", clause == direct, || format!("{} w={w} i={i}", ctx()));
        }
    }

    let props = ["p".to_string(), "q".to_string()];
    for f in formulas {
        let used_noms: Vec<String> = noms.iter().filter(|i| f.nominals().contains(*i)).cloned().collect();
        let used_props: Vec<String> = props.iter().filter(|p| f.vars().contains(*p)).cloned().collect();
        for v in crate::semantics::all_valuations(&alg, &used_props, &used_noms) {
            let m = Model::new(frame, &v).expect("valuation over the carrier");
            let clauses = m.truth_set(f).expect("bound");
            let folded = alg.denote(f, &v).expect("bound");
            let ok = clauses == folded && alg.contains(clauses);
            t.check("clause-algebra-agreement", ok, || format!("{} {f} under {v:?}", ctx()));
        }
    }
    t
}

/// Checks the algebraic properties exhaustively on every frame with at most
/// `max_n` worlds and on `samples` random frames with `max_n + 1` worlds.
/// The clause/algebra agreement check uses `formula_count` random formulas
/// of depth at most 3 and runs only on the exhaustive frames.
pub fn algebra_suite(
    max_n: usize,
    samples: usize,
    formula_count: usize,
    seed: u64,
    options: SuiteOptions,
) -> Result<AlgebraReport, HarnessError> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formulas: Vec<Formula> = (0..formula_count).map(|_| sample_expanded(&mut rng, 3)).collect();
    let frames = frames_up_to(max_n, options.enumeration)?;
    let sampled = if samples > 0 { sample_frames(max_n + 1, samples, &mut rng) } else { Vec::new() };
    let exhaustive: Vec<Tally> = frames.par_iter().map(|f| check_frame_algebra(f, &formulas)).collect();
    let extra: Vec<Tally> = sampled.par_iter().map(|f| check_frame_algebra(f, &[])).collect();
    let mut total = Tally::default();
    for t in exhaustive.into_iter().chain(extra) {
        total.merge(t);
    }
    let dense_frames = frames.iter().chain(&sampled).filter(|f| RoAlgebra::new(f).closure(WorldSet::EMPTY).is_empty()).count();
    Ok(AlgebraReport {
        max_size: max_n,
        exhaustive_frames: frames.len(),
        sampled_frames: sampled.len(),
        properties: total.props.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        dense_frames,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdequacyReport {
    pub formulas: usize,
    pub models: usize,
    /// (formula, model, world) triples compared.
    pub pointwise_checks: u64,
    /// Global checks of inequalities and quasi-inequalities.
    pub global_checks: u64,
    pub discrepancies: Vec<String>,
    pub elapsed_ms: u128,
}

impl AdequacyReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn fo_env(valuation: &Valuation) -> FoEnv {
    let mut env = FoEnv::new();
    for (p, &y) in &valuation.props {
        env.preds.insert(predicate_name(p), y);
    }
    env.nominals = valuation.nominals.clone();
    env
}

/// Compares the satisfaction clauses with first-order evaluation of the
/// standard translation: pointwise for formulas, globally for inequalities
/// and quasi-inequalities built from them. Models are random valuations on
/// random frames with up to `max_n` worlds.
pub fn adequacy_suite(
    formula_count: usize,
    models_per_formula: usize,
    max_n: usize,
    seed: u64,
) -> Result<AdequacyReport, HarnessError> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames: Vec<Vec<FmFrame>> = (1..=max_n).map(|n| sample_frames(n, 16, &mut rng)).collect();
    let mut discrepancies = Vec::new();
    let (mut pointwise_checks, mut global_checks, mut models) = (0u64, 0u64, 0usize);
    let mut previous: Option<Formula> = None;
    for _ in 0..formula_count {
        let f = sample_expanded(&mut rng, 3);
        let translated = st("x", &f);
        let ineq = previous.as_ref().map(|g| Inequality::new(g.clone(), f.clone()));
        for _ in 0..models_per_formula {
            let n = rng.gen_range(1..=max_n);
            let frame = frames[n - 1].choose(&mut rng).expect("sampled frames");
            let alg = RoAlgebra::new(frame);
            let mut v = Valuation::new();
            for p in ["p", "q"] {
                v.props.insert(p.to_string(), *alg.members().choose(&mut rng).unwrap());
            }
            for i in ["i", "j"] {
                v.nominals.insert(i.to_string(), rng.gen_range(0..n));
            }
            models += 1;
            let m = Model::new(frame, &v)?;
            let env = fo_env(&v);
            for w in 0..n {
                let modal = m.satisfies(w, &f)?;
                let fo = crate::semantics::eval_fo(frame, &env.clone().with_world("x", w), &translated)?;
                pointwise_checks += 1;
                if modal != fo {
                    discrepancies.push(format!("{f} at world {w} of {:?} under {v:?}", frame.to_file()));
                }
            }
            if let Some(ineq) = &ineq {
                let modal = m.holds(Assertion::Inequality(ineq))?;
                let fo = crate::semantics::eval_fo(frame, &env, &st_inequality(ineq))?;
                global_checks += 1;
                if modal != fo {
                    discrepancies.push(format!("{ineq} on {:?} under {v:?}", frame.to_file()));
                }
                let q = crate::formula::QuasiInequality::new(vec![ineq.clone()], Inequality::new(f.clone(), ineq.lhs.clone()));
                let modal = m.holds(Assertion::Quasi(&q))?;
                let fo = crate::semantics::eval_fo(frame, &env, &st_quasi(&q))?;
                global_checks += 1;
                if modal != fo {
                    discrepancies.push(format!("{q} on {:?} under {v:?}", frame.to_file()));
                }
            }
        }
        previous = Some(f);
    }
    Ok(AdequacyReport {
        formulas: formula_count,
        models,
        pointwise_checks,
        global_checks,
        discrepancies,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

/// Truth of a first-order sentence on a frame, for callers holding no
/// valuation.
pub fn sentence_holds(frame: &FmFrame, sentence: &FoFormula) -> Result<bool, SemanticsError> {
    crate::semantics::eval_fo(frame, &FoEnv::new(), sentence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alba::Rule;
    use crate::parse::parse_formula;

    #[test]
    fn crosscheck_small() {
        for s in ["[]p -> p", "[]p -> [][]p", "p -> p"] {
            let r = crosscheck(&parse_formula(s).unwrap(), 2, SuiteOptions::default()).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.mismatches);
        }
    }

    #[test]
    fn reflexivity_is_not_valid_everywhere() {
        let r = crosscheck(&parse_formula("[]p -> p").unwrap(), 1, SuiteOptions::default()).unwrap();
        assert_eq!(r.frames_checked, 2);
        assert_eq!(r.frames_valid, 1);
    }

    #[test]
    fn algebra_suite_small() {
        let r = algebra_suite(2, 3, 10, 0, SuiteOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.properties);
        for name in PROPERTY_NAMES {
            assert!(r.properties.contains_key(name), "{name}");
        }
    }

    #[test]
    fn rule_soundness_small() {
        let corpus = vec![parse_formula("[]p -> [][]p").unwrap(), parse_formula("[]p -> p").unwrap()];
        let r = rule_soundness_suite(&corpus, 2, SuiteOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.steps_by_rule.contains_key("ackermann"));
    }

    #[test]
    fn adequacy_small() {
        let r = adequacy_suite(20, 3, 3, 1).unwrap();
        assert!(r.passed(), "{:?}", r.discrepancies);
    }

    #[test]
    fn unsound_step_is_detected() {
        let before = Item::Ineq(crate::parse::parse_inequality("p <= q").unwrap());
        let after = vec![Item::Ineq(crate::parse::parse_inequality("top <= q").unwrap())];
        let step = TraceStep { rule: Rule::Distribute, before, after };
        let frame = FmFrame::from_generators::<&str>(&["a"], &[], &[], &[]).unwrap();
        let step = CompiledStep::new(String::new(), step);
        let mut cache = ValidityCache::new(&[]);
        assert!(step.check(&RoAlgebra::new(&frame), DEFAULT_BUDGET, &mut cache).unwrap().is_some());
    }
}

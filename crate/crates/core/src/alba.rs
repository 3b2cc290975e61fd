//! The ALBA elimination procedure: preprocessing, first approximation,
//! reduction by splitting, residuation, approximation and deletion, and
//! variable elimination by the right-handed Ackermann rule.
//!
//! Every rewrite is a [`Rule`] applied to an [`Item`]; the driver records each
//! application so that a run can be replayed step by step.

use crate::formula::{and, boxed, diamond, fresh_nominal, implies, or, Formula, Inequality, Polarity, QuasiInequality};
use crate::inductive::{classify_inductive, is_positive, ClassifyError, DependenceOrder};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlbaError {
    #[error("input must be an implication between basic formulas, got `{0}`")]
    NotImplication(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("Ackermann rule for `{variable}` does not apply: in `{inequality}` the {side} is {polarity} in `{variable}` but must be {needed}")]
    SideCondition {
        variable: String,
        inequality: String,
        side: &'static str,
        polarity: Polarity,
        needed: &'static str,
    },
    #[error("ALBA is stuck on `{system}`: {reason}")]
    Stuck { system: String, reason: String },
    #[error("rule {rule} does not apply to `{item}`")]
    NotApplicable { rule: String, item: String },
    #[error("nominal `@{0}` is not fresh")]
    NotFresh(String),
    #[error("antecedent `{inequality}` is not a minimal valuation for `{variable}`")]
    MinValShape { variable: String, inequality: String },
}

/// A state the rules act on: an inequality during preprocessing, a
/// quasi-inequality (a system) afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Ineq(Inequality),
    Quasi(QuasiInequality),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Ineq(i) => i.fmt(f),
            Item::Quasi(q) => q.fmt(f),
        }
    }
}

impl Serialize for Item {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// Distribution rewrites to a fixpoint on both sides of an inequality.
    Distribute,
    /// Splits `α ≤ β∧γ` and `α∨β ≤ γ` exhaustively.
    SplitInequality,
    FirstApproximation { nominal: String },
    SplitAntecedent { index: usize },
    /// Forks a system whose consequent splits.
    SplitConsequent,
    ResiduateAntecedent { index: usize },
    ResiduateConsequent,
    Approximate { nominal: String },
    Delete,
    Ackermann { variable: String },
}

impl Rule {
    /// How the rule's soundness is stated: per valuation, or only for
    /// validity on a frame.
    pub fn is_frame_level(&self) -> bool {
        matches!(self, Rule::FirstApproximation { .. } | Rule::Approximate { .. } | Rule::Ackermann { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Distribute => "distribute",
            Rule::SplitInequality => "split-inequality",
            Rule::FirstApproximation { .. } => "first-approximation",
            Rule::SplitAntecedent { .. } => "split-antecedent",
            Rule::SplitConsequent => "split-consequent",
            Rule::ResiduateAntecedent { .. } => "residuate-antecedent",
            Rule::ResiduateConsequent => "residuate-consequent",
            Rule::Approximate { .. } => "approximate",
            Rule::Delete => "delete",
            Rule::Ackermann { .. } => "ackermann",
        }
    }

    pub fn apply(&self, item: &Item) -> Result<Vec<Item>, AlbaError> {
        let not_applicable = || AlbaError::NotApplicable { rule: self.to_string(), item: item.to_string() };
        match (self, item) {
            (Rule::Distribute, Item::Ineq(i)) => Ok(vec![Item::Ineq(distribute(i))]),
            (Rule::SplitInequality, Item::Ineq(i)) => {
                let mut out = Vec::new();
                split_exhaustively(i.clone(), &mut out);
                Ok(out.into_iter().map(Item::Ineq).collect())
            }
            (Rule::FirstApproximation { nominal }, Item::Ineq(i)) => {
                if i.nominals().contains(nominal) {
                    return Err(AlbaError::NotFresh(nominal.clone()));
                }
                Ok(vec![Item::Quasi(approximation_of(i, nominal, Vec::new()))])
            }
            (Rule::SplitAntecedent { index }, Item::Quasi(q)) => {
                let a = q.antecedents.get(*index).ok_or_else(not_applicable)?;
                let (x, y) = split_once(a).ok_or_else(not_applicable)?;
                let mut ants = q.antecedents.clone();
                ants.splice(*index..=*index, [x, y]);
                Ok(vec![Item::Quasi(QuasiInequality::new(ants, q.consequent.clone()))])
            }
            (Rule::SplitConsequent, Item::Quasi(q)) => {
                let (x, y) = split_once(&q.consequent).ok_or_else(not_applicable)?;
                Ok(vec![
                    Item::Quasi(QuasiInequality::new(q.antecedents.clone(), x)),
                    Item::Quasi(QuasiInequality::new(q.antecedents.clone(), y)),
                ])
            }
            (Rule::ResiduateAntecedent { index }, Item::Quasi(q)) => {
                let a = q.antecedents.get(*index).ok_or_else(not_applicable)?;
                let r = residuate_once(a).ok_or_else(not_applicable)?;
                let mut ants = q.antecedents.clone();
                ants[*index] = r;
                Ok(vec![Item::Quasi(QuasiInequality::new(ants, q.consequent.clone()))])
            }
            (Rule::ResiduateConsequent, Item::Quasi(q)) => {
                let r = residuate_once(&q.consequent).ok_or_else(not_applicable)?;
                Ok(vec![Item::Quasi(QuasiInequality::new(q.antecedents.clone(), r))])
            }
            (Rule::Approximate { nominal }, Item::Quasi(q)) => {
                if q.nominals().contains(nominal) {
                    return Err(AlbaError::NotFresh(nominal.clone()));
                }
                Ok(vec![Item::Quasi(approximation_of(&q.consequent, nominal, q.antecedents.clone()))])
            }
            (Rule::Delete, Item::Quasi(q)) => Ok(vec![Item::Quasi(apply_deleting(q))]),
            (Rule::Ackermann { variable }, Item::Quasi(q)) => Ok(vec![Item::Quasi(apply_ackermann(q, variable)?)]),
            _ => Err(not_applicable()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::FirstApproximation { nominal } | Rule::Approximate { nominal } => {
                write!(f, "{} @{nominal}", self.name())
            }
            Rule::SplitAntecedent { index } | Rule::ResiduateAntecedent { index } => {
                write!(f, "{} #{index}", self.name())
            }
            Rule::Ackermann { variable } => write!(f, "{} {variable}", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    #[serde(flatten)]
    pub rule: Rule,
    pub before: Item,
    pub after: Vec<Item>,
}

impl TraceStep {
    /// Re-applies the rule and compares with the recorded result.
    pub fn replays(&self) -> bool {
        self.rule.apply(&self.before).is_ok_and(|after| after == self.after)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AlbaTrace {
    pub steps: Vec<TraceStep>,
}

impl AlbaTrace {
    pub fn replays(&self) -> bool {
        self.steps.iter().all(TraceStep::replays)
    }
}

impl fmt::Display for AlbaTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3}. {}", k + 1, s.rule)?;
            writeln!(f, "       {}", s.before)?;
            for a in &s.after {
                writeln!(f, "    ~> {a}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaOutput {
    /// Pure quasi-inequalities whose conjunction is equivalent to the input.
    pub systems: Vec<QuasiInequality>,
    pub trace: AlbaTrace,
    /// The dependence order found by the classifier, if the input is inductive.
    pub order: Option<DependenceOrder>,
}

// Distribution.

fn lhs_and(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::Or(a1, a2), b) => or(lhs_and(*a1, b.clone()), lhs_and(*a2, b)),
        (a, Formula::Or(b1, b2)) => or(lhs_and(a.clone(), *b1), lhs_and(a, *b2)),
        (a, b) => and(a, b),
    }
}

/// `∧` over `∨` everywhere in a left-hand side.
fn distribute_lhs(f: &Formula) -> Formula {
    match f {
        Formula::And(a, b) => lhs_and(distribute_lhs(a), distribute_lhs(b)),
        Formula::Or(a, b) => or(distribute_lhs(a), distribute_lhs(b)),
        Formula::Implies(a, b) => implies(distribute_lhs(a), distribute_lhs(b)),
        Formula::Box(a) => boxed(distribute_lhs(a)),
        Formula::BlackDiamond(a) => diamond(distribute_lhs(a)),
        _ => f.clone(),
    }
}

fn rhs_or(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::And(a1, a2), b) => and(rhs_or(*a1, b.clone()), rhs_or(*a2, b)),
        (a, Formula::And(b1, b2)) => and(rhs_or(a.clone(), *b1), rhs_or(a, *b2)),
        (a, b) => or(a, b),
    }
}

fn rhs_implies(a: Formula, b: Formula) -> Formula {
    match b {
        Formula::And(b1, b2) => and(rhs_implies(a.clone(), *b1), rhs_implies(a, *b2)),
        b => implies(a, b),
    }
}

fn rhs_box(a: Formula) -> Formula {
    match a {
        Formula::And(a1, a2) => and(rhs_box(*a1), rhs_box(*a2)),
        a => boxed(a),
    }
}

/// `∨` over `∧`, `→` over a conjunctive consequent and `□` over `∧`,
/// everywhere in a right-hand side.
fn distribute_rhs(f: &Formula) -> Formula {
    match f {
        Formula::And(a, b) => and(distribute_rhs(a), distribute_rhs(b)),
        Formula::Or(a, b) => rhs_or(distribute_rhs(a), distribute_rhs(b)),
        Formula::Implies(a, b) => rhs_implies(distribute_rhs(a), distribute_rhs(b)),
        Formula::Box(a) => rhs_box(distribute_rhs(a)),
        Formula::BlackDiamond(a) => diamond(distribute_rhs(a)),
        _ => f.clone(),
    }
}

fn distribute(i: &Inequality) -> Inequality {
    Inequality::new(distribute_lhs(&i.lhs), distribute_rhs(&i.rhs))
}

// Splitting and residuation, one step at a time.

fn split_once(i: &Inequality) -> Option<(Inequality, Inequality)> {
    match (&i.lhs, &i.rhs) {
        (_, Formula::And(b, c)) => {
            Some((Inequality::new(i.lhs.clone(), (**b).clone()), Inequality::new(i.lhs.clone(), (**c).clone())))
        }
        (Formula::Or(a, b), _) => {
            Some((Inequality::new((**a).clone(), i.rhs.clone()), Inequality::new((**b).clone(), i.rhs.clone())))
        }
        _ => None,
    }
}

fn split_exhaustively(i: Inequality, out: &mut Vec<Inequality>) {
    match split_once(&i) {
        Some((a, b)) => {
            split_exhaustively(a, out);
            split_exhaustively(b, out);
        }
        None => out.push(i),
    }
}

fn residuate_once(i: &Inequality) -> Option<Inequality> {
    match &i.rhs {
        Formula::Box(b) => Some(Inequality::new(diamond(i.lhs.clone()), (**b).clone())),
        Formula::Implies(b, c) => Some(Inequality::new(and(i.lhs.clone(), (**b).clone()), (**c).clone())),
        _ => None,
    }
}

/// `S & j ≤ φ ⇒ j ≤ ψ` from `φ ≤ ψ` and `S`.
fn approximation_of(target: &Inequality, j: &str, mut antecedents: Vec<Inequality>) -> QuasiInequality {
    let j = Formula::Nominal(j.to_string());
    antecedents.push(Inequality::new(j.clone(), target.lhs.clone()));
    QuasiInequality::new(antecedents, Inequality::new(j, target.rhs.clone()))
}

// Public rule forms.

/// Distribution to a fixpoint followed by exhaustive splitting.
pub fn preprocess(ineq: &Inequality) -> Vec<Inequality> {
    let mut out = Vec::new();
    split_exhaustively(distribute(ineq), &mut out);
    out
}

/// `i ≤ φ ⇒ i ≤ ψ` for the first nominal `i` not in `used`.
pub fn first_approximation(ineq: &Inequality, used: &BTreeSet<String>) -> QuasiInequality {
    let mut used = used.clone();
    used.extend(ineq.nominals());
    approximation_of(ineq, &fresh_nominal(&used), Vec::new())
}

/// Splits every antecedent in place and forks on the consequent.
pub fn apply_splitting(sys: &QuasiInequality) -> Vec<QuasiInequality> {
    let mut ants = Vec::new();
    for a in &sys.antecedents {
        split_exhaustively(a.clone(), &mut ants);
    }
    let mut conss = Vec::new();
    split_exhaustively(sys.consequent.clone(), &mut conss);
    conss.into_iter().map(|c| QuasiInequality::new(ants.clone(), c)).collect()
}

fn residuate_fully(i: &Inequality) -> Inequality {
    let mut cur = i.clone();
    while let Some(next) = residuate_once(&cur) {
        cur = next;
    }
    cur
}

/// Residuates every inequality of the system to a fixpoint.
pub fn apply_residuation(sys: &QuasiInequality) -> QuasiInequality {
    QuasiInequality::new(sys.antecedents.iter().map(residuate_fully).collect(), residuate_fully(&sys.consequent))
}

/// Approximates the consequent `φ ≤ ψ` with a nominal fresh for the system
/// and `used`.
pub fn apply_approximation(sys: &QuasiInequality, used: &BTreeSet<String>) -> QuasiInequality {
    let mut used = used.clone();
    used.extend(sys.nominals());
    let j = fresh_nominal(&used);
    approximation_of(&sys.consequent, &j, sys.antecedents.clone())
}

/// Drops antecedents `α ≤ ⊤`; a consequent `α ≤ ⊤` makes every antecedent
/// redundant.
pub fn apply_deleting(sys: &QuasiInequality) -> QuasiInequality {
    if sys.consequent.rhs == Formula::Top {
        return QuasiInequality::new(Vec::new(), sys.consequent.clone());
    }
    let ants = sys.antecedents.iter().filter(|a| a.rhs != Formula::Top).cloned().collect();
    QuasiInequality::new(ants, sys.consequent.clone())
}

fn side_condition(
    p: &str,
    ineq: &Inequality,
    side: &'static str,
    f: &Formula,
    positive: bool,
) -> Result<(), AlbaError> {
    let pol = f.polarity(p);
    let ok = if positive { pol.is_positive_or_none() } else { pol.is_negative_or_none() };
    if ok {
        Ok(())
    } else {
        Err(AlbaError::SideCondition {
            variable: p.to_string(),
            inequality: ineq.to_string(),
            side,
            polarity: pol,
            needed: if positive { "positive or absent" } else { "negative or absent" },
        })
    }
}

/// The right-handed Ackermann rule: with `θ` the join of every `θᵢ` in an
/// antecedent `θᵢ ≤ p` (`⊥` if there is none), drops those antecedents and
/// substitutes `θ` for `p` everywhere else.
pub fn apply_ackermann(sys: &QuasiInequality, p: &str) -> Result<QuasiInequality, AlbaError> {
    let mut thetas = Vec::new();
    let mut rest = Vec::new();
    for a in &sys.antecedents {
        if matches!(&a.rhs, Formula::Var(q) if q == p) && !a.lhs.occurs(p) {
            thetas.push(a.lhs.clone());
        } else {
            side_condition(p, a, "left-hand side", &a.lhs, true)?;
            side_condition(p, a, "right-hand side", &a.rhs, false)?;
            rest.push(a);
        }
    }
    let c = &sys.consequent;
    side_condition(p, c, "left-hand side", &c.lhs, false)?;
    side_condition(p, c, "right-hand side", &c.rhs, true)?;
    let theta = thetas.into_iter().reduce(or).unwrap_or(Formula::Bot);
    Ok(QuasiInequality::new(
        rest.into_iter().map(|a| a.substitute(p, &theta)).collect(),
        c.substitute(p, &theta),
    ))
}

/// `f ∈ MinVal_p ::= nominal | ◆MinVal_p | MinVal_p ∧ POS_{A_p}`.
pub fn is_min_val(f: &Formula, below: &BTreeSet<String>) -> bool {
    match f {
        Formula::Nominal(_) => true,
        Formula::BlackDiamond(a) => is_min_val(a, below),
        Formula::And(a, b) => is_min_val(a, below) && is_positive(b, below),
        _ => false,
    }
}

// The driver.

struct Runner {
    trace: AlbaTrace,
}

impl Runner {
    fn step(&mut self, rule: Rule, before: Item) -> Result<Vec<Item>, AlbaError> {
        let after = rule.apply(&before)?;
        self.trace.steps.push(TraceStep { rule, before, after: after.clone() });
        Ok(after)
    }

    fn step_quasi(&mut self, rule: Rule, sys: QuasiInequality) -> Result<QuasiInequality, AlbaError> {
        match self.step(rule, Item::Quasi(sys))?.pop() {
            Some(Item::Quasi(q)) => Ok(q),
            _ => unreachable!("system rules yield systems"),
        }
    }

    fn delete(&mut self, sys: QuasiInequality) -> Result<QuasiInequality, AlbaError> {
        if apply_deleting(&sys) == sys {
            return Ok(sys);
        }
        self.step_quasi(Rule::Delete, sys)
    }

    /// Splits and residuates antecedents until none has a redex.
    fn normalise_antecedents(&mut self, mut sys: QuasiInequality) -> Result<QuasiInequality, AlbaError> {
        loop {
            if let Some(index) = sys.antecedents.iter().position(|a| split_once(a).is_some()) {
                sys = self.step_quasi(Rule::SplitAntecedent { index }, sys)?;
            } else if let Some(index) = sys.antecedents.iter().position(|a| residuate_once(a).is_some()) {
                sys = self.step_quasi(Rule::ResiduateAntecedent { index }, sys)?;
            } else {
                return self.delete(sys);
            }
        }
    }

    fn approximate(&mut self, sys: QuasiInequality) -> Result<QuasiInequality, AlbaError> {
        let nominal = fresh_nominal(&sys.nominals());
        self.step_quasi(Rule::Approximate { nominal }, sys)
    }

    /// Decomposes the consequent until its right-hand side is neither a box,
    /// an implication nor a conjunction, approximating only when the
    /// left-hand side is not already a nominal.
    fn reduce_consequent(&mut self, sys: QuasiInequality, done: &mut Vec<QuasiInequality>) -> Result<(), AlbaError> {
        let mut sys = sys;
        loop {
            match &sys.consequent.rhs {
                Formula::And(..) => {
                    for part in self.step(Rule::SplitConsequent, Item::Quasi(sys))? {
                        let Item::Quasi(q) = part else { unreachable!() };
                        self.reduce_consequent(q, done)?;
                    }
                    return Ok(());
                }
                Formula::Box(_) => {
                    if !sys.consequent.lhs.is_nominal() {
                        sys = self.approximate(sys)?;
                    }
                    sys = self.step_quasi(Rule::ResiduateConsequent, sys)?;
                }
                Formula::Implies(..) => {
                    if !sys.consequent.lhs.is_nominal() {
                        sys = self.approximate(sys)?;
                    }
                    sys = self.step_quasi(Rule::ResiduateConsequent, sys)?;
                    sys = self.approximate(sys)?;
                    let index = sys.antecedents.len() - 1;
                    sys = self.step_quasi(Rule::SplitAntecedent { index }, sys)?;
                    sys = self.normalise_antecedents(sys)?;
                }
                _ => break,
            }
            sys = self.delete(sys)?;
        }
        if let Formula::Or(..) = sys.consequent.lhs {
            for part in self.step(Rule::SplitConsequent, Item::Quasi(sys))? {
                let Item::Quasi(q) = part else { unreachable!() };
                self.reduce_consequent(q, done)?;
            }
            return Ok(());
        }
        done.push(sys);
        Ok(())
    }

    fn eliminate(&mut self, mut sys: QuasiInequality, order: Option<&DependenceOrder>) -> Result<QuasiInequality, AlbaError> {
        loop {
            let vars = sys.vars();
            if vars.is_empty() {
                return Ok(sys);
            }
            let candidates = match order {
                Some(o) => o.linearize(&vars),
                None => vars.into_iter().collect(),
            };
            let mut first_error = None;
            let mut chosen = None;
            for p in candidates {
                match apply_ackermann(&sys, &p) {
                    Ok(_) => {
                        chosen = Some(p);
                        break;
                    }
                    Err(e) => {
                        first_error.get_or_insert(e);
                    }
                }
            }
            match chosen {
                Some(variable) => sys = self.step_quasi(Rule::Ackermann { variable }, sys)?,
                None => {
                    return Err(AlbaError::Stuck {
                        system: sys.to_string(),
                        reason: first_error.map(|e| e.to_string()).unwrap_or_default(),
                    })
                }
            }
        }
    }
}

fn check_min_val(sys: &QuasiInequality, order: &DependenceOrder) -> Result<(), AlbaError> {
    for a in &sys.antecedents {
        if let Formula::Var(p) = &a.rhs {
            if !is_min_val(&a.lhs, &order.below(p)) {
                return Err(AlbaError::MinValShape { variable: p.clone(), inequality: a.to_string() });
            }
        }
    }
    Ok(())
}

/// Runs ALBA on an implication `φ → ψ` of basic formulas.
///
/// Inductive inputs are processed in the order given by the classifier's
/// witness. Other inputs are attempted with variables eliminated by name; the
/// run fails as soon as no variable satisfies the Ackermann side conditions.
pub fn run_alba(f: &Formula) -> Result<AlbaOutput, AlbaError> {
    let (lhs, rhs) = match f {
        Formula::Implies(a, b) if f.is_basic() => ((**a).clone(), (**b).clone()),
        _ => return Err(AlbaError::NotImplication(f.to_string())),
    };
    let order = classify_inductive(f)?;
    let mut run = Runner { trace: AlbaTrace::default() };

    // Stage 1.
    let start = Inequality::new(lhs, rhs);
    let mut ineqs = vec![start.clone()];
    if distribute(&start) != start {
        ineqs = run.step(Rule::Distribute, Item::Ineq(start))?.into_iter().map(expect_ineq).collect();
    }
    let mut split = Vec::new();
    for i in ineqs {
        if split_once(&i).is_some() {
            split.extend(run.step(Rule::SplitInequality, Item::Ineq(i))?.into_iter().map(expect_ineq));
        } else {
            split.push(i);
        }
    }
    let mut systems = Vec::new();
    for i in split {
        let nominal = fresh_nominal(&i.nominals());
        for item in run.step(Rule::FirstApproximation { nominal }, Item::Ineq(i))? {
            let Item::Quasi(q) = item else { unreachable!() };
            systems.push(q);
        }
    }

    // Stage 2.
    let mut reduced = Vec::new();
    for sys in systems {
        let sys = run.normalise_antecedents(sys)?;
        if let Some(o) = &order {
            check_min_val(&sys, o)?;
        }
        run.reduce_consequent(sys, &mut reduced)?;
    }
    let mut out = Vec::new();
    for sys in reduced {
        out.push(run.eliminate(sys, order.as_ref())?);
    }

    // Stage 3.
    assert!(out.iter().all(QuasiInequality::is_pure), "elimination leaves pure systems");
    Ok(AlbaOutput { systems: out, trace: run.trace, order })
}

fn expect_ineq(item: Item) -> Inequality {
    match item {
        Item::Ineq(i) => i,
        Item::Quasi(_) => unreachable!("preprocessing yields inequalities"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_inequality, parse_quasi};

    fn ineq(s: &str) -> Inequality {
        parse_inequality(s).unwrap()
    }

    fn quasi(s: &str) -> QuasiInequality {
        parse_quasi(s).unwrap()
    }

    fn systems(s: &str) -> Vec<QuasiInequality> {
        run_alba(&parse_formula(s).unwrap()).unwrap().systems
    }

    #[test]
    fn preprocessing() {
        assert_eq!(preprocess(&ineq("[]p <= [][]p")), vec![ineq("[]p <= [][]p")]);
        assert_eq!(preprocess(&ineq("p & (q | r) <= s")), vec![ineq("p & q <= s"), ineq("p & r <= s")]);
        assert_eq!(preprocess(&ineq("p <= [](q & r)")), vec![ineq("p <= []q"), ineq("p <= []r")]);
        assert_eq!(preprocess(&ineq("p <= q -> r & s")), vec![ineq("p <= q -> r"), ineq("p <= q -> s")]);
        assert_eq!(preprocess(&ineq("p <= q & r | s")), vec![ineq("p <= q | s"), ineq("p <= r | s")]);
    }

    #[test]
    fn first_approximations() {
        let none = BTreeSet::new();
        assert_eq!(first_approximation(&ineq("[]p <= p"), &none), quasi("@i0 <= []p => @i0 <= p"));
        assert_eq!(first_approximation(&ineq("top <= bot"), &none), quasi("@i0 <= top => @i0 <= bot"));
    }

    #[test]
    fn splitting() {
        assert_eq!(apply_splitting(&quasi("@i0 <= p & q => @i0 <= r")), vec![quasi("@i0 <= p & @i0 <= q => @i0 <= r")]);
        assert_eq!(
            apply_splitting(&quasi("∅ => @i0 <= p & q")),
            vec![quasi("∅ => @i0 <= p"), quasi("∅ => @i0 <= q")]
        );
        let plain = quasi("@i0 <= p => @i0 <= q");
        assert_eq!(apply_splitting(&plain), vec![plain]);
    }

    #[test]
    fn residuation() {
        assert_eq!(apply_residuation(&quasi("@i0 <= []p => @i0 <= q")), quasi("<*>@i0 <= p => @i0 <= q"));
        assert_eq!(
            apply_residuation(&quasi("@i0 <= q -> []p => @i0 <= r")),
            quasi("<*>(@i0 & q) <= p => @i0 <= r")
        );
        let plain = quasi("@i0 <= p => @i0 <= q");
        assert_eq!(apply_residuation(&plain), plain);
    }

    #[test]
    fn approximation() {
        let none = BTreeSet::new();
        assert_eq!(
            apply_approximation(&quasi("@i1 <= p => <*>@i0 <= p"), &none),
            quasi("@i1 <= p & @i2 <= <*>@i0 => @i2 <= p")
        );
        assert_eq!(apply_approximation(&quasi("∅ => top <= p"), &none), quasi("@i0 <= top => @i0 <= p"));
    }

    #[test]
    fn deleting() {
        assert_eq!(apply_deleting(&quasi("@i0 <= top & @i0 <= p => @i0 <= q")), quasi("@i0 <= p => @i0 <= q"));
        assert_eq!(apply_deleting(&quasi("@i0 <= p => @i0 <= top")), quasi("∅ => @i0 <= top"));
        let plain = quasi("@i0 <= p => @i0 <= q");
        assert_eq!(apply_deleting(&plain), plain);
    }

    #[test]
    fn ackermann() {
        assert_eq!(apply_ackermann(&quasi("<*>@i0 <= p => @i0 <= p"), "p").unwrap(), quasi("∅ => @i0 <= <*>@i0"));
        assert_eq!(
            apply_ackermann(&quasi("<*>@i0 <= p & @i1 <= <*>@i0 => <*>@i1 <= p"), "p").unwrap(),
            quasi("@i1 <= <*>@i0 => <*>@i1 <= <*>@i0")
        );
        assert_eq!(apply_ackermann(&quasi("∅ => @i0 <= p"), "p").unwrap(), quasi("∅ => @i0 <= bot"));
        let err = apply_ackermann(&quasi("@i0 <= p => p <= @i0"), "p").unwrap_err();
        assert!(matches!(err, AlbaError::SideCondition { polarity: Polarity::Positive, .. }), "{err}");
    }

    #[test]
    fn worked_examples() {
        assert_eq!(systems("[]p -> p"), vec![quasi("∅ => @i0 <= <*>@i0")]);
        assert_eq!(systems("p -> p"), vec![quasi("∅ => @i0 <= @i0")]);
        let got = systems("[]p -> [][]p");
        assert_eq!(got.len(), 1);
        assert!(got[0].alpha_eq(&quasi("@j <= <*>@i0 => <*>@j <= <*>@i0")), "{}", got[0]);
    }

    #[test]
    fn traces_replay() {
        for s in ["[]p -> [][]p", "([]q & (q -> []p)) -> []p", "p -> []p", "(p | q) & r -> (q -> [](p & r))"] {
            let out = run_alba(&parse_formula(s).unwrap()).unwrap();
            assert!(out.trace.replays(), "{s}");
            assert!(out.systems.iter().all(QuasiInequality::is_pure));
        }
    }

    #[test]
    fn min_val_shapes() {
        let below: BTreeSet<String> = ["q".to_string()].into();
        assert!(is_min_val(&parse_formula("<*>(@i0 & q)").unwrap(), &below));
        assert!(!is_min_val(&parse_formula("<*>(@i0 & p)").unwrap(), &below));
        assert!(!is_min_val(&parse_formula("q").unwrap(), &below));
    }

    #[test]
    fn non_inductive_input_fails_cleanly() {
        let err = run_alba(&parse_formula("([]p -> p) -> q").unwrap()).unwrap_err();
        assert!(matches!(err, AlbaError::Stuck { .. }), "{err}");
        assert!(matches!(run_alba(&parse_formula("p").unwrap()), Err(AlbaError::NotImplication(_))));
    }
}

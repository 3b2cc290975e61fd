//! The first-order correspondence language over `≤₁`, `≤₂`, `R`, equality and
//! unary predicates, and the refined regular open translation into it.

use crate::formula::{Formula, Inequality, QuasiInequality};
use crate::semantics::Relation;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    /// The individual symbol of a nominal.
    Nominal(String),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(x) | Term::Nominal(x) => x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FoFormula {
    Eq(Term, Term),
    Neq(Term, Term),
    Rel(Relation, Term, Term),
    Pred(String, Term),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
}

impl FoFormula {
    pub fn and(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, body: FoFormula) -> FoFormula {
        FoFormula::Forall(x.to_string(), Box::new(body))
    }

    pub fn exists(x: &str, body: FoFormula) -> FoFormula {
        FoFormula::Exists(x.to_string(), Box::new(body))
    }

    pub fn rel(r: Relation, a: &Term, b: &Term) -> FoFormula {
        FoFormula::Rel(r, a.clone(), b.clone())
    }

    /// Free world variables. Nominal constants are not variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term| {
            if let Term::Var(x) = t {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
        };
        match self {
            FoFormula::Eq(a, b) | FoFormula::Neq(a, b) | FoFormula::Rel(_, a, b) => {
                term(a);
                term(b);
            }
            FoFormula::Pred(_, a) => term(a),
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FoFormula::Forall(x, a) | FoFormula::Exists(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Nominal constants occurring anywhere.
    pub fn nominal_constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            let mut term = |t: &Term| {
                if let Term::Nominal(i) = t {
                    out.insert(i.clone());
                }
            };
            match f {
                FoFormula::Eq(a, b) | FoFormula::Neq(a, b) | FoFormula::Rel(_, a, b) => {
                    term(a);
                    term(b);
                }
                FoFormula::Pred(_, a) => term(a),
                _ => {}
            }
        });
        out
    }

    /// Predicate symbols occurring anywhere.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let FoFormula::Pred(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Binders in pre-order.
    pub fn bound_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let FoFormula::Forall(x, _) | FoFormula::Exists(x, _) = f {
                out.push(x.clone());
            }
        });
        out
    }

    /// Every binder introduces a distinct name, none of which is also free.
    pub fn bound_vars_distinct(&self) -> bool {
        let bound = self.bound_vars();
        let set: BTreeSet<&String> = bound.iter().collect();
        let free = self.free_vars();
        set.len() == bound.len() && set.iter().all(|x| !free.contains(*x))
    }

    fn visit(&self, f: &mut dyn FnMut(&FoFormula)) {
        f(self);
        match self {
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            FoFormula::Forall(_, a) | FoFormula::Exists(_, a) => a.visit(f),
            _ => {}
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &FoFormula) -> bool {
        fn term_eq(a: &Term, b: &Term, env: &[(String, String)]) -> bool {
            match (a, b) {
                (Term::Nominal(x), Term::Nominal(y)) => x == y,
                (Term::Var(x), Term::Var(y)) => {
                    let l = env.iter().rposition(|(u, _)| u == x);
                    let r = env.iter().rposition(|(_, v)| v == y);
                    match (l, r) {
                        (Some(l), Some(r)) => l == r,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                _ => false,
            }
        }
        fn go(a: &FoFormula, b: &FoFormula, env: &mut Vec<(String, String)>) -> bool {
            use FoFormula::*;
            match (a, b) {
                (Eq(a1, a2), Eq(b1, b2)) | (Neq(a1, a2), Neq(b1, b2)) => {
                    term_eq(a1, b1, env) && term_eq(a2, b2, env)
                }
                (Rel(r, a1, a2), Rel(s, b1, b2)) => r == s && term_eq(a1, b1, env) && term_eq(a2, b2, env),
                (Pred(p, a1), Pred(q, b1)) => p == q && term_eq(a1, b1, env),
                (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Implies(a1, a2), Implies(b1, b2)) => {
                    go(a1, b1, env) && go(a2, b2, env)
                }
                (Forall(x, a1), Forall(y, b1)) | (Exists(x, a1), Exists(y, b1)) => {
                    env.push((x.clone(), y.clone()));
                    let r = go(a1, b1, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Replaces nominal constants by world variables of the same name.
    pub fn nominals_to_vars(&self) -> FoFormula {
        let t = |t: &Term| match t {
            Term::Nominal(i) => Term::Var(i.clone()),
            other => other.clone(),
        };
        match self {
            FoFormula::Eq(a, b) => FoFormula::Eq(t(a), t(b)),
            FoFormula::Neq(a, b) => FoFormula::Neq(t(a), t(b)),
            FoFormula::Rel(r, a, b) => FoFormula::Rel(*r, t(a), t(b)),
            FoFormula::Pred(p, a) => FoFormula::Pred(p.clone(), t(a)),
            FoFormula::And(a, b) => FoFormula::and(a.nominals_to_vars(), b.nominals_to_vars()),
            FoFormula::Or(a, b) => FoFormula::or(a.nominals_to_vars(), b.nominals_to_vars()),
            FoFormula::Implies(a, b) => FoFormula::implies(a.nominals_to_vars(), b.nominals_to_vars()),
            FoFormula::Forall(x, a) => FoFormula::forall(x, a.nominals_to_vars()),
            FoFormula::Exists(x, a) => FoFormula::exists(x, a.nominals_to_vars()),
        }
    }
}

/// Predicate symbol standing for a propositional variable: the name with its
/// first letter capitalised.
pub fn predicate_name(p: &str) -> String {
    let mut cs = p.chars();
    match cs.next() {
        Some(c) => c.to_uppercase().chain(cs).collect(),
        None => String::new(),
    }
}

const BASE_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Supplies bound-variable names never handed out before and never in the
/// reserved set.
#[derive(Clone, Debug, Default)]
pub struct Namer {
    used: BTreeSet<String>,
    round: usize,
    next: usize,
}

impl Namer {
    pub fn new() -> Namer {
        Namer::default()
    }

    pub fn reserving<I: IntoIterator<Item = String>>(names: I) -> Namer {
        Namer { used: names.into_iter().collect(), round: 0, next: 0 }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let base = BASE_NAMES[self.next];
            let name = if self.round == 0 { base.to_string() } else { format!("{base}{}", self.round) };
            self.next += 1;
            if self.next == BASE_NAMES.len() {
                self.next = 0;
                self.round += 1;
            }
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// `RO_x(α) = ∀y(x ≤₁ y → ∃z(y ≤₂ z ∧ ∃z′(z′ ≤₁ z ∧ α(z′))))`. The body receives
/// the term for `z′`.
pub fn syntactic_ro_closure<F>(namer: &mut Namer, x: &Term, body: F) -> FoFormula
where
    F: FnOnce(&mut Namer, &Term) -> FoFormula,
{
    let y = namer.fresh();
    let z = namer.fresh();
    let z1 = namer.fresh();
    let (ty, tz, tz1) = (Term::var(&y), Term::var(&z), Term::var(&z1));
    let inner = body(namer, &tz1);
    FoFormula::forall(
        &y,
        FoFormula::implies(
            FoFormula::rel(Relation::Leq1, x, &ty),
            FoFormula::exists(
                &z,
                FoFormula::and(
                    FoFormula::rel(Relation::Leq2, &ty, &tz),
                    FoFormula::exists(&z1, FoFormula::and(FoFormula::rel(Relation::Leq1, &tz1, &tz), inner)),
                ),
            ),
        ),
    )
}

/// The standard translation `ST_x(f)` with binders drawn from `namer`.
pub fn st_with(namer: &mut Namer, x: &Term, f: &Formula) -> FoFormula {
    match f {
        Formula::Var(p) => FoFormula::Pred(predicate_name(p), x.clone()),
        Formula::Bot => FoFormula::Neq(x.clone(), x.clone()),
        Formula::Top => FoFormula::Eq(x.clone(), x.clone()),
        Formula::Nominal(i) => {
            syntactic_ro_closure(namer, x, |_, z| FoFormula::Eq(Term::Nominal(i.clone()), z.clone()))
        }
        Formula::And(a, b) => {
            let a = st_with(namer, x, a);
            FoFormula::and(a, st_with(namer, x, b))
        }
        Formula::Or(a, b) => {
            let y = namer.fresh();
            let z = namer.fresh();
            let (ty, tz) = (Term::var(&y), Term::var(&z));
            let sa = st_with(namer, &tz, a);
            let sb = st_with(namer, &tz, b);
            FoFormula::forall(
                &y,
                FoFormula::implies(
                    FoFormula::rel(Relation::Leq1, x, &ty),
                    FoFormula::exists(&z, FoFormula::and(FoFormula::rel(Relation::Leq2, &ty, &tz), FoFormula::or(sa, sb))),
                ),
            )
        }
        Formula::Implies(a, b) => {
            let y = namer.fresh();
            let ty = Term::var(&y);
            let sa = st_with(namer, &ty, a);
            let sb = st_with(namer, &ty, b);
            FoFormula::forall(&y, FoFormula::implies(FoFormula::rel(Relation::Leq1, x, &ty), FoFormula::implies(sa, sb)))
        }
        Formula::Box(a) => {
            let y = namer.fresh();
            let ty = Term::var(&y);
            let sa = st_with(namer, &ty, a);
            FoFormula::forall(&y, FoFormula::implies(FoFormula::rel(Relation::R, x, &ty), sa))
        }
        Formula::BlackDiamond(a) => syntactic_ro_closure(namer, x, |namer, z| {
            let y = namer.fresh();
            let ty = Term::var(&y);
            let sa = st_with(namer, &ty, a);
            FoFormula::exists(&y, FoFormula::and(FoFormula::rel(Relation::R, &ty, z), sa))
        }),
    }
}

/// `ST_x(f)` for a world variable `x`; binders avoid `x` and every nominal of `f`.
pub fn st(x: &str, f: &Formula) -> FoFormula {
    let mut namer = Namer::reserving(f.nominals());
    namer.reserve(x);
    st_with(&mut namer, &Term::var(x), f)
}

fn st_inequality_with(namer: &mut Namer, ineq: &Inequality) -> FoFormula {
    let x = namer.fresh();
    let tx = Term::var(&x);
    let l = st_with(namer, &tx, &ineq.lhs);
    let r = st_with(namer, &tx, &ineq.rhs);
    FoFormula::forall(&x, FoFormula::implies(l, r))
}

/// `ST(φ ≤ ψ) = ∀x(ST_x(φ) → ST_x(ψ))`.
pub fn st_inequality(ineq: &Inequality) -> FoFormula {
    st_inequality_with(&mut Namer::reserving(ineq.nominals()), ineq)
}

fn st_quasi_with(namer: &mut Namer, q: &QuasiInequality) -> FoFormula {
    let ants: Vec<FoFormula> = q.antecedents.iter().map(|a| st_inequality_with(namer, a)).collect();
    let cons = st_inequality_with(namer, &q.consequent);
    match ants.into_iter().reduce(FoFormula::and) {
        Some(a) => FoFormula::implies(a, cons),
        None => cons,
    }
}

/// The conjunction of the antecedent translations implies the consequent's;
/// with no antecedents this is the consequent's translation alone.
pub fn st_quasi(q: &QuasiInequality) -> FoFormula {
    st_quasi_with(&mut Namer::reserving(q.nominals()), q)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CorrespondentError {
    #[error("system {index} is not pure: {system}")]
    NotPure { index: usize, system: String },
    #[error("no systems to translate")]
    Empty,
}

/// Conjunction over the systems of the universal closure of their
/// translations, nominals becoming universally quantified variables. Nominals
/// are renamed apart across systems so that every binder is distinct.
pub fn correspondent(systems: &[QuasiInequality]) -> Result<FoFormula, CorrespondentError> {
    if systems.is_empty() {
        return Err(CorrespondentError::Empty);
    }
    for (index, s) in systems.iter().enumerate() {
        if !s.is_pure() {
            return Err(CorrespondentError::NotPure { index, system: s.to_string() });
        }
    }
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut renamed = Vec::with_capacity(systems.len());
    for s in systems {
        let mut map = BTreeMap::new();
        for i in s.nominals() {
            let target = if taken.contains(&i) { crate::formula::fresh_nominal(&taken) } else { i.clone() };
            taken.insert(target.clone());
            map.insert(i, target);
        }
        renamed.push(s.rename_nominals(&|i: &str| map.get(i).cloned()));
    }
    let mut namer = Namer::reserving(taken.iter().cloned());
    let parts: Vec<FoFormula> = renamed
        .iter()
        .map(|s| {
            let body = st_quasi_with(&mut namer, s).nominals_to_vars();
            s.nominals().iter().rev().fold(body, |acc, i| FoFormula::forall(i, acc))
        })
        .collect();
    Ok(parts.into_iter().reduce(FoFormula::and).expect("non-empty"))
}

// Printing. Levels: 0 implication, 1 disjunction, 2 conjunction, 3 atoms.
// Quantifiers extend as far right as possible, so a quantified operand of a
// binary connective is always parenthesised.

fn fo_level(f: &FoFormula) -> u8 {
    match f {
        FoFormula::Implies(..) => 0,
        FoFormula::Or(..) => 1,
        FoFormula::And(..) => 2,
        _ => 3,
    }
}

fn write_operand(f: &FoFormula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if fo_level(f) < min || matches!(f, FoFormula::Forall(..) | FoFormula::Exists(..)) {
        out.write_str("(")?;
        write_fo(f, out)?;
        return out.write_str(")");
    }
    write_fo(f, out)
}

fn write_fo(f: &FoFormula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        FoFormula::Eq(a, b) => write!(out, "{} = {}", a.name(), b.name()),
        FoFormula::Neq(a, b) => write!(out, "{} != {}", a.name(), b.name()),
        FoFormula::Rel(r, a, b) => write!(out, "{}({},{})", r.name(), a.name(), b.name()),
        FoFormula::Pred(p, a) => write!(out, "{p}({})", a.name()),
        FoFormula::And(a, b) => {
            write_operand(a, 2, out)?;
            out.write_str(" & ")?;
            write_operand(b, 3, out)
        }
        FoFormula::Or(a, b) => {
            write_operand(a, 1, out)?;
            out.write_str(" | ")?;
            write_operand(b, 2, out)
        }
        FoFormula::Implies(a, b) => {
            write_operand(a, 1, out)?;
            out.write_str(" -> ")?;
            write_operand(b, 0, out)
        }
        FoFormula::Forall(x, a) => {
            write!(out, "forall {x}. ")?;
            write_fo(a, out)
        }
        FoFormula::Exists(x, a) => {
            write!(out, "exists {x}. ")?;
            write_fo(a, out)
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_fo(self, f)
    }
}

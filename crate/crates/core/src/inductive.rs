//! Membership in the POS / PIA / Ant / Suc grammars and the search for a
//! dependence order witnessing that an implication is inductive.

use crate::formula::Formula;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

/// Largest number of variables for which all total orders are tried.
pub const MAX_CLASSIFY_VARS: usize = 9;

/// A strict (irreflexive, transitive) order `q <Ω p` on propositional variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct DependenceOrder {
    strict_pairs: BTreeSet<(String, String)>,
    /// Variables listed in a linearisation, least first, when the order came
    /// from one.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    chain: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("dependence order is not irreflexive: {0} < {0}")]
    Reflexive(String),
    #[error("dependence order is not transitive: {0} < {1} < {2} but not {0} < {2}")]
    NotTransitive(String, String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{0} propositional variables exceeds the search limit of {MAX_CLASSIFY_VARS}")]
    TooManyVariables(usize),
}

impl DependenceOrder {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let strict_pairs: BTreeSet<(String, String)> =
            pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        for (a, b) in &strict_pairs {
            if a == b {
                return Err(OrderError::Reflexive(a.clone()));
            }
        }
        for (a, b) in &strict_pairs {
            for (c, d) in &strict_pairs {
                if b == c && !strict_pairs.contains(&(a.clone(), d.clone())) {
                    return Err(OrderError::NotTransitive(a.clone(), b.clone(), d.clone()));
                }
            }
        }
        Ok(DependenceOrder { strict_pairs, chain: Vec::new() })
    }

    /// The strict total order `chain[0] < chain[1] < ...`.
    pub fn total(chain: &[String]) -> Self {
        let mut strict_pairs = BTreeSet::new();
        for (k, a) in chain.iter().enumerate() {
            for b in &chain[k + 1..] {
                strict_pairs.insert((a.clone(), b.clone()));
            }
        }
        DependenceOrder { strict_pairs, chain: chain.to_vec() }
    }

    pub fn less(&self, q: &str, p: &str) -> bool {
        self.strict_pairs.contains(&(q.to_string(), p.to_string()))
    }

    /// `A_p = { q | q <Ω p }`.
    pub fn below(&self, p: &str) -> BTreeSet<String> {
        self.strict_pairs
            .iter()
            .filter(|(_, b)| b == p)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn pairs(&self) -> &BTreeSet<(String, String)> {
        &self.strict_pairs
    }

    pub fn is_subset_of(&self, other: &DependenceOrder) -> bool {
        self.strict_pairs.is_subset(&other.strict_pairs)
    }

    /// Sorts `vars` so that every variable comes after all of its predecessors
    /// in the order; ties are broken by name.
    pub fn linearize(&self, vars: &BTreeSet<String>) -> Vec<String> {
        let mut remaining: Vec<String> = vars.iter().cloned().collect();
        let mut out = Vec::with_capacity(remaining.len());
        while !remaining.is_empty() {
            let k = remaining
                .iter()
                .position(|p| !remaining.iter().any(|q| self.less(q, p)))
                .unwrap_or(0);
            out.push(remaining.remove(k));
        }
        out
    }
}

impl fmt::Display for DependenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.len() > 1 {
            return f.write_str(&self.chain.join(" < "));
        }
        if self.strict_pairs.is_empty() {
            return f.write_str("(empty order)");
        }
        let parts: Vec<String> = self.strict_pairs.iter().map(|(a, b)| format!("{a} < {b}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Symbol {
    /// POS_A with A = all variables.
    PosAll,
    /// POS_{A_p}, p given by index into the recogniser's names.
    PosBelow(usize),
    Pia(usize),
    Ant,
    Suc,
}

/// Grammar recogniser memoised on (subformula address, nonterminal).
struct Recognizer<'a> {
    order: &'a DependenceOrder,
    /// Candidate main variables of PIA formulas.
    names: Vec<String>,
    memo: HashMap<(usize, Symbol), bool>,
}

impl<'a> Recognizer<'a> {
    fn new(order: &'a DependenceOrder, names: Vec<String>) -> Self {
        Recognizer { order, names, memo: HashMap::new() }
    }

    fn check(&mut self, f: &Formula, sym: Symbol) -> bool {
        let key = (f as *const Formula as usize, sym);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.derive(f, sym);
        self.memo.insert(key, v);
        v
    }

    fn derive(&mut self, f: &Formula, sym: Symbol) -> bool {
        match sym {
            Symbol::PosAll | Symbol::PosBelow(_) => match f {
                Formula::Var(q) => match sym {
                    Symbol::PosBelow(p) => self.order.less(q, &self.names[p]),
                    _ => true,
                },
                Formula::Bot | Formula::Top => true,
                Formula::Box(a) => self.check(a, sym),
                Formula::And(a, b) | Formula::Or(a, b) => self.check(a, sym) && self.check(b, sym),
                _ => false,
            },
            Symbol::Pia(p) => match f {
                Formula::Var(q) => *q == self.names[p],
                Formula::Bot | Formula::Top => true,
                Formula::Box(a) => self.check(a, sym),
                Formula::Implies(a, b) => self.check(a, Symbol::PosBelow(p)) && self.check(b, sym),
                _ => false,
            },
            Symbol::Ant => match f {
                Formula::And(a, b) | Formula::Or(a, b)
                    if self.check(a, Symbol::Ant) && self.check(b, Symbol::Ant) =>
                {
                    true
                }
                _ => self.some_pia(f),
            },
            Symbol::Suc => {
                if self.check(f, Symbol::PosAll) {
                    return true;
                }
                match f {
                    Formula::Implies(a, b) => self.some_pia(a) && self.check(b, Symbol::Suc),
                    Formula::Box(a) => self.check(a, Symbol::Suc),
                    Formula::And(a, b) => self.check(a, Symbol::Suc) && self.check(b, Symbol::Suc),
                    _ => false,
                }
            }
        }
    }

    fn some_pia(&mut self, f: &Formula) -> bool {
        (0..self.names.len()).any(|p| self.check(f, Symbol::Pia(p)))
    }
}

/// Candidate main variables: the occurring ones, plus one name outside them
/// standing for a variable with nothing below it (used by variable-free PIA
/// leaves such as `top`).
fn main_candidates(vars: &BTreeSet<String>) -> Vec<String> {
    let mut mains: Vec<String> = vars.iter().cloned().collect();
    let fresh = (0..).map(|k| format!("_fresh{k}")).find(|n| !vars.contains(n)).unwrap();
    mains.push(fresh);
    mains
}

/// `f ∈ POS_A`.
pub fn is_positive(f: &Formula, allowed: &BTreeSet<String>) -> bool {
    match f {
        Formula::Var(q) => allowed.contains(q),
        Formula::Bot | Formula::Top => true,
        Formula::Box(a) => is_positive(a, allowed),
        Formula::And(a, b) | Formula::Or(a, b) => is_positive(a, allowed) && is_positive(b, allowed),
        _ => false,
    }
}

/// `f ∈ PIA_p` under `order`.
pub fn is_pia(f: &Formula, p: &str, order: &DependenceOrder) -> bool {
    Recognizer::new(order, vec![p.to_string()]).check(f, Symbol::Pia(0))
}

/// `f ∈ Ant` under `order`.
pub fn is_ant(f: &Formula, order: &DependenceOrder) -> bool {
    Recognizer::new(order, main_candidates(&f.vars())).check(f, Symbol::Ant)
}

/// `f ∈ Suc` under `order`.
pub fn is_suc(f: &Formula, order: &DependenceOrder) -> bool {
    Recognizer::new(order, main_candidates(&f.vars())).check(f, Symbol::Suc)
}

/// `f` is `Ant -> Suc` under `order`.
pub fn is_omega_inductive(f: &Formula, order: &DependenceOrder) -> bool {
    match f {
        Formula::Implies(a, s) if f.is_basic() => {
            let mut r = Recognizer::new(order, main_candidates(&f.vars()));
            r.check(a, Symbol::Ant) && r.check(s, Symbol::Suc)
        }
        _ => false,
    }
}

/// Searches the strict total orders on the variables of `f` (lexicographic
/// enumeration of permutations) for one under which `f` is inductive.
pub fn classify_inductive(f: &Formula) -> Result<Option<DependenceOrder>, ClassifyError> {
    if !matches!(f, Formula::Implies(..)) || !f.is_basic() {
        return Ok(None);
    }
    let vars: Vec<String> = f.vars().into_iter().collect();
    if vars.len() > MAX_CLASSIFY_VARS {
        return Err(ClassifyError::TooManyVariables(vars.len()));
    }
    let mut perm = vars;
    loop {
        let order = DependenceOrder::total(&perm);
        if is_omega_inductive(f, &order) {
            return Ok(Some(order));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

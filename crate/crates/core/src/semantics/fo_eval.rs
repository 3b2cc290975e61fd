use super::frame::{FmFrame, Relation};
use super::model::SemanticsError;
use super::worldset::WorldSet;
use crate::fo::{FoFormula, Term};
use std::collections::BTreeMap;

/// Interpretation of free variables, nominal constants and predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoEnv {
    pub worlds: BTreeMap<String, usize>,
    pub nominals: BTreeMap<String, usize>,
    pub preds: BTreeMap<String, WorldSet>,
}

impl FoEnv {
    pub fn new() -> FoEnv {
        FoEnv::default()
    }

    pub fn with_world(mut self, x: &str, w: usize) -> FoEnv {
        self.worlds.insert(x.to_string(), w);
        self
    }

    pub fn with_nominal(mut self, i: &str, w: usize) -> FoEnv {
        self.nominals.insert(i.to_string(), w);
        self
    }

    pub fn with_pred(mut self, p: &str, y: WorldSet) -> FoEnv {
        self.preds.insert(p.to_string(), y);
        self
    }
}

#[derive(Clone, Debug)]
enum Node {
    Eq(usize, usize),
    Neq(usize, usize),
    Rel(Relation, usize, usize),
    Pred(WorldSet, usize),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A first-order formula with every variable resolved to a slot, so that
/// evaluation touches no strings.
#[derive(Clone, Debug)]
pub struct CompiledFo {
    root: Node,
    /// Initial slot contents: free variables and nominal constants.
    init: Vec<usize>,
}

struct Compiler<'e> {
    env: &'e FoEnv,
    scope: Vec<(String, usize)>,
    nominal_slots: BTreeMap<String, usize>,
    init: Vec<usize>,
}

impl Compiler<'_> {
    fn term(&mut self, t: &Term) -> Result<usize, SemanticsError> {
        match t {
            Term::Var(x) => {
                if let Some(&(_, slot)) = self.scope.iter().rev().find(|(y, _)| y == x) {
                    return Ok(slot);
                }
                let &w = self.env.worlds.get(x).ok_or_else(|| SemanticsError::UnboundFoVariable(x.clone()))?;
                self.init.push(w);
                let slot = self.init.len() - 1;
                self.scope.insert(0, (x.clone(), slot));
                Ok(slot)
            }
            Term::Nominal(i) => {
                if let Some(&slot) = self.nominal_slots.get(i) {
                    return Ok(slot);
                }
                let &w = self.env.nominals.get(i).ok_or_else(|| SemanticsError::UnboundNominal(i.clone()))?;
                self.init.push(w);
                let slot = self.init.len() - 1;
                self.nominal_slots.insert(i.clone(), slot);
                Ok(slot)
            }
        }
    }

    fn node(&mut self, f: &FoFormula) -> Result<Node, SemanticsError> {
        Ok(match f {
            FoFormula::Eq(a, b) => Node::Eq(self.term(a)?, self.term(b)?),
            FoFormula::Neq(a, b) => Node::Neq(self.term(a)?, self.term(b)?),
            FoFormula::Rel(r, a, b) => Node::Rel(*r, self.term(a)?, self.term(b)?),
            FoFormula::Pred(p, a) => {
                let &y = self.env.preds.get(p).ok_or_else(|| SemanticsError::UnboundPredicate(p.clone()))?;
                Node::Pred(y, self.term(a)?)
            }
            FoFormula::And(a, b) => Node::And(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            FoFormula::Or(a, b) => Node::Or(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            FoFormula::Implies(a, b) => Node::Implies(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            FoFormula::Forall(x, a) | FoFormula::Exists(x, a) => {
                self.init.push(0);
                let slot = self.init.len() - 1;
                self.scope.push((x.clone(), slot));
                let body = Box::new(self.node(a)?);
                self.scope.pop();
                if matches!(f, FoFormula::Forall(..)) {
                    Node::Forall(slot, body)
                } else {
                    Node::Exists(slot, body)
                }
            }
        })
    }
}

impl CompiledFo {
    pub fn new(f: &FoFormula, env: &FoEnv) -> Result<CompiledFo, SemanticsError> {
        let mut c = Compiler { env, scope: Vec::new(), nominal_slots: BTreeMap::new(), init: Vec::new() };
        let root = c.node(f)?;
        Ok(CompiledFo { root, init: c.init })
    }

    /// Truth on `frame`. World indices supplied by the environment must be
    /// in range for it.
    pub fn eval(&self, frame: &FmFrame) -> bool {
        let mut slots = self.init.clone();
        eval_node(&self.root, frame, &mut slots)
    }
}

fn eval_node(node: &Node, frame: &FmFrame, s: &mut [usize]) -> bool {
    match node {
        Node::Eq(a, b) => s[*a] == s[*b],
        Node::Neq(a, b) => s[*a] != s[*b],
        Node::Rel(r, a, b) => frame.rows(*r)[s[*a]].contains(s[*b]),
        Node::Pred(y, a) => y.contains(s[*a]),
        Node::And(a, b) => eval_node(a, frame, s) && eval_node(b, frame, s),
        Node::Or(a, b) => eval_node(a, frame, s) || eval_node(b, frame, s),
        Node::Implies(a, b) => !eval_node(a, frame, s) || eval_node(b, frame, s),
        Node::Forall(x, a) => (0..frame.len()).all(|w| {
            s[*x] = w;
            eval_node(a, frame, s)
        }),
        Node::Exists(x, a) => (0..frame.len()).any(|w| {
            s[*x] = w;
            eval_node(a, frame, s)
        }),
    }
}

/// Tarskian truth of `f` on `frame` under `env`; quantifiers range over worlds.
pub fn eval_fo(frame: &FmFrame, env: &FoEnv, f: &FoFormula) -> Result<bool, SemanticsError> {
    for &w in env.worlds.values().chain(env.nominals.values()) {
        if w >= frame.len() {
            return Err(SemanticsError::UnknownWorld(w));
        }
    }
    Ok(CompiledFo::new(f, env)?.eval(frame))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> FmFrame {
        FmFrame::from_generators::<&str>(&["a", "b"], &[("a", "b")], &[], &[]).unwrap()
    }

    #[test]
    fn atoms() {
        let f = chain();
        let x = Term::var("x");
        let env = FoEnv::new().with_world("x", 0).with_world("y", 1);
        assert!(eval_fo(&f, &env, &FoFormula::Eq(x.clone(), x.clone())).unwrap());
        let leq = FoFormula::rel(Relation::Leq1, &x, &Term::var("y"));
        assert!(eval_fo(&f, &env, &leq).unwrap());
        let back = FoFormula::rel(Relation::Leq1, &Term::var("y"), &x);
        assert!(!eval_fo(&f, &env, &back).unwrap());
    }

    #[test]
    fn quantifiers_shadow() {
        let f = chain();
        let x = Term::var("x");
        // exists x. forall x. x = x, with an outer free x
        let phi = FoFormula::exists("x", FoFormula::forall("x", FoFormula::Eq(x.clone(), x.clone())));
        assert!(eval_fo(&f, &FoEnv::new(), &phi).unwrap());
        let top = FoFormula::forall("y", FoFormula::rel(Relation::Leq1, &x, &Term::var("y")));
        assert!(eval_fo(&f, &FoEnv::new().with_world("x", 0), &top).unwrap());
        assert!(!eval_fo(&f, &FoEnv::new().with_world("x", 1), &top).unwrap());
    }

    #[test]
    fn unbound_symbols() {
        let f = chain();
        let phi = FoFormula::Pred("P".into(), Term::var("x"));
        assert_eq!(
            eval_fo(&f, &FoEnv::new().with_world("x", 0), &phi),
            Err(SemanticsError::UnboundPredicate("P".into()))
        );
        assert_eq!(eval_fo(&f, &FoEnv::new(), &phi), Err(SemanticsError::UnboundPredicate("P".into())));
        let psi = FoFormula::Eq(Term::var("x"), Term::var("x"));
        assert_eq!(eval_fo(&f, &FoEnv::new(), &psi), Err(SemanticsError::UnboundFoVariable("x".into())));
    }
}

use super::algebra::RoAlgebra;
use super::frame::FmFrame;
use super::worldset::WorldSet;
use crate::formula::{Formula, Inequality, QuasiInequality};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Default cap on the number of valuations [`valid`] will enumerate.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("propositional variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("nominal `@{0}` has no value")]
    UnboundNominal(String),
    #[error("value of `{variable}` is not a refined regular open set: {value:?}")]
    NotRefinedRegularOpen { variable: String, value: Vec<String> },
    #[error("world index {0} is out of range")]
    UnknownWorld(usize),
    #[error("validity check needs {needed} valuations, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("first-order variable `{0}` is unbound")]
    UnboundFoVariable(String),
    #[error("predicate `{0}` has no interpretation")]
    UnboundPredicate(String),
}

/// Values for propositional variables (refined regular open sets) and for
/// nominals (the world `i` whose closure `c({i})` the nominal denotes).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    pub props: BTreeMap<String, WorldSet>,
    pub nominals: BTreeMap<String, usize>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn with_prop(mut self, p: &str, value: WorldSet) -> Valuation {
        self.props.insert(p.to_string(), value);
        self
    }

    pub fn with_nominal(mut self, i: &str, world: usize) -> Valuation {
        self.nominals.insert(i.to_string(), world);
        self
    }
}

/// Anything whose validity on a frame can be asked about.
#[derive(Clone, Copy, Debug)]
pub enum Assertion<'a> {
    Formula(&'a Formula),
    Inequality(&'a Inequality),
    Quasi(&'a QuasiInequality),
}

impl<'a> From<&'a Formula> for Assertion<'a> {
    fn from(f: &'a Formula) -> Self {
        Assertion::Formula(f)
    }
}

impl<'a> From<&'a Inequality> for Assertion<'a> {
    fn from(i: &'a Inequality) -> Self {
        Assertion::Inequality(i)
    }
}

impl<'a> From<&'a QuasiInequality> for Assertion<'a> {
    fn from(q: &'a QuasiInequality) -> Self {
        Assertion::Quasi(q)
    }
}

impl Assertion<'_> {
    pub fn vars(&self) -> BTreeSet<String> {
        match self {
            Assertion::Formula(f) => f.vars(),
            Assertion::Inequality(i) => i.vars(),
            Assertion::Quasi(q) => q.vars(),
        }
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        match self {
            Assertion::Formula(f) => f.nominals(),
            Assertion::Inequality(i) => i.nominals(),
            Assertion::Quasi(q) => q.nominals(),
        }
    }
}

/// A frame together with a valuation. Satisfaction follows the clauses
/// pointwise, independently of [`RoAlgebra`].
#[derive(Clone, Copy, Debug)]
pub struct Model<'a> {
    pub frame: &'a FmFrame,
    pub valuation: &'a Valuation,
}

impl<'a> Model<'a> {
    /// Checks that every propositional value is refined regular open and
    /// every nominal points at a world of the frame.
    pub fn new(frame: &'a FmFrame, valuation: &'a Valuation) -> Result<Model<'a>, SemanticsError> {
        for (p, &y) in &valuation.props {
            if !y.is_subset(frame.all()) || !frame.is_refined_regular_open(y) {
                return Err(SemanticsError::NotRefinedRegularOpen {
                    variable: p.clone(),
                    value: frame.set_names(y.intersection(frame.all())),
                });
            }
        }
        for &w in valuation.nominals.values() {
            if w >= frame.len() {
                return Err(SemanticsError::UnknownWorld(w));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn satisfies(&self, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
        let fr = self.frame;
        Ok(match f {
            Formula::Var(p) => {
                let y = self.valuation.props.get(p).ok_or_else(|| SemanticsError::UnboundVariable(p.clone()))?;
                y.contains(w)
            }
            Formula::Bot => false,
            Formula::Top => true,
            Formula::Nominal(i) => {
                let &i = self.valuation.nominals.get(i).ok_or_else(|| SemanticsError::UnboundNominal(i.clone()))?;
                let target = fr.up1(i);
                fr.up1(w).iter().all(|v| fr.up2(v).intersects(target))
            }
            Formula::And(a, b) => self.satisfies(w, a)? && self.satisfies(w, b)?,
            Formula::Or(a, b) => {
                for v in fr.up1(w).iter() {
                    let mut found = false;
                    for u in fr.up2(v).iter() {
                        if self.satisfies(u, a)? || self.satisfies(u, b)? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Implies(a, b) => {
                for v in fr.up1(w).iter() {
                    if self.satisfies(v, a)? && !self.satisfies(v, b)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Box(a) => {
                for v in fr.successors(w).iter() {
                    if !self.satisfies(v, a)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::BlackDiamond(a) => {
                // t ranges over R-successors of worlds satisfying `a`.
                let mut reach = WorldSet::EMPTY;
                for s in fr.all().iter() {
                    if self.satisfies(s, a)? {
                        reach = reach.union(fr.successors(s));
                    }
                }
                fr.up1(w).iter().all(|v| {
                    fr.up2(v).iter().any(|u| fr.down1(u).intersects(reach))
                })
            }
        })
    }

    /// `{w | M, w ⊩ f}`.
    pub fn truth_set(&self, f: &Formula) -> Result<WorldSet, SemanticsError> {
        let mut out = WorldSet::EMPTY;
        for w in 0..self.frame.len() {
            if self.satisfies(w, f)? {
                out = out.with(w);
            }
        }
        Ok(out)
    }

    pub fn holds_inequality(&self, ineq: &Inequality) -> Result<bool, SemanticsError> {
        Ok(self.truth_set(&ineq.lhs)?.is_subset(self.truth_set(&ineq.rhs)?))
    }

    /// Global truth of a formula, inequality or quasi-inequality.
    pub fn holds(&self, item: Assertion<'_>) -> Result<bool, SemanticsError> {
        match item {
            Assertion::Formula(f) => Ok(self.truth_set(f)? == self.frame.all()),
            Assertion::Inequality(i) => self.holds_inequality(i),
            Assertion::Quasi(q) => {
                for a in &q.antecedents {
                    if !self.holds_inequality(a)? {
                        return Ok(true);
                    }
                }
                self.holds_inequality(&q.consequent)
            }
        }
    }
}

impl RoAlgebra {
    /// The value of `f` computed by folding the algebra operations.
    pub fn denote(&self, f: &Formula, valuation: &Valuation) -> Result<WorldSet, SemanticsError> {
        Ok(match f {
            Formula::Var(p) => *valuation.props.get(p).ok_or_else(|| SemanticsError::UnboundVariable(p.clone()))?,
            Formula::Bot => self.bottom(),
            Formula::Top => self.top(),
            Formula::Nominal(i) => {
                let &w = valuation.nominals.get(i).ok_or_else(|| SemanticsError::UnboundNominal(i.clone()))?;
                if w >= self.frame().len() {
                    return Err(SemanticsError::UnknownWorld(w));
                }
                self.nominal(w)
            }
            Formula::And(a, b) => self.meet(self.denote(a, valuation)?, self.denote(b, valuation)?),
            Formula::Or(a, b) => self.join(self.denote(a, valuation)?, self.denote(b, valuation)?),
            Formula::Implies(a, b) => self.implies(self.denote(a, valuation)?, self.denote(b, valuation)?),
            Formula::Box(a) => self.boxed(self.denote(a, valuation)?),
            Formula::BlackDiamond(a) => self.diamond(self.denote(a, valuation)?),
        })
    }
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Prop(usize),
    Nom(usize),
    Bot,
    Top,
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Box(usize),
    Diamond(usize),
}

/// An assertion flattened into an arena of nodes in post-order, so that a
/// valuation is evaluated by one linear pass over slices.
#[derive(Clone, Debug)]
pub struct CompiledAssertion {
    nodes: Vec<Node>,
    props: Vec<String>,
    nominals: Vec<String>,
    /// `(lhs, rhs)` node indices; the last pair is the consequent.
    pairs: Vec<(usize, usize)>,
}

impl CompiledAssertion {
    pub fn new(item: Assertion<'_>) -> CompiledAssertion {
        let props: Vec<String> = item.vars().into_iter().collect();
        let nominals: Vec<String> = item.nominals().into_iter().collect();
        Self::with_symbols(item, props, nominals)
    }

    /// Compiles against a given symbol table, which must include every
    /// variable and nominal of `item`. Several assertions compiled against
    /// the same table can be evaluated under the same valuation slices.
    pub fn with_symbols(item: Assertion<'_>, props: Vec<String>, nominals: Vec<String>) -> CompiledAssertion {
        let mut c = CompiledAssertion { nodes: Vec::new(), props, nominals, pairs: Vec::new() };
        let ineqs: Vec<(Formula, Formula)> = match item {
            Assertion::Formula(f) => vec![(Formula::Top, f.clone())],
            Assertion::Inequality(i) => vec![(i.lhs.clone(), i.rhs.clone())],
            Assertion::Quasi(q) => q.inequalities().map(|i| (i.lhs.clone(), i.rhs.clone())).collect(),
        };
        for (l, r) in &ineqs {
            let a = c.push(l);
            let b = c.push(r);
            c.pairs.push((a, b));
        }
        c
    }

    fn push(&mut self, f: &Formula) -> usize {
        let node = match f {
            Formula::Var(p) => Node::Prop(self.props.iter().position(|q| q == p).expect("collected variable")),
            Formula::Nominal(i) => Node::Nom(self.nominals.iter().position(|j| j == i).expect("collected nominal")),
            Formula::Bot => Node::Bot,
            Formula::Top => Node::Top,
            Formula::And(a, b) => Node::And(self.push(a), self.push(b)),
            Formula::Or(a, b) => Node::Or(self.push(a), self.push(b)),
            Formula::Implies(a, b) => Node::Implies(self.push(a), self.push(b)),
            Formula::Box(a) => Node::Box(self.push(a)),
            Formula::BlackDiamond(a) => Node::Diamond(self.push(a)),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn nominals(&self) -> &[String] {
        &self.nominals
    }

    fn eval(&self, alg: &RoAlgebra, props: &[WorldSet], noms: &[WorldSet], out: &mut Vec<WorldSet>) {
        out.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Prop(k) => props[k],
                Node::Nom(k) => noms[k],
                Node::Bot => alg.bottom(),
                Node::Top => alg.top(),
                Node::And(a, b) => alg.meet(out[a], out[b]),
                Node::Or(a, b) => alg.join(out[a], out[b]),
                Node::Implies(a, b) => alg.implies(out[a], out[b]),
                Node::Box(a) => alg.boxed(out[a]),
                Node::Diamond(a) => alg.diamond(out[a]),
            };
            out.push(v);
        }
    }

    /// Truth under one valuation, given as values indexed like
    /// [`CompiledAssertion::props`] and [`CompiledAssertion::nominals`].
    pub fn holds(&self, alg: &RoAlgebra, props: &[WorldSet], noms: &[WorldSet], scratch: &mut Vec<WorldSet>) -> bool {
        self.eval(alg, props, noms, scratch);
        let (last, ants) = self.pairs.split_last().expect("at least one inequality");
        ants.iter().any(|&(a, b)| !scratch[a].is_subset(scratch[b])) || scratch[last.0].is_subset(scratch[last.1])
    }

    /// Number of valuations [`valid_with_budget`] is charged for.
    pub fn valuation_count(&self, alg: &RoAlgebra) -> u128 {
        (alg.len() as u128).saturating_pow(self.props.len() as u32)
            .saturating_mul((alg.frame().len() as u128).saturating_pow(self.nominals.len() as u32))
    }

    /// Searches for a valuation refuting the assertion. Nominals range over
    /// the distinct values `c({w})`, since satisfaction depends only on them.
    pub fn counterexample(&self, alg: &RoAlgebra, budget: u64) -> Result<Option<Valuation>, SemanticsError> {
        let needed = self.valuation_count(alg);
        if needed > budget as u128 {
            return Err(SemanticsError::BudgetExceeded { needed, budget });
        }
        let members = alg.members();
        let nom_values = alg.nominal_values();
        let mut pi = vec![0usize; self.props.len()];
        let mut ni = vec![0usize; self.nominals.len()];
        let mut props = vec![members[0]; self.props.len()];
        let mut noms = vec![nom_values[0].1; self.nominals.len()];
        let mut scratch = Vec::with_capacity(self.nodes.len());
        loop {
            for (k, &j) in pi.iter().enumerate() {
                props[k] = members[j];
            }
            for (k, &j) in ni.iter().enumerate() {
                noms[k] = nom_values[j].1;
            }
            if !self.holds(alg, &props, &noms, &mut scratch) {
                let mut v = Valuation::new();
                for (k, p) in self.props.iter().enumerate() {
                    v.props.insert(p.clone(), props[k]);
                }
                for (k, i) in self.nominals.iter().enumerate() {
                    v.nominals.insert(i.clone(), nom_values[ni[k]].0);
                }
                return Ok(Some(v));
            }
            if !advance(&mut pi, members.len()) && !advance(&mut ni, nom_values.len()) {
                return Ok(None);
            }
        }
    }
}

/// Calls `visit` on every assignment of carrier members to `n_props`
/// variables and of distinct nominal values `c({w})` to `n_noms` nominals,
/// stopping early when it returns false. Returns whether every call
/// returned true.
pub fn for_each_valuation<F>(alg: &RoAlgebra, n_props: usize, n_noms: usize, mut visit: F) -> bool
where
    F: FnMut(&[WorldSet], &[WorldSet]) -> bool,
{
    let members = alg.members();
    let nom_values: Vec<WorldSet> = alg.nominal_values().into_iter().map(|(_, v)| v).collect();
    let mut pi = vec![0usize; n_props];
    let mut ni = vec![0usize; n_noms];
    let mut props = vec![members[0]; n_props];
    let mut noms = vec![nom_values[0]; n_noms];
    loop {
        for (k, &j) in pi.iter().enumerate() {
            props[k] = members[j];
        }
        for (k, &j) in ni.iter().enumerate() {
            noms[k] = nom_values[j];
        }
        if !visit(&props, &noms) {
            return false;
        }
        if !advance(&mut pi, members.len()) && !advance(&mut ni, nom_values.len()) {
            return true;
        }
    }
}

/// Odometer increment; returns false when the counter wraps around.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Validity on a frame with the default budget.
pub fn valid<'a>(frame: &FmFrame, item: impl Into<Assertion<'a>>) -> Result<bool, SemanticsError> {
    valid_with_budget(&RoAlgebra::new(frame), item.into(), DEFAULT_BUDGET)
}

/// Validity: truth under every valuation of the occurring variables and
/// nominals, refusing when the valuation space exceeds `budget`.
pub fn valid_with_budget(alg: &RoAlgebra, item: Assertion<'_>, budget: u64) -> Result<bool, SemanticsError> {
    Ok(CompiledAssertion::new(item).counterexample(alg, budget)?.is_none())
}

/// Every valuation of `props` over the carrier and `nominals` over worlds,
/// without deduplication. Used by oracles that must not share shortcuts with
/// [`CompiledAssertion::counterexample`].
pub fn all_valuations(alg: &RoAlgebra, props: &[String], nominals: &[String]) -> Vec<Valuation> {
    let mut out = Vec::new();
    let mut pi = vec![0usize; props.len()];
    let mut ni = vec![0usize; nominals.len()];
    loop {
        let mut v = Valuation::new();
        for (k, p) in props.iter().enumerate() {
            v.props.insert(p.clone(), alg.members()[pi[k]]);
        }
        for (k, i) in nominals.iter().enumerate() {
            v.nominals.insert(i.clone(), ni[k]);
        }
        out.push(v);
        if !advance(&mut pi, alg.len()) && !advance(&mut ni, alg.frame().len()) {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_inequality};

    fn one_point(r: bool) -> FmFrame {
        let rel: &[(&str, &str)] = if r { &[("a", "a")] } else { &[] };
        FmFrame::from_generators(&["a"], &[], &[], rel).unwrap()
    }

    #[test]
    fn box_p_implies_p_on_one_point() {
        let f = parse_formula("[]p -> p").unwrap();
        let refl = one_point(true);
        let v = Valuation::new().with_prop("p", WorldSet::singleton(0));
        assert!(Model::new(&refl, &v).unwrap().satisfies(0, &f).unwrap());
        assert!(valid(&refl, &f).unwrap());
        assert!(!valid(&one_point(false), &f).unwrap());
    }

    #[test]
    fn top_leq_top_is_valid() {
        let i = parse_inequality("top <= top").unwrap();
        assert!(valid(&one_point(false), &i).unwrap());
    }

    #[test]
    fn truth_sets() {
        let f = FmFrame::from_generators::<&str>(&["a", "b"], &[("a", "b")], &[], &[]).unwrap();
        let v = Valuation::new().with_prop("p", WorldSet::singleton(1)).with_prop("q", WorldSet::EMPTY);
        let m = Model::new(&f, &v).unwrap();
        assert_eq!(m.truth_set(&Formula::Bot).unwrap(), WorldSet::EMPTY);
        assert_eq!(m.truth_set(&parse_formula("p").unwrap()).unwrap(), WorldSet::singleton(1));
        let alg = RoAlgebra::new(&f);
        let pq = parse_formula("p | q").unwrap();
        assert_eq!(m.truth_set(&pq).unwrap(), alg.denote(&pq, &v).unwrap());
    }

    #[test]
    fn errors() {
        let f = one_point(false);
        let v = Valuation::new();
        let m = Model::new(&f, &v).unwrap();
        assert_eq!(
            m.satisfies(0, &parse_formula("q").unwrap()),
            Err(SemanticsError::UnboundVariable("q".into()))
        );
        let bad = FmFrame::from_generators::<&str>(&["a", "b"], &[("a", "b")], &[], &[]).unwrap();
        let v = Valuation::new().with_prop("p", WorldSet::singleton(0));
        assert!(matches!(Model::new(&bad, &v), Err(SemanticsError::NotRefinedRegularOpen { .. })));
        let alg = RoAlgebra::new(&bad);
        let g = parse_formula("p & q & r & s").unwrap();
        assert!(matches!(
            valid_with_budget(&alg, Assertion::Formula(&g), 10),
            Err(SemanticsError::BudgetExceeded { needed: 81, budget: 10 })
        ));
    }

    #[test]
    fn enumeration_covers_every_valuation() {
        let f = FmFrame::from_generators::<&str>(&["a", "b"], &[("a", "b")], &[], &[]).unwrap();
        let alg = RoAlgebra::new(&f);
        let vs = all_valuations(&alg, &["p".into(), "q".into()], &["i".into()]);
        assert_eq!(vs.len(), 3 * 3 * 2);
    }
}

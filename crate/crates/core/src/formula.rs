//! Syntax of the expanded modal language: formulas with nominals and the black
//! diamond, inequalities and quasi-inequalities.

use std::collections::BTreeSet;
use std::fmt;

/// A formula of the expanded language. The basic language is the fragment
/// without [`Formula::Nominal`] and [`Formula::BlackDiamond`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(String),
    Bot,
    Top,
    Nominal(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    BlackDiamond(Box<Formula>),
}

pub fn var(name: &str) -> Formula {
    Formula::Var(name.to_string())
}

pub fn nom(name: &str) -> Formula {
    Formula::Nominal(name.to_string())
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn boxed(a: Formula) -> Formula {
    Formula::Box(Box::new(a))
}

pub fn diamond(a: Formula) -> Formula {
    Formula::BlackDiamond(Box::new(a))
}

impl Formula {
    /// No nominals and no black diamonds.
    pub fn is_basic(&self) -> bool {
        match self {
            Formula::Nominal(_) | Formula::BlackDiamond(_) => false,
            Formula::Var(_) | Formula::Bot | Formula::Top => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_basic() && b.is_basic()
            }
            Formula::Box(a) => a.is_basic(),
        }
    }

    /// No propositional variables.
    pub fn is_pure(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Bot | Formula::Top | Formula::Nominal(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_pure() && b.is_pure()
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => a.is_pure(),
        }
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self, Formula::Nominal(_))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out, &mut BTreeSet::new());
        out
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut BTreeSet::new(), &mut out);
        out
    }

    pub(crate) fn collect(&self, vars: &mut BTreeSet<String>, noms: &mut BTreeSet<String>) {
        match self {
            Formula::Var(p) => {
                vars.insert(p.clone());
            }
            Formula::Nominal(i) => {
                noms.insert(i.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect(vars, noms);
                b.collect(vars, noms);
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => a.collect(vars, noms),
        }
    }

    pub fn occurs(&self, p: &str) -> bool {
        match self {
            Formula::Var(q) => q == p,
            Formula::Bot | Formula::Top | Formula::Nominal(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.occurs(p) || b.occurs(p)
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => a.occurs(p),
        }
    }

    /// Connective nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top | Formula::Nominal(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => 1 + a.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top | Formula::Nominal(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => 1 + a.size(),
        }
    }

    /// Replaces every occurrence of the variable `p` by `theta`.
    pub fn substitute(&self, p: &str, theta: &Formula) -> Formula {
        match self {
            Formula::Var(q) if q == p => theta.clone(),
            Formula::Var(_) | Formula::Bot | Formula::Top | Formula::Nominal(_) => self.clone(),
            Formula::And(a, b) => and(a.substitute(p, theta), b.substitute(p, theta)),
            Formula::Or(a, b) => or(a.substitute(p, theta), b.substitute(p, theta)),
            Formula::Implies(a, b) => implies(a.substitute(p, theta), b.substitute(p, theta)),
            Formula::Box(a) => boxed(a.substitute(p, theta)),
            Formula::BlackDiamond(a) => diamond(a.substitute(p, theta)),
        }
    }

    /// Renames nominals according to `rename`; unmapped nominals are kept.
    pub fn rename_nominals(&self, rename: &dyn Fn(&str) -> Option<String>) -> Formula {
        match self {
            Formula::Nominal(i) => match rename(i) {
                Some(j) => Formula::Nominal(j),
                None => self.clone(),
            },
            Formula::Var(_) | Formula::Bot | Formula::Top => self.clone(),
            Formula::And(a, b) => and(a.rename_nominals(rename), b.rename_nominals(rename)),
            Formula::Or(a, b) => or(a.rename_nominals(rename), b.rename_nominals(rename)),
            Formula::Implies(a, b) => {
                implies(a.rename_nominals(rename), b.rename_nominals(rename))
            }
            Formula::Box(a) => boxed(a.rename_nominals(rename)),
            Formula::BlackDiamond(a) => diamond(a.rename_nominals(rename)),
        }
    }

    /// Polarity of the variable `p` in this formula.
    ///
    /// `∧`, `∨`, `□` and `◆` are monotone in every argument, `→` is antitone in
    /// its antecedent and monotone in its consequent.
    pub fn polarity(&self, p: &str) -> Polarity {
        match self {
            Formula::Var(q) if q == p => Polarity::Positive,
            Formula::Var(_) | Formula::Bot | Formula::Top | Formula::Nominal(_) => Polarity::None,
            Formula::And(a, b) | Formula::Or(a, b) => a.polarity(p).join(b.polarity(p)),
            Formula::Implies(a, b) => a.polarity(p).flip().join(b.polarity(p)),
            Formula::Box(a) | Formula::BlackDiamond(a) => a.polarity(p),
        }
    }
}

/// Occurrence polarity of a variable, ordered `None ⊑ Positive, Negative ⊑ Both`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Polarity {
    None,
    Positive,
    Negative,
    Both,
}

impl Polarity {
    pub fn join(self, other: Polarity) -> Polarity {
        use Polarity::*;
        match (self, other) {
            (None, x) | (x, None) => x,
            (Positive, Positive) => Positive,
            (Negative, Negative) => Negative,
            _ => Both,
        }
    }

    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            x => x,
        }
    }

    /// Lattice order.
    pub fn leq(self, other: Polarity) -> bool {
        self.join(other) == other
    }

    pub fn is_positive_or_none(self) -> bool {
        matches!(self, Polarity::Positive | Polarity::None)
    }

    pub fn is_negative_or_none(self) -> bool {
        matches!(self, Polarity::Negative | Polarity::None)
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Polarity::None => "none",
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Both => "both",
        };
        f.write_str(s)
    }
}

/// First nominal name `i0, i1, ...` not in `used`.
pub fn fresh_nominal(used: &BTreeSet<String>) -> String {
    (0..)
        .map(|k| format!("i{k}"))
        .find(|name| !used.contains(name))
        .expect("unbounded name supply")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Inequality {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Inequality { lhs, rhs }
    }

    pub fn is_pure(&self) -> bool {
        self.lhs.is_pure() && self.rhs.is_pure()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        let mut v = self.lhs.nominals();
        v.extend(self.rhs.nominals());
        v
    }

    pub fn occurs(&self, p: &str) -> bool {
        self.lhs.occurs(p) || self.rhs.occurs(p)
    }

    pub fn substitute(&self, p: &str, theta: &Formula) -> Inequality {
        Inequality::new(self.lhs.substitute(p, theta), self.rhs.substitute(p, theta))
    }

    pub fn rename_nominals(&self, rename: &dyn Fn(&str) -> Option<String>) -> Inequality {
        Inequality::new(self.lhs.rename_nominals(rename), self.rhs.rename_nominals(rename))
    }
}

/// `antecedents[0] & ... & antecedents[n-1] => consequent`; an empty
/// antecedent list is the empty meta-conjunction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuasiInequality {
    pub antecedents: Vec<Inequality>,
    pub consequent: Inequality,
}

impl QuasiInequality {
    pub fn new(antecedents: Vec<Inequality>, consequent: Inequality) -> Self {
        QuasiInequality { antecedents, consequent }
    }

    pub fn is_pure(&self) -> bool {
        self.antecedents.iter().all(Inequality::is_pure) && self.consequent.is_pure()
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Inequality> {
        self.antecedents.iter().chain(std::iter::once(&self.consequent))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.inequalities().flat_map(Inequality::vars).collect()
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        self.inequalities().flat_map(Inequality::nominals).collect()
    }

    pub fn occurs(&self, p: &str) -> bool {
        self.inequalities().any(|i| i.occurs(p))
    }

    pub fn rename_nominals(&self, rename: &dyn Fn(&str) -> Option<String>) -> QuasiInequality {
        QuasiInequality::new(
            self.antecedents.iter().map(|i| i.rename_nominals(rename)).collect(),
            self.consequent.rename_nominals(rename),
        )
    }

    /// Equality up to a bijective renaming of nominals.
    pub fn alpha_eq(&self, other: &QuasiInequality) -> bool {
        if self.antecedents.len() != other.antecedents.len() {
            return false;
        }
        let mut map = std::collections::BTreeMap::new();
        let mut back = std::collections::BTreeMap::new();
        self.inequalities()
            .zip(other.inequalities())
            .all(|(a, b)| {
                alpha_formula(&a.lhs, &b.lhs, &mut map, &mut back)
                    && alpha_formula(&a.rhs, &b.rhs, &mut map, &mut back)
            })
    }
}

fn alpha_formula(
    a: &Formula,
    b: &Formula,
    map: &mut std::collections::BTreeMap<String, String>,
    back: &mut std::collections::BTreeMap<String, String>,
) -> bool {
    match (a, b) {
        (Formula::Nominal(i), Formula::Nominal(j)) => {
            match (map.get(i), back.get(j)) {
                (None, None) => {
                    map.insert(i.clone(), j.clone());
                    back.insert(j.clone(), i.clone());
                    true
                }
                (Some(x), Some(y)) => x == j && y == i,
                _ => false,
            }
        }
        (Formula::Var(p), Formula::Var(q)) => p == q,
        (Formula::Bot, Formula::Bot) | (Formula::Top, Formula::Top) => true,
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            alpha_formula(a1, b1, map, back) && alpha_formula(a2, b2, map, back)
        }
        (Formula::Box(x), Formula::Box(y)) | (Formula::BlackDiamond(x), Formula::BlackDiamond(y)) => {
            alpha_formula(x, y, map, back)
        }
        _ => false,
    }
}

// Printing. Precedence levels: 0 implication, 1 disjunction, 2 conjunction,
// 3 prefix and atoms.

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        out.write_str("(")?;
        write_at(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        Formula::Var(p) => out.write_str(p),
        Formula::Nominal(i) => write!(out, "@{i}"),
        Formula::Bot => out.write_str("bot"),
        Formula::Top => out.write_str("top"),
        Formula::And(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" & ")?;
            write_at(b, 3, out)
        }
        Formula::Or(a, b) => {
            write_at(a, 1, out)?;
            out.write_str(" | ")?;
            write_at(b, 2, out)
        }
        Formula::Implies(a, b) => {
            write_at(a, 1, out)?;
            out.write_str(" -> ")?;
            write_at(b, 0, out)
        }
        Formula::Box(a) => {
            out.write_str("[]")?;
            write_at(a, 3, out)
        }
        Formula::BlackDiamond(a) => {
            out.write_str("<*>")?;
            write_at(a, 3, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

/// Minimal-parenthesis rendering in the ASCII grammar.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

// Inside a quasi-inequality `&` also separates inequalities, so sides whose
// rendering has a top-level `&` are parenthesised.
fn quasi_side(f: &Formula) -> String {
    let s = f.to_string();
    let mut depth = 0i32;
    let top_amp = s.chars().any(|c| {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '&' if depth == 0 => return true,
            _ => {}
        }
        false
    });
    if top_amp {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for QuasiInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.antecedents.is_empty() {
            f.write_str("∅")?;
        }
        for (k, ineq) in self.antecedents.iter().enumerate() {
            if k > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{} <= {}", quasi_side(&ineq.lhs), quasi_side(&ineq.rhs))?;
        }
        write!(
            f,
            " => {} <= {}",
            quasi_side(&self.consequent.lhs),
            quasi_side(&self.consequent.rhs)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_and_pure() {
        let f = implies(boxed(var("p")), var("p"));
        assert!(f.is_basic());
        assert!(!f.is_pure());
        let g = diamond(nom("i0"));
        assert!(!g.is_basic());
        assert!(g.is_pure());
        assert!(Formula::Top.is_basic() && Formula::Top.is_pure());
    }

    #[test]
    fn substitution_examples() {
        let theta = diamond(nom("i0"));
        assert_eq!(boxed(var("p")).substitute("p", &theta), boxed(diamond(nom("i0"))));
        assert_eq!(
            implies(var("q"), var("p")).substitute("p", &Formula::Bot),
            implies(var("q"), Formula::Bot)
        );
        assert_eq!(Formula::Top.substitute("p", &var("q")), Formula::Top);
    }

    #[test]
    fn polarity_examples() {
        assert_eq!(implies(var("p"), var("q")).polarity("p"), Polarity::Negative);
        assert_eq!(boxed(var("p")).polarity("p"), Polarity::Positive);
        assert_eq!(
            implies(implies(var("p"), var("q")), var("r")).polarity("p"),
            Polarity::Positive
        );
        assert_eq!(implies(var("p"), var("p")).polarity("p"), Polarity::Both);
        assert_eq!(var("q").polarity("p"), Polarity::None);
    }

    #[test]
    fn polarity_lattice() {
        use Polarity::*;
        let all = [None, Positive, Negative, Both];
        for a in all {
            assert!(None.leq(a));
            assert!(a.leq(Both));
            for b in all {
                assert_eq!(a.join(b), b.join(a));
            }
        }
        assert!(!Positive.leq(Negative));
    }

    #[test]
    fn fresh_nominal_first_gap() {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(fresh_nominal(&set(&[])), "i0");
        assert_eq!(fresh_nominal(&set(&["i0"])), "i1");
        assert_eq!(fresh_nominal(&set(&["i0", "i2"])), "i1");
    }

    #[test]
    fn printing() {
        assert_eq!(implies(boxed(var("p")), var("p")).to_string(), "[]p -> p");
        assert_eq!(Formula::Bot.to_string(), "bot");
        assert_eq!(diamond(nom("i0")).to_string(), "<*>@i0");
        assert_eq!(and(var("p"), or(var("q"), var("r"))).to_string(), "p & (q | r)");
        assert_eq!(implies(implies(var("p"), var("q")), var("r")).to_string(), "(p -> q) -> r");
        assert_eq!(boxed(and(var("p"), var("q"))).to_string(), "[](p & q)");
    }

    #[test]
    fn quasi_printing() {
        let q = QuasiInequality::new(
            vec![],
            Inequality::new(nom("i0"), diamond(nom("i0"))),
        );
        assert_eq!(q.to_string(), "∅ => @i0 <= <*>@i0");
        let q = QuasiInequality::new(
            vec![Inequality::new(nom("j"), and(var("p"), var("q")))],
            Inequality::new(nom("j"), var("p")),
        );
        assert_eq!(q.to_string(), "@j <= (p & q) => @j <= p");
    }

    #[test]
    fn alpha_equivalence_of_systems() {
        let a = QuasiInequality::new(
            vec![Inequality::new(nom("j"), diamond(nom("i0")))],
            Inequality::new(diamond(nom("j")), diamond(nom("i0"))),
        );
        let b = a.rename_nominals(&|n| Some(format!("{n}x")));
        assert!(a.alpha_eq(&b));
        let c = QuasiInequality::new(
            vec![Inequality::new(nom("j"), diamond(nom("j")))],
            Inequality::new(diamond(nom("j")), diamond(nom("i0"))),
        );
        assert!(!a.alpha_eq(&c));
    }
}

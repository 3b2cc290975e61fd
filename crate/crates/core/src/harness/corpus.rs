use crate::formula::{and, boxed, diamond, implies, nom, or, var, Formula};
use crate::inductive::{is_omega_inductive, DependenceOrder};
use crate::parse::parse_formula;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Hand-picked inductive formulas that every corpus starts with.
pub const FIXED_CORPUS: [&str; 5] = ["[]p -> p", "[]p -> [][]p", "p -> []p", "([]q & (q -> []p)) -> []p", "p -> p"];

pub const CORPUS_VARIABLES: [&str; 3] = ["p", "q", "r"];

/// Largest depth of a generated corpus formula.
pub const CORPUS_DEPTH: usize = 4;

pub fn fixed_corpus() -> Vec<Formula> {
    FIXED_CORPUS.iter().map(|s| parse_formula(s).expect("fixed corpus parses")).collect()
}

fn gen_pos<R: Rng>(rng: &mut R, allowed: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return match (allowed.is_empty(), rng.gen_range(0..6)) {
            (false, 0..=3) => var(allowed.choose(rng).unwrap()),
            (_, 4) | (true, 0..=1) => Formula::Top,
            _ => Formula::Bot,
        };
    }
    match rng.gen_range(0..3) {
        0 => boxed(gen_pos(rng, allowed, depth - 1)),
        1 => and(gen_pos(rng, allowed, depth - 1), gen_pos(rng, allowed, depth - 1)),
        _ => or(gen_pos(rng, allowed, depth - 1), gen_pos(rng, allowed, depth - 1)),
    }
}

fn gen_pia<R: Rng>(rng: &mut R, p: &str, below: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..8) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => var(p),
        };
    }
    if rng.gen_bool(0.5) {
        boxed(gen_pia(rng, p, below, depth - 1))
    } else {
        implies(gen_pos(rng, below, depth - 1), gen_pia(rng, p, below, depth - 1))
    }
}

fn gen_ant<R: Rng>(rng: &mut R, chain: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.6) {
        let k = rng.gen_range(0..chain.len());
        return gen_pia(rng, &chain[k], &chain[..k], depth);
    }
    let (a, b) = (gen_ant(rng, chain, depth - 1), gen_ant(rng, chain, depth - 1));
    if rng.gen_bool(0.5) {
        and(a, b)
    } else {
        or(a, b)
    }
}

fn gen_suc<R: Rng>(rng: &mut R, chain: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        return gen_pos(rng, chain, depth);
    }
    match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(0..chain.len());
            implies(gen_pia(rng, &chain[k], &chain[..k], depth - 1), gen_suc(rng, chain, depth - 1))
        }
        1 => boxed(gen_suc(rng, chain, depth - 1)),
        _ => and(gen_suc(rng, chain, depth - 1), gen_suc(rng, chain, depth - 1)),
    }
}

/// One implication drawn from the inductive grammars under a random total
/// dependence order on [`CORPUS_VARIABLES`], returned with that order
/// listed least first.
pub fn sample_inductive<R: Rng>(rng: &mut R) -> (Formula, Vec<String>) {
    let mut chain: Vec<String> = CORPUS_VARIABLES.iter().map(|s| s.to_string()).collect();
    chain.shuffle(rng);
    let ant = gen_ant(rng, &chain, CORPUS_DEPTH - 1);
    let suc = gen_suc(rng, &chain, CORPUS_DEPTH - 1);
    (implies(ant, suc), chain)
}

/// Whether the generating order, cut down to the variables that occur,
/// certifies `f`. It can fail when a leaf choice drops a PIA's main variable.
fn certified(f: &Formula, chain: &[String]) -> bool {
    let occurring = f.vars();
    let kept: Vec<String> = chain.iter().filter(|p| occurring.contains(*p)).cloned().collect();
    is_omega_inductive(f, &DependenceOrder::total(&kept))
}

/// The fixed formulas followed by `count` distinct sampled formulas with at
/// least one variable, each certified inductive by the order it was generated
/// under. Deterministic in `seed`.
pub fn inductive_corpus(seed: u64, count: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = fixed_corpus();
    let mut seen: BTreeSet<Formula> = out.iter().cloned().collect();
    let mut sampled = 0;
    while sampled < count {
        let (f, chain) = sample_inductive(&mut rng);
        if f.vars().is_empty() || f.depth() > CORPUS_DEPTH || seen.contains(&f) || !certified(&f, &chain) {
            continue;
        }
        seen.insert(f.clone());
        out.push(f);
        sampled += 1;
    }
    out
}

/// Random formulas of the expanded language with variables `p`, `q` and
/// nominals `i`, `j`, of depth at most `depth`.
pub fn sample_expanded<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => var("p"),
            1 => var("q"),
            2 => nom("i"),
            3 => nom("j"),
            4 => Formula::Top,
            _ => Formula::Bot,
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => and(sample_expanded(rng, d), sample_expanded(rng, d)),
        1 => or(sample_expanded(rng, d), sample_expanded(rng, d)),
        2 => implies(sample_expanded(rng, d), sample_expanded(rng, d)),
        3 => boxed(sample_expanded(rng, d)),
        _ => diamond(sample_expanded(rng, d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inductive::classify_inductive;

    #[test]
    fn corpus_is_deterministic_and_inductive() {
        let a = inductive_corpus(7, 25);
        let b = inductive_corpus(7, 25);
        assert_eq!(a, b);
        assert_eq!(a.len(), FIXED_CORPUS.len() + 25);
        for f in &a {
            assert!(f.depth() <= CORPUS_DEPTH);
            assert!(f.vars().len() <= 3);
            assert!(classify_inductive(f).unwrap().is_some(), "{f}");
        }
    }
}

//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula  ::= disj ("->" formula)?
//! disj     ::= conj ("|" conj)*
//! conj     ::= prefix ("&" prefix)*
//! prefix   ::= "[]" prefix | "<*>" prefix | atom
//! atom     ::= ident | "@" ident | "bot" | "top" | "(" formula ")"
//! ineq     ::= formula "<=" formula
//! quasi    ::= (ineq ("&" ineq)* | "∅")? "=>" ineq
//! ```

use crate::formula::{and, boxed, diamond, implies, or, Formula, Inequality, QuasiInequality};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    At,
    Bot,
    Top,
    BoxOp,
    Diamond,
    Amp,
    Bar,
    Arrow,
    Leq,
    Entails,
    Empty,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::At => "`@`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Top => "`top`".into(),
            Tok::BoxOp => "`[]`".into(),
            Tok::Diamond => "`<*>`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Leq => "`<=`".into(),
            Tok::Entails => "`=>`".into(),
            Tok::Empty => "`∅`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("[]") {
            (Tok::BoxOp, 2)
        } else if rest.starts_with("<*>") {
            (Tok::Diamond, 3)
        } else if rest.starts_with("<=") {
            (Tok::Leq, 2)
        } else if rest.starts_with("=>") {
            (Tok::Entails, 2)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with('∅') {
            (Tok::Empty, '∅'.len_utf8())
        } else if c == b'&' {
            (Tok::Amp, 1)
        } else if c == b'|' {
            (Tok::Bar, 1)
        } else if c == b'(' {
            (Tok::LParen, 1)
        } else if c == b')' {
            (Tok::RParen, 1)
        } else if c == b'@' {
            (Tok::At, 1)
        } else if c.is_ascii_lowercase() {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            let word = &rest[..len];
            let tok = match word {
                "bot" => Tok::Bot,
                "top" => Tok::Top,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, len)
        } else {
            let ch = rest.chars().next().unwrap();
            return Err(ParseError {
                offset: i,
                expected: vec!["a formula token".into()],
                found: format!("character `{ch}`"),
            });
        };
        out.push((tok, i));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            acc = or(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.prefix()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = and(acc, self.prefix()?);
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::BoxOp => {
                self.bump();
                Ok(boxed(self.prefix()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(diamond(self.prefix()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        const ATOM: [&str; 7] = ["identifier", "`@`", "`bot`", "`top`", "`[]`", "`<*>`", "`(`"];
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::At => {
                self.bump();
                match self.peek().clone() {
                    Tok::Ident(name) => {
                        self.bump();
                        Ok(Formula::Nominal(name))
                    }
                    _ => Err(self.error(&["identifier"])),
                }
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.error(&ATOM)),
        }
    }

    fn inequality(&mut self) -> Result<Inequality, ParseError> {
        let lhs = self.formula()?;
        if *self.peek() != Tok::Leq {
            return Err(self.error(&["`<=`", "`&`", "`|`", "`->`"]));
        }
        self.bump();
        let rhs = self.formula()?;
        Ok(Inequality::new(lhs, rhs))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_inequality(text: &str) -> Result<Inequality, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let i = p.inequality()?;
    p.finish()?;
    Ok(i)
}

/// Parses a quasi-inequality. Since `&` is both the object-level conjunction
/// and the meta-conjunction, the antecedent is cut at top-level `&` tokens and
/// the chunks are grouped so that every group holds exactly one `<=`; the input
/// is rejected when the grouping is not unique.
pub fn parse_quasi(text: &str) -> Result<QuasiInequality, ParseError> {
    let toks = tokenize(text)?;
    let mut depth = 0i32;
    let mut entails = None;
    for (k, (t, _)) in toks.iter().enumerate() {
        match t {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Entails if depth == 0 => {
                entails = Some(k);
                break;
            }
            _ => {}
        }
    }
    let Some(split) = entails else {
        let end = toks.len() - 1;
        return Err(ParseError {
            offset: toks[end].1,
            expected: vec!["`=>`".into()],
            found: Tok::End.describe(),
        });
    };

    let mut tail = toks[split + 1..].to_vec();
    if tail.is_empty() {
        tail.push((Tok::End, text.len()));
    }
    let mut p = Parser { toks: &tail, pos: 0 };
    let consequent = p.inequality()?;
    p.finish()?;

    let head = &toks[..split];
    let antecedents = if head.is_empty() || (head.len() == 1 && head[0].0 == Tok::Empty) {
        Vec::new()
    } else {
        parse_antecedents(head, toks[split].1)?
    };
    Ok(QuasiInequality::new(antecedents, consequent))
}

fn parse_antecedents(head: &[(Tok, usize)], end: usize) -> Result<Vec<Inequality>, ParseError> {
    // Token ranges between top-level `&`.
    let mut chunks: Vec<(usize, usize)> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, (t, _)) in head.iter().enumerate() {
        match t {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Amp if depth == 0 => {
                chunks.push((start, k));
                start = k + 1;
            }
            _ => {}
        }
    }
    chunks.push((start, head.len()));

    let try_parse = |from: usize, to: usize| -> Result<Inequality, ParseError> {
        let (lo, hi) = (chunks[from].0, chunks[to - 1].1);
        let mut seg = head[lo..hi].to_vec();
        seg.push((Tok::End, head.get(hi).map(|t| t.1).unwrap_or(end)));
        let mut p = Parser { toks: &seg, pos: 0 };
        let ineq = p.inequality()?;
        p.finish()?;
        Ok(ineq)
    };

    // ways[k]: parses of chunks[k..], capped at 2 to detect ambiguity.
    let n = chunks.len();
    let mut ways: Vec<Vec<Vec<Inequality>>> = vec![Vec::new(); n + 1];
    ways[n].push(Vec::new());
    let mut first_err: Option<ParseError> = None;
    for from in (0..n).rev() {
        let mut found = Vec::new();
        for to in from + 1..=n {
            if ways[to].is_empty() {
                continue;
            }
            match try_parse(from, to) {
                Ok(ineq) => {
                    for rest in &ways[to] {
                        let mut v = vec![ineq.clone()];
                        v.extend(rest.iter().cloned());
                        found.push(v);
                        if found.len() > 1 {
                            break;
                        }
                    }
                }
                Err(e) => {
                    if first_err.as_ref().is_none_or(|f| e.offset > f.offset) {
                        first_err = Some(e);
                    }
                }
            }
            if found.len() > 1 {
                break;
            }
        }
        ways[from] = found;
    }
    match ways[0].len() {
        1 => Ok(ways[0].pop().unwrap()),
        0 => Err(first_err.unwrap_or(ParseError {
            offset: end,
            expected: vec!["inequality".into()],
            found: Tok::Entails.describe(),
        })),
        _ => Err(ParseError {
            offset: head[0].1,
            expected: vec!["parenthesised conjunctions in antecedent inequalities".into()],
            found: "an ambiguous meta-conjunction".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{nom, var};

    #[test]
    fn examples() {
        assert_eq!(
            parse_formula("[]p -> p").unwrap(),
            implies(boxed(var("p")), var("p"))
        );
        assert_eq!(parse_formula("@i0").unwrap(), nom("i0"));
        assert_eq!(
            parse_formula("p & q | r").unwrap(),
            or(and(var("p"), var("q")), var("r"))
        );
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            implies(var("p"), implies(var("q"), var("r")))
        );
        assert_eq!(
            parse_formula("[]<*>p & q").unwrap(),
            and(boxed(diamond(var("p"))), var("q"))
        );
    }

    #[test]
    fn errors_carry_offset_and_expectation() {
        let e = parse_formula("p & ").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.expected.iter().any(|s| s.contains("identifier")));
        let e = parse_formula("(p | q").unwrap_err();
        assert_eq!(e.offset, 6);
        assert_eq!(e.expected, vec!["`)`".to_string()]);
        let e = parse_formula("p ~ q").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_formula("P").unwrap_err();
        assert_eq!(e.offset, 0);
        assert!(parse_formula("@").is_err());
        assert!(parse_formula("p q").is_err());
    }

    #[test]
    fn keywords_are_not_variables() {
        assert_eq!(parse_formula("bot").unwrap(), Formula::Bot);
        assert_eq!(parse_formula("top_1").unwrap(), var("top_1"));
    }

    #[test]
    fn inequalities_and_quasi() {
        let i = parse_inequality("p & q <= []r").unwrap();
        assert_eq!(i, Inequality::new(and(var("p"), var("q")), boxed(var("r"))));

        let q = parse_quasi("∅ => @i0 <= <*>@i0").unwrap();
        assert!(q.antecedents.is_empty());
        let q2 = parse_quasi("=> @i0 <= <*>@i0").unwrap();
        assert_eq!(q, q2);

        let q = parse_quasi("<*>@i0 <= p & @j <= <*>@i0 => <*>@j <= p").unwrap();
        assert_eq!(q.antecedents.len(), 2);
        assert_eq!(q.antecedents[1], Inequality::new(nom("j"), diamond(nom("i0"))));

        let q = parse_quasi("p & q <= r => p <= r").unwrap();
        assert_eq!(q.antecedents, vec![Inequality::new(and(var("p"), var("q")), var("r"))]);

        let amb = parse_quasi("a <= b & c & d <= e => a <= e");
        assert!(amb.is_err());

        assert!(parse_quasi("p <= q").is_err());
    }

    #[test]
    fn quasi_roundtrip_through_printer() {
        let q = QuasiInequality::new(
            vec![
                Inequality::new(nom("j"), and(nom("i0"), var("q"))),
                Inequality::new(and(var("a"), var("b")), or(var("c"), and(var("d"), var("e")))),
            ],
            Inequality::new(nom("j"), var("p")),
        );
        assert_eq!(parse_quasi(&q.to_string()).unwrap(), q);
    }
}

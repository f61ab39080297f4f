//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := disj ('->' formula)?
//! disj    := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '!' unary | ('exists' | 'forall') var '.' formula | primary
//! primary := 'true' | 'false' | expr ('=' | '!=') expr | '(' formula ')'
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | base ('^' nat)?
//! base    := integer | integer '/' integer | var | '(' expr ')'
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;

use super::{Equation, Formula, FormulaError, PredFormula, Quantifier};
use crate::arith::{rat_canonical, Rational};
use crate::poly::Poly;

const KEYWORDS: [&str; 4] = ["exists", "forall", "true", "false"];
const MAX_EXPONENT: u32 = 10_000;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
    Neq,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Dot,
}

fn syntax(pos: usize, msg: impl Into<String>) -> FormulaError {
    FormulaError::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num = &text[start..i];
                // `a/b` is a single rational literal
                let mut j = i;
                while j < bytes.len() && bytes[j] == b' ' {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'/' {
                    j += 1;
                    while j < bytes.len() && bytes[j] == b' ' {
                        j += 1;
                    }
                    let dstart = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if dstart == j {
                        return Err(syntax(j, "expected denominator after `/`"));
                    }
                    let n: BigInt = num.parse().expect("digits");
                    let d: BigInt = text[dstart..j].parse().expect("digits");
                    let r = rat_canonical(n, d).map_err(|_| syntax(start, "zero denominator"))?;
                    out.push((start, Tok::Num(r)));
                    i = j;
                } else {
                    out.push((start, Tok::Num(Rational::from_int(num.parse::<BigInt>().expect("digits")))));
                }
                continue;
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'=' => out.push((start, Tok::Eq)),
            b'&' => out.push((start, Tok::Amp)),
            b'|' => out.push((start, Tok::Pipe)),
            b'.' => out.push((start, Tok::Dot)),
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((start, Tok::Arrow));
                    i += 2;
                    continue;
                }
                out.push((start, Tok::Minus));
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((start, Tok::Neq));
                    i += 2;
                    continue;
                }
                out.push((start, Tok::Bang));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Parser configuration: integer parameters substituted as constants, and an
/// optional declared set of free variables.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    pub params: BTreeMap<String, Rational>,
    pub declared: Option<BTreeSet<String>>,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    opts: &'a ParseOptions,
    /// Bound variables in scope, innermost last.
    scope: Vec<String>,
}

type PResult<T> = Result<T, FormulaError>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(syntax(self.here(), format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::Or(vec![Formula::Not(Box::new(lhs)), rhs]));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conj()?];
        while self.eat(&Tok::Pipe) {
            parts.push(self.conj()?);
        }
        Ok(flatten(parts, false))
    }

    fn conj(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(flatten(parts, true))
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        let quant = match self.peek() {
            Some(Tok::Ident(k)) if k == "exists" => Some(Quantifier::Exists),
            Some(Tok::Ident(k)) if k == "forall" => Some(Quantifier::Forall),
            _ => None,
        };
        if let Some(q) = quant {
            self.pos += 1;
            let v = match self.peek() {
                Some(Tok::Ident(v)) if !KEYWORDS.contains(&v.as_str()) => v.clone(),
                _ => return Err(syntax(self.here(), "expected a variable after quantifier")),
            };
            if self.opts.params.contains_key(&v) {
                return Err(syntax(self.here(), format!("cannot bind parameter `{v}`")));
            }
            self.pos += 1;
            self.expect(&Tok::Dot, "`.` after quantified variable")?;
            self.scope.push(v.clone());
            let body = self.formula();
            self.scope.pop();
            return Ok(Formula::Quant(q, v, Box::new(body?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Ident(k)) if k == "true" => {
                self.pos += 1;
                return Ok(Formula::True);
            }
            Some(Tok::Ident(k)) if k == "false" => {
                self.pos += 1;
                return Ok(Formula::False);
            }
            _ => {}
        }
        let save = self.pos;
        let atom_err = match self.atom() {
            Ok(f) => return Ok(f),
            Err(e @ (FormulaError::UnknownVariable(_) | FormulaError::Arity { .. })) => return Err(e),
            Err(e) => e,
        };
        let atom_end = self.pos;
        self.pos = save;
        if self.eat(&Tok::LParen) {
            let inner = self.formula();
            match inner {
                Ok(f) => {
                    self.expect(&Tok::RParen, "`)`")?;
                    return Ok(f);
                }
                Err(e) => {
                    // report whichever attempt got further
                    if self.pos >= atom_end {
                        return Err(e);
                    }
                }
            }
        }
        Err(atom_err)
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.expr()?;
        let negated = if self.eat(&Tok::Eq) {
            false
        } else if self.eat(&Tok::Neq) {
            true
        } else {
            return Err(syntax(self.here(), "expected `=` or `!=`"));
        };
        let rhs = self.expr()?;
        let atom = Formula::Atom(Equation(lhs.sub(&rhs)));
        Ok(if negated { Formula::Not(Box::new(atom)) } else { atom })
    }

    fn expr(&mut self) -> PResult<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Poly> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Star) {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<Poly> {
        if self.eat(&Tok::Minus) {
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if self.eat(&Tok::Caret) {
            let pos = self.here();
            let e = match self.peek() {
                Some(Tok::Num(r)) if r.is_integer() => r.to_i64(),
                _ => None,
            };
            let e = e
                .filter(|&e| (0..=MAX_EXPONENT as i64).contains(&e))
                .ok_or_else(|| FormulaError::Arity {
                    pos,
                    msg: format!("exponent must be a natural number literal ≤ {MAX_EXPONENT}"),
                })?;
            self.pos += 1;
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn base(&mut self) -> PResult<Poly> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Poly::constant(r))
            }
            Some(Tok::Ident(v)) => {
                if KEYWORDS.contains(&v.as_str()) {
                    return Err(syntax(pos, format!("keyword `{v}` used as a term")));
                }
                self.pos += 1;
                if let Some(r) = self.opts.params.get(&v) {
                    return Ok(Poly::constant(r.clone()));
                }
                if let Some(declared) = &self.opts.declared {
                    if !declared.contains(&v) && !self.scope.contains(&v) {
                        return Err(FormulaError::UnknownVariable(v));
                    }
                }
                Ok(Poly::var(&v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(syntax(pos, "expected a term")),
        }
    }
}

fn flatten(mut parts: Vec<Formula>, and: bool) -> Formula {
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    let mut out = Vec::new();
    for p in parts {
        match (p, and) {
            (Formula::And(inner), true) | (Formula::Or(inner), false) => out.extend(inner),
            (other, _) => out.push(other),
        }
    }
    if and {
        Formula::And(out)
    } else {
        Formula::Or(out)
    }
}

fn parse_tree(text: &str, opts: &ParseOptions) -> Result<Formula, FormulaError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        opts,
        scope: Vec::new(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a formula into prenex form with canonical polynomials.
pub fn parse_formula(text: &str) -> Result<PredFormula, FormulaError> {
    parse_formula_with(text, &ParseOptions::default())
}

pub fn parse_formula_with(text: &str, opts: &ParseOptions) -> Result<PredFormula, FormulaError> {
    Ok(parse_tree(text, opts)?.prenex())
}

/// Parses a polynomial expression.
pub fn parse_poly(text: &str) -> Result<Poly, FormulaError> {
    let toks = tokenize(text)?;
    let opts = ParseOptions::default();
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        opts: &opts,
        scope: Vec::new(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

impl FromStr for Poly {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

impl FromStr for PredFormula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

//! Equations, propositional and prenex predicate formulas over polynomial
//! rings, with their text syntax and normal forms.

mod family;
mod implication;
mod normal;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::arith::{PrimeField, Rational};
use crate::poly::{Poly, PolyError};

pub use family::{family_instantiate, FamilyPresentation};
pub use implication::{implication_to_cover, CoverPiece, PieceSource};
pub use normal::{cnf_clauses, dnf_terms, to_cnf, to_cnf_with_budget, to_dnf, to_dnf_with_budget, to_nnf, DEFAULT_NODE_BUDGET};
#[cfg(test)]
pub(crate) use normal::tests::formula_strategy;
pub use parse::{parse_formula, parse_formula_with, parse_poly, ParseOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("arity error at byte {pos}: {msg}")]
    Arity { pos: usize, msg: String },
    #[error("index {index} is outside the family range")]
    IndexOutOfRange { index: u64 },
    #[error("normal form exceeds the node budget of {limit}")]
    SizeBudgetExceeded { limit: usize },
    #[error("formula is not a conjunction of literals: {0}")]
    NotLiteralConjunction(String),
    #[error("expected a quantifier-free formula: {0}")]
    Quantified(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The equation `poly = 0`; `w = w'` is stored as `w - w' = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation(pub Poly);

impl Equation {
    pub fn poly(&self) -> &Poly {
        &self.0
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.0)
    }
}

/// A literal `ε(f = 0)` with ε empty (positive) or negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedLiteral {
    pub positive: bool,
    pub equation: Equation,
}

impl SignedLiteral {
    pub fn pos(p: Poly) -> Self {
        SignedLiteral {
            positive: true,
            equation: Equation(p),
        }
    }

    pub fn neg(p: Poly) -> Self {
        SignedLiteral {
            positive: false,
            equation: Equation(p),
        }
    }

    pub fn negated(&self) -> Self {
        SignedLiteral {
            positive: !self.positive,
            equation: self.equation.clone(),
        }
    }

    pub fn to_formula(&self) -> PropFormula {
        let atom = PropFormula::Atom(self.equation.clone());
        if self.positive {
            atom
        } else {
            PropFormula::not(atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropFormula {
    True,
    False,
    Atom(Equation),
    Not(Box<PropFormula>),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
}

impl PropFormula {
    pub fn atom(p: Poly) -> Self {
        PropFormula::Atom(Equation(p))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        PropFormula::Not(Box::new(f))
    }

    /// Conjunction; flattens nested conjunctions, `and([]) = True`,
    /// `and([f]) = f`.
    pub fn and(parts: Vec<PropFormula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PropFormula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => PropFormula::True,
            1 => out.pop().unwrap(),
            _ => PropFormula::And(out),
        }
    }

    /// Disjunction; flattens nested disjunctions, `or([]) = False`.
    pub fn or(parts: Vec<PropFormula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PropFormula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => PropFormula::False,
            1 => out.pop().unwrap(),
            _ => PropFormula::Or(out),
        }
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::or(vec![PropFormula::not(a), b])
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::True | PropFormula::False => {}
            PropFormula::Atom(e) => out.extend(e.0.vars().iter().cloned()),
            PropFormula::Not(f) => f.collect_vars(out),
            PropFormula::And(fs) | PropFormula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
        }
    }

    pub fn atoms(&self) -> Vec<&Poly> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Poly>) {
        match self {
            PropFormula::True | PropFormula::False => {}
            PropFormula::Atom(e) => out.push(&e.0),
            PropFormula::Not(f) => f.collect_atoms(out),
            PropFormula::And(fs) | PropFormula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            PropFormula::True | PropFormula::False | PropFormula::Atom(_) => 1,
            PropFormula::Not(f) => 1 + f.size(),
            PropFormula::And(fs) | PropFormula::Or(fs) => 1 + fs.iter().map(PropFormula::size).sum::<usize>(),
        }
    }

    /// Applies `f` to every atom polynomial.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Poly) -> Poly) -> PropFormula {
        match self {
            PropFormula::True => PropFormula::True,
            PropFormula::False => PropFormula::False,
            PropFormula::Atom(e) => PropFormula::atom(f(&e.0)),
            PropFormula::Not(g) => PropFormula::not(g.map_atoms(f)),
            PropFormula::And(gs) => PropFormula::and(gs.iter().map(|g| g.map_atoms(f)).collect()),
            PropFormula::Or(gs) => PropFormula::or(gs.iter().map(|g| g.map_atoms(f)).collect()),
        }
    }

    /// Truth value given a decision procedure for atoms.
    pub fn eval_with<E>(&self, atom: &mut impl FnMut(&Poly) -> Result<bool, E>) -> Result<bool, E> {
        Ok(match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Atom(e) => atom(&e.0)?,
            PropFormula::Not(f) => !f.eval_with(atom)?,
            PropFormula::And(fs) => {
                for f in fs {
                    if !f.eval_with(atom)? {
                        return Ok(false);
                    }
                }
                true
            }
            PropFormula::Or(fs) => {
                for f in fs {
                    if f.eval_with(atom)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    pub fn eval_rational(&self, point: &BTreeMap<String, Rational>) -> Result<bool, PolyError> {
        self.eval_with(&mut |p| Ok(p.eval_rational(point)?.is_zero()))
    }

    pub fn eval_mod(&self, field: PrimeField, point: &BTreeMap<String, u64>) -> Result<bool, PolyError> {
        self.eval_with(&mut |p| Ok(p.eval_mod(field, point)? == 0))
    }

    /// Folds constant atoms and boolean constants, and drops duplicate
    /// children of conjunctions and disjunctions.
    pub fn simplify(&self) -> PropFormula {
        match self {
            PropFormula::True | PropFormula::False => self.clone(),
            PropFormula::Atom(e) => match e.0.constant_value() {
                Some(c) if c.is_zero() => PropFormula::True,
                Some(_) => PropFormula::False,
                None => self.clone(),
            },
            PropFormula::Not(f) => match f.simplify() {
                PropFormula::True => PropFormula::False,
                PropFormula::False => PropFormula::True,
                PropFormula::Not(g) => *g,
                g => PropFormula::not(g),
            },
            PropFormula::And(fs) => {
                let mut out: Vec<PropFormula> = Vec::new();
                for f in fs {
                    match f.simplify() {
                        PropFormula::True => {}
                        PropFormula::False => return PropFormula::False,
                        g => {
                            let parts = match g {
                                PropFormula::And(inner) => inner,
                                other => vec![other],
                            };
                            for p in parts {
                                if !out.contains(&p) {
                                    out.push(p);
                                }
                            }
                        }
                    }
                }
                PropFormula::and(out)
            }
            PropFormula::Or(fs) => {
                let mut out: Vec<PropFormula> = Vec::new();
                for f in fs {
                    match f.simplify() {
                        PropFormula::False => {}
                        PropFormula::True => return PropFormula::True,
                        g => {
                            let parts = match g {
                                PropFormula::Or(inner) => inner,
                                other => vec![other],
                            };
                            for p in parts {
                                if !out.contains(&p) {
                                    out.push(p);
                                }
                            }
                        }
                    }
                }
                PropFormula::or(out)
            }
        }
    }

    /// The literal list if this is a conjunction of literals (or a single
    /// literal, or `True`).
    pub fn as_literal_conjunction(&self) -> Option<Vec<SignedLiteral>> {
        fn literal(f: &PropFormula) -> Option<SignedLiteral> {
            match f {
                PropFormula::Atom(e) => Some(SignedLiteral {
                    positive: true,
                    equation: e.clone(),
                }),
                PropFormula::Not(g) => match g.as_ref() {
                    PropFormula::Atom(e) => Some(SignedLiteral {
                        positive: false,
                        equation: e.clone(),
                    }),
                    _ => None,
                },
                PropFormula::False => Some(SignedLiteral::pos(Poly::one())),
                _ => None,
            }
        }
        match self {
            PropFormula::True => Some(Vec::new()),
            PropFormula::And(fs) => fs.iter().map(literal).collect(),
            other => literal(other).map(|l| vec![l]),
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::And(_) | PropFormula::Or(_) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::True => write!(f, "true"),
            PropFormula::False => write!(f, "false"),
            PropFormula::Atom(e) => write!(f, "{e}"),
            PropFormula::Not(g) => match g.as_ref() {
                PropFormula::True | PropFormula::False => write!(f, "!{g}"),
                _ => write!(f, "!({g})"),
            },
            PropFormula::And(gs) | PropFormula::Or(gs) => {
                let sep = if matches!(self, PropFormula::And(_)) { " & " } else { " | " };
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    g.fmt_child(f)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Exists => write!(f, "exists"),
            Quantifier::Forall => write!(f, "forall"),
        }
    }
}

/// Prenex formula: quantifier prefix (outermost first) over a propositional
/// matrix. Bound variables are distinct, disjoint from the free variables and
/// all occur in the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredFormula {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: PropFormula,
}

impl PredFormula {
    pub fn quantifier_free(matrix: PropFormula) -> Self {
        PredFormula {
            prefix: Vec::new(),
            matrix,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.prefix.is_empty()
    }

    /// The matrix when there is no quantifier.
    pub fn as_prop(&self) -> Result<&PropFormula, FormulaError> {
        if self.is_quantifier_free() {
            Ok(&self.matrix)
        } else {
            Err(FormulaError::Quantified(self.to_string()))
        }
    }

    pub fn bound_vars(&self) -> BTreeSet<String> {
        self.prefix.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let bound = self.bound_vars();
        self.matrix
            .free_vars()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .collect()
    }

    pub fn to_formula(&self) -> Formula {
        let mut f = Formula::from_prop(&self.matrix);
        for (q, v) in self.prefix.iter().rev() {
            f = Formula::Quant(*q, v.clone(), Box::new(f));
        }
        f
    }

    pub fn negate(&self) -> PredFormula {
        Formula::Not(Box::new(self.to_formula())).prenex()
    }

    pub fn and_all(parts: &[PredFormula]) -> PredFormula {
        Formula::And(parts.iter().map(PredFormula::to_formula).collect()).prenex()
    }

    /// `(⋀ premises) → goal`, in prenex form.
    pub fn implication(premises: &[PredFormula], goal: &PredFormula) -> PredFormula {
        let lhs = Formula::And(premises.iter().map(PredFormula::to_formula).collect());
        Formula::Or(vec![Formula::Not(Box::new(lhs)), goal.to_formula()]).prenex()
    }

    /// Universally quantifies every free variable.
    pub fn universal_closure(&self) -> PredFormula {
        let mut f = self.to_formula();
        for v in self.free_vars().into_iter().rev() {
            f = Formula::Quant(Quantifier::Forall, v, Box::new(f));
        }
        f.prenex()
    }
}

impl fmt::Display for PredFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, v) in &self.prefix {
            write!(f, "{q} {v}. ")?;
        }
        write!(f, "{}", self.matrix)
    }
}

/// Formula tree with quantifiers anywhere; converted to [`PredFormula`] by
/// [`Formula::prenex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(Equation),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Formula {
    pub fn from_prop(p: &PropFormula) -> Formula {
        match p {
            PropFormula::True => Formula::True,
            PropFormula::False => Formula::False,
            PropFormula::Atom(e) => Formula::Atom(e.clone()),
            PropFormula::Not(f) => Formula::Not(Box::new(Formula::from_prop(f))),
            PropFormula::And(fs) => Formula::And(fs.iter().map(Formula::from_prop).collect()),
            PropFormula::Or(fs) => Formula::Or(fs.iter().map(Formula::from_prop).collect()),
        }
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(e) => {
                for v in e.0.vars() {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.free_vars_into(bound, out)),
            Formula::Quant(_, v, f) => {
                bound.push(v.clone());
                f.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    /// Renames free occurrences of `from` to `to`.
    fn rename(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(e) => Formula::Atom(Equation(e.0.substitute(from, &Poly::var(to)))),
            Formula::Not(f) => Formula::Not(Box::new(f.rename(from, to))),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename(from, to)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename(from, to)).collect()),
            Formula::Quant(q, v, f) if v == from => Formula::Quant(*q, v.clone(), f.clone()),
            Formula::Quant(q, v, f) => Formula::Quant(*q, v.clone(), Box::new(f.rename(from, to))),
        }
    }

    /// Prenex normal form. Bound variables are renamed apart from each other
    /// and from the free variables; vacuous quantifiers are dropped.
    pub fn prenex(&self) -> PredFormula {
        let mut used = self.free_vars();
        let (prefix, matrix) = self.prenex_inner(&mut used);
        let occurring = matrix.free_vars();
        let prefix = prefix.into_iter().filter(|(_, v)| occurring.contains(v)).collect();
        PredFormula { prefix, matrix }
    }

    fn prenex_inner(&self, used: &mut BTreeSet<String>) -> (Vec<(Quantifier, String)>, PropFormula) {
        match self {
            Formula::True => (Vec::new(), PropFormula::True),
            Formula::False => (Vec::new(), PropFormula::False),
            Formula::Atom(e) => (Vec::new(), PropFormula::Atom(e.clone())),
            Formula::Not(f) => {
                let (prefix, m) = f.prenex_inner(used);
                let prefix = prefix.into_iter().map(|(q, v)| (q.dual(), v)).collect();
                (prefix, PropFormula::not(m))
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let mut prefix = Vec::new();
                let mut parts = Vec::new();
                for f in fs {
                    let (p, m) = f.prenex_inner(used);
                    prefix.extend(p);
                    parts.push(m);
                }
                let m = if matches!(self, Formula::And(_)) {
                    PropFormula::and(parts)
                } else {
                    PropFormula::or(parts)
                };
                (prefix, m)
            }
            Formula::Quant(q, v, f) => {
                let (name, body) = if used.contains(v) {
                    let fresh = fresh_name(v, used);
                    let body = f.rename(v, &fresh);
                    (fresh, body)
                } else {
                    (v.clone(), (**f).clone())
                };
                used.insert(name.clone());
                let (mut prefix, m) = body.prenex_inner(used);
                prefix.insert(0, (*q, name));
                (prefix, m)
            }
        }
    }
}

fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|n| !used.contains(n))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> PredFormula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn prenex_renames_clashes() {
        let g = f("(exists y. x*y = 1) & y = 2");
        assert_eq!(g.prefix.len(), 1);
        let (q, v) = &g.prefix[0];
        assert_eq!(*q, Quantifier::Exists);
        assert_ne!(v, "y");
        assert!(g.free_vars().contains("y"));
        assert!(g.free_vars().contains("x"));
    }

    #[test]
    fn negation_flips_quantifiers() {
        let g = f("!(exists y. x*y = 1)");
        assert_eq!(g.prefix, vec![(Quantifier::Forall, "y".to_string())]);
    }

    #[test]
    fn vacuous_quantifier_dropped() {
        let g = f("exists z. x = 0");
        assert!(g.is_quantifier_free());
    }

    #[test]
    fn universal_closure_binds_free_vars() {
        let g = f("exists y. x*y = 1").universal_closure();
        assert!(g.free_vars().is_empty());
        assert_eq!(g.prefix[0], (Quantifier::Forall, "x".to_string()));
    }

    #[test]
    fn simplify_folds_constants() {
        let g = f("x = x & !(1 = 0) & (y = 0 | y = 0)").matrix.simplify();
        assert_eq!(g.to_string(), "y = 0");
        assert_eq!(f("1 = 0 | !(x = x)").matrix.simplify(), PropFormula::False);
    }

    #[test]
    fn literal_conjunction_view() {
        let lits = f("x = 0 & y != 1").matrix.as_literal_conjunction().unwrap();
        assert_eq!(lits.len(), 2);
        assert!(lits[0].positive && !lits[1].positive);
        assert!(f("x = 0 | y = 0").matrix.as_literal_conjunction().is_none());
    }
}

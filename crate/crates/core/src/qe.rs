//! Quantifier elimination over algebraically closed fields of characteristic
//! zero, and a gcd-based decision oracle over ℚ̄ to test it against.
//!
//! `∃y (⋀ p = 0 ∧ q ≠ 0)` is eliminated by case splits on leading
//! coefficients in `y`: once the leading coefficient of the lowest-degree `p`
//! is assumed nonzero the others are pseudo-reduced by it, and a single `p`
//! with a root outside `Z(q)` exists iff `p ∤ q^deg p`.

use serde::Serialize;
use thiserror::Error;

use crate::formula::{dnf_terms, to_nnf, FormulaError, PredFormula, PropFormula, Quantifier, DEFAULT_NODE_BUDGET};
use crate::poly::{Poly, PolyError, RecPoly, UPoly};

/// Default cap on the number of quantifiers eliminated from one prefix.
pub const DEFAULT_MAX_DEPTH: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QeError {
    #[error("elimination exceeds the budget of {limit} case splits")]
    SizeBudgetExceeded { limit: usize },
    #[error("quantifier prefix of length {depth} exceeds the bound {limit}")]
    DepthExceeded { depth: usize, limit: usize },
    #[error("not a sentence: free variables {0:?}")]
    NotSentence(Vec<String>),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<QeError> for FormulaError {
    fn from(e: QeError) -> Self {
        match e {
            QeError::Formula(f) => f,
            QeError::Poly(p) => FormulaError::Poly(p),
            QeError::SizeBudgetExceeded { limit } => FormulaError::SizeBudgetExceeded { limit },
            other => FormulaError::Quantified(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QeOptions {
    /// Cap on literal occurrences in normal forms and on case splits.
    pub budget: usize,
    pub max_depth: usize,
}

impl Default for QeOptions {
    fn default() -> Self {
        QeOptions {
            budget: DEFAULT_NODE_BUDGET,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

/// `∃var (⋀ pos = 0 ∧ ⋀ neg ≠ 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralConjunction {
    pub pos: Vec<Poly>,
    pub neg: Vec<Poly>,
    pub var: String,
}

impl LiteralConjunction {
    pub fn new(pos: Vec<Poly>, neg: Vec<Poly>, var: &str) -> Self {
        LiteralConjunction {
            pos,
            neg,
            var: var.to_string(),
        }
    }

    /// Parameters: every variable other than the eliminated one.
    pub fn params(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .pos
            .iter()
            .chain(&self.neg)
            .flat_map(|p| p.vars().iter().cloned())
            .filter(|v| *v != self.var)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn is_var_free(&self) -> bool {
        !self.pos.iter().chain(&self.neg).any(|p| p.involves(&self.var))
    }
}

fn univariate_in(polys: &[Poly]) -> Result<Option<String>, PolyError> {
    let mut vars: Vec<String> = polys.iter().flat_map(|p| p.vars().iter().cloned()).collect();
    vars.sort();
    vars.dedup();
    if vars.len() > 1 {
        return Err(PolyError::NotUnivariate(vars));
    }
    Ok(vars.pop())
}

/// Whether some `y ∈ ℚ̄` makes every `ps` vanish and no `qs` vanish.
pub fn decide_exists_qbar(ps: &[Poly], qs: &[Poly]) -> Result<bool, PolyError> {
    let all: Vec<Poly> = ps.iter().chain(qs).cloned().collect();
    let var = univariate_in(&all)?.unwrap_or_else(|| "y".to_string());
    let ps: Vec<UPoly> = ps
        .iter()
        .map(|p| UPoly::from_poly(p, &var))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let qs: Vec<UPoly> = qs.iter().map(|q| UPoly::from_poly(q, &var)).collect::<Result<_, _>>()?;
    if ps.iter().any(UPoly::is_constant) {
        return Ok(false);
    }
    if ps.is_empty() {
        return Ok(qs.iter().all(|q| !q.is_zero()));
    }
    let mut g = ps.iter().fold(UPoly::zero(), |g, p| g.gcd(p));
    loop {
        let before = g.degree();
        for q in &qs {
            let d = g.gcd(q);
            g = g.div_exact(&d).expect("gcd divides");
        }
        if g.degree() == before {
            break;
        }
    }
    Ok(g.degree() > 0)
}

/// Assumptions collected along a branch of the case analysis, stored monic.
#[derive(Default)]
struct Context {
    zero: Vec<Poly>,
    nonzero: Vec<Poly>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Known {
    Zero,
    Nonzero,
    Unknown,
}

impl Context {
    fn status(&self, c: &Poly) -> Known {
        if c.is_zero() {
            return Known::Zero;
        }
        if c.is_constant() {
            return Known::Nonzero;
        }
        let m = c.monic();
        if self.zero.contains(&m) {
            Known::Zero
        } else if self.nonzero.contains(&m) {
            Known::Nonzero
        } else {
            Known::Unknown
        }
    }

    /// Drops coefficients (in `y`) known to vanish.
    fn reduce(&self, p: &Poly, y: &str) -> Poly {
        if self.zero.is_empty() {
            return p.clone();
        }
        let coeffs: Vec<Poly> = p
            .coeffs_in(y)
            .into_iter()
            .map(|c| if self.status(&c) == Known::Zero { Poly::zero() } else { c })
            .collect();
        Poly::from_coeffs_in(y, &coeffs)
    }
}

struct Eliminator<'a> {
    y: &'a str,
    ctx: Context,
    steps: usize,
    budget: usize,
}

fn lit(p: &Poly, positive: bool) -> PropFormula {
    let a = PropFormula::atom(p.clone());
    if positive {
        a
    } else {
        PropFormula::not(a)
    }
}

impl Eliminator<'_> {
    fn tick(&mut self) -> Result<(), QeError> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(QeError::SizeBudgetExceeded { limit: self.budget })
        } else {
            Ok(())
        }
    }

    /// Runs `f` under the extra assumption `c = 0` (or `c ≠ 0`), prefixing the
    /// result with that literal.
    fn assuming(
        &mut self,
        c: &Poly,
        zero: bool,
        f: impl FnOnce(&mut Self) -> Result<PropFormula, QeError>,
    ) -> Result<PropFormula, QeError> {
        let m = c.monic();
        if zero {
            self.ctx.zero.push(m);
        } else {
            self.ctx.nonzero.push(m);
        }
        let r = f(self);
        if zero {
            self.ctx.zero.pop();
        } else {
            self.ctx.nonzero.pop();
        }
        Ok(PropFormula::and(vec![lit(c, zero), r?]))
    }

    /// Some coefficient of `r` (in `y`) is nonzero.
    fn not_identically_zero(&self, r: &Poly) -> PropFormula {
        let mut parts = Vec::new();
        for c in r.coeffs_in(self.y) {
            match self.ctx.status(&c) {
                Known::Zero => {}
                Known::Nonzero => return PropFormula::True,
                Known::Unknown => parts.push(lit(&c, false)),
            }
        }
        PropFormula::or(parts)
    }

    fn exists(&mut self, ps: Vec<Poly>, q: Poly) -> Result<PropFormula, QeError> {
        self.tick()?;
        let y = self.y;
        // y-free equations become conditions on the parameters
        let mut with_y = Vec::new();
        let mut conds = Vec::new();
        for p in ps {
            let p = self.ctx.reduce(&p, y);
            if p.is_zero() {
                continue;
            }
            if p.involves(y) {
                with_y.push(p);
                continue;
            }
            match self.ctx.status(&p) {
                Known::Nonzero => return Ok(PropFormula::False),
                Known::Zero => {}
                Known::Unknown => conds.push(p),
            }
        }
        if let Some(c) = conds.pop() {
            with_y.extend(conds);
            return self.assuming(&c, true, |s| s.exists(with_y, q));
        }
        let q = self.ctx.reduce(&q, y);
        if q.is_zero() {
            return Ok(PropFormula::False);
        }
        if with_y.is_empty() {
            return Ok(self.not_identically_zero(&q));
        }
        // lowest degree equation and its leading coefficient
        let k = (0..with_y.len()).min_by_key(|&i| with_y[i].degree_in(y)).unwrap();
        let p = with_y[k].clone();
        let rec = RecPoly::new(&p, y);
        let lc = rec.lc();
        match self.ctx.status(&lc) {
            Known::Zero => unreachable!("reduced coefficients are not known to vanish"),
            Known::Nonzero => self.with_lc_nonzero(with_y, k, q),
            Known::Unknown => {
                let mut lower = with_y.clone();
                lower[k] = rec.reductum().to_poly();
                let qc = q.clone();
                let a = self.assuming(&lc, true, |s| s.exists(lower, qc))?;
                let b = self.assuming(&lc, false, |s| s.with_lc_nonzero(with_y, k, q))?;
                Ok(PropFormula::or(vec![a, b]))
            }
        }
    }

    /// Case `lc(ps[k]) ≠ 0`, `ps[k]` of least degree in `y`.
    fn with_lc_nonzero(&mut self, ps: Vec<Poly>, k: usize, q: Poly) -> Result<PropFormula, QeError> {
        let y = self.y;
        let p = RecPoly::new(&ps[k], y);
        if ps.len() > 1 {
            let mut next = vec![ps[k].clone()];
            for (i, other) in ps.iter().enumerate() {
                if i != k {
                    next.push(RecPoly::new(other, y).sprem(&p)?.to_poly().monic());
                }
            }
            return self.exists(next, q);
        }
        // single equation: a root avoiding Z(q) exists iff p ∤ q^d
        let d = p.degree().expect("involves y");
        let qr = RecPoly::new(&q, y);
        let mut r = RecPoly::new(&Poly::one(), y);
        for _ in 0..d {
            self.tick()?;
            r = r.mul(&qr).sprem(&p)?;
            r = RecPoly::new(&self.ctx.reduce(&r.to_poly().monic(), y), y);
        }
        Ok(self.not_identically_zero(&r.to_poly()))
    }
}

/// Quantifier-free equivalent of `∃var c` over every algebraically closed
/// field of characteristic 0.
pub fn eliminate_exists(c: &LiteralConjunction, opts: &QeOptions) -> Result<PropFormula, QeError> {
    let q = c.neg.iter().fold(Poly::one(), |acc, q| acc.mul(q));
    let mut e = Eliminator {
        y: &c.var,
        ctx: Context::default(),
        steps: 0,
        budget: opts.budget,
    };
    Ok(e.exists(c.pos.clone(), q)?.simplify())
}

/// `∃var f` for quantifier-free `f`, through its DNF.
pub fn eliminate_exists_formula(f: &PropFormula, var: &str, opts: &QeOptions) -> Result<PropFormula, QeError> {
    let mut parts = Vec::new();
    for term in dnf_terms(f, opts.budget)? {
        let pos = term.iter().filter(|l| l.positive).map(|l| l.equation.0.clone()).collect();
        let neg = term.iter().filter(|l| !l.positive).map(|l| l.equation.0.clone()).collect();
        let r = eliminate_exists(&LiteralConjunction::new(pos, neg, var), opts)?;
        if r == PropFormula::True {
            return Ok(PropFormula::True);
        }
        parts.push(r);
    }
    Ok(PropFormula::or(parts).simplify())
}

/// Quantifier-free equivalent of a prenex formula, innermost quantifier
/// first; `∀y φ` is `¬∃y ¬φ`. Quantifier-free input only goes through
/// constant folding.
pub fn eliminate_all(f: &PredFormula, opts: &QeOptions) -> Result<PropFormula, QeError> {
    if f.prefix.len() > opts.max_depth {
        return Err(QeError::DepthExceeded {
            depth: f.prefix.len(),
            limit: opts.max_depth,
        });
    }
    let mut m = f.matrix.clone();
    for (q, v) in f.prefix.iter().rev() {
        m = match q {
            Quantifier::Exists => eliminate_exists_formula(&m, v, opts)?,
            Quantifier::Forall => {
                let inner = eliminate_exists_formula(&to_nnf(&PropFormula::not(m)), v, opts)?;
                PropFormula::not(inner).simplify()
            }
        };
    }
    Ok(m.simplify())
}

/// Truth value of a sentence over algebraically closed fields of
/// characteristic 0.
pub fn decide_sentence_acf(f: &PredFormula, opts: &QeOptions) -> Result<bool, QeError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(QeError::NotSentence(free.into_iter().collect()));
    }
    match eliminate_all(f, opts)?.simplify() {
        PropFormula::True => Ok(true),
        PropFormula::False => Ok(false),
        other => unreachable!("variable-free formula did not fold: {other}"),
    }
}

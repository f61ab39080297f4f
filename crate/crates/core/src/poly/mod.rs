//! Sparse multivariate polynomials with canonical rational coefficients.
//!
//! Terms are kept in graded-lexicographic order over a sorted variable list that
//! contains exactly the variables occurring in the polynomial, so two equal
//! polynomials are always structurally equal.

mod gcd;
mod rec;
mod upoly;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::arith::{ArithError, Field, PrimeField, Rational, Value};

pub use gcd::{
    gcd_bivariate, gcd_univariate, poly_divides, reduced_bivariate, resultant, squarefree_part,
};
pub use rec::RecPoly;
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("value domain does not match the evaluation field")]
    DomainMismatch,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("expected a univariate polynomial, found variables {0:?}")]
    NotUnivariate(Vec<String>),
    #[error("expected at most two variables, found {0:?}")]
    TooManyVariables(Vec<String>),
    #[error("zero polynomial is not a valid input here")]
    ZeroInput,
    #[error("division is not exact")]
    InexactDivision,
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type TermMap = BTreeMap<Monomial, Rational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Vec<String>,
    terms: TermMap,
}

fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    let set: BTreeSet<&String> = a.iter().chain(b).collect();
    set.into_iter().cloned().collect()
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            vars: Vec::new(),
            terms: TermMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = TermMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Poly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(Rational::from_int(c))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = TermMap::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        Poly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a polynomial from terms over `vars`; `vars` need not be sorted or
    /// minimal, and duplicate monomials are summed.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let sorted: Vec<String> = order.iter().map(|&i| vars[i].clone()).collect();
        let mut map = TermMap::new();
        for (exps, c) in terms {
            let m = Monomial(order.iter().map(|&i| exps[i]).collect());
            add_term(&mut map, m, &c);
        }
        Poly::normalize(sorted, map)
    }

    fn normalize(vars: Vec<String>, mut terms: TermMap) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..vars.len())
            .map(|i| terms.keys().any(|m| m.0[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return Poly { vars, terms };
        }
        let vars = vars
            .into_iter()
            .zip(&used)
            .filter_map(|(v, &u)| u.then_some(v))
            .collect();
        let terms = terms
            .into_iter()
            .map(|(m, c)| {
                let e = m.0.iter().zip(&used).filter_map(|(&e, &u)| u.then_some(e));
                (Monomial(e.collect()), c)
            })
            .collect();
        Poly { vars, terms }
    }

    /// Terms re-expressed over a superset `vars` of this polynomial's variables.
    fn aligned(&self, vars: &[String]) -> TermMap {
        if self.vars == vars {
            return self.terms.clone();
        }
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (k, &i) in idx.iter().enumerate() {
                    e[i] = m.0[k];
                }
                (Monomial(e), c.clone())
            })
            .collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial(vec![0; self.vars.len()]))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn involves(&self, var: &str) -> bool {
        self.vars.iter().any(|v| v == var)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.vars.iter().position(|v| v == var) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Leading (grlex-largest) term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let vars = merge_vars(&self.vars, &other.vars);
        let mut map = self.aligned(&vars);
        for (m, c) in other.aligned(&vars) {
            add_term(&mut map, m, &c);
        }
        Poly::normalize(vars, map)
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Rational::from_int(-1))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let vars = merge_vars(&self.vars, &other.vars);
        let a = self.aligned(&vars);
        let b = other.aligned(&vars);
        let mut map = TermMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                add_term(&mut map, m, &(ca * cb));
            }
        }
        Poly::normalize(vars, map)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> Poly {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return Poly::zero();
        };
        let mut map = TermMap::new();
        for (m, c) in &self.terms {
            if m.0[i] > 0 {
                let mut e = m.0.clone();
                e[i] -= 1;
                add_term(&mut map, Monomial(e), &(c * &Rational::from_int(m.0[i])));
            }
        }
        Poly::normalize(self.vars.clone(), map)
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: &str, value: &Poly) -> Poly {
        if !self.involves(var) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(var);
        // Horner
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    pub fn substitute_all(&self, values: &BTreeMap<String, Rational>) -> Poly {
        let mut p = self.clone();
        for (v, r) in values {
            p = p.substitute(v, &Poly::constant(r.clone()));
        }
        p
    }

    /// Coefficients of this polynomial viewed as univariate in `var`; index is
    /// the power of `var`. The zero polynomial gives an empty vector.
    pub fn coeffs_in(&self, var: &str) -> Vec<Poly> {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return if self.is_zero() {
                Vec::new()
            } else {
                vec![self.clone()]
            };
        };
        let mut rest_vars = self.vars.clone();
        rest_vars.remove(i);
        let deg = self.degree_in(var) as usize;
        let mut maps = vec![TermMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(i) as usize;
            maps[k].insert(Monomial(e), c.clone());
        }
        maps.into_iter()
            .map(|map| Poly::normalize(rest_vars.clone(), map))
            .collect()
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs_in(var: &str, coeffs: &[Poly]) -> Poly {
        let x = Poly::var(var);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    pub fn mul_monomial(&self, var: &str, e: u32) -> Poly {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Poly::var(var).pow(e))
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &Poly) -> Result<Option<Poly>, PolyError> {
        if g.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(Some(Poly::zero()));
        }
        let vars = merge_vars(&self.vars, &g.vars);
        let gm = g.aligned(&vars);
        let (glm, glc) = gm.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let glc_inv = glc.inv().expect("nonzero");
        let mut r = self.aligned(&vars);
        let mut q = TermMap::new();
        while let Some((rlm, rlc)) = r.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !glm.divides(&rlm) {
                return Ok(None);
            }
            let shift: Vec<u32> = rlm.0.iter().zip(&glm.0).map(|(a, b)| a - b).collect();
            let coef = &rlc * &glc_inv;
            for (m, c) in &gm {
                let e = Monomial(m.0.iter().zip(&shift).map(|(a, b)| a + b).collect());
                add_term(&mut r, e, &-(c * &coef));
            }
            add_term(&mut q, Monomial(shift), &coef);
        }
        Ok(Some(Poly::normalize(vars, q)))
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, PolyError> {
        let vals: Vec<&Rational> = self
            .vars
            .iter()
            .map(|v| point.get(v).ok_or_else(|| PolyError::MissingAssignment(v.clone())))
            .collect::<Result<_, _>>()?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, v) in m.0.iter().zip(&vals) {
                if *e > 0 {
                    t *= &v.pow(*e);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Value at a point of F_p^n; coefficients are reduced modulo p.
    pub fn eval_mod(&self, field: PrimeField, point: &BTreeMap<String, u64>) -> Result<u64, PolyError> {
        let compiled = ModPoly::compile(self, field, &self.vars)?;
        let vals: Vec<u64> = self
            .vars
            .iter()
            .map(|v| point.get(v).copied().ok_or_else(|| PolyError::MissingAssignment(v.clone())))
            .collect::<Result<_, _>>()?;
        Ok(compiled.eval(&vals))
    }

    /// Reduces every coefficient modulo p, keeping integer representatives in
    /// `[0, p)`.
    pub fn reduce_mod(&self, field: PrimeField) -> Result<Poly, PolyError> {
        let mut map = TermMap::new();
        for (m, c) in &self.terms {
            let r = c.reduce_mod(field)?;
            if r != 0 {
                map.insert(m.clone(), Rational::from_int(r));
            }
        }
        Ok(Poly::normalize(self.vars.clone(), map))
    }

    /// Multiplies by the lcm of denominators and divides by the content, giving
    /// an integer primitive polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        use num_integer::Integer;
        use num_bigint::BigInt;
        use num_traits::{One, Zero};
        if self.is_zero() {
            return Poly::zero();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        let mut factor = Rational::from_int(lcm) / Rational::from_int(g);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

/// Evaluation of `f` at a point with values in a field.
pub fn poly_eval(f: &Poly, field: Field, point: &BTreeMap<String, Value>) -> Result<Value, PolyError> {
    match field {
        Field::Prime(pf) => {
            let mut pt = BTreeMap::new();
            for (k, v) in point {
                match v {
                    Value::Fp(a) if a.modulus == pf.modulus() => {
                        pt.insert(k.clone(), a.residue);
                    }
                    Value::Rational(r) => {
                        pt.insert(k.clone(), r.reduce_mod(pf)?);
                    }
                    _ => return Err(PolyError::DomainMismatch),
                }
            }
            Ok(Value::Fp(pf.element(f.eval_mod(pf, &pt)?)))
        }
        Field::Rational | Field::AlgebraicClosure => {
            let mut pt = BTreeMap::new();
            for (k, v) in point {
                match v {
                    Value::Rational(r) => {
                        pt.insert(k.clone(), r.clone());
                    }
                    Value::Fp(_) => return Err(PolyError::DomainMismatch),
                }
            }
            Ok(Value::Rational(f.eval_rational(&pt)?))
        }
    }
}

fn add_term(map: &mut TermMap, m: Monomial, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&m) {
        Some(existing) => {
            *existing += c;
            if existing.is_zero() {
                map.remove(&m);
            }
        }
        None => {
            map.insert(m, c.clone());
        }
    }
}

/// A polynomial compiled for fast evaluation over F_p with variables bound to
/// slots of an assignment vector.
#[derive(Debug, Clone)]
pub struct ModPoly {
    field: PrimeField,
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl ModPoly {
    /// `slots` lists the variable for each slot; every variable of `f` must
    /// appear there.
    pub fn compile(f: &Poly, field: PrimeField, slots: &[String]) -> Result<Self, PolyError> {
        let idx: Vec<usize> = f
            .vars
            .iter()
            .map(|v| {
                slots
                    .iter()
                    .position(|s| s == v)
                    .ok_or_else(|| PolyError::MissingAssignment(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut terms = Vec::new();
        for (m, c) in &f.terms {
            let c = c.reduce_mod(field)?;
            if c == 0 {
                continue;
            }
            let factors = m
                .0
                .iter()
                .zip(&idx)
                .filter(|(e, _)| **e > 0)
                .map(|(&e, &i)| (i, e))
                .collect();
            terms.push((c, factors));
        }
        Ok(ModPoly { field, terms })
    }

    pub fn eval(&self, vals: &[u64]) -> u64 {
        let f = self.field;
        let mut acc = 0;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, e) in factors {
                t = f.mul(t, f.pow(vals[i], e as u64));
            }
            acc = f.add(acc, t);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(&self.vars)
                .filter(|(e, _)| **e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

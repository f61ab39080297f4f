//! The Galois correspondences between formula sets and point sets, computed by
//! exhaustive evaluation over a prime field.
//!
//! Equations live in a finite universe (all polynomials of total degree at most
//! `d` with coefficients in F_p), so `A′` and `T″` are finite and computable.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, PrimeField, Rational};
use crate::formula::{FormulaError, PredFormula, PropFormula, Quantifier};
use crate::poly::{ModPoly, Poly, PolyError};

/// Hard cap on the number of points of a space and on universe size.
pub const MAX_POINTS: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaloisError {
    #[error("affine space needs at least one variable")]
    NoVariables,
    #[error("space F_{p}^{n} exceeds {MAX_POINTS} points")]
    SpaceTooLarge { p: u64, n: usize },
    #[error("universe of degree-{d} polynomials over F_{p} exceeds {MAX_POINTS} elements")]
    UniverseTooLarge { p: u64, d: u32 },
    #[error("variable `{0}` is not a coordinate of the space")]
    UnknownVariable(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `F_p^X`, points enumerated in lexicographic order of coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSpace {
    pub field: PrimeField,
    pub vars: Vec<String>,
    size: usize,
}

impl AffineSpace {
    pub fn new(field: PrimeField, vars: &[String]) -> Result<Self, GaloisError> {
        if vars.is_empty() {
            return Err(GaloisError::NoVariables);
        }
        let p = field.modulus();
        let too_large = || GaloisError::SpaceTooLarge { p, n: vars.len() };
        let size = p.checked_pow(vars.len() as u32).ok_or_else(too_large)?;
        if size > MAX_POINTS {
            return Err(too_large());
        }
        Ok(AffineSpace {
            field,
            vars: vars.to_vec(),
            size: size as usize,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Coordinates of point number `k`.
    pub fn point(&self, mut k: usize) -> Vec<u64> {
        let p = self.field.modulus() as usize;
        let mut out = vec![0; self.vars.len()];
        for c in out.iter_mut().rev() {
            *c = (k % p) as u64;
            k /= p;
        }
        out
    }

    pub fn index_of(&self, point: &[u64]) -> usize {
        let p = self.field.modulus() as usize;
        point.iter().fold(0, |acc, &c| acc * p + c as usize)
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet(FixedBitSet::with_capacity(self.size))
    }

    pub fn full_set(&self) -> PointSet {
        let mut b = FixedBitSet::with_capacity(self.size);
        b.insert_range(..);
        PointSet(b)
    }
}

/// A subset of an [`AffineSpace`], as a bit per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet(FixedBitSet);

impl PointSet {
    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(k)
    }

    pub fn insert(&mut self, k: usize) {
        self.0.insert(k);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    /// Sorted coordinate lists.
    pub fn points(&self, space: &AffineSpace) -> Vec<Vec<u64>> {
        self.indices().map(|k| space.point(k)).collect()
    }
}

/// The polynomials over F_p in the space's variables with total degree ≤ `d`.
/// Element `k` has coefficient vector given by the base-p digits of `k` over
/// the monomials in graded order.
#[derive(Debug, Clone)]
pub struct BoundedUniverse {
    pub space: AffineSpace,
    pub degree: u32,
    monomials: Vec<Vec<u32>>,
    zero_sets: Vec<PointSet>,
}

/// A subset of a [`BoundedUniverse`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EqSet(FixedBitSet);

impl EqSet {
    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(k)
    }

    pub fn insert(&mut self, k: usize) {
        self.0.insert(k);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &EqSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(n, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
    out
}

impl BoundedUniverse {
    pub fn new(space: &AffineSpace, degree: u32) -> Result<Self, GaloisError> {
        let p = space.field.modulus();
        let monomials = monomials_up_to(space.vars.len(), degree);
        let size = p
            .checked_pow(monomials.len() as u32)
            .filter(|&s| s <= MAX_POINTS)
            .ok_or(GaloisError::UniverseTooLarge { p, d: degree })?;
        if (size as u128) * (space.size() as u128) > 50 * MAX_POINTS as u128 {
            return Err(GaloisError::UniverseTooLarge { p, d: degree });
        }
        let mut u = BoundedUniverse {
            space: space.clone(),
            degree,
            monomials,
            zero_sets: Vec::new(),
        };
        // values of each monomial at each point, then every candidate by
        // linear combination
        let f = space.field;
        let mono_vals: Vec<Vec<u64>> = u
            .monomials
            .iter()
            .map(|m| {
                (0..space.size())
                    .map(|k| {
                        let pt = space.point(k);
                        m.iter().zip(&pt).fold(1, |acc, (&e, &c)| f.mul(acc, f.pow(c, e as u64)))
                    })
                    .collect()
            })
            .collect();
        u.zero_sets = (0..size as usize)
            .map(|k| {
                let coeffs = u.coefficients(k);
                let mut set = space.empty_set();
                for pt in 0..space.size() {
                    let v = coeffs
                        .iter()
                        .zip(&mono_vals)
                        .fold(0, |acc, (&c, vals)| f.add(acc, f.mul(c, vals[pt])));
                    if v == 0 {
                        set.insert(pt);
                    }
                }
                set
            })
            .collect();
        Ok(u)
    }

    pub fn size(&self) -> usize {
        self.zero_sets.len()
    }

    fn coefficients(&self, mut k: usize) -> Vec<u64> {
        let p = self.space.field.modulus() as usize;
        let mut out = Vec::with_capacity(self.monomials.len());
        for _ in &self.monomials {
            out.push((k % p) as u64);
            k /= p;
        }
        out
    }

    /// The polynomial with index `k`.
    pub fn poly(&self, k: usize) -> Poly {
        let terms = self
            .monomials
            .iter()
            .zip(self.coefficients(k))
            .map(|(m, c)| (m.clone(), Rational::from_int(c)));
        Poly::from_terms(&self.space.vars, terms)
    }

    /// Index of `f` reduced mod p, or `None` if its degree exceeds the bound.
    pub fn index_of(&self, f: &Poly) -> Result<Option<usize>, GaloisError> {
        let g = f.reduce_mod(self.space.field)?;
        if let Some(v) = g.vars().iter().find(|v| !self.space.vars.contains(v)) {
            return Err(GaloisError::UnknownVariable(v.clone()));
        }
        if g.total_degree() > self.degree {
            return Ok(None);
        }
        let p = self.space.field.modulus() as usize;
        let pos: BTreeMap<&str, usize> = g.vars().iter().map(|v| v.as_str()).zip(0..).collect();
        let mut k = 0;
        let mut scale = 1;
        for m in &self.monomials {
            let c = g
                .terms()
                .find(|(gm, _)| {
                    self.space
                        .vars
                        .iter()
                        .zip(m)
                        .all(|(v, &e)| pos.get(v.as_str()).map_or(0, |&i| gm.0[i]) == e)
                })
                .map(|(_, c)| c.reduce_mod(self.space.field))
                .transpose()?
                .unwrap_or(0);
            k += c as usize * scale;
            scale *= p;
        }
        Ok(Some(k))
    }

    pub fn empty_set(&self) -> EqSet {
        EqSet(FixedBitSet::with_capacity(self.size()))
    }

    pub fn full_set(&self) -> EqSet {
        let mut b = FixedBitSet::with_capacity(self.size());
        b.insert_range(..);
        EqSet(b)
    }

    pub fn zero_set(&self, k: usize) -> &PointSet {
        &self.zero_sets[k]
    }

    /// Sorted polynomial strings of a set of equations.
    pub fn render(&self, t: &EqSet) -> Vec<String> {
        let mut out: Vec<String> = t.indices().map(|k| self.poly(k).to_string()).collect();
        out.sort();
        out
    }
}

fn eval_prop(f: &PropFormula, compiled: &[(Poly, ModPoly)], pt: &[u64]) -> bool {
    let r: Result<bool, ()> = f.eval_with(&mut |p: &Poly| {
        let m = &compiled.iter().find(|(q, _)| q == p).expect("compiled atom").1;
        Ok(m.eval(pt) == 0)
    });
    r.expect("infallible")
}

fn compile_atoms(f: &PropFormula, slots: &[String], field: PrimeField) -> Result<Vec<(Poly, ModPoly)>, GaloisError> {
    let mut out: Vec<(Poly, ModPoly)> = Vec::new();
    for a in f.atoms() {
        if out.iter().all(|(q, _)| q != a) {
            if let Some(v) = a.vars().iter().find(|v| !slots.contains(v)) {
                return Err(GaloisError::UnknownVariable(v.clone()));
            }
            out.push((a.clone(), ModPoly::compile(a, field, slots)?));
        }
    }
    Ok(out)
}

/// Points where every formula of `t` holds (`T′` for equations, the
/// elementary set for propositional formulas).
pub fn solution_set(t: &[PropFormula], space: &AffineSpace) -> Result<PointSet, GaloisError> {
    let mut set = space.full_set();
    for f in t {
        let compiled = compile_atoms(f, &space.vars, space.field)?;
        for k in set.indices().collect::<Vec<_>>() {
            if !eval_prop(f, &compiled, &space.point(k)) {
                set.0.set(k, false);
            }
        }
    }
    Ok(set)
}

/// Predicate formulas, with `∃`/`∀` expanded over the finite field.
pub fn solution_set_pred(t: &[PredFormula], space: &AffineSpace) -> Result<PointSet, GaloisError> {
    let mut set = space.full_set();
    let p = space.field.modulus();
    for f in t {
        let mut slots = space.vars.clone();
        slots.extend(f.prefix.iter().map(|(_, v)| v.clone()));
        let compiled = compile_atoms(&f.matrix, &slots, space.field)?;
        let mut buf = vec![0u64; slots.len()];
        for k in set.indices().collect::<Vec<_>>() {
            buf[..space.vars.len()].copy_from_slice(&space.point(k));
            if !eval_prefix(f, 0, space.vars.len(), p, &compiled, &mut buf) {
                set.0.set(k, false);
            }
        }
    }
    Ok(set)
}

fn eval_prefix(f: &PredFormula, depth: usize, base: usize, p: u64, compiled: &[(Poly, ModPoly)], buf: &mut [u64]) -> bool {
    let Some((q, _)) = f.prefix.get(depth) else {
        return eval_prop(&f.matrix, compiled, buf);
    };
    let slot = base + depth;
    let mut values = 0..p;
    match q {
        Quantifier::Exists => values.any(|a| {
            buf[slot] = a;
            eval_prefix(f, depth + 1, base, p, compiled, buf)
        }),
        Quantifier::Forall => values.all(|a| {
            buf[slot] = a;
            eval_prefix(f, depth + 1, base, p, compiled, buf)
        }),
    }
}

/// `A′`: the equations of the universe vanishing on all of `a`.
pub fn hold_set(a: &PointSet, universe: &BoundedUniverse) -> EqSet {
    let mut out = universe.empty_set();
    for k in 0..universe.size() {
        if a.is_subset(universe.zero_set(k)) {
            out.insert(k);
        }
    }
    out
}

/// `T′` for a set of equations of the universe.
pub fn eq_solution_set(t: &EqSet, universe: &BoundedUniverse) -> PointSet {
    let mut set = universe.space.full_set();
    for k in t.indices() {
        set.intersect_with(universe.zero_set(k));
    }
    set
}

/// `T″ = (T′)′` within the universe.
pub fn closure_eq(t: &EqSet, universe: &BoundedUniverse) -> EqSet {
    hold_set(&eq_solution_set(t, universe), universe)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetBasis {
    /// Family indices of the kept formulas, in scan order.
    pub kept: Vec<u64>,
    pub scanned: usize,
    /// The whole family was read, or the running set became empty; either way
    /// the kept formulas have the solution set of the entire family.
    pub complete: bool,
    pub solution: Vec<Vec<u64>>,
}

/// Greedy finite basis: a formula is kept iff it strictly shrinks the running
/// solution set. At most `scan_limit` formulas are read.
pub fn net_finite_basis<I>(family: I, space: &AffineSpace, scan_limit: usize) -> Result<NetBasis, GaloisError>
where
    I: IntoIterator<Item = Result<(u64, PredFormula), FormulaError>>,
{
    let mut running = space.full_set();
    let mut kept = Vec::new();
    let mut scanned = 0;
    let mut exhausted = true;
    let mut it = family.into_iter();
    loop {
        if running.is_empty() {
            break;
        }
        if scanned >= scan_limit {
            exhausted = false;
            break;
        }
        let Some(item) = it.next() else { break };
        let (i, f) = item?;
        scanned += 1;
        let mut next = running.clone();
        next.intersect_with(&solution_set_pred(std::slice::from_ref(&f), space)?);
        if next != running {
            kept.push(i);
            running = next;
        }
    }
    let complete = exhausted || running.is_empty();
    Ok(NetBasis {
        kept,
        scanned,
        complete,
        solution: running.points(space),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_poly, FamilyPresentation};
    use proptest::prelude::*;

    fn space(p: u64, vars: &[&str]) -> AffineSpace {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        AffineSpace::new(PrimeField::new(p).unwrap(), &vars).unwrap()
    }

    fn prop(s: &str) -> PropFormula {
        parse_formula(s).unwrap().matrix
    }

    #[test]
    fn solution_set_examples() {
        let f2 = space(2, &["x"]);
        assert_eq!(solution_set(&[prop("x^2 + x = 0")], &f2).unwrap().len(), 2);
        let f3 = space(3, &["x"]);
        assert_eq!(solution_set(&[prop("x != 0")], &f3).unwrap().points(&f3), vec![vec![1], vec![2]]);
        let s = space(3, &["x", "y"]);
        assert_eq!(solution_set(&[], &s).unwrap().len(), 9);
    }

    #[test]
    fn quantifiers_expand_over_the_field() {
        let s = space(5, &["x"]);
        // squares mod 5 are 0, 1, 4
        let f = parse_formula("exists y. y^2 = x").unwrap();
        let pts = solution_set_pred(&[f], &s).unwrap().points(&s);
        assert_eq!(pts, vec![vec![0], vec![1], vec![4]]);
        let g = parse_formula("forall y. x*y = 0").unwrap();
        assert_eq!(solution_set_pred(&[g], &s).unwrap().points(&s), vec![vec![0]]);
    }

    #[test]
    fn hold_set_examples() {
        let s = space(3, &["x"]);
        let u = BoundedUniverse::new(&s, 2).unwrap();
        assert_eq!(u.size(), 27);
        let mut origin = s.empty_set();
        origin.insert(0);
        let h = hold_set(&origin, &u);
        let idx = |t: &str| u.index_of(&parse_poly(t).unwrap()).unwrap().unwrap();
        assert!(h.contains(idx("x")));
        assert!(h.contains(idx("x^2")));
        assert!(!h.contains(idx("x - 1")));
        // brute-force oracle: f(0) = 0 iff the constant coefficient is 0
        assert_eq!(h.len(), 9);

        let s2 = space(2, &["x"]);
        let u2 = BoundedUniverse::new(&s2, 2).unwrap();
        let h = hold_set(&s2.full_set(), &u2);
        assert!(h.contains(u2.index_of(&parse_poly("x^2 + x").unwrap()).unwrap().unwrap()));
        assert!(h.contains(u2.index_of(&Poly::zero()).unwrap().unwrap()));
        assert_eq!(hold_set(&s2.empty_set(), &u2), u2.full_set());
    }

    #[test]
    fn closure_examples() {
        let s = space(3, &["x"]);
        let u = BoundedUniverse::new(&s, 2).unwrap();
        let mut t = u.empty_set();
        t.insert(u.index_of(&parse_poly("x").unwrap()).unwrap().unwrap());
        let c = closure_eq(&t, &u);
        assert!(c.contains(u.index_of(&parse_poly("x^2").unwrap()).unwrap().unwrap()));
        assert!(c.contains(u.index_of(&parse_poly("2*x^2 + x").unwrap()).unwrap().unwrap()));
        assert_eq!(closure_eq(&c, &u), c);
        let mut zero = u.empty_set();
        zero.insert(0);
        assert_eq!(closure_eq(&zero, &u), hold_set(&s.full_set(), &u));
    }

    #[test]
    fn universe_indexing_round_trips() {
        let s = space(3, &["x", "y"]);
        let u = BoundedUniverse::new(&s, 2).unwrap();
        for k in 0..u.size() {
            assert_eq!(u.index_of(&u.poly(k)).unwrap(), Some(k));
        }
        assert_eq!(u.index_of(&parse_poly("x^3").unwrap()).unwrap(), None);
        // reduction mod 3 before lookup
        assert_eq!(
            u.index_of(&parse_poly("4*x*y").unwrap()).unwrap(),
            u.index_of(&parse_poly("x*y").unwrap()).unwrap()
        );
    }

    #[test]
    fn caps() {
        let vars: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let f = PrimeField::new(101).unwrap();
        assert!(matches!(AffineSpace::new(f, &vars), Err(GaloisError::SpaceTooLarge { .. })));
        let s = space(5, &["x", "y"]);
        assert!(matches!(BoundedUniverse::new(&s, 3), Err(GaloisError::UniverseTooLarge { .. })));
    }

    #[test]
    fn net_basis_examples() {
        let s = space(5, &["x"]);
        let lines: Vec<String> = (0..5).map(|a| format!("x != {a}")).collect();
        let fam = FamilyPresentation::parse(&lines.join("\n")).unwrap();
        let b = net_finite_basis(fam.iter(), &s, 100).unwrap();
        assert_eq!(b.kept, vec![1, 2, 3, 4, 5]);
        assert!(b.solution.is_empty());
        assert!(b.complete);

        let fam = FamilyPresentation::parse("x = 1\nx = 1\nx^2 = 1").unwrap();
        assert_eq!(net_finite_basis(fam.iter(), &s, 100).unwrap().kept, vec![1]);

        let s7 = space(7, &["x"]);
        let fam = FamilyPresentation::parse("x = 0\nx^2 = 0\nx^3 = 0").unwrap();
        let b = net_finite_basis(fam.iter(), &s7, 100).unwrap();
        assert_eq!(b.kept, vec![1]);
        assert_eq!(b.solution, vec![vec![0]]);
    }

    #[test]
    fn net_basis_on_infinite_family() {
        // x != i for i = 1, 2, ...: over F_7 every residue gets excluded once
        // i reaches 7, and the scan stops there
        let s = space(7, &["x"]);
        let fam = FamilyPresentation::parse("@family i in 1..\nx != i").unwrap();
        let b = net_finite_basis(fam.iter(), &s, 1000).unwrap();
        assert_eq!(b.kept, (1..=7).collect::<Vec<_>>());
        assert_eq!(b.scanned, 7);
        assert!(b.complete);
        let fam = FamilyPresentation::parse("@family i in 1..\nx^2 != 7*i + 1").unwrap();
        let b = net_finite_basis(fam.iter(), &s, 50).unwrap();
        assert!(!b.complete);
        assert_eq!(b.kept, vec![1]);
        assert_eq!(b.solution, vec![vec![0], vec![2], vec![3], vec![4], vec![5]]);
    }

    #[allow(clippy::type_complexity)]
    fn random_case() -> impl Strategy<Value = (u64, usize, u32, Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>)> {
        (prop_oneof![Just(2u64), Just(3), Just(5)], 1usize..=2, 0u32..=2).prop_flat_map(|(p, n, d)| {
            let pts = (p as usize).pow(n as u32);
            let monos = if n == 1 { d as usize + 1 } else { (d as usize + 1) * (d as usize + 2) / 2 };
            let univ = (p as usize).pow(monos as u32);
            let sub = |m: usize| proptest::collection::vec(0..m, 0..6);
            (Just(p), Just(n), Just(d), sub(univ), sub(univ), sub(pts), sub(pts))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn galois_connection_laws((p, n, d, t, s_extra, a, b_extra) in random_case()) {
            let vars: Vec<&str> = ["x", "y"][..n].to_vec();
            let sp = space(p, &vars);
            let u = BoundedUniverse::new(&sp, d).unwrap();
            let mut t_set = u.empty_set();
            t.iter().for_each(|&k| t_set.insert(k));
            let mut s_set = t_set.clone();
            s_extra.iter().for_each(|&k| s_set.insert(k));
            let mut a_set = sp.empty_set();
            a.iter().for_each(|&k| a_set.insert(k));
            let mut b_set = a_set.clone();
            b_extra.iter().for_each(|&k| b_set.insert(k));

            prop_assert!(eq_solution_set(&s_set, &u).is_subset(&eq_solution_set(&t_set, &u)));
            prop_assert!(hold_set(&b_set, &u).is_subset(&hold_set(&a_set, &u)));
            prop_assert!(a_set.is_subset(&eq_solution_set(&hold_set(&a_set, &u), &u)));
            let c = closure_eq(&t_set, &u);
            prop_assert!(t_set.is_subset(&c));
            prop_assert_eq!(closure_eq(&c, &u), c.clone());
            prop_assert_eq!(eq_solution_set(&c, &u), eq_solution_set(&t_set, &u));
        }

        #[test]
        fn universe_zero_sets_match_direct_evaluation(p in prop_oneof![Just(2u64), Just(3)], k in 0usize..729) {
            let sp = space(p, &["x", "y"]);
            let u = BoundedUniverse::new(&sp, 2).unwrap();
            let k = k % u.size();
            let direct = solution_set(&[PropFormula::atom(u.poly(k))], &sp).unwrap();
            prop_assert_eq!(&direct, u.zero_set(k));
        }

        #[test]
        fn basis_has_same_solution_set(consts in proptest::collection::vec((0i64..5, 0i64..5, any::<bool>()), 1..8)) {
            let sp = space(5, &["x", "y"]);
            let lines: Vec<String> = consts
                .iter()
                .map(|(a, b, eq)| if *eq { format!("x*y - {a}*x = {b}") } else { format!("x + {a}*y != {b}") })
                .collect();
            let fam = FamilyPresentation::parse(&lines.join("\n")).unwrap();
            let basis = net_finite_basis(fam.iter(), &sp, 100).unwrap();
            let all: Vec<PredFormula> = fam.iter().map(|r| r.unwrap().1).collect();
            let kept: Vec<PredFormula> = basis.kept.iter().map(|&i| fam.instantiate(i).unwrap()).collect();
            prop_assert_eq!(
                solution_set_pred(&all, &sp).unwrap(),
                solution_set_pred(&kept, &sp).unwrap()
            );
        }
    }
}

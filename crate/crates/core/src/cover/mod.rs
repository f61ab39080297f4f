//! Pseudoaffine varieties and finite subcovers of affine space in dimension one
//! and two.
//!
//! The descent keeps a queue of reduced loci still to be covered: the first
//! dense piece leaves the hypersurface `∏N = 0`; a locus is shrunk by any piece
//! containing part of it, found by gcds rather than by factoring; curves that a
//! piece only covers up to finitely many points leave towers of points behind.

mod tower;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, Field, PrimeField, Rational, Value};
use crate::formula::{FormulaError, PropFormula, SignedLiteral};
use crate::poly::{gcd_bivariate, poly_eval, reduced_bivariate, ModPoly, Poly, PolyError, UPoly};

pub use tower::Tower;

/// The Mersenne prime 2³¹ − 1 used for sampled verification in the plane.
pub const SAMPLE_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error("only dimensions 1 and 2 are supported, got {0}")]
    UnsupportedDimension(usize),
    #[error("piece {index} uses variable `{var}` outside the ambient space")]
    OutsideAmbient { index: u64, var: String },
    #[error("unsupported instance at {region}: {reason}")]
    UnsupportedInstance { region: String, reason: String },
    #[error("sample space too large: {0}")]
    TooManyPoints(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `{p = 0 for p in pos} ∩ {q ≠ 0 for q in neg}` in the affine space with
/// coordinates `ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoaffineVariety {
    pub pos: Vec<Poly>,
    pub neg: Vec<Poly>,
    pub ambient: Vec<String>,
}

impl PseudoaffineVariety {
    pub fn whole_space(ambient: &[String]) -> Self {
        PseudoaffineVariety {
            pos: Vec::new(),
            neg: Vec::new(),
            ambient: ambient.to_vec(),
        }
    }

    pub fn from_literals(lits: &[SignedLiteral], ambient: &[String]) -> Self {
        let mut v = PseudoaffineVariety::whole_space(ambient);
        for l in lits {
            let list = if l.positive { &mut v.pos } else { &mut v.neg };
            if !list.contains(&l.equation.0) {
                list.push(l.equation.0.clone());
            }
        }
        v
    }

    /// Conjunction of the defining literals.
    pub fn to_formula(&self) -> PropFormula {
        let lits = self
            .pos
            .iter()
            .map(|p| SignedLiteral::pos(p.clone()))
            .chain(self.neg.iter().map(|q| SignedLiteral::neg(q.clone())));
        PropFormula::and(lits.map(|l| l.to_formula()).collect())
    }

    /// Product of the negated polynomials (1 when there are none).
    pub fn neg_product(&self) -> Poly {
        self.neg.iter().fold(Poly::one(), |acc, q| acc.mul(q))
    }

    /// Some negated polynomial is identically zero, or some positive one is a
    /// nonzero constant.
    pub fn is_trivially_empty(&self) -> bool {
        self.neg.iter().any(Poly::is_zero) || self.pos.iter().any(|p| p.is_constant() && !p.is_zero())
    }

    /// First variable of a polynomial of the piece outside the ambient list.
    pub fn stray_variable(&self) -> Option<String> {
        self.pos
            .iter()
            .chain(&self.neg)
            .flat_map(|p| p.vars())
            .find(|v| !self.ambient.contains(v))
            .cloned()
    }

    pub fn contains_rational(&self, point: &BTreeMap<String, Rational>) -> Result<bool, PolyError> {
        for p in &self.pos {
            if !p.eval_rational(point)?.is_zero() {
                return Ok(false);
            }
        }
        for q in &self.neg {
            if q.eval_rational(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_mod(&self, field: PrimeField, point: &BTreeMap<String, u64>) -> Result<bool, PolyError> {
        for p in &self.pos {
            if p.eval_mod(field, point)? != 0 {
                return Ok(false);
            }
        }
        for q in &self.neg {
            if q.eval_mod(field, point)? == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for PseudoaffineVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pos
            .iter()
            .map(|p| format!("{p} = 0"))
            .chain(self.neg.iter().map(|q| format!("{q} != 0")))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Reads a conjunction of literals (`True` is the whole space).
pub fn to_pseudoaffine(f: &PropFormula, ambient: &[String]) -> Result<PseudoaffineVariety, FormulaError> {
    let lits = f.as_literal_conjunction().ok_or_else(|| FormulaError::NotLiteralConjunction(f.to_string()))?;
    Ok(PseudoaffineVariety::from_literals(&lits, ambient))
}

/// A nonempty Zariski-open set: no equations, no identically vanishing
/// inequation.
pub fn is_dense_fullspace(v: &PseudoaffineVariety) -> bool {
    v.pos.iter().all(Poly::is_zero) && v.neg.iter().all(|q| !q.is_zero())
}

/// Membership of a point given as values in ℚ or in one prime field.
pub fn membership(v: &PseudoaffineVariety, point: &BTreeMap<String, Value>) -> Result<bool, PolyError> {
    let field = match point.values().next() {
        Some(Value::Fp(a)) => Field::Prime(PrimeField::new(a.modulus)?),
        _ => Field::Rational,
    };
    for name in &v.ambient {
        if !point.contains_key(name) {
            return Err(PolyError::MissingAssignment(name.clone()));
        }
    }
    for p in &v.pos {
        if !poly_eval(p, field, point)?.is_zero() {
            return Ok(false);
        }
    }
    for q in &v.neg {
        if poly_eval(q, field, point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A reduced locus still to be covered.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    FullSpace(usize),
    /// Roots of a squarefree univariate polynomial.
    RootLocus(UPoly),
    /// A reduced plane curve.
    Curve(Poly),
    /// Finitely many points of the plane.
    Points(Tower),
}

impl Region {
    /// Degree of the locus in its own dimension; `None` for the full space.
    pub fn degree(&self) -> Option<u64> {
        match self {
            Region::FullSpace(_) => None,
            Region::RootLocus(u) => Some(u.degree() as u64),
            Region::Curve(g) => Some(g.total_degree() as u64),
            Region::Points(t) => Some(t.point_count()),
        }
    }

    fn render(&self, vars: &[String]) -> String {
        match self {
            Region::FullSpace(n) => format!("A^{n}"),
            Region::RootLocus(u) => format!("roots({} = 0)", u.to_poly(&vars[0])),
            Region::Curve(g) => format!("curve({g} = 0)"),
            Region::Points(t) => t.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub region: String,
    pub candidate_index: u64,
    pub degree_before: Option<u64>,
    /// Degree of what is left of the region in its own dimension.
    pub degree_after: u64,
    /// Regions enqueued by this step.
    pub spawned: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubcoverStatus {
    Ok,
    NotCoveredWithin,
    VerificationFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub prime: u64,
    pub samples: u64,
    pub seed: u64,
    pub exhaustive: bool,
    pub indices: Vec<u64>,
    pub uncovered_count: u64,
    pub uncovered: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Verification {
    /// Symbolic recomputation of the complement (dimension one).
    Exact { covered: bool, remainder: String },
    Sampled(SampleReport),
}

impl Verification {
    pub fn passed(&self) -> bool {
        match self {
            Verification::Exact { covered, .. } => *covered,
            Verification::Sampled(s) => s.uncovered_count == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubcoverReport {
    pub status: SubcoverStatus,
    pub dim: usize,
    pub variables: Vec<String>,
    pub scan_limit: usize,
    pub scanned: usize,
    pub indices: Vec<u64>,
    pub trace: Vec<TraceStep>,
    pub verification: Option<Verification>,
    /// The region no scanned piece could shrink, when the descent fails.
    pub stuck_region: Option<String>,
    /// A rational point lying in none of the scanned pieces, if one was found.
    pub uncovered_point: Option<BTreeMap<String, String>>,
}

impl SubcoverReport {
    pub fn is_ok(&self) -> bool {
        self.status == SubcoverStatus::Ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubcoverOptions {
    pub scan_limit: usize,
    /// Sample count for verification in the plane.
    pub samples: u64,
    pub seed: u64,
}

impl Default for SubcoverOptions {
    fn default() -> Self {
        SubcoverOptions {
            scan_limit: 100,
            samples: 10_000,
            seed: 0,
        }
    }
}

/// Pulls pieces from the family on demand, never past the scan limit.
struct Scanner<I> {
    source: I,
    pieces: Vec<PseudoaffineVariety>,
    limit: usize,
    done: bool,
}

impl<I> Scanner<I>
where
    I: Iterator<Item = Result<PseudoaffineVariety, CoverError>>,
{
    /// Piece at 0-based position `k`.
    fn get(&mut self, k: usize, ambient: &[String]) -> Result<Option<&PseudoaffineVariety>, CoverError> {
        while self.pieces.len() <= k && !self.done {
            if self.pieces.len() >= self.limit {
                self.done = true;
                break;
            }
            match self.source.next() {
                None => self.done = true,
                Some(item) => {
                    let mut v = item?;
                    let index = self.pieces.len() as u64 + 1;
                    v.ambient = ambient.to_vec();
                    if let Some(var) = v.stray_variable() {
                        return Err(CoverError::OutsideAmbient { index, var });
                    }
                    self.pieces.push(v);
                }
            }
        }
        Ok(self.pieces.get(k))
    }
}

/// What a candidate piece does to a region: points covered (as a degree) and
/// the regions left over.
struct Discharge {
    progress: u64,
    left: Option<Region>,
    spawned: Vec<Region>,
}

fn upoly(p: &Poly, var: &str) -> Result<UPoly, PolyError> {
    UPoly::from_poly(p, var)
}

fn discharge(region: &Region, v: &PseudoaffineVariety, vars: &[String]) -> Result<Option<Discharge>, CoverError> {
    if v.is_trivially_empty() {
        return Ok(None);
    }
    let qprod = v.neg_product();
    match region {
        Region::FullSpace(_) => {
            if !is_dense_fullspace(v) {
                return Ok(None);
            }
            let left = if qprod.is_constant() {
                None
            } else if vars.len() == 1 {
                Some(Region::RootLocus(upoly(&qprod, &vars[0])?.squarefree()))
            } else {
                Some(Region::Curve(reduced_bivariate(&qprod)?))
            };
            Ok(Some(Discharge {
                progress: u64::MAX,
                left,
                spawned: Vec::new(),
            }))
        }
        Region::RootLocus(u) => {
            let x = &vars[0];
            let mut g = u.clone();
            for p in &v.pos {
                g = g.gcd(&upoly(p, x)?);
            }
            let d = g.gcd(&upoly(&qprod, x)?);
            let covered = g.div_exact(&d).expect("gcd divides");
            if covered.degree() == 0 {
                return Ok(None);
            }
            let rest = u.div_exact(&covered).expect("covered part divides").monic();
            Ok(Some(Discharge {
                progress: covered.degree() as u64,
                left: (rest.degree() > 0).then_some(Region::RootLocus(rest)),
                spawned: Vec::new(),
            }))
        }
        Region::Curve(g) => {
            let y = &vars[1];
            let mut g1 = g.clone();
            for p in &v.pos {
                g1 = gcd_bivariate(&g1, p, y)?;
                if g1.is_constant() {
                    return Ok(None);
                }
            }
            let d = gcd_bivariate(&g1, &qprod, y)?;
            let c = g1.div_exact(&d)?.ok_or(PolyError::InexactDivision)?;
            if c.is_constant() {
                return Ok(None);
            }
            let rest = g.div_exact(&c)?.ok_or(PolyError::InexactDivision)?.monic();
            let spawned = if qprod.is_constant() {
                Vec::new()
            } else {
                Tower::from_pair(&c, &qprod, &vars[0], y)
                    .map_err(|e| CoverError::UnsupportedInstance {
                        region: region.render(vars),
                        reason: e.to_string(),
                    })?
                    .into_iter()
                    .map(Region::Points)
                    .collect()
            };
            Ok(Some(Discharge {
                progress: c.total_degree() as u64,
                left: (!rest.is_constant()).then_some(Region::Curve(rest)),
                spawned,
            }))
        }
        Region::Points(t) => {
            let (covered, rest) = t.discharge(&v.pos, &qprod)?;
            if covered == 0 {
                return Ok(None);
            }
            let mut rest = rest.into_iter().map(Region::Points);
            let left = rest.next();
            Ok(Some(Discharge {
                progress: covered,
                left,
                spawned: rest.collect(),
            }))
        }
    }
}

fn check_dimension(ambient: &[String]) -> Result<(), CoverError> {
    match ambient.len() {
        1 | 2 => Ok(()),
        n => Err(CoverError::UnsupportedDimension(n)),
    }
}

/// Finite subcover extraction by Zariski descent. Indices are 1-based
/// positions in `family`; at most `opts.scan_limit` pieces are pulled.
///
/// A failed descent (`NotCoveredWithin`) certifies that the scanned pieces do
/// not cover the space over ℚ̄: any covered locus always admits progress.
pub fn extract_subcover<I>(family: I, ambient: &[String], opts: &SubcoverOptions) -> Result<SubcoverReport, CoverError>
where
    I: IntoIterator<Item = Result<PseudoaffineVariety, CoverError>>,
{
    check_dimension(ambient)?;
    let n = ambient.len();
    let mut scanner = Scanner {
        source: family.into_iter(),
        pieces: Vec::new(),
        limit: opts.scan_limit,
        done: false,
    };
    let mut used = BTreeSet::new();
    let mut trace = Vec::new();
    let mut queue = VecDeque::from([Region::FullSpace(n)]);
    let mut stuck = None;
    'regions: while let Some(region) = queue.pop_front() {
        let mut k = 0;
        while let Some(v) = scanner.get(k, ambient)? {
            if let Some(step) = discharge(&region, v, ambient)? {
                let index = k as u64 + 1;
                used.insert(index);
                let before = region.degree();
                let after = step.left.as_ref().and_then(Region::degree).unwrap_or(0);
                debug_assert!(step.progress > 0);
                debug_assert!(before.is_none_or(|b| after < b));
                let spawned: Vec<Region> = step.left.into_iter().chain(step.spawned).collect();
                trace.push(TraceStep {
                    region: region.render(ambient),
                    candidate_index: index,
                    degree_before: before,
                    degree_after: after,
                    spawned: spawned.iter().map(|r| r.render(ambient)).collect(),
                });
                queue.extend(spawned);
                continue 'regions;
            }
            k += 1;
        }
        stuck = Some(region);
        break;
    }
    let indices: Vec<u64> = used.into_iter().collect();
    let pieces = &scanner.pieces;
    let mut report = SubcoverReport {
        status: SubcoverStatus::Ok,
        dim: n,
        variables: ambient.to_vec(),
        scan_limit: opts.scan_limit,
        scanned: pieces.len(),
        indices,
        trace,
        verification: None,
        stuck_region: None,
        uncovered_point: None,
    };
    if let Some(region) = stuck {
        report.status = SubcoverStatus::NotCoveredWithin;
        report.stuck_region = Some(region.render(ambient));
        report.uncovered_point = find_uncovered_point(pieces, &region, ambient)?.map(|pt| {
            ambient
                .iter()
                .cloned()
                .zip(pt.iter().map(Rational::to_string))
                .collect()
        });
        return Ok(report);
    }
    let chosen: Vec<&PseudoaffineVariety> = report.indices.iter().map(|&i| &pieces[i as usize - 1]).collect();
    let verification = if n == 1 {
        let (covered, remainder) = verify_exact_line(&chosen, &ambient[0])?;
        Verification::Exact {
            covered,
            remainder: remainder.to_poly(&ambient[0]).to_string(),
        }
    } else {
        let owned: Vec<PseudoaffineVariety> = chosen.iter().map(|v| (*v).clone()).collect();
        let all: Vec<u64> = (1..=owned.len() as u64).collect();
        let mut s = verify_cover_sample(&owned, &all, ambient, SAMPLE_PRIME, opts.samples, opts.seed)?;
        s.indices = report.indices.clone();
        Verification::Sampled(s)
    };
    if !verification.passed() {
        report.status = SubcoverStatus::VerificationFailed;
    }
    report.verification = Some(verification);
    Ok(report)
}

/// Independent check that finitely many pieces cover the line over ℚ̄: the
/// complement of the cofinite pieces is `Z(gcd of their ∏N)`; each finite
/// piece then removes the roots it contains. Returns whether nothing is left
/// and the leftover polynomial (the zero polynomial when no piece is
/// cofinite).
pub fn verify_exact_line(pieces: &[&PseudoaffineVariety], x: &str) -> Result<(bool, UPoly), CoverError> {
    let mut u = UPoly::zero();
    for v in pieces.iter().filter(|v| is_dense_fullspace(v)) {
        u = u.gcd(&upoly(&v.neg_product(), x)?);
    }
    if u.is_zero() {
        return Ok((false, u));
    }
    u = u.squarefree();
    for v in pieces.iter().filter(|v| !is_dense_fullspace(v) && !v.is_trivially_empty()) {
        let mut g = u.clone();
        for p in &v.pos {
            g = g.gcd(&upoly(p, x)?);
        }
        let d = g.gcd(&upoly(&v.neg_product(), x)?);
        let covered = g.div_exact(&d).expect("gcd divides");
        u = u.div_exact(&covered).expect("covered part divides").monic();
    }
    Ok((u.degree() == 0, u))
}

/// A rational point in none of `pieces`: rational points of the stuck region
/// first, then the integer grid `[-5, 5]^n`.
fn find_uncovered_point(
    pieces: &[PseudoaffineVariety],
    region: &Region,
    ambient: &[String],
) -> Result<Option<Vec<Rational>>, CoverError> {
    let mut candidates: Vec<Vec<Rational>> = match region {
        Region::RootLocus(u) => u.rational_roots().into_iter().map(|r| vec![r]).collect(),
        Region::Points(t) => t.rational_points().into_iter().map(|(a, b)| vec![a, b]).collect(),
        _ => Vec::new(),
    };
    let grid: Vec<i64> = (0..=5).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }).collect();
    if ambient.len() == 1 {
        candidates.extend(grid.iter().map(|&a| vec![Rational::from_int(a)]));
    } else {
        for &a in &grid {
            for &b in &grid {
                candidates.push(vec![Rational::from_int(a), Rational::from_int(b)]);
            }
        }
    }
    for c in candidates {
        let pt: BTreeMap<String, Rational> = ambient.iter().cloned().zip(c.iter().cloned()).collect();
        let mut covered = false;
        for v in pieces {
            if v.contains_rational(&pt)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Evaluates the union of `family[j-1]`, `j ∈ indices`, at points of `F_p^n`:
/// every point when `samples ≥ p^n`, otherwise `samples` uniform points drawn
/// from a ChaCha8 stream seeded with `seed`.
pub fn verify_cover_sample(
    family: &[PseudoaffineVariety],
    indices: &[u64],
    ambient: &[String],
    p: u64,
    samples: u64,
    seed: u64,
) -> Result<SampleReport, CoverError> {
    let field = PrimeField::new(p)?;
    let n = ambient.len() as u32;
    let space = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    let exhaustive = (samples as u128) >= space;
    if exhaustive && space > 10_000_000 {
        return Err(CoverError::TooManyPoints(format!("{p}^{n}")));
    }
    let mut compiled = Vec::new();
    for &j in indices {
        let v = family
            .get((j as usize).wrapping_sub(1))
            .ok_or(FormulaError::IndexOutOfRange { index: j })?;
        let pos = v
            .pos
            .iter()
            .map(|f| ModPoly::compile(f, field, ambient))
            .collect::<Result<Vec<_>, _>>()?;
        let neg = v
            .neg
            .iter()
            .map(|f| ModPoly::compile(f, field, ambient))
            .collect::<Result<Vec<_>, _>>()?;
        compiled.push((pos, neg));
    }
    let covered = |pt: &[u64]| {
        compiled
            .iter()
            .any(|(pos, neg)| pos.iter().all(|f| f.eval(pt) == 0) && neg.iter().all(|f| f.eval(pt) != 0))
    };
    let mut uncovered = Vec::new();
    let mut checked = 0u64;
    let mut pt = vec![0u64; n as usize];
    if exhaustive {
        let total = space as u64;
        for mut k in 0..total {
            for c in pt.iter_mut().rev() {
                *c = k % p;
                k /= p;
            }
            if !covered(&pt) {
                uncovered.push(pt.clone());
            }
            checked += 1;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            for c in pt.iter_mut() {
                *c = rng.gen_range(0..p);
            }
            if !covered(&pt) {
                uncovered.push(pt.clone());
            }
            checked += 1;
        }
    }
    Ok(SampleReport {
        prime: p,
        samples: checked,
        seed,
        exhaustive,
        indices: indices.to_vec(),
        uncovered_count: uncovered.len() as u64,
        uncovered,
    })
}

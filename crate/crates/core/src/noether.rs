//! Executable versions of the three noetherianity questions: witnesses that a
//! valid infinite implication has no finite sub-implication (over ℚ, and over
//! ℝ for the family `∃y i(x² + y²) = 1`), and the positive pipelines that find
//! a finite premise set over algebraically closed fields.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::arith::Rational;
use crate::cover::{extract_subcover, CoverError, SubcoverOptions, SubcoverReport, SubcoverStatus};
use crate::formula::{implication_to_cover, FamilyPresentation, FormulaError, PieceSource, PredFormula, PropFormula};
use crate::qe::{decide_sentence_acf, eliminate_all, QeError, QeOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoetherError {
    #[error("index {0} is not a positive integer in range")]
    BadIndex(u64),
    #[error("value {0} is listed twice")]
    DuplicateValue(String),
    #[error("{0} free variables; at most 2 are supported")]
    TooManyVariables(usize),
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PremiseResult {
    pub index: u64,
    pub formula: String,
    /// Quantifier-free equivalent over algebraically closed fields.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eliminated: Option<String>,
    /// Whether the premise holds at the witness point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub check: String,
    pub status: String,
    pub indices: Vec<u64>,
    pub witness: BTreeMap<String, String>,
    pub premise_results: Vec<PremiseResult>,
    pub notes: Vec<String>,
    /// Truth of `∀X (⋀_{j∈J} f_j → g)` decided independently by elimination.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentence_check: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcover: Option<SubcoverReport>,
}

impl WitnessReport {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

fn report(check: &str) -> WitnessReport {
    WitnessReport {
        check: check.to_string(),
        status: "ok".into(),
        indices: Vec::new(),
        witness: BTreeMap::new(),
        premise_results: Vec::new(),
        notes: Vec::new(),
        sentence_check: None,
        subcover: None,
    }
}

/// A rational outside `{a_j : j ∈ J}`: `max + 1`, or `1` for empty `J`.
pub fn lognet_witness<'a>(chosen: impl IntoIterator<Item = &'a Rational>) -> Rational {
    chosen
        .into_iter()
        .max()
        .map_or_else(Rational::one, |m| m + &Rational::one())
}

/// Refutes the finite implication `⋀_{j∈J} ¬(x = a_j) ⇒ 1 = 0` by a point
/// where every listed premise holds. `indices` are 1-based into `values`.
pub fn lognet_refute_infinite(values: &[Rational], indices: &[u64]) -> Result<WitnessReport, NoetherError> {
    let mut seen = BTreeSet::new();
    for a in values {
        if !seen.insert(a) {
            return Err(NoetherError::DuplicateValue(a.to_string()));
        }
    }
    let j: BTreeSet<u64> = indices.iter().copied().collect();
    for &i in &j {
        if i == 0 || i as usize > values.len() {
            return Err(NoetherError::BadIndex(i));
        }
    }
    let chosen: Vec<&Rational> = j.iter().map(|&i| &values[i as usize - 1]).collect();
    let x = lognet_witness(chosen.iter().copied());
    let mut r = report("lognet");
    r.indices = j.iter().copied().collect();
    r.witness.insert("x".into(), x.to_string());
    let mut all = true;
    for (&i, a) in j.iter().zip(&chosen) {
        let holds = &x != *a;
        all &= holds;
        r.premise_results.push(PremiseResult {
            index: i,
            formula: format!("x != {a}"),
            eliminated: None,
            holds: Some(holds),
        });
    }
    if !all {
        r.status = "verification_failed".into();
    }
    r.notes.push("the goal 1 = 0 fails at every point, so the finite implication fails at the witness".into());
    r.notes.push("the implication over all a in Q holds vacuously: no rational differs from every rational".into());
    Ok(r)
}

/// `∃y ∈ ℝ: i(x² + y²) = 1`, i.e. `1/i − x² ≥ 0`.
pub fn dennet_r_premise_holds(i: u64, x: &Rational) -> Result<bool, NoetherError> {
    if i == 0 {
        return Err(NoetherError::BadIndex(i));
    }
    // 1/i - (n/d)^2 >= 0  <=>  d^2 >= i n^2
    let n = x.numer();
    let d = x.denom();
    Ok(d * d >= num_bigint::BigInt::from(i) * n * n)
}

/// `1/(max J + 1)`, or `1` for empty `J`.
pub fn dennet_r_witness_value(j: &[u64]) -> Rational {
    match j.iter().max() {
        None => Rational::one(),
        Some(&m) => (Rational::from_int(m) + Rational::one()).inv().expect("positive"),
    }
}

/// Smallest index whose premise fails at `x` (`None` for `x = 0`): every
/// `i > 1/x²`.
pub fn dennet_r_first_failing_index(x: &Rational) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let bound = x.pow(2).inv().expect("nonzero");
    // floor(1/x²) + 1
    let floor = bound.numer() / bound.denom();
    u64::try_from(floor + 1).ok()
}

/// The premise `∃y i(x² + y²) = 1` as a formula.
pub fn dennet_r_premise(i: u64) -> PredFormula {
    crate::formula::parse_formula(&format!("exists y. {i}*(x^2 + y^2) = 1")).expect("well-formed template")
}

/// Canonical rendering of [`dennet_r_premise`] without going through the parser.
pub fn dennet_r_premise_text(i: u64) -> String {
    if i == 1 {
        "exists y. x^2 + y^2 - 1 = 0".into()
    } else {
        format!("exists y. {i}*x^2 + {i}*y^2 - 1 = 0")
    }
}

/// Witness refuting `⋀_{i∈J} ∃y(i(x² + y²) = 1) ⇒ x = 0` over ℝ.
pub fn dennet_r_witness(j: &[u64]) -> Result<WitnessReport, NoetherError> {
    if let Some(&bad) = j.iter().find(|&&i| i == 0) {
        return Err(NoetherError::BadIndex(bad));
    }
    let set: BTreeSet<u64> = j.iter().copied().collect();
    let x = dennet_r_witness_value(j);
    let mut r = report("dennet-r");
    r.indices = set.iter().copied().collect();
    r.witness.insert("x".into(), x.to_string());
    let mut all = !x.is_zero();
    for &i in &set {
        let holds = dennet_r_premise_holds(i, &x)?;
        all &= holds;
        r.premise_results.push(PremiseResult {
            index: i,
            formula: dennet_r_premise_text(i),
            eliminated: None,
            holds: Some(holds),
        });
    }
    if !all {
        r.status = "verification_failed".into();
    }
    r.notes.push("x != 0, so the goal x = 0 fails while every premise in J holds".into());
    if let Some(k) = dennet_r_first_failing_index(&x) {
        r.notes.push(format!(
            "the premise with index {k} fails at x; all premises together force x^2 <= 1/i for every i, hence x = 0"
        ));
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DennetOptions {
    /// Cap on premises instantiated and on cover pieces scanned.
    pub scan_limit: usize,
    pub samples: u64,
    pub seed: u64,
    pub qe: QeOptions,
}

impl Default for DennetOptions {
    fn default() -> Self {
        DennetOptions {
            scan_limit: 100,
            samples: 10_000,
            seed: 0,
            qe: QeOptions::default(),
        }
    }
}

fn ambient_of<'a>(formulas: impl IntoIterator<Item = &'a PropFormula>) -> Result<Vec<String>, NoetherError> {
    let vars: BTreeSet<String> = formulas.into_iter().flat_map(PropFormula::free_vars).collect();
    match vars.len() {
        0 => Ok(vec!["x".to_string()]),
        1 | 2 => Ok(vars.into_iter().collect()),
        n => Err(NoetherError::TooManyVariables(n)),
    }
}

/// Shared tail of both pipelines: cover, subcover, premise indices.
fn cover_pipeline(
    mut r: WitnessReport,
    premises: &[(u64, PredFormula, PropFormula)],
    original_goal: &PredFormula,
    goal: &PropFormula,
    opts: &DennetOptions,
) -> Result<WitnessReport, NoetherError> {
    let ambient = ambient_of(premises.iter().map(|(_, _, f)| f).chain([goal]))?;
    let stream = premises.iter().map(|(i, _, f)| Ok((*i, f.clone())));
    let sources = RefCell::new(Vec::new());
    let pieces = implication_to_cover(stream, goal, &ambient, opts.qe.budget)?.map(|piece| {
        let piece = piece?;
        sources.borrow_mut().push(piece.source);
        Ok(piece.variety)
    });
    let sub = extract_subcover(
        pieces,
        &ambient,
        &SubcoverOptions {
            scan_limit: opts.scan_limit,
            samples: opts.samples,
            seed: opts.seed,
        },
    )?;
    let sources = sources.into_inner();
    let chosen: BTreeSet<u64> = sub
        .indices
        .iter()
        .filter_map(|&k| match sources[k as usize - 1] {
            PieceSource::Premise { index, .. } => Some(index),
            PieceSource::Goal { .. } => None,
        })
        .collect();
    r.indices = chosen.iter().copied().collect();
    match sub.status {
        SubcoverStatus::Ok => {
            let used: Vec<PredFormula> = premises
                .iter()
                .filter(|(i, _, _)| chosen.contains(i))
                .map(|(_, f, _)| f.clone())
                .collect();
            let sentence = PredFormula::implication(&used, original_goal).universal_closure();
            r.sentence_check = match decide_sentence_acf(&sentence, &opts.qe) {
                Ok(b) => Some(b),
                Err(QeError::DepthExceeded { .. }) => {
                    r.notes.push("independent sentence check skipped: quantifier prefix too deep".into());
                    None
                }
                Err(e) => return Err(e.into()),
            };
            if r.sentence_check == Some(false) {
                r.status = "verification_failed".into();
            }
        }
        SubcoverStatus::NotCoveredWithin => {
            r.status = "not_covered_within".into();
            if let Some(pt) = &sub.uncovered_point {
                r.witness = pt.clone();
                r.notes.push(
                    "the witness satisfies every scanned premise and violates the goal".into(),
                );
            }
        }
        SubcoverStatus::VerificationFailed => r.status = "verification_failed".into(),
    }
    r.subcover = Some(sub);
    Ok(r)
}

fn take_premises(
    premises: &FamilyPresentation,
    scan_limit: usize,
    r: &mut WitnessReport,
) -> Result<Vec<(u64, PredFormula)>, NoetherError> {
    let mut out = Vec::new();
    for item in premises.iter().take(scan_limit) {
        out.push(item?);
    }
    if premises.last_index().is_none_or(|l| l >= premises.first_index() + out.len() as u64) {
        r.notes.push(format!("only the first {} premises were examined", out.len()));
    }
    Ok(out)
}

/// Finite `J` with `⋀_{i∈J} f_i ⇒ g` over algebraically closed fields of
/// characteristic 0: eliminate quantifiers, turn the implication into a
/// cover, extract a finite subcover, and read off the premise indices.
pub fn dennet_acf_check(
    premises: &FamilyPresentation,
    goal: &PredFormula,
    opts: &DennetOptions,
) -> Result<WitnessReport, NoetherError> {
    let mut r = report("dennet-acf");
    let raw = take_premises(premises, opts.scan_limit, &mut r)?;
    let mut eliminated = Vec::new();
    for (i, f) in raw {
        let e = eliminate_all(&f, &opts.qe)?;
        r.premise_results.push(PremiseResult {
            index: i,
            formula: f.to_string(),
            eliminated: Some(e.to_string()),
            holds: None,
        });
        eliminated.push((i, f, e));
    }
    let goal_qf = eliminate_all(goal, &opts.qe)?;
    r.notes.push(format!("goal eliminates to {goal_qf}"));
    if !eliminated.is_empty() && eliminated.iter().all(|(_, _, e)| *e == PropFormula::True) {
        r.notes.push("every examined premise eliminates to true".into());
    }
    cover_pipeline(r, &eliminated, goal, &goal_qf, opts)
}

/// The same pipeline for quantifier-free premises and goal.
pub fn dennet0_check(
    premises: &FamilyPresentation,
    goal: &PropFormula,
    opts: &DennetOptions,
) -> Result<WitnessReport, NoetherError> {
    let mut r = report("dennet0");
    let raw = take_premises(premises, opts.scan_limit, &mut r)?;
    let mut props = Vec::new();
    for (i, f) in raw {
        let m = f.as_prop()?.clone();
        r.premise_results.push(PremiseResult {
            index: i,
            formula: f.to_string(),
            eliminated: None,
            holds: None,
        });
        props.push((i, f, m));
    }
    let goal_pred = PredFormula::quantifier_free(goal.clone());
    cover_pipeline(r, &props, &goal_pred, goal, opts)
}

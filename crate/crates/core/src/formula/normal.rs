//! Negation, conjunctive and disjunctive normal forms by plain distribution.

use super::{FormulaError, PropFormula, SignedLiteral};

/// Default cap on literal occurrences produced while distributing.
pub const DEFAULT_NODE_BUDGET: usize = 100_000;

/// Pushes negations down to atoms.
pub fn to_nnf(f: &PropFormula) -> PropFormula {
    nnf(f, false)
}

fn nnf(f: &PropFormula, negate: bool) -> PropFormula {
    match (f, negate) {
        (PropFormula::True, false) | (PropFormula::False, true) => PropFormula::True,
        (PropFormula::True, true) | (PropFormula::False, false) => PropFormula::False,
        (PropFormula::Atom(_), false) => f.clone(),
        (PropFormula::Atom(_), true) => PropFormula::not(f.clone()),
        (PropFormula::Not(g), _) => nnf(g, !negate),
        (PropFormula::And(gs), false) | (PropFormula::Or(gs), true) => {
            PropFormula::and(gs.iter().map(|g| nnf(g, negate)).collect())
        }
        (PropFormula::And(gs), true) | (PropFormula::Or(gs), false) => {
            PropFormula::or(gs.iter().map(|g| nnf(g, negate)).collect())
        }
    }
}

type Clauses = Vec<Vec<SignedLiteral>>;

/// Clauses of an equivalent CNF: the formula is the conjunction of the
/// disjunctions of each inner list. `[]` is true, `[[]]` is false.
pub fn cnf_clauses(f: &PropFormula, budget: usize) -> Result<Clauses, FormulaError> {
    distribute(&to_nnf(f), true, budget)
}

/// Terms of an equivalent DNF: the formula is the disjunction of the
/// conjunctions of each inner list. `[]` is false, `[[]]` is true.
pub fn dnf_terms(f: &PropFormula, budget: usize) -> Result<Clauses, FormulaError> {
    distribute(&to_nnf(f), false, budget)
}

/// `cnf = true` builds clauses (outer ∧), otherwise terms (outer ∨). `And` is
/// the "outer" connective for CNF and the "inner" one for DNF.
fn distribute(f: &PropFormula, cnf: bool, budget: usize) -> Result<Clauses, FormulaError> {
    let outer_unit: Clauses = Vec::new();
    let inner_unit: Clauses = vec![Vec::new()];
    match f {
        PropFormula::True => Ok(if cnf { outer_unit } else { inner_unit }),
        PropFormula::False => Ok(if cnf { inner_unit } else { outer_unit }),
        PropFormula::Atom(e) => Ok(vec![vec![SignedLiteral {
            positive: true,
            equation: e.clone(),
        }]]),
        PropFormula::Not(g) => match g.as_ref() {
            PropFormula::Atom(e) => Ok(vec![vec![SignedLiteral {
                positive: false,
                equation: e.clone(),
            }]]),
            _ => unreachable!("input is in negation normal form"),
        },
        PropFormula::And(gs) | PropFormula::Or(gs) => {
            let is_outer = matches!(f, PropFormula::And(_)) == cnf;
            if is_outer {
                let mut out = Vec::new();
                for g in gs {
                    for c in distribute(g, cnf, budget)? {
                        if !out.contains(&c) {
                            out.push(c);
                        }
                    }
                    check_budget(&out, budget)?;
                }
                Ok(out)
            } else {
                let mut acc: Clauses = vec![Vec::new()];
                for g in gs {
                    let part = distribute(g, cnf, budget)?;
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &part {
                            let mut c = a.clone();
                            for lit in b {
                                if !c.contains(lit) {
                                    c.push(lit.clone());
                                }
                            }
                            if !next.contains(&c) {
                                next.push(c);
                            }
                        }
                        check_budget(&next, budget)?;
                    }
                    acc = next;
                }
                Ok(acc)
            }
        }
    }
}

fn check_budget(c: &Clauses, budget: usize) -> Result<(), FormulaError> {
    let n: usize = c.iter().map(|k| k.len() + 1).sum();
    if n > budget {
        Err(FormulaError::SizeBudgetExceeded { limit: budget })
    } else {
        Ok(())
    }
}

fn assemble(c: Clauses, cnf: bool) -> PropFormula {
    let inner = |lits: Vec<SignedLiteral>| {
        let parts = lits.iter().map(SignedLiteral::to_formula).collect();
        if cnf {
            PropFormula::or(parts)
        } else {
            PropFormula::and(parts)
        }
    };
    let parts = c.into_iter().map(inner).collect();
    if cnf {
        PropFormula::and(parts)
    } else {
        PropFormula::or(parts)
    }
}

pub fn to_cnf(f: &PropFormula) -> Result<PropFormula, FormulaError> {
    to_cnf_with_budget(f, DEFAULT_NODE_BUDGET)
}

pub fn to_cnf_with_budget(f: &PropFormula, budget: usize) -> Result<PropFormula, FormulaError> {
    Ok(assemble(cnf_clauses(f, budget)?, true))
}

pub fn to_dnf(f: &PropFormula) -> Result<PropFormula, FormulaError> {
    to_dnf_with_budget(f, DEFAULT_NODE_BUDGET)
}

pub fn to_dnf_with_budget(f: &PropFormula, budget: usize) -> Result<PropFormula, FormulaError> {
    Ok(assemble(dnf_terms(f, budget)?, false))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::PrimeField;
    use crate::formula::parse_formula;
    use crate::poly::Poly;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn prop(s: &str) -> PropFormula {
        parse_formula(s).unwrap().matrix
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(to_nnf(&prop("!(x = 0 & y = 0)")), prop("!(x = 0) | !(y = 0)"));
        assert_eq!(to_nnf(&prop("!!(x = 0)")), prop("x = 0"));
        assert_eq!(to_nnf(&prop("x = 0")), prop("x = 0"));
        assert_eq!(to_nnf(&prop("!true")), PropFormula::False);
    }

    #[test]
    fn cnf_examples() {
        assert_eq!(
            to_cnf(&prop("x = 0 | (y = 0 & x + y = 0)")).unwrap(),
            prop("(x = 0 | y = 0) & (x = 0 | x + y = 0)")
        );
        let lits = prop("x = 0 & !(y = 1)");
        assert_eq!(to_cnf(&lits).unwrap(), lits);
        assert_eq!(to_dnf(&lits).unwrap(), lits);
        let f = prop("(x = 0 & y = 0) | (x = 1 & y = 1)");
        match to_cnf(&f).unwrap() {
            PropFormula::And(cs) => assert_eq!(cs.len(), 4),
            other => panic!("not a CNF: {other}"),
        }
    }

    #[test]
    fn constants_in_normal_forms() {
        assert_eq!(to_cnf(&PropFormula::True).unwrap(), PropFormula::True);
        assert_eq!(to_cnf(&PropFormula::False).unwrap(), PropFormula::False);
        assert_eq!(to_dnf(&prop("x = 0 & false")).unwrap(), PropFormula::False);
        assert_eq!(dnf_terms(&PropFormula::True, 10).unwrap(), vec![Vec::new()]);
    }

    #[test]
    fn budget_is_enforced() {
        // (a1 & b1) | ... | (a8 & b8) has 2^8 CNF clauses
        let text: Vec<String> = (1..=8).map(|k| format!("(x = {k} & y = {k})")).collect();
        let f = prop(&text.join(" | "));
        assert_eq!(
            to_cnf_with_budget(&f, 500),
            Err(FormulaError::SizeBudgetExceeded { limit: 500 })
        );
        assert!(to_cnf(&f).is_ok());
    }

    fn atom_strategy() -> impl Strategy<Value = PropFormula> {
        let vars = vec!["x".to_string(), "y".to_string()];
        proptest::collection::vec(((0u32..3, 0u32..2), -2i64..3), 1..3).prop_map(move |terms| {
            PropFormula::atom(Poly::from_terms(
                &vars,
                terms.into_iter().map(|((a, b), c)| (vec![a, b], crate::arith::Rational::from_int(c))),
            ))
        })
    }

    pub(crate) fn formula_strategy() -> impl Strategy<Value = PropFormula> {
        let leaf = prop_oneof![
            8 => atom_strategy(),
            1 => Just(PropFormula::True),
            1 => Just(PropFormula::False),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(PropFormula::not),
                proptest::collection::vec(inner.clone(), 1..4).prop_map(PropFormula::and),
                proptest::collection::vec(inner, 1..4).prop_map(PropFormula::or),
            ]
        })
    }

    fn agree_everywhere(a: &PropFormula, b: &PropFormula, p: u64) -> bool {
        let field = PrimeField::new(p).unwrap();
        for u in 0..p {
            for v in 0..p {
                let pt: BTreeMap<String, u64> = [("x".into(), u), ("y".into(), v)].into();
                if a.eval_mod(field, &pt).unwrap() != b.eval_mod(field, &pt).unwrap() {
                    return false;
                }
            }
        }
        true
    }

    proptest! {
        #[test]
        fn normal_forms_preserve_semantics(f in formula_strategy()) {
            let nnf = to_nnf(&f);
            let cnf = to_cnf(&f).unwrap();
            let dnf = to_dnf(&f).unwrap();
            for p in [3, 5] {
                prop_assert!(agree_everywhere(&f, &nnf, p));
                prop_assert!(agree_everywhere(&f, &cnf, p));
                prop_assert!(agree_everywhere(&f, &dnf, p));
            }
        }

        #[test]
        fn print_parse_round_trip(f in formula_strategy()) {
            let text = f.to_string();
            let back = parse_formula(&text).unwrap();
            prop_assert!(back.is_quantifier_free());
            prop_assert_eq!(back.matrix, f);
        }

        #[test]
        fn poly_print_parse_round_trip(f in atom_strategy()) {
            if let PropFormula::Atom(e) = f {
                let back: Poly = e.0.to_string().parse().unwrap();
                prop_assert_eq!(back, e.0);
            }
        }
    }
}

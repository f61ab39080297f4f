//! Turning `⋀ᵢ fᵢ ⇒ g` into a cover: the implication holds at a point iff the
//! point lies in some disjunct of `⋁ᵢ ¬fᵢ ∨ g`, and with the premises in CNF and
//! the goal in DNF each disjunct is a pseudoaffine variety.

use serde::Serialize;

use super::normal::{cnf_clauses, dnf_terms};
use super::{FormulaError, PropFormula, SignedLiteral};
use crate::cover::PseudoaffineVariety;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceSource {
    /// The `disjunct`-th term (from 1) of the goal's DNF.
    Goal { disjunct: usize },
    /// Negation of the `clause`-th clause (from 1) of premise `index`.
    Premise { index: u64, clause: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverPiece {
    pub source: PieceSource,
    pub variety: PseudoaffineVariety,
}

/// Lazily yields the goal pieces first, then the pieces of each premise in
/// index order.
pub fn implication_to_cover<'a, I>(
    premises: I,
    goal: &PropFormula,
    ambient: &'a [String],
    budget: usize,
) -> Result<impl Iterator<Item = Result<CoverPiece, FormulaError>> + 'a, FormulaError>
where
    I: IntoIterator<Item = Result<(u64, PropFormula), FormulaError>> + 'a,
{
    let goal_pieces: Vec<Result<CoverPiece, FormulaError>> = dnf_terms(goal, budget)?
        .into_iter()
        .enumerate()
        .map(|(k, term)| {
            Ok(CoverPiece {
                source: PieceSource::Goal { disjunct: k + 1 },
                variety: PseudoaffineVariety::from_literals(&term, ambient),
            })
        })
        .collect();
    let premise_pieces = premises.into_iter().flat_map(move |item| {
        let pieces: Vec<Result<CoverPiece, FormulaError>> = match item {
            Err(e) => vec![Err(e)],
            Ok((index, f)) => match cnf_clauses(&f, budget) {
                Err(e) => vec![Err(e)],
                Ok(clauses) => clauses
                    .into_iter()
                    .enumerate()
                    .map(|(k, clause)| {
                        let negated: Vec<SignedLiteral> = clause.iter().map(SignedLiteral::negated).collect();
                        Ok(CoverPiece {
                            source: PieceSource::Premise { index, clause: k + 1 },
                            variety: PseudoaffineVariety::from_literals(&negated, ambient),
                        })
                    })
                    .collect(),
            },
        };
        pieces
    });
    Ok(goal_pieces.into_iter().chain(premise_pieces))
}

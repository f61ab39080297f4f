//! Countable formula families: explicit lists or integer-indexed templates,
//! instantiated on demand.

use super::parse::{parse_formula, parse_formula_with, ParseOptions};
use super::{FormulaError, PredFormula};
use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyPresentation {
    /// Finite list, indexed from 1.
    Explicit(Vec<PredFormula>),
    /// `template` with the integer parameter `param` ranging over
    /// `start..=last` (`last = None` for an infinite family).
    Template {
        param: String,
        template: String,
        start: u64,
        last: Option<u64>,
    },
}

impl FamilyPresentation {
    /// Template family; validates that the text parses at the first index.
    pub fn template(param: &str, template: &str, start: u64, last: Option<u64>) -> Result<Self, FormulaError> {
        let fam = FamilyPresentation::Template {
            param: param.to_string(),
            template: template.to_string(),
            start,
            last,
        };
        if last.is_none_or(|l| l >= start) {
            fam.instantiate(start)?;
        }
        Ok(fam)
    }

    /// Parses a family file: either a header `@family i in a..` (also `a..b`
    /// exclusive or `a..=b` inclusive) followed by one template formula, or
    /// plain formulas one per line. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, FormulaError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let Some(&(_, first)) = lines.first() else {
            return Ok(FamilyPresentation::Explicit(Vec::new()));
        };
        if let Some(header) = first.strip_prefix("@family") {
            let (param, start, last) = parse_header(header)?;
            if lines.len() != 2 {
                return Err(FormulaError::Syntax {
                    pos: 0,
                    msg: "a template family has exactly one formula after its header".into(),
                });
            }
            return FamilyPresentation::template(&param, lines[1].1, start, last);
        }
        let formulas = lines
            .iter()
            .map(|(n, l)| {
                parse_formula(l).map_err(|e| match e {
                    FormulaError::Syntax { pos, msg } => FormulaError::Syntax {
                        pos,
                        msg: format!("line {}: {msg}", n + 1),
                    },
                    other => other,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(FamilyPresentation::Explicit(formulas))
    }

    pub fn first_index(&self) -> u64 {
        match self {
            FamilyPresentation::Explicit(_) => 1,
            FamilyPresentation::Template { start, .. } => *start,
        }
    }

    /// Last valid index, `None` when infinite.
    pub fn last_index(&self) -> Option<u64> {
        match self {
            FamilyPresentation::Explicit(v) => Some(v.len() as u64),
            FamilyPresentation::Template { last, .. } => *last,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.last_index().is_some()
    }

    pub fn contains_index(&self, i: u64) -> bool {
        i >= self.first_index() && self.last_index().is_none_or(|l| i <= l)
    }

    pub fn instantiate(&self, i: u64) -> Result<PredFormula, FormulaError> {
        if !self.contains_index(i) {
            return Err(FormulaError::IndexOutOfRange { index: i });
        }
        match self {
            FamilyPresentation::Explicit(v) => Ok(v[(i - 1) as usize].clone()),
            FamilyPresentation::Template { param, template, .. } => {
                let mut opts = ParseOptions::default();
                opts.params.insert(param.clone(), Rational::from_int(i));
                parse_formula_with(template, &opts)
            }
        }
    }

    /// Lazy stream of `(index, instance)` in index order.
    pub fn iter(&self) -> impl Iterator<Item = Result<(u64, PredFormula), FormulaError>> + '_ {
        let start = self.first_index();
        let last = self.last_index();
        (start..)
            .take_while(move |&i| last.is_none_or(|l| i <= l))
            .map(move |i| self.instantiate(i).map(|f| (i, f)))
    }
}

fn parse_header(header: &str) -> Result<(String, u64, Option<u64>), FormulaError> {
    let bad = || FormulaError::Syntax {
        pos: 0,
        msg: format!("malformed family header `@family{header}`"),
    };
    let mut words = header.split_whitespace();
    let param = words.next().ok_or_else(bad)?;
    if words.next() != Some("in") {
        return Err(bad());
    }
    let range = words.next().ok_or_else(bad)?;
    if words.next().is_some() {
        return Err(bad());
    }
    if !param.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        || !param.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
    {
        return Err(bad());
    }
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let start: u64 = a.parse().map_err(|_| bad())?;
    let last = if b.is_empty() {
        None
    } else if let Some(b) = b.strip_prefix('=') {
        Some(b.parse::<u64>().map_err(|_| bad())?)
    } else {
        let end: u64 = b.parse().map_err(|_| bad())?;
        Some(end.checked_sub(1).ok_or_else(bad)?)
    };
    Ok((param.to_string(), start, last))
}

/// Instance `i` of a family.
pub fn family_instantiate(fam: &FamilyPresentation, i: u64) -> Result<PredFormula, FormulaError> {
    fam.instantiate(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn circle_family_template() {
        let fam = FamilyPresentation::parse("@family i in 1..\nexists y. i*(x^2 + y^2) = 1\n").unwrap();
        assert!(!fam.is_finite());
        let f = family_instantiate(&fam, 3).unwrap();
        assert_eq!(f, parse_formula("exists y. 3*x^2 + 3*y^2 - 1 = 0").unwrap());
        assert_eq!(
            family_instantiate(&fam, 0),
            Err(FormulaError::IndexOutOfRange { index: 0 })
        );
    }

    #[test]
    fn explicit_list() {
        let fam = FamilyPresentation::parse("# comment\nx = 0\n\nx = 1\n").unwrap();
        assert_eq!(family_instantiate(&fam, 1).unwrap(), parse_formula("x = 0").unwrap());
        assert_eq!(
            family_instantiate(&fam, 3),
            Err(FormulaError::IndexOutOfRange { index: 3 })
        );
        let all: Vec<u64> = fam.iter().map(|r| r.unwrap().0).collect();
        assert_eq!(all, vec![1, 2]);
    }

    #[test]
    fn header_ranges() {
        let fam = FamilyPresentation::parse("@family k in 0..3\nx = k").unwrap();
        assert_eq!(fam.last_index(), Some(2));
        let fam = FamilyPresentation::parse("@family k in 0..=3\nx = k").unwrap();
        assert_eq!(fam.iter().count(), 4);
        assert!(FamilyPresentation::parse("@family k 0..\nx = k").is_err());
        assert!(FamilyPresentation::parse("@family k in 1..\nx = = k").is_err());
    }

    #[test]
    fn infinite_iteration_is_lazy() {
        let fam = FamilyPresentation::parse("@family i in 1..\nx = i").unwrap();
        let tenth = fam.iter().nth(9).unwrap().unwrap();
        assert_eq!(tenth.0, 10);
    }
}

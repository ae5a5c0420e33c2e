//! The `.crn` text format.
//!
//! ```text
//! # comment
//! species: X Y Z          (optional; pins column order)
//! 0.3 X + 2.14 Y -> 1.1 Z
//! X <-> 2Y                (expands to X -> 2Y and 2Y -> X)
//! 0 -> X                  (0 is the empty complex)
//! ```

use num_traits::{Signed, Zero};

use super::{is_valid_species_name, Complex, Reaction, ReactionNetwork};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

struct Term<'a> {
    coefficient: Rational,
    name: &'a str,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses one side of a reaction. `offset` is the 1-based column of `text` within its line.
fn parse_side(text: &str, line: usize, offset: usize) -> Result<Vec<Term<'_>>> {
    let mut terms = Vec::new();
    let mut start = 0;
    let pieces: Vec<&str> = text.split('+').collect();
    let only = pieces.len() == 1;
    for piece in pieces {
        let lead = piece.len() - piece.trim_start().len();
        let piece_column = offset + start;
        let column = piece_column + lead;
        start += piece.len() + 1;
        let term = piece.trim();
        if term.is_empty() {
            return Err(syntax(line, piece_column, "missing term"));
        }
        if term == "0" {
            if !only {
                return Err(syntax(line, column, "`0` must stand alone as the empty complex"));
            }
            return Ok(Vec::new());
        }
        let split = term
            .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '/' || c == '-' || c == '+'))
            .unwrap_or(term.len());
        let (coef_text, name) = (term[..split].trim(), term[split..].trim());
        if name.is_empty() {
            return Err(syntax(line, column, format!("term `{term}` has no species name")));
        }
        if !is_valid_species_name(name) {
            return Err(syntax(line, column + split, format!("invalid species name `{name}`")));
        }
        let coefficient = if coef_text.is_empty() {
            Rational::from_integer(1.into())
        } else {
            rational::parse_rational(coef_text)
                .map_err(|_| syntax(line, column, format!("invalid coefficient `{coef_text}`")))?
        };
        if coefficient.is_negative() {
            return Err(Error::NegativeCoefficient {
                line,
                species: name.to_string(),
            });
        }
        terms.push(Term { coefficient, name });
    }
    Ok(terms)
}

pub(crate) fn parse_complex_with(
    text: &str,
    mut lookup: impl FnMut(&str) -> Option<usize>,
) -> Result<Complex> {
    let terms = parse_side(text.trim(), 1, 1)?;
    let mut pairs = Vec::with_capacity(terms.len());
    for t in terms {
        let idx = lookup(t.name).ok_or_else(|| Error::UnknownSpecies(t.name.to_string()))?;
        pairs.push((idx, t.coefficient));
    }
    Complex::from_pairs(pairs)
}

/// Parses a `.crn` document.
pub fn parse_network(text: &str) -> Result<ReactionNetwork> {
    let mut names: Vec<String> = Vec::new();
    let mut index = std::collections::HashMap::<String, usize>::new();
    let mut reactions: Vec<(usize, Reaction)> = Vec::new();
    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };

    for (ln0, raw) in text.lines().enumerate() {
        let line = ln0 + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if let Some(rest) = content.trim_start().strip_prefix("species:") {
            if !reactions.is_empty() {
                return Err(syntax(line, 1, "species header must precede all reactions"));
            }
            for name in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                if !is_valid_species_name(name) {
                    return Err(syntax(line, 1, format!("invalid species name `{name}`")));
                }
                if names.iter().any(|n| n == name) {
                    return Err(syntax(line, 1, format!("species `{name}` declared twice")));
                }
                intern(name, &mut names);
            }
            continue;
        }

        let (arrow_at, arrow_len, reversible) = if let Some(i) = content.find("<->") {
            (i, 3, true)
        } else if let Some(i) = content.find("->") {
            (i, 2, false)
        } else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(syntax(line, col, "expected `->` or `<->`"));
        };
        let lhs = &content[..arrow_at];
        let rhs = &content[arrow_at + arrow_len..];
        if rhs.contains("->") {
            return Err(syntax(line, arrow_at + arrow_len + 1, "more than one arrow"));
        }
        if lhs.contains('<') || lhs.contains('>') {
            return Err(syntax(line, 1, "malformed arrow"));
        }
        let left = parse_side(lhs, line, 1)?;
        let right = parse_side(rhs, line, arrow_at + arrow_len + 1)?;
        let mut side = |terms: Vec<Term<'_>>| -> Result<Complex> {
            let mut pairs = Vec::new();
            for t in terms {
                let idx = intern(t.name, &mut names);
                if !t.coefficient.is_zero() {
                    pairs.push((idx, t.coefficient));
                }
            }
            Complex::from_pairs(pairs)
        };
        let reactant = side(left)?;
        let product = side(right)?;
        let forward = Reaction {
            reactant,
            product,
        };
        if forward.reactant == forward.product {
            return Err(Error::SelfLoop {
                line,
                reaction: content.trim().to_string(),
            });
        }
        if reversible {
            let backward = forward.reversed();
            reactions.push((line, forward));
            reactions.push((line, backward));
        } else {
            reactions.push((line, forward));
        }
    }

    if names.is_empty() {
        return Err(syntax(1, 1, "empty network: no species and no reactions"));
    }
    for (k, (line, r)) in reactions.iter().enumerate() {
        if reactions[..k].iter().any(|(_, other)| other == r) {
            return Err(Error::DuplicateReaction {
                line: *line,
                reaction: r.render(&names),
            });
        }
    }
    ReactionNetwork::new(names, reactions.into_iter().map(|(_, r)| r).collect())
}

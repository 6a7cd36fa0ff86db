//! The textual `.pbes` format.
//!
//! ```text
//! sort D = d1 | d2;
//! pbes nu X(q: List(D)) =
//!        (q != [] || #q < 2)
//!     && (q != [] => X(tail(q)))
//!     && (forall d: D . #q < 2 => X(q <| d));
//! init X([]);
//! ```

mod elaborate;
mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

use crate::pbes::{validate, Location, Pbes};

pub use printer::{print_formula, print_pbes, print_term};

/// A 1-based line/column position in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    UnknownIdentifier,
    Sort,
    /// A well-formedness rule reported by [`validate`]; the id is the rule's.
    Invalid(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceDiagnostic {
    pub pos: Pos,
    pub kind: ErrorKind,
    pub message: String,
}

impl fmt::Display for SourceDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::UnknownIdentifier => "unknown identifier",
            ErrorKind::Sort => "sort error",
            ErrorKind::Invalid(rule) => rule,
        };
        write!(f, "{}: {kind}: {}", self.pos, self.message)
    }
}

/// One or more located problems with an input text.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub diagnostics: Vec<SourceDiagnostic>,
}

impl ParseError {
    pub(crate) fn single(pos: Pos, kind: ErrorKind, message: String) -> ParseError {
        ParseError {
            diagnostics: vec![SourceDiagnostic { pos, kind, message }],
        }
    }

    pub fn first(&self) -> &SourceDiagnostic {
        &self.diagnostics[0]
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Maps structural locations of an elaborated system back to source positions.
#[derive(Clone, Debug, Default)]
pub struct SourceMap {
    pub(crate) sorts: Vec<Pos>,
    pub(crate) equations: Vec<Pos>,
    pub(crate) paths: std::collections::HashMap<(usize, String), Pos>,
    pub(crate) init: Pos,
}

impl SourceMap {
    pub fn position(&self, location: &Location) -> Pos {
        match location {
            Location::Sort(i) => self.sorts.get(*i).copied().unwrap_or_default(),
            Location::Init => self.init,
            Location::Equation { index, path } => self
                .paths
                .get(&(*index, path.clone()))
                .or_else(|| self.equations.get(*index))
                .copied()
                .unwrap_or_default(),
        }
    }
}

/// Parses and elaborates a system without running [`validate`].
pub fn parse_unchecked(text: &str) -> Result<(Pbes, SourceMap), ParseError> {
    let tokens = lexer::tokenize(text)?;
    let raw = parser::Parser::new(tokens).file()?;
    elaborate::elaborate(raw)
}

/// Parses a `.pbes` text into a validated system.
pub fn parse_pbes(text: &str) -> Result<Pbes, ParseError> {
    let (pbes, map) = parse_unchecked(text)?;
    let diagnostics = validate(&pbes);
    if diagnostics.is_empty() {
        Ok(pbes)
    } else {
        Err(ParseError {
            diagnostics: diagnostics
                .into_iter()
                .map(|d| SourceDiagnostic {
                    pos: map.position(&d.location),
                    kind: ErrorKind::Invalid(d.rule.id()),
                    message: d.message,
                })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::pbes::Fixpoint;
    use crate::sort::Sort;

    const EXAMPLE1: &str = include_str!("../../tests/fixtures/example1.pbes");
    const EXAMPLE5: &str = include_str!("../../tests/fixtures/example5.pbes");

    fn round_trip(text: &str) {
        let p = parse_pbes(text).unwrap();
        let printed = print_pbes(&p);
        let q = parse_pbes(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(p, q, "{printed}");
    }

    #[test]
    fn example1_shape() {
        let p = parse_pbes(EXAMPLE1).unwrap();
        assert_eq!(p.equations.len(), 1);
        let eq = &p.equations[0];
        assert_eq!(eq.fixpoint, Fixpoint::Nu);
        assert_eq!(eq.params.len(), 1);
        assert_eq!(eq.params[0].name, "q");
        assert!(matches!(&eq.params[0].sort, Sort::List(e) if e.to_string() == "D"));
        assert_eq!(eq.rhs.conjuncts().len(), 3);
        assert_eq!(p.init.to_string(), "X([])");
    }

    #[test]
    fn trivial_system() {
        let p = parse_pbes("pbes nu X() = val(true); init X();").unwrap();
        assert_eq!(p.equations.len(), 1);
        assert_eq!(p.equations[0].rhs, Formula::tt());
    }

    #[test]
    fn round_trips() {
        round_trip(EXAMPLE1);
        round_trip(EXAMPLE5);
        round_trip("pbes nu X() = val(true); init X();");
        round_trip(
            "sort D = a | b;\npbes mu X(l: List(D), n: Nat, f: Bool) = \
             val(!f || n == 0) || !(l == []) && X([]: List(D) <| a, n + 1 - 2, head([a, b]) == b) \
             || (exists m: Nat . m < n && X(tail(l), m, #l > 1 => f)); init X([b], 3, false);",
        );
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_pbes("pbes mu X( = ;").unwrap_err();
        let d = e.first();
        assert_eq!(d.kind, ErrorKind::Syntax);
        assert_eq!(d.pos, Pos { line: 1, col: 12 });
    }

    #[test]
    fn unknown_identifier() {
        let e = parse_pbes("pbes nu X(n: Nat) = Y(n); init X(0);").unwrap_err();
        assert_eq!(e.first().kind, ErrorKind::UnknownIdentifier);
        assert_eq!(e.first().pos, Pos { line: 1, col: 21 });
        let e = parse_pbes("pbes nu X(n: Nat) = k > 0; init X(0);").unwrap_err();
        assert_eq!(e.first().kind, ErrorKind::UnknownIdentifier);
    }

    #[test]
    fn sort_errors() {
        let e = parse_pbes("pbes nu X(n: Nat) = X(true); init X(0);").unwrap_err();
        assert_eq!(e.first().kind, ErrorKind::Sort);
        assert_eq!(e.first().pos, Pos { line: 1, col: 23 });
        let e = parse_pbes("pbes nu X(n: Nat) = #[] < n; init X(0);").unwrap_err();
        assert_eq!(e.first().kind, ErrorKind::Sort);
        let e = parse_pbes("pbes nu X(n: Nat) = n + 1; init X(0);").unwrap_err();
        assert_eq!(e.first().kind, ErrorKind::Sort);
    }

    #[test]
    fn validation_is_located() {
        let text = "pbes\n  nu X(n: Nat) = X(n);\n  mu X(n: Nat) = X(n);\ninit X(0);";
        let e = parse_pbes(text).unwrap_err();
        assert_eq!(e.first().kind, ErrorKind::Invalid("duplicate-lhs"));
        assert_eq!(e.first().pos.line, 3);
        let text = "pbes nu X(n: Nat) = !X(n); init X(0);";
        let e = parse_pbes(text).unwrap_err();
        assert_eq!(e.first().kind, ErrorKind::Invalid("negative-occurrence"));
        assert_eq!(e.first().pos, Pos { line: 1, col: 22 });
    }

    #[test]
    fn comments_and_primes() {
        let p = parse_pbes("-- header\npbes nu X'(n: Nat) = X'(n) -- tail\n; init X'(1);").unwrap();
        assert_eq!(p.equations[0].name, "X'");
    }
}

//! TSQL: a small SQL dialect with a `WHEN` clause for temporal predicates.
//!
//! ```text
//! SELECT * FROM diagnosis
//!   WHERE icd = 'J00'
//!   WHEN VALID OVERLAPS [2020-01-01T00:00:00Z, 2020-06-01T00:00:00Z)
//! ```
//!
//! `WHEN` accepts Allen relations between intervals (`VALID` or a literal
//! `[start, end)`) and `BEFORE`/`AFTER`/`AT` between instants (`VALID_START`,
//! `VALID_END`, `TT`, an ISO-8601 UTC literal or `FOREVER`). In a query,
//! `OVERLAPS` holds whenever the two intervals share an instant, as in SQL;
//! [`allen_relation`] keeps Allen's strict meaning. Data changes go
//! through `INSERT`, `UPDATE` and `DELETE`, each taking an optional
//! `VALID FROM <instant>` clause; history is always archived.

mod allen;
mod ast;
mod eval;
mod lexer;
mod parser;
mod render;

use std::fmt;

pub use allen::{allen_relation, AllenRelation};
pub use ast::{
    CmpOp, Condition, Delete, Insert, InstantExpr, InstantOp, IntervalExpr, Literal, Projection, Select, Statement,
    TemporalCondition, Update,
};
pub use eval::{execute, query, run, EvalError, Provenance, QueryOutput, ResultSet, Row, TsqlError};
pub use parser::parse;

const KEYWORDS: &[&str] = &[
    "SELECT",
    "FROM",
    "WHERE",
    "WHEN",
    "AND",
    "OR",
    "INSERT",
    "INTO",
    "VALUES",
    "UPDATE",
    "SET",
    "DELETE",
    "VALID",
    "VALID_START",
    "VALID_END",
    "TT",
    "FOREVER",
    "AT",
    "BEFORE",
    "AFTER",
    "MEETS",
    "MET_BY",
    "OVERLAPS",
    "OVERLAPPED_BY",
    "STARTS",
    "STARTED_BY",
    "DURING",
    "CONTAINS",
    "FINISHES",
    "FINISHED_BY",
    "EQUALS",
];

/// Whether `word` is reserved (case-insensitive) and so unusable as a name.
pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(word))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax {
        expected: Vec<String>,
        found: String,
    },
    /// An operator applied to the wrong kind of operand.
    Type(String),
    /// A malformed literal (bad instant, empty interval, out-of-range number).
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub position: Position,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn syntax(position: Position, expected: Vec<String>, found: String) -> Self {
        ParseError { position, kind: ParseErrorKind::Syntax { expected, found } }
    }

    pub(crate) fn type_error(position: Position, message: String) -> Self {
        ParseError { position, kind: ParseErrorKind::Type(message) }
    }

    pub(crate) fn literal(position: Position, message: String) -> Self {
        ParseError { position, kind: ParseErrorKind::Literal(message) }
    }

    pub fn line(&self) -> usize {
        self.position.line
    }

    pub fn column(&self) -> usize {
        self.position.column
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } if expected.is_empty() => {
                write!(f, "syntax error at {}: unexpected {found}", self.position)
            }
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error at {}: expected {}, found {found}", self.position, expected.join(" | "))
            }
            ParseErrorKind::Type(m) => write!(f, "type error at {}: {m}", self.position),
            ParseErrorKind::Literal(m) => write!(f, "bad literal at {}: {m}", self.position),
        }
    }
}

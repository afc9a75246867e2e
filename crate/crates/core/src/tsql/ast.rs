use crate::temporal::{Instant, Interval};

use super::AllenRelation;

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Select(Select),
    Insert(Insert),
    Update(Update),
    Delete(Delete),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Select {
    pub projection: Projection,
    pub table: String,
    pub filter: Option<Condition>,
    pub when: Option<TemporalCondition>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    All,
    /// Never empty.
    Columns(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Real(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// `WHERE` condition over payload attributes (and `key`).
#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    Compare { column: String, op: CmpOp, value: Literal },
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalExpr {
    Valid,
    Literal(Interval),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstantExpr {
    ValidStart,
    ValidEnd,
    Tt,
    Literal(Instant),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstantOp {
    Before,
    After,
    At,
}

impl InstantOp {
    pub fn keyword(self) -> &'static str {
        match self {
            InstantOp::Before => "BEFORE",
            InstantOp::After => "AFTER",
            InstantOp::At => "AT",
        }
    }

    pub fn holds(self, a: Instant, b: Instant) -> bool {
        match self {
            InstantOp::Before => a < b,
            InstantOp::After => a > b,
            InstantOp::At => a == b,
        }
    }
}

/// `WHEN` condition over a version's temporal attributes.
#[derive(Debug, Clone, PartialEq)]
pub enum TemporalCondition {
    Allen { left: IntervalExpr, relation: AllenRelation, right: IntervalExpr },
    Instant { left: InstantExpr, op: InstantOp, right: InstantExpr },
    And(Box<TemporalCondition>, Box<TemporalCondition>),
    Or(Box<TemporalCondition>, Box<TemporalCondition>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Insert {
    pub table: String,
    pub columns: Vec<String>,
    pub values: Vec<Literal>,
    pub valid_from: Option<Instant>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Update {
    pub table: String,
    pub assignments: Vec<(String, Literal)>,
    pub filter: Option<Condition>,
    pub valid_from: Option<Instant>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Delete {
    pub table: String,
    pub filter: Option<Condition>,
    pub valid_from: Option<Instant>,
}

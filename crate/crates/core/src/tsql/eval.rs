use std::cmp::Ordering;

use serde::Serialize;

use crate::temporal::{
    AttrType, EntityTable, Instant, Payload, RecordId, StoreError, TemporalStore, Value, Version,
    PSEUDO_COLUMNS as PSEUDO,
};

use super::ast::*;
use super::{parse, AllenRelation, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Current,
    History,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub values: Vec<Value>,
    pub provenance: Provenance,
    pub version: RecordId,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultSet {
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum QueryOutput {
    Rows(ResultSet),
    Affected(usize),
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("unknown column `{column}` in table `{table}`")]
    UnknownColumn { table: String, column: String },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("invalid statement: {0}")]
    Invalid(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Debug, thiserror::Error)]
pub enum TsqlError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Parses and executes one statement.
pub fn run(text: &str, store: &mut TemporalStore) -> Result<QueryOutput, TsqlError> {
    Ok(execute(&parse(text)?, store)?)
}

pub fn execute(stmt: &Statement, store: &mut TemporalStore) -> Result<QueryOutput, EvalError> {
    match stmt {
        Statement::Select(s) => query(s, store).map(QueryOutput::Rows),
        Statement::Insert(s) => insert(s, store),
        Statement::Update(s) => update(s, store),
        Statement::Delete(s) => delete(s, store),
    }
}

fn table<'a>(store: &'a TemporalStore, name: &str) -> Result<&'a EntityTable, EvalError> {
    store.table(name).map_err(|_| EvalError::UnknownTable(name.to_owned()))
}

fn column_type(t: &EntityTable, column: &str) -> Result<AttrType, EvalError> {
    if column == "key" {
        return Ok(AttrType::Text);
    }
    t.schema()
        .get(column)
        .map(|a| a.kind)
        .ok_or_else(|| EvalError::UnknownColumn { table: t.name().to_owned(), column: column.to_owned() })
}

fn check_literal(column: &str, kind: AttrType, lit: &Literal) -> Result<(), EvalError> {
    match (kind, lit) {
        (AttrType::Int | AttrType::Real, Literal::Int(_) | Literal::Real(_)) | (AttrType::Text, Literal::Text(_)) => {
            Ok(())
        }
        _ => Err(EvalError::TypeMismatch(format!("`{column}` is {kind}, compared with {lit}"))),
    }
}

fn check_condition(t: &EntityTable, c: &Condition) -> Result<(), EvalError> {
    match c {
        Condition::Compare { column, value, .. } => check_literal(column, column_type(t, column)?, value),
        Condition::And(l, r) | Condition::Or(l, r) => {
            check_condition(t, l)?;
            check_condition(t, r)
        }
    }
}

fn field<'a>(v: &'a Version, column: &str) -> Option<std::borrow::Cow<'a, Value>> {
    use std::borrow::Cow;
    if column == "key" {
        Some(Cow::Owned(Value::Text(v.key.clone())))
    } else {
        v.payload.get(column).map(Cow::Borrowed)
    }
}

fn compare(value: &Value, lit: &Literal) -> Option<Ordering> {
    match (value, lit) {
        (Value::Int(a), Literal::Int(b)) => Some(a.cmp(b)),
        (Value::Int(a), Literal::Real(b)) => (*a as f64).partial_cmp(b),
        (Value::Real(a), Literal::Int(b)) => a.partial_cmp(&(*b as f64)),
        (Value::Real(a), Literal::Real(b)) => a.partial_cmp(b),
        (Value::Text(a), Literal::Text(b)) => Some(a.cmp(b)),
        _ => None,
    }
}

fn matches(v: &Version, c: &Condition) -> bool {
    match c {
        Condition::Compare { column, op, value } => {
            let Some(ord) = field(v, column).and_then(|f| compare(&f, value)) else {
                return false;
            };
            match op {
                CmpOp::Eq => ord == Ordering::Equal,
                CmpOp::Ne => ord != Ordering::Equal,
                CmpOp::Lt => ord == Ordering::Less,
                CmpOp::Le => ord != Ordering::Greater,
                CmpOp::Gt => ord == Ordering::Greater,
                CmpOp::Ge => ord != Ordering::Less,
            }
        }
        Condition::And(l, r) => matches(v, l) && matches(v, r),
        Condition::Or(l, r) => matches(v, l) || matches(v, r),
    }
}

fn holds(v: &Version, c: &TemporalCondition) -> bool {
    let interval = |e: &IntervalExpr| match e {
        IntervalExpr::Valid => v.valid,
        IntervalExpr::Literal(iv) => *iv,
    };
    let instant = |e: &InstantExpr| match e {
        InstantExpr::ValidStart => v.valid.start(),
        InstantExpr::ValidEnd => v.valid.end(),
        InstantExpr::Tt => v.tt,
        InstantExpr::Literal(t) => *t,
    };
    match c {
        TemporalCondition::Allen { left, relation, right } => {
            let (a, b) = (interval(left), interval(right));
            match relation {
                // as in SQL, OVERLAPS means the intervals share an instant
                AllenRelation::Overlaps => a.overlaps(&b),
                r => r.holds(&a, &b),
            }
        }
        TemporalCondition::Instant { left, op, right } => op.holds(instant(left), instant(right)),
        TemporalCondition::And(l, r) => holds(v, l) && holds(v, r),
        TemporalCondition::Or(l, r) => holds(v, l) || holds(v, r),
    }
}

fn cell(v: &Version, column: &str) -> Value {
    match column {
        "key" => Value::Text(v.key.clone()),
        "valid_from" => Value::Text(v.valid.start().to_string()),
        "valid_to" => Value::Text(v.valid.end().to_string()),
        "recorded_at" => Value::Text(v.tt.to_string()),
        attr => v.payload[attr].clone(),
    }
}

/// Evaluates a `SELECT`. Without `WHEN` only current versions are scanned;
/// `WHEN` widens the scan to current and history. Rows come back ordered by
/// key, valid start, then version id.
pub fn query(s: &Select, store: &TemporalStore) -> Result<ResultSet, EvalError> {
    let t = table(store, &s.table)?;
    let columns: Vec<String> = match &s.projection {
        Projection::All => {
            let mut cols = vec!["key".to_owned()];
            cols.extend(t.schema().attributes().iter().map(|a| a.name.clone()));
            cols.extend(PSEUDO[1..].iter().map(|c| c.to_string()));
            cols
        }
        Projection::Columns(cols) => {
            for c in cols {
                if !PSEUDO.contains(&c.as_str()) && t.schema().get(c).is_none() {
                    return Err(EvalError::UnknownColumn { table: t.name().to_owned(), column: c.clone() });
                }
            }
            cols.clone()
        }
    };
    if let Some(c) = &s.filter {
        check_condition(t, c)?;
    }

    let scan: Box<dyn Iterator<Item = &Version>> = match s.when {
        None => Box::new(t.current()),
        Some(_) => Box::new(t.versions()),
    };
    let mut hits: Vec<&Version> = scan
        .filter(|v| s.filter.as_ref().is_none_or(|c| matches(v, c)))
        .filter(|v| s.when.as_ref().is_none_or(|c| holds(v, c)))
        .collect();
    hits.sort_by(|a, b| (&a.key, a.valid.start(), a.id).cmp(&(&b.key, b.valid.start(), b.id)));

    let rows = hits
        .into_iter()
        .map(|v| Row {
            values: columns.iter().map(|c| cell(v, c)).collect(),
            // only current versions are open-ended
            provenance: if v.valid.end().is_forever() { Provenance::Current } else { Provenance::History },
            version: v.id,
        })
        .collect();
    Ok(ResultSet { columns, rows })
}

fn to_value(lit: &Literal) -> Value {
    match lit {
        Literal::Int(i) => Value::Int(*i),
        Literal::Real(r) => Value::Real(*r),
        Literal::Text(s) => Value::Text(s.clone()),
    }
}

fn insert(s: &Insert, store: &mut TemporalStore) -> Result<QueryOutput, EvalError> {
    let t = table(store, &s.table)?;
    let mut key = None;
    let mut payload = Payload::new();
    for (i, (column, lit)) in s.columns.iter().zip(&s.values).enumerate() {
        if s.columns[..i].contains(column) {
            return Err(EvalError::Invalid(format!("column `{column}` listed twice")));
        }
        check_literal(column, column_type(t, column)?, lit)?;
        if column == "key" {
            let Literal::Text(k) = lit else { unreachable!("checked as text") };
            key = Some(k.clone());
        } else {
            payload.insert(column.clone(), to_value(lit));
        }
    }
    let key = key.ok_or_else(|| EvalError::Invalid("INSERT must set `key`".into()))?;
    let at = s.valid_from.unwrap_or_else(|| store.now());
    store.insert(&s.table, &key, payload, at)?;
    Ok(QueryOutput::Affected(1))
}

/// Current versions matching `filter`, checked so that closing each of them
/// at `at` cannot fail halfway through.
fn targets(
    store: &TemporalStore,
    table_name: &str,
    filter: &Option<Condition>,
    at: Instant,
) -> Result<Vec<Version>, EvalError> {
    let t = table(store, table_name)?;
    if let Some(c) = filter {
        check_condition(t, c)?;
    }
    let hits: Vec<Version> = t.current().filter(|v| filter.as_ref().is_none_or(|c| matches(v, c))).cloned().collect();
    for v in &hits {
        if at <= v.valid.start() || at.is_forever() {
            return Err(StoreError::NotAfterStart { key: v.key.clone(), start: v.valid.start(), at }.into());
        }
    }
    Ok(hits)
}

fn update(s: &Update, store: &mut TemporalStore) -> Result<QueryOutput, EvalError> {
    let t = table(store, &s.table)?;
    for (i, (column, lit)) in s.assignments.iter().enumerate() {
        if PSEUDO.contains(&column.as_str()) {
            return Err(EvalError::Invalid(format!("`{column}` cannot be assigned")));
        }
        if s.assignments[..i].iter().any(|(c, _)| c == column) {
            return Err(EvalError::Invalid(format!("column `{column}` assigned twice")));
        }
        check_literal(column, column_type(t, column)?, lit)?;
    }
    let at = s.valid_from.unwrap_or_else(|| store.now());
    let hits = targets(store, &s.table, &s.filter, at)?;
    for v in &hits {
        let mut payload = v.payload.clone();
        for (column, lit) in &s.assignments {
            payload.insert(column.clone(), to_value(lit));
        }
        store.update(&s.table, &v.key, payload, at)?;
    }
    Ok(QueryOutput::Affected(hits.len()))
}

fn delete(s: &Delete, store: &mut TemporalStore) -> Result<QueryOutput, EvalError> {
    let at = s.valid_from.unwrap_or_else(|| store.now());
    let hits = targets(store, &s.table, &s.filter, at)?;
    for v in &hits {
        store.delete(&s.table, &v.key, at)?;
    }
    Ok(QueryOutput::Affected(hits.len()))
}

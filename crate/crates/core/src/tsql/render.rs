use std::fmt::{self, Display, Formatter};

use super::ast::*;

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Real(r) => {
                let s = r.to_string();
                if s.contains('.') {
                    f.write_str(&s)
                } else {
                    write!(f, "{s}.0")
                }
            }
            Literal::Text(s) => write!(f, "'{}'", s.replace('\'', "''")),
        }
    }
}

fn prec_cond(c: &Condition) -> u8 {
    match c {
        Condition::Or(..) => 0,
        Condition::And(..) => 1,
        Condition::Compare { .. } => 2,
    }
}

fn prec_temporal(c: &TemporalCondition) -> u8 {
    match c {
        TemporalCondition::Or(..) => 0,
        TemporalCondition::And(..) => 1,
        _ => 2,
    }
}

// Operators are left-associative, so a right operand of equal precedence
// needs parentheses to keep its shape.
fn binary<T: Display>(f: &mut Formatter<'_>, op: &str, own: u8, (l, lp): (&T, u8), (r, rp): (&T, u8)) -> fmt::Result {
    if lp < own {
        write!(f, "({l})")?;
    } else {
        write!(f, "{l}")?;
    }
    write!(f, " {op} ")?;
    if rp <= own {
        write!(f, "({r})")
    } else {
        write!(f, "{r}")
    }
}

impl Display for Condition {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Compare { column, op, value } => write!(f, "{column} {} {value}", op.symbol()),
            Condition::And(l, r) => binary(f, "AND", 1, (&**l, prec_cond(l)), (&**r, prec_cond(r))),
            Condition::Or(l, r) => binary(f, "OR", 0, (&**l, prec_cond(l)), (&**r, prec_cond(r))),
        }
    }
}

impl Display for IntervalExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            IntervalExpr::Valid => f.write_str("VALID"),
            IntervalExpr::Literal(iv) => write!(f, "{iv}"),
        }
    }
}

impl Display for InstantExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            InstantExpr::ValidStart => f.write_str("VALID_START"),
            InstantExpr::ValidEnd => f.write_str("VALID_END"),
            InstantExpr::Tt => f.write_str("TT"),
            InstantExpr::Literal(t) => write!(f, "{t}"),
        }
    }
}

impl Display for TemporalCondition {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            TemporalCondition::Allen { left, relation, right } => write!(f, "{left} {relation} {right}"),
            TemporalCondition::Instant { left, op, right } => write!(f, "{left} {} {right}", op.keyword()),
            TemporalCondition::And(l, r) => binary(f, "AND", 1, (&**l, prec_temporal(l)), (&**r, prec_temporal(r))),
            TemporalCondition::Or(l, r) => binary(f, "OR", 0, (&**l, prec_temporal(l)), (&**r, prec_temporal(r))),
        }
    }
}

fn valid_from(f: &mut Formatter<'_>, at: &Option<crate::temporal::Instant>) -> fmt::Result {
    match at {
        Some(t) => write!(f, " VALID FROM {t}"),
        None => Ok(()),
    }
}

fn filter(f: &mut Formatter<'_>, cond: &Option<Condition>) -> fmt::Result {
    match cond {
        Some(c) => write!(f, " WHERE {c}"),
        None => Ok(()),
    }
}

impl Display for Select {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        match &self.projection {
            Projection::All => f.write_str("*")?,
            Projection::Columns(cols) => f.write_str(&cols.join(", "))?,
        }
        write!(f, " FROM {}", self.table)?;
        filter(f, &self.filter)?;
        if let Some(w) = &self.when {
            write!(f, " WHEN {w}")?;
        }
        Ok(())
    }
}

impl Display for Statement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Select(s) => s.fmt(f),
            Statement::Insert(s) => {
                let values: Vec<String> = s.values.iter().map(Literal::to_string).collect();
                write!(f, "INSERT INTO {} ({}) VALUES ({})", s.table, s.columns.join(", "), values.join(", "))?;
                valid_from(f, &s.valid_from)
            }
            Statement::Update(s) => {
                let sets: Vec<String> = s.assignments.iter().map(|(c, v)| format!("{c} = {v}")).collect();
                write!(f, "UPDATE {} SET {}", s.table, sets.join(", "))?;
                filter(f, &s.filter)?;
                valid_from(f, &s.valid_from)
            }
            Statement::Delete(s) => {
                write!(f, "DELETE FROM {}", s.table)?;
                filter(f, &s.filter)?;
                valid_from(f, &s.valid_from)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::tsql::parse;

    fn round_trip(text: &str) -> String {
        let s = parse(text).unwrap();
        let out = s.to_string();
        assert_eq!(parse(&out).unwrap(), s, "{out}");
        out
    }

    #[test]
    fn canonical_uppercase() {
        assert_eq!(
            round_trip("select * from diagnosis when valid overlaps [2020-01-01T00:00:00Z, 2020-06-01T00:00:00Z)"),
            "SELECT * FROM diagnosis WHEN VALID OVERLAPS [2020-01-01T00:00:00Z, 2020-06-01T00:00:00Z)"
        );
        assert_eq!(round_trip("SELECT name FROM patient WHERE id = 7"), "SELECT name FROM patient WHERE id = 7");
    }

    #[test]
    fn parentheses_preserve_shape() {
        assert_eq!(
            round_trip("SELECT * FROM t WHERE (a = 1 OR b = 2) AND c != 'it''s'"),
            "SELECT * FROM t WHERE (a = 1 OR b = 2) AND c <> 'it''s'"
        );
        assert_eq!(
            round_trip("SELECT * FROM t WHERE a = 1 AND (b = 2 AND c = 3)"),
            "SELECT * FROM t WHERE a = 1 AND (b = 2 AND c = 3)"
        );
        round_trip("SELECT * FROM t WHEN (TT AFTER VALID_START OR VALID MEETS VALID) AND VALID_END AT FOREVER");
    }

    #[test]
    fn reals_keep_a_decimal_point() {
        assert_eq!(round_trip("UPDATE t SET x = 3.0 VALID FROM FOREVER"), "UPDATE t SET x = 3.0 VALID FROM FOREVER");
        round_trip("INSERT INTO t (key, x) VALUES ('k', -0.000001)");
    }
}

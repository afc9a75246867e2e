use crate::temporal::{Instant, Interval};

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{is_keyword, AllenRelation, ParseError, Position};

/// Parses one statement. Keywords are case-insensitive; identifiers keep
/// their case. A trailing `;` is allowed.
pub fn parse(text: &str) -> Result<Statement, ParseError> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0 };
    let stmt = p.statement()?;
    p.eat(&Tok::Semicolon);
    p.expect_eof()?;
    Ok(stmt)
}

enum Operand {
    Interval(IntervalExpr),
    Instant(InstantExpr),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn here(&self) -> Position {
        self.peek().pos
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::syntax(t.pos, expected.iter().map(|s| s.to_string()).collect(), t.tok.to_string()))
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        let hit = self.peek_keyword(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.fail(&[kw])
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        let hit = &self.peek().tok == tok;
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn punct(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.fail(&[&tok.to_string()])
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.fail(&["end of input"])
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Word(w) if !is_keyword(w) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail(&[what]),
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        if self.eat_keyword("SELECT") {
            self.select().map(Statement::Select)
        } else if self.eat_keyword("INSERT") {
            self.insert().map(Statement::Insert)
        } else if self.eat_keyword("UPDATE") {
            self.update().map(Statement::Update)
        } else if self.eat_keyword("DELETE") {
            self.delete().map(Statement::Delete)
        } else {
            self.fail(&["SELECT", "INSERT", "UPDATE", "DELETE"])
        }
    }

    fn select(&mut self) -> Result<Select, ParseError> {
        let projection = if self.eat(&Tok::Star) {
            Projection::All
        } else {
            let mut cols = vec![self.ident("column name or `*`")?];
            while self.eat(&Tok::Comma) {
                cols.push(self.ident("column name")?);
            }
            Projection::Columns(cols)
        };
        self.keyword("FROM")?;
        let table = self.ident("table name")?;
        let filter = if self.eat_keyword("WHERE") { Some(self.condition()?) } else { None };
        let when = if self.eat_keyword("WHEN") { Some(self.temporal()?) } else { None };
        Ok(Select { projection, table, filter, when })
    }

    fn insert(&mut self) -> Result<Insert, ParseError> {
        self.keyword("INTO")?;
        let table = self.ident("table name")?;
        self.punct(Tok::LParen)?;
        let mut columns = vec![self.ident("column name")?];
        while self.eat(&Tok::Comma) {
            columns.push(self.ident("column name")?);
        }
        self.punct(Tok::RParen)?;
        self.keyword("VALUES")?;
        let open = self.here();
        self.punct(Tok::LParen)?;
        let mut values = vec![self.literal()?];
        while self.eat(&Tok::Comma) {
            values.push(self.literal()?);
        }
        self.punct(Tok::RParen)?;
        if values.len() != columns.len() {
            return Err(ParseError::type_error(open, format!("{} columns but {} values", columns.len(), values.len())));
        }
        let valid_from = self.valid_from()?;
        Ok(Insert { table, columns, values, valid_from })
    }

    fn update(&mut self) -> Result<Update, ParseError> {
        let table = self.ident("table name")?;
        self.keyword("SET")?;
        let mut assignments = Vec::new();
        loop {
            let column = self.ident("column name")?;
            if !self.eat(&Tok::Op("=")) {
                return self.fail(&["`=`"]);
            }
            assignments.push((column, self.literal()?));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        let filter = if self.eat_keyword("WHERE") { Some(self.condition()?) } else { None };
        let valid_from = self.valid_from()?;
        Ok(Update { table, assignments, filter, valid_from })
    }

    fn delete(&mut self) -> Result<Delete, ParseError> {
        self.keyword("FROM")?;
        let table = self.ident("table name")?;
        let filter = if self.eat_keyword("WHERE") { Some(self.condition()?) } else { None };
        let valid_from = self.valid_from()?;
        Ok(Delete { table, filter, valid_from })
    }

    fn valid_from(&mut self) -> Result<Option<Instant>, ParseError> {
        if !self.eat_keyword("VALID") {
            return Ok(None);
        }
        self.keyword("FROM")?;
        self.instant_literal().map(Some)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let lit = match &self.peek().tok {
            Tok::Int(i) => Literal::Int(*i),
            Tok::Real(r) => Literal::Real(*r),
            Tok::Str(s) => Literal::Text(s.clone()),
            _ => return self.fail(&["number", "string"]),
        };
        self.pos += 1;
        Ok(lit)
    }

    fn instant_literal(&mut self) -> Result<Instant, ParseError> {
        if let Tok::Instant(t) = self.peek().tok {
            self.pos += 1;
            Ok(t)
        } else if self.eat_keyword("FOREVER") {
            Ok(Instant::FOREVER)
        } else {
            self.fail(&["instant"])
        }
    }

    // cond := conj (OR conj)* ; conj := atom (AND atom)*
    fn condition(&mut self) -> Result<Condition, ParseError> {
        let mut left = self.conjunction()?;
        while self.eat_keyword("OR") {
            left = Condition::Or(Box::new(left), Box::new(self.conjunction()?));
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Condition, ParseError> {
        let mut left = self.comparison()?;
        while self.eat_keyword("AND") {
            left = Condition::And(Box::new(left), Box::new(self.comparison()?));
        }
        Ok(left)
    }

    fn comparison(&mut self) -> Result<Condition, ParseError> {
        if self.eat(&Tok::LParen) {
            let c = self.condition()?;
            self.punct(Tok::RParen)?;
            return Ok(c);
        }
        let column = self.ident("column name or `(`")?;
        let op = match self.peek().tok {
            Tok::Op("=") => CmpOp::Eq,
            Tok::Op("<>") => CmpOp::Ne,
            Tok::Op("<") => CmpOp::Lt,
            Tok::Op("<=") => CmpOp::Le,
            Tok::Op(">") => CmpOp::Gt,
            Tok::Op(">=") => CmpOp::Ge,
            _ => return self.fail(&["comparison operator"]),
        };
        self.pos += 1;
        Ok(Condition::Compare { column, op, value: self.literal()? })
    }

    fn temporal(&mut self) -> Result<TemporalCondition, ParseError> {
        let mut left = self.temporal_conjunction()?;
        while self.eat_keyword("OR") {
            left = TemporalCondition::Or(Box::new(left), Box::new(self.temporal_conjunction()?));
        }
        Ok(left)
    }

    fn temporal_conjunction(&mut self) -> Result<TemporalCondition, ParseError> {
        let mut left = self.temporal_term()?;
        while self.eat_keyword("AND") {
            left = TemporalCondition::And(Box::new(left), Box::new(self.temporal_term()?));
        }
        Ok(left)
    }

    fn temporal_term(&mut self) -> Result<TemporalCondition, ParseError> {
        if self.eat(&Tok::LParen) {
            let c = self.temporal()?;
            self.punct(Tok::RParen)?;
            return Ok(c);
        }
        let left = self.operand(&["`(`", "VALID", "`[`", "VALID_START", "VALID_END", "TT", "instant"])?;
        let op_pos = self.here();
        let word = match &self.peek().tok {
            Tok::Word(w) => w.to_ascii_uppercase(),
            _ => return self.fail(&["temporal operator"]),
        };
        let instant_op = match word.as_str() {
            "BEFORE" => Some(InstantOp::Before),
            "AFTER" => Some(InstantOp::After),
            "AT" => Some(InstantOp::At),
            _ => None,
        };
        let relation = AllenRelation::from_keyword(&word);
        if instant_op.is_none() && relation.is_none() {
            return self.fail(&["temporal operator"]);
        }
        self.pos += 1;

        match left {
            Operand::Interval(l) => {
                let Some(relation) = relation else {
                    return Err(ParseError::type_error(op_pos, format!("{word} compares instants, not intervals")));
                };
                let right_pos = self.here();
                match self.operand(&["VALID", "`[`"])? {
                    Operand::Interval(r) => Ok(TemporalCondition::Allen { left: l, relation, right: r }),
                    Operand::Instant(_) => Err(ParseError::type_error(
                        right_pos,
                        format!("{word} needs an interval on the right, found an instant"),
                    )),
                }
            }
            Operand::Instant(l) => {
                let Some(op) = instant_op else {
                    return Err(ParseError::type_error(op_pos, format!("{word} relates intervals, not instants")));
                };
                let right_pos = self.here();
                match self.operand(&["VALID_START", "VALID_END", "TT", "instant"])? {
                    Operand::Instant(r) => Ok(TemporalCondition::Instant { left: l, op, right: r }),
                    Operand::Interval(_) => Err(ParseError::type_error(
                        right_pos,
                        format!("{word} needs an instant on the right, found an interval"),
                    )),
                }
            }
        }
    }

    fn operand(&mut self, expected: &[&str]) -> Result<Operand, ParseError> {
        let pos = self.here();
        match self.peek().tok.clone() {
            Tok::LBracket => {
                self.pos += 1;
                let start = self.instant_literal()?;
                self.punct(Tok::Comma)?;
                let end = self.instant_literal()?;
                self.punct(Tok::RParen)?;
                let iv = Interval::new(start, end).map_err(|e| ParseError::literal(pos, e.to_string()))?;
                Ok(Operand::Interval(IntervalExpr::Literal(iv)))
            }
            Tok::Instant(t) => {
                self.pos += 1;
                Ok(Operand::Instant(InstantExpr::Literal(t)))
            }
            Tok::Word(w) => {
                let op = match w.to_ascii_uppercase().as_str() {
                    "VALID" => Operand::Interval(IntervalExpr::Valid),
                    "VALID_START" => Operand::Instant(InstantExpr::ValidStart),
                    "VALID_END" => Operand::Instant(InstantExpr::ValidEnd),
                    "TT" => Operand::Instant(InstantExpr::Tt),
                    "FOREVER" => Operand::Instant(InstantExpr::Literal(Instant::FOREVER)),
                    _ => return self.fail(expected),
                };
                self.pos += 1;
                Ok(op)
            }
            _ => self.fail(expected),
        }
    }
}

//! Seeded generators and independent oracles shared by the integration and
//! acceptance tests. Nothing here calls the code under test to decide an
//! expected value.
#![allow(dead_code)]

use std::collections::BTreeMap;

use medtriage_core::temporal::{
    AttrType, Attribute, ManualClock, Payload, RecordId, Schema, StoreError, TemporalStore, Value,
};
use medtriage_core::tsql::{
    is_keyword, AllenRelation, CmpOp, Condition, Delete, Insert, InstantExpr, InstantOp, IntervalExpr, Literal,
    Projection, Select, Statement, TemporalCondition, Update,
};
use medtriage_core::{Instant, Interval};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- Allen

/// Allen's relations written out from endpoint comparisons, for half-open
/// intervals `[s, e)`.
pub fn allen_by_definition(a: (i64, i64), b: (i64, i64)) -> Vec<AllenRelation> {
    use AllenRelation::*;
    let ((as_, ae), (bs, be)) = (a, b);
    let table = [
        (Before, ae < bs),
        (After, be < as_),
        (Meets, ae == bs),
        (MetBy, be == as_),
        (Overlaps, as_ < bs && bs < ae && ae < be),
        (OverlappedBy, bs < as_ && as_ < be && be < ae),
        (Starts, as_ == bs && ae < be),
        (StartedBy, as_ == bs && be < ae),
        (During, bs < as_ && ae < be),
        (Contains, as_ < bs && be < ae),
        (Finishes, ae == be && bs < as_),
        (FinishedBy, ae == be && as_ < bs),
        (Equals, as_ == bs && ae == be),
    ];
    table.into_iter().filter(|(_, holds)| *holds).map(|(r, _)| r).collect()
}

pub fn random_interval(r: &mut TestRng, span: i64) -> (i64, i64) {
    let s = r.gen_range(0..span);
    let e = r.gen_range(s + 1..=span);
    (s, e)
}

// ------------------------------------------------------------ store model

pub fn test_schema() -> Schema {
    Schema::new(vec![Attribute::new("a", AttrType::Int), Attribute::new("b", AttrType::Text)]).unwrap()
}

pub fn payload(a: i64, b: &str) -> Payload {
    [("a".to_owned(), Value::Int(a)), ("b".to_owned(), Value::Text(b.to_owned()))].into()
}

#[derive(Debug, Clone)]
pub enum Op {
    Insert { key: String, a: i64, at: i64 },
    Update { key: String, a: i64, at: i64 },
    Delete { key: String, at: i64 },
}

pub fn random_op(r: &mut TestRng, keys: usize, horizon: i64) -> Op {
    let key = format!("k{}", r.gen_range(0..keys));
    let at = r.gen_range(0..horizon);
    let a = r.gen_range(-50..50);
    match r.gen_range(0..10) {
        0..=3 => Op::Insert { key, a, at },
        4..=7 => Op::Update { key, a, at },
        _ => Op::Delete { key, at },
    }
}

/// `n` ops whose instants mostly move forward per key, so most apply; one in
/// five steps backwards to exercise the rejection paths.
pub fn random_op_sequence(r: &mut TestRng, n: usize, keys: usize) -> Vec<Op> {
    let mut cursor = vec![0i64; keys];
    (0..n)
        .map(|_| {
            let k = r.gen_range(0..keys);
            let step = if r.gen_bool(0.2) { r.gen_range(-60..=0) } else { r.gen_range(1..40) };
            let at = (cursor[k] + step).max(0);
            cursor[k] = cursor[k].max(at);
            let (key, a) = (format!("k{k}"), r.gen_range(-50..50));
            match r.gen_range(0..10) {
                0..=2 => Op::Insert { key, a, at },
                3..=7 => Op::Update { key, a, at },
                _ => Op::Delete { key, at },
            }
        })
        .collect()
}

/// Versioned list: every fact ever stored, with `end = None` while open.
#[derive(Debug, Default, Clone)]
pub struct NaiveStore {
    pub facts: Vec<(String, i64, i64, Option<i64>)>,
}

impl NaiveStore {
    fn open_index(&self, key: &str) -> Option<usize> {
        self.facts.iter().position(|f| f.0 == key && f.3.is_none())
    }

    fn last_end(&self, key: &str) -> Option<i64> {
        self.facts.iter().filter(|f| f.0 == key).filter_map(|f| f.3).max()
    }

    /// Applies the op if the bitemporal rules allow it; returns whether it did.
    pub fn apply(&mut self, op: &Op) -> bool {
        match op {
            Op::Insert { key, a, at } => {
                if self.open_index(key).is_some() || self.last_end(key).is_some_and(|e| *at < e) {
                    return false;
                }
                self.facts.push((key.clone(), *a, *at, None));
                true
            }
            Op::Update { key, a, at } => match self.open_index(key) {
                Some(i) if *at > self.facts[i].2 => {
                    self.facts[i].3 = Some(*at);
                    self.facts.push((key.clone(), *a, *at, None));
                    true
                }
                _ => false,
            },
            Op::Delete { key, at } => match self.open_index(key) {
                Some(i) if *at > self.facts[i].2 => {
                    self.facts[i].3 = Some(*at);
                    true
                }
                _ => false,
            },
        }
    }

    /// `(key, a)` for every fact valid at `t`, sorted by key.
    pub fn snapshot(&self, t: i64) -> Vec<(String, i64)> {
        let mut out: Vec<(String, i64)> =
            self.facts.iter().filter(|f| f.2 <= t && f.3.is_none_or(|e| t < e)).map(|f| (f.0.clone(), f.1)).collect();
        out.sort();
        out
    }
}

pub fn apply_to_store(store: &mut TemporalStore, op: &Op) -> Result<(), StoreError> {
    match op {
        Op::Insert { key, a, at } => store.insert("t", key, payload(*a, &format!("v{a}")), Instant(*at)).map(|_| ()),
        Op::Update { key, a, at } => store.update("t", key, payload(*a, &format!("v{a}")), Instant(*at)).map(|_| ()),
        Op::Delete { key, at } => store.delete("t", key, Instant(*at)),
    }
}

pub fn empty_store() -> TemporalStore {
    let mut s = TemporalStore::in_memory(ManualClock::new(Instant(1_000_000)));
    s.create_table("t", test_schema()).unwrap();
    s
}

/// A store grown by random operations until it holds about `versions`
/// versions (or the attempts run out). Only successful ops are kept.
pub fn random_store(r: &mut TestRng, versions: usize) -> TemporalStore {
    let tick = ManualClock::new(Instant(0));
    let mut s = TemporalStore::in_memory(tick.clone());
    s.create_table("t", test_schema()).unwrap();
    let keys = (versions / 8).max(2);
    let mut clock = vec![0i64; keys];
    for _ in 0..versions * 4 {
        if s.table("t").unwrap().version_count() >= versions {
            break;
        }
        let k = r.gen_range(0..keys);
        let key = format!("k{k}");
        // mostly forward-moving instants so most ops succeed
        let at = clock[k] + r.gen_range(1..40);
        let a = r.gen_range(-50..50);
        let op = match r.gen_range(0..10) {
            0..=2 => Op::Insert { key, a, at },
            3..=8 => Op::Update { key, a, at },
            _ => Op::Delete { key, at },
        };
        tick.advance(r.gen_range(0..3));
        if apply_to_store(&mut s, &op).is_ok() {
            clock[k] = at;
        }
    }
    s
}

// ------------------------------------------------------------- TSQL gen

const ALLEN: [AllenRelation; 13] = AllenRelation::ALL;

pub fn random_ident(r: &mut TestRng) -> String {
    const FIRST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    const REST: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789_";
    loop {
        let len = r.gen_range(0..8);
        let mut s = String::new();
        s.push(*FIRST.choose(r).unwrap() as char);
        for _ in 0..len {
            s.push(*REST.choose(r).unwrap() as char);
        }
        if !is_keyword(&s) {
            return s;
        }
    }
}

pub fn random_instant(r: &mut TestRng) -> Instant {
    if r.gen_ratio(1, 10) {
        Instant::FOREVER
    } else {
        Instant(r.gen_range(-2_000_000_000..4_000_000_000))
    }
}

pub fn random_literal_interval(r: &mut TestRng) -> Interval {
    let s = r.gen_range(-2_000_000_000i64..4_000_000_000);
    let e = if r.gen_ratio(1, 5) { Instant::FOREVER } else { Instant(s + r.gen_range(1..10_000_000)) };
    Interval::new(Instant(s), e).unwrap()
}

pub fn random_literal(r: &mut TestRng) -> Literal {
    match r.gen_range(0..3) {
        0 => Literal::Int(match r.gen_range(0..4) {
            0 => i64::MIN,
            1 => i64::MAX,
            _ => r.gen_range(-1000..1000),
        }),
        1 => {
            let x: f64 = match r.gen_range(0..4) {
                0 => r.gen_range(-1.0..1.0),
                1 => r.gen_range(-1e9..1e9),
                2 => r.gen_range(-1e-6..1e-6),
                _ => r.gen_range(-100i32..100) as f64,
            };
            Literal::Real(x)
        }
        _ => {
            let pool = ["", "x", "it's", "a b", "''", "J00", "ünï", "semi;colon", "(paren)"];
            Literal::Text(pool.choose(r).unwrap().to_string())
        }
    }
}

fn random_cmp(r: &mut TestRng) -> CmpOp {
    *[CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge].choose(r).unwrap()
}

pub fn random_condition(r: &mut TestRng, depth: u32) -> Condition {
    if depth == 0 || r.gen_ratio(1, 2) {
        return Condition::Compare { column: random_ident(r), op: random_cmp(r), value: random_literal(r) };
    }
    let (a, b) = (Box::new(random_condition(r, depth - 1)), Box::new(random_condition(r, depth - 1)));
    if r.gen() {
        Condition::And(a, b)
    } else {
        Condition::Or(a, b)
    }
}

fn random_interval_expr(r: &mut TestRng) -> IntervalExpr {
    if r.gen() {
        IntervalExpr::Valid
    } else {
        IntervalExpr::Literal(random_literal_interval(r))
    }
}

fn random_instant_expr(r: &mut TestRng) -> InstantExpr {
    match r.gen_range(0..4) {
        0 => InstantExpr::ValidStart,
        1 => InstantExpr::ValidEnd,
        2 => InstantExpr::Tt,
        _ => InstantExpr::Literal(random_instant(r)),
    }
}

pub fn random_temporal(r: &mut TestRng, depth: u32) -> TemporalCondition {
    random_temporal_with(r, depth, &random_interval_expr, &random_instant_expr)
}

pub fn random_temporal_with(
    r: &mut TestRng,
    depth: u32,
    interval: &dyn Fn(&mut TestRng) -> IntervalExpr,
    instant: &dyn Fn(&mut TestRng) -> InstantExpr,
) -> TemporalCondition {
    if depth == 0 || r.gen_ratio(1, 2) {
        return if r.gen() {
            TemporalCondition::Allen { left: interval(r), relation: *ALLEN.choose(r).unwrap(), right: interval(r) }
        } else {
            let op = *[InstantOp::Before, InstantOp::After, InstantOp::At].choose(r).unwrap();
            TemporalCondition::Instant { left: instant(r), op, right: instant(r) }
        };
    }
    let a = Box::new(random_temporal_with(r, depth - 1, interval, instant));
    let b = Box::new(random_temporal_with(r, depth - 1, interval, instant));
    if r.gen() {
        TemporalCondition::And(a, b)
    } else {
        TemporalCondition::Or(a, b)
    }
}

fn valid_from(r: &mut TestRng) -> Option<Instant> {
    r.gen::<bool>().then(|| random_instant(r))
}

pub fn random_statement(r: &mut TestRng) -> Statement {
    let table = random_ident(r);
    let filter = |r: &mut TestRng| r.gen::<bool>().then(|| random_condition(r, 3));
    match r.gen_range(0..4) {
        0 => Statement::Select(Select {
            projection: if r.gen() {
                Projection::All
            } else {
                Projection::Columns((0..r.gen_range(1..4)).map(|_| random_ident(r)).collect())
            },
            table,
            filter: filter(r),
            when: r.gen::<bool>().then(|| random_temporal(r, 3)),
        }),
        1 => {
            let n = r.gen_range(1..5);
            Statement::Insert(Insert {
                table,
                columns: (0..n).map(|_| random_ident(r)).collect(),
                values: (0..n).map(|_| random_literal(r)).collect(),
                valid_from: valid_from(r),
            })
        }
        2 => Statement::Update(Update {
            table,
            assignments: (0..r.gen_range(1..4)).map(|_| (random_ident(r), random_literal(r))).collect(),
            filter: filter(r),
            valid_from: valid_from(r),
        }),
        _ => Statement::Delete(Delete { table, filter: filter(r), valid_from: valid_from(r) }),
    }
}

// ---------------------------------------------------------- query oracle

/// A `SELECT * FROM t … WHEN …` whose literals are mostly drawn from the
/// store's own endpoints and intervals, so strict relations such as MEETS or
/// EQUALS actually get exercised.
pub fn random_store_query(r: &mut TestRng, store: &TemporalStore) -> Select {
    let t = store.table("t").unwrap();
    let intervals: Vec<(i64, i64)> = t.versions().map(|v| (v.valid.start().0, v.valid.end().0)).collect();
    let mut points: Vec<i64> = t.versions().flat_map(|v| [v.valid.start().0, v.valid.end().0, v.tt.0]).collect();
    points.sort_unstable();
    points.dedup();
    let finite: Vec<i64> = points.iter().copied().filter(|p| *p != i64::MAX).collect();
    let hi = finite.last().copied().unwrap_or(0) + 50;

    let instant = |r: &mut TestRng| -> InstantExpr {
        match r.gen_range(0..6) {
            0 => InstantExpr::ValidStart,
            1 => InstantExpr::ValidEnd,
            2 => InstantExpr::Tt,
            3 => InstantExpr::Literal(Instant(r.gen_range(0..hi))),
            _ => InstantExpr::Literal(Instant(*points.choose(r).unwrap_or(&0))),
        }
    };
    let interval = |r: &mut TestRng| -> IntervalExpr {
        let (s, e) = match r.gen_range(0..5) {
            0 => return IntervalExpr::Valid,
            1 if !intervals.is_empty() => *intervals.choose(r).unwrap(),
            2 if finite.len() >= 2 => {
                let a = *finite.choose(r).unwrap();
                let b = *points.choose(r).unwrap();
                if a < b {
                    (a, b)
                } else if b < a {
                    (b, a)
                } else {
                    (a, a + 1)
                }
            }
            _ => {
                let s = r.gen_range(0..hi);
                (s, if r.gen_ratio(1, 5) { i64::MAX } else { s + r.gen_range(1..200) })
            }
        };
        IntervalExpr::Literal(Interval::new(Instant(s), Instant(e)).unwrap())
    };

    let filter = r.gen_ratio(1, 3).then(|| {
        if r.gen() {
            Condition::Compare { column: "a".into(), op: random_cmp(r), value: Literal::Int(r.gen_range(-50..50)) }
        } else {
            let key = t.versions().map(|v| v.key.clone()).collect::<Vec<_>>().choose(r).cloned().unwrap_or_default();
            Condition::Compare { column: "key".into(), op: random_cmp(r), value: Literal::Text(key) }
        }
    });
    Select {
        projection: Projection::All,
        table: "t".into(),
        filter,
        when: Some(random_temporal_with(r, 2, &interval, &instant)),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FlatVersion {
    pub id: RecordId,
    pub start: Instant,
    pub end: Instant,
    pub tt: Instant,
}

fn when_holds(v: &FlatVersion, c: &TemporalCondition) -> bool {
    let iv = |e: &IntervalExpr| match e {
        IntervalExpr::Valid => (v.start.0, v.end.0),
        IntervalExpr::Literal(i) => (i.start().0, i.end().0),
    };
    let inst = |e: &InstantExpr| match e {
        InstantExpr::ValidStart => v.start.0,
        InstantExpr::ValidEnd => v.end.0,
        InstantExpr::Tt => v.tt.0,
        InstantExpr::Literal(t) => t.0,
    };
    match c {
        TemporalCondition::Allen { left, relation, right } => {
            let (a, b) = (iv(left), iv(right));
            if *relation == AllenRelation::Overlaps {
                a.0 < b.1 && b.0 < a.1
            } else {
                allen_by_definition(a, b).contains(relation)
            }
        }
        TemporalCondition::Instant { left, op, right } => {
            let (a, b) = (inst(left), inst(right));
            match op {
                InstantOp::Before => a < b,
                InstantOp::After => a > b,
                InstantOp::At => a == b,
            }
        }
        TemporalCondition::And(l, rr) => when_holds(v, l) && when_holds(v, rr),
        TemporalCondition::Or(l, rr) => when_holds(v, l) || when_holds(v, rr),
    }
}

fn where_holds(key: &str, a: i64, c: &Condition) -> bool {
    match c {
        Condition::Compare { column, op, value } => {
            let ord = match (column.as_str(), value) {
                ("a", Literal::Int(x)) => a.cmp(x),
                ("key", Literal::Text(x)) => key.cmp(x.as_str()),
                _ => return false,
            };
            use std::cmp::Ordering::*;
            match op {
                CmpOp::Eq => ord == Equal,
                CmpOp::Ne => ord != Equal,
                CmpOp::Lt => ord == Less,
                CmpOp::Le => ord != Greater,
                CmpOp::Gt => ord == Greater,
                CmpOp::Ge => ord != Less,
            }
        }
        Condition::And(l, r) => where_holds(key, a, l) && where_holds(key, a, r),
        Condition::Or(l, r) => where_holds(key, a, l) || where_holds(key, a, r),
    }
}

/// Version ids a `SELECT … WHEN` over table `t` must return, in result
/// order (key, valid start, id).
pub fn brute_force_select(store: &TemporalStore, q: &Select) -> Vec<RecordId> {
    let t = store.table("t").unwrap();
    let mut hits: Vec<(String, Instant, RecordId)> = Vec::new();
    for v in t.history().iter().chain(t.current()) {
        let flat = FlatVersion { id: v.id, start: v.valid.start(), end: v.valid.end(), tt: v.tt };
        let a = match v.payload["a"] {
            Value::Int(i) => i,
            _ => unreachable!(),
        };
        let when_ok = q.when.as_ref().is_none_or(|c| when_holds(&flat, c));
        let where_ok = q.filter.as_ref().is_none_or(|c| where_holds(&v.key, a, c));
        if when_ok && where_ok {
            hits.push((v.key.clone(), flat.start, v.id));
        }
    }
    hits.sort();
    hits.into_iter().map(|h| h.2).collect()
}

// --------------------------------------------------------- least squares

/// Slope and intercept from the raw 2x2 normal equations
/// `[n Σx; Σx Σx²] [b; m] = [Σy; Σxy]`, solved by Cramer's rule.
pub fn normal_equations(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sy: f64 = ys.iter().sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    let m = (n * sxy - sx * sy) / det;
    let b = (sxx * sy - sx * sxy) / det;
    (m, b)
}

/// Minimum SSE over every assignment of 1-D points to `k` non-empty groups.
pub fn exhaustive_kmeans_1d(points: &[f64], k: usize) -> (f64, Vec<usize>) {
    let n = points.len();
    let mut best = (f64::INFINITY, Vec::new());
    let total = k.pow(n as u32);
    for code in 0..total {
        let mut assign = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            assign.push(c % k);
            c /= k;
        }
        let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (p, g) in points.iter().zip(&assign) {
            groups.entry(*g).or_default().push(*p);
        }
        if groups.len() != k {
            continue;
        }
        let sse: f64 = groups
            .values()
            .map(|g| {
                let m = g.iter().sum::<f64>() / g.len() as f64;
                g.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
            })
            .sum();
        if sse < best.0 {
            best = (sse, assign);
        }
    }
    best
}

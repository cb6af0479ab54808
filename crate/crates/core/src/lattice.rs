// Copyright 2026 The PCCP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Primitive lattices, the interval lattice and the shared store.
//!
//! Every lattice element fits in at most two machine words. Integers are `i64`
//! where `i64::MIN` and `i64::MAX` are reserved for `-inf` and `+inf`, so that
//! the finite part of the lattice is `i64::MIN + 1 ..= i64::MAX - 1`.
//!
//! The [`Store`] is an array of atomic words. A variable always occupies two
//! consecutive words (scalars leave the second one at zero) and every word only
//! moves upward in its own order: lower bounds grow, upper bounds shrink. All
//! writes are joins implemented with a single atomic read-modify-write, so
//! concurrent writers never overwrite a stronger value with a weaker one.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicBool, AtomicI64, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Sentinel of `-inf`.
pub const NEG_INF: i64 = i64::MIN;
/// Sentinel of `+inf`.
pub const POS_INF: i64 = i64::MAX;

/// A join-semilattice with a bottom and a top element.
pub trait Lattice: Copy + Eq + fmt::Debug {
    fn bot() -> Self;
    fn top() -> Self;
    fn join(self, other: Self) -> Self;
    fn leq(self, other: Self) -> bool;

    fn is_top(self) -> bool {
        self == Self::top()
    }

    fn is_bot(self) -> bool {
        self == Self::bot()
    }
}

/// Increasing integers: the more information, the larger the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ZInc(pub i64);

/// Decreasing integers, the dual of [`ZInc`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ZDec(pub i64);

impl Lattice for ZInc {
    fn bot() -> Self {
        ZInc(NEG_INF)
    }
    fn top() -> Self {
        ZInc(POS_INF)
    }
    fn join(self, other: Self) -> Self {
        ZInc(self.0.max(other.0))
    }
    fn leq(self, other: Self) -> bool {
        self.0 <= other.0
    }
}

impl Lattice for ZDec {
    fn bot() -> Self {
        ZDec(POS_INF)
    }
    fn top() -> Self {
        ZDec(NEG_INF)
    }
    fn join(self, other: Self) -> Self {
        ZDec(self.0.min(other.0))
    }
    fn leq(self, other: Self) -> bool {
        self.0 >= other.0
    }
}

/// Booleans ordered `false < true`, with a separate contradiction element
/// above `true`.
///
/// The value is stored as an information level: 0 is `false` (bottom), 1 is
/// `true` and 2 is top.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BInc(u8);

/// Booleans ordered `true < false`, with a separate contradiction element
/// above `false`.
///
/// Stored as an information level: 0 is `true` (bottom), 1 is `false`, 2 is top.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BDec(u8);

impl BInc {
    pub const FALSE: BInc = BInc(0);
    pub const TRUE: BInc = BInc(1);
    pub const TOP: BInc = BInc(2);

    pub fn from_bool(b: bool) -> Self {
        if b {
            BInc::TRUE
        } else {
            BInc::FALSE
        }
    }

    /// `true` or top.
    pub fn is_true(self) -> bool {
        self.0 >= 1
    }

    pub fn level(self) -> u8 {
        self.0
    }
}

impl BDec {
    pub const TRUE: BDec = BDec(0);
    pub const FALSE: BDec = BDec(1);
    pub const TOP: BDec = BDec(2);

    pub fn from_bool(b: bool) -> Self {
        if b {
            BDec::TRUE
        } else {
            BDec::FALSE
        }
    }

    /// `false` or top.
    pub fn is_false(self) -> bool {
        self.0 >= 1
    }

    pub fn level(self) -> u8 {
        self.0
    }
}

macro_rules! level_lattice {
    ($t:ident) => {
        impl Lattice for $t {
            fn bot() -> Self {
                $t(0)
            }
            fn top() -> Self {
                $t(2)
            }
            fn join(self, other: Self) -> Self {
                $t(self.0.max(other.0))
            }
            fn leq(self, other: Self) -> bool {
                self.0 <= other.0
            }
        }
    };
}

level_lattice!(BInc);
level_lattice!(BDec);

/// Integer intervals, the product `ZInc x ZDec`.
///
/// Every interval with `lb > ub` denotes the empty set and is the top element;
/// equality and hashing treat all of them as one value.
#[derive(Clone, Copy, Debug)]
pub struct Interval {
    lb: ZInc,
    ub: ZDec,
}

impl Interval {
    pub const TOP: Interval = Interval {
        lb: ZInc(POS_INF),
        ub: ZDec(NEG_INF),
    };

    pub fn new(lb: i64, ub: i64) -> Self {
        Interval {
            lb: ZInc(lb),
            ub: ZDec(ub),
        }
    }

    pub fn singleton(v: i64) -> Self {
        Interval::new(v, v)
    }

    /// `(lb, +inf)`: only constrains the lower bound.
    pub fn at_least(lb: i64) -> Self {
        Interval::new(lb, POS_INF)
    }

    /// `(-inf, ub)`: only constrains the upper bound.
    pub fn at_most(ub: i64) -> Self {
        Interval::new(NEG_INF, ub)
    }

    /// Projection on the lower bound.
    pub fn lb(self) -> i64 {
        self.lb.0
    }

    /// Projection on the upper bound.
    pub fn ub(self) -> i64 {
        self.ub.0
    }

    pub fn is_empty(self) -> bool {
        self.lb.0 > self.ub.0
    }

    pub fn is_singleton(self) -> bool {
        self.lb.0 == self.ub.0
    }

    /// Number of integers in the interval, saturated.
    pub fn width(self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.ub.0 as i128 - self.lb.0 as i128 + 1).min(u64::MAX as i128) as u64
        }
    }

    pub fn contains(self, v: i64) -> bool {
        self.lb.0 <= v && v <= self.ub.0
    }

    /// Maps every empty interval to [`Interval::TOP`].
    pub fn canonical(self) -> Self {
        if self.is_empty() {
            Interval::TOP
        } else {
            self
        }
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a.lb == b.lb && a.ub == b.ub
    }
}

impl Eq for Interval {}

impl Hash for Interval {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let c = self.canonical();
        c.lb.hash(state);
        c.ub.hash(state);
    }
}

impl Lattice for Interval {
    fn bot() -> Self {
        Interval::new(NEG_INF, POS_INF)
    }
    fn top() -> Self {
        Interval::TOP
    }
    fn join(self, other: Self) -> Self {
        Interval {
            lb: self.lb.join(other.lb),
            ub: self.ub.join(other.ub),
        }
    }
    fn leq(self, other: Self) -> bool {
        if other.is_empty() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        self.lb.leq(other.lb) && self.ub.leq(other.ub)
    }
}

fn fmt_bound(f: &mut fmt::Formatter<'_>, v: i64) -> fmt::Result {
    match v {
        NEG_INF => write!(f, "-inf"),
        POS_INF => write!(f, "+inf"),
        v => write!(f, "{v}"),
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        write!(f, "(")?;
        fmt_bound(f, self.lb())?;
        write!(f, ", ")?;
        fmt_bound(f, self.ub())?;
        write!(f, ")")
    }
}

/// Lattice tag of a store variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Kind {
    ZInc,
    ZDec,
    BInc,
    BDec,
    Interval,
}

/// Join direction of a single store word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dir {
    /// Join is `max`.
    Up,
    /// Join is `min`.
    Down,
}

impl Kind {
    pub fn dirs(self) -> [Dir; 2] {
        match self {
            Kind::ZDec => [Dir::Down, Dir::Up],
            Kind::Interval => [Dir::Up, Dir::Down],
            _ => [Dir::Up, Dir::Up],
        }
    }

    /// Longest strictly increasing chain in the lattice, saturated to `u64`.
    pub fn height(self) -> u64 {
        match self {
            Kind::BInc | Kind::BDec => 2,
            Kind::ZInc | Kind::ZDec => u64::MAX,
            Kind::Interval => u64::MAX,
        }
    }
}

/// An element of one of the supported lattices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Value {
    ZInc(ZInc),
    ZDec(ZDec),
    BInc(BInc),
    BDec(BDec),
    Interval(Interval),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("lattice mismatch: expected {expected:?}, found {found:?}")]
    KindMismatch { expected: Kind, found: Kind },
    #[error("unknown variable #{0}")]
    UnknownVar(usize),
}

impl Value {
    pub fn kind(self) -> Kind {
        match self {
            Value::ZInc(_) => Kind::ZInc,
            Value::ZDec(_) => Kind::ZDec,
            Value::BInc(_) => Kind::BInc,
            Value::BDec(_) => Kind::BDec,
            Value::Interval(_) => Kind::Interval,
        }
    }

    pub fn bot(kind: Kind) -> Self {
        match kind {
            Kind::ZInc => Value::ZInc(ZInc::bot()),
            Kind::ZDec => Value::ZDec(ZDec::bot()),
            Kind::BInc => Value::BInc(BInc::bot()),
            Kind::BDec => Value::BDec(BDec::bot()),
            Kind::Interval => Value::Interval(Interval::bot()),
        }
    }

    pub fn top(kind: Kind) -> Self {
        match kind {
            Kind::ZInc => Value::ZInc(ZInc::top()),
            Kind::ZDec => Value::ZDec(ZDec::top()),
            Kind::BInc => Value::BInc(BInc::top()),
            Kind::BDec => Value::BDec(BDec::top()),
            Kind::Interval => Value::Interval(Interval::top()),
        }
    }

    fn check(self, other: Value) -> Result<(), SchemaError> {
        if self.kind() == other.kind() {
            Ok(())
        } else {
            Err(SchemaError::KindMismatch {
                expected: self.kind(),
                found: other.kind(),
            })
        }
    }

    pub fn join(self, other: Value) -> Result<Value, SchemaError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Value::ZInc(a), Value::ZInc(b)) => Value::ZInc(a.join(b)),
            (Value::ZDec(a), Value::ZDec(b)) => Value::ZDec(a.join(b)),
            (Value::BInc(a), Value::BInc(b)) => Value::BInc(a.join(b)),
            (Value::BDec(a), Value::BDec(b)) => Value::BDec(a.join(b)),
            (Value::Interval(a), Value::Interval(b)) => Value::Interval(a.join(b)),
            _ => unreachable!(),
        })
    }

    pub fn leq(self, other: Value) -> Result<bool, SchemaError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Value::ZInc(a), Value::ZInc(b)) => a.leq(b),
            (Value::ZDec(a), Value::ZDec(b)) => a.leq(b),
            (Value::BInc(a), Value::BInc(b)) => a.leq(b),
            (Value::BDec(a), Value::BDec(b)) => a.leq(b),
            (Value::Interval(a), Value::Interval(b)) => a.leq(b),
            _ => unreachable!(),
        })
    }

    pub fn is_top(self) -> bool {
        match self {
            Value::ZInc(v) => v.is_top(),
            Value::ZDec(v) => v.is_top(),
            Value::BInc(v) => v.is_top(),
            Value::BDec(v) => v.is_top(),
            Value::Interval(v) => v.is_empty(),
        }
    }

    pub fn as_interval(self) -> Option<Interval> {
        match self {
            Value::Interval(i) => Some(i),
            _ => None,
        }
    }

    pub(crate) fn to_words(self) -> [i64; 2] {
        match self {
            Value::ZInc(v) => [v.0, 0],
            Value::ZDec(v) => [v.0, 0],
            Value::BInc(v) => [v.0 as i64, 0],
            Value::BDec(v) => [v.0 as i64, 0],
            Value::Interval(i) => [i.lb(), i.ub()],
        }
    }

    pub(crate) fn from_words(kind: Kind, w: [i64; 2]) -> Self {
        match kind {
            Kind::ZInc => Value::ZInc(ZInc(w[0])),
            Kind::ZDec => Value::ZDec(ZDec(w[0])),
            Kind::BInc => Value::BInc(BInc(w[0].clamp(0, 2) as u8)),
            Kind::BDec => Value::BDec(BDec(w[0].clamp(0, 2) as u8)),
            Kind::Interval => Value::Interval(Interval::new(w[0], w[1])),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Value::ZInc(v) => fmt_bound(f, v.0),
            Value::ZDec(v) => fmt_bound(f, v.0),
            Value::BInc(v) => write!(f, "{}", ["false", "true", "top"][v.0 as usize]),
            Value::BDec(v) => write!(f, "{}", ["true", "false", "top"][v.0 as usize]),
            Value::Interval(i) => write!(f, "{i}"),
        }
    }
}

impl From<Interval> for Value {
    fn from(i: Interval) -> Self {
        Value::Interval(i)
    }
}

/// Index of a variable in a [`Schema`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
    fn lo_word(self) -> usize {
        2 * self.0
    }
    fn hi_word(self) -> usize {
        2 * self.0 + 1
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub kind: Kind,
}

/// Names and lattice tags of the store variables. Fixed once a store exists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schema {
    vars: Vec<VarInfo>,
    by_name: HashMap<String, VarId>,
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a variable. Names need not be unique; [`Schema::find`] returns
    /// the first one declared.
    pub fn push(&mut self, name: impl Into<String>, kind: Kind) -> VarId {
        let id = VarId(self.vars.len());
        let name = name.into();
        self.by_name.entry(name.clone()).or_insert(id);
        self.vars.push(VarInfo { name, kind });
        id
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn kind(&self, v: VarId) -> Kind {
        self.vars[v.0].kind
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.vars[v.0].name
    }

    pub fn find(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = (VarId, &VarInfo)> + '_ {
        self.vars.iter().enumerate().map(|(i, info)| (VarId(i), info))
    }

    pub fn check(&self, v: VarId, kind: Kind) -> Result<(), SchemaError> {
        match self.vars.get(v.0) {
            None => Err(SchemaError::UnknownVar(v.0)),
            Some(info) if info.kind != kind => Err(SchemaError::KindMismatch {
                expected: info.kind,
                found: kind,
            }),
            Some(_) => Ok(()),
        }
    }

    fn bottom_words(&self) -> Vec<i64> {
        self.vars.iter().flat_map(|v| Value::bot(v.kind).to_words()).collect()
    }

    fn dir(&self, word: usize) -> Dir {
        self.vars[word / 2].kind.dirs()[word % 2]
    }
}

/// Read access to store words; implemented by the shared [`Store`] and by
/// plain [`Snapshot`]s.
pub trait StoreView {
    fn schema(&self) -> &Schema;
    fn word(&self, i: usize) -> i64;

    fn lb(&self, v: VarId) -> i64 {
        self.word(v.lo_word())
    }

    fn ub(&self, v: VarId) -> i64 {
        self.word(v.hi_word())
    }

    fn value(&self, v: VarId) -> Value {
        Value::from_words(self.schema().kind(v), [self.word(v.lo_word()), self.word(v.hi_word())])
    }

    fn interval(&self, v: VarId) -> Interval {
        Interval::new(self.lb(v), self.ub(v))
    }

    /// True iff some interval is empty or some scalar sits on its top.
    fn is_failed(&self) -> bool {
        self.schema().vars().any(|(v, _)| self.value(v).is_top())
    }
}

/// The shared store: one atomic cell pair per variable.
///
/// All accesses use relaxed atomics. An interval is two independent cells, so
/// its bounds may be observed at different instants; each bound is monotone on
/// its own.
pub struct Store {
    schema: Arc<Schema>,
    words: Box<[AtomicI64]>,
    failed_hint: AtomicBool,
}

impl Store {
    /// A store where every variable is at bottom.
    pub fn new(schema: Arc<Schema>) -> Self {
        let words = schema.bottom_words().into_iter().map(AtomicI64::new).collect();
        Store {
            schema,
            words,
            failed_hint: AtomicBool::new(false),
        }
    }

    pub fn from_snapshot(s: &Snapshot) -> Self {
        let store = Store::new(s.schema.clone());
        for (cell, w) in store.words.iter().zip(&s.words) {
            cell.store(*w, Ordering::Relaxed);
        }
        store.failed_hint.store(s.is_failed(), Ordering::Relaxed);
        store
    }

    pub fn schema_arc(&self) -> &Arc<Schema> {
        &self.schema
    }

    /// Overwrites this store with the content of `other`; used to restore the
    /// root of a subproblem. Both stores must share the same schema.
    pub fn copy_from(&self, other: &Store) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (dst, src) in self.words.iter().zip(other.words.iter()) {
            dst.store(src.load(Ordering::Relaxed), Ordering::Relaxed);
        }
        self.failed_hint
            .store(other.failed_hint.load(Ordering::Relaxed), Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            schema: self.schema.clone(),
            words: self.words.iter().map(|w| w.load(Ordering::Relaxed)).collect(),
        }
    }

    /// `cell := cell ⊔ value`. Returns whether the cell strictly increased.
    pub fn join(&self, v: VarId, value: Value) -> Result<bool, SchemaError> {
        self.schema.check(v, value.kind())?;
        Ok(match value {
            Value::ZInc(x) => self.join_zinc(v, x.0),
            Value::ZDec(x) => self.join_zdec(v, x.0),
            Value::BInc(x) => self.join_level(v, x.level()),
            Value::BDec(x) => self.join_level(v, x.level()),
            Value::Interval(i) => {
                let a = self.join_lb(v, i.lb());
                let b = self.join_ub(v, i.ub());
                a | b
            }
        })
    }

    fn join_max(&self, word: usize, x: i64) -> bool {
        let cell = &self.words[word];
        if x <= cell.load(Ordering::Relaxed) {
            return false;
        }
        cell.fetch_max(x, Ordering::Relaxed) < x
    }

    fn join_min(&self, word: usize, x: i64) -> bool {
        let cell = &self.words[word];
        if x >= cell.load(Ordering::Relaxed) {
            return false;
        }
        cell.fetch_min(x, Ordering::Relaxed) > x
    }

    /// Joins the lower bound of an interval variable.
    pub fn join_lb(&self, v: VarId, x: i64) -> bool {
        let changed = self.join_max(v.lo_word(), x);
        if changed && x > self.ub(v) {
            self.failed_hint.store(true, Ordering::Relaxed);
        }
        changed
    }

    /// Joins the upper bound of an interval variable.
    pub fn join_ub(&self, v: VarId, x: i64) -> bool {
        let changed = self.join_min(v.hi_word(), x);
        if changed && x < self.lb(v) {
            self.failed_hint.store(true, Ordering::Relaxed);
        }
        changed
    }

    pub fn join_zinc(&self, v: VarId, x: i64) -> bool {
        let changed = self.join_max(v.lo_word(), x);
        if changed && x == POS_INF {
            self.failed_hint.store(true, Ordering::Relaxed);
        }
        changed
    }

    pub fn join_zdec(&self, v: VarId, x: i64) -> bool {
        let changed = self.join_min(v.lo_word(), x);
        if changed && x == NEG_INF {
            self.failed_hint.store(true, Ordering::Relaxed);
        }
        changed
    }

    /// Joins a boolean information level (see [`BInc`] and [`BDec`]).
    pub fn join_level(&self, v: VarId, level: u8) -> bool {
        let changed = self.join_max(v.lo_word(), level as i64);
        if changed && level >= 2 {
            self.failed_hint.store(true, Ordering::Relaxed);
        }
        changed
    }

    /// Cheap failure indicator maintained by the join operations. Under
    /// concurrent writers it may lag behind; [`StoreView::is_failed`] is exact.
    pub fn failure_hint(&self) -> bool {
        self.failed_hint.load(Ordering::Relaxed)
    }

    pub fn words_len(&self) -> usize {
        self.words.len()
    }
}

impl StoreView for Store {
    fn schema(&self) -> &Schema {
        &self.schema
    }
    fn word(&self, i: usize) -> i64 {
        self.words[i].load(Ordering::Relaxed)
    }
}

impl Clone for Store {
    fn clone(&self) -> Self {
        Store::from_snapshot(&self.snapshot())
    }
}

impl fmt::Debug for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.snapshot(), f)
    }
}

/// A plain copy of the store words.
#[derive(Clone)]
pub struct Snapshot {
    schema: Arc<Schema>,
    words: Vec<i64>,
}

impl Snapshot {
    pub fn bottom(schema: Arc<Schema>) -> Self {
        let words = schema.bottom_words();
        Snapshot { schema, words }
    }

    pub fn schema_arc(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn words(&self) -> &[i64] {
        &self.words
    }

    pub fn set(&mut self, v: VarId, value: Value) -> Result<(), SchemaError> {
        self.schema.check(v, value.kind())?;
        let [a, b] = value.to_words();
        self.words[v.lo_word()] = a;
        self.words[v.hi_word()] = b;
        Ok(())
    }

    /// Overwrites a variable with a value without joining. Only the
    /// load/store machine needs this.
    pub(crate) fn assign(&mut self, v: VarId, value: Value) {
        let [a, b] = value.to_words();
        self.words[v.lo_word()] = a;
        self.words[v.hi_word()] = b;
    }

    /// The embedding `embed_v(s, value)`. Returns whether the store changed.
    pub fn join_value(&mut self, v: VarId, value: Value) -> Result<bool, SchemaError> {
        self.schema.check(v, value.kind())?;
        let old = self.value(v);
        let new = old.join(value)?;
        let [a, b] = new.to_words();
        let changed = self.words[v.lo_word()] != a || self.words[v.hi_word()] != b;
        self.words[v.lo_word()] = a;
        self.words[v.hi_word()] = b;
        Ok(changed)
    }

    /// Pointwise join of two snapshots over the same schema.
    pub fn join(&self, other: &Snapshot) -> Snapshot {
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .enumerate()
            .map(|(i, (&a, &b))| match self.schema.dir(i) {
                Dir::Up => a.max(b),
                Dir::Down => a.min(b),
            })
            .collect();
        Snapshot {
            schema: self.schema.clone(),
            words,
        }
    }

    /// Pointwise order; a failed snapshot is above everything.
    pub fn leq(&self, other: &Snapshot) -> bool {
        if other.is_failed() {
            return true;
        }
        self.schema
            .vars()
            .all(|(v, _)| self.value(v).leq(other.value(v)).unwrap_or(false))
    }

    /// Representative used for equality checks: a failed store becomes the
    /// all-top store, and empty intervals are normalised otherwise.
    pub fn canonical(&self) -> Snapshot {
        let failed = self.is_failed();
        let mut out = self.clone();
        for (v, info) in self.schema.vars() {
            let value = if failed { Value::top(info.kind) } else { self.value(v) };
            out.assign(v, value);
        }
        out
    }

    /// First variable whose canonical values differ.
    pub fn first_difference(&self, other: &Snapshot) -> Option<VarId> {
        let (a, b) = (self.canonical(), other.canonical());
        (0..a.schema.len()).map(VarId).find(|&v| a.value(v) != b.value(v))
    }
}

impl StoreView for Snapshot {
    fn schema(&self) -> &Schema {
        &self.schema
    }
    fn word(&self, i: usize) -> i64 {
        self.words[i]
    }
}

impl PartialEq for Snapshot {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl Eq for Snapshot {}

impl Hash for Snapshot {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, info)) in self.schema.vars().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", info.name, self.value(v))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

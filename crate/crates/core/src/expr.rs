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

//! Monotone expressions over store cells.
//!
//! Expressions are built from atoms that read one word of the store. Every
//! atom has a polarity: it is either increasing or decreasing as the store
//! gains information. Linear combinations, divisions by positive constants,
//! `min` and `max` preserve a common polarity, so any expression accepted by
//! [`IntExpr::polarity`] is monotone by construction. Comparisons `lhs <= rhs`
//! with a decreasing `lhs` and an increasing `rhs` are monotone predicates.

use std::fmt;
use std::sync::Arc;

use crate::error::ModelError;
use crate::lattice::{BInc, Kind, Schema, StoreView, Value, VarId, NEG_INF, POS_INF};

/// Direction in which an expression moves when the store grows.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Polarity {
    Inc,
    Dec,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Inc => Polarity::Dec,
            Polarity::Dec => Polarity::Inc,
        }
    }
}

/// A single store word read as an integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Atom<V = VarId> {
    /// Lower bound of an interval, `⌊x⌋`.
    Lb(V),
    /// Upper bound of an interval, `⌈x⌉`.
    Ub(V),
    /// A `ZInc` cell.
    Inc(V),
    /// A `ZDec` cell.
    Dec(V),
}

impl<V: Clone> Atom<V> {
    pub fn var(&self) -> V {
        match self {
            Atom::Lb(v) | Atom::Ub(v) | Atom::Inc(v) | Atom::Dec(v) => v.clone(),
        }
    }

    pub fn polarity(&self) -> Polarity {
        match self {
            Atom::Lb(_) | Atom::Inc(_) => Polarity::Inc,
            Atom::Ub(_) | Atom::Dec(_) => Polarity::Dec,
        }
    }

    fn map<W, E>(&self, f: &mut impl FnMut(V) -> Result<W, E>) -> Result<Atom<W>, E> {
        Ok(match self {
            Atom::Lb(v) => Atom::Lb(f(v.clone())?),
            Atom::Ub(v) => Atom::Ub(f(v.clone())?),
            Atom::Inc(v) => Atom::Inc(f(v.clone())?),
            Atom::Dec(v) => Atom::Dec(f(v.clone())?),
        })
    }
}

impl Atom {
    pub fn read(self, s: &(impl StoreView + ?Sized)) -> i64 {
        match self {
            Atom::Lb(v) | Atom::Inc(v) | Atom::Dec(v) => s.lb(v),
            Atom::Ub(v) => s.ub(v),
        }
    }

    fn expected_kind(self) -> Kind {
        match self {
            Atom::Lb(_) | Atom::Ub(_) => Kind::Interval,
            Atom::Inc(_) => Kind::ZInc,
            Atom::Dec(_) => Kind::ZDec,
        }
    }
}

fn saturate(x: i128) -> i64 {
    x.clamp(NEG_INF as i128, POS_INF as i128) as i64
}

/// Product of a coefficient and a bound, with `0 * inf = 0`.
pub fn mul_bound(coef: i64, x: i64) -> i64 {
    match (coef.signum(), x) {
        (0, _) => 0,
        (1, POS_INF) | (-1, NEG_INF) => POS_INF,
        (1, NEG_INF) | (-1, POS_INF) => NEG_INF,
        _ => saturate(coef as i128 * x as i128),
    }
}

/// `constant + Σ coef * atom`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinExpr<V = VarId> {
    pub constant: i64,
    pub terms: Vec<(i64, Atom<V>)>,
}

impl<V: Clone> LinExpr<V> {
    pub fn constant(c: i64) -> Self {
        LinExpr {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn atom(a: Atom<V>) -> Self {
        LinExpr {
            constant: 0,
            terms: vec![(1, a)],
        }
    }

    pub fn lb(v: V) -> Self {
        Self::atom(Atom::Lb(v))
    }

    pub fn ub(v: V) -> Self {
        Self::atom(Atom::Ub(v))
    }

    pub fn plus(mut self, k: i64) -> Self {
        self.constant += k;
        self
    }

    pub fn term(mut self, coef: i64, a: Atom<V>) -> Self {
        self.terms.push((coef, a));
        self
    }

    /// `None` for constant expressions.
    pub fn polarity(&self) -> Result<Option<Polarity>, ModelError>
    where
        V: fmt::Debug,
    {
        let mut pol = None;
        for (c, a) in &self.terms {
            let p = match c.signum() {
                0 => continue,
                1 => a.polarity(),
                _ => a.polarity().flip(),
            };
            match pol {
                None => pol = Some(p),
                Some(q) if q != p => return Err(ModelError::NonMonotone(format!("{self:?}"))),
                Some(_) => {}
            }
        }
        Ok(pol)
    }

    fn map<W, E>(&self, f: &mut impl FnMut(V) -> Result<W, E>) -> Result<LinExpr<W>, E> {
        let terms = self
            .terms
            .iter()
            .map(|(c, a)| Ok((*c, a.map(f)?)))
            .collect::<Result<_, E>>()?;
        Ok(LinExpr {
            constant: self.constant,
            terms,
        })
    }
}

impl LinExpr {
    /// Evaluates the expression. Infinite terms saturate, and when both
    /// infinities occur the one matching `pol` wins so the result stays
    /// monotone.
    pub fn eval(&self, s: &(impl StoreView + ?Sized), pol: Polarity) -> i64 {
        let mut acc = self.constant as i128;
        let (mut pos, mut neg) = (false, false);
        for &(c, a) in &self.terms {
            match mul_bound(c, a.read(s)) {
                POS_INF => pos = true,
                NEG_INF => neg = true,
                x => acc += x as i128,
            }
        }
        match pol {
            Polarity::Inc if pos => POS_INF,
            Polarity::Dec if neg => NEG_INF,
            _ if pos => POS_INF,
            _ if neg => NEG_INF,
            _ => saturate(acc),
        }
    }
}

/// Integer expressions closed under monotone operators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum IntExpr<V = VarId> {
    Lin(LinExpr<V>),
    /// `⌊e / d⌋` with `d > 0`.
    FloorDiv(Box<IntExpr<V>>, i64),
    /// `⌈e / d⌉` with `d > 0`.
    CeilDiv(Box<IntExpr<V>>, i64),
    Min(Vec<IntExpr<V>>),
    Max(Vec<IntExpr<V>>),
}

impl<V: Clone + fmt::Debug> IntExpr<V> {
    pub fn constant(c: i64) -> Self {
        IntExpr::Lin(LinExpr::constant(c))
    }

    pub fn polarity(&self) -> Result<Option<Polarity>, ModelError> {
        match self {
            IntExpr::Lin(l) => l.polarity(),
            IntExpr::FloorDiv(e, d) | IntExpr::CeilDiv(e, d) => {
                if *d <= 0 {
                    return Err(ModelError::Unsupported(format!(
                        "division by non-positive constant {d}"
                    )));
                }
                e.polarity()
            }
            IntExpr::Min(es) | IntExpr::Max(es) => {
                let mut pol = None;
                for e in es {
                    match (pol, e.polarity()?) {
                        (_, None) => {}
                        (None, p) => pol = p,
                        (Some(q), Some(p)) if q != p => return Err(ModelError::NonMonotone(format!("{self:?}"))),
                        _ => {}
                    }
                }
                Ok(pol)
            }
        }
    }

    pub fn reads(&self, out: &mut Vec<V>) {
        match self {
            IntExpr::Lin(l) => out.extend(l.terms.iter().map(|(_, a)| a.var())),
            IntExpr::FloorDiv(e, _) | IntExpr::CeilDiv(e, _) => e.reads(out),
            IntExpr::Min(es) | IntExpr::Max(es) => es.iter().for_each(|e| e.reads(out)),
        }
    }

    pub fn map_vars<W, E>(&self, f: &mut impl FnMut(V) -> Result<W, E>) -> Result<IntExpr<W>, E> {
        Ok(match self {
            IntExpr::Lin(l) => IntExpr::Lin(l.map(f)?),
            IntExpr::FloorDiv(e, d) => IntExpr::FloorDiv(Box::new(e.map_vars(f)?), *d),
            IntExpr::CeilDiv(e, d) => IntExpr::CeilDiv(Box::new(e.map_vars(f)?), *d),
            IntExpr::Min(es) => IntExpr::Min(es.iter().map(|e| e.map_vars(f)).collect::<Result<_, _>>()?),
            IntExpr::Max(es) => IntExpr::Max(es.iter().map(|e| e.map_vars(f)).collect::<Result<_, _>>()?),
        })
    }

    fn atoms(&self, out: &mut Vec<Atom<V>>) {
        match self {
            IntExpr::Lin(l) => out.extend(l.terms.iter().map(|(_, a)| a.clone())),
            IntExpr::FloorDiv(e, _) | IntExpr::CeilDiv(e, _) => e.atoms(out),
            IntExpr::Min(es) | IntExpr::Max(es) => es.iter().for_each(|e| e.atoms(out)),
        }
    }
}

impl IntExpr {
    pub fn eval(&self, s: &(impl StoreView + ?Sized), pol: Polarity) -> i64 {
        match self {
            IntExpr::Lin(l) => l.eval(s, pol),
            IntExpr::FloorDiv(e, d) => match e.eval(s, pol) {
                x @ (NEG_INF | POS_INF) => x,
                x => x.div_euclid(*d),
            },
            IntExpr::CeilDiv(e, d) => match e.eval(s, pol) {
                x @ (NEG_INF | POS_INF) => x,
                x => -((-x).div_euclid(*d)),
            },
            IntExpr::Min(es) => es.iter().map(|e| e.eval(s, pol)).min().unwrap_or(POS_INF),
            IntExpr::Max(es) => es.iter().map(|e| e.eval(s, pol)).max().unwrap_or(NEG_INF),
        }
    }
}

impl<V> From<LinExpr<V>> for IntExpr<V> {
    fn from(l: LinExpr<V>) -> Self {
        IntExpr::Lin(l)
    }
}

/// A monotone predicate on the store, used as a guard.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Pred<V = VarId> {
    /// A `BInc` cell is at least `true`.
    Holds(V),
    /// `lhs <= rhs` where `lhs` is decreasing and `rhs` increasing.
    Le(IntExpr<V>, IntExpr<V>),
}

impl<V: Clone + fmt::Debug> Pred<V> {
    pub fn le(lhs: impl Into<IntExpr<V>>, rhs: impl Into<IntExpr<V>>) -> Self {
        Pred::Le(lhs.into(), rhs.into())
    }

    /// A predicate that always holds.
    pub fn always() -> Self {
        Pred::Le(IntExpr::constant(0), IntExpr::constant(0))
    }

    /// A predicate that never holds.
    pub fn never() -> Self {
        Pred::Le(IntExpr::constant(1), IntExpr::constant(0))
    }

    /// Constant truth value if the predicate reads no cell.
    pub fn as_constant(&self) -> Option<bool> {
        match self {
            Pred::Le(IntExpr::Lin(l), IntExpr::Lin(r)) if l.terms.is_empty() && r.terms.is_empty() => {
                Some(l.constant <= r.constant)
            }
            _ => None,
        }
    }

    pub fn reads(&self, out: &mut Vec<V>) {
        match self {
            Pred::Holds(v) => out.push(v.clone()),
            Pred::Le(l, r) => {
                l.reads(out);
                r.reads(out);
            }
        }
    }

    pub fn map_vars<W, E>(&self, f: &mut impl FnMut(V) -> Result<W, E>) -> Result<Pred<W>, E> {
        Ok(match self {
            Pred::Holds(v) => Pred::Holds(f(v.clone())?),
            Pred::Le(l, r) => Pred::Le(l.map_vars(f)?, r.map_vars(f)?),
        })
    }

    pub fn check_monotone(&self) -> Result<(), ModelError> {
        if let Pred::Le(l, r) = self {
            if l.polarity()? == Some(Polarity::Inc) || r.polarity()? == Some(Polarity::Dec) {
                return Err(ModelError::NonMonotone(format!("{self:?}")));
            }
        }
        Ok(())
    }
}

impl Pred {
    pub fn holds(&self, s: &(impl StoreView + ?Sized)) -> bool {
        match self {
            Pred::Holds(v) => s.lb(*v) >= 1,
            Pred::Le(l, r) => l.eval(s, Polarity::Dec) <= r.eval(s, Polarity::Inc),
        }
    }

    pub fn validate(&self, schema: &Schema) -> Result<(), ModelError> {
        self.check_monotone()?;
        match self {
            Pred::Holds(v) => schema.check(*v, Kind::BInc)?,
            Pred::Le(l, r) => {
                let mut atoms = Vec::new();
                l.atoms(&mut atoms);
                r.atoms(&mut atoms);
                for a in atoms {
                    schema.check(a.var(), a.expected_kind())?;
                }
            }
        }
        Ok(())
    }
}

/// Signature of opaque monotone functions.
pub type EvalFn = dyn Fn(&[Value]) -> Value + Send + Sync;

/// A user-supplied function with an explicit read set. Its monotonicity is the
/// caller's responsibility.
#[derive(Clone)]
pub struct CustomFn<V = VarId> {
    pub label: String,
    pub reads: Vec<V>,
    pub eval: Arc<EvalFn>,
}

impl<V: fmt::Debug> fmt::Debug for CustomFn<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.label, self.reads)
    }
}

impl<V: PartialEq> PartialEq for CustomFn<V> {
    fn eq(&self, other: &Self) -> bool {
        self.reads == other.reads && Arc::ptr_eq(&self.eval, &other.eval)
    }
}

/// Right-hand side of a tell.
#[derive(Clone, Debug, PartialEq)]
pub enum MonotoneFn<V = VarId> {
    Const(Value),
    /// `(lb, ub)`; a missing side is `-inf` or `+inf` respectively.
    Interval {
        lb: Option<IntExpr<V>>,
        ub: Option<IntExpr<V>>,
    },
    ZInc(IntExpr<V>),
    ZDec(IntExpr<V>),
    /// `BInc` that is `true` exactly when all predicates hold.
    Entailed(Vec<Pred<V>>),
    Custom(CustomFn<V>),
}

impl<V: Clone + fmt::Debug> MonotoneFn<V> {
    pub fn interval(lb: Option<IntExpr<V>>, ub: Option<IntExpr<V>>) -> Self {
        MonotoneFn::Interval { lb, ub }
    }

    /// `(e, +inf)`.
    pub fn at_least(e: impl Into<IntExpr<V>>) -> Self {
        MonotoneFn::Interval {
            lb: Some(e.into()),
            ub: None,
        }
    }

    /// `(-inf, e)`.
    pub fn at_most(e: impl Into<IntExpr<V>>) -> Self {
        MonotoneFn::Interval {
            lb: None,
            ub: Some(e.into()),
        }
    }

    pub fn custom(
        label: impl Into<String>,
        reads: Vec<V>,
        eval: impl Fn(&[Value]) -> Value + Send + Sync + 'static,
    ) -> Self {
        MonotoneFn::Custom(CustomFn {
            label: label.into(),
            reads,
            eval: Arc::new(eval),
        })
    }

    /// Lattice of the produced value, when it is statically known.
    pub fn kind(&self) -> Option<Kind> {
        match self {
            MonotoneFn::Const(v) => Some(v.kind()),
            MonotoneFn::Interval { .. } => Some(Kind::Interval),
            MonotoneFn::ZInc(_) => Some(Kind::ZInc),
            MonotoneFn::ZDec(_) => Some(Kind::ZDec),
            MonotoneFn::Entailed(_) => Some(Kind::BInc),
            MonotoneFn::Custom(_) => None,
        }
    }

    pub fn reads(&self) -> Vec<V> {
        let mut out = Vec::new();
        match self {
            MonotoneFn::Const(_) => {}
            MonotoneFn::Interval { lb, ub } => {
                lb.iter().chain(ub).for_each(|e| e.reads(&mut out));
            }
            MonotoneFn::ZInc(e) | MonotoneFn::ZDec(e) => e.reads(&mut out),
            MonotoneFn::Entailed(ps) => ps.iter().for_each(|p| p.reads(&mut out)),
            MonotoneFn::Custom(c) => out.extend(c.reads.iter().cloned()),
        }
        out
    }

    pub fn map_vars<W, E>(&self, f: &mut impl FnMut(V) -> Result<W, E>) -> Result<MonotoneFn<W>, E> {
        Ok(match self {
            MonotoneFn::Const(v) => MonotoneFn::Const(*v),
            MonotoneFn::Interval { lb, ub } => MonotoneFn::Interval {
                lb: lb.as_ref().map(|e| e.map_vars(f)).transpose()?,
                ub: ub.as_ref().map(|e| e.map_vars(f)).transpose()?,
            },
            MonotoneFn::ZInc(e) => MonotoneFn::ZInc(e.map_vars(f)?),
            MonotoneFn::ZDec(e) => MonotoneFn::ZDec(e.map_vars(f)?),
            MonotoneFn::Entailed(ps) => {
                MonotoneFn::Entailed(ps.iter().map(|p| p.map_vars(f)).collect::<Result<_, _>>()?)
            }
            MonotoneFn::Custom(c) => MonotoneFn::Custom(CustomFn {
                label: c.label.clone(),
                reads: c.reads.iter().map(|v| f(v.clone())).collect::<Result<_, _>>()?,
                eval: c.eval.clone(),
            }),
        })
    }

    pub fn check_monotone(&self) -> Result<(), ModelError> {
        let bad = |e: &IntExpr<V>, wrong: Polarity| -> Result<(), ModelError> {
            if e.polarity()? == Some(wrong) {
                Err(ModelError::NonMonotone(format!("{e:?}")))
            } else {
                Ok(())
            }
        };
        match self {
            MonotoneFn::Interval { lb, ub } => {
                if let Some(e) = lb {
                    bad(e, Polarity::Dec)?;
                }
                if let Some(e) = ub {
                    bad(e, Polarity::Inc)?;
                }
            }
            MonotoneFn::ZInc(e) => bad(e, Polarity::Dec)?,
            MonotoneFn::ZDec(e) => bad(e, Polarity::Inc)?,
            MonotoneFn::Entailed(ps) => ps.iter().try_for_each(|p| p.check_monotone())?,
            MonotoneFn::Const(_) | MonotoneFn::Custom(_) => {}
        }
        Ok(())
    }
}

impl MonotoneFn {
    pub fn eval(&self, s: &(impl StoreView + ?Sized)) -> Value {
        match self {
            MonotoneFn::Const(v) => *v,
            MonotoneFn::Interval { lb, ub } => Value::Interval(crate::lattice::Interval::new(
                lb.as_ref().map_or(NEG_INF, |e| e.eval(s, Polarity::Inc)),
                ub.as_ref().map_or(POS_INF, |e| e.eval(s, Polarity::Dec)),
            )),
            MonotoneFn::ZInc(e) => Value::ZInc(crate::lattice::ZInc(e.eval(s, Polarity::Inc))),
            MonotoneFn::ZDec(e) => Value::ZDec(crate::lattice::ZDec(e.eval(s, Polarity::Dec))),
            MonotoneFn::Entailed(ps) => Value::BInc(BInc::from_bool(ps.iter().all(|p| p.holds(s)))),
            MonotoneFn::Custom(c) => {
                let args: Vec<Value> = c.reads.iter().map(|&v| s.value(v)).collect();
                (c.eval)(&args)
            }
        }
    }

    /// Checks monotonicity of the built-in forms and that every read cell has
    /// the lattice its atoms expect.
    pub fn validate(&self, schema: &Schema) -> Result<(), ModelError> {
        self.check_monotone()?;
        let mut atoms = Vec::new();
        match self {
            MonotoneFn::Interval { lb, ub } => lb.iter().chain(ub).for_each(|e| e.atoms(&mut atoms)),
            MonotoneFn::ZInc(e) | MonotoneFn::ZDec(e) => e.atoms(&mut atoms),
            MonotoneFn::Entailed(ps) => {
                for p in ps {
                    p.validate(schema)?;
                }
            }
            MonotoneFn::Custom(c) => {
                for &v in &c.reads {
                    if v.0 >= schema.len() {
                        return Err(crate::lattice::SchemaError::UnknownVar(v.0).into());
                    }
                }
            }
            MonotoneFn::Const(_) => {}
        }
        for a in atoms {
            schema.check(a.var(), a.expected_kind())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Interval, Snapshot};

    fn snap(vals: &[Interval]) -> Snapshot {
        let mut schema = Schema::new();
        for i in 0..vals.len() {
            schema.push(format!("x{i}"), Kind::Interval);
        }
        let mut s = Snapshot::bottom(Arc::new(schema));
        for (i, v) in vals.iter().enumerate() {
            s.set(VarId(i), (*v).into()).unwrap();
        }
        s
    }

    #[test]
    fn saturating_sums_follow_polarity() {
        let s = snap(&[Interval::new(NEG_INF, 5), Interval::new(3, POS_INF)]);
        let e = LinExpr::lb(VarId(0)).term(1, Atom::Lb(VarId(1)));
        assert_eq!(e.eval(&s, Polarity::Inc), NEG_INF);
        let mixed = LinExpr::constant(10)
            .term(1, Atom::Ub(VarId(0)))
            .term(1, Atom::Ub(VarId(1)));
        assert_eq!(mixed.eval(&s, Polarity::Dec), POS_INF);
        let both = LinExpr::lb(VarId(0)).term(-1, Atom::Ub(VarId(1)));
        assert_eq!(both.eval(&s, Polarity::Inc), NEG_INF);
        let s2 = snap(&[Interval::new(POS_INF, POS_INF), Interval::new(0, POS_INF)]);
        assert_eq!(both.eval(&s2, Polarity::Inc), POS_INF);
        assert_eq!(both.eval(&s2, Polarity::Dec), NEG_INF);
    }

    #[test]
    fn zero_coefficient_ignores_infinity() {
        let s = snap(&[Interval::new(NEG_INF, POS_INF)]);
        let e = LinExpr::constant(4).term(0, Atom::Lb(VarId(0)));
        assert_eq!(e.eval(&s, Polarity::Inc), 4);
        assert_eq!(mul_bound(-2, POS_INF), NEG_INF);
        assert_eq!(mul_bound(3, 7), 21);
    }

    #[test]
    fn division_rounds_and_keeps_infinities() {
        let s = snap(&[Interval::new(-7, 7)]);
        let lb = IntExpr::Lin(LinExpr::lb(VarId(0)));
        assert_eq!(IntExpr::FloorDiv(Box::new(lb.clone()), 2).eval(&s, Polarity::Inc), -4);
        assert_eq!(IntExpr::CeilDiv(Box::new(lb), 2).eval(&s, Polarity::Inc), -3);
        let t = snap(&[Interval::new(NEG_INF, POS_INF)]);
        let ub = IntExpr::Lin(LinExpr::ub(VarId(0)));
        assert_eq!(IntExpr::FloorDiv(Box::new(ub), 2).eval(&t, Polarity::Dec), POS_INF);
    }

    #[test]
    fn polarity_checks() {
        let inc = LinExpr::lb(VarId(0)).term(-1, Atom::Ub(VarId(1)));
        assert_eq!(inc.polarity().unwrap(), Some(Polarity::Inc));
        let mixed = LinExpr::lb(VarId(0)).term(1, Atom::Ub(VarId(1)));
        assert!(mixed.polarity().is_err());
        let f = MonotoneFn::at_most(LinExpr::lb(VarId(0)));
        assert!(matches!(f.check_monotone(), Err(ModelError::NonMonotone(_))));
        let p = Pred::le(LinExpr::lb(VarId(0)), LinExpr::constant(3));
        assert!(p.check_monotone().is_err());
        let min = IntExpr::Min(vec![LinExpr::lb(VarId(0)).into(), LinExpr::ub(VarId(1)).into()]);
        assert!(min.polarity().is_err());
    }

    #[test]
    fn predicates() {
        let s = snap(&[Interval::new(0, 2), Interval::new(0, 3)]);
        let sum_ub = LinExpr::ub(VarId(0)).term(1, Atom::Ub(VarId(1)));
        assert!(Pred::le(sum_ub.clone(), LinExpr::constant(6)).holds(&s));
        assert!(!Pred::le(sum_ub, LinExpr::constant(4)).holds(&s));
        assert_eq!(Pred::<VarId>::always().as_constant(), Some(true));
        assert_eq!(Pred::<VarId>::never().as_constant(), Some(false));
    }

    #[test]
    fn validate_rejects_wrong_kinds() {
        let mut schema = Schema::new();
        let z = schema.push("z", Kind::ZInc);
        let f = MonotoneFn::at_least(LinExpr::lb(z));
        assert!(matches!(f.validate(&schema), Err(ModelError::Schema(_))));
        let g = MonotoneFn::ZInc(LinExpr::atom(Atom::Inc(z)).plus(1).into());
        g.validate(&schema).unwrap();
    }
}

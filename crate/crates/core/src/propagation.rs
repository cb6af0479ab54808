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

//! Arithmetic constraints over interval variables and their compilation into
//! guarded commands.
//!
//! Each constraint is compiled to bound rules in the style of indexicals. A
//! constraint also has an entailment condition and a disentailment condition,
//! both given as a disjunction of conjunctions of monotone predicates; these
//! drive disjunction and reification.

use crate::error::ModelError;
use crate::expr::{Atom, IntExpr, LinExpr, MonotoneFn, Pred};
use crate::lattice::{BInc, Interval, Kind, Schema, StoreView, Value, VarId};
use crate::process::GuardedCommand;

/// `x + k` or a constant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(VarId, i64),
    Const(i64),
}

impl Term {
    pub fn var(v: VarId) -> Self {
        Term::Var(v, 0)
    }

    pub fn plus(self, k: i64) -> Self {
        match self {
            Term::Var(v, o) => Term::Var(v, o + k),
            Term::Const(c) => Term::Const(c + k),
        }
    }

    fn lower(self) -> LinExpr {
        match self {
            Term::Var(v, k) => LinExpr::lb(v).plus(k),
            Term::Const(c) => LinExpr::constant(c),
        }
    }

    fn upper(self) -> LinExpr {
        match self {
            Term::Var(v, k) => LinExpr::ub(v).plus(k),
            Term::Const(c) => LinExpr::constant(c),
        }
    }
}

impl From<VarId> for Term {
    fn from(v: VarId) -> Self {
        Term::var(v)
    }
}

impl From<i64> for Term {
    fn from(c: i64) -> Self {
        Term::Const(c)
    }
}

/// Constraints over interval cells.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Constraint {
    /// `Σ a_i * x_i <= c` with `a_i >= 0`.
    LinearLeq {
        terms: Vec<(i64, VarId)>,
        c: i64,
    },
    /// `Σ r_i * b_i <= c` over 0/1 intervals, propagated through an
    /// auxiliary partial-sum cell.
    BoolSum {
        terms: Vec<(i64, VarId)>,
        c: i64,
    },
    Leq(Term, Term),
    Lt(Term, Term),
    And(Box<Constraint>, Box<Constraint>),
    Or(Box<Constraint>, Box<Constraint>),
    Iff(Box<Constraint>, Box<Constraint>),
    Not(Box<Constraint>),
}

impl Constraint {
    pub fn leq(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Constraint::Leq(a.into(), b.into())
    }

    pub fn lt(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Constraint::Lt(a.into(), b.into())
    }

    pub fn and(a: Constraint, b: Constraint) -> Self {
        Constraint::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Constraint, b: Constraint) -> Self {
        Constraint::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Constraint, b: Constraint) -> Self {
        Constraint::Iff(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Constraint) -> Self {
        Constraint::Not(Box::new(a))
    }

    /// Truth value on a total assignment, used by tests and oracles.
    pub fn eval(&self, val: &dyn Fn(VarId) -> i64) -> bool {
        let term = |t: &Term| match *t {
            Term::Var(v, k) => val(v) + k,
            Term::Const(c) => c,
        };
        match self {
            Constraint::LinearLeq { terms, c } | Constraint::BoolSum { terms, c } => {
                terms.iter().map(|&(a, v)| a * val(v)).sum::<i64>() <= *c
            }
            Constraint::Leq(a, b) => term(a) <= term(b),
            Constraint::Lt(a, b) => term(a) < term(b),
            Constraint::And(a, b) => a.eval(val) && b.eval(val),
            Constraint::Or(a, b) => a.eval(val) || b.eval(val),
            Constraint::Iff(a, b) => a.eval(val) == b.eval(val),
            Constraint::Not(a) => !a.eval(val),
        }
    }

    pub fn vars(&self, out: &mut Vec<VarId>) {
        let mut term = |t: &Term| {
            if let Term::Var(v, _) = t {
                out.push(*v);
            }
        };
        match self {
            Constraint::LinearLeq { terms, .. } | Constraint::BoolSum { terms, .. } => {
                out.extend(terms.iter().map(|&(_, v)| v))
            }
            Constraint::Leq(a, b) | Constraint::Lt(a, b) => {
                term(a);
                term(b);
            }
            Constraint::And(a, b) | Constraint::Or(a, b) | Constraint::Iff(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Constraint::Not(a) => a.vars(out),
        }
    }
}

/// A disjunction of conjunctions of guard predicates.
pub type Dnf = Vec<Vec<Pred>>;

fn dnf_of(p: Pred) -> Dnf {
    match p.as_constant() {
        Some(true) => vec![vec![]],
        Some(false) => vec![],
        None => vec![vec![p]],
    }
}

fn dnf_and(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let mut c = x.clone();
            c.extend(y.iter().cloned());
            out.push(c);
        }
    }
    out
}

fn dnf_or(mut a: Dnf, b: Dnf) -> Dnf {
    a.extend(b);
    a
}

/// Same-variable and constant comparisons reduce to a constant.
fn fold_leq(a: Term, b: Term) -> Option<bool> {
    match (a, b) {
        (Term::Const(x), Term::Const(y)) => Some(x <= y),
        (Term::Var(x, k), Term::Var(y, m)) if x == y => Some(k <= m),
        _ => None,
    }
}

fn check_coefs(terms: &[(i64, VarId)]) -> Result<(), ModelError> {
    match terms.iter().find(|(a, _)| *a < 0) {
        Some((a, v)) => Err(ModelError::Unsupported(format!(
            "negative coefficient {a} on {v} in a linear sum"
        ))),
        None => Ok(()),
    }
}

fn sum_of(terms: &[(i64, VarId)], atom: fn(VarId) -> Atom) -> LinExpr {
    LinExpr {
        constant: 0,
        terms: terms.iter().map(|&(a, v)| (a, atom(v))).collect(),
    }
}

/// Condition under which `φ` holds in every completion of the store.
pub fn entailment(phi: &Constraint) -> Result<Dnf, ModelError> {
    Ok(match phi {
        Constraint::LinearLeq { terms, c } | Constraint::BoolSum { terms, c } => {
            check_coefs(terms)?;
            dnf_of(Pred::le(sum_of(terms, Atom::Ub), LinExpr::constant(*c)))
        }
        Constraint::Leq(a, b) => match fold_leq(*a, *b) {
            Some(t) => dnf_of(if t { Pred::always() } else { Pred::never() }),
            None => dnf_of(Pred::le(a.upper(), b.lower())),
        },
        Constraint::Lt(a, b) => entailment(&Constraint::Leq(a.plus(1), *b))?,
        Constraint::And(a, b) => dnf_and(&entailment(a)?, &entailment(b)?),
        Constraint::Or(a, b) => dnf_or(entailment(a)?, entailment(b)?),
        Constraint::Iff(a, b) => dnf_or(
            dnf_and(&entailment(a)?, &entailment(b)?),
            dnf_and(&entailment_not(a)?, &entailment_not(b)?),
        ),
        Constraint::Not(a) => entailment_not(a)?,
    })
}

/// Condition under which `φ` is false in every completion of the store.
pub fn entailment_not(phi: &Constraint) -> Result<Dnf, ModelError> {
    Ok(match phi {
        Constraint::LinearLeq { terms, c } | Constraint::BoolSum { terms, c } => {
            check_coefs(terms)?;
            dnf_of(Pred::le(LinExpr::constant(c + 1), sum_of(terms, Atom::Lb)))
        }
        Constraint::Leq(a, b) => match fold_leq(*a, *b) {
            Some(t) => dnf_of(if t { Pred::never() } else { Pred::always() }),
            None => dnf_of(Pred::le(b.upper().plus(1), a.lower())),
        },
        Constraint::Lt(a, b) => entailment_not(&Constraint::Leq(a.plus(1), *b))?,
        Constraint::And(a, b) => dnf_or(entailment_not(a)?, entailment_not(b)?),
        Constraint::Or(a, b) => dnf_and(&entailment_not(a)?, &entailment_not(b)?),
        Constraint::Iff(a, b) => dnf_or(
            dnf_and(&entailment(a)?, &entailment_not(b)?),
            dnf_and(&entailment_not(a)?, &entailment(b)?),
        ),
        Constraint::Not(a) => entailment(a)?,
    })
}

fn eval_dnf(d: &Dnf, s: &(impl StoreView + ?Sized)) -> BInc {
    BInc::from_bool(d.iter().any(|conj| conj.iter().all(|p| p.holds(s))))
}

/// `true` iff `φ` is entailed by the bounds of `s`.
pub fn entailed(phi: &Constraint, s: &(impl StoreView + ?Sized)) -> Result<BInc, ModelError> {
    Ok(eval_dnf(&entailment(phi)?, s))
}

/// `true` iff `¬φ` is entailed by the bounds of `s`.
pub fn entailed_not(phi: &Constraint, s: &(impl StoreView + ?Sized)) -> Result<BInc, ModelError> {
    Ok(eval_dnf(&entailment_not(phi)?, s))
}

/// Pushes a negation one level down.
pub fn negate(phi: &Constraint) -> Result<Constraint, ModelError> {
    Ok(match phi {
        Constraint::Leq(a, b) => Constraint::Leq(b.plus(1), *a),
        Constraint::Lt(a, b) => Constraint::Leq(*b, *a),
        Constraint::And(a, b) => Constraint::or(Constraint::not((**a).clone()), Constraint::not((**b).clone())),
        Constraint::Or(a, b) => Constraint::and(Constraint::not((**a).clone()), Constraint::not((**b).clone())),
        Constraint::Iff(a, b) => Constraint::iff((**a).clone(), Constraint::not((**b).clone())),
        Constraint::Not(a) => (**a).clone(),
        Constraint::LinearLeq { .. } | Constraint::BoolSum { .. } => {
            return Err(ModelError::Unsupported(format!("negation of the sum {phi:?}")))
        }
    })
}

/// Guarded commands of one compiled constraint.
#[derive(Clone, Debug, Default)]
pub struct Propagator {
    pub commands: Vec<GuardedCommand>,
}

impl Propagator {
    pub fn reads(&self) -> Vec<VarId> {
        let mut out: Vec<VarId> = self.commands.iter().flat_map(|c| c.reads()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn writes(&self) -> Vec<VarId> {
        let mut out: Vec<VarId> = self.commands.iter().map(|c| c.target).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Name of the cell that receives `⊤` when an unsatisfiable constant
/// constraint is activated.
pub const FAIL_CELL: &str = "$fail";

fn fail_cell(schema: &mut Schema) -> VarId {
    match schema.find(FAIL_CELL) {
        Some(v) => v,
        None => schema.push(FAIL_CELL, Kind::BInc),
    }
}

/// Compiles `φ` into guarded commands. Auxiliary cells are appended to
/// `schema`.
pub fn compile(phi: &Constraint, schema: &mut Schema) -> Result<Propagator, ModelError> {
    let mut commands = Vec::new();
    compile_into(phi, &[], schema, &mut commands)?;
    Ok(Propagator { commands })
}

/// Compiles `b ⇔ φ` where `b` is a 0/1 interval: `b = (1,1)` stands for true
/// and `b = (0,0)` for false.
pub fn compile_reified(b: VarId, phi: &Constraint, schema: &mut Schema) -> Result<Propagator, ModelError> {
    schema.check(b, Kind::Interval)?;
    compile(&Constraint::iff(Constraint::leq(1, b), phi.clone()), schema)
}

fn push(out: &mut Vec<GuardedCommand>, guard: &[Pred], target: VarId, f: MonotoneFn) {
    out.push(GuardedCommand::new(guard.to_vec(), target, f));
}

fn compile_into(
    phi: &Constraint,
    guard: &[Pred],
    schema: &mut Schema,
    out: &mut Vec<GuardedCommand>,
) -> Result<(), ModelError> {
    match phi {
        Constraint::LinearLeq { terms, c } => {
            check_coefs(terms)?;
            let terms: Vec<_> = terms.iter().copied().filter(|(a, _)| *a != 0).collect();
            if terms.is_empty() {
                if *c < 0 {
                    fail(guard, schema, out);
                }
                return Ok(());
            }
            for (i, &(a, x)) in terms.iter().enumerate() {
                let mut rest = LinExpr::constant(*c);
                for (j, &(b, y)) in terms.iter().enumerate() {
                    if j != i {
                        rest = rest.term(-b, Atom::Lb(y));
                    }
                }
                let ub = if a == 1 {
                    IntExpr::Lin(rest)
                } else {
                    IntExpr::FloorDiv(Box::new(IntExpr::Lin(rest)), a)
                };
                push(out, guard, x, MonotoneFn::at_most(ub));
            }
        }
        Constraint::BoolSum { terms, c } => {
            check_coefs(terms)?;
            let terms: Vec<_> = terms.iter().copied().filter(|(a, _)| *a != 0).collect();
            if terms.is_empty() {
                if *c < 0 {
                    fail(guard, schema, out);
                }
                return Ok(());
            }
            let lsum = schema.push(format!("lsum{}", schema.len()), Kind::ZInc);
            push(
                out,
                guard,
                lsum,
                MonotoneFn::ZInc(IntExpr::Lin(sum_of(&terms, Atom::Lb))),
            );
            for (i, &(r, b)) in terms.iter().enumerate() {
                let others = LinExpr {
                    constant: 0,
                    terms: terms
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &(r, v))| (r, Atom::Lb(v)))
                        .collect(),
                };
                let threshold = c - r + 1;
                let mut g = guard.to_vec();
                g.push(Pred::le(LinExpr::constant(threshold), LinExpr::atom(Atom::Inc(lsum))));
                g.push(Pred::le(LinExpr::constant(threshold), others));
                push(out, &g, b, MonotoneFn::at_most(LinExpr::constant(0)));
            }
        }
        Constraint::Leq(a, b) => match (*a, *b) {
            _ if fold_leq(*a, *b).is_some() => {
                if fold_leq(*a, *b) == Some(false) {
                    fail(guard, schema, out);
                }
            }
            (Term::Var(x, k), Term::Var(y, m)) => {
                push(out, guard, x, MonotoneFn::at_most(LinExpr::ub(y).plus(m - k)));
                push(out, guard, y, MonotoneFn::at_least(LinExpr::lb(x).plus(k - m)));
            }
            (Term::Var(x, k), Term::Const(m)) => {
                push(out, guard, x, MonotoneFn::at_most(LinExpr::constant(m - k)));
            }
            (Term::Const(k), Term::Var(y, m)) => {
                push(out, guard, y, MonotoneFn::at_least(LinExpr::constant(k - m)));
            }
            (Term::Const(_), Term::Const(_)) => unreachable!(),
        },
        Constraint::Lt(a, b) => compile_into(&Constraint::Leq(a.plus(1), *b), guard, schema, out)?,
        Constraint::And(a, b) => {
            compile_into(a, guard, schema, out)?;
            compile_into(b, guard, schema, out)?;
        }
        Constraint::Or(a, b) => {
            for conj in entailment_not(a)? {
                compile_into(b, &extend(guard, conj), schema, out)?;
            }
            for conj in entailment_not(b)? {
                compile_into(a, &extend(guard, conj), schema, out)?;
            }
        }
        Constraint::Iff(a, b) => {
            let not_a = Constraint::not((**a).clone());
            let not_b = Constraint::not((**b).clone());
            for conj in entailment(a)? {
                compile_into(b, &extend(guard, conj), schema, out)?;
            }
            for conj in entailment(b)? {
                compile_into(a, &extend(guard, conj), schema, out)?;
            }
            for conj in entailment_not(a)? {
                compile_into(&not_b, &extend(guard, conj), schema, out)?;
            }
            for conj in entailment_not(b)? {
                compile_into(&not_a, &extend(guard, conj), schema, out)?;
            }
        }
        Constraint::Not(a) => compile_into(&negate(a)?, guard, schema, out)?,
    }
    Ok(())
}

fn extend(guard: &[Pred], conj: Vec<Pred>) -> Vec<Pred> {
    let mut g = guard.to_vec();
    g.extend(conj);
    g
}

fn fail(guard: &[Pred], schema: &mut Schema, out: &mut Vec<GuardedCommand>) {
    let f = fail_cell(schema);
    push(out, guard, f, MonotoneFn::Const(Value::BInc(BInc::TOP)));
}

/// `{} ⇒ x ← (lo, hi)`.
pub fn domain(x: VarId, lo: i64, hi: i64) -> GuardedCommand {
    GuardedCommand::new(vec![], x, MonotoneFn::Const(Interval::new(lo, hi).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Snapshot, Store};
    use std::sync::Arc;

    fn vars(n: usize) -> (Schema, Vec<VarId>) {
        let mut schema = Schema::new();
        let vs = (0..n).map(|i| schema.push(format!("x{i}"), Kind::Interval)).collect();
        (schema, vs)
    }

    fn store_with(schema: Schema, init: &[(VarId, i64, i64)]) -> Store {
        let s = Store::new(Arc::new(schema));
        for &(v, lo, hi) in init {
            s.join(v, Interval::new(lo, hi).into()).unwrap();
        }
        s
    }

    fn one_round(p: &Propagator, s: &Store) {
        for c in &p.commands {
            c.apply(s);
        }
    }

    #[test]
    fn linear_leq_one_round() {
        let (mut schema, v) = vars(2);
        let p = compile(
            &Constraint::LinearLeq {
                terms: vec![(1, v[0]), (1, v[1])],
                c: 5,
            },
            &mut schema,
        )
        .unwrap();
        assert_eq!(p.commands.len(), 2);
        let s = store_with(schema, &[(v[0], 0, 10), (v[1], 0, 10)]);
        one_round(&p, &s);
        assert_eq!(s.interval(v[0]), Interval::new(0, 5));
        assert_eq!(s.interval(v[1]), Interval::new(0, 5));
    }

    #[test]
    fn linear_leq_detects_failure() {
        let (mut schema, v) = vars(2);
        let p = compile(
            &Constraint::LinearLeq {
                terms: vec![(1, v[0]), (1, v[1])],
                c: 5,
            },
            &mut schema,
        )
        .unwrap();
        let s = store_with(schema, &[(v[0], 4, 10), (v[1], 3, 10)]);
        one_round(&p, &s);
        assert!(s.is_failed());
    }

    #[test]
    fn weighted_linear_leq_divides() {
        let (mut schema, v) = vars(2);
        let p = compile(
            &Constraint::LinearLeq {
                terms: vec![(3, v[0]), (2, v[1])],
                c: 10,
            },
            &mut schema,
        )
        .unwrap();
        let s = store_with(schema, &[(v[0], 0, 10), (v[1], 1, 10)]);
        one_round(&p, &s);
        assert_eq!(s.interval(v[0]), Interval::new(0, 2));
        assert_eq!(s.interval(v[1]), Interval::new(1, 5));
    }

    #[test]
    fn bool_sum_prunes_through_partial_sum() {
        let (mut schema, v) = vars(2);
        let p = compile(
            &Constraint::BoolSum {
                terms: vec![(2, v[0]), (2, v[1])],
                c: 3,
            },
            &mut schema,
        )
        .unwrap();
        let lsum = schema.find("lsum2").unwrap();
        let s = store_with(schema, &[(v[0], 0, 1), (v[1], 1, 1)]);
        one_round(&p, &s);
        assert_eq!(s.value(lsum), Value::ZInc(crate::lattice::ZInc(2)));
        assert_eq!(s.interval(v[0]), Interval::new(0, 0));
        assert_eq!(s.interval(v[1]), Interval::new(1, 1));
        assert!(!s.is_failed());
    }

    #[test]
    fn bool_sum_does_not_count_a_task_twice() {
        let (mut schema, v) = vars(2);
        let p = compile(
            &Constraint::BoolSum {
                terms: vec![(1, v[0]), (1, v[1])],
                c: 1,
            },
            &mut schema,
        )
        .unwrap();
        let s = store_with(schema, &[(v[0], 1, 1), (v[1], 0, 1)]);
        one_round(&p, &s);
        one_round(&p, &s);
        assert_eq!(s.interval(v[0]), Interval::new(1, 1));
        assert_eq!(s.interval(v[1]), Interval::new(0, 0));
    }

    #[test]
    fn entailment_examples() {
        let (_, v) = vars(2);
        let (schema, _) = vars(2);
        let s = store_with(schema, &[(v[0], 0, 2), (v[1], 0, 3)]);
        let sum = |c| Constraint::LinearLeq {
            terms: vec![(1, v[0]), (1, v[1])],
            c,
        };
        assert_eq!(entailed(&sum(6), &s).unwrap(), BInc::TRUE);
        assert_eq!(entailed(&sum(4), &s).unwrap(), BInc::FALSE);

        let (schema, _) = vars(2);
        let s = store_with(schema, &[(v[0], 0, 0), (v[1], 0, 1)]);
        let bs = Constraint::BoolSum {
            terms: vec![(2, v[0]), (2, v[1])],
            c: 3,
        };
        assert_eq!(entailed(&bs, &s).unwrap(), BInc::TRUE);
    }

    #[test]
    fn disentailment_examples() {
        let (_, v) = vars(2);
        let sum = Constraint::LinearLeq {
            terms: vec![(1, v[0]), (1, v[1])],
            c: 4,
        };
        let s = store_with(vars(2).0, &[(v[0], 3, 5), (v[1], 2, 6)]);
        assert_eq!(entailed_not(&sum, &s).unwrap(), BInc::TRUE);
        let le = Constraint::leq(v[0], v[1]);
        let s = store_with(vars(2).0, &[(v[0], 0, 9), (v[1], 0, 9)]);
        assert_eq!(entailed_not(&le, &s).unwrap(), BInc::FALSE);
        let s = store_with(vars(2).0, &[(v[0], 7, 9), (v[1], 0, 3)]);
        assert_eq!(entailed_not(&le, &s).unwrap(), BInc::TRUE);
    }

    fn fixpoint(p: &Propagator, s: &Store) {
        loop {
            let before = s.snapshot();
            one_round(p, s);
            if s.snapshot() == before || s.is_failed() {
                break;
            }
        }
    }

    #[test]
    fn reified_leq_sets_true() {
        let (mut schema, v) = vars(3);
        let (b, x, y) = (v[0], v[1], v[2]);
        let p = compile_reified(b, &Constraint::leq(x, y), &mut schema).unwrap();
        let s = store_with(schema, &[(b, 0, 1), (x, 0, 2), (y, 5, 9)]);
        fixpoint(&p, &s);
        assert_eq!(s.interval(b), Interval::new(1, 1));
    }

    #[test]
    fn reified_true_activates_constraint() {
        let (mut schema, v) = vars(3);
        let (b, x, y) = (v[0], v[1], v[2]);
        let p = compile_reified(b, &Constraint::leq(x, y), &mut schema).unwrap();
        let s = store_with(schema, &[(b, 1, 1), (x, 0, 9), (y, 0, 9)]);
        fixpoint(&p, &s);
        assert_eq!(s.interval(x), Interval::new(0, 9));
        assert_eq!(s.interval(y), Interval::new(0, 9));
    }

    #[test]
    fn reified_false_activates_negation() {
        let (mut schema, v) = vars(3);
        let (b, x, y) = (v[0], v[1], v[2]);
        let p = compile_reified(b, &Constraint::leq(x, y), &mut schema).unwrap();
        let s = store_with(schema, &[(b, 0, 0), (x, 0, 9), (y, 0, 9)]);
        fixpoint(&p, &s);
        assert_eq!(s.interval(y), Interval::new(0, 8));
        assert_eq!(s.interval(x), Interval::new(1, 9));
    }

    #[test]
    fn reification_of_sum_negation_is_rejected() {
        let (mut schema, v) = vars(3);
        let bs = Constraint::BoolSum {
            terms: vec![(1, v[1]), (1, v[2])],
            c: 1,
        };
        assert!(matches!(
            compile_reified(v[0], &bs, &mut schema),
            Err(ModelError::Unsupported(_))
        ));
        let neg = Constraint::LinearLeq {
            terms: vec![(-1, v[1])],
            c: 1,
        };
        assert!(compile(&neg, &mut schema).is_err());
    }

    #[test]
    fn constant_contradiction_fails_only_when_active() {
        let (mut schema, v) = vars(1);
        let p = compile(&Constraint::leq(3, 2), &mut schema).unwrap();
        let s = Store::new(Arc::new(schema.clone()));
        fixpoint(&p, &s);
        assert!(s.is_failed());

        let (mut schema, v2) = vars(2);
        let p = compile_reified(v2[0], &Constraint::lt(v2[1], v2[1]), &mut schema).unwrap();
        let s = store_with(schema, &[(v2[0], 0, 1), (v2[1], 0, 3)]);
        fixpoint(&p, &s);
        assert!(!s.is_failed());
        assert_eq!(s.interval(v2[0]), Interval::new(0, 0));
        let _ = v;
    }

    #[test]
    fn disjunction_propagates_when_one_side_fails() {
        let (mut schema, v) = vars(2);
        let (x, y) = (v[0], v[1]);
        let phi = Constraint::or(Constraint::leq(x, 2), Constraint::leq(y, 3));
        let p = compile(&phi, &mut schema).unwrap();
        let s = store_with(schema, &[(x, 5, 9), (y, 0, 9)]);
        fixpoint(&p, &s);
        assert_eq!(s.interval(y), Interval::new(0, 3));
    }

    #[test]
    fn eval_on_assignments() {
        let (_, v) = vars(2);
        let phi = Constraint::iff(
            Constraint::leq(v[0], v[1]),
            Constraint::lt(v[1].into_term(), Term::Const(4)),
        );
        let vals = [1, 3];
        assert!(phi.eval(&|x: VarId| vals[x.0]));
        let snap = Snapshot::bottom(Arc::new(vars(2).0));
        assert_eq!(entailed(&phi, &snap).unwrap(), BInc::FALSE);
    }

    trait IntoTerm {
        fn into_term(self) -> Term;
    }

    impl IntoTerm for VarId {
        fn into_term(self) -> Term {
            Term::var(self)
        }
    }
}

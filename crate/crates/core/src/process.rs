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

//! Processes, guarded commands and their lowering.
//!
//! A [`Process`] is a finite tree of tells, asks, local declarations,
//! parallel and sequential compositions. Before execution, locals are erased
//! into the store schema with [`erase_locals`] and the tree is flattened into
//! guarded commands by [`gnf`]. [`denote`] gives the reference semantics that
//! the engines are tested against.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::error::ModelError;
use crate::expr::{Atom, LinExpr, MonotoneFn, Pred};
use crate::lattice::{Kind, Schema, Snapshot, Store, StoreView, Value, VarId};

/// A process over variables of type `V`: names before local erasure, cell
/// indices afterwards.
#[derive(Clone, Debug, PartialEq)]
pub enum Process<V = VarId> {
    Tell {
        target: V,
        f: MonotoneFn<V>,
    },
    Ask {
        guard: Vec<Pred<V>>,
        body: Box<Process<V>>,
    },
    Local {
        name: String,
        kind: Kind,
        body: Box<Process<V>>,
    },
    Par(Vec<Process<V>>),
    Seq(Vec<Process<V>>),
}

impl<V> Process<V> {
    pub fn tell(target: V, f: MonotoneFn<V>) -> Self {
        Process::Tell { target, f }
    }

    pub fn ask(guard: Vec<Pred<V>>, body: Process<V>) -> Self {
        Process::Ask {
            guard,
            body: Box::new(body),
        }
    }

    pub fn local(name: impl Into<String>, kind: Kind, body: Process<V>) -> Self {
        Process::Local {
            name: name.into(),
            kind,
            body: Box::new(body),
        }
    }

    /// The identity process.
    pub fn skip() -> Self {
        Process::Par(Vec::new())
    }

    /// Replaces every sequential composition by a parallel one.
    pub fn seq_to_par(self) -> Self {
        match self {
            Process::Seq(ps) | Process::Par(ps) => Process::Par(ps.into_iter().map(Process::seq_to_par).collect()),
            Process::Ask { guard, body } => Process::Ask {
                guard,
                body: Box::new(body.seq_to_par()),
            },
            Process::Local { name, kind, body } => Process::Local {
                name,
                kind,
                body: Box::new(body.seq_to_par()),
            },
            tell => tell,
        }
    }

    /// Replaces every parallel composition by a sequential one.
    pub fn par_to_seq(self) -> Self {
        match self {
            Process::Seq(ps) | Process::Par(ps) => Process::Seq(ps.into_iter().map(Process::par_to_seq).collect()),
            Process::Ask { guard, body } => Process::Ask {
                guard,
                body: Box::new(body.par_to_seq()),
            },
            Process::Local { name, kind, body } => Process::Local {
                name,
                kind,
                body: Box::new(body.par_to_seq()),
            },
            tell => tell,
        }
    }
}

/// `∀i ∈ range, f(i)` expanded to a parallel composition.
pub fn forall<V>(range: RangeInclusive<i64>, f: impl FnMut(i64) -> Process<V>) -> Process<V> {
    Process::Par(range.map(f).collect())
}

/// `Σ_{i ∈ range} coef_i * atom_i`.
pub fn sum<V>(range: RangeInclusive<i64>, mut f: impl FnMut(i64) -> (i64, Atom<V>)) -> LinExpr<V> {
    LinExpr {
        constant: 0,
        terms: range.map(&mut f).collect(),
    }
}

/// Flat name of an indexed variable: `indexed("b", &[1, 2])` is `b_1_2`.
pub fn indexed(base: &str, idx: &[i64]) -> String {
    let mut s = base.to_string();
    for i in idx {
        s.push('_');
        s.push_str(&i.to_string());
    }
    s
}

/// `{guards} ⇒ target ← f`.
#[derive(Clone, PartialEq)]
pub struct GuardedCommand {
    pub guards: Vec<Pred>,
    pub target: VarId,
    pub f: MonotoneFn,
}

impl fmt::Debug for GuardedCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} => {} <- {:?}", self.guards, self.target, self.f)
    }
}

impl GuardedCommand {
    pub fn new(guards: Vec<Pred>, target: VarId, f: MonotoneFn) -> Self {
        GuardedCommand { guards, target, f }
    }

    pub fn guards_hold(&self, s: &(impl StoreView + ?Sized)) -> bool {
        self.guards.iter().all(|g| g.holds(s))
    }

    /// The value told by this command on `s`, or `None` when a guard fails.
    pub fn evaluate(&self, s: &(impl StoreView + ?Sized)) -> Option<Value> {
        self.guards_hold(s).then(|| self.f.eval(s))
    }

    /// Executes the command on the shared store. Returns `None` when a guard
    /// does not hold, otherwise whether the target cell changed.
    pub fn apply(&self, store: &Store) -> Option<bool> {
        if !self.guards_hold(store) {
            return None;
        }
        let t = self.target;
        Some(match &self.f {
            MonotoneFn::Interval { lb, ub } => {
                let mut changed = false;
                if let Some(e) = lb {
                    changed |= store.join_lb(t, e.eval(store, crate::expr::Polarity::Inc));
                }
                if let Some(e) = ub {
                    changed |= store.join_ub(t, e.eval(store, crate::expr::Polarity::Dec));
                }
                changed
            }
            MonotoneFn::ZInc(e) => store.join_zinc(t, e.eval(store, crate::expr::Polarity::Inc)),
            MonotoneFn::ZDec(e) => store.join_zdec(t, e.eval(store, crate::expr::Polarity::Dec)),
            MonotoneFn::Entailed(ps) => ps.iter().all(|p| p.holds(store)) && store.join_level(t, 1),
            f => {
                let v = f.eval(store);
                store
                    .join(t, v)
                    .unwrap_or_else(|e| panic!("command {self:?} produced an ill-typed value: {e}"))
            }
        })
    }

    /// Cells read by the guards and the function.
    pub fn reads(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        for g in &self.guards {
            g.reads(&mut out);
        }
        out.extend(self.f.reads());
        out.sort();
        out.dedup();
        out
    }

    pub fn validate(&self, schema: &Schema) -> Result<(), ModelError> {
        if self.target.0 >= schema.len() {
            return Err(crate::lattice::SchemaError::UnknownVar(self.target.0).into());
        }
        if let Some(k) = self.f.kind() {
            schema.check(self.target, k)?;
        }
        for g in &self.guards {
            g.validate(schema)?;
        }
        self.f.validate(schema)
    }

    fn with_prefix(mut self, prefix: &[Pred]) -> Self {
        let mut guards = prefix.to_vec();
        guards.append(&mut self.guards);
        self.guards = guards;
        self
    }
}

/// A validated set of guarded commands together with its schema.
#[derive(Clone, Debug)]
pub struct Program {
    pub schema: Arc<Schema>,
    pub commands: Vec<GuardedCommand>,
}

impl Program {
    pub fn new(schema: Schema, commands: Vec<GuardedCommand>) -> Result<Self, ModelError> {
        for c in &commands {
            c.validate(&schema)?;
        }
        Ok(Program {
            schema: Arc::new(schema),
            commands,
        })
    }

    /// A fresh store with every cell at bottom.
    pub fn store(&self) -> Store {
        Store::new(self.schema.clone())
    }

    pub fn bottom(&self) -> Snapshot {
        Snapshot::bottom(self.schema.clone())
    }
}

/// Guarded normal form: flattens `p` under the accumulated guards `acc`.
/// Sequential composition is treated as parallel composition.
pub fn gnf(acc: &[Pred], p: &Process) -> Result<Vec<GuardedCommand>, ModelError> {
    let mut out = Vec::new();
    gnf_into(acc, p, &mut out)?;
    Ok(out)
}

fn gnf_into(acc: &[Pred], p: &Process, out: &mut Vec<GuardedCommand>) -> Result<(), ModelError> {
    match p {
        Process::Tell { target, f } => {
            out.push(GuardedCommand::new(acc.to_vec(), *target, f.clone()));
        }
        Process::Ask { guard, body } => {
            let mut inner = acc.to_vec();
            inner.extend(guard.iter().cloned());
            gnf_into(&inner, body, out)?;
        }
        Process::Par(ps) | Process::Seq(ps) => {
            for q in ps {
                gnf_into(acc, q, out)?;
            }
        }
        Process::Local { name, .. } => return Err(ModelError::UnexpectedLocal(name.clone())),
    }
    Ok(())
}

/// Erases local declarations of a named process.
///
/// Free names resolve to `globals`; every local becomes a fresh cell appended
/// to the schema, numbered depth-first from left to right. A local may not
/// reuse a name already visible at its declaration.
pub fn erase_locals(p: &Process<String>, globals: Schema) -> Result<(Process, Schema), ModelError> {
    let mut schema = globals;
    let mut scope = Scope {
        globals: schema.len(),
        locals: Vec::new(),
    };
    let q = erase(p, &mut schema, &mut scope)?;
    Ok((q, schema))
}

struct Scope {
    globals: usize,
    locals: Vec<(String, VarId)>,
}

fn resolve(name: &str, schema: &Schema, scope: &Scope) -> Option<VarId> {
    scope
        .locals
        .iter()
        .rev()
        .find(|(n, _)| n == name)
        .map(|(_, v)| *v)
        .or_else(|| schema.find(name).filter(|v| v.0 < scope.globals))
}

fn erase(p: &Process<String>, schema: &mut Schema, scope: &mut Scope) -> Result<Process, ModelError> {
    match p {
        Process::Local { name, kind, body } => {
            if resolve(name, schema, scope).is_some() {
                return Err(ModelError::DuplicateName(name.clone()));
            }
            let v = schema.push(name.clone(), *kind);
            scope.locals.push((name.clone(), v));
            let q = erase(body, schema, scope);
            scope.locals.pop();
            q
        }
        Process::Tell { target, f } => {
            let lookup = |n: String| resolve(&n, schema, scope).ok_or(ModelError::UnboundName(n));
            let target = lookup(target.clone())?;
            let f = f.map_vars(&mut |n: String| lookup(n))?;
            Ok(Process::Tell { target, f })
        }
        Process::Ask { guard, body } => {
            let guard = guard
                .iter()
                .map(|g| g.map_vars(&mut |n: String| resolve(&n, schema, scope).ok_or(ModelError::UnboundName(n))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Process::ask(guard, erase(body, schema, scope)?))
        }
        Process::Par(ps) => Ok(Process::Par(
            ps.iter().map(|q| erase(q, schema, scope)).collect::<Result<_, _>>()?,
        )),
        Process::Seq(ps) => Ok(Process::Seq(
            ps.iter().map(|q| erase(q, schema, scope)).collect::<Result<_, _>>()?,
        )),
    }
}

/// One application of the denotation `D(p)` to `s`.
pub fn denote(p: &Process, s: &Snapshot) -> Result<Snapshot, ModelError> {
    match p {
        Process::Tell { target, f } => {
            let mut out = s.clone();
            out.join_value(*target, f.eval(s))?;
            Ok(out)
        }
        Process::Ask { guard, body } => {
            if guard.iter().all(|g| g.holds(s)) {
                denote(body, s)
            } else {
                Ok(s.clone())
            }
        }
        Process::Par(ps) => ps.iter().try_fold(s.clone(), |acc, q| Ok(acc.join(&denote(q, s)?))),
        Process::Seq(ps) => ps.iter().try_fold(s.clone(), |acc, q| denote(q, &acc)),
        Process::Local { name, .. } => Err(ModelError::UnexpectedLocal(name.clone())),
    }
}

/// Least fixed point of `D(p)` above `s`, or the first failed iterate.
pub fn fix_denote(p: &Process, s: &Snapshot) -> Result<Snapshot, ModelError> {
    let mut cur = s.clone();
    loop {
        if cur.is_failed() {
            return Ok(cur);
        }
        let next = denote(p, &cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Materialises inline guard predicates into `BInc` cells.
///
/// Each command `{H, P} ⇒ x ← f`, where `H` are cell guards and `P` inline
/// predicates, becomes `{} ⇒ g ← entailed(P)` and `{H, g} ⇒ x ← f`. Identical
/// predicate sets share one cell.
pub fn desugar_guards(cmds: &[GuardedCommand], schema: &mut Schema) -> Vec<GuardedCommand> {
    let mut cells: HashMap<Vec<Pred>, VarId> = HashMap::new();
    let mut out = Vec::new();
    let mut lowered = Vec::new();
    for c in cmds {
        let (holds, preds): (Vec<Pred>, Vec<Pred>) =
            c.guards.iter().cloned().partition(|g| matches!(g, Pred::Holds(_)));
        if preds.is_empty() {
            lowered.push(c.clone());
            continue;
        }
        let g = *cells.entry(preds.clone()).or_insert_with(|| {
            let g = schema.push(format!("guard{}", schema.len()), Kind::BInc);
            out.push(GuardedCommand::new(vec![], g, MonotoneFn::Entailed(preds)));
            g
        });
        let mut guards = holds;
        guards.push(Pred::Holds(g));
        lowered.push(GuardedCommand::new(guards, c.target, c.f.clone()));
    }
    out.extend(lowered);
    out
}

/// Prefixes every command with `guard`, i.e. `gnf` of `if guard then P`.
pub fn guarded(guard: &[Pred], cmds: Vec<GuardedCommand>) -> Vec<GuardedCommand> {
    cmds.into_iter().map(|c| c.with_prefix(guard)).collect()
}

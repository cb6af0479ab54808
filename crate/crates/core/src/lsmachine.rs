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

//! Exhaustive exploration of the load/store execution of guarded commands.
//!
//! Each guarded command `{b..} ⇒ x ← f(y..)` runs on its own thread as the
//! loop
//!
//! ```text
//!  1 while true
//!  2   L b rb ..
//!  3   if rb ∧ ..
//!  4     L y ry ..
//!  5     rf = f(ry ..)
//!  6     L x rx
//!  7     ox = rx ⊔ rf
//!  8     bx = ox > rx
//!  9     if bx
//! 10       S ox x
//! ```
//!
//! Shared memory holds one atomic location per variable and the store
//! instruction overwrites it. Only the order constraints 2→3→9→10, 6→7 and
//! 4→5→7→8→9 are enforced (or the full program order in strict mode), so
//! loads may be performed early. The explorer enumerates every interleaving
//! of shared-memory steps up to a bound on loop iterations; thread-local
//! steps are performed eagerly since they commute with all other steps.
//!
//! A state is terminal when every thread sits at the start of an iteration
//! (or has used up its iterations) and no command would change the store if
//! it ran once more. Paths that run out of iterations before reaching such a
//! state are counted as truncated.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::run_sequential;
use crate::expr::{IntExpr, LinExpr, MonotoneFn, Pred};
use crate::lattice::{BInc, Interval, Kind, Schema, Snapshot, Store, StoreView, Value, VarId, ZInc};
use crate::process::GuardedCommand;

/// One instruction of the compiled loop body.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Op {
    LoadGuard(VarId),
    TestGuards,
    LoadValue(VarId),
    Compute,
    LoadTarget(VarId),
    Join,
    Compare,
    Branch,
    Store(VarId),
}

impl Op {
    pub fn line(self) -> u8 {
        match self {
            Op::LoadGuard(_) => 2,
            Op::TestGuards => 3,
            Op::LoadValue(_) => 4,
            Op::Compute => 5,
            Op::LoadTarget(_) => 6,
            Op::Join => 7,
            Op::Compare => 8,
            Op::Branch => 9,
            Op::Store(_) => 10,
        }
    }

    /// Loads and stores touch shared memory; everything else is local.
    pub fn is_shared(self) -> bool {
        matches!(
            self,
            Op::LoadGuard(_) | Op::LoadValue(_) | Op::LoadTarget(_) | Op::Store(_)
        )
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::LoadGuard(v) => write!(f, "L {v} rb{}", v.0),
            Op::TestGuards => write!(f, "if rb.."),
            Op::LoadValue(v) => write!(f, "L {v} ry{}", v.0),
            Op::Compute => write!(f, "rf = f(ry..)"),
            Op::LoadTarget(v) => write!(f, "L {v} rx"),
            Op::Join => write!(f, "ox = rx ⊔ rf"),
            Op::Compare => write!(f, "bx = ox > rx"),
            Op::Branch => write!(f, "if bx"),
            Op::Store(v) => write!(f, "S ox {v}"),
        }
    }
}

/// The loop body of one guarded command.
#[derive(Clone, Debug)]
pub struct LsProgram {
    pub command: GuardedCommand,
    pub instrs: Vec<Op>,
    guard_vars: Vec<VarId>,
    value_vars: Vec<VarId>,
}

impl LsProgram {
    fn index(&self, pred: impl Fn(Op) -> bool) -> Vec<usize> {
        self.instrs
            .iter()
            .enumerate()
            .filter(|(_, op)| pred(**op))
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for LsProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, " 1 while true")?;
        for op in &self.instrs {
            writeln!(f, "{:2}   {op}", op.line())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LsError {
    #[error("state space exceeds the bound of {0} states")]
    BoundExceeded(usize),
    #[error("command reads too many cells ({0} instructions, at most 32)")]
    TooLarge(usize),
    #[error("at most 8 threads are supported, got {0}")]
    TooManyThreads(usize),
}

/// Compiles a guarded command to its loop body.
pub fn compile_ls(cmd: &GuardedCommand) -> Result<LsProgram, LsError> {
    let mut guard_vars = Vec::new();
    for g in &cmd.guards {
        g.reads(&mut guard_vars);
    }
    guard_vars.sort();
    guard_vars.dedup();
    let mut value_vars = cmd.f.reads();
    value_vars.sort();
    value_vars.dedup();

    let mut instrs: Vec<Op> = guard_vars.iter().map(|&v| Op::LoadGuard(v)).collect();
    instrs.push(Op::TestGuards);
    instrs.extend(value_vars.iter().map(|&v| Op::LoadValue(v)));
    instrs.extend([
        Op::Compute,
        Op::LoadTarget(cmd.target),
        Op::Join,
        Op::Compare,
        Op::Branch,
        Op::Store(cmd.target),
    ]);
    if instrs.len() > 32 {
        return Err(LsError::TooLarge(instrs.len()));
    }
    Ok(LsProgram {
        command: cmd.clone(),
        instrs,
        guard_vars,
        value_vars,
    })
}

/// Which program-order edges are enforced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderMode {
    /// Only the edges 2→3→9→10, 6→7 and 4→5→7→8→9.
    Relaxed,
    /// The full sequential order of the listing.
    Strict,
}

/// Deliberate defects used to check that the explorer finds bugs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mutation {
    None,
    /// Store unconditionally: `bx` is always true.
    NoChangeGuard,
    /// Store `rf` instead of `rx ⊔ rf`, discarding the loaded value.
    LostUpdate,
}

#[derive(Clone, Copy, Debug)]
pub struct ExploreConfig {
    /// Loop iterations available to each thread.
    pub max_rounds: u8,
    /// Maximal number of distinct states before giving up.
    pub max_states: usize,
    pub mode: OrderMode,
    pub mutation: Mutation,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            max_rounds: 3,
            max_states: 2_000_000,
            mode: OrderMode::Relaxed,
            mutation: Mutation::None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Thread {
    rounds: u8,
    active: bool,
    done: u32,
    gregs: Vec<Option<Value>>,
    vregs: Vec<Option<Value>>,
    rf: Option<Value>,
    rx: Option<Value>,
    ox: Option<Value>,
    guard: Option<bool>,
    bx: Option<bool>,
}

impl Thread {
    fn idle(rounds: u8, prog: &LsProgram) -> Self {
        Thread {
            rounds,
            active: false,
            done: 0,
            gregs: vec![None; prog.guard_vars.len()],
            vregs: vec![None; prog.value_vars.len()],
            rf: None,
            rx: None,
            ox: None,
            guard: None,
            bx: None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct State {
    shared: Vec<Value>,
    threads: Vec<Thread>,
}

struct Machine<'a> {
    progs: &'a [LsProgram],
    schema: Arc<Schema>,
    cfg: ExploreConfig,
    deps: Vec<Vec<u32>>,
}

fn is_greater(a: Value, b: Value) -> bool {
    a != b && b.leq(a).unwrap_or(false)
}

impl<'a> Machine<'a> {
    fn new(progs: &'a [LsProgram], schema: Arc<Schema>, cfg: ExploreConfig) -> Self {
        let deps = progs.iter().map(|p| Self::dependencies(p, cfg.mode)).collect();
        Machine {
            progs,
            schema,
            cfg,
            deps,
        }
    }

    fn dependencies(p: &LsProgram, mode: OrderMode) -> Vec<u32> {
        let mask = |idx: Vec<usize>| idx.into_iter().fold(0u32, |m, i| m | (1 << i));
        let guard_loads = mask(p.index(|op| matches!(op, Op::LoadGuard(_))));
        let value_loads = mask(p.index(|op| matches!(op, Op::LoadValue(_))));
        let at = |want: Op| mask(p.index(|op| std::mem::discriminant(&op) == std::mem::discriminant(&want)));
        p.instrs
            .iter()
            .enumerate()
            .map(|(i, op)| match mode {
                OrderMode::Strict => (1u32 << i) - 1,
                OrderMode::Relaxed => match op {
                    Op::LoadGuard(_) | Op::LoadValue(_) | Op::LoadTarget(_) => 0,
                    Op::TestGuards => guard_loads,
                    Op::Compute => value_loads,
                    Op::Join => at(Op::Compute) | at(Op::LoadTarget(VarId(0))),
                    Op::Compare => at(Op::Join),
                    Op::Branch => at(Op::TestGuards) | at(Op::Compare),
                    Op::Store(_) => at(Op::Branch),
                },
            })
            .collect()
    }

    /// At the top of the loop with nothing loaded yet, or finished.
    fn is_clean(&self, t: usize, th: &Thread) -> bool {
        let shared = self.progs[t]
            .instrs
            .iter()
            .enumerate()
            .filter(|(_, op)| op.is_shared())
            .fold(0u32, |m, (i, _)| m | (1 << i));
        !th.active || th.done & shared == 0
    }

    fn registers(&self, vars: &[VarId], regs: &[Option<Value>]) -> Snapshot {
        let mut s = Snapshot::bottom(self.schema.clone());
        for (v, r) in vars.iter().zip(regs) {
            if let Some(val) = r {
                s.assign(*v, *val);
            }
        }
        s
    }

    fn start_iteration(&self, t: usize, th: &mut Thread) {
        *th = Thread::idle(th.rounds, &self.progs[t]);
        if th.rounds < self.cfg.max_rounds {
            th.rounds += 1;
            th.active = true;
            self.settle(t, th);
        }
    }

    fn end_iteration(&self, t: usize, th: &mut Thread) {
        self.start_iteration(t, th);
    }

    /// Runs every enabled local instruction of thread `t`.
    fn settle(&self, t: usize, th: &mut Thread) {
        let prog = &self.progs[t];
        loop {
            if !th.active {
                return;
            }
            let next = prog.instrs.iter().enumerate().find(|&(i, op)| {
                !op.is_shared() && th.done & (1 << i) == 0 && th.done & self.deps[t][i] == self.deps[t][i]
            });
            let Some((i, op)) = next else { return };
            th.done |= 1 << i;
            match op {
                Op::TestGuards => {
                    let regs = self.registers(&prog.guard_vars, &th.gregs);
                    let ok = prog.command.guards.iter().all(|g| g.holds(&regs));
                    th.guard = Some(ok);
                    if !ok {
                        return self.end_iteration(t, th);
                    }
                }
                Op::Compute => {
                    let regs = self.registers(&prog.value_vars, &th.vregs);
                    th.rf = Some(prog.command.f.eval(&regs));
                }
                Op::Join => {
                    let (rx, rf) = (th.rx.unwrap(), th.rf.unwrap());
                    th.ox = Some(match self.cfg.mutation {
                        Mutation::LostUpdate => rf,
                        _ => rx.join(rf).expect("well-typed command"),
                    });
                }
                Op::Compare => {
                    th.bx = Some(match self.cfg.mutation {
                        Mutation::NoChangeGuard => true,
                        _ => is_greater(th.ox.unwrap(), th.rx.unwrap()),
                    });
                }
                Op::Branch => {
                    if th.bx != Some(true) {
                        return self.end_iteration(t, th);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    fn enabled_shared(&self, t: usize, th: &Thread) -> Vec<usize> {
        if !th.active {
            return Vec::new();
        }
        let prog = &self.progs[t];
        (0..prog.instrs.len())
            .filter(|&i| {
                prog.instrs[i].is_shared() && th.done & (1 << i) == 0 && th.done & self.deps[t][i] == self.deps[t][i]
            })
            .collect()
    }

    fn step(&self, s: &State, t: usize, i: usize) -> State {
        let mut next = s.clone();
        let prog = &self.progs[t];
        let th = &mut next.threads[t];
        th.done |= 1 << i;
        match prog.instrs[i] {
            Op::LoadGuard(v) => {
                let k = prog.guard_vars.iter().position(|&u| u == v).unwrap();
                th.gregs[k] = Some(s.shared[v.0]);
            }
            Op::LoadValue(v) => {
                let k = prog.value_vars.iter().position(|&u| u == v).unwrap();
                th.vregs[k] = Some(s.shared[v.0]);
            }
            Op::LoadTarget(v) => th.rx = Some(s.shared[v.0]),
            Op::Store(v) => {
                next.shared[v.0] = th.ox.unwrap();
                let mut th = next.threads[t].clone();
                self.end_iteration(t, &mut th);
                next.threads[t] = th;
                return next;
            }
            _ => unreachable!(),
        }
        let mut th = next.threads[t].clone();
        self.settle(t, &mut th);
        next.threads[t] = th;
        next
    }

    fn snapshot(&self, shared: &[Value]) -> Snapshot {
        let mut s = Snapshot::bottom(self.schema.clone());
        for (i, v) in shared.iter().enumerate() {
            s.assign(VarId(i), *v);
        }
        s
    }

    /// Whether one more complete iteration of any thread, started now, would
    /// modify the shared store.
    fn quiescent(&self, shared: &Snapshot) -> bool {
        self.progs.iter().all(|p| {
            let c = &p.command;
            if !c.guards_hold(shared) {
                return true;
            }
            let rx = shared.value(c.target);
            let rf = c.f.eval(shared);
            let ox = match self.cfg.mutation {
                Mutation::LostUpdate => rf,
                _ => rx.join(rf).expect("well-typed command"),
            };
            let store = match self.cfg.mutation {
                Mutation::NoChangeGuard => true,
                _ => is_greater(ox, rx),
            };
            !store || ox == rx
        })
    }
}

/// Outcome of an exhaustive exploration.
#[derive(Clone, Debug)]
pub struct Exploration {
    /// Distinct terminal stores, in discovery order.
    pub terminals: Vec<Snapshot>,
    /// Number of distinct machine states.
    pub states: usize,
    /// Paths that exhausted the iteration budget before becoming terminal.
    pub truncated: usize,
    trace_to_terminal: Vec<Vec<String>>,
    unsound: Option<(Snapshot, Vec<String>)>,
}

/// A store that violates a theorem together with the interleaving reaching it.
#[derive(Clone, Debug)]
pub struct Violation {
    pub store: Snapshot,
    pub trace: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "store {}", self.store)?;
        for s in &self.trace {
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Enumerates all interleavings of `programs` from `s0`. Stores that are not
/// below `bound` (when given) are recorded as soundness violations.
pub fn explore(programs: &[LsProgram], s0: &Snapshot, cfg: ExploreConfig) -> Result<Exploration, LsError> {
    explore_bounded(programs, s0, cfg, None)
}

fn explore_bounded(
    programs: &[LsProgram],
    s0: &Snapshot,
    cfg: ExploreConfig,
    bound: Option<&Snapshot>,
) -> Result<Exploration, LsError> {
    if programs.len() > 8 {
        return Err(LsError::TooManyThreads(programs.len()));
    }
    let m = Machine::new(programs, s0.schema_arc().clone(), cfg);
    let mut init = State {
        shared: (0..s0.schema().len()).map(|i| s0.value(VarId(i))).collect(),
        threads: programs.iter().map(|p| Thread::idle(0, p)).collect(),
    };
    for t in 0..programs.len() {
        let mut th = init.threads[t].clone();
        m.start_iteration(t, &mut th);
        init.threads[t] = th;
    }

    let mut ids: HashMap<State, usize> = HashMap::new();
    let mut parents: Vec<(usize, usize, usize)> = Vec::new();
    let mut states: Vec<State> = Vec::new();
    let mut stack = vec![0usize];
    ids.insert(init.clone(), 0);
    states.push(init);
    parents.push((usize::MAX, 0, 0));

    let trace = |parents: &[(usize, usize, usize)], mut id: usize| -> Vec<String> {
        let mut out = Vec::new();
        while parents[id].0 != usize::MAX {
            let (p, t, i) = parents[id];
            let op = programs[t].instrs[i];
            out.push(format!("T{t} line {}: {op}", op.line()));
            id = p;
        }
        out.reverse();
        out
    };

    let mut result = Exploration {
        terminals: Vec::new(),
        states: 0,
        truncated: 0,
        trace_to_terminal: Vec::new(),
        unsound: None,
    };

    while let Some(id) = stack.pop() {
        let state = states[id].clone();
        let shared = m.snapshot(&state.shared);
        if let Some(b) = bound {
            if result.unsound.is_none() && !shared.leq(b) {
                result.unsound = Some((shared.clone(), trace(&parents, id)));
            }
        }
        let clean = state.threads.iter().enumerate().all(|(t, th)| m.is_clean(t, th));
        if clean && m.quiescent(&shared) {
            let c = shared.canonical();
            if !result.terminals.contains(&c) {
                result.terminals.push(c);
                result.trace_to_terminal.push(trace(&parents, id));
            }
            continue;
        }
        let mut any = false;
        for t in 0..programs.len() {
            for i in m.enabled_shared(t, &state.threads[t]) {
                any = true;
                let next = m.step(&state, t, i);
                if !ids.contains_key(&next) {
                    let nid = states.len();
                    if nid >= cfg.max_states {
                        return Err(LsError::BoundExceeded(cfg.max_states));
                    }
                    ids.insert(next.clone(), nid);
                    states.push(next);
                    parents.push((id, t, i));
                    stack.push(nid);
                }
            }
        }
        if !any {
            result.truncated += 1;
        }
    }
    result.states = states.len();
    Ok(result)
}

/// Results of the soundness, completeness and uniqueness checks.
#[derive(Clone, Debug)]
pub struct TheoremReport {
    /// Fixed point computed by the sequential engine.
    pub fix: Snapshot,
    pub exploration: Exploration,
    /// First visited store that is not below `fix`.
    pub soundness: Option<Violation>,
    /// First terminal store different from `fix`.
    pub completeness: Option<Violation>,
    /// Exactly one terminal store was reached.
    pub unique: bool,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.soundness.is_none() && self.completeness.is_none() && self.unique
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.exploration;
        writeln!(
            f,
            "states: {}, terminal stores: {}, truncated paths: {}",
            e.states,
            e.terminals.len(),
            e.truncated
        )?;
        writeln!(f, "fixed point: {}", self.fix)?;
        match &self.soundness {
            None => writeln!(f, "soundness: PASS")?,
            Some(v) => write!(f, "soundness: FAIL at {v}")?,
        }
        match &self.completeness {
            None => writeln!(f, "completeness: PASS")?,
            Some(v) => write!(f, "completeness: FAIL at {v}")?,
        }
        writeln!(f, "uniqueness: {}", if self.unique { "PASS" } else { "FAIL" })
    }
}

/// Explores `cmds` from `s0` and compares against the sequential fixed point.
pub fn check_theorems(cmds: &[GuardedCommand], s0: &Snapshot, cfg: ExploreConfig) -> Result<TheoremReport, LsError> {
    let programs = cmds.iter().map(compile_ls).collect::<Result<Vec<_>, _>>()?;
    let store = Store::from_snapshot(s0);
    run_sequential(cmds, &store);
    let fix = store.snapshot().canonical();
    let exploration = explore_bounded(&programs, s0, cfg, Some(&fix))?;
    let soundness = exploration
        .unsound
        .clone()
        .map(|(store, trace)| Violation { store, trace });
    let completeness = exploration
        .terminals
        .iter()
        .zip(&exploration.trace_to_terminal)
        .find(|(t, _)| **t != fix)
        .map(|(t, tr)| Violation {
            store: t.clone(),
            trace: tr.clone(),
        });
    let unique = exploration.terminals.len() == 1;
    Ok(TheoremReport {
        fix,
        exploration,
        soundness,
        completeness,
        unique,
    })
}

/// A small program with its initial store.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub commands: Vec<GuardedCommand>,
    pub s0: Snapshot,
}

fn zinc(c: i64) -> IntExpr {
    IntExpr::constant(c)
}

/// Programs exercised by the checker and the command-line demo.
pub fn builtin_programs() -> Vec<Builtin> {
    let mut out = Vec::new();

    let mut schema = Schema::new();
    let x = schema.push("x", Kind::ZInc);
    let mut s0 = Snapshot::bottom(Arc::new(schema));
    s0.assign(x, Value::ZInc(ZInc(0)));
    out.push(Builtin {
        name: "join-constant",
        commands: vec![GuardedCommand::new(vec![], x, MonotoneFn::ZInc(zinc(5)))],
        s0,
    });

    let mut schema = Schema::new();
    let x = schema.push("x", Kind::ZInc);
    let y = schema.push("y", Kind::ZInc);
    let mut s0 = Snapshot::bottom(Arc::new(schema));
    s0.assign(x, Value::ZInc(ZInc(0)));
    s0.assign(y, Value::ZInc(ZInc(0)));
    let max1 = |v| {
        MonotoneFn::ZInc(IntExpr::Max(vec![
            LinExpr::atom(crate::expr::Atom::Inc(v)).into(),
            zinc(1),
        ]))
    };
    out.push(Builtin {
        name: "mutual-max",
        commands: vec![
            GuardedCommand::new(vec![], x, max1(y)),
            GuardedCommand::new(vec![], y, max1(x)),
        ],
        s0,
    });

    let mut schema = Schema::new();
    let b = schema.push("b", Kind::BInc);
    let x = schema.push("x", Kind::ZInc);
    let mut s0 = Snapshot::bottom(Arc::new(schema));
    s0.assign(x, Value::ZInc(ZInc(0)));
    out.push(Builtin {
        name: "blocked-guard",
        commands: vec![
            GuardedCommand::new(vec![Pred::Holds(b)], x, MonotoneFn::ZInc(zinc(7))),
            GuardedCommand::new(vec![], x, MonotoneFn::ZInc(zinc(0))),
        ],
        s0,
    });

    let mut schema = Schema::new();
    let b = schema.push("b", Kind::BInc);
    let y = schema.push("y", Kind::ZInc);
    let x = schema.push("x", Kind::ZInc);
    let s0 = Snapshot::bottom(Arc::new(schema));
    out.push(Builtin {
        name: "guarded-chain",
        commands: vec![
            GuardedCommand::new(vec![], b, MonotoneFn::Const(Value::BInc(BInc::TRUE))),
            GuardedCommand::new(vec![], y, MonotoneFn::ZInc(zinc(3))),
            GuardedCommand::new(
                vec![Pred::Holds(b)],
                x,
                MonotoneFn::ZInc(LinExpr::atom(crate::expr::Atom::Inc(y)).plus(1).into()),
            ),
        ],
        s0,
    });

    out.push(shared_writer());
    out
}

/// Two commands writing opposite bounds of one interval.
pub fn shared_writer() -> Builtin {
    let mut schema = Schema::new();
    let x = schema.push("x", Kind::Interval);
    let s0 = Snapshot::bottom(Arc::new(schema));
    Builtin {
        name: "shared-writer",
        commands: vec![
            GuardedCommand::new(vec![], x, MonotoneFn::Const(Interval::at_least(1).into())),
            GuardedCommand::new(vec![], x, MonotoneFn::Const(Interval::at_most(5).into())),
        ],
        s0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin(name: &str) -> Builtin {
        builtin_programs().into_iter().find(|b| b.name == name).unwrap()
    }

    #[test]
    fn compile_without_guards_or_reads() {
        let b = builtin("join-constant");
        let p = compile_ls(&b.commands[0]).unwrap();
        let x = VarId(0);
        assert_eq!(
            p.instrs,
            vec![
                Op::TestGuards,
                Op::Compute,
                Op::LoadTarget(x),
                Op::Join,
                Op::Compare,
                Op::Branch,
                Op::Store(x)
            ]
        );
    }

    #[test]
    fn compile_with_one_guard_and_one_read() {
        let b = builtin("guarded-chain");
        let p = compile_ls(&b.commands[2]).unwrap();
        let loads: Vec<_> = p.instrs.iter().filter(|op| op.is_shared()).collect();
        assert_eq!(
            loads,
            vec![
                &Op::LoadGuard(VarId(0)),
                &Op::LoadValue(VarId(1)),
                &Op::LoadTarget(VarId(2)),
                &Op::Store(VarId(2))
            ]
        );
        assert!(p.to_string().contains("S ox #2"));
    }

    #[test]
    fn join_constant_terminates_at_five() {
        let b = builtin("join-constant");
        let r = check_theorems(&b.commands, &b.s0, ExploreConfig::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.exploration.terminals[0].value(VarId(0)), Value::ZInc(ZInc(5)));
    }

    #[test]
    fn mutual_max_reaches_one_one() {
        let b = builtin("mutual-max");
        let r = check_theorems(&b.commands, &b.s0, ExploreConfig::default()).unwrap();
        assert!(r.passed(), "{r}");
        let t = &r.exploration.terminals[0];
        assert_eq!(
            (t.value(VarId(0)), t.value(VarId(1))),
            (Value::ZInc(ZInc(1)), Value::ZInc(ZInc(1)))
        );
    }

    #[test]
    fn blocked_guard_keeps_initial_store() {
        let b = builtin("blocked-guard");
        let r = check_theorems(&b.commands, &b.s0, ExploreConfig::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.exploration.terminals, vec![b.s0.canonical()]);
    }

    #[test]
    fn strict_order_reaches_the_same_terminals() {
        for b in builtin_programs() {
            let relaxed = check_theorems(&b.commands, &b.s0, ExploreConfig::default()).unwrap();
            let strict = check_theorems(
                &b.commands,
                &b.s0,
                ExploreConfig {
                    mode: OrderMode::Strict,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(strict.passed(), "{}: {strict}", b.name);
            assert_eq!(
                relaxed.exploration.terminals, strict.exploration.terminals,
                "{}",
                b.name
            );
            assert!(strict.exploration.states <= relaxed.exploration.states);
        }
    }

    fn with(mutation: Mutation) -> ExploreConfig {
        ExploreConfig {
            mutation,
            ..Default::default()
        }
    }

    #[test]
    fn dropping_the_change_test_is_harmless() {
        for b in builtin_programs() {
            let r = check_theorems(&b.commands, &b.s0, with(Mutation::NoChangeGuard)).unwrap();
            assert!(r.passed(), "{}: {r}", b.name);
        }
    }

    #[test]
    fn lost_update_is_caught_on_shared_writers() {
        let b = shared_writer();
        let r = check_theorems(&b.commands, &b.s0, with(Mutation::LostUpdate)).unwrap();
        assert!(!r.passed());
        let bad = r.completeness.expect("a wrong terminal store");
        assert_ne!(bad.store, r.fix);
        assert!(!bad.trace.is_empty());
        assert!(!r.unique);
    }

    #[test]
    fn lost_update_is_invisible_with_single_writers() {
        let b = builtin("mutual-max");
        let r = check_theorems(&b.commands, &b.s0, with(Mutation::LostUpdate)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn shared_writer_recovers_overwritten_bounds() {
        let b = shared_writer();
        let r = check_theorems(&b.commands, &b.s0, ExploreConfig::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.fix.interval(VarId(0)), Interval::new(1, 5));
        assert!(r.exploration.truncated > 0);
    }

    #[test]
    fn state_bound_is_reported() {
        let b = builtin("guarded-chain");
        let cfg = ExploreConfig {
            max_states: 10,
            ..Default::default()
        };
        assert_eq!(
            check_theorems(&b.commands, &b.s0, cfg).unwrap_err(),
            LsError::BoundExceeded(10)
        );
    }
}

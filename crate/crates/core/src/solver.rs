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

//! Propagate-and-search with branch and bound.
//!
//! Search nodes are decision lists. A node is restored by copying the root
//! store, replaying its decisions and propagating to a fixed point; no trail
//! is kept. The best objective found so far lives in a shared decreasing
//! integer cell, so parallel workers prune each other without locks.
//!
//! [`solve_parallel`] splits the tree breadth-first into many subproblems and
//! lets workers pull them from a shared cursor.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::engine::Engine;
use crate::lattice::{Kind, Snapshot, Store, StoreView, VarId, POS_INF};
use crate::process::Program;

/// One side of a binary split.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    /// `x <= m`
    Le(i64),
    /// `x >= m`
    Ge(i64),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Decision {
    pub var: VarId,
    pub branch: Branch,
}

impl Decision {
    pub fn apply(&self, store: &Store) -> bool {
        match self.branch {
            Branch::Le(m) => store.join_ub(self.var, m),
            Branch::Ge(m) => store.join_lb(self.var, m),
        }
    }
}

/// Branching variables. Among the unfixed ones, the narrowest interval is
/// split first, ties going to the lowest index. When all of them are fixed,
/// any other unfixed interval cell is split.
#[derive(Clone, Debug, Default)]
pub struct Strategy {
    pub vars: Vec<VarId>,
}

fn pick(s: &(impl StoreView + ?Sized), vars: impl Iterator<Item = VarId>) -> Option<VarId> {
    let mut best: Option<(u64, VarId)> = None;
    for v in vars {
        let w = s.interval(v).width();
        if w > 1 && best.is_none_or(|(bw, bv)| w < bw || (w == bw && v < bv)) {
            best = Some((w, v));
        }
    }
    best.map(|(_, v)| v)
}

/// The two complementary decisions splitting the chosen variable at
/// `mid = ⌊(l + u) / 2⌋`, or `None` if every interval is fixed.
pub fn branch(s: &(impl StoreView + ?Sized), strategy: &Strategy) -> Option<(Decision, Decision)> {
    let v = pick(s, strategy.vars.iter().copied()).or_else(|| {
        let schema = s.schema();
        pick(
            s,
            (0..schema.len())
                .map(VarId)
                .filter(|&v| schema.kind(v) == Kind::Interval),
        )
    })?;
    let iv = s.interval(v);
    let mid = ((iv.lb() as i128 + iv.ub() as i128).div_euclid(2)) as i64;
    Some((
        Decision {
            var: v,
            branch: Branch::Le(mid),
        },
        Decision {
            var: v,
            branch: Branch::Ge(mid + 1),
        },
    ))
}

/// A program to solve, optionally minimising the lower bound of an interval
/// cell.
#[derive(Clone, Debug)]
pub struct Problem {
    pub program: Program,
    pub objective: Option<VarId>,
    pub strategy: Strategy,
}

#[derive(Clone, Debug, Default)]
pub struct Limits {
    pub timeout: Option<Duration>,
    pub node_limit: Option<u64>,
    pub stop: Option<Arc<AtomicBool>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    Optimal,
    Satisfiable,
    Unsatisfiable,
    Unknown,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "OPTIMAL",
            SolveStatus::Satisfiable => "SAT",
            SolveStatus::Unsatisfiable => "UNSAT",
            SolveStatus::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    /// Search-tree nodes, each one a propagation to a fixed point.
    pub nodes: u64,
    pub failures: u64,
    pub solutions: u64,
    pub max_depth: usize,
    /// Guarded-command executions over all propagations.
    pub applications: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    fn merge(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.failures += o.failures;
        self.solutions += o.solutions;
        self.max_depth = self.max_depth.max(o.max_depth);
        self.applications += o.applications;
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: SolveStatus,
    pub objective: Option<i64>,
    pub solution: Option<Snapshot>,
    /// Objective values of the successive incumbents found by each worker,
    /// concatenated in worker order.
    pub incumbents: Vec<i64>,
    pub stats: SearchStats,
}

struct Shared {
    best: AtomicI64,
    stop: AtomicBool,
    limit_hit: AtomicBool,
    nodes: AtomicU64,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    external: Option<Arc<AtomicBool>>,
}

impl Shared {
    fn new(limits: &Limits, start: Instant) -> Self {
        Shared {
            best: AtomicI64::new(POS_INF),
            stop: AtomicBool::new(false),
            limit_hit: AtomicBool::new(false),
            nodes: AtomicU64::new(0),
            deadline: limits.timeout.map(|t| start + t),
            node_limit: limits.node_limit,
            external: limits.stop.clone(),
        }
    }

    /// Counts a node; returns false once a limit is reached.
    fn admit(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over = self.node_limit.is_some_and(|l| n > l)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
            || self.external.as_ref().is_some_and(|s| s.load(Ordering::Relaxed));
        if over {
            self.limit_hit.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
        }
        !over
    }
}

/// Private state of one search worker: the two stores and its incumbent.
struct Worker<'a> {
    problem: &'a Problem,
    engine: Engine,
    root: &'a Store,
    cur: Store,
    shared: &'a Shared,
    stats: SearchStats,
    incumbent: Option<(i64, Snapshot)>,
    trail: Vec<i64>,
}

enum NodeState {
    Failed,
    Solved,
    Open(Decision, Decision),
}

impl<'a> Worker<'a> {
    fn new(problem: &'a Problem, engine: Engine, root: &'a Store, shared: &'a Shared) -> Self {
        Worker {
            problem,
            engine,
            root,
            cur: root.clone(),
            shared,
            stats: SearchStats::default(),
            incumbent: None,
            trail: Vec::new(),
        }
    }

    /// Restores the node `path` in `cur` and classifies it.
    fn evaluate(&mut self, path: &[Decision]) -> NodeState {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(path.len());
        self.cur.copy_from(self.root);
        for d in path {
            d.apply(&self.cur);
        }
        if let Some(obj) = self.problem.objective {
            let best = self.shared.best.load(Ordering::Relaxed);
            if best != POS_INF {
                self.cur.join_ub(obj, best - 1);
            }
        }
        let r = self.engine.run(&self.problem.program.commands, &self.cur);
        self.stats.applications += r.applications;
        if r.is_failed() {
            self.stats.failures += 1;
            return NodeState::Failed;
        }
        match branch(&self.cur, &self.problem.strategy) {
            Some((l, r)) => NodeState::Open(l, r),
            None => {
                self.record_solution();
                NodeState::Solved
            }
        }
    }

    fn record_solution(&mut self) {
        self.stats.solutions += 1;
        let value = match self.problem.objective {
            Some(obj) => self.cur.lb(obj),
            None => {
                self.shared.stop.store(true, Ordering::Relaxed);
                0
            }
        };
        self.shared.best.fetch_min(value, Ordering::Relaxed);
        if self.incumbent.as_ref().is_none_or(|(v, _)| value < *v) {
            self.incumbent = Some((value, self.cur.snapshot()));
            self.trail.push(value);
        }
    }

    /// Depth-first, left-first search of the subtree rooted at `prefix`.
    fn dfs(&mut self, prefix: &[Decision]) {
        let mut path = prefix.to_vec();
        let base = path.len();
        let mut stack: Vec<(usize, Option<Decision>)> = vec![(base, None)];
        while let Some((len, d)) = stack.pop() {
            if !self.shared.admit() {
                return;
            }
            path.truncate(len);
            if let Some(d) = d {
                path.push(d);
            }
            if let NodeState::Open(l, r) = self.evaluate(&path) {
                stack.push((path.len(), Some(r)));
                stack.push((path.len(), Some(l)));
            }
        }
    }
}

/// Propagates the root of `problem` to a fixed point.
pub fn propagate_root(problem: &Problem, engine: Engine) -> (Store, crate::engine::EngineResult) {
    let store = problem.program.store();
    let r = engine.run(&problem.program.commands, &store);
    (store, r)
}

/// Statistics, best solution and incumbent trail of one worker.
type WorkerResult = (SearchStats, Option<(i64, Snapshot)>, Vec<i64>);

fn finish(shared: &Shared, workers: Vec<WorkerResult>, start: Instant, has_objective: bool) -> Outcome {
    let mut stats = SearchStats::default();
    let mut best: Option<(i64, Snapshot)> = None;
    let mut incumbents = Vec::new();
    for (s, inc, trail) in workers {
        stats.merge(&s);
        incumbents.extend(trail);
        if let Some((v, snap)) = inc {
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, snap));
            }
        }
    }
    stats.elapsed = start.elapsed();
    let limit = shared.limit_hit.load(Ordering::Relaxed);
    let status = match (&best, limit) {
        (Some(_), false) if has_objective => SolveStatus::Optimal,
        (Some(_), _) => SolveStatus::Satisfiable,
        (None, false) => SolveStatus::Unsatisfiable,
        (None, true) => SolveStatus::Unknown,
    };
    Outcome {
        status,
        objective: best.as_ref().filter(|_| has_objective).map(|(v, _)| *v),
        solution: best.map(|(_, s)| s),
        incumbents,
        stats,
    }
}

/// Sequential branch and bound.
pub fn solve_dfs(problem: &Problem, engine: Engine, limits: &Limits) -> Outcome {
    let start = Instant::now();
    let shared = Shared::new(limits, start);
    let root = problem.program.store();
    let mut w = Worker::new(problem, engine, &root, &shared);
    w.dfs(&[]);
    let parts = vec![(w.stats, w.incumbent, w.trail)];
    finish(&shared, parts, start, problem.objective.is_some())
}

/// Result of the breadth-first decomposition.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Open subproblems as decision lists from the root.
    pub frontier: Vec<Vec<Decision>>,
    /// Nodes evaluated while decomposing.
    pub nodes: u64,
}

/// Expands the tree breadth-first until at least `target` open nodes exist or
/// the tree is exhausted. Failed nodes are dropped and solutions recorded.
pub fn eps_decompose(problem: &Problem, engine: Engine, target: usize) -> Decomposition {
    let shared = Shared::new(&Limits::default(), Instant::now());
    let root = problem.program.store();
    let mut w = Worker::new(problem, engine, &root, &shared);
    let (frontier, _) = decompose(&mut w, target);
    Decomposition {
        frontier,
        nodes: w.stats.nodes,
    }
}

fn decompose(w: &mut Worker<'_>, target: usize) -> (Vec<Vec<Decision>>, bool) {
    let mut queue: VecDeque<(Vec<Decision>, Decision, Decision)> = VecDeque::new();
    if !w.shared.admit() {
        return (Vec::new(), false);
    }
    if let NodeState::Open(l, r) = w.evaluate(&[]) {
        queue.push_back((Vec::new(), l, r));
    }
    while !queue.is_empty() && queue.len() < target {
        let (path, l, r) = queue.pop_front().unwrap();
        for d in [l, r] {
            if !w.shared.admit() {
                return (Vec::new(), false);
            }
            let mut child = path.clone();
            child.push(d);
            if let NodeState::Open(cl, cr) = w.evaluate(&child) {
                queue.push_back((child, cl, cr));
            }
        }
    }
    (queue.into_iter().map(|(p, _, _)| p).collect(), true)
}

/// Decomposes into `eps_factor * workers` subproblems and solves them on
/// `workers` threads.
pub fn solve_parallel(
    problem: &Problem,
    engine: Engine,
    workers: usize,
    eps_factor: usize,
    limits: &Limits,
) -> Outcome {
    assert!(workers >= 1, "at least one worker is required");
    let start = Instant::now();
    let shared = Shared::new(limits, start);
    let root = problem.program.store();
    let mut first = Worker::new(problem, engine, &root, &shared);
    let (frontier, _) = decompose(&mut first, (eps_factor * workers).max(1));
    let mut parts = vec![(first.stats, first.incumbent, first.trail)];

    let cursor = AtomicUsize::new(0);
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let (root, shared, cursor, frontier) = (&root, &shared, &cursor, &frontier);
                scope.spawn(move || {
                    let mut w = Worker::new(problem, engine, root, shared);
                    loop {
                        let i = cursor.fetch_add(1, Ordering::Relaxed);
                        if i >= frontier.len() || shared.stop.load(Ordering::Relaxed) {
                            break;
                        }
                        w.dfs(&frontier[i]);
                    }
                    (w.stats, w.incumbent, w.trail)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    parts.extend(results);
    finish(&shared, parts, start, problem.objective.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Interval, Schema};
    use crate::propagation::{compile, domain, Constraint, Term};

    fn snap(vals: &[(i64, i64)]) -> Snapshot {
        let mut schema = Schema::new();
        for i in 0..vals.len() {
            schema.push(format!("x{i}"), Kind::Interval);
        }
        let mut s = Snapshot::bottom(Arc::new(schema));
        for (i, &(l, u)) in vals.iter().enumerate() {
            s.set(VarId(i), Interval::new(l, u).into()).unwrap();
        }
        s
    }

    #[test]
    fn branch_examples() {
        let all = Strategy::default();
        assert_eq!(branch(&snap(&[(3, 3), (4, 4)]), &all), None);
        let (l, r) = branch(&snap(&[(2, 2), (0, 9)]), &all).unwrap();
        assert_eq!(
            l,
            Decision {
                var: VarId(1),
                branch: Branch::Le(4)
            }
        );
        assert_eq!(
            r,
            Decision {
                var: VarId(1),
                branch: Branch::Ge(5)
            }
        );
        let (l, _) = branch(&snap(&[(0, 9), (0, 3)]), &all).unwrap();
        assert_eq!(l.var, VarId(1));
        let (l, _) = branch(&snap(&[(0, 3), (5, 8)]), &all).unwrap();
        assert_eq!(l.var, VarId(0));
        let (l, _) = branch(&snap(&[(-3, 0)]), &all).unwrap();
        assert_eq!(l.branch, Branch::Le(-2));
    }

    #[test]
    fn strategy_vars_take_priority() {
        let s = snap(&[(0, 1), (0, 9)]);
        let (l, _) = branch(&s, &Strategy { vars: vec![VarId(1)] }).unwrap();
        assert_eq!(l.var, VarId(1));
        let fixed = snap(&[(0, 1), (4, 4)]);
        let (l, _) = branch(&fixed, &Strategy { vars: vec![VarId(1)] }).unwrap();
        assert_eq!(l.var, VarId(0));
    }

    /// minimise y subject to x < y, 3 <= y, x + 2 <= y over [0, 5]
    fn small_problem() -> Problem {
        let mut schema = Schema::new();
        let x = schema.push("x", Kind::Interval);
        let y = schema.push("y", Kind::Interval);
        let mut cmds = vec![domain(x, 0, 5), domain(y, 0, 5)];
        cmds.extend(compile(&Constraint::lt(x, y), &mut schema).unwrap().commands);
        cmds.extend(compile(&Constraint::leq(3, y), &mut schema).unwrap().commands);
        cmds.extend(
            compile(&Constraint::leq(Term::Var(x, 2), y), &mut schema)
                .unwrap()
                .commands,
        );
        Problem {
            program: Program::new(schema, cmds).unwrap(),
            objective: Some(y),
            strategy: Strategy { vars: vec![x, y] },
        }
    }

    #[test]
    fn dfs_finds_optimum() {
        let p = small_problem();
        let out = solve_dfs(&p, Engine::Sequential, &Limits::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.objective, Some(3));
        assert!(out.incumbents.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn parallel_matches_dfs() {
        let p = small_problem();
        for workers in [1, 2, 4] {
            let out = solve_parallel(&p, Engine::Sequential, workers, 8, &Limits::default());
            assert_eq!(out.status, SolveStatus::Optimal);
            assert_eq!(out.objective, Some(3));
        }
    }

    #[test]
    fn unsat_and_limits() {
        let mut schema = Schema::new();
        let x = schema.push("x", Kind::Interval);
        let mut cmds = vec![domain(x, 0, 5)];
        cmds.extend(compile(&Constraint::leq(9, x), &mut schema).unwrap().commands);
        let p = Problem {
            program: Program::new(schema, cmds).unwrap(),
            objective: Some(x),
            strategy: Strategy::default(),
        };
        assert_eq!(
            solve_dfs(&p, Engine::Sequential, &Limits::default()).status,
            SolveStatus::Unsatisfiable
        );
        assert_eq!(
            solve_parallel(&p, Engine::Sequential, 2, 8, &Limits::default()).status,
            SolveStatus::Unsatisfiable
        );

        let q = small_problem();
        let lim = Limits {
            node_limit: Some(0),
            ..Default::default()
        };
        let out = solve_dfs(&q, Engine::Sequential, &lim);
        assert_eq!(out.status, SolveStatus::Unknown);
        assert_eq!(out.objective, None);
    }

    #[test]
    fn decomposition_sizes() {
        let mut schema = Schema::new();
        let x = schema.push("x", Kind::Interval);
        let y = schema.push("y", Kind::Interval);
        let p = Problem {
            program: Program::new(schema, vec![domain(x, 0, 7), domain(y, 0, 7)]).unwrap(),
            objective: None,
            strategy: Strategy { vars: vec![x, y] },
        };
        let d = eps_decompose(&p, Engine::Sequential, 1);
        assert_eq!(d.frontier, vec![Vec::<Decision>::new()]);
        let d = eps_decompose(&p, Engine::Sequential, 4);
        assert_eq!(d.frontier.len(), 4);
        assert!(d.frontier.iter().all(|path| path.len() == 2));
    }

    #[test]
    fn decomposition_drops_failed_children() {
        let mut schema = Schema::new();
        let x = schema.push("x", Kind::Interval);
        let y = schema.push("y", Kind::Interval);
        let mut cmds = vec![domain(x, 0, 9), domain(y, 0, 1)];
        // y = 0 requires both x >= 8 and x <= 2
        for c in [
            Constraint::or(Constraint::leq(1, y), Constraint::leq(8, x)),
            Constraint::or(Constraint::leq(1, y), Constraint::leq(x, 2)),
        ] {
            cmds.extend(compile(&c, &mut schema).unwrap().commands);
        }
        let p = Problem {
            program: Program::new(schema, cmds).unwrap(),
            objective: None,
            strategy: Strategy { vars: vec![y] },
        };
        let d = eps_decompose(&p, Engine::Sequential, 2);
        assert!(!d.frontier.is_empty());
        assert!(d.frontier.iter().all(|path| path[0].branch == Branch::Ge(1)));
    }
}

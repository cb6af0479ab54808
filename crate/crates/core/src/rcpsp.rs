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

//! Resource-constrained project scheduling.
//!
//! Instances are read from the Patterson text format or from JSON and turned
//! into a decomposed model: one start time per task, one 0/1 overlap cell per
//! ordered pair of tasks, and for every resource and task a sum of the usages
//! of the tasks running at that task's start.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::lattice::{Kind, Schema, VarId};
use crate::process::{GuardedCommand, Program};
use crate::propagation::{compile, compile_reified, domain, Constraint, Term};
use crate::solver::{Problem, Strategy};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Task {
    pub duration: i64,
    /// Usage of each resource.
    pub usages: Vec<i64>,
}

/// Tasks are indexed from 0. By convention the first and last tasks are the
/// dummy source and sink; the start of the last task is the makespan.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RcpspInstance {
    pub tasks: Vec<Task>,
    /// `(i, j)`: task `j` starts after task `i` ends.
    pub precedences: Vec<(usize, usize)>,
    pub capacities: Vec<i64>,
    /// Defaults to the sum of durations.
    #[serde(default)]
    pub horizon: Option<i64>,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum RcpspError {
    #[error("line {line}, offset {offset}: {msg}")]
    Parse { line: usize, offset: usize, msg: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("expected {expected} start times, got {got}")]
    Arity { expected: usize, got: usize },
}

impl RcpspInstance {
    pub fn horizon(&self) -> i64 {
        self.horizon
            .unwrap_or_else(|| self.tasks.iter().map(|t| t.duration).sum())
    }

    pub fn resources(&self) -> usize {
        self.capacities.len()
    }

    pub fn from_json(text: &str) -> Result<Self, RcpspError> {
        let inst: RcpspInstance = serde_json::from_str(text).map_err(|e| RcpspError::Invalid(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialises")
    }

    /// Reads either format, choosing JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self, RcpspError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            parse_patterson(text)
        }
    }

    pub fn validate(&self) -> Result<(), RcpspError> {
        let n = self.tasks.len();
        let bad = |msg: String| Err(RcpspError::Invalid(msg));
        if self.capacities.iter().any(|&c| c < 0) {
            return bad("negative capacity".into());
        }
        for (i, t) in self.tasks.iter().enumerate() {
            if t.duration < 0 || t.usages.iter().any(|&u| u < 0) {
                return bad(format!("task {i} has a negative value"));
            }
            if t.usages.len() != self.resources() {
                return bad(format!(
                    "task {i} has {} usages for {} resources",
                    t.usages.len(),
                    self.resources()
                ));
            }
        }
        if let Some(&(i, j)) = self.precedences.iter().find(|&&(i, j)| i >= n || j >= n) {
            return bad(format!("precedence ({i}, {j}) out of range"));
        }
        if let Some(i) = cycle_member(n, &self.precedences) {
            return bad(format!("precedence cycle through task {i}"));
        }
        if self.horizon.is_some_and(|h| h < 0) {
            return bad("negative horizon".into());
        }
        Ok(())
    }
}

/// Kahn's algorithm; returns a task left over on a cycle, if any.
fn cycle_member(n: usize, precedences: &[(usize, usize)]) -> Option<usize> {
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for &(i, j) in precedences {
        indeg[j] += 1;
        succ[i].push(j);
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop_front() {
        seen += 1;
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    (seen < n).then(|| (0..n).find(|&i| indeg[i] > 0).unwrap())
}

struct Tokens<'a> {
    iter: Box<dyn Iterator<Item = (usize, usize, &'a str)> + 'a>,
    line: usize,
    offset: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let iter = text.lines().enumerate().flat_map(|(l, line)| {
            line.split_whitespace().map(move |tok| {
                let off = tok.as_ptr() as usize - line.as_ptr() as usize;
                (l + 1, off + 1, tok)
            })
        });
        Tokens {
            iter: Box::new(iter),
            line: text.lines().count().max(1),
            offset: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> RcpspError {
        RcpspError::Parse {
            line: self.line,
            offset: self.offset,
            msg: msg.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<i64, RcpspError> {
        let Some((line, offset, tok)) = self.iter.next() else {
            return Err(self.err(format!("unexpected end of input, expected {what}")));
        };
        self.line = line;
        self.offset = offset;
        let v: i64 = tok
            .parse()
            .map_err(|_| self.err(format!("expected {what}, found `{tok}`")))?;
        if v < 0 {
            return Err(self.err(format!("negative {what}")));
        }
        Ok(v)
    }

    fn count(&mut self, what: &str) -> Result<usize, RcpspError> {
        let v = self.next(what)?;
        usize::try_from(v).map_err(|_| self.err(format!("{what} too large")))
    }
}

/// Parses the Patterson format: `J R`, then `R` capacities, then for every job
/// its duration, `R` usages, the number of successors and the 1-based
/// successor ids.
pub fn parse_patterson(text: &str) -> Result<RcpspInstance, RcpspError> {
    let mut toks = Tokens::new(text);
    let jobs = toks.count("job count")?;
    let res = toks.count("resource count")?;
    let capacities = (0..res).map(|_| toks.next("capacity")).collect::<Result<Vec<_>, _>>()?;
    let mut tasks = Vec::with_capacity(jobs.min(1 << 16));
    let mut precedences = Vec::new();
    let mut job_pos = Vec::new();
    for i in 0..jobs {
        let duration = toks.next("duration")?;
        job_pos.push((toks.line, toks.offset));
        let usages = (0..res).map(|_| toks.next("usage")).collect::<Result<Vec<_>, _>>()?;
        let nsucc = toks.count("successor count")?;
        for _ in 0..nsucc {
            let j = toks.count("successor id")?;
            if j == 0 || j > jobs {
                return Err(toks.err(format!("successor id {j} out of range 1..={jobs}")));
            }
            precedences.push((i, j - 1));
        }
        tasks.push(Task { duration, usages });
    }
    if let Some(i) = cycle_member(jobs, &precedences) {
        let (line, offset) = job_pos[i];
        return Err(RcpspError::Parse {
            line,
            offset,
            msg: format!("precedence cycle through job {}", i + 1),
        });
    }
    Ok(RcpspInstance {
        tasks,
        precedences,
        capacities,
        horizon: None,
    })
}

/// Writes `inst` in the Patterson format.
pub fn to_patterson(inst: &RcpspInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", inst.tasks.len(), inst.resources());
    let caps: Vec<String> = inst.capacities.iter().map(i64::to_string).collect();
    let _ = writeln!(out, "{}", caps.join(" "));
    for (i, t) in inst.tasks.iter().enumerate() {
        let succ: Vec<String> = inst
            .precedences
            .iter()
            .filter(|p| p.0 == i)
            .map(|p| (p.1 + 1).to_string())
            .collect();
        let mut fields = vec![t.duration.to_string()];
        fields.extend(t.usages.iter().map(i64::to_string));
        fields.push(succ.len().to_string());
        fields.extend(succ);
        let _ = writeln!(out, "{}", fields.join(" "));
    }
    out
}

/// Constraint counts of a built model.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ModelStats {
    pub precedences: usize,
    /// One per ordered pair of tasks, the diagonal included.
    pub reifications: usize,
    pub sums: usize,
    pub commands: usize,
}

#[derive(Clone, Debug)]
pub struct RcpspModel {
    pub problem: Problem,
    pub starts: Vec<VarId>,
    /// `overlap[i][j]` is 1 iff task `i` runs at the start of task `j`.
    pub overlap: Vec<Vec<VarId>>,
    pub stats: ModelStats,
}

/// Precedences of `inst` plus `i ≪ sink` for every task without successors.
fn closed_precedences(inst: &RcpspInstance) -> Vec<(usize, usize)> {
    let n = inst.tasks.len();
    let mut out = inst.precedences.clone();
    if n >= 2 {
        let sink = n - 1;
        for i in 0..sink {
            if !inst.precedences.iter().any(|p| p.0 == i) {
                out.push((i, sink));
            }
        }
    }
    out
}

/// Builds the decomposed model. The objective is the start of the last task.
pub fn build_model(inst: &RcpspInstance) -> Result<RcpspModel, ModelError> {
    let n = inst.tasks.len();
    let h = inst.horizon();
    let mut schema = Schema::new();
    let starts: Vec<VarId> = (0..n).map(|i| schema.push(format!("s{i}"), Kind::Interval)).collect();
    let overlap: Vec<Vec<VarId>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| schema.push(format!("b{i}_{j}"), Kind::Interval))
                .collect()
        })
        .collect();
    let mut cmds: Vec<GuardedCommand> = starts.iter().map(|&s| domain(s, 0, h)).collect();
    let mut stats = ModelStats::default();

    for (i, j) in closed_precedences(inst) {
        let d = inst.tasks[i].duration;
        cmds.extend(compile(&Constraint::leq(Term::Var(starts[i], d), starts[j]), &mut schema)?.commands);
        stats.precedences += 1;
    }

    for i in 0..n {
        let d = inst.tasks[i].duration;
        for j in 0..n {
            let b = overlap[i][j];
            if i == j {
                let v = i64::from(d > 0);
                cmds.push(domain(b, v, v));
            } else {
                cmds.push(domain(b, 0, 1));
                let phi = Constraint::and(
                    Constraint::leq(starts[i], starts[j]),
                    Constraint::lt(starts[j], Term::Var(starts[i], d)),
                );
                cmds.extend(compile_reified(b, &phi, &mut schema)?.commands);
            }
            stats.reifications += 1;
        }
    }

    for (k, &cap) in inst.capacities.iter().enumerate() {
        for j in 0..n {
            let terms: Vec<(i64, VarId)> = inst
                .tasks
                .iter()
                .zip(&overlap)
                .filter(|(t, _)| t.usages[k] > 0)
                .map(|(t, row)| (t.usages[k], row[j]))
                .collect();
            cmds.extend(compile(&Constraint::BoolSum { terms, c: cap }, &mut schema)?.commands);
            stats.sums += 1;
        }
    }

    stats.commands = cmds.len();
    let program = Program::new(schema, cmds)?;
    Ok(RcpspModel {
        problem: Problem {
            program,
            objective: starts.last().copied(),
            strategy: Strategy { vars: starts.clone() },
        },
        starts,
        overlap,
        stats,
    })
}

/// Time-indexed feasibility check of a schedule.
pub fn check_solution(inst: &RcpspInstance, starts: &[i64]) -> Result<bool, RcpspError> {
    let n = inst.tasks.len();
    if starts.len() != n {
        return Err(RcpspError::Arity {
            expected: n,
            got: starts.len(),
        });
    }
    if starts.iter().any(|&s| s < 0) {
        return Ok(false);
    }
    for &(i, j) in &inst.precedences {
        if starts[i] + inst.tasks[i].duration > starts[j] {
            return Ok(false);
        }
    }
    let end = (0..n)
        .map(|i| starts[i] + inst.tasks[i].duration)
        .max()
        .unwrap_or(0)
        .max(inst.horizon());
    for t in 0..end {
        for (k, &cap) in inst.capacities.iter().enumerate() {
            let load: i64 = (0..n)
                .filter(|&i| starts[i] <= t && t < starts[i] + inst.tasks[i].duration)
                .map(|i| inst.tasks[i].usages[k])
                .sum();
            if load > cap {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Makespan of a schedule: the latest completion time.
pub fn makespan(inst: &RcpspInstance, starts: &[i64]) -> i64 {
    starts
        .iter()
        .zip(&inst.tasks)
        .map(|(s, t)| s + t.duration)
        .max()
        .unwrap_or(0)
}

/// Parameters of the random instance generator.
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    /// Non-dummy tasks.
    pub tasks: usize,
    pub resources: usize,
    pub max_duration: i64,
    pub max_usage: i64,
    /// Probability of a precedence between two tasks `i < j`.
    pub density: f64,
    /// Capacity as a fraction of the summed usages, clamped to the largest
    /// single usage.
    pub tightness: f64,
}

/// A random instance with a dummy source and sink around `p.tasks` tasks.
pub fn generate(rng: &mut impl Rng, p: &GenParams) -> RcpspInstance {
    let n = p.tasks + 2;
    let mut tasks = vec![Task {
        duration: 0,
        usages: vec![0; p.resources],
    }];
    for _ in 0..p.tasks {
        tasks.push(Task {
            duration: rng.gen_range(1..=p.max_duration),
            usages: (0..p.resources).map(|_| rng.gen_range(0..=p.max_usage)).collect(),
        });
    }
    tasks.push(Task {
        duration: 0,
        usages: vec![0; p.resources],
    });
    let capacities = (0..p.resources)
        .map(|k| {
            let total: i64 = tasks.iter().map(|t| t.usages[k]).sum();
            let peak = tasks.iter().map(|t| t.usages[k]).max().unwrap_or(0);
            ((total as f64 * p.tightness).round() as i64).max(peak)
        })
        .collect();
    let mut precedences = Vec::new();
    for i in 1..=p.tasks {
        for j in i + 1..=p.tasks {
            if rng.gen_bool(p.density) {
                precedences.push((i, j));
            }
        }
    }
    for i in 1..=p.tasks {
        if !precedences.iter().any(|q| q.1 == i) {
            precedences.push((0, i));
        }
        if !precedences.iter().any(|q| q.0 == i) {
            precedences.push((i, n - 1));
        }
    }
    if p.tasks == 0 {
        precedences.push((0, 1));
    }
    precedences.sort_unstable();
    RcpspInstance {
        tasks,
        precedences,
        capacities,
        horizon: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::solver::{solve_dfs, Limits, SolveStatus};

    const TOY: &str = "3 1\n1\n0 0 1 2\n4 1 1 3\n0 0 0\n";

    fn optimum(inst: &RcpspInstance) -> (SolveStatus, Option<i64>) {
        let m = build_model(inst).unwrap();
        let out = solve_dfs(&m.problem, Engine::Sequential, &Limits::default());
        (out.status, out.objective)
    }

    fn with_dummies(tasks: &[(i64, i64)], precedences: &[(usize, usize)], cap: i64) -> RcpspInstance {
        let mut ts = vec![Task {
            duration: 0,
            usages: vec![0],
        }];
        ts.extend(tasks.iter().map(|&(d, r)| Task {
            duration: d,
            usages: vec![r],
        }));
        ts.push(Task {
            duration: 0,
            usages: vec![0],
        });
        RcpspInstance {
            tasks: ts,
            precedences: precedences.to_vec(),
            capacities: vec![cap],
            horizon: None,
        }
    }

    #[test]
    fn toy_parses() {
        let inst = parse_patterson(TOY).unwrap();
        assert_eq!(inst.tasks.len(), 3);
        assert_eq!(inst.precedences, vec![(0, 1), (1, 2)]);
        assert_eq!(inst.horizon(), 4);
        assert_eq!(inst.capacities, vec![1]);
        assert_eq!(parse_patterson(&to_patterson(&inst)).unwrap(), inst);
    }

    #[test]
    fn zero_resources() {
        let inst = parse_patterson("2 0\n\n0 1 2\n0 0\n").unwrap();
        assert_eq!(inst.resources(), 0);
        assert_eq!(build_model(&inst).unwrap().stats.sums, 0);
    }

    #[test]
    fn parse_errors() {
        let e = parse_patterson("5 0\n0 1 99\n").unwrap_err();
        assert!(matches!(e, RcpspError::Parse { line: 2, offset: 5, .. }), "{e}");
        assert!(matches!(
            parse_patterson("3 1\n1\n0 0 1"),
            Err(RcpspError::Parse { .. })
        ));
        assert!(matches!(
            parse_patterson("3 1\n-1\n"),
            Err(RcpspError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_patterson("2 0\n1 1 2\n1 1 1\n"),
            Err(RcpspError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_patterson("x"),
            Err(RcpspError::Parse { line: 1, offset: 1, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let inst = parse_patterson(TOY).unwrap();
        assert_eq!(RcpspInstance::parse(&inst.to_json()).unwrap(), inst);
        let cyclic = r#"{"tasks":[{"duration":1,"usages":[]},{"duration":1,"usages":[]}],
            "precedences":[[0,1],[1,0]],"capacities":[]}"#;
        assert!(matches!(RcpspInstance::from_json(cyclic), Err(RcpspError::Invalid(_))));
    }

    #[test]
    fn model_counts() {
        let inst = with_dummies(&[(2, 1), (3, 1)], &[(0, 1), (0, 2), (1, 3), (2, 3)], 1);
        let m = build_model(&inst).unwrap();
        assert_eq!(m.starts.len(), 4);
        assert_eq!(m.overlap.iter().flatten().count(), 16);
        assert_eq!(m.stats.precedences, 4);
        assert_eq!(m.stats.reifications, 16);
        assert_eq!(m.stats.sums, 4);
    }

    #[test]
    fn small_optima() {
        let seq = with_dummies(&[(2, 1), (3, 1)], &[(0, 1), (1, 2), (2, 3)], 1);
        assert_eq!(optimum(&seq), (SolveStatus::Optimal, Some(5)));
        let free = with_dummies(&[(2, 1), (4, 1), (3, 1)], &[], 3);
        assert_eq!(optimum(&free), (SolveStatus::Optimal, Some(4)));
        let single = with_dummies(&[(7, 1)], &[], 1);
        assert_eq!(optimum(&single), (SolveStatus::Optimal, Some(7)));
        let clash = with_dummies(&[(2, 1), (3, 1)], &[], 1);
        assert_eq!(optimum(&clash), (SolveStatus::Optimal, Some(5)));
    }

    #[test]
    fn solutions_check() {
        let inst = with_dummies(&[(2, 1), (3, 1)], &[(1, 2)], 1);
        assert!(check_solution(&inst, &[0, 0, 2, 5]).unwrap());
        assert!(!check_solution(&inst, &[0, 0, 0, 5]).unwrap());
        let par = with_dummies(&[(2, 1), (3, 1)], &[], 1);
        assert!(!check_solution(&par, &[0, 0, 0, 3]).unwrap());
        let empty = RcpspInstance {
            tasks: vec![],
            precedences: vec![],
            capacities: vec![],
            horizon: None,
        };
        assert!(check_solution(&empty, &[]).unwrap());
        assert!(matches!(
            check_solution(&inst, &[0]),
            Err(RcpspError::Arity { expected: 4, got: 1 })
        ));
    }

    #[test]
    fn generated_instances_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for tasks in 0..6 {
            let p = GenParams {
                tasks,
                resources: 2,
                max_duration: 4,
                max_usage: 3,
                density: 0.3,
                tightness: 0.5,
            };
            let inst = generate(&mut rng, &p);
            inst.validate().unwrap();
            assert_eq!(parse_patterson(&to_patterson(&inst)).unwrap(), inst);
        }
    }
}

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

//! Generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use pccp::lattice::{BInc, ZInc};
use pccp::propagation::{compile, compile_reified, domain, Constraint, Term};
use pccp::rcpsp::{generate, GenParams, RcpspInstance};
use pccp::{Interval, Kind, Program, Schema, Snapshot, Value, VarId, NEG_INF};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A small CSP over interval variables with known domains.
pub struct MicroCsp {
    pub program: Program,
    pub vars: Vec<VarId>,
    pub domains: Vec<(i64, i64)>,
    pub constraints: Vec<Constraint>,
}

fn random_constraint(rng: &mut ChaCha8Rng, vars: &[VarId], bools: &[VarId]) -> Constraint {
    let pick = |rng: &mut ChaCha8Rng| *vars.choose(rng).unwrap();
    let offset = |rng: &mut ChaCha8Rng| rng.gen_range(-3..=3);
    let cmp = |rng: &mut ChaCha8Rng| {
        let (x, y) = (pick(rng), pick(rng));
        match rng.gen_range(0..3) {
            0 => Constraint::leq(Term::Var(x, offset(rng)), y),
            1 => Constraint::lt(x, Term::Var(y, offset(rng))),
            _ => Constraint::leq(x, rng.gen_range(0..=8)),
        }
    };
    loop {
        return match rng.gen_range(0..9) {
            0 => {
                let k = rng.gen_range(1..=3.min(vars.len()));
                let terms = vars
                    .choose_multiple(rng, k)
                    .map(|&v| (rng.gen_range(1..=3), v))
                    .collect();
                Constraint::LinearLeq {
                    terms,
                    c: rng.gen_range(0..=15),
                }
            }
            1 | 2 => cmp(rng),
            3 => Constraint::or(cmp(rng), cmp(rng)),
            4 => Constraint::not(cmp(rng)),
            5 => Constraint::and(cmp(rng), cmp(rng)),
            6 => Constraint::iff(cmp(rng), cmp(rng)),
            7 if !bools.is_empty() => {
                let b = *bools.choose(rng).unwrap();
                Constraint::iff(Constraint::leq(1, b), cmp(rng))
            }
            8 if bools.len() >= 2 => {
                let k = rng.gen_range(2..=bools.len());
                let terms = bools
                    .choose_multiple(rng, k)
                    .map(|&v| (rng.gen_range(1..=3), v))
                    .collect();
                Constraint::BoolSum {
                    terms,
                    c: rng.gen_range(0..=4),
                }
            }
            _ => continue,
        };
    }
}

/// Up to five variables with domains inside `[0, 8]` and up to six
/// constraints.
pub fn micro_csp(rng: &mut ChaCha8Rng) -> MicroCsp {
    let n = rng.gen_range(1..=5);
    let mut schema = Schema::new();
    let vars: Vec<VarId> = (0..n).map(|i| schema.push(format!("x{i}"), Kind::Interval)).collect();
    let mut domains = Vec::new();
    let mut bools = Vec::new();
    for &v in &vars {
        if rng.gen_bool(0.3) {
            domains.push((0, 1));
            bools.push(v);
        } else {
            let lo = rng.gen_range(0..=4);
            domains.push((lo, rng.gen_range(lo..=8)));
        }
    }
    let mut commands: Vec<_> = vars.iter().zip(&domains).map(|(&v, &(l, u))| domain(v, l, u)).collect();
    let m = rng.gen_range(1..=6);
    let mut constraints = Vec::new();
    for _ in 0..m {
        let c = random_constraint(rng, &vars, &bools);
        let compiled = match &c {
            Constraint::Iff(a, b) if matches!(**a, Constraint::Leq(Term::Const(1), Term::Var(_, 0))) => {
                let Constraint::Leq(_, Term::Var(bv, _)) = **a else {
                    unreachable!()
                };
                compile_reified(bv, b, &mut schema)
            }
            _ => compile(&c, &mut schema),
        };
        commands.extend(compiled.expect("generated constraints compile").commands);
        constraints.push(c);
    }
    MicroCsp {
        program: Program::new(schema, commands).expect("valid program"),
        vars,
        domains,
        constraints,
    }
}

/// All assignments inside the domains that satisfy every constraint.
pub fn brute_force(csp: &MicroCsp) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur: Vec<i64> = csp.domains.iter().map(|d| d.0).collect();
    loop {
        let val = |v: VarId| cur[v.0];
        if csp.constraints.iter().all(|c| c.eval(&val)) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return out;
            }
            if cur[i] < csp.domains[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = csp.domains[i].0;
            i += 1;
        }
    }
}

pub fn corpus_dir() -> PathBuf {
    std::env::var_os("PCCP_PATTERSON_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/patterson"))
}

/// Every `.rcp` file of the corpus, sorted by name, with its parse result.
pub fn corpus_files() -> Vec<(String, Result<RcpspInstance, String>)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory exists")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "rcp"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let parsed = std::fs::read_to_string(&p)
                .map_err(|e| e.to_string())
                .and_then(|t| pccp::rcpsp::parse_patterson(&t).map_err(|e| e.to_string()));
            (name, parsed)
        })
        .collect()
}

pub fn corpus() -> Vec<(String, RcpspInstance)> {
    corpus_files()
        .into_iter()
        .map(|(n, r)| (n.clone(), r.unwrap_or_else(|e| panic!("{n}: {e}"))))
        .collect()
}

/// Corpus instances ordered by size, smallest first.
pub fn corpus_by_size() -> Vec<(String, RcpspInstance)> {
    let mut c = corpus();
    c.sort_by_key(|(n, i)| (i.tasks.len() * (1 + i.resources()), n.clone()));
    c
}

/// A random instance with at most `max_tasks` real tasks and a horizon of at
/// most `max_horizon`.
pub fn micro_rcpsp(rng: &mut ChaCha8Rng, max_tasks: usize, max_horizon: i64) -> RcpspInstance {
    let tasks = rng.gen_range(1..=max_tasks);
    let p = GenParams {
        tasks,
        resources: rng.gen_range(1..=2),
        max_duration: (max_horizon / tasks as i64).max(1),
        max_usage: 3,
        density: rng.gen_range(0.0..0.5),
        tightness: rng.gen_range(0.2..0.8),
    };
    let inst = generate(rng, &p);
    assert!(inst.horizon() <= max_horizon);
    inst
}

/// Minimal makespan by enumerating start times of the real tasks, with the
/// source at 0 and the sink at the latest completion. Uses its own
/// time-indexed resource profile.
pub fn brute_force_makespan(inst: &RcpspInstance) -> Option<i64> {
    let n = inst.tasks.len();
    let h = inst.horizon();
    let mut starts = vec![0i64; n];
    let mut profile = vec![vec![0i64; h.max(1) as usize]; inst.resources()];
    let mut best = None;
    enumerate(inst, 1, h, &mut starts, &mut profile, &mut best);
    best
}

fn enumerate(
    inst: &RcpspInstance,
    i: usize,
    h: i64,
    starts: &mut Vec<i64>,
    profile: &mut [Vec<i64>],
    best: &mut Option<i64>,
) {
    let n = inst.tasks.len();
    if i + 1 >= n {
        let end = (0..n.saturating_sub(1))
            .map(|j| starts[j] + inst.tasks[j].duration)
            .max()
            .unwrap_or(0);
        if n >= 1 {
            starts[n - 1] = end;
        }
        let ok = inst
            .precedences
            .iter()
            .all(|&(a, b)| starts[a] + inst.tasks[a].duration <= starts[b]);
        if ok && best.is_none_or(|b| end < b) {
            *best = Some(end);
        }
        return;
    }
    let t = &inst.tasks[i];
    for s in 0..=(h - t.duration) {
        let range = s as usize..(s + t.duration) as usize;
        let fits = inst
            .capacities
            .iter()
            .enumerate()
            .all(|(k, &c)| profile[k][range.clone()].iter().all(|&l| l + t.usages[k] <= c));
        if !fits {
            continue;
        }
        for (k, p) in profile.iter_mut().enumerate() {
            p[range.clone()].iter_mut().for_each(|l| *l += t.usages[k]);
        }
        starts[i] = s;
        enumerate(inst, i + 1, h, starts, profile, best);
        for (k, p) in profile.iter_mut().enumerate() {
            p[range.clone()].iter_mut().for_each(|l| *l -= t.usages[k]);
        }
    }
}

/// A random element of `kind`, biased towards small integers.
pub fn random_value(r: &mut ChaCha8Rng, kind: Kind) -> Value {
    match kind {
        Kind::Interval => {
            let l = if r.gen_bool(0.1) { NEG_INF } else { r.gen_range(-2..=9) };
            let u = if r.gen_bool(0.1) {
                i64::MAX
            } else {
                r.gen_range(-1..=10)
            };
            Interval::new(l, u).into()
        }
        Kind::ZInc => Value::ZInc(ZInc(if r.gen_bool(0.2) { NEG_INF } else { r.gen_range(-2..=20) })),
        Kind::BInc => Value::BInc(BInc::from_bool(r.gen_bool(0.5))),
        k => Value::bot(k),
    }
}

pub fn random_store(r: &mut ChaCha8Rng, csp: &MicroCsp, base: Option<&Snapshot>) -> Snapshot {
    let schema = csp.program.schema.clone();
    let mut s = base.cloned().unwrap_or_else(|| Snapshot::bottom(schema.clone()));
    for (v, info) in schema.vars() {
        if r.gen_bool(0.6) {
            s.join_value(v, random_value(r, info.kind)).unwrap();
        }
    }
    s
}

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

//! Fixed-point engines over a set of guarded commands.
//!
//! All engines update the given [`Store`] in place and stop either at a fixed
//! point or as soon as the store is failed. There is no propagation queue:
//! every round re-executes every command.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Barrier;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Snapshot, Store, StoreView, Value, VarId};
use crate::process::{GuardedCommand, Program};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Fixpoint,
    Failed,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EngineResult {
    pub status: Status,
    /// Number of rounds, including the final one that observed no change.
    pub iterations: u64,
    /// Number of command executions whose guards held.
    pub applications: u64,
}

impl EngineResult {
    pub fn is_failed(&self) -> bool {
        self.status == Status::Failed
    }
}

fn status_of(store: &Store) -> Status {
    if store.is_failed() {
        Status::Failed
    } else {
        Status::Fixpoint
    }
}

/// Sweeps the commands in index order until a sweep changes nothing.
pub fn run_sequential(cmds: &[GuardedCommand], store: &Store) -> EngineResult {
    let mut iterations = 0;
    let mut applications = 0;
    loop {
        iterations += 1;
        let mut changed = false;
        for c in cmds {
            if let Some(ch) = c.apply(store) {
                applications += 1;
                changed |= ch;
            }
        }
        if store.failure_hint() || !changed {
            return EngineResult {
                status: status_of(store),
                iterations,
                applications,
            };
        }
    }
}

/// Executes one command at a time, in rounds that visit every command once in
/// an order drawn from `seed`.
pub fn run_fair(cmds: &[GuardedCommand], store: &Store, seed: u64) -> EngineResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..cmds.len()).collect();
    let mut iterations = 0;
    let mut applications = 0;
    loop {
        iterations += 1;
        order.shuffle(&mut rng);
        let mut changed = false;
        for &i in &order {
            if let Some(ch) = cmds[i].apply(store) {
                applications += 1;
                changed |= ch;
            }
        }
        if store.failure_hint() || !changed {
            return EngineResult {
                status: status_of(store),
                iterations,
                applications,
            };
        }
    }
}

/// Runs the commands on `workers` threads sharing the store.
///
/// Thread `tid` executes commands `tid, tid + workers, ...` in every round.
/// Rounds are separated by a barrier and the fixed point is detected with a
/// ring of three flags: round `i` runs while flag `(i-1) % 3` is set, sets
/// flag `i % 3` on change and clears flag `(i+1) % 3` for the next round.
/// A second ring with the same discipline stops all threads in the same round
/// once the store is failed.
pub fn run_parallel(cmds: &[GuardedCommand], store: &Store, workers: usize) -> EngineResult {
    assert!(workers >= 1, "at least one worker is required");
    let has_changed = [AtomicBool::new(true), AtomicBool::new(false), AtomicBool::new(false)];
    let failed = [AtomicBool::new(false), AtomicBool::new(false), AtomicBool::new(false)];
    let barrier = Barrier::new(workers);
    let applications = AtomicU64::new(0);
    let iterations = AtomicU64::new(0);

    let work = |tid: usize| {
        let mut applied = 0u64;
        let mut i = 1usize;
        while has_changed[(i - 1) % 3].load(Ordering::Relaxed) && !failed[(i - 1) % 3].load(Ordering::Relaxed) {
            let mut changed = false;
            let mut t = tid;
            while t < cmds.len() {
                if let Some(ch) = cmds[t].apply(store) {
                    applied += 1;
                    changed |= ch;
                }
                t += workers;
            }
            if changed {
                has_changed[i % 3].store(true, Ordering::Relaxed);
            }
            has_changed[(i + 1) % 3].store(false, Ordering::Relaxed);
            if store.failure_hint() {
                failed[i % 3].store(true, Ordering::Relaxed);
            }
            failed[(i + 1) % 3].store(false, Ordering::Relaxed);
            barrier.wait();
            i += 1;
        }
        applications.fetch_add(applied, Ordering::Relaxed);
        if tid == 0 {
            iterations.store(i as u64 - 1, Ordering::Relaxed);
        }
    };

    if workers == 1 {
        work(0);
    } else {
        std::thread::scope(|scope| {
            for tid in 1..workers {
                let work = &work;
                scope.spawn(move || work(tid));
            }
            work(0);
        });
    }

    EngineResult {
        status: status_of(store),
        iterations: iterations.into_inner(),
        applications: applications.into_inner(),
    }
}

/// Engine selection for callers that are generic over the strategy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Engine {
    Sequential,
    Fair { seed: u64 },
    Parallel { workers: usize },
}

impl Engine {
    pub fn run(self, cmds: &[GuardedCommand], store: &Store) -> EngineResult {
        match self {
            Engine::Sequential => run_sequential(cmds, store),
            Engine::Fair { seed } => run_fair(cmds, store, seed),
            Engine::Parallel { workers } => run_parallel(cmds, store, workers),
        }
    }
}

/// A cell on which two engines disagree.
#[derive(Clone, PartialEq, Debug)]
pub struct Mismatch {
    pub engine: Engine,
    pub var: VarId,
    pub name: String,
    pub expected: Value,
    pub found: Value,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cell {} ({}) differs under {:?}: sequential {:?}, got {:?}",
            self.var.0, self.name, self.engine, self.expected, self.found
        )
    }
}

/// Propagates the root of `program` with the sequential engine, the fair
/// engine for every seed and the parallel engine for every worker count, and
/// reports the first cell where a store differs from the sequential one.
pub fn verify_confluence(program: &Program, seeds: &[u64], workers: &[usize]) -> Result<Snapshot, Mismatch> {
    let run = |e: Engine| {
        let s = program.store();
        e.run(&program.commands, &s);
        s.snapshot().canonical()
    };
    let reference = run(Engine::Sequential);
    let engines = seeds
        .iter()
        .map(|&seed| Engine::Fair { seed })
        .chain(workers.iter().map(|&workers| Engine::Parallel { workers }));
    for engine in engines {
        let got = run(engine);
        if let Some(var) = reference.first_difference(&got) {
            return Err(Mismatch {
                engine,
                var,
                name: program.schema.name(var).to_string(),
                expected: reference.value(var),
                found: got.value(var),
            });
        }
    }
    Ok(reference)
}

/// One synchronous application of all commands: every command reads the
/// store as it was at the start of the round. Returns whether it changed.
pub fn jacobi_round(cmds: &[GuardedCommand], store: &Store) -> bool {
    let start = store.snapshot();
    let updates: Vec<_> = cmds
        .iter()
        .filter_map(|c| c.evaluate(&start).map(|v| (c.target, v)))
        .collect();
    let mut changed = false;
    for (t, v) in updates {
        changed |= store.join(t, v).expect("validated command");
    }
    changed
}

/// `run_sequential` that records the store after every command execution.
pub fn trace_sequential(cmds: &[GuardedCommand], store: &Store) -> (EngineResult, Vec<Snapshot>) {
    let mut trace = vec![store.snapshot()];
    let mut iterations = 0;
    let mut applications = 0;
    loop {
        iterations += 1;
        let mut changed = false;
        for c in cmds {
            if let Some(ch) = c.apply(store) {
                applications += 1;
                changed |= ch;
                if ch {
                    trace.push(store.snapshot());
                }
            }
        }
        if store.failure_hint() || !changed {
            let r = EngineResult {
                status: status_of(store),
                iterations,
                applications,
            };
            return (r, trace);
        }
    }
}

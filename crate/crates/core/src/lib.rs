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

//! Parallel concurrent constraint programming on lattices.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: primitive lattices, intervals and the atomic shared store.
//! * [`expr`] and [`process`]: monotone expressions, processes and guarded
//!   commands.
//! * [`propagation`]: compilation of arithmetic constraints into guarded
//!   commands.
//! * [`engine`]: sequential, fair and parallel fixed-point engines.
//! * [`lsmachine`]: an exhaustive explorer of the load/store execution model.
//! * [`solver`]: branch-and-bound search with parallel decomposition.
//! * [`rcpsp`]: the resource-constrained project scheduling front end.

pub mod engine;
pub mod error;
pub mod expr;
pub mod lattice;
pub mod lsmachine;
pub mod process;
pub mod propagation;
pub mod rcpsp;
pub mod solver;

pub use error::ModelError;
pub use lattice::{Interval, Kind, Lattice, Schema, Snapshot, Store, StoreView, Value, VarId, NEG_INF, POS_INF};
pub use process::{GuardedCommand, Process, Program};

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

use thiserror::Error;

use crate::lattice::SchemaError;

/// Errors raised while building, lowering or compiling a model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("expression mixes increasing and decreasing atoms: {0}")]
    NonMonotone(String),
    #[error("unbound variable `{0}`")]
    UnboundName(String),
    #[error("variable `{0}` is declared twice in the same scope")]
    DuplicateName(String),
    #[error("local declaration `{0}` must be erased before this operation")]
    UnexpectedLocal(String),
    #[error("unsupported constraint: {0}")]
    Unsupported(String),
}

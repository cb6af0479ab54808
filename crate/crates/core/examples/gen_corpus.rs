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

//! Writes the synthetic Patterson-format corpus used by the tests.
//!
//! Usage: `cargo run --example gen_corpus [-- <dir>]`

use std::path::PathBuf;

use pccp::rcpsp::{generate, to_patterson, GenParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const COUNT: usize = 110;

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/patterson"));
    std::fs::create_dir_all(&dir)?;
    for k in 0..COUNT {
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        let p = GenParams {
            tasks: 5 + (k * 7) % 18,
            resources: 1 + k % 3,
            max_duration: 10,
            max_usage: 6,
            density: 0.15,
            tightness: 0.35,
        };
        let inst = generate(&mut rng, &p);
        std::fs::write(dir.join(format!("syn{:03}.rcp", k + 1)), to_patterson(&inst))?;
    }
    println!("wrote {COUNT} instances to {}", dir.display());
    Ok(())
}

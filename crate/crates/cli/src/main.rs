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

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use pccp::engine::{verify_confluence, Engine};
use pccp::lsmachine::{builtin_programs, check_theorems, shared_writer, ExploreConfig, Mutation};
use pccp::rcpsp::{build_model, check_solution, RcpspInstance, RcpspModel};
use pccp::solver::{solve_dfs, solve_parallel, Limits, Outcome, SolveStatus};
use pccp::StoreView;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pccp", version, about = "Parallel lattice-based constraint solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an RCPSP instance (Patterson text or JSON).
    Solve(SolveArgs),
    /// Check that all propagation engines reach the same root fixed point.
    Verify { file: PathBuf },
    /// Run the load/store machine checks on the built-in programs.
    Lsdemo,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Seq,
    Fair,
    Par,
}

#[derive(clap::Args)]
struct SolveArgs {
    file: PathBuf,
    /// `seq` and `fair` split the search over the workers; `par` runs one
    /// search with parallel propagation.
    #[arg(long, value_enum, default_value = "seq")]
    engine: EngineArg,
    #[arg(long, env = "PCCP_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Seconds.
    #[arg(long, default_value_t = 300.0, value_parser = positive_seconds)]
    timeout: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Subproblems per worker.
    #[arg(long = "eps-factor", default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    eps_factor: u32,
    #[arg(long)]
    json: bool,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

#[derive(Serialize)]
struct Report {
    status: &'static str,
    objective: Option<i64>,
    nodes: u64,
    time_ms: u64,
    nodes_per_sec: u64,
}

fn load(path: &Path) -> Result<(RcpspInstance, RcpspModel), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let inst = RcpspInstance::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let model = build_model(&inst).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((inst, model))
}

fn solve(args: &SolveArgs) -> Result<ExitCode, String> {
    let (inst, model) = load(&args.file)?;
    let workers = args.workers as usize;
    let limits = Limits {
        timeout: Some(Duration::from_secs_f64(args.timeout)),
        ..Default::default()
    };
    let p = &model.problem;
    let run = |engine: Engine| -> Outcome {
        if workers == 1 {
            solve_dfs(p, engine, &limits)
        } else {
            solve_parallel(p, engine, workers, args.eps_factor as usize, &limits)
        }
    };
    let out = match args.engine {
        EngineArg::Seq => run(Engine::Sequential),
        EngineArg::Fair => run(Engine::Fair { seed: args.seed }),
        EngineArg::Par => solve_dfs(p, Engine::Parallel { workers }, &limits),
    };

    if let Some(sol) = &out.solution {
        let starts: Vec<i64> = model.starts.iter().map(|&s| sol.lb(s)).collect();
        if !check_solution(&inst, &starts).map_err(|e| e.to_string())? {
            return Err(format!("internal error: schedule {starts:?} violates the instance"));
        }
    }

    let secs = out.stats.elapsed.as_secs_f64();
    let report = Report {
        status: out.status.as_str(),
        objective: out.objective,
        nodes: out.stats.nodes,
        time_ms: out.stats.elapsed.as_millis() as u64,
        nodes_per_sec: if secs > 0.0 {
            (out.stats.nodes as f64 / secs) as u64
        } else {
            0
        },
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("report serialises"));
    } else {
        println!("status: {}", report.status);
        match report.objective {
            Some(v) => println!("objective: {v}"),
            None => println!("objective: none"),
        }
        println!("nodes: {}", report.nodes);
        println!("time_ms: {}", report.time_ms);
        println!("nodes_per_sec: {}", report.nodes_per_sec);
    }
    Ok(if out.status == SolveStatus::Unknown {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn verify(file: &Path) -> Result<ExitCode, String> {
    let (_, model) = load(file)?;
    let seeds: Vec<u64> = (1..=10).collect();
    match verify_confluence(&model.problem.program, &seeds, &[1, 2, 4, 8]) {
        Ok(_) => {
            println!("PASS");
            Ok(ExitCode::SUCCESS)
        }
        Err(m) => {
            println!("FAIL: {m}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn lsdemo() -> Result<ExitCode, String> {
    let mut ok = true;
    for b in builtin_programs() {
        let report = check_theorems(&b.commands, &b.s0, ExploreConfig::default()).map_err(|e| e.to_string())?;
        println!("== {} ==", b.name);
        print!("{report}");
        ok &= report.passed();
    }
    let b = shared_writer();
    let cfg = ExploreConfig {
        mutation: Mutation::LostUpdate,
        ..Default::default()
    };
    let report = check_theorems(&b.commands, &b.s0, cfg).map_err(|e| e.to_string())?;
    println!("== {} with lost-update mutation (expected to fail) ==", b.name);
    print!("{report}");
    ok &= !report.passed();
    println!("{}", if ok { "ALL AS EXPECTED" } else { "UNEXPECTED RESULT" });
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::FAILURE;
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => solve(args),
        Command::Verify { file } => verify(file),
        Command::Lsdemo => lsdemo(),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}

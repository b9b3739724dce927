//! `cdbs`: compile measurement patterns to linear optics, sample and verify
//! the results, and analyze circuit structure.
//!
//! Exit codes: 0 success, 2 input error, 3 resource limit, 4 verification
//! failure.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cdbs_core::fock::{SimConfig, DEFAULT_BASIS_CAP};
use cdbs_core::klm::{Pipeline, VERIFY_TOLERANCE};
use cdbs_core::routing::Backend;
use cdbs_core::shallow::ShallowConfig;
use cdbs_core::Execution;

use commands::{AnalyzeArgs, CompileArgs, SampleArgs, VerifyArgs, EXIT_INPUT};
use report::Format;

#[derive(Parser)]
#[command(name = "cdbs", version, about = "Constant-depth boson sampling compiler and simulators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Cap on enumerated Fock-basis states and shallow outcome tables.
    #[arg(long, global = true, default_value_t = DEFAULT_BASIS_CAP, value_parser = parse_cap)]
    cap: u128,

    /// Run chunked workloads on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Naive8,
    Depth4,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Shallow,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a graph program into an optical circuit and metadata sidecar.
    Compile {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = PipelineArg::Depth4)]
        pipeline: PipelineArg,
        /// Circuit output path; defaults to `<graph stem>.<pipeline>.circuit`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Metadata output path; defaults to the circuit path with `.meta`.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Sample the output register of a circuit.
    Sample {
        circuit: PathBuf,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip depth-based routing.
        #[arg(long, value_enum)]
        force_backend: Option<BackendArg>,
    },
    /// Check both pipelines, or a given artifact, against the qubit oracle.
    Verify {
        graph: PathBuf,
        /// Compiled circuit to check instead of compiling afresh.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Metadata of `--circuit`; defaults to its `.meta` sibling.
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Largest total-variation distance or leakage that still passes.
        #[arg(long, default_value_t = VERIFY_TOLERANCE, value_parser = parse_tolerance)]
        tolerance: f64,
    },
    /// Report depth, sparsity and occupancy figures of a circuit.
    Analyze { circuit: PathBuf },
}

fn parse_cap(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("cap must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
        Ok(_) => Err("tolerance must be a finite non-negative number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let execution = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let sim = SimConfig {
        basis_cap: cli.cap,
        execution,
    };
    let shallow = ShallowConfig {
        execution,
        enumeration_cap: cli.cap,
        ..ShallowConfig::default()
    };
    let result = match &cli.command {
        Command::Compile {
            graph,
            pipeline,
            out,
            meta,
        } => commands::compile(
            &CompileArgs {
                graph: graph.clone(),
                pipeline: match pipeline {
                    PipelineArg::Naive8 => Pipeline::Naive8,
                    PipelineArg::Depth4 => Pipeline::Depth4,
                },
                out: out.clone(),
                meta: meta.clone(),
            },
            cli.format,
        ),
        Command::Sample {
            circuit,
            shots,
            seed,
            force_backend,
        } => commands::sample(
            &SampleArgs {
                circuit: circuit.clone(),
                shots: *shots,
                seed: *seed,
                force: force_backend.map(|b| match b {
                    BackendArg::Shallow => Backend::Shallow,
                    BackendArg::Exact => Backend::Exact,
                }),
            },
            &sim,
            &shallow,
            cli.format,
        ),
        Command::Verify {
            graph,
            circuit,
            meta,
            tolerance,
        } => commands::verify(
            &VerifyArgs {
                graph: graph.clone(),
                circuit: circuit.clone(),
                meta: meta.clone(),
                tolerance: *tolerance,
            },
            &sim,
            cli.format,
        ),
        Command::Analyze { circuit } => commands::analyze(
            &AnalyzeArgs {
                circuit: circuit.clone(),
            },
            &sim,
            cli.format,
        ),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            debug_assert!(code >= EXIT_INPUT);
            ExitCode::from(code)
        }
    }
}

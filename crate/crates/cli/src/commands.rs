use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use cdbs_core::circuit::{self, critical_depth, depth, interferometer, layer_gate_counts, sparsity, OpticalCircuit};
use cdbs_core::fock::{occupancy_support_with, SimConfig};
use cdbs_core::klm::{
    self, parse_metadata, program_digest, serialize_metadata, ArtifactMetadata, Pipeline, VerifyReport,
};
use cdbs_core::qubit::{parse_program, GraphProgram};
use cdbs_core::routing::{route, sample_routed, Backend};
use cdbs_core::shallow::ShallowConfig;
use cdbs_core::Error;

use crate::report::{Format, Report, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
    /// A file that failed to parse, with the core error carrying the line.
    File { path: PathBuf, source: Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) | CliError::File { source: e, .. } => core_exit_code(e),
            CliError::Io { .. } => EXIT_INPUT,
        }
    }
}

pub fn core_exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::Occupancy(_) => EXIT_VERIFY,
        _ => EXIT_INPUT,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::File { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Rendered report plus the exit code it implies.
pub struct Output {
    pub text: String,
    pub code: u8,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_file<T>(path: &Path, parse: impl Fn(&str) -> cdbs_core::Result<T>) -> CliResult<T> {
    parse(&read(path)?).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_program(path: &Path) -> CliResult<GraphProgram> {
    let g = parse_file(path, parse_program)?;
    g.validate().map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(g)
}

pub fn load_circuit(path: &Path) -> CliResult<OpticalCircuit> {
    parse_file(path, circuit::parse)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn list(items: impl IntoIterator<Item = impl ToString>) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(",")
    }
}

pub struct CompileArgs {
    pub graph: PathBuf,
    pub pipeline: Pipeline,
    pub out: Option<PathBuf>,
    pub meta: Option<PathBuf>,
}

pub fn compile(args: &CompileArgs, format: Format) -> CliResult<Output> {
    let g = load_program(&args.graph)?;
    let art = klm::compile(&g, args.pipeline)?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| sibling(&args.graph, &format!("{}.circuit", args.pipeline)));
    let meta = args
        .meta
        .clone()
        .unwrap_or_else(|| sibling(&out, "meta"));
    write(&out, &circuit::serialize(&art.circuit))?;
    write(&meta, &serialize_metadata(&ArtifactMetadata::of(&art)))?;

    let mut r = Report::new("compile");
    r.section("compile")
        .field("pipeline", args.pipeline.to_string())
        .field("depth", art.depth)
        .field("modes", art.circuit.modes)
        .field("photons", art.photons())
        .field("cz_blocks", art.cz_blocks)
        .field("teleports", art.teleports)
        .field("postselected_modes", art.postselection().len())
        .field("output_qubits", list(&art.output_qubits))
        .field("circuit", out.display().to_string())
        .field("metadata", meta.display().to_string());
    Ok(Output {
        text: r.render(format),
        code: EXIT_OK,
    })
}

pub struct SampleArgs {
    pub circuit: PathBuf,
    pub shots: usize,
    pub seed: u64,
    pub force: Option<Backend>,
}

pub fn sample(args: &SampleArgs, sim: &SimConfig, shallow: &ShallowConfig, format: Format) -> CliResult<Output> {
    let c = load_circuit(&args.circuit)?;
    let route = route(&c, args.force);
    eprintln!("routing: {} backend ({})", route.backend, route.reason);
    let s = sample_routed(&c, args.shots, args.seed, route, sim, shallow)?;

    let mut r = Report::new("sample");
    r.section("sample")
        .field("shots", args.shots)
        .field("seed", args.seed)
        .field("backend", s.route.backend.to_string())
        .field("route", s.route.reason.clone())
        .field("depth", s.route.depth)
        .field("output_modes", list(&c.output_modes));
    if !c.postselection.is_empty() {
        if let Some(p) = s.success_probability {
            r.field("success_probability", p);
        }
        if s.route.backend == Backend::Shallow {
            r.field("accepted", s.outcomes.len())
                .field("acceptance_rate", s.acceptance_rate());
        }
    }
    r.section("samples");
    for o in &s.outcomes {
        r.row(o.occupations().iter().map(|&n| Value::from(n)).collect());
    }
    Ok(Output {
        text: r.render(format),
        code: EXIT_OK,
    })
}

pub struct VerifyArgs {
    pub graph: PathBuf,
    pub circuit: Option<PathBuf>,
    pub meta: Option<PathBuf>,
    pub tolerance: f64,
}

enum Status {
    Pass,
    Fail,
    Skip,
}

fn judge(report: &VerifyReport) -> Status {
    let mut skipped = false;
    for o in &report.outcomes {
        match &o.result {
            Ok(_) => {}
            Err(Error::ResourceLimit { .. }) => skipped = true,
            Err(_) => return Status::Fail,
        }
    }
    if report.max_tvd() > report.tolerance || report.max_leakage() > report.tolerance {
        Status::Fail
    } else if skipped {
        Status::Skip
    } else {
        Status::Pass
    }
}

pub fn verify(args: &VerifyArgs, sim: &SimConfig, format: Format) -> CliResult<Output> {
    let g = load_program(&args.graph)?;
    let mut notes = Vec::new();
    let mut report = match (&args.circuit, &args.meta) {
        (None, None) => klm::verify_program(&g, sim),
        (Some(cpath), meta) => {
            let c = load_circuit(cpath)?;
            let mpath = meta.clone().unwrap_or_else(|| sibling(cpath, "meta"));
            let m = parse_file(&mpath, parse_metadata)?;
            if m.source_digest != program_digest(&g) {
                notes.push("metadata source digest does not match the program".to_string());
            }
            let art = m.attach(c).map_err(|source| CliError::File {
                path: cpath.clone(),
                source,
            })?;
            klm::verify_artifact(&g, &art, sim)
        }
        (None, Some(_)) => {
            return Err(CliError::Core(Error::InvalidProgram(
                "--meta needs --circuit".into(),
            )))
        }
    };
    report.tolerance = args.tolerance;
    let mut status = judge(&report);
    if !notes.is_empty() {
        status = Status::Fail;
    }

    let mut r = Report::new("verify");
    r.section("verify")
        .field(
            "status",
            match status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            },
        )
        .field("tolerance", report.tolerance)
        .field("max_tvd", report.max_tvd())
        .field("max_leakage", report.max_leakage());
    for n in &notes {
        r.field("note", n.as_str());
    }
    r.section("backends");
    for o in &report.outcomes {
        let mut row = vec![Value::from(o.name.as_str())];
        match &o.result {
            Ok(res) => row.extend([
                Value::from("ok"),
                Value::from(res.distribution.success_probability()),
                Value::from(res.leakage),
            ]),
            Err(e @ Error::ResourceLimit { .. }) => row.extend([Value::from("skipped"), Value::from(e.to_string())]),
            Err(e) => row.extend([Value::from("error"), Value::from(e.to_string())]),
        }
        r.row(row);
    }
    r.section("distances");
    for (a, b, d) in report.pairwise_tvd() {
        r.row(vec![Value::from(a), Value::from(b), Value::from(d)]);
    }
    if matches!(status, Status::Fail) {
        outcome_diff(&mut r, &report);
    }
    Ok(Output {
        text: r.render(format),
        code: match status {
            Status::Pass => EXIT_OK,
            Status::Fail => EXIT_VERIFY,
            Status::Skip => EXIT_RESOURCE,
        },
    })
}

/// Per-outcome probabilities of each backend next to the oracle, for outcomes
/// where some backend is off by more than the tolerance.
fn outcome_diff(r: &mut Report, report: &VerifyReport) {
    let ok: Vec<_> = report
        .outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok().map(|res| (o.name.as_str(), &res.distribution)))
        .collect();
    let Some(&(_, oracle)) = ok.first() else { return };
    r.section("outcomes");
    for (bits, p) in oracle.iter() {
        let others: Vec<f64> = ok[1..].iter().map(|(_, d)| d.probability(&bits)).collect();
        if others.iter().all(|q| (q - p).abs() <= report.tolerance) {
            continue;
        }
        let label: String = bits.iter().map(|b| b.to_string()).collect();
        let mut row = vec![Value::from(label), Value::from(p)];
        for ((name, _), q) in ok[1..].iter().zip(others) {
            row.extend([Value::from(*name), Value::from(q), Value::from(q - p)]);
        }
        r.row(row);
    }
}

pub struct AnalyzeArgs {
    pub circuit: PathBuf,
}

pub fn analyze(args: &AnalyzeArgs, sim: &SimConfig, format: Format) -> CliResult<Output> {
    let c = load_circuit(&args.circuit)?;
    circuit::validate(&c).into_result()?;
    let d = depth(&c);
    let s = sparsity(&interferometer(&c), circuit::DEFAULT_SPARSITY_THRESHOLD);
    let bound = 1u128 << d.min(127);
    let mut r = Report::new("analyze");
    r.section("analyze")
        .field("modes", c.modes)
        .field("photons", c.photons())
        .field("depth", d)
        .field("critical_depth", critical_depth(&c))
        .field("layer_gates", list(layer_gate_counts(&c)))
        .field("sparsity", s)
        .field("reach_bound", bound)
        .field("sparsity_within_bound", (s as u128) <= bound)
        .field("occupancy_bound", bound);
    match occupancy_support_with(&c, c.layers.len(), sim.basis_cap) {
        Ok(n) => r.field("max_occupancy", n),
        Err(e @ Error::ResourceLimit { .. }) => r.field("max_occupancy", format!("skipped ({e})")),
        Err(e) => return Err(e.into()),
    };
    Ok(Output {
        text: r.render(format),
        code: EXIT_OK,
    })
}

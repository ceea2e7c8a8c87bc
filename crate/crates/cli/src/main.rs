use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use taco_core::arch::{plan_layout, schedule, CostModel};
use taco_core::decompose::decompose_to_cx_1q;
use taco_core::ir::generators::GeneratorSpec;
use taco_core::ir::{emit_qasm, gate_counts, parse_angle_expr, parse_qasm_with_tol, Circuit, GateKind, DEFAULT_ANGLE_TOL};
use taco_core::pauli::{Pauli, PauliFrame};
use taco_core::pbc::{pbc_parallelism, to_pbc};
use taco_core::pipeline::{run_pipeline, to_stable_json, PipelineConfig, PipelineError};
use taco_core::reduce::{reduce_circuit, rotation_locality};
use taco_core::synth::{lower_rotations, synthesize_circuit, Backend, SearchConfig, Sidecar, Synthesizer};
use taco_core::transform::{rz_count_with_tol, transform_with_tol};
use taco_core::verify::{equiv_mod_frame, phase_distance, unitary_of_unmeasured};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BACKEND: u8 = 3;
const EXIT_VERIFY: u8 = 4;

/// Clifford-reduction transpiler and surface-code cost estimator.
#[derive(Parser)]
#[command(name = "taco", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: decompose, transform, synthesize, reduce, schedule and
    /// compare with the Pauli-based baseline.
    Run(RunArgs),
    /// Gate counts as JSON.
    Stats(InputArgs),
    /// Lower multi-qubit gates to CX plus single-qubit gates.
    Decompose(OutputArgs),
    /// Decompose, then rewrite single-qubit runs with the fewest Z rotations.
    Transform(TransformArgs),
    /// Synthesize one Z rotation and print its normal-form string.
    Synth(SynthCmd),
    /// Clifford-reduce a circuit (synthesizing it first if needed).
    Reduce(ReduceArgs),
    /// Schedule a reduced circuit on the memory/compute-block layout.
    Schedule(ScheduleArgs),
    /// Convert a Clifford+T circuit to Pauli-based form.
    Pbc(PbcArgs),
    /// Compare two circuits by dense simulation.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// OpenQASM 2.0 input file.
    input: Option<PathBuf>,
    /// Built-in circuit: qft:N, qpe:N:seed, ising:N:steps or wstate:N.
    #[arg(long = "gen", conflicts_with = "input")]
    generator: Option<String>,
    /// Tolerance for snapping float angles to multiples of π/2^k.
    #[arg(long)]
    angle_tol: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Write QASM here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    out: OutputArgs,
    /// Print the distinct non-trivial Z-rotation angles (radians, one per
    /// line) that synthesis would need, instead of the circuit.
    #[arg(long)]
    list_angles: bool,
}

#[derive(Args, Clone)]
struct SynthArgs {
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    backend: Option<Backend>,
    /// Pre-synthesized sequences (`angle epsilon string` per line).
    #[arg(long, env = "TACO_SYNTH_FILE")]
    synth_file: Option<PathBuf>,
    /// Largest T-count the search backend tries.
    #[arg(long)]
    max_tcount: Option<usize>,
}

#[derive(Args)]
struct SynthCmd {
    /// Angle expression, e.g. `pi/16` or `0.3`.
    angle: String,
    #[command(flatten)]
    synth: SynthArgs,
    /// Print a JSON object with the word, T-count and distance.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    synth: SynthArgs,
    /// TOML file with defaults for any of these options.
    #[arg(long)]
    config: Option<PathBuf>,
    /// TOML cost model (`r_pi4`, `s`, `cx`, `h`, `h_range`).
    #[arg(long)]
    cost_model: Option<PathBuf>,
    #[arg(long)]
    compute_blocks: Option<usize>,
    /// Check the output against the input by dense simulation (≤ 10 qubits).
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    emit_reduced: Option<PathBuf>,
    #[arg(long)]
    emit_pbc: Option<PathBuf>,
    #[arg(long)]
    emit_schedule: Option<PathBuf>,
    /// Plain-text Gantt dump of the schedule.
    #[arg(long)]
    emit_gantt: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    out: OutputArgs,
    #[command(flatten)]
    synth: SynthArgs,
    /// Write reduction statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    cost_model: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    compute_blocks: usize,
    #[arg(long)]
    gantt: bool,
}

#[derive(Args)]
struct PbcArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Print layer statistics instead of the program.
    #[arg(long)]
    parallelism: bool,
}

#[derive(Args)]
struct VerifyArgs {
    a: PathBuf,
    b: PathBuf,
    /// Pauli frame applied after `b`, one letter per qubit (qubit 0 first).
    #[arg(long)]
    frame: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

/// Options read from `--config`; command-line flags take precedence.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    epsilon: Option<f64>,
    backend: Option<Backend>,
    synth_file: Option<PathBuf>,
    max_tcount: Option<usize>,
    angle_tol: Option<f64>,
    compute_blocks: Option<usize>,
    cost_model: Option<CostModel>,
}

struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: EXIT_FAILURE, err: e.into() }
    }
}

fn fail<E: Into<anyhow::Error>>(code: u8) -> impl FnOnce(E) -> Failure {
    move |e| Failure { code, err: e.into() }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::from)
}

fn write_out(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_circuit(args: &InputArgs) -> Res<Circuit> {
    let tol = args.angle_tol.unwrap_or(DEFAULT_ANGLE_TOL);
    match (&args.input, &args.generator) {
        (Some(path), None) => {
            let text = read(path)?;
            let mut c = parse_qasm_with_tol(&text, tol)
                .with_context(|| format!("parsing {}", path.display()))
                .map_err(fail(EXIT_PARSE))?;
            if c.name.is_none() {
                c.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            }
            Ok(c)
        }
        (None, Some(spec)) => Ok(GeneratorSpec::parse(spec).map_err(fail(EXIT_PARSE))?.build()),
        _ => Err(Failure { code: EXIT_PARSE, err: anyhow!("give an input file or --gen") }),
    }
}

fn load_cost_model(path: Option<&Path>) -> Res<Option<CostModel>> {
    path.map(|p| CostModel::from_toml(&read(p)?).map_err(fail(EXIT_PARSE))).transpose()
}

fn synthesizer(args: &SynthArgs, file: &FileConfig, angle_tol: f64) -> Res<Synthesizer> {
    let eps = args.epsilon.or(file.epsilon).unwrap_or(1e-3);
    let backend = args.backend.or(file.backend).unwrap_or(Backend::Search);
    let mut search = SearchConfig::default();
    if let Some(m) = args.max_tcount.or(file.max_tcount) {
        search.max_tcount = m;
    }
    let mut s = Synthesizer::new(backend, eps).with_search(search);
    s.angle_tol = angle_tol;
    if let Some(path) = args.synth_file.as_ref().or(file.synth_file.as_ref()) {
        let sc = Sidecar::parse(&read(path)?)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(fail(EXIT_PARSE))?;
        s = s.with_sidecar(sc);
    }
    if backend == Backend::External && s.sidecar.is_none() {
        return Err(Failure { code: EXIT_BACKEND, err: anyhow!("the external backend needs --synth-file or TACO_SYNTH_FILE") });
    }
    Ok(s)
}

fn is_clifford_t(c: &Circuit) -> bool {
    c.gates().iter().all(|g| g.kind.is_clifford_t_1q() || matches!(g.kind, GateKind::CX | GateKind::MeasureZ))
}

/// Decompose, transform and synthesize unless the circuit is already
/// Clifford+T.
fn to_clifford_t(c: Circuit, synth: &Synthesizer) -> Res<Circuit> {
    if is_clifford_t(&c) {
        return Ok(c);
    }
    let t = transform_with_tol(&decompose_to_cx_1q(&c), synth.angle_tol)?;
    Ok(synthesize_circuit(&t, synth).map_err(fail(EXIT_BACKEND))?.circuit)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    to_stable_json(v)
}

fn cmd_run(a: RunArgs) -> Res<()> {
    let file: FileConfig = match &a.config {
        Some(p) => toml::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display())).map_err(fail(EXIT_PARSE))?,
        None => FileConfig::default(),
    };
    let mut input_args = a.input;
    input_args.angle_tol = input_args.angle_tol.or(file.angle_tol);
    let angle_tol = input_args.angle_tol.unwrap_or(DEFAULT_ANGLE_TOL);
    let circuit = load_circuit(&input_args)?;
    let synth = synthesizer(&a.synth, &file, angle_tol)?;
    let cost_model = load_cost_model(a.cost_model.as_deref())?.or(file.cost_model).unwrap_or_default();
    cost_model.validate().map_err(fail(EXIT_PARSE))?;
    let cfg = PipelineConfig {
        epsilon: synth.eps,
        backend: synth.backend,
        angle_tol,
        search: synth.search,
        sidecar: synth.sidecar.clone(),
        cost_model,
        compute_blocks: a.compute_blocks.or(file.compute_blocks).unwrap_or(1),
        verify: a.verify,
    };
    let out = run_pipeline(&circuit, &cfg).map_err(|e| {
        let code = match e {
            PipelineError::Synth(_) => EXIT_BACKEND,
            PipelineError::VerificationFailed { .. } => EXIT_VERIFY,
            _ => EXIT_FAILURE,
        };
        Failure { code, err: e.into() }
    })?;
    if let Some(p) = &a.emit_reduced {
        write_out(Some(p), &emit_qasm(&out.reduced))?;
    }
    if let Some(p) = &a.emit_pbc {
        write_out(Some(p), &json(&out.pbc))?;
    }
    if let Some(p) = &a.emit_schedule {
        write_out(Some(p), &json(&out.schedule))?;
    }
    if let Some(p) = &a.emit_gantt {
        write_out(Some(p), &out.schedule.gantt())?;
    }
    write_out(a.report.as_deref(), &out.report.to_json())
}

fn cmd_transform(a: TransformArgs) -> Res<()> {
    let c = load_circuit(&a.out.input)?;
    let tol = a.out.input.angle_tol.unwrap_or(DEFAULT_ANGLE_TOL);
    let d = decompose_to_cx_1q(&c);
    let t = transform_with_tol(&d, tol)?;
    eprintln!("rz count: {} -> {}", rz_count_with_tol(&d, tol), rz_count_with_tol(&t, tol));
    if a.list_angles {
        let mut angles: Vec<f64> = lower_rotations(&t, tol)
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::RZ)
            .map(|g| g.params[0].to_radians())
            .collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup();
        let text: String = angles.iter().map(|x| format!("{x:?}\n")).collect();
        return write_out(a.out.output.as_deref(), &text);
    }
    write_out(a.out.output.as_deref(), &emit_qasm(&t))
}

fn cmd_synth(a: SynthCmd) -> Res<()> {
    let theta = parse_angle_expr(&a.angle).map_err(fail(EXIT_PARSE))?;
    let s = synthesizer(&a.synth, &FileConfig::default(), DEFAULT_ANGLE_TOL)?;
    let r = s.synthesize_rz(theta).map_err(fail(EXIT_BACKEND))?;
    if a.json {
        #[derive(serde::Serialize)]
        struct Out {
            angle: f64,
            epsilon: f64,
            word: String,
            t_count: usize,
            distance: f64,
        }
        let out = Out {
            angle: theta.to_radians(),
            epsilon: s.eps,
            word: r.word.to_ma_string(),
            t_count: r.word.t_count(),
            distance: r.distance,
        };
        print!("{}", json(&out));
    } else {
        println!("{}", r.word.to_ma_string());
    }
    Ok(())
}

fn cmd_reduce(a: ReduceArgs) -> Res<()> {
    let tol = a.out.input.angle_tol.unwrap_or(DEFAULT_ANGLE_TOL);
    let c = load_circuit(&a.out.input)?;
    let synth = synthesizer(&a.synth, &FileConfig::default(), tol)?;
    let ct = to_clifford_t(c, &synth)?;
    let r = reduce_circuit(&ct)?;
    if let Some(p) = &a.stats {
        #[derive(serde::Serialize)]
        struct Out<'a> {
            stats: taco_core::reduce::ReductionStats,
            runs: usize,
            boundary_s: usize,
            frame: String,
            flipped_clbits: &'a [usize],
            locality: f64,
        }
        let out = Out {
            stats: r.stats(&ct),
            runs: r.runs,
            boundary_s: r.boundary_s,
            frame: r.frame.to_string(),
            flipped_clbits: &r.flipped_clbits,
            locality: rotation_locality(&r.circuit, taco_core::pipeline::LOCALITY_MIN_RUN),
        };
        write_out(Some(p), &json(&out))?;
    }
    let mut text = emit_qasm(&r.circuit);
    if !r.frame.is_identity() {
        text.push_str(&format!("// frame {}\n", r.frame));
    }
    write_out(a.out.output.as_deref(), &text)
}

fn cmd_schedule(a: ScheduleArgs) -> Res<()> {
    let c = load_circuit(&a.input)?;
    let cm = load_cost_model(a.cost_model.as_deref())?.unwrap_or_default();
    let plan = plan_layout(c.num_qubits(), a.compute_blocks)?;
    let s = schedule(&c, &plan, &cm)?;
    if a.gantt {
        print!("{}", s.gantt());
    } else {
        print!("{}", json(&s));
    }
    Ok(())
}

fn cmd_pbc(a: PbcArgs) -> Res<()> {
    let c = load_circuit(&a.input)?;
    let p = to_pbc(&c)?;
    if a.parallelism {
        print!("{}", json(&pbc_parallelism(&p)));
    } else {
        print!("{}", json(&p));
    }
    Ok(())
}

fn parse_frame(text: &str, n: usize) -> Res<PauliFrame> {
    let mut f = PauliFrame::identity(n);
    if text.chars().count() != n {
        return Err(Failure { code: EXIT_PARSE, err: anyhow!("frame needs {n} letters, got `{text}`") });
    }
    for (q, ch) in text.chars().enumerate() {
        let p = match ch.to_ascii_uppercase() {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => return Err(Failure { code: EXIT_PARSE, err: anyhow!("bad frame letter `{ch}`") }),
        };
        f.set(q, p);
    }
    Ok(f)
}

fn cmd_verify(a: VerifyArgs) -> Res<()> {
    let load = |p: &Path| -> Res<Circuit> {
        parse_qasm_with_tol(&read(p)?, DEFAULT_ANGLE_TOL)
            .with_context(|| format!("parsing {}", p.display()))
            .map_err(fail(EXIT_PARSE))
    };
    let (ca, cb) = (load(&a.a)?, load(&a.b)?);
    let ua = unitary_of_unmeasured(&ca)?;
    let ub = unitary_of_unmeasured(&cb)?;
    if ua.num_qubits() != ub.num_qubits() {
        return Err(Failure { code: EXIT_VERIFY, err: anyhow!("qubit counts differ") });
    }
    let frame = match &a.frame {
        Some(t) => parse_frame(t, cb.num_qubits())?,
        None => PauliFrame::identity(cb.num_qubits()),
    };
    let mut framed = ub.clone();
    framed.apply_frame(&frame);
    let d = phase_distance(&ua, &framed);
    println!("distance {d:e}");
    if equiv_mod_frame(&ua, &ub, &frame, a.tol) {
        println!("equivalent");
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY, err: anyhow!("circuits differ: distance {d:e} > {:e}", a.tol) })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Stats(a) => load_circuit(&a).map(|c| print!("{}", json(&gate_counts(&c)))),
        Command::Decompose(a) => {
            load_circuit(&a.input).and_then(|c| write_out(a.output.as_deref(), &emit_qasm(&decompose_to_cx_1q(&c))))
        }
        Command::Transform(a) => cmd_transform(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Schedule(a) => cmd_schedule(a),
        Command::Pbc(a) => cmd_pbc(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

// Copyright 2026 The qcompile Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `qcompile`: compile unitary matrices and quantum-walk operators into
//! circuits of uniformly-controlled rotations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcompile::circuit::count_subgates;
use qcompile::emit::{emit_json, emit_latex, emit_text, parse_json, parse_text, NumericMode};
use qcompile::matrix::{read_matrix_file, write_matrix_text};
use qcompile::verify::{verify_circuit, Method, Verification};
use qcompile::walk::{parse_graph, random_graph, walk_unitary, Graph};
use qcompile::{compile, Circuit, Error, Pipeline, Tolerances, UnitaryOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Residual above which an accepted input is replaced by the nearest
/// unitary before compiling.
const SNAP_THRESHOLD: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "qcompile", version, about = "Compile unitary matrices into quantum circuits by recursive cosine-sine decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a matrix file into a circuit.
    Compile {
        /// Matrix file (text or JSON).
        input: PathBuf,
        #[command(flatten)]
        opts: CompileOpts,
    },
    /// Build the one-step coined walk operator of a graph and compile it.
    Walk {
        /// Graph file: edge list or dense adjacency.
        #[arg(required_unless_present = "random_graph", conflicts_with = "random_graph")]
        graph: Option<PathBuf>,
        /// Generate a random graph instead, as NODES:EDGES:LOOPS.
        #[arg(long, value_name = "N:E:L")]
        random_graph: Option<String>,
        /// Also write the unpadded walk matrix.
        #[arg(long)]
        dump_matrix: bool,
        #[command(flatten)]
        opts: CompileOpts,
    },
    /// Check a circuit file against a matrix file.
    Verify {
        /// Circuit file (exact-mode text or JSON).
        circuit: PathBuf,
        /// Matrix file the circuit should implement.
        matrix: PathBuf,
        #[command(flatten)]
        check: CheckOpts,
    },
    /// Print gate and subgate counts of a circuit file.
    Stats {
        /// Circuit file (text or JSON).
        circuit: PathBuf,
        /// Angles at or below this magnitude are not counted.
        #[arg(long, default_value_t = Tolerances::default().angle_zero)]
        tol_zero: f64,
    },
}

#[derive(Args)]
struct CheckOpts {
    /// Accept inputs whose max |U†U - I| is at most this.
    #[arg(long, default_value_t = Tolerances::default().unitary)]
    tol_unitary: f64,
    /// Largest acceptable reconstruction error.
    #[arg(long, default_value_t = Tolerances::default().reconstruct)]
    tol_reconstruct: f64,
    /// Basis states checked when the circuit is too large to expand.
    #[arg(long, default_value_t = 64)]
    verify_samples: usize,
    /// Seed for random graphs and sampled verification.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CompileOpts {
    #[arg(long, value_enum, default_value_t = PipelineArg::Auto)]
    pipeline: PipelineArg,
    /// Output formats, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "text")]
    format: Vec<Format>,
    /// Angle precision of text output.
    #[arg(long, value_enum, default_value_t = ModeArg::Display)]
    mode: ModeArg,
    /// Angles at or below this magnitude are not counted or drawn.
    #[arg(long, default_value_t = Tolerances::default().angle_zero)]
    tol_zero: f64,
    /// Check the compiled circuit against the input.
    #[arg(long)]
    verify: bool,
    /// Write PREFIX.txt, PREFIX.json, PREFIX.tex instead of printing.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
    #[command(flatten)]
    check: CheckOpts,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Auto,
    Real,
    Complex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Display,
    Exact,
}

/// A failed run: exit status and message.
struct Failure {
    code: u8,
    message: String,
}

mod code {
    pub const USAGE: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const NOT_UNITARY: u8 = 3;
    pub const NUMERICAL: u8 = 4;
    pub const VERIFY: u8 = 5;
    pub const NOT_REAL: u8 = 6;
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotUnitary { .. } | Error::NotSquare { .. } => code::NOT_UNITARY,
            Error::NumericalFailure { .. } => code::NUMERICAL,
            Error::NotRealDecomposition { .. } => code::NOT_REAL,
            Error::BadGraphRequest(_) | Error::TooLarge { .. } => code::USAGE,
            _ => code::PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(code::PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| fail(code::USAGE, format!("{}: {e}", path.display())))
}

fn tolerances(check: &CheckOpts, tol_zero: f64) -> Result<Tolerances, Failure> {
    let tol = Tolerances {
        unitary: check.tol_unitary,
        angle_zero: tol_zero,
        reconstruct: check.tol_reconstruct,
        ..Tolerances::default()
    };
    if !tol.is_valid() {
        return Err(fail(code::USAGE, "tolerances must be finite and non-negative"));
    }
    Ok(tol)
}

/// Certifies a matrix; an input accepted only under a loose tolerance is
/// replaced by its nearest unitary.
fn load_operator(path: &Path, tol: &Tolerances) -> Result<UnitaryOperator, Failure> {
    let m = read_matrix_file(path).map_err(|e| fail(code::PARSE, format!("{}: {e}", path.display())))?;
    let op = UnitaryOperator::certify(m, tol)?;
    Ok(snap(op))
}

fn snap(op: UnitaryOperator) -> UnitaryOperator {
    if op.unitarity_residual() > SNAP_THRESHOLD {
        eprintln!(
            "note: unitarity residual {:.3e}; compiling the nearest unitary instead",
            op.unitarity_residual()
        );
        op.project_to_unitary()
    } else {
        op
    }
}

fn report_verification(v: &Verification, tol: f64) -> Result<(), Failure> {
    let how = match v.method {
        Method::Dense => "dense".to_string(),
        Method::Sampled { states } => format!("{states} sampled states"),
    };
    eprintln!("verify: max residual {:.3e} ({how})", v.residual);
    if v.residual > tol {
        return Err(fail(
            code::VERIFY,
            format!("verification failed: residual {:.3e} exceeds {tol:.1e}", v.residual),
        ));
    }
    Ok(())
}

fn compile_and_emit(op: &UnitaryOperator, opts: &CompileOpts) -> Result<(), Failure> {
    let tol = tolerances(&opts.check, opts.tol_zero)?;
    let pipeline = match opts.pipeline {
        PipelineArg::Auto => Pipeline::Auto,
        PipelineArg::Real => Pipeline::Real,
        PipelineArg::Complex => Pipeline::Complex,
    };
    let start = Instant::now();
    let compiled = compile(op, pipeline, &tol)?;
    let elapsed = start.elapsed();
    let c = &compiled.circuit;
    let k = count_subgates(c, tol.angle_zero);
    eprintln!("qubits: {} (input dimension {})", c.n_qubits(), op.dim());
    eprintln!(
        "pipeline: {}",
        if compiled.pipeline == Pipeline::Real { "real" } else { "complex" }
    );
    eprintln!(
        "subgates: {} (ry {}, rz {}, pi {}, phase {})",
        k.total, k.ry, k.rz, k.pi, k.phase
    );
    eprintln!("time: compile {:.3} s", elapsed.as_secs_f64());

    let mode = match opts.mode {
        ModeArg::Display => NumericMode::Display,
        ModeArg::Exact => NumericMode::Exact,
    };
    let mut formats = opts.format.clone();
    formats.dedup();
    for f in formats {
        let (ext, body) = match f {
            Format::Text => ("txt", emit_text(c, mode)),
            Format::Json => ("json", emit_json(c) + "\n"),
            Format::Latex => ("tex", emit_latex(c, tol.angle_zero)),
        };
        match &opts.out {
            Some(prefix) => write(&with_suffix(prefix, ext), &body)?,
            None => print!("{body}"),
        }
    }

    if opts.verify {
        let start = Instant::now();
        let v = verify_circuit(c, &compiled.operator, opts.check.verify_samples, opts.check.seed)?;
        eprintln!("time: verify {:.3} s", start.elapsed().as_secs_f64());
        report_verification(&v, tol.reconstruct)?;
    }
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn parse_random_spec(spec: &str) -> Result<(usize, usize, usize), Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || fail(code::USAGE, format!("--random-graph expects N:E:L, got `{spec}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    Ok((num(parts[0])?, num(parts[1])?, num(parts[2])?))
}

fn cmd_walk(
    graph: Option<&Path>,
    random: Option<&str>,
    dump_matrix: bool,
    opts: &CompileOpts,
) -> Result<(), Failure> {
    let g: Graph = match (graph, random) {
        (Some(path), _) => parse_graph(&read(path)?).map_err(|e| fail(code::PARSE, format!("{}: {e}", path.display())))?,
        (None, Some(spec)) => {
            let (n, e, l) = parse_random_spec(spec)?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.check.seed);
            random_graph(n, e, l, &mut rng)?
        }
        (None, None) => return Err(fail(code::USAGE, "a graph file or --random-graph is required")),
    };
    let start = Instant::now();
    let (op, basis) = walk_unitary(&g)?;
    eprintln!(
        "graph: {} nodes, {} edges, {} loops, {} arcs (built in {:.3} s)",
        g.node_count(),
        g.edge_count(),
        g.loop_count(),
        basis.len(),
        start.elapsed().as_secs_f64()
    );
    if dump_matrix {
        let text = write_matrix_text(op.matrix());
        match &opts.out {
            Some(prefix) => write(&with_suffix(prefix, "matrix.txt"), &text)?,
            None => print!("{text}"),
        }
    }
    compile_and_emit(&op, opts)
}

fn load_circuit(path: &Path, n: Option<u32>) -> Result<Circuit, Failure> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        parse_json(&text)
    } else {
        parse_text(&text, n)
    };
    parsed.map_err(|e| fail(code::PARSE, format!("{}: {e}", path.display())))
}

fn cmd_verify(circuit: &Path, matrix: &Path, check: &CheckOpts) -> Result<(), Failure> {
    let tol = tolerances(check, Tolerances::default().angle_zero)?;
    let op = load_operator(matrix, &tol)?;
    let (op, n) = op.pad_to_power_of_two();
    let c = load_circuit(circuit, Some(n))?;
    if c.n_qubits() != n {
        return Err(fail(
            code::PARSE,
            format!("circuit has {} qubits but the matrix needs {n}", c.n_qubits()),
        ));
    }
    let v = verify_circuit(&c, &op, check.verify_samples, check.seed)?;
    report_verification(&v, tol.reconstruct)
}

fn cmd_stats(circuit: &Path, tol_zero: f64) -> Result<(), Failure> {
    if !(tol_zero.is_finite() && tol_zero >= 0.0) {
        return Err(fail(code::USAGE, "--tol-zero must be finite and non-negative"));
    }
    let c = load_circuit(circuit, None)?;
    let k = count_subgates(&c, tol_zero);
    println!("qubits: {}", c.n_qubits());
    println!("gates: {}", c.gates().len());
    println!(
        "subgates: {} (ry {}, rz {}, pi {}, phase {})",
        k.total, k.ry, k.rz, k.pi, k.phase
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compile { input, opts } => {
            let tol = tolerances(&opts.check, opts.tol_zero)?;
            let op = load_operator(&input, &tol)?;
            compile_and_emit(&op, &opts)
        }
        Command::Walk {
            graph,
            random_graph,
            dump_matrix,
            opts,
        } => cmd_walk(graph.as_deref(), random_graph.as_deref(), dump_matrix, &opts),
        Command::Verify { circuit, matrix, check } => cmd_verify(&circuit, &matrix, &check),
        Command::Stats { circuit, tol_zero } => cmd_stats(&circuit, tol_zero),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(code::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

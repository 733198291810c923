//! Command-line driver: generate QUBO files from curve instances, solve
//! them, run the full attack loop with automatic retry, query the classical
//! oracle, and summarize QUBO files.
//!
//! Exit codes: 0 success/verified, 1 unverified or not found, 2 input
//! error, 3 classical short circuit (the shifted target is the neutral
//! element and the answer is printed directly).

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ecdlp_qubo::{
    compile, decode, export_qubo, import_qubo, solve_exhaustive, solve_sa, Compiled,
    EcdlpInstance, Error, InstanceMeta, Method, QuboInstance, RoleCounts, SaParams,
    DEFAULT_EXHAUSTIVE_CAP, DEFAULT_MAX_MINIMA,
};

const EXIT_OK: u8 = 0;
const EXIT_UNVERIFIED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CLASSICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "ecdlp-qubo", version, about = "ECDLP-to-QUBO reduction toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a QUBO file and metadata sidecar from a curve instance.
    Gen(GenArgs),
    /// Solve a QUBO file and decode the result using its sidecar.
    Solve(SolveArgs),
    /// End-to-end attack with automatic shift retry.
    Attack(AttackArgs),
    /// Brute-force discrete-logarithm oracle.
    Oracle(OracleArgs),
    /// Print statistics about a QUBO file.
    Stats(StatsArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Prime field modulus.
    #[arg(long)]
    p: u64,
    /// Curve coefficient a of y^2 = x^3 + ax + b.
    #[arg(long)]
    a: u64,
    /// Curve coefficient b.
    #[arg(long)]
    b: u64,
    /// Base point x-coordinate.
    #[arg(long)]
    px: u64,
    /// Base point y-coordinate.
    #[arg(long)]
    py: u64,
    /// Target point x-coordinate.
    #[arg(long)]
    qx: u64,
    /// Target point y-coordinate.
    #[arg(long)]
    qy: u64,
}

impl InstanceArgs {
    fn build(&self) -> Result<EcdlpInstance, Error> {
        EcdlpInstance::from_integers(self.p, self.a, self.b, self.px, self.py, self.qx, self.qy)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SolverChoice {
    /// Exhaustive when the instance fits under the cap, annealing otherwise.
    Auto,
    Exhaustive,
    Sa,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "auto")]
    solver: SolverChoice,
    /// Variable-count cap for exhaustive enumeration.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    cap: u32,
    /// Cap on reported ground states (exhaustive solver).
    #[arg(long, default_value_t = DEFAULT_MAX_MINIMA)]
    max_minima: usize,
    /// Annealing sweeps per restart.
    #[arg(long, default_value_t = 2000)]
    sweeps: usize,
    /// Independent annealing restarts.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Starting temperature; defaults to the largest coefficient magnitude.
    #[arg(long = "t-hi")]
    t_hi: Option<f64>,
    /// Final temperature.
    #[arg(long = "t-lo", default_value_t = 0.1)]
    t_lo: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl SolverArgs {
    fn sa_params(&self, qubo: &QuboInstance) -> Result<SaParams, Error> {
        let t_hi = self
            .t_hi
            .unwrap_or_else(|| (qubo.max_abs_coeff() as f64).max(1.0));
        SaParams::new(self.sweeps, self.restarts, t_hi, self.t_lo, self.seed)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Reduction strategy: 1 (retry on failure) or 2 (mandatory shift).
    #[arg(long, default_value_t = 1)]
    method: u8,
    /// Target shift; defaults to the method's mandatory shift.
    #[arg(long)]
    shift: Option<u64>,
    /// Output QUBO file.
    #[arg(long)]
    out: PathBuf,
    /// Output sidecar path; defaults to <out>.meta.json.
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// QUBO file to solve.
    #[arg(long)]
    qubo: PathBuf,
    /// Metadata sidecar written alongside the QUBO file.
    #[arg(long)]
    meta: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Reduction strategy: 1 (retry on failure) or 2 (mandatory shift).
    #[arg(long, default_value_t = 1)]
    method: u8,
    /// Pin a single shift instead of the automatic retry sequence.
    #[arg(long)]
    shift: Option<u64>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StatsArgs {
    /// QUBO file to inspect.
    #[arg(long)]
    qubo: PathBuf,
    /// Optional metadata sidecar for per-role variable counts.
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Gen(args) => run_gen(&args),
        Command::Solve(args) => run_solve(&args),
        Command::Attack(args) => run_attack(&args),
        Command::Oracle(args) => run_oracle(&args),
        Command::Stats(args) => run_stats(&args),
    };
    ExitCode::from(code)
}

fn input_error(err: &Error) -> u8 {
    eprintln!("error: {err}");
    EXIT_INPUT
}

fn parse_method(method: u8) -> Result<Method, String> {
    Method::from_number(method).ok_or_else(|| format!("method must be 1 or 2, got {method}"))
}

// ---------------------------------------------------------------------------
// gen

#[derive(Serialize)]
struct GenReport<'a> {
    command: &'a str,
    p: u64,
    a: u64,
    b: u64,
    px: u64,
    py: u64,
    qx: u64,
    qy: u64,
    order: u64,
    method: u8,
    shift: u64,
    num_vars: usize,
    breakdown: RoleCounts,
    offset: i64,
    qubo_file: String,
    meta_file: String,
}

#[derive(Serialize)]
struct ClassicalReport<'a> {
    command: &'a str,
    classical_y: u64,
    shift: u64,
}

fn run_gen(args: &GenArgs) -> u8 {
    let method = match parse_method(args.method) {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let inst = match args.instance.build() {
        Ok(inst) => inst,
        Err(err) => return input_error(&err),
    };
    let shift = args.shift.unwrap_or_else(|| method.mandatory_shift());
    let compiled = match compile(&inst, method, shift) {
        Ok(c) => c,
        Err(Error::ShiftedTargetAtInfinity { shift, classical }) => {
            if args.json {
                let report = ClassicalReport {
                    command: "gen",
                    classical_y: classical,
                    shift,
                };
                println!("{}", serde_json::to_string(&report).unwrap());
            } else {
                println!(
                    "shifted target is the neutral element; classical answer y = {classical}"
                );
            }
            return EXIT_CLASSICAL;
        }
        Err(err) => return input_error(&err),
    };

    let meta_path = args
        .meta
        .clone()
        .unwrap_or_else(|| default_meta_path(&args.out));
    if let Err(err) = write_outputs(&compiled, &inst, &args.out, &meta_path) {
        return input_error(&err);
    }

    let counts = compiled.system.varmap().counts();
    if args.json {
        let report = GenReport {
            command: "gen",
            p: args.instance.p,
            a: args.instance.a,
            b: args.instance.b,
            px: args.instance.px,
            py: args.instance.py,
            qx: args.instance.qx,
            qy: args.instance.qy,
            order: inst.order(),
            method: method.number(),
            shift,
            num_vars: compiled.qubo.num_vars(),
            breakdown: counts,
            offset: compiled.qubo.offset(),
            qubo_file: args.out.display().to_string(),
            meta_file: meta_path.display().to_string(),
        };
        println!("{}", serde_json::to_string(&report).unwrap());
    } else {
        println!(
            "wrote {} ({} diagonal, {} off-diagonal entries) and {}",
            args.out.display(),
            compiled.qubo.num_linear_terms(),
            compiled.qubo.num_quadratic_terms(),
            meta_path.display()
        );
        println!(
            "variables: total={} scalar={} point={} carry={} aux={}",
            counts.total(),
            counts.scalar,
            counts.point,
            counts.carry,
            counts.aux
        );
    }
    EXIT_OK
}

fn default_meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write_outputs(
    compiled: &Compiled,
    inst: &EcdlpInstance,
    out: &Path,
    meta_path: &Path,
) -> Result<(), Error> {
    let file = File::create(out)?;
    export_qubo(&compiled.qubo, file)?;
    let meta = InstanceMeta::new(inst, &compiled.system, compiled.qubo.offset());
    let mut file = File::create(meta_path)?;
    file.write_all(meta.to_json()?.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// solve

#[derive(Serialize)]
struct SolveReport<'a> {
    command: &'a str,
    solver: &'a str,
    num_vars: usize,
    energy: i64,
    y: Option<u64>,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_restart: Option<usize>,
}

/// Rebuilds the reduction pipeline recorded in a sidecar and cross-checks
/// it against the loaded QUBO's variable space.
fn recompile_from_meta(meta: &InstanceMeta, qubo: &QuboInstance) -> Result<(EcdlpInstance, Compiled), Error> {
    let method = Method::from_number(meta.method).ok_or(Error::ParseError {
        line: 0,
        msg: format!("sidecar method must be 1 or 2, got {}", meta.method),
    })?;
    let inst = meta.instance()?;
    let compiled = compile(&inst, method, meta.shift)?;
    if compiled.system.varmap().roles() != meta.variables.as_slice() {
        return Err(Error::ParseError {
            line: 0,
            msg: "sidecar variable roles do not match the instance pipeline".into(),
        });
    }
    if qubo.num_vars() != meta.variables.len() {
        return Err(Error::ParseError {
            line: 0,
            msg: format!(
                "QUBO has {} variables but the sidecar declares {}",
                qubo.num_vars(),
                meta.variables.len()
            ),
        });
    }
    Ok((inst, compiled))
}

fn load_qubo(path: &Path) -> Result<QuboInstance, Error> {
    let file = File::open(path)?;
    import_qubo(BufReader::new(file))
}

fn load_meta(path: &Path) -> Result<InstanceMeta, Error> {
    let text = std::fs::read_to_string(path)?;
    InstanceMeta::from_json(&text)
}

fn run_solve(args: &SolveArgs) -> u8 {
    let mut qubo = match load_qubo(&args.qubo) {
        Ok(q) => q,
        Err(err) => return input_error(&err),
    };
    let meta = match load_meta(&args.meta) {
        Ok(m) => m,
        Err(err) => return input_error(&err),
    };
    qubo.set_offset(meta.offset);
    let (inst, compiled) = match recompile_from_meta(&meta, &qubo) {
        Ok(pair) => pair,
        Err(err) => return input_error(&err),
    };

    let outcome = match run_solver(&qubo, &compiled, &inst, &args.solver) {
        Ok(o) => o,
        Err(err) => return input_error(&err),
    };
    let report = SolveReport {
        command: "solve",
        solver: outcome.solver,
        num_vars: qubo.num_vars(),
        energy: outcome.energy,
        y: outcome.y,
        verified: outcome.verified,
        ground_states: outcome.ground_states,
        truncated: outcome.truncated,
        restarts: outcome.restarts,
        best_restart: outcome.best_restart,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).unwrap());
    } else {
        println!("energy = {}", outcome.energy);
        match outcome.y {
            Some(y) => println!("y = {y}"),
            None => println!("y = (no candidate)"),
        }
        println!("verified = {}", outcome.verified);
    }
    if outcome.verified {
        EXIT_OK
    } else {
        EXIT_UNVERIFIED
    }
}

struct SolverOutcome {
    solver: &'static str,
    energy: i64,
    y: Option<u64>,
    verified: bool,
    ground_states: Option<usize>,
    truncated: Option<bool>,
    restarts: Option<usize>,
    best_restart: Option<usize>,
}

/// Runs the chosen solver and decodes candidates in deterministic order
/// until one passes classical verification.
fn run_solver(
    qubo: &QuboInstance,
    compiled: &Compiled,
    inst: &EcdlpInstance,
    args: &SolverArgs,
) -> Result<SolverOutcome, Error> {
    let use_exhaustive = match args.solver {
        SolverChoice::Exhaustive => true,
        SolverChoice::Sa => false,
        SolverChoice::Auto => qubo.num_vars() as u32 <= args.cap,
    };
    if use_exhaustive {
        let res = solve_exhaustive(qubo, args.cap, args.max_minima)?;
        let mut best: Option<ecdlp_qubo::DecodedSolution> = None;
        for asg in &res.minima {
            let d = decode(asg, &compiled.system, inst);
            let done = d.verified;
            if best.is_none() || done {
                best = Some(d);
            }
            if done {
                break;
            }
        }
        let best = best.expect("enumeration returns at least one minimum");
        Ok(SolverOutcome {
            solver: "exhaustive",
            energy: res.min_energy,
            y: Some(best.y_candidate),
            verified: best.verified,
            ground_states: Some(res.minima.len()),
            truncated: Some(res.truncated),
            restarts: None,
            best_restart: None,
        })
    } else {
        let params = args.sa_params(qubo)?;
        let res = solve_sa(qubo, &params)?;
        let mut best: Option<ecdlp_qubo::DecodedSolution> = None;
        for trace in res.ranked_candidates() {
            let d = decode(&trace.best, &compiled.system, inst);
            let done = d.verified;
            if best.is_none() || done {
                best = Some(d);
            }
            if done {
                break;
            }
        }
        let best = best.expect("at least one restart ran");
        Ok(SolverOutcome {
            solver: "sa",
            energy: res.best_energy,
            y: Some(best.y_candidate),
            verified: best.verified,
            ground_states: None,
            truncated: None,
            restarts: Some(params.restarts),
            best_restart: Some(res.best_restart),
        })
    }
}

// ---------------------------------------------------------------------------
// attack

#[derive(Serialize)]
struct ShiftReport {
    shift: u64,
    solver: String,
    num_vars: usize,
    energy: Option<i64>,
    verified: bool,
    wall_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_states: Option<usize>,
}

#[derive(Serialize)]
struct AttackReport<'a> {
    command: &'a str,
    p: u64,
    a: u64,
    b: u64,
    px: u64,
    py: u64,
    qx: u64,
    qy: u64,
    order: u64,
    m: u32,
    n: u32,
    method: u8,
    shifts: Vec<ShiftReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    breakdown: Option<RoleCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    num_vars: Option<usize>,
    y: Option<u64>,
    verified: bool,
}

fn run_attack(args: &AttackArgs) -> u8 {
    let method = match parse_method(args.method) {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let inst = match args.instance.build() {
        Ok(inst) => inst,
        Err(err) => return input_error(&err),
    };

    let shifts: Vec<u64> = match args.shift {
        Some(s) => vec![s],
        None => {
            let base = method.mandatory_shift();
            vec![base, base + 1]
        }
    };

    let mut report = AttackReport {
        command: "attack",
        p: args.instance.p,
        a: args.instance.a,
        b: args.instance.b,
        px: args.instance.px,
        py: args.instance.py,
        qx: args.instance.qx,
        qy: args.instance.qy,
        order: inst.order(),
        m: inst.scalar_bits(),
        n: inst.coordinate_bits(),
        method: method.number(),
        shifts: Vec::new(),
        breakdown: None,
        num_vars: None,
        y: None,
        verified: false,
    };

    for &shift in &shifts {
        let started = Instant::now();
        let compiled = match compile(&inst, method, shift) {
            Ok(c) => c,
            Err(Error::ShiftedTargetAtInfinity { classical, .. }) => {
                // The shifted target collapses to the neutral element, which
                // pins the answer without any solver run.
                report.shifts.push(ShiftReport {
                    shift,
                    solver: "classical".into(),
                    num_vars: 0,
                    energy: None,
                    verified: true,
                    wall_ms: started.elapsed().as_millis(),
                    restarts: None,
                    ground_states: None,
                });
                report.y = Some(classical);
                report.verified = true;
                emit_attack(&report, args.json);
                return EXIT_OK;
            }
            Err(err) => return input_error(&err),
        };
        let outcome = match run_solver(&compiled.qubo, &compiled, &inst, &args.solver) {
            Ok(o) => o,
            Err(err) => return input_error(&err),
        };
        report.shifts.push(ShiftReport {
            shift,
            solver: outcome.solver.into(),
            num_vars: compiled.qubo.num_vars(),
            energy: Some(outcome.energy),
            verified: outcome.verified,
            wall_ms: started.elapsed().as_millis(),
            restarts: outcome.restarts,
            ground_states: outcome.ground_states,
        });
        report.breakdown = Some(compiled.system.varmap().counts());
        report.num_vars = Some(compiled.qubo.num_vars());
        if outcome.verified {
            report.y = outcome.y;
            report.verified = true;
            emit_attack(&report, args.json);
            return EXIT_OK;
        }
    }
    emit_attack(&report, args.json);
    EXIT_UNVERIFIED
}

fn emit_attack(report: &AttackReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string(report).unwrap());
        return;
    }
    println!(
        "instance: y^2 = x^3 + {}x + {} over F_{}, P=({},{}), Q=({},{}), ord(P)={}",
        report.a, report.b, report.p, report.px, report.py, report.qx, report.qy, report.order
    );
    for s in &report.shifts {
        match s.energy {
            Some(e) => println!(
                "shift {}: solver={} vars={} energy={} verified={} ({} ms)",
                s.shift, s.solver, s.num_vars, e, s.verified, s.wall_ms
            ),
            None => println!("shift {}: resolved classically", s.shift),
        }
    }
    if let Some(c) = &report.breakdown {
        println!(
            "variables: total={} scalar={} point={} carry={} aux={}",
            c.total(),
            c.scalar,
            c.point,
            c.carry,
            c.aux
        );
    }
    match (report.verified, report.y) {
        (true, Some(y)) => println!("y = {y} (verified)"),
        _ => println!("attack failed: no verified solution"),
    }
}

// ---------------------------------------------------------------------------
// oracle

#[derive(Serialize)]
struct OracleReport<'a> {
    command: &'a str,
    y: u64,
}

fn run_oracle(args: &OracleArgs) -> u8 {
    let inst = match args.instance.build() {
        Ok(inst) => inst,
        Err(err) => return input_error(&err),
    };
    match inst.bruteforce() {
        Ok(y) => {
            if args.json {
                let report = OracleReport { command: "oracle", y };
                println!("{}", serde_json::to_string(&report).unwrap());
            } else {
                println!("{y}");
            }
            EXIT_OK
        }
        Err(Error::NotInSubgroup) => {
            eprintln!("error: target is not a power of the base point");
            EXIT_UNVERIFIED
        }
        Err(err) => input_error(&err),
    }
}

// ---------------------------------------------------------------------------
// stats

#[derive(Serialize)]
struct StatsReport<'a> {
    command: &'a str,
    num_vars: usize,
    diagonal: usize,
    offdiagonal: usize,
    coeff_min: Option<i64>,
    coeff_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    breakdown: Option<RoleCounts>,
}

fn run_stats(args: &StatsArgs) -> u8 {
    let qubo = match load_qubo(&args.qubo) {
        Ok(q) => q,
        Err(err) => return input_error(&err),
    };
    let meta = match &args.meta {
        Some(path) => match load_meta(path) {
            Ok(m) => Some(m),
            Err(err) => return input_error(&err),
        },
        None => None,
    };
    let coeffs: Vec<i64> = qubo
        .linear()
        .map(|(_, c)| c)
        .chain(qubo.quadratic().map(|(_, c)| c))
        .collect();
    let breakdown = meta.as_ref().map(|m| {
        let mut counts = RoleCounts { scalar: 0, point: 0, carry: 0, aux: 0 };
        for role in &m.variables {
            match role {
                ecdlp_qubo::VariableRole::ScalarBit { .. } => counts.scalar += 1,
                ecdlp_qubo::VariableRole::PointBit { .. } => counts.point += 1,
                ecdlp_qubo::VariableRole::CarryBit { .. } => counts.carry += 1,
                ecdlp_qubo::VariableRole::AuxProduct { .. } => counts.aux += 1,
            }
        }
        counts
    });
    let report = StatsReport {
        command: "stats",
        num_vars: qubo.num_vars(),
        diagonal: qubo.num_linear_terms(),
        offdiagonal: qubo.num_quadratic_terms(),
        coeff_min: coeffs.iter().min().copied(),
        coeff_max: coeffs.iter().max().copied(),
        offset: meta.as_ref().map(|m| m.offset),
        breakdown,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).unwrap());
    } else {
        println!("variables: {}", report.num_vars);
        println!("diagonal entries: {}", report.diagonal);
        println!("off-diagonal entries: {}", report.offdiagonal);
        match (report.coeff_min, report.coeff_max) {
            (Some(lo), Some(hi)) => println!("coefficient range: [{lo}, {hi}]"),
            _ => println!("coefficient range: (empty)"),
        }
        if let Some(offset) = report.offset {
            println!("offset: {offset}");
        }
        if let Some(c) = &report.breakdown {
            println!(
                "roles: scalar={} point={} carry={} aux={}",
                c.scalar, c.point, c.carry, c.aux
            );
        }
    }
    EXIT_OK
}

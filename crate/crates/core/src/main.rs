use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use extfair::fairness::{self, full_report, CheckOptions, Concept, ReportOptions, DEFAULT_CAPACITY};
use extfair::model::generate::{random_allocation, random_instance, random_pdm, GenFlags};
use extfair::model::io;
use extfair::oracle::{self, EnumerationSpec, Predicate};
use extfair::{maxmin_rr, three_binary, two_agent, Error, Execution, Instance};

/// Exit codes: 0 success, 1 property violated, 2 input error, 3 self-check failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Violated = 1,
    Input = 2,
    Internal = 3,
}

#[derive(Parser, Debug)]
#[command(name = "extfair", version, about = "Fair division with externalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate fairness concepts for an allocation.
    Check(CheckArgs),
    /// Run an allocation algorithm and verify its output.
    Solve(SolveArgs),
    /// Count allocations satisfying a predicate by exhaustive enumeration.
    Enumerate(EnumerateArgs),
    /// Sample the implication lattice and confirm the separating fixtures.
    Audit(AuditArgs),
    /// Write a seeded random instance, allocation or public decision instance.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run searches on one thread.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    allocation: PathBuf,
    /// Comma-separated concepts, e.g. `ef1,efx,2-p-prop`; all by default.
    #[arg(long, value_delimiter = ',')]
    concepts: Vec<String>,
    /// Largest number of allocations EMMS may enumerate.
    #[arg(long, default_value_t = DEFAULT_CAPACITY)]
    capacity: u128,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    TwoEfx,
    TwoEf1,
    ThreeBinaryEf1,
    MaxminRr,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Allocation instance, for every algorithm except `maxmin-rr`.
    #[arg(long, conflicts_with = "pdm")]
    instance: Option<PathBuf>,
    /// Public decision instance, for `maxmin-rr`.
    #[arg(long)]
    pdm: Option<PathBuf>,
    /// Round-robin order as 1-based agents, e.g. `3,1,2`.
    #[arg(long, value_delimiter = ',')]
    order: Vec<usize>,
    /// Write the reduction trace of `three-binary-ef1` here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// A concept such as `efx`, or `true` to count every allocation.
    #[arg(long, default_value = "true")]
    predicate: String,
    #[arg(long, default_value_t = DEFAULT_CAPACITY)]
    capacity: u128,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// Samples per implication.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Instance,
    Allocation,
    Pdm,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "instance")]
    kind: GenKind,
    #[arg(long, default_value_t = 3)]
    agents: usize,
    /// Items, or issues for `--kind pdm`.
    #[arg(long, default_value_t = 6)]
    items: usize,
    #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
    min: i64,
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    max: i64,
    #[arg(long)]
    binary: bool,
    #[arg(long)]
    no_chore: bool,
    #[arg(long)]
    nonneg: bool,
    #[arg(long, default_value_t = 4)]
    max_choices: usize,
    /// Instance to allocate for `--kind allocation`.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    io::parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Replaces `path` in one rename so readers never see a partial file.
fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(out: Option<&Path>, doc: &Json) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match out {
        Some(path) => write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check(args: &CheckArgs) -> anyhow::Result<Status> {
    let inst = load_instance(&args.instance)?;
    let alloc = io::parse_allocation(&inst, &read(&args.allocation)?)
        .with_context(|| format!("parsing {}", args.allocation.display()))?;
    let concepts = if args.concepts.is_empty() {
        Concept::all()
    } else {
        args.concepts.iter().map(|c| c.parse()).collect::<Result<_, Error>>()?
    };
    let opts = ReportOptions {
        concepts,
        check: CheckOptions {
            capacity: args.capacity,
            execution: args.common.execution(),
        },
    };
    let report = full_report(&inst, &alloc, &opts)?;
    emit(args.common.out.as_deref(), &report.to_json(&inst))?;
    Ok(if report.all_hold() {
        Status::Ok
    } else {
        Status::Violated
    })
}

fn solve(args: &SolveArgs) -> anyhow::Result<Status> {
    if args.algorithm != Algorithm::MaxminRr && (args.pdm.is_some() || !args.order.is_empty()) {
        bail!(Error::InvalidArgument(
            "--pdm and --order only apply to maxmin-rr".into()
        ));
    }
    if args.algorithm != Algorithm::ThreeBinaryEf1 && args.trace.is_some() {
        bail!(Error::InvalidArgument(
            "--trace only applies to three-binary-ef1".into()
        ));
    }
    if args.algorithm == Algorithm::MaxminRr {
        let Some(path) = &args.pdm else {
            bail!(Error::InvalidArgument("maxmin-rr needs --pdm".into()));
        };
        let pdm = io::parse_pdm(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        let order: Option<Vec<usize>> = if args.order.is_empty() {
            None
        } else {
            Some(
                args.order
                    .iter()
                    .map(|&j| {
                        j.checked_sub(1)
                            .ok_or_else(|| Error::InvalidArgument("agents in --order are 1-based".into()))
                    })
                    .collect::<Result<_, _>>()?,
            )
        };
        let outcome = maxmin_rr::max_min_round_robin(&pdm, order.as_deref())?;
        if !maxmin_rr::gfs1_check_pdm(&pdm, &outcome).holds {
            bail!(Error::Internal("Max-Min Round Robin output is not GFS1".into()));
        }
        emit(args.common.out.as_deref(), &io::outcome_to_json(&pdm, &outcome))?;
        return Ok(Status::Ok);
    }
    let Some(path) = &args.instance else {
        bail!(Error::InvalidArgument("this algorithm needs --instance".into()));
    };
    let inst = load_instance(path)?;
    let (alloc, verdict) = match args.algorithm {
        Algorithm::TwoEfx => {
            let pi = two_agent::two_agent_efx(&inst)?;
            let v = fairness::is_efx(&inst, &pi);
            (pi, v)
        }
        Algorithm::TwoEf1 => {
            let pi = two_agent::two_agent_ef1(&inst)?;
            let v = fairness::is_ef_k(&inst, &pi, 1);
            (pi, v)
        }
        Algorithm::ThreeBinaryEf1 => {
            let (pi, trace) = three_binary::solve_three_binary_traced(&inst, args.common.execution())?;
            if let Some(t) = &args.trace {
                emit(Some(t), &trace.to_json(&inst))?;
            }
            let v = fairness::is_ef_k(&inst, &pi, 1);
            (pi, v)
        }
        Algorithm::MaxminRr => unreachable!("handled above"),
    };
    if !verdict.holds {
        bail!(Error::Internal(format!(
            "{:?} output failed its own guarantee",
            args.algorithm
        )));
    }
    emit(args.common.out.as_deref(), &io::allocation_to_json(&inst, &alloc))?;
    Ok(Status::Ok)
}

fn enumerate(args: &EnumerateArgs) -> anyhow::Result<Status> {
    let inst = load_instance(&args.instance)?;
    let predicate: Predicate = args.predicate.parse()?;
    let spec = EnumerationSpec {
        instance: &inst,
        predicate,
        capacity: args.capacity,
        execution: args.common.execution(),
    };
    let e = oracle::exists_allocation(&spec)?;
    let doc = json!({
        "predicate": predicate.to_string(),
        "total": e.total,
        "count": e.count,
        "first_witness": e.first.as_ref().map(|pi| io::allocation_to_json(&inst, pi)),
    });
    emit(args.common.out.as_deref(), &doc)?;
    Ok(Status::Ok)
}

fn audit(args: &AuditArgs) -> anyhow::Result<Status> {
    let mut clean = true;
    let mut edges = Vec::new();
    for edge in oracle::lattice_edges() {
        let r = oracle::audit_implication(
            edge.from,
            edge.to,
            &edge.sampler,
            args.trials,
            args.seed,
            args.common.execution(),
        );
        if let Some(reason) = &r.skipped {
            eprintln!("warning: skipped {} => {}: {reason}", edge.from, edge.to);
        }
        clean &= r.counterexamples == 0;
        let first = r.first_counterexample.as_ref().map(|c| {
            json!({
                "trial": c.trial,
                "instance": io::instance_to_json(&c.instance),
                "allocation": io::allocation_to_json(&c.instance, &c.allocation),
            })
        });
        edges.push(json!({
            "from": edge.from.to_string(),
            "to": edge.to.to_string(),
            "trials": r.trials,
            "exercised": r.exercised,
            "counterexamples": r.counterexamples,
            "first_counterexample": first,
            "skipped": r.skipped,
        }));
    }
    let mut non_edges = Vec::new();
    for ne in oracle::non_edges() {
        let confirmed = ne.confirmed()?;
        clean &= confirmed;
        non_edges.push(json!({
            "fixture": ne.name,
            "holds": ne.holds.to_string(),
            "fails": ne.fails.to_string(),
            "confirmed": confirmed,
        }));
    }
    let doc = json!({ "seed": args.seed, "edges": edges, "non_edges": non_edges });
    emit(args.common.out.as_deref(), &doc)?;
    Ok(if clean { Status::Ok } else { Status::Violated })
}

fn generate(args: &GenArgs) -> anyhow::Result<Status> {
    let flags = GenFlags {
        binary: args.binary,
        no_chore: args.no_chore,
        nonneg: args.nonneg,
    };
    let doc = match args.kind {
        GenKind::Instance => {
            let inst = random_instance(args.agents, args.items, args.min..=args.max, flags, args.seed)?;
            io::instance_to_json(&inst)
        }
        GenKind::Allocation => {
            let Some(path) = &args.instance else {
                bail!(Error::InvalidArgument("--kind allocation needs --instance".into()));
            };
            let inst = load_instance(path)?;
            let pi = random_allocation(&inst, &mut ChaCha8Rng::seed_from_u64(args.seed));
            io::allocation_to_json(&inst, &pi)
        }
        GenKind::Pdm => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let pdm = random_pdm(
                &mut rng,
                args.agents,
                args.items,
                args.max_choices,
                &(args.min..=args.max),
            )?;
            io::pdm_to_json(&pdm)
        }
    };
    emit(args.out.as_deref(), &doc)?;
    Ok(Status::Ok)
}

fn status_of(err: &anyhow::Error) -> Status {
    match err.downcast_ref::<Error>() {
        Some(Error::Internal(_)) => Status::Internal,
        _ => Status::Input,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Input as u8 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Check(a) => check(a),
        Command::Solve(a) => solve(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Audit(a) => audit(a),
        Command::Gen(a) => generate(a),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(status_of(&e) as u8)
        }
    }
}

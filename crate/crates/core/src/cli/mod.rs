//! The `clonelab` command line.
//!
//! Every command prints one JSON document (or an aligned table with
//! `--format table`) to the output stream and diagnostics to the error
//! stream. Exit codes: 0 success, 1 a check failed, 2 usage or input error,
//! 3 search budget exhausted.

pub mod checks;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value as Json};

use crate::clone::{commutant, generate_clone_with, GeneratorSet, SearchOptions};
use crate::error::{parameter, structural, Error, Result};
use crate::matrix::RigMatrix;
use crate::optable::OpTable;
use crate::ordered::{
    affine_extension_check, dadic_arith, order_unit_exponent, w_of_phi, DadicFraction, DadicOp,
    DadicOutcome, ExtensionVerdict, PreorderedRing, SampledMap,
};
use crate::par::Execution;
use crate::rig::{validate_rig, FiniteRig, RigHandle, Value};
use crate::theories::{theory_generators, TheoryName};

use checks::{run_suite, Suite};
use render::{render, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "clonelab", version, about = "Clones, commutants and matrix theories over finite rigs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the rig axioms for a named rig or an explicit table.
    RigValidate {
        /// A rig name such as bool2, zmod4 or ut2.
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        rig: Option<String>,
        /// A rig table as inline JSON or a file path.
        #[arg(long)]
        table: Option<String>,
    },
    /// First (default) or second Kronecker product of two matrices.
    Kron {
        #[arg(long)]
        rig: String,
        /// Entries as a JSON array of rows, inline or in a file.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        second: bool,
    },
    /// Operations of one arity commuting with a generator set.
    Commutant(OpsArgs),
    /// The arity slice of the clone generated by a generator set.
    CloneGen(OpsArgs),
    /// Run a built-in check suite.
    Check {
        #[command(subcommand)]
        suite: CheckCommand,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Test whether sampled values of a map on the positive part are affine.
    AffineExt {
        /// int, dadicD or a finite ring name.
        #[arg(long)]
        rig: String,
        /// Weight vector w_0,...,w_n: the map is sampled from w_0 + sum x_i w_i.
        #[arg(long, conflicts_with_all = ["at_zero", "at_basis"])]
        w: Option<String>,
        /// phi(0).
        #[arg(long, required_unless_present = "w")]
        at_zero: Option<String>,
        /// phi(b_1),...,phi(b_n), comma separated.
        #[arg(long, default_value = "")]
        at_basis: String,
        /// A sample point "x_1,...,x_n=phi(x)" (just "x_1,...,x_n" with --w).
        #[arg(long = "probe")]
        probes: Vec<String>,
    },
    /// Exact d-adic arithmetic.
    Dadic {
        #[arg(value_enum)]
        op: DadicCommand,
        /// Operands as "p/d^e"; "p/q" and bare integers need --base.
        operands: Vec<String>,
        #[arg(long)]
        base: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct OpsArgs {
    /// Default rig for theory names without "@rig".
    #[arg(long)]
    rig: Option<String>,
    /// A theory name, a JSON list of tables, or a file holding such a list.
    #[arg(long)]
    gens: String,
    #[arg(long)]
    arity: usize,
    /// Carrier size for an empty table list.
    #[arg(long)]
    carrier: Option<usize>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Node budget; defaults to CLONELAB_BUDGET or 10^8.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Run without worker threads.
    #[arg(long, global = true)]
    sequential: bool,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        let mut opts = SearchOptions::default();
        if let Some(b) = self.budget {
            opts.budget = b;
        }
        if self.sequential {
            opts.execution = Execution::Sequential;
        }
        opts
    }
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    BalancedSlat,
    UslatTop,
    RingAffine {
        #[arg(long, default_value_t = 3)]
        modulus: u64,
    },
    ModulesMutual {
        #[arg(long, default_value_t = 3)]
        modulus: u64,
    },
    Saturation,
    DadicIdentity {
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long, default_value_t = 10)]
        max_m: u64,
    },
    /// Two named theories are each other's commutant up to an arity.
    Mutual {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DadicCommand {
    Add,
    Mul,
    Neg,
    Leq,
    IsPositive,
    /// Least e with x <= d^e.
    OrderUnit,
}

/// A result document plus the exit code it carries.
struct Outcome {
    code: i32,
    doc: Json,
    table: Table,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let text = render(cli.format, &outcome.doc, &outcome.table);
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "clonelab: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn document(command: &str, body: Json) -> Json {
    let mut doc = json!({ "schema": SCHEMA, "command": command });
    if let (Some(d), Json::Object(b)) = (doc.as_object_mut(), body) {
        d.extend(b);
    }
    doc
}

/// Inline JSON when the text starts like JSON, otherwise the contents of the
/// named file.
fn json_input(text: &str) -> Result<Json> {
    let trimmed = text.trim_start();
    let raw = if trimmed.starts_with(['[', '{']) {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| parameter(format!("cannot read {text}: {e}")))?
    };
    serde_json::from_str(&raw).map_err(|e| structural(format!("invalid JSON: {e}")))
}

fn resolve_gens(args: &OpsArgs) -> Result<GeneratorSet> {
    let rig = args.rig.as_deref().map(RigHandle::by_name).transpose()?;
    let source = args.gens.trim();
    let looks_like_json = source.starts_with('[') || Path::new(source).is_file();
    if !looks_like_json {
        let gens = theory_generators(&TheoryName::parse(source, rig.as_ref())?)?;
        if let Some(k) = args.carrier.filter(|&k| k != gens.carrier_size()) {
            return Err(structural(format!("--carrier {k} does not match {source}")));
        }
        return Ok(gens);
    }
    let raw: Vec<RawTable> = serde_json::from_value(json_input(source)?)
        .map_err(|e| structural(format!("invalid operation table: {e}")))?;
    let carrier = args
        .carrier
        .or_else(|| rig.as_ref().and_then(RigHandle::size))
        .or_else(|| raw.iter().find_map(RawTable::carrier_hint))
        .ok_or_else(|| parameter("cannot tell the carrier size: give --carrier or --rig"))?;
    let ops = raw
        .into_iter()
        .map(|t| OpTable::new(t.carrier.unwrap_or(carrier), t.arity, t.outputs))
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(carrier, ops)
}

/// A table as accepted on input; `carrier` may be left out.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    carrier: Option<usize>,
    arity: usize,
    outputs: Vec<usize>,
}

impl RawTable {
    /// The explicit carrier, else the `k` with `k^arity` equal to the length.
    fn carrier_hint(&self) -> Option<usize> {
        if self.carrier.is_some() {
            return self.carrier;
        }
        let len = self.outputs.len();
        let n = u32::try_from(self.arity).ok().filter(|&n| n > 0)?;
        (1..=len).find(|k| k.checked_pow(n) == Some(len))
    }
}

fn op_json(op: &OpTable) -> Json {
    json!({ "carrier": op.carrier_size(), "arity": op.arity(), "outputs": op.outputs() })
}

fn ops_table(ops: &[OpTable]) -> Table {
    let mut t = Table::new(&["#", "outputs"]);
    for (i, op) in ops.iter().enumerate() {
        t.row(vec![i.to_string(), op.to_string()]);
    }
    t
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::RigValidate { rig, table } => rig_validate(rig.as_deref(), table.as_deref()),
        Command::Kron { rig, x, y, second } => kron(rig, x, y, *second),
        Command::Commutant(args) => {
            let gens = resolve_gens(args)?;
            let found = commutant(&gens, args.arity, &args.search.options())?;
            let ops = found.slice.ops();
            let doc = document(
                "commutant",
                json!({
                    "carrier": gens.carrier_size(),
                    "arity": args.arity,
                    "generators": gens.generators().iter().map(op_json).collect::<Vec<_>>(),
                    "ops": ops.iter().map(OpTable::outputs).collect::<Vec<_>>(),
                    "count": ops.len(),
                    "visited": found.visited,
                }),
            );
            Ok(Outcome { code: EXIT_OK, doc, table: ops_table(ops) })
        }
        Command::CloneGen(args) => {
            let gens = resolve_gens(args)?;
            let slice = generate_clone_with(&gens, args.arity, &args.search.options())?;
            let doc = document(
                "clone-gen",
                json!({
                    "carrier": gens.carrier_size(),
                    "arity": args.arity,
                    "generators": gens.generators().iter().map(op_json).collect::<Vec<_>>(),
                    "ops": slice.ops().iter().map(OpTable::outputs).collect::<Vec<_>>(),
                    "count": slice.len(),
                }),
            );
            Ok(Outcome { code: EXIT_OK, doc, table: ops_table(slice.ops()) })
        }
        Command::Check { suite, search } => check(suite, &search.options()),
        Command::AffineExt { rig, w, at_zero, at_basis, probes } => {
            affine_ext(rig, w.as_deref(), at_zero.as_deref(), at_basis, probes)
        }
        Command::Dadic { op, operands, base } => dadic(*op, operands, *base),
    }
}

fn rig_validate(name: Option<&str>, table: Option<&str>) -> Result<Outcome> {
    let (label, candidate) = match (name, table) {
        (Some(n), _) => {
            let rig = RigHandle::by_name(n)?;
            let t = rig
                .to_finite_rig()
                .ok_or_else(|| parameter(format!("{n} has no finite table to validate")))?;
            (n.to_string(), t)
        }
        (None, Some(t)) => {
            let t: FiniteRig = serde_json::from_value(json_input(t)?)
                .map_err(|e| structural(format!("invalid rig table: {e}")))?;
            ("table".to_string(), t)
        }
        (None, None) => return Err(parameter("give --rig or --table")),
    };
    let report = validate_rig(&candidate)?;
    let valid = report.is_ok();
    let (is_ring, is_commutative) = if valid {
        let rig = RigHandle::from_finite(&label, &candidate)?;
        (Some(rig.is_ring()), Some(rig.is_commutative()))
    } else {
        (None, None)
    };
    let doc = document(
        "rig-validate",
        json!({
            "rig": label,
            "size": candidate.size,
            "valid": valid,
            "is_ring": is_ring,
            "is_commutative": is_commutative,
            "violations": report.violations,
        }),
    );
    let mut table = Table::new(&["axiom", "witness"]);
    for v in &report.violations {
        table.row(vec![v.message.clone(), format!("{:?}", v.witness)]);
    }
    if valid {
        table.row(vec!["all axioms hold".into(), String::new()]);
    }
    Ok(Outcome { code: if valid { EXIT_OK } else { EXIT_CHECK_FAILED }, doc, table })
}

fn kron(rig: &str, x: &str, y: &str, second: bool) -> Result<Outcome> {
    let rig = RigHandle::by_name(rig)?;
    let x = RigMatrix::entries_from_json(&rig, &json_input(x)?)?;
    let y = RigMatrix::entries_from_json(&rig, &json_input(y)?)?;
    let k = if second { x.kron_second(&y)? } else { x.kron_first(&y)? };
    let doc = document(
        "kron",
        json!({
            "rig": rig.name(),
            "product": if second { "second" } else { "first" },
            "rows": k.rows(),
            "cols": k.cols(),
            "entries": k.entries_json(),
        }),
    );
    let mut table = Table::new(&[]);
    for i in 0..k.rows() {
        table.row(k.row(i).iter().map(ToString::to_string).collect());
    }
    Ok(Outcome { code: EXIT_OK, doc, table })
}

fn check(suite: &CheckCommand, opts: &SearchOptions) -> Result<Outcome> {
    let suite = match suite {
        CheckCommand::BalancedSlat => Suite::BalancedSlat,
        CheckCommand::UslatTop => Suite::UslatTop,
        CheckCommand::RingAffine { modulus } => Suite::RingAffine { modulus: *modulus },
        CheckCommand::ModulesMutual { modulus } => Suite::ModulesMutual { modulus: *modulus },
        CheckCommand::Saturation => Suite::Saturation,
        CheckCommand::DadicIdentity { base, max_m } => Suite::DadicIdentity { base: *base, max_m: *max_m },
        CheckCommand::Mutual { left, right, max_arity } => Suite::Mutual {
            left: left.clone(),
            right: right.clone(),
            max_arity: *max_arity,
        },
        CheckCommand::All => Suite::All,
    };
    let report = run_suite(&suite, opts)?;
    let code = if report.is_exhausted() {
        EXIT_BUDGET
    } else if report.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    let table = render::check_table(&report);
    let body = serde_json::to_value(&report).expect("plain data");
    Ok(Outcome { code, doc: document("check", body), table })
}

fn split_values(rig: &RigHandle, s: &str) -> Result<Vec<Value>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| rig.parse_value(t))
        .collect()
}

fn affine_ext(rig: &str, w: Option<&str>, at_zero: Option<&str>, at_basis: &str, probes: &[String]) -> Result<Outcome> {
    let rig = RigHandle::by_name(rig)?;
    let pr = PreorderedRing::natural(&rig)?;
    let phi = match (w, at_zero) {
        (Some(w), _) => {
            let w = split_values(&rig, w)?;
            let points = probes.iter().map(|p| split_values(&rig, p)).collect::<Result<Vec<_>>>()?;
            SampledMap::restrict(&pr, &w, points)?
        }
        (None, Some(z)) => {
            let samples = probes
                .iter()
                .map(|p| {
                    let (x, y) = p
                        .split_once('=')
                        .ok_or_else(|| parameter(format!("probe {p:?} must look like \"x_1,...,x_n=value\"")))?;
                    Ok((split_values(&rig, x)?, rig.parse_value(y)?))
                })
                .collect::<Result<Vec<_>>>()?;
            SampledMap::new(&pr, rig.parse_value(z)?, split_values(&rig, at_basis)?, samples)?
        }
        (None, None) => return Err(parameter("give --w or --at-zero")),
    };
    let verdict = affine_extension_check(&pr, &phi)?;
    let vals = |v: &[Value]| v.iter().map(|x| rig.value_to_json(x)).collect::<Vec<_>>();
    let weights = w_of_phi(&rig, &phi)?;
    let mut body = json!({
        "rig": rig.name(),
        "arity": phi.arity(),
        "w": vals(&weights),
        "probes": phi.probes().len(),
        "known_properties": pr.known_properties(),
    });
    let mut table = Table::new(&["field", "value"]);
    table.row(vec!["w".into(), weights.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")]);
    let code = match &verdict {
        ExtensionVerdict::HoldsOnProbes => {
            body["verdict"] = json!("holds_on_probes");
            table.row(vec!["verdict".into(), "holds on probes".into()]);
            EXIT_OK
        }
        ExtensionVerdict::Violated { witness, lhs, rhs } => {
            body["verdict"] = json!("violated");
            body["witness"] = json!(vals(witness));
            body["lhs"] = rig.value_to_json(lhs);
            body["rhs"] = rig.value_to_json(rhs);
            table.row(vec!["verdict".into(), "violated".into()]);
            let shown = witness.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            table.row(vec!["witness".into(), shown]);
            table.row(vec!["lhs".into(), lhs.to_string()]);
            table.row(vec!["rhs".into(), rhs.to_string()]);
            EXIT_CHECK_FAILED
        }
    };
    Ok(Outcome { code, doc: document("affine-ext", body), table })
}

fn dadic(op: DadicCommand, operands: &[String], base: Option<u64>) -> Result<Outcome> {
    let parse = |s: &String| match base {
        Some(d) => DadicFraction::parse_with_base(s, d),
        None => s.parse::<DadicFraction>(),
    };
    let args = operands.iter().map(parse).collect::<Result<Vec<_>>>()?;
    let want = match op {
        DadicCommand::Add | DadicCommand::Mul | DadicCommand::Leq => 2,
        _ => 1,
    };
    if args.len() != want {
        return Err(parameter(format!("{op:?} takes {want} operand(s), got {}", args.len())));
    }
    let name = op.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let result = if op == DadicCommand::OrderUnit {
        json!(order_unit_exponent(&args[0])?)
    } else {
        let dop = match op {
            DadicCommand::Add => DadicOp::Add,
            DadicCommand::Mul => DadicOp::Mul,
            DadicCommand::Neg => DadicOp::Neg,
            DadicCommand::Leq => DadicOp::Leq,
            DadicCommand::IsPositive => DadicOp::IsPositive,
            DadicCommand::OrderUnit => unreachable!("handled above"),
        };
        match dadic_arith(dop, &args[0], args.get(1))? {
            DadicOutcome::Value(v) => json!(v.to_string()),
            DadicOutcome::Bool(b) => json!(b),
        }
    };
    let mut table = Table::new(&["op", "operands", "result"]);
    let shown = operands.join(" ");
    let result_text = match &result {
        Json::String(s) => s.clone(),
        other => other.to_string(),
    };
    table.row(vec![name.clone(), shown, result_text]);
    let doc = document(
        "dadic",
        json!({
            "op": name,
            "operands": args.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "result": result,
        }),
    );
    Ok(Outcome { code: EXIT_OK, doc, table })
}

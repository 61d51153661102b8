//! The `sandpile` command line.
//!
//! Every subcommand takes one graph source, either `--family <spec>` or
//! `--graph <file>`, and prints JSON (default) or plain text. Configurations
//! are comma-separated integers in the graph's stored non-sink vertex order,
//! which JSON output always repeats under `"vertices"`.
//!
//! Exit codes: 0 on success, 1 for I/O and parse errors, 2 for domain errors
//! such as an invalid graph or a configuration of the wrong length. Errors
//! are printed to standard error as `{"error":{"kind":..,"message":..}}`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use sandpile::duality::{canonical_dual_point, check_weak_duality, relaxation_optimum, verify_cone_identity};
use sandpile::dynamics::TopplePolicy;
use sandpile::graph::{complete, cycle, path, BaseGraph, GraphError};
use sandpile::ilp::models::{solve_recurrent, solve_stabilization};
use sandpile::ilp::Sense;
use sandpile::{Configuration, Sandpile, SinkedMultigraph};

#[derive(Debug, Parser)]
#[command(name = "sandpile", version, about = "Sandpile groups via chip-firing and integer programming")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilize a configuration; `--sense` also solves the stabilization program.
    Stabilize(StabilizeArgs),
    /// The identity element.
    Identity(GraphArgs),
    /// Recurrent representative of a chip vector (entries may be negative).
    Recurrent(ConfigArgs),
    /// Order of the class of a chip vector.
    Order(ConfigArgs),
    /// Invariant factors and group order.
    Group(GraphArgs),
    /// Recurrent representatives and orders of the unit vectors.
    Generators(GraphArgs),
    /// Superstable representative of a configuration.
    Superstable(ConfigArgs),
    /// Energy of a configuration.
    Energy(ConfigArgs),
    /// Weak-duality certificate for the identity relaxation.
    VerifyDual(VerifyDualArgs),
    /// Check that `r·1` is the identity of the cone over an r-regular base.
    ConeIdentity(ConeArgs),
    /// Recurrents, firing vectors and orders of `0, e_1, .., e_n`.
    Table1(GraphArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SenseArg {
    Min,
    Max,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// `cycle:<n>`, `complete:<n>`, `path:<n>` or `cone:<base>`.
    #[arg(long)]
    pub family: Option<String>,
    /// Graph file (JSON).
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated integers.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub config: Vec<i64>,
}

#[derive(Debug, Args)]
pub struct StabilizeArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Print every toppling (lowest-index-first order).
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum)]
    pub sense: Option<SenseArg>,
}

#[derive(Debug, Args)]
pub struct VerifyDualArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Primal point, `n` comma-separated rationals. Defaults to the optimum.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub primal: Option<Vec<String>>,
    /// Dual point, `2n` comma-separated rationals. Defaults to the optimum.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub dual: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    /// `cycle:<n>`, `complete:<n>`, `petersen` or a base graph file.
    #[arg(long)]
    pub base: String,
    /// Regularity degree; defaults to the base's common degree.
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Parse(String),
    Domain(sandpile::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Domain(_) => "domain",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Parse(m) => m.clone(),
            CliError::Domain(e) => e.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.message() } })
    }
}

impl From<sandpile::Error> for CliError {
    fn from(e: sandpile::Error) -> Self {
        match e {
            sandpile::Error::Graph(GraphError::Format(m)) => CliError::Parse(m),
            e => CliError::Domain(e),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        sandpile::Error::from(e).into()
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() },
        Err(e) => return failure(CliError::Usage(e.to_string().trim_end().to_string())),
    };
    match execute(&cli.command) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{}\n", e.to_json()) }
}

/// Builds a graph from a family spec: `cycle:<n>`, `complete:<n>`,
/// `path:<n>`, or `cone:<base>` where `<base>` is `cycle:<n>`,
/// `complete:<n>`, `petersen` or a path to a base graph file.
pub fn parse_family(spec: &str) -> Result<SinkedMultigraph, CliError> {
    if let Some(base) = spec.strip_prefix("cone:") {
        return Ok(parse_base(base)?.cone());
    }
    let (name, n) = name_and_size(spec)?;
    let g = match name {
        "cycle" => cycle(n),
        "complete" => complete(n),
        "path" => path(n),
        _ => return Err(bad_spec(spec)),
    };
    Ok(g?)
}

fn bad_spec(spec: &str) -> CliError {
    CliError::Parse(format!("bad family spec {spec:?}; expected cycle:<n>, complete:<n>, path:<n> or cone:<base>"))
}

fn name_and_size(spec: &str) -> Result<(&str, usize), CliError> {
    let (name, n) = spec.split_once(':').ok_or_else(|| bad_spec(spec))?;
    let n = n.parse().map_err(|_| bad_spec(spec))?;
    Ok((name, n))
}

/// `cycle:<n>`, `complete:<n>`, `petersen`, or a base graph file.
pub fn parse_base(spec: &str) -> Result<BaseGraph, CliError> {
    match spec.split_once(':') {
        Some(("cycle", _)) | Some(("complete", _)) => {
            let (name, n) = name_and_size(spec)?;
            Ok(if name == "cycle" { BaseGraph::cycle(n)? } else { BaseGraph::complete(n)? })
        }
        _ if spec == "petersen" => Ok(BaseGraph::petersen()),
        _ => Ok(BaseGraph::from_json(&read(Path::new(spec))?)?),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load(source: &GraphSource) -> Result<Sandpile, CliError> {
    let g = match (&source.family, &source.graph) {
        (Some(spec), None) => parse_family(spec)?,
        (None, Some(file)) => SinkedMultigraph::from_json(&read(file)?)?,
        _ => return Err(CliError::Usage("give exactly one of --family and --graph".into())),
    };
    Ok(Sandpile::new(g))
}

fn big(v: &BigInt) -> Value {
    match u64::try_from(v) {
        Ok(u) => json!(u),
        Err(_) => json!(v.to_string()),
    }
}

fn tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn header(sp: &Sandpile) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("vertices".into(), json!(sp.graph().non_sink_labels()));
    m.insert("sink".into(), json!(sp.graph().sink()));
    m
}

fn text_header(sp: &Sandpile) -> String {
    format!("vertices: {}\nsink: {}\n", sp.graph().non_sink_labels().join(" "), sp.graph().sink())
}

fn emit<K: Into<String>>(
    format: Format,
    sp: &Sandpile,
    fields: impl IntoIterator<Item = (K, Value)>,
    text: String,
) -> String {
    match format {
        Format::Json => {
            let mut m = header(sp);
            for (k, v) in fields {
                m.insert(k.into(), v);
            }
            format!("{}\n", serde_json::to_string_pretty(&Value::Object(m)).expect("serializable"))
        }
        Format::Text => text_header(sp) + &text,
    }
}

fn parse_rationals(v: &[String]) -> Result<Vec<BigRational>, CliError> {
    v.iter()
        .map(|s| BigRational::from_str(s.trim()).map_err(|_| CliError::Parse(format!("bad rational {s:?}"))))
        .collect()
}

fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Stabilize(a) => stabilize(a),
        Command::Identity(a) => {
            let sp = load(&a.source)?;
            let e = sp.identity()?;
            Ok(emit(a.format, &sp, vec![("identity", json!(e))], format!("identity: {e}\n")))
        }
        Command::Recurrent(a) => {
            let sp = load(&a.graph.source)?;
            let c = sp.chip_vector(a.config.clone())?;
            let r = sp.recurrent_representative(&c)?;
            let fields = vec![("config", json!(c)), ("recurrent", json!(r))];
            Ok(emit(a.graph.format, &sp, fields, format!("config: {c}\nrecurrent: {r}\n")))
        }
        Command::Order(a) => {
            let sp = load(&a.graph.source)?;
            let c = sp.chip_vector(a.config.clone())?;
            let order = sp.order(&c);
            let fields = vec![("config", json!(c)), ("order", big(&order))];
            Ok(emit(a.graph.format, &sp, fields, format!("config: {c}\norder: {order}\n")))
        }
        Command::Group(a) => {
            let sp = load(&a.source)?;
            let s = sp.group_structure();
            let factors: Vec<Value> = s.invariant_factors.iter().map(big).collect();
            let names: Vec<String> = s.invariant_factors.iter().map(|f| format!("Z{f}")).collect();
            let text = format!(
                "invariant_factors: {}\ngroup_order: {}\nstructure: {}\n",
                s.invariant_factors.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                s.group_order,
                if names.is_empty() { "trivial".to_string() } else { names.join(" x ") }
            );
            Ok(emit(a.format, &sp, vec![("invariant_factors", json!(factors)), ("group_order", big(&s.group_order))], text))
        }
        Command::Generators(a) => {
            let sp = load(&a.source)?;
            let gens = sp.generators()?;
            let mut text = String::new();
            let rows: Vec<Value> = gens
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let label = sp.graph().non_sink_label(i);
                    writeln!(text, "e_{label}: recurrent {} order {}", g.recurrent, g.order).unwrap();
                    json!({ "vertex": label, "recurrent": g.recurrent, "order": big(&g.order) })
                })
                .collect();
            Ok(emit(a.format, &sp, vec![("generators", json!(rows))], text))
        }
        Command::Superstable(a) => {
            let sp = load(&a.graph.source)?;
            let c = sp.configuration(a.config.clone())?;
            let s = sp.superstable_representative(&c)?;
            let fields = vec![("config", json!(c)), ("superstable", json!(s))];
            Ok(emit(a.graph.format, &sp, fields, format!("config: {c}\nsuperstable: {s}\n")))
        }
        Command::Energy(a) => {
            let sp = load(&a.graph.source)?;
            let c = sp.configuration(a.config.clone())?;
            let e = sp.energy(&c);
            let mut fields = vec![("config", json!(c)), ("energy", json!(e.to_string()))];
            let mut text = format!("config: {c}\nenergy: {e}\n");
            if !sp.graph().is_undirected() {
                fields.push(("convention", json!("column")));
                text.push_str("convention: column (directed graph)\n");
            }
            Ok(emit(a.graph.format, &sp, fields, text))
        }
        Command::VerifyDual(a) => {
            let sp = load(&a.graph.source)?;
            let x = match &a.primal {
                Some(v) => parse_rationals(v)?,
                None => relaxation_optimum(&sp),
            };
            let y = match &a.dual {
                Some(v) => parse_rationals(v)?,
                None => canonical_dual_point(&sp),
            };
            let cert = check_weak_duality(&sp, &x, &y)?;
            let text = format!(
                "primal_obj: {}\ndual_obj: {}\nverdict: {}\n",
                cert.primal_objective,
                cert.dual_objective,
                cert.verdict.as_str()
            );
            Ok(emit(a.graph.format, &sp, vec![("certificate", cert.to_json())], text))
        }
        Command::ConeIdentity(a) => {
            let base = parse_base(&a.base)?;
            let r = match a.r {
                Some(r) => r,
                None => base.regular_degree().ok_or_else(|| {
                    let d = base.degrees();
                    let (v, deg) = d.iter().enumerate().find(|&(_, x)| *x != d[0]).expect("irregular base");
                    CliError::Domain(sandpile::Error::NotRegular {
                        expected: d[0],
                        vertex: base.vertices()[v].clone(),
                        degree: *deg,
                    })
                })?,
            };
            let report = verify_cone_identity(&base, r)?;
            let sp = Sandpile::new(base.cone());
            let text = format!(
                "r: {}\nn: {}\nlaplacian_fixes_ones: {}\nclosed_form: {}\nilp_identity: {}\ndynamics_identity: {}\nprimal_obj: {}\ndual_obj: {}\nverdict: {}\nall_agree: {}\n",
                report.r,
                report.n,
                report.laplacian_fixes_ones,
                report.closed_form,
                report.ilp_identity,
                report.dynamics_identity,
                report.certificate.primal_objective,
                report.certificate.dual_objective,
                report.certificate.verdict.as_str(),
                report.all_agree()
            );
            let Value::Object(fields) = report.to_json() else { unreachable!("report is an object") };
            Ok(emit(a.format, &sp, fields, text))
        }
        Command::Table1(a) => table1(a),
    }
}

fn stabilize(a: &StabilizeArgs) -> Result<String, CliError> {
    let sp = load(&a.config.graph.source)?;
    let c = sp.configuration(a.config.config.clone())?;
    let policy = if a.trace { TopplePolicy::LowestIndexFirst } else { TopplePolicy::default() };
    let r = sp.stabilize_with(&c, policy, a.trace);
    let mut fields = vec![
        ("config", json!(c)),
        ("stable", json!(r.stable)),
        ("odometer", json!(r.odometer)),
        ("avalanche_size", json!(r.avalanche_size)),
    ];
    let mut text = String::new();
    writeln!(text, "config: {c}").unwrap();
    if let Some(trace) = &r.trace {
        let steps: Vec<Value> = trace
            .iter()
            .map(|s| json!({ "step": s.step, "vertex": sp.graph().non_sink_label(s.vertex), "before": s.before }))
            .collect();
        fields.push(("trace", json!(steps)));
        for s in trace {
            writeln!(text, "{}", s.display(&sp)).unwrap();
        }
    }
    writeln!(text, "stable: {}\nodometer: {}\navalanche_size: {}", r.stable, r.odometer, r.avalanche_size).unwrap();
    if let Some(sense) = a.sense {
        let (sense, name) = match sense {
            SenseArg::Min => (Sense::Minimize, "min"),
            SenseArg::Max => (Sense::Maximize, "max"),
        };
        let (x, stable, sol) = solve_stabilization(&sp, &c, sense)?;
        fields.push((
            "program",
            json!({ "sense": name, "x": x, "stable": stable, "node_count": sol.node_count }),
        ));
        writeln!(text, "program ({name}): x {x} stable {stable}").unwrap();
    }
    Ok(emit(a.config.graph.format, &sp, fields, text))
}

fn table1(a: &GraphArgs) -> Result<String, CliError> {
    let sp = load(&a.source)?;
    let n = sp.len();
    let inputs: Vec<Configuration> =
        std::iter::once(Configuration::zeros(n)).chain((0..n).map(|i| Configuration::unit(n, i))).collect();
    let mut rows = Vec::with_capacity(inputs.len());
    for c in &inputs {
        let sol = solve_recurrent(&sp, c)?;
        let order = sp.order(&c.to_chips());
        let ilp_order = sp.order_ilp(&c.to_chips())?;
        if ilp_order != order {
            return Err(CliError::Domain(sandpile::Error::CrossCheckMismatch {
                what: "order",
                left: ilp_order.to_string(),
                right: order.to_string(),
            }));
        }
        rows.push((c.clone(), sol.firing, sol.recurrent, order));
    }
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|(c, x, r, o)| [tuple(c), tuple(x), tuple(r), o.to_string()])
        .collect();
    let titles = ["c", "x*", "c + x*Δq", "order"];
    let widths: Vec<usize> =
        (0..4).map(|k| cells.iter().map(|r| r[k].chars().count()).chain([titles[k].chars().count()]).max().unwrap()).collect();
    let line = |row: [&str; 4]| {
        let padded: Vec<String> =
            row.iter().zip(&widths).map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
        format!("{}\n", padded.join(" | ").trim_end())
    };
    let mut text = line(titles);
    text.push_str(&line([&"-".repeat(widths[0]), &"-".repeat(widths[1]), &"-".repeat(widths[2]), &"-".repeat(widths[3])]));
    for r in &cells {
        text.push_str(&line([&r[0], &r[1], &r[2], &r[3]]));
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|(c, x, r, o)| json!({ "c": c, "x": x, "recurrent": r, "order": big(o) }))
        .collect();
    Ok(emit(a.format, &sp, vec![("rows", json!(json_rows))], text))
}

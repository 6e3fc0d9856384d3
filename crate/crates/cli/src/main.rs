use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paraunitary::catalog;
use paraunitary::constructors::{specialize_hadamard, HadamardReport};
use paraunitary::idempotents::{from_orthogonal_basis, from_orthonormal_basis, group_set, verify_set, IdempotentSet};
use paraunitary::pipeline::{parse_group, parse_scaled_matrix, parse_scalar, Pipeline};
use paraunitary::random::{self, DEFAULT_SEED};
use paraunitary::{PolyMatrix, Ring, VerificationReport};
use serde_json::{json, Value as Json};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Lib(#[from] paraunitary::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

/// `true` when every check passed.
type Verdict = bool;

#[derive(Parser)]
#[command(name = "paraunitary", version, about = "Construct and verify paraunitary matrices exactly")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Coefficient ring for inputs that do not carry one.
    #[arg(long, global = true, value_enum, default_value_t = RingKind::Rational)]
    ring: RingKind,
    /// Conductor N of Q(zeta_N) when --ring cyclotomic.
    #[arg(long, global = true)]
    conductor: Option<u32>,
    /// Characteristic p when --ring prime.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Write the main result to this file as JSON.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingKind {
    Rational,
    Cyclotomic,
    Prime,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complete orthogonal set of symmetric idempotents.
    Idem {
        #[command(subcommand)]
        source: IdemSource,
    },
    /// Execute a pipeline file and verify every step.
    Build { pipeline: PathBuf },
    /// Check a matrix or set file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        values: Values,
    },
    /// Substitute unit-modulus values and report the Hadamard form.
    Specialize {
        file: PathBuf,
        #[command(flatten)]
        values: Values,
    },
    /// Determinant of a square matrix.
    Det { file: PathBuf },
    /// Rank of a scalar matrix, or the ranks of the members of a set.
    Rank { file: PathBuf },
    /// Run, list or diff the bundled examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum IdemSource {
    /// Primitive central idempotents of a built-in group, embedded as matrices.
    Group {
        #[arg(long)]
        family: String,
        #[arg(long)]
        order: Option<usize>,
        /// Rank k of the elementary abelian group C2^k.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Projections onto the rows of a basis file.
    Basis {
        #[arg(long)]
        vectors: PathBuf,
        /// Groups of 1-based row indices, like `1/2,3`.
        #[arg(long)]
        groups: Option<String>,
        /// Rows are orthogonal but not normalized.
        #[arg(long)]
        orthogonal: bool,
    },
    /// A random set drawn with --seed.
    Random {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Paraunitary,
    Pseudo,
    Hadamard,
    Idemset,
}

#[derive(Args)]
struct Values {
    /// Value given to every variable not set by --value.
    #[arg(long, default_value = "1")]
    all: String,
    /// Assignment like `x=E(3)`; may repeat.
    #[arg(long = "value")]
    values: Vec<String>,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Run entries and compare with the stored expectations.
    Run {
        #[arg(long)]
        id: Option<String>,
    },
    /// List entry ids and titles.
    List,
    /// Print only the differences from the stored expectations.
    Diff {
        #[arg(long)]
        id: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult<Verdict> {
    let g = &cli.global;
    match &cli.command {
        Command::Idem { source } => cmd_idem(g, source),
        Command::Build { pipeline } => cmd_build(g, pipeline),
        Command::Verify { file, mode, values } => cmd_verify(g, file, *mode, values),
        Command::Specialize { file, values } => {
            let report = specialize(g, &load_matrix(g, file)?, values)?;
            emit(g, &report.to_json(), &hadamard_text(&report))?;
            Ok(report.unitary && report.is_hadamard())
        }
        Command::Det { file } => {
            let d = load_matrix(g, file)?.determinant()?;
            emit(g, &json!({"det": d.to_string()}), &d.to_string())?;
            Ok(true)
        }
        Command::Rank { file } => {
            let v = read_json(file)?;
            let (value, text) = if v.get("members").is_some() {
                let ranks = IdempotentSet::from_json(&v)?.ranks()?;
                (json!({"ranks": ranks}), format!("{ranks:?}"))
            } else {
                let r = matrix_from_json(g, &v)?.rank()?;
                (json!({"rank": r}), r.to_string())
            };
            emit(g, &value, &text)?;
            Ok(true)
        }
        Command::Catalog { action } => cmd_catalog(g, action),
    }
}

/// Prints a line, ignoring a closed stdout such as a pipe into `head`.
fn say(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn ring(g: &Global) -> CliResult<Ring> {
    Ok(match g.ring {
        RingKind::Rational => Ring::rational(),
        RingKind::Cyclotomic => Ring::cyclotomic(
            g.conductor
                .ok_or_else(|| CliError::Usage("--ring cyclotomic needs --conductor".into()))?,
        )?,
        RingKind::Prime => {
            Ring::prime_field(g.prime.ok_or_else(|| CliError::Usage("--ring prime needs --prime".into()))?)?
        }
    })
}

/// Reads a JSON file; the `{"set": ...}` form printed by `idem` is unwrapped.
fn read_json(path: &Path) -> CliResult<Json> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let v: Json = serde_json::from_str(&text)?;
    Ok(match v.get("set") {
        Some(set) if set.get("members").is_some() => set.clone(),
        _ => v,
    })
}

/// A matrix file: the full form with `entries`, or `rows` with an optional `scale`
/// read in the ring named by the flags.
fn matrix_from_json(g: &Global, v: &Json) -> CliResult<PolyMatrix> {
    if v.get("entries").is_some() {
        Ok(PolyMatrix::from_json(v)?)
    } else if v.get("rows").is_some() {
        let r = match v.get("ring") {
            Some(r) => Ring::from_json(r)?,
            None => ring(g)?,
        };
        Ok(parse_scaled_matrix(v, &r)?)
    } else {
        Err(CliError::Usage("matrix file needs \"entries\" or \"rows\"".into()))
    }
}

fn load_matrix(g: &Global, path: &Path) -> CliResult<PolyMatrix> {
    matrix_from_json(g, &read_json(path)?)
}

/// Writes `value` to --out when given, then prints it in the chosen format.
fn emit(g: &Global, value: &Json, text: &str) -> CliResult<()> {
    emit_with_artifact(g, value, value, text)
}

/// Like [`emit`], but --out receives `artifact` instead of the printed value.
fn emit_with_artifact(g: &Global, value: &Json, artifact: &Json, text: &str) -> CliResult<()> {
    if let Some(path) = &g.out {
        let body = serde_json::to_string_pretty(artifact)? + "\n";
        fs::write(path, body).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    match g.format {
        Format::Json => say(&serde_json::to_string_pretty(value)?),
        Format::Text => say(text),
    }
    Ok(())
}

fn set_text(set: &IdempotentSet) -> String {
    set.labels()
        .iter()
        .zip(set.members())
        .map(|(l, m)| format!("{l} =\n{m}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses `1/2,3` into `[[0], [1, 2]]`.
fn parse_groups(text: &str) -> CliResult<Vec<Vec<usize>>> {
    text.split('/')
        .map(|group| {
            group
                .split(',')
                .map(|i| match i.trim().parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(CliError::Usage(format!("bad row index {i:?} in --groups"))),
                })
                .collect()
        })
        .collect()
}

fn cmd_idem(g: &Global, source: &IdemSource) -> CliResult<Verdict> {
    let set = match source {
        IdemSource::Group { family, order, rank } => {
            let mut group_desc = json!({"family": family});
            if let Some(o) = order {
                group_desc["order"] = json!(o);
            }
            if let Some(r) = rank {
                group_desc["rank"] = json!(r);
            }
            group_set(&parse_group(&group_desc)?, &ring(g)?)?
        }
        IdemSource::Basis {
            vectors,
            groups,
            orthogonal,
        } => {
            let v = read_json(vectors)?;
            let v = if v.is_array() { json!({ "rows": v }) } else { v };
            let basis = matrix_from_json(g, &v)?;
            let groups = groups.as_deref().map(parse_groups).transpose()?;
            if *orthogonal {
                from_orthogonal_basis(&basis, groups.as_deref())?
            } else {
                from_orthonormal_basis(&basis, groups.as_deref())?
            }
        }
        IdemSource::Random { n } => random::idempotent_set(&ring(g)?, *n, &mut random::rng(g.seed))?,
    };
    let report = verify_set(&set)?;
    let value = json!({"set": set.to_json(), "report": report.to_json()});
    emit_with_artifact(g, &value, &set.to_json(), &format!("{}\n{report}", set_text(&set)))?;
    Ok(report.passed)
}

fn cmd_build(g: &Global, path: &Path) -> CliResult<Verdict> {
    let v = read_json(path)?;
    // A catalog entry is also checked against its stored expectations.
    if v.get("pipeline").is_some() {
        let result = catalog::CatalogEntry::from_json(&v)?.run();
        let Some(outcome) = &result.outcome else {
            return Err(CliError::Usage(result.problems.join("; ")));
        };
        let mut text = bindings_text(outcome);
        for p in &result.problems {
            text.push_str(&format!("\nmismatch: {p}"));
        }
        emit(g, &outcome.to_json(), &text)?;
        return Ok(result.problems.is_empty());
    }
    let outcome = Pipeline::from_json(&v)?.execute()?;
    emit(g, &outcome.to_json(), &bindings_text(&outcome))?;
    Ok(outcome.all_verified())
}

fn bindings_text(outcome: &paraunitary::pipeline::Outcome) -> String {
    outcome
        .bindings
        .iter()
        .map(|(name, v)| format!("{name} =\n{v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn assignment(values: &Values, m: &PolyMatrix) -> CliResult<BTreeMap<String, paraunitary::Scalar>> {
    let ring = m.ring();
    let default = parse_scalar(&values.all, ring)?;
    let mut out: BTreeMap<_, _> = m.vars().names().iter().map(|v| (v.clone(), default.clone())).collect();
    for item in &values.values {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--value {item:?} is not name=value")))?;
        out.insert(name.trim().to_string(), parse_scalar(value.trim(), ring)?);
    }
    Ok(out)
}

fn specialize(_g: &Global, m: &PolyMatrix, values: &Values) -> CliResult<HadamardReport> {
    Ok(specialize_hadamard(m, &assignment(values, m)?)?)
}

fn hadamard_text(r: &HadamardReport) -> String {
    let butson = r.butson.map_or("none".to_string(), |q| q.to_string());
    format!(
        "H' = ({}) H =\n{}\nunitary: {}\nhadamard: {}\nbutson: {butson}",
        r.scale,
        r.hadamard,
        r.unitary,
        r.is_hadamard()
    )
}

fn cmd_verify(g: &Global, path: &Path, mode: Mode, values: &Values) -> CliResult<Verdict> {
    let v = read_json(path)?;
    let report = match mode {
        Mode::Idemset => {
            if v.get("members").is_none() {
                return Err(CliError::Usage("idemset mode needs a set file".into()));
            }
            verify_set(&IdempotentSet::from_json(&v)?)?
        }
        Mode::Paraunitary => matrix_from_json(g, &v)?.is_paraunitary()?,
        Mode::Pseudo => {
            let gram = matrix_from_json(g, &v)?.is_pseudo_paraunitary()?;
            let violations = match &gram {
                Some(_) => Vec::new(),
                None => vec!["W W^* is not a unit monomial times I".to_string()],
            };
            let mut r = VerificationReport::from_violations("pseudo-paraunitary", violations);
            if let Some(p) = gram {
                r.check = format!("pseudo-paraunitary with W W^* = ({p}) I");
            }
            r
        }
        Mode::Hadamard => {
            let h = specialize(g, &matrix_from_json(g, &v)?, values)?;
            let mut violations = Vec::new();
            if !h.unitary {
                violations.push("H H^* != I".to_string());
            }
            if !h.is_hadamard() {
                violations.push("H' is not a Hadamard matrix".to_string());
            }
            emit(g, &h.to_json(), &hadamard_text(&h))?;
            VerificationReport::from_violations("hadamard", violations)
        }
    };
    if !matches!(mode, Mode::Hadamard) || g.format == Format::Text {
        match g.format {
            Format::Json => say(&serde_json::to_string_pretty(&report.to_json())?),
            Format::Text => say(&report.to_string()),
        }
    }
    Ok(report.passed)
}

fn selected(id: &Option<String>) -> CliResult<Vec<catalog::CatalogEntry>> {
    Ok(match id {
        Some(id) => vec![catalog::entry(id)?],
        None => catalog::entries()?,
    })
}

fn cmd_catalog(g: &Global, action: &CatalogAction) -> CliResult<Verdict> {
    match action {
        CatalogAction::List => {
            let entries = catalog::entries()?;
            let value = json!(entries.iter().map(|e| json!({"id": e.id, "title": e.title})).collect::<Vec<_>>());
            let text = entries
                .iter()
                .map(|e| format!("{:<22} {}", e.id, e.title))
                .collect::<Vec<_>>()
                .join("\n");
            emit(g, &value, &text)?;
            Ok(true)
        }
        CatalogAction::Run { id } | CatalogAction::Diff { id } => {
            let diff_only = matches!(action, CatalogAction::Diff { .. });
            let entries = selected(id)?;
            let results = catalog::run_all(&entries);
            let mut lines = Vec::new();
            for r in &results {
                if r.passed() {
                    if !diff_only {
                        lines.push(format!("PASS {}", r.id));
                    }
                } else {
                    lines.push(format!("FAIL {}", r.id));
                    lines.extend(r.problems.iter().map(|p| format!("  {}", p.replace('\n', "\n  "))));
                }
            }
            let passed = results.iter().filter(|r| r.passed()).count();
            lines.push(format!("{passed}/{} entries match", results.len()));
            let value = json!(results
                .iter()
                .map(|r| json!({"id": r.id, "passed": r.passed(), "problems": r.problems}))
                .collect::<Vec<_>>());
            emit(g, &value, &lines.join("\n"))?;
            Ok(passed == results.len())
        }
    }
}

//! Command-line front end for the geometry library: runs statement checks
//! and censuses, classifies point-set files, sweeps the demonstration grid,
//! and lists the checkable statements.
//!
//! The binary is a pure shim over `abb-core`: every behaviour reachable here
//! is reachable from the library with identical results.  Text output is
//! human-oriented and unstable; JSON output is the contract.
//!
//! Exit status: `0` when every verdict passes, `1` when a check or census
//! fails, `2` on usage errors (including malformed input files), and `3`
//! when the parameters violate a statement's hypotheses or request an
//! unsupported exhaustive enumeration.

use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use abb_core::io::{point_set_from_file, FieldSpec, PointSetFile};
use abb_core::verify::{
    census, classify_point_set, demo, run_check, CensusKind, CheckParams, Classification, Mode,
    StatementId, Verdict,
};
use abb_core::{Error, Result};

/// Checks, censuses and classification for a plane modelled in a
/// higher-dimensional space over a subfield.
#[derive(Parser)]
#[command(name = "abb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one statement check and report its verdict.
    Verify(VerifyArgs),
    /// Count one configuration family and compare with its closed form.
    Census(CensusArgs),
    /// Decide which canonical object's image a point-set file is.
    Classify(ClassifyArgs),
    /// Run every supported check and census over the demonstration grid.
    Demo(DemoArgs),
    /// List the statement identifiers with their descriptions.
    List(ListArgs),
}

/// Field tower selection, either by parameters or by spec file.
#[derive(Args)]
struct FieldArgs {
    /// Field characteristic (a prime).
    #[arg(long, required_unless_present = "field_spec")]
    p: Option<u16>,

    /// Degree of the base field over the prime field.
    #[arg(long, default_value_t = 1)]
    h: u8,

    /// Degree of the top field over the base field.
    #[arg(long, required_unless_present = "field_spec")]
    n: Option<u8>,

    /// JSON field-spec file replacing the individual flags; only needed to
    /// override the default irreducible polynomial.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["p", "h", "n"])]
    field_spec: Option<PathBuf>,
}

impl FieldArgs {
    fn resolve(&self) -> Result<FieldSpec> {
        if let Some(path) = &self.field_spec {
            let raw = fs::read_to_string(path).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))
            })?;
            return Ok(serde_json::from_str(&raw)?);
        }
        let (Some(p), Some(n)) = (self.p, self.n) else {
            return Err(Error::InvalidArgument(
                "either --field-spec or both --p and --n are required".into(),
            ));
        };
        Ok(FieldSpec::new(p, self.h, n))
    }
}

/// Where and how reports are written.
#[derive(Args)]
struct OutputArgs {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

/// Output encoding of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-oriented lines; formatting is unstable.
    Text,
    /// Stable JSON documents.
    Json,
}

/// Exploration mode of a check.
#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    /// Seeded random configurations.
    Sample,
    /// Full enumeration of the configuration space.
    Exhaustive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sample => Mode::Sample,
            ModeArg::Exhaustive => Mode::Exhaustive,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Statement identifier (see `abb list`).
    #[arg(long, value_name = "ID")]
    stmt: String,

    #[command(flatten)]
    field: FieldArgs,

    /// Tower level, a divisor of n.
    #[arg(long, default_value_t = 1)]
    k: u8,

    /// How the configuration space is explored.
    #[arg(long, value_enum, default_value_t = ModeArg::Sample)]
    mode: ModeArg,

    /// Number of seeded configurations in sample mode.
    #[arg(long, default_value_t = 100)]
    samples: u32,

    /// Seed of the sampling streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CensusArgs {
    /// Census kind: external-triples, tangent-flats, scroll-curves,
    /// allowable-b, or tangent-per-subline.
    #[arg(long, value_name = "KIND")]
    kind: String,

    #[command(flatten)]
    field: FieldArgs,

    /// Tower level, a divisor of n.
    #[arg(long, default_value_t = 1)]
    k: u8,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Point-set file (JSON with a level and coordinate lists); `-` reads
    /// standard input.
    #[arg(long, value_name = "PATH")]
    input: String,

    #[command(flatten)]
    field: FieldArgs,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct DemoArgs {
    /// Seed shared by every sampled check of the grid.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ListArgs {
    #[command(flatten)]
    out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Hypothesis(_) | Error::Unsupported(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Verify(a) => run_verify(a),
        Command::Census(a) => run_census(a),
        Command::Classify(a) => run_classify(a),
        Command::Demo(a) => run_demo(a),
        Command::List(a) => run_list(a),
    }
}

fn run_verify(a: VerifyArgs) -> Result<ExitCode> {
    let statement: StatementId = a.stmt.parse()?;
    let params = CheckParams {
        statement,
        spec: a.field.resolve()?,
        k: a.k,
        mode: a.mode.into(),
        samples: a.samples,
        seed: a.seed,
    };
    let report = run_check(&params)?;
    let mut text = report.text_line();
    for w in &report.witnesses {
        text.push_str("\n  witness: ");
        text.push_str(&serde_json::to_string(w)?);
    }
    emit(&a.out, text, serde_json::to_string_pretty(&report)?)?;
    Ok(verdict_exit(report.verdict))
}

fn run_census(a: CensusArgs) -> Result<ExitCode> {
    let kind: CensusKind = a.kind.parse()?;
    let report = census(&a.field.resolve()?, kind, a.k)?;
    emit(
        &a.out,
        report.text_line(),
        serde_json::to_string_pretty(&report)?,
    )?;
    Ok(verdict_exit(report.verdict))
}

fn run_classify(a: ClassifyArgs) -> Result<ExitCode> {
    let spec = a.field.resolve()?;
    let ctx = spec.context()?;
    let raw = read_input(&a.input)?;
    let file: PointSetFile = serde_json::from_str(&raw)?;
    let points = point_set_from_file(&ctx, &file)?;
    let class = classify_point_set(&ctx, &points)?;
    emit(
        &a.out,
        classification_text(&class),
        serde_json::to_string_pretty(&class)?,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_demo(a: DemoArgs) -> Result<ExitCode> {
    let outcome = demo(a.seed)?;
    let all_pass = outcome.reports.iter().all(|r| r.verdict == Verdict::Pass)
        && outcome.censuses.iter().all(|c| c.verdict == Verdict::Pass);
    let mut lines: Vec<String> = Vec::new();
    lines.extend(outcome.reports.iter().map(|r| r.text_line()));
    lines.extend(outcome.censuses.iter().map(|c| c.text_line()));
    lines.push(format!(
        "demo seed={}: {} ({} checks, {} censuses)",
        a.seed,
        if all_pass { "pass" } else { "fail" },
        outcome.reports.len(),
        outcome.censuses.len()
    ));
    emit(&a.out, lines.join("\n"), serde_json::to_string_pretty(&outcome)?)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_list(a: ListArgs) -> Result<ExitCode> {
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    for id in StatementId::ALL {
        lines.push(format!("{:<6} {}", id.as_str(), id.description()));
        entries.push(serde_json::json!({
            "id": id.as_str(),
            "uses_k": id.uses_k(),
            "description": id.description(),
        }));
    }
    let json = serde_json::to_string_pretty(&serde_json::Value::Array(entries))?;
    emit(&a.out, lines.join("\n"), json)?;
    Ok(ExitCode::SUCCESS)
}

fn verdict_exit(v: Verdict) -> ExitCode {
    match v {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
    }
}

/// Reads the classification input, with `-` standing for standard input.
fn read_input(source: &str) -> Result<String> {
    if source == "-" {
        let mut raw = String::new();
        std::io::stdin()
            .read_to_string(&mut raw)
            .map_err(|e| Error::InvalidArgument(format!("cannot read standard input: {e}")))?;
        Ok(raw)
    } else {
        fs::read_to_string(source)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {source}: {e}")))
    }
}

/// One-line rendering of a classification: the class tag followed by its
/// scalar fields; the rebuild frame is available in the JSON form.
fn classification_text(class: &Classification) -> String {
    let value = serde_json::to_value(class).expect("classifications serialize");
    let serde_json::Value::Object(map) = value else {
        unreachable!("classifications serialize as tagged objects");
    };
    let tag = map
        .get("class")
        .and_then(|v| v.as_str())
        .unwrap_or("unclassified")
        .to_string();
    let rest: Vec<String> = map
        .iter()
        .filter(|(key, _)| key.as_str() != "class" && key.as_str() != "frame")
        .map(|(key, v)| format!("{key}={v}"))
        .collect();
    if rest.is_empty() {
        tag
    } else {
        format!("{tag} ({})", rest.join(", "))
    }
}

/// Writes one report body to the selected destination, newline-terminated.
/// A closed standard-output pipe ends the program quietly instead of
/// panicking mid-report.
fn emit(out: &OutputArgs, text: String, json: String) -> Result<()> {
    let body = match out.format {
        Format::Text => text,
        Format::Json => json,
    };
    match &out.output {
        Some(path) => fs::write(path, body + "\n").map_err(|e| {
            Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            use std::io::Write as _;
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.write_all(b"\n"))
            {
                Ok(()) => Ok(()),
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(Error::InvalidArgument(format!(
                    "cannot write to standard output: {e}"
                ))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn classification_text_reports_the_tag_and_scalars() {
        let class = Classification::TangentSubline {
            level: 2,
            statement: "T2.3".into(),
            frame: vec![],
        };
        let line = classification_text(&class);
        assert!(
            line.starts_with("tangent-subline"),
            "the class tag must lead the line, got {line}"
        );
        assert!(
            line.contains("level=2") && line.contains("statement=\"T2.3\""),
            "scalar fields must be listed, got {line}"
        );
        assert!(
            !line.contains("frame"),
            "the frame matrix must stay out of the text line, got {line}"
        );
        assert_eq!(
            classification_text(&Classification::Unclassified),
            "unclassified",
            "a bare tag renders without parentheses"
        );
    }

    #[test]
    fn mode_flags_map_onto_library_modes() {
        assert_eq!(Mode::from(ModeArg::Sample), Mode::Sample);
        assert_eq!(Mode::from(ModeArg::Exhaustive), Mode::Exhaustive);
    }
}

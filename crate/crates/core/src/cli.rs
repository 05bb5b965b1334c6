//! The `notemap` command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 the pairs admit no function (a node with
//! two targets, sets of different sizes, or an inconsistent pinned system), 3 verification
//! mismatches or score violations.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::expr::parse_function_expr;
use crate::harness::{run_all, ReportStatus};
use crate::mapping::{
    apply_to_set, interpolate, run_algorithm, FunctionAlgorithm, InterpolationProblem,
    MappingError, Pinning,
};
use crate::midi::{export_midi, MidiOptions};
use crate::pitch::{key_offset, parse_note_set, NoteSet};
use crate::progression::{
    derive_algorithm, realize_progression, resolve_template, ProgressionError,
};
use crate::rational::to_canonical_string;
use crate::score::{export_json, import_json, Score};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_A_FUNCTION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "notemap",
    version,
    about = "Exact polynomial maps between note-sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
    Midi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive the polynomial sending each element of --from to the matching element of --to.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Target degree; coefficients above the pairs' reach are set to zero.
        #[arg(long)]
        degree: Option<usize>,
        /// Coefficient indices forced to zero, e.g. `--pin 3` or `--pin 2,3`.
        #[arg(long, value_delimiter = ',')]
        pin: Option<Vec<usize>>,
    },
    /// Apply a polynomial to every element of a note-set.
    Apply {
        #[arg(long = "fn", allow_hyphen_values = true)]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Run a chain of functions (one expression per line, `#` comments) from a starting set.
    Run {
        #[arg(long)]
        algorithm: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize a progression template in a key and derive the functions between its chords.
    Progression {
        #[arg(long)]
        template: String,
        #[arg(long, conflicts_with = "offset")]
        key: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<i64>,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive every published polynomial and set and report disagreements.
    VerifyPaper {
        /// A case id, or a dotted prefix such as `S4` or `S4.CMAJ`.
        #[arg(long)]
        case: Option<String>,
        /// Succeed when every mismatch is a known erratum.
        #[arg(long)]
        expect_known_errata: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Check a score file's function results and realization events.
    Validate {
        #[arg(long)]
        score: PathBuf,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<MappingError> for Failure {
    fn from(e: MappingError) -> Self {
        let code = match e {
            MappingError::NotAFunction { .. }
            | MappingError::CardinalityMismatch { .. }
            | MappingError::OverconstrainedInconsistent { .. } => EXIT_NOT_A_FUNCTION,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ProgressionError> for Failure {
    fn from(e: ProgressionError) -> Self {
        match e {
            ProgressionError::Mapping(m) => m.into(),
            other => Failure::usage(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Solve {
            from,
            to,
            degree,
            pin,
        } => solve(&from, &to, degree, pin, out),
        Command::Apply { function, set } => apply(&function, &set, out),
        Command::Run {
            algorithm,
            set,
            emit,
            out: path,
        } => run_chain(&algorithm, &set, emit, path.as_deref(), out),
        Command::Progression {
            template,
            key,
            offset,
            emit,
            out: path,
        } => progression(
            &template,
            key.as_deref(),
            offset,
            emit,
            path.as_deref(),
            out,
        ),
        Command::VerifyPaper {
            case,
            expect_known_errata,
            format,
        } => verify(case.as_deref(), expect_known_errata, format, out),
        Command::Validate { score } => validate(&score, out),
    }
}

/// Accepts `{a, b}` or a bare `a, b`.
fn note_set(text: &str) -> Result<NoteSet, Failure> {
    let t = text.trim();
    let braced = if t.starts_with('{') {
        t.to_string()
    } else {
        format!("{{{t}}}")
    };
    parse_note_set(&braced).map_err(|e| Failure::usage(format!("note-set `{text}`: {e}")))
}

fn solve(
    from: &str,
    to: &str,
    degree: Option<usize>,
    pin: Option<Vec<usize>>,
    out: &mut dyn Write,
) -> Outcome {
    let (from, to) = (note_set(from)?, note_set(to)?);
    let mut pinning = match pin {
        Some(p) => Pinning::pin(p),
        None => Pinning::minimal(),
    };
    pinning.target_degree = degree;
    let f = interpolate(&InterpolationProblem::from_sets(&from, &to)?.with_pinning(pinning))?;
    writeln!(out, "f(n) = {f}")?;
    for (i, c) in f.coefficients().iter().enumerate() {
        writeln!(out, "c{i} = {}", to_canonical_string(c))?;
    }
    Ok(EXIT_OK)
}

fn apply(function: &str, set: &str, out: &mut dyn Write) -> Outcome {
    let f = parse_function_expr(function)
        .map_err(|e| Failure::usage(format!("function `{function}`: {e}")))?;
    writeln!(out, "{}", apply_to_set(&f, &note_set(set)?))?;
    Ok(EXIT_OK)
}

fn read_algorithm(path: &Path) -> Result<FunctionAlgorithm, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut polys = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or_default().trim();
        if body.is_empty() {
            continue;
        }
        polys.push(
            parse_function_expr(body)
                .map_err(|e| Failure::usage(format!("{}:{}: {e}", path.display(), line_no + 1)))?,
        );
    }
    if polys.is_empty() {
        return Err(Failure::usage(format!("{}: no functions", path.display())));
    }
    Ok(FunctionAlgorithm::from_polys(polys))
}

fn emit_score(score: &Score, emit: Emit, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let bytes = match emit {
        Emit::Json => export_json(score),
        Emit::Midi => export_midi(score, &MidiOptions::default()).map_err(Failure::usage)?,
        Emit::Text => {
            let mut text = String::new();
            for (i, s) in score.sets.iter().enumerate() {
                if i > 0 {
                    let f = &score.functions[i - 1];
                    text.push_str(&format!("  {}(n) = {}\n", f.label, f.polynomial()));
                }
                text.push_str(&format!("{}: {}\n", s.label.as_deref().unwrap_or("-"), s));
            }
            text.into_bytes()
        }
    };
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))?,
        None => out.write_all(&bytes)?,
    }
    Ok(EXIT_OK)
}

fn run_chain(
    algorithm: &Path,
    set: &str,
    emit: Emit,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let alg = read_algorithm(algorithm)?;
    let start = note_set(set)?;
    let score = Score::from_chain(run_algorithm(&alg, &start), &alg);
    emit_score(&score, emit, path, out)
}

fn progression(
    template: &str,
    key: Option<&str>,
    offset: Option<i64>,
    emit: Emit,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let (t, base) = resolve_template(template)?;
    let extra = match (key, offset) {
        (Some(k), _) => key_offset(k).map_err(|e| Failure::usage(format!("key `{k}`: {e}")))?,
        (None, Some(o)) => o,
        (None, None) => 0,
    };
    let sets = realize_progression(t, base + extra);
    let alg = derive_algorithm(&sets, &Pinning::minimal())?;
    let labelled = sets
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let figure = s.label.clone().unwrap_or_default();
            s.with_label(format!("{}:{figure}", i + 1))
        })
        .collect();
    emit_score(&Score::from_chain(labelled, &alg), emit, path, out)
}

fn verify(
    case: Option<&str>,
    expect_known_errata: bool,
    format: ReportFormat,
    out: &mut dyn Write,
) -> Outcome {
    let report = run_all(case, expect_known_errata);
    let status = report.status;
    match format {
        ReportFormat::Text => out.write_all(report.render_text().as_bytes())?,
        ReportFormat::Json => {
            let score = Score {
                report: Some(report),
                ..Score::new(Vec::new())
            };
            out.write_all(&export_json(&score))?;
        }
    }
    Ok(match status {
        ReportStatus::Success => EXIT_OK,
        ReportStatus::Failure => EXIT_MISMATCH,
    })
}

fn validate(path: &Path, out: &mut dyn Write) -> Outcome {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let score = import_json(&bytes).map_err(Failure::usage)?;
    let problems = score.check();
    if problems.is_empty() {
        writeln!(
            out,
            "valid: {} sets, {} functions, {} events",
            score.sets.len(),
            score.functions.len(),
            score.events.as_ref().map_or(0, Vec::len)
        )?;
        return Ok(EXIT_OK);
    }
    for p in &problems {
        writeln!(out, "violation: {p}")?;
    }
    writeln!(out, "invalid: {} violation(s)", problems.len())?;
    Ok(EXIT_MISMATCH)
}

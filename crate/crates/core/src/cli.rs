//! Command-line front end. [`run`] parses arguments, executes one command and
//! returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | property FAIL, infeasible completion, or an unexpected counterexample |
//! | 2 | unreadable or malformed input file |
//! | 3 | invalid usage, unsupported property, or size limit exceeded |

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::af::ArgumentationFramework;
use crate::epistemic::{
    epistemic_extension, epistemic_labelling, format_probability, parse_assignment, render_assignment,
    AssignmentFile, MarginalAssignment, PartialAssignment,
};
use crate::error::Error;
use crate::labelling::{self, Labelling, Semantics};
use crate::maxent::{build_constraints, solve, CompletionResult, CompletionStatus, DEFAULT_COMPLETION_TOL};
use crate::properties::{check, PropertyId, PropertyReport, DEFAULT_TOL};
use crate::verify::{verify, VerifyReport, DEFAULT_SAMPLES, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Apx,
    Tgf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "probarg", version, about = "Argumentation frameworks with epistemic probabilities")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shared {
    /// Framework file.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "apx")]
    format: InputFormat,
    /// Tolerance for property checks and the 0.5 threshold band. For
    /// `complete`, the solver's KKT target.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: OutputFormat,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the labellings of a semantics.
    Semantics {
        #[arg(long, value_parser = parse_semantics)]
        semantics: Semantics,
    },
    /// Threshold a total assignment into a labelling and extension.
    Epistemic {
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Check properties of a total assignment.
    Check {
        #[arg(long)]
        assignment: PathBuf,
        /// Comma-separated property names, or `all`.
        #[arg(long, default_value = "all")]
        properties: String,
    },
    /// Maximum-entropy completion of a partial assignment.
    Complete {
        #[arg(long)]
        partial: PathBuf,
        /// Comma-separated property names.
        #[arg(long)]
        properties: String,
    },
    /// Run the proposition checks on the framework.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    s.parse()
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl ToString) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.to_string(),
        }
    }

    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

/// Errors raised while computing, as opposed to while reading input.
fn from_solver(e: Error) -> Failure {
    match e {
        Error::Infeasible { .. } | Error::NoConvergence(_) => Failure {
            code: EXIT_NEGATIVE,
            message: e.to_string(),
        },
        _ => Failure::usage(e),
    }
}

#[derive(Debug, Default, Serialize)]
struct JsonOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    labellings: Option<Vec<JsonLabelling>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extension: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    properties: Option<Vec<PropertyReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    completion: Option<JsonCompletion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<JsonVerify>,
}

#[derive(Debug, Serialize)]
struct JsonLabelling {
    #[serde(rename = "in")]
    ins: Vec<String>,
    out: Vec<String>,
    undec: Vec<String>,
}

#[derive(Debug, Serialize)]
struct JsonCompletion {
    status: CompletionStatus,
    assignment: Option<BTreeMap<String, f64>>,
    entropy: Option<f64>,
    kkt: Option<f64>,
    certificate: Vec<String>,
}

#[derive(Debug, Serialize)]
struct JsonVerify {
    passed: bool,
    lines: Vec<crate::verify::VerifyLine>,
}

fn names(af: &ArgumentationFramework, ids: Vec<usize>) -> Vec<String> {
    ids.into_iter().map(|i| af.name(i).to_string()).collect()
}

fn json_labelling(af: &ArgumentationFramework, l: &Labelling) -> JsonLabelling {
    JsonLabelling {
        ins: names(af, l.in_set()),
        out: names(af, l.out_set()),
        undec: names(af, l.undec_set()),
    }
}

/// Result of one command: text, JSON payload, exit code.
struct Outcome {
    text: String,
    json: JsonOutput,
    code: i32,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn load_framework(shared: &Shared) -> Result<ArgumentationFramework, Failure> {
    let path = shared
        .file
        .as_ref()
        .ok_or_else(|| Failure::usage("--file is required"))?;
    let text = read(path)?;
    let parsed = match shared.format {
        InputFormat::Apx => ArgumentationFramework::parse_apx(&text),
        InputFormat::Tgf => ArgumentationFramework::parse_tgf(&text),
    };
    parsed.map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn load_assignment(af: &ArgumentationFramework, path: &Path) -> Result<AssignmentFile, Failure> {
    let text = read(path)?;
    parse_assignment(af, &text).map_err(|e| match e {
        Error::UnknownArgument(_) => Failure::usage(format!("{}: {e}", path.display())),
        _ => Failure::parse(format!("{}: {e}", path.display())),
    })
}

fn load_total(af: &ArgumentationFramework, path: &Path) -> Result<MarginalAssignment, Failure> {
    match load_assignment(af, path)? {
        AssignmentFile::Total(m) => Ok(m),
        AssignmentFile::Partial(p) => {
            let missing = (0..af.len()).filter(|&a| p.get(a).is_none());
            Err(Failure::usage(Error::IncompleteAssignment(af.join_names(missing))))
        }
    }
}

fn cmd_semantics(af: &ArgumentationFramework, semantics: Semantics) -> Result<Outcome, Failure> {
    let ls = labelling::select(af, semantics).map_err(from_solver)?;
    let text = ls
        .iter()
        .map(|l| l.render(af) + "\n")
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome {
        text,
        json: JsonOutput {
            labellings: Some(ls.iter().map(|l| json_labelling(af, l)).collect()),
            ..Default::default()
        },
        code: EXIT_OK,
    })
}

fn cmd_epistemic(af: &ArgumentationFramework, path: &Path, tol: f64) -> Result<Outcome, Failure> {
    let m = load_total(af, path)?;
    let l = epistemic_labelling(&m, tol);
    let ext = epistemic_extension(&m, tol);
    let ext_names = af.join_names(ext.iter().copied());
    let text = if ext_names.is_empty() {
        format!("{}\nEXTENSION:\n", l.render(af))
    } else {
        format!("{}\nEXTENSION: {ext_names}\n", l.render(af))
    };
    Ok(Outcome {
        text,
        json: JsonOutput {
            labellings: Some(vec![json_labelling(af, &l)]),
            extension: Some(names(af, ext)),
            ..Default::default()
        },
        code: EXIT_OK,
    })
}

fn cmd_check(af: &ArgumentationFramework, path: &Path, props: &str, tol: f64) -> Result<Outcome, Failure> {
    let props = PropertyId::parse_list(props).map_err(Failure::usage)?;
    let m = load_total(af, path)?;
    let reports = props
        .iter()
        .map(|&p| check(af, &m, p, tol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(from_solver)?;
    let mut text = String::new();
    for r in &reports {
        text += &format!("{}: {}\n", r.property, if r.holds { "PASS" } else { "FAIL" });
    }
    for r in &reports {
        for v in &r.violations {
            text += &format!(
                "  {} (lhs {}, rhs {})\n",
                v.constraint,
                format_probability(v.lhs),
                format_probability(v.rhs)
            );
        }
    }
    let code = if reports.iter().all(|r| r.holds) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    Ok(Outcome {
        text,
        json: JsonOutput {
            properties: Some(reports),
            ..Default::default()
        },
        code,
    })
}

fn render_completion(af: &ArgumentationFramework, r: &CompletionResult) -> String {
    let mut text = String::new();
    if let Some(m) = &r.assignment {
        text += &render_assignment(af, m);
        text += "\n";
        text += &format!("# entropy {}\n", format_probability(r.entropy));
    }
    text += &format!("# status {}\n", r.status.as_str());
    if r.assignment.is_some() {
        text += &format!("# kkt {}\n", format_probability(r.kkt_residual));
    }
    for c in &r.certificate {
        text += &format!("# conflict {c}\n");
    }
    text
}

fn cmd_complete(af: &ArgumentationFramework, path: &Path, props: &str, tol: f64) -> Result<Outcome, Failure> {
    let props: BTreeSet<PropertyId> = PropertyId::parse_list(props)
        .map_err(Failure::usage)?
        .into_iter()
        .collect();
    let pi = match load_assignment(af, path)? {
        AssignmentFile::Partial(p) => p,
        AssignmentFile::Total(m) => {
            PartialAssignment::new(m.values().iter().copied().map(Some).collect()).expect("in range")
        }
    };
    let sys = build_constraints(af, &props, &pi).map_err(from_solver)?;
    let r = solve(&sys, tol);
    let code = match r.status {
        CompletionStatus::Optimal => EXIT_OK,
        CompletionStatus::Infeasible => EXIT_NEGATIVE,
    };
    let json = JsonCompletion {
        status: r.status,
        assignment: r.assignment.as_ref().map(|m| {
            (0..af.len())
                .map(|a| (af.name(a).to_string(), m.get(a)))
                .collect()
        }),
        entropy: r.assignment.as_ref().map(|_| r.entropy),
        kkt: r.assignment.as_ref().map(|_| r.kkt_residual),
        certificate: r.certificate.clone(),
    };
    Ok(Outcome {
        text: render_completion(af, &r),
        json: JsonOutput {
            completion: Some(json),
            ..Default::default()
        },
        code,
    })
}

fn cmd_verify(af: &ArgumentationFramework, samples: usize, seed: u64) -> Result<Outcome, Failure> {
    let report: VerifyReport = verify(af, samples, seed).map_err(from_solver)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome {
        text: report.render(),
        json: JsonOutput {
            verify: Some(JsonVerify {
                passed: report.passed(),
                lines: report.lines,
            }),
            ..Default::default()
        },
        code,
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    if let Some(tol) = cli.shared.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Failure::usage(format!("--tol must be a nonnegative number, got {tol}")));
        }
    }
    let af = load_framework(&cli.shared)?;
    let tol = cli.shared.tol;
    match &cli.command {
        Command::Semantics { semantics } => cmd_semantics(&af, *semantics),
        Command::Epistemic { assignment } => cmd_epistemic(&af, assignment, tol.unwrap_or(DEFAULT_TOL)),
        Command::Check {
            assignment,
            properties,
        } => cmd_check(&af, assignment, properties, tol.unwrap_or(DEFAULT_TOL)),
        Command::Complete { partial, properties } => {
            cmd_complete(&af, partial, properties, tol.unwrap_or(DEFAULT_COMPLETION_TOL))
        }
        Command::Verify { samples, seed } => cmd_verify(&af, *samples, *seed),
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            if shown {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match cli.shared.output {
                OutputFormat::Text => write!(out, "{}", outcome.text),
                OutputFormat::Json => serde_json::to_writer_pretty(&mut *out, &outcome.json)
                    .map_err(std::io::Error::from)
                    .and_then(|_| writeln!(out)),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("probarg").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_str(&["semantics", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"), "{err}");
    }

    #[test]
    fn missing_file_flag() {
        let (code, _, err) = run_str(&["verify"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--file"));
    }

    #[test]
    fn completion_rendering() {
        let af = crate::fixtures::single_attack();
        let sys = build_constraints(&af, &BTreeSet::from([PropertyId::Coh]), &PartialAssignment::empty(2)).unwrap();
        let text = render_completion(&af, &solve(&sys, 1e-8));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(&lines[..2], &["A 0.5", "B 0.5"]);
        assert!(lines[2].starts_with("# entropy 1.38629436"));
        assert_eq!(lines[3], "# status optimal");
        assert!(lines[4].starts_with("# kkt "));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }
}

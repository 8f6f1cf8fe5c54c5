//! Command-line front end: parses arguments, runs one command, and returns the
//! exit code with the text for stdout and stderr.
//!
//! Exit codes: 0 success, 1 a certificate failed, 2 bad input or usage.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use linrel::io::{self, DocumentError, RelationDocument, ReportDocument};
use linrel::shiftmodel::{run_shift_model, WindowConfig};
use linrel::{
    decompose, reduction_certificates, z_properties_check, z_transform, DecompositionMode,
    ToleranceConfig, C64,
};

#[derive(Debug, Parser)]
#[command(name = "linrel", version, about = "Linear relations on C^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a relation document.
    Classify {
        file: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the Z transform at ZETA = RE,IM.
    Ztransform {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        zeta: C64,
        file: PathBuf,
        /// Report the transform identities for the input instead of writing the transform.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose along the distinguished reducing subspace.
    Decompose {
        #[arg(long, value_enum)]
        mode: Mode,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a subspace reduces a relation.
    Certify {
        #[arg(long)]
        subspace: PathBuf,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in worked examples.
    Example {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Debug, Subcommand)]
enum Example {
    /// Truncated shift model.
    Shift {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = WindowConfig::DEFAULT_MARGIN)]
        margin: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Nfl,
    Wold,
    Dissipative,
    Symmetric,
}

impl From<Mode> for DecompositionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Nfl => DecompositionMode::Nfl,
            Mode::Wold => DecompositionMode::Wold,
            Mode::Dissipative => DecompositionMode::Dissipative,
            Mode::Symmetric => DecompositionMode::Symmetric,
        }
    }
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got `{s}`"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("`{t}` is not a finite number"))
    };
    Ok(C64::new(parse(re)?, parse(im)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, passed: bool) -> Self {
        Self {
            code: if passed { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<RelationDocument, Failure> {
    io::parse_relation_document(&read(path)?)
        .map_err(|e: DocumentError| Failure(format!("{}: {e}", path.display())))
}

/// Writes to `out` when given; otherwise the text becomes stdout.
fn deliver(text: String, out: Option<&Path>) -> Result<String, Failure> {
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text + "\n"),
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(text, true)
                }
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => outcome,
        Err(Failure(message)) => Outcome::input_error(message),
    }
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    let defaults = ToleranceConfig::default();
    match command {
        Command::Classify { file, out } => {
            let doc = load(&file)?;
            let cfg = doc.tolerances_or(defaults);
            let t = doc.to_relation(&cfg)?;
            let report = ReportDocument::classification(&t, doc.name.clone(), &cfg);
            Ok(Outcome::ok(
                deliver(io::emit_document(&report), out.as_deref())?,
                true,
            ))
        }
        Command::Ztransform {
            zeta,
            file,
            check,
            out,
        } => {
            let doc = load(&file)?;
            let cfg = doc.tolerances_or(defaults);
            let t = doc.to_relation(&cfg)?;
            if check {
                let report = z_properties_check(&t, &t, zeta, &cfg)?;
                let report = ReportDocument::z_properties(&report, doc.name.clone(), &cfg);
                let passed = report.passed;
                return Ok(Outcome::ok(
                    deliver(io::emit_document(&report), out.as_deref())?,
                    passed,
                ));
            }
            let z = z_transform(&t, zeta, &cfg);
            let mut transformed = RelationDocument::from_relation(&z, doc.name.clone());
            transformed.tolerances = doc.tolerances;
            Ok(Outcome::ok(
                deliver(io::emit_document(&transformed), out.as_deref())?,
                true,
            ))
        }
        Command::Decompose { mode, file, out } => {
            let doc = load(&file)?;
            let cfg = doc.tolerances_or(defaults);
            let t = doc.to_relation(&cfg)?;
            let result = decompose(&t, mode.into(), &cfg)?;
            let report = ReportDocument::decomposition(&t, &result, doc.name.clone(), &cfg);
            let passed = report.passed;
            Ok(Outcome::ok(
                deliver(io::emit_document(&report), out.as_deref())?,
                passed,
            ))
        }
        Command::Certify {
            subspace,
            file,
            out,
        } => {
            let doc = load(&file)?;
            let cfg = doc.tolerances_or(defaults);
            let t = doc.to_relation(&cfg)?;
            let k = io::parse_subspace(&read(&subspace)?, &cfg)
                .map_err(|e| Failure(format!("{}: {e}", subspace.display())))?;
            let report = reduction_certificates(&t, &k, &cfg)?;
            let report = ReportDocument::reduction(&report, doc.name.clone(), &cfg);
            let passed = report.passed;
            Ok(Outcome::ok(
                deliver(io::emit_document(&report), out.as_deref())?,
                passed,
            ))
        }
        Command::Example {
            which: Example::Shift { n, margin, report },
        } => {
            let window = WindowConfig::new(n, margin)?;
            let model = run_shift_model(&window, &defaults)?;
            let mut doc = ReportDocument::new(
                "example shift",
                Some(format!("N={n}, margin={margin}")),
                &defaults,
            )
            .with_certificates(&model.certificates);
            doc.passed = model.all_passed();
            let mut summary = String::new();
            for c in &model.certificates {
                summary.push_str(&format!(
                    "{} {} (residual {:.2e}, tolerance {:.0e})\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.residual,
                    c.tolerance
                ));
            }
            summary.push_str(&format!(
                "{} spectral probe (delta_1 residual {:.2e})\n",
                if model.probe.passed { "PASS" } else { "FAIL" },
                model.probe.delta1_residual
            ));
            if let Some(path) = report {
                deliver(io::emit_document(&doc), Some(&path))?;
            }
            Ok(Outcome::ok(summary, doc.passed))
        }
    }
}

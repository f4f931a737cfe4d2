use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catbundle_core::instance::{preset_document, validate_algebra, InstanceDocument, Instance, PRESETS};
use catbundle_core::suites::{run_suite, validation_report, Options, Suite, DEFAULT_MAX_LEN};
use catbundle_core::Error;
use clap::{Parser, Subcommand, ValueEnum};

/// Generate, validate and check categorical bundle instances.
#[derive(Debug, Parser)]
#[command(name = "catbundle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a preset instance document.
    Generate {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Noise::On)]
        noise: Noise,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the structural laws of a document.
    Validate { file: PathBuf },
    /// Run a check suite on a document.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "max-path-len", default_value_t = DEFAULT_MAX_LEN as i64, allow_negative_numbers = true)]
        max_path_len: i64,
        /// Include every violation and the rewriting chains behind equality verdicts.
        #[arg(long)]
        diagnostic: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Noise {
    On,
    Off,
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

/// An input or usage problem, reported on standard error with exit code 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        Self(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, UsageError> {
    match cli.command {
        Command::Generate { preset, seed, noise, out } => {
            if !PRESETS.contains(&preset.as_str()) {
                return Err(UsageError(format!("unknown preset '{preset}'; known: {}", PRESETS.join(", "))));
            }
            let doc = preset_document(&preset, seed, noise == Noise::On)?;
            let text = doc.to_json();
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(PASS)
        }
        Command::Validate { file } => {
            let inst = load(&file)?;
            let report = validation_report(&inst, Options::default());
            print!("{}", report.to_json());
            Ok(if report.passed() { PASS } else { FAIL })
        }
        Command::Check { file, suite, max_path_len, diagnostic } => {
            let suite: Suite = suite.parse().map_err(UsageError)?;
            let max_len = usize::try_from(max_path_len)
                .map_err(|_| UsageError(format!("--max-path-len must be non-negative, got {max_path_len}")))?;
            let opts = Options { max_len, diagnostic };
            let inst = load(&file)?;
            if !validate_algebra(&inst).is_ok() {
                let report = validation_report(&inst, opts);
                print!("{}", report.to_json());
                return Ok(FAIL);
            }
            let report = run_suite(&inst, suite, opts)?;
            print!("{}", report.to_json());
            Ok(if report.passed() { PASS } else { FAIL })
        }
    }
}

fn load(path: &Path) -> Result<Instance, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let doc = InstanceDocument::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    doc.load().map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

//! Batch drivers for the kazlab verification suites.
//!
//! `kazlab <command> [--config PATH] [--out DIR] [--seed N] [--key=value ...]` writes
//! `<out>/<command>.csv` and `<out>/<command>.json`, plus command-specific extras. Exit status
//! is 0 when every case passes, 1 when some case violates its bound, 2 on usage errors.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;

pub use config::{ExperimentConfig, UsageError};
pub use output::{CommandOutput, RunReport};

#[derive(Debug, Parser)]
#[command(
    name = "kazlab",
    version,
    about = "Run a verification suite and write CSV/JSON reports",
    after_help = "Parameters are overridden with --key=value anywhere on the line."
)]
pub struct Cli {
    /// sdelta-decay, sphere-gap, su2-gap, kak, zigzag-cert, quotient-gap, star-verify or cocycle-mc
    pub command: String,
    /// Flat `key = value` file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

const FLAGS: [&str; 5] = ["config", "out", "seed", "help", "version"];

/// Separates `--key=value` parameter overrides from the arguments clap parses.
pub fn split_overrides(args: Vec<OsString>) -> (Vec<OsString>, Vec<String>) {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    for (i, a) in args.into_iter().enumerate() {
        let text = a.to_str().unwrap_or("");
        let is_override =
            i > 0 && text.strip_prefix("--").and_then(|b| b.split_once('=')).is_some_and(|(k, _)| !FLAGS.contains(&k));
        if is_override {
            overrides.push(text.to_string());
        } else {
            rest.push(a);
        }
    }
    (rest, overrides)
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Resolves the configuration for `command` from defaults, an optional file and overrides.
pub fn configure(
    command: &str,
    file: Option<&Path>,
    overrides: &[String],
    seed: Option<u64>,
) -> Result<ExperimentConfig, UsageError> {
    let cmd = commands::find(command).ok_or_else(|| UsageError::UnknownCommand(command.to_string()))?;
    let overrides = config::parse_overrides(overrides)?;
    ExperimentConfig::build(command, cmd.keys, file, &overrides, seed)
}

/// Runs one command. The report's config echo includes the seed.
pub fn run(cfg: &ExperimentConfig) -> Result<(RunReport, CommandOutput), UsageError> {
    let cmd = commands::find(&cfg.command).ok_or_else(|| UsageError::UnknownCommand(cfg.command.clone()))?;
    let start = Instant::now();
    let out = (cmd.run)(cfg)?;
    let mut echo = cfg.values.clone();
    echo.insert("seed".into(), cfg.seed.to_string());
    let report = RunReport::new(&cfg.command, echo, &out, start.elapsed().as_secs_f64());
    Ok((report, out))
}

/// Writes the case CSV, the run report, and any extras into `dir`.
pub fn write_outputs(dir: &Path, report: &RunReport, out: &CommandOutput) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> std::io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    put(format!("{}.csv", report.command), out.cases.to_csv(&report.command))?;
    put(format!("{}.json", report.command), serde_json::to_string_pretty(report)? + "\n")?;
    for (name, table) in &out.extra_tables {
        put(format!("{name}.csv"), table.to_csv(name))?;
    }
    for (name, doc) in &out.documents {
        put(format!("{name}.json"), serde_json::to_string_pretty(doc)? + "\n")?;
    }
    Ok(written)
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (args, overrides) = split_overrides(args.into_iter().map(Into::into).collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = configure(&cli.command, cli.config.as_deref(), &overrides, cli.seed).and_then(|cfg| run(&cfg));
    let (report, out) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, UsageError::UnknownCommand(_)) {
                let names: Vec<&str> = commands::COMMANDS.iter().map(|c| c.name).collect();
                eprintln!("commands: {}", names.join(", "));
            }
            return EXIT_USAGE;
        }
    };
    if let Err(e) = write_outputs(&cli.out, &report, &out) {
        eprintln!("error: cannot write to {}: {e}", cli.out.display());
        return EXIT_USAGE;
    }
    println!(
        "{}: {}/{} cases passed ({:.2} s), reports in {}",
        report.command,
        report.passed,
        report.passed + report.failed,
        report.wall_time_seconds,
        cli.out.display()
    );
    if report.failed > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_PASS
    }
}

//! Command-line driver: runs manifests of cyclic-homology and Chern-character
//! computations and compares run reports.

mod manifest;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cyclochern_core::chern::SignConvention;
use cyclochern_core::omega;
use serde_json::{json, Value};

use crate::manifest::Manifest;
use crate::report::Report;
use crate::run::{Context, Settings};

#[derive(Parser)]
#[command(name = "cyclochern", version, about = "Exact cyclic homology and Chern character computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every task of a manifest and emit a JSON report.
    Run {
        manifest: PathBuf,
        /// Maximal form degree.
        #[arg(long, default_value_t = omega::DEFAULT_CAP)]
        cap: usize,
        /// Sign in the even Cuntz–Quillen character; overrides manifest tasks.
        #[arg(long, value_enum)]
        sign_convention: Option<SignArg>,
        /// Write the report here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Suppress the per-task summary on stderr.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Compare two reports, ignoring timings.
    Diff { a: PathBuf, b: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plain,
    Alternating,
}

impl From<SignArg> for SignConvention {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plain => SignConvention::Plain,
            SignArg::Alternating => SignConvention::Alternating,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { manifest, cap, sign_convention, output, quiet } => {
            run_manifest(&manifest, Settings { cap, sign: sign_convention.map(Into::into) }, output, quiet)
        }
        Command::Diff { a, b } => diff(&a, &b),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run_manifest(path: &PathBuf, settings: Settings, output: Option<PathBuf>, quiet: bool) -> Result<bool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest = Manifest::parse(&text)?;
    let ctx = Context::build(&manifest)?;
    let mut tasks = Vec::new();
    for (i, task) in manifest.tasks.iter().enumerate() {
        let r = ctx.run_task(task, i, &settings);
        if !quiet {
            eprintln!("{} {} ({}) {} ms", if r.passed() { "PASS" } else { "FAIL" }, r.id, r.kind, r.timing_ms);
            for a in r.assertions.iter().filter(|a| !a.passed) {
                eprintln!("    failed: {}: {}", a.name, a.detail);
            }
        }
        tasks.push(r);
    }
    let sign = settings.sign.map(|s| match s {
        SignConvention::Plain => "plain",
        SignConvention::Alternating => "alternating",
    });
    let report = Report::new(json!({"cap": settings.cap, "sign_convention": sign}), &tasks);
    let all_passed = report.summary.failed == 0;
    if !quiet {
        eprintln!("{} tasks, {} passed, {} failed", report.summary.tasks, report.summary.passed, report.summary.failed);
    }
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match output {
        Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(all_passed)
}

fn load_report(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    report::strip_timing(&mut v);
    Ok(v)
}

fn diff(a: &PathBuf, b: &PathBuf) -> Result<bool> {
    let diffs = report::differences(&load_report(a)?, &load_report(b)?);
    for d in &diffs {
        println!("{d}");
    }
    Ok(diffs.is_empty())
}

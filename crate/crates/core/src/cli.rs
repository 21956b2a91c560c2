//! Command-line front end. [`run`] does all the work and returns the human
//! summary, the JSON report and the exit status, so it can be tested without
//! spawning a process.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgl::{self, FormalGroupLaw};
use crate::fp::Prime;
use crate::lazard::{LazardMode, LazardReport};
use crate::series::{self, IdentityReport};

/// Exit status for a run where every gate passed.
pub const EXIT_OK: u8 = 0;
/// Exit status for a mathematical mismatch.
pub const EXIT_MISMATCH: u8 = 1;
/// Exit status for usage, input or parse errors.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "modp-fgl",
    version,
    about = "Mod-p formal group laws and the mod-p Lazard ring"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of a law read from a `.fgl` file.
    Check(LawArgs),
    /// Print the p-fold iterate [p](x, e) of a law read from a `.fgl` file.
    Pseries(LawArgs),
    /// Compute graded dimensions of the universal coefficient ring.
    Lazard(LazardArgs),
    /// Compare Poincare series identities.
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct LawArgs {
    /// Law file.
    #[arg(long)]
    pub input: PathBuf,
    /// Must agree with the file's `prime:` header when given.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Overrides the file's `truncation:` header.
    #[arg(long)]
    pub truncation: Option<u32>,
    /// Write the JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LazardModeArg {
    Modp,
    Ordinary,
}

#[derive(Debug, Args)]
pub struct LazardArgs {
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long)]
    pub max_degree: u32,
    #[arg(long, value_enum, default_value_t = LazardModeArg::Modp)]
    pub mode: LazardModeArg,
    /// Geometric truncation; at least max-degree + 2.
    #[arg(long)]
    pub truncation: Option<u32>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesCheck {
    V1Filtration,
    RstarDiagnostic,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    pub mode: SeriesCheck,
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long)]
    pub cap: usize,
    /// Also compare against the ring computed from the axioms (rstar-diagnostic only).
    #[arg(long)]
    pub computed: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: u8,
    pub summary: String,
    /// Pretty-printed JSON report.
    pub report: Option<String>,
}

impl Outcome {
    fn new(passed: bool, summary: String, report: impl Serialize) -> Self {
        Outcome {
            exit: if passed { EXIT_OK } else { EXIT_MISMATCH },
            summary,
            report: Some(to_json(&report)),
        }
    }

    fn usage(err: &Error) -> Self {
        Outcome {
            exit: EXIT_USAGE,
            summary: format!("error: {err}\n"),
            report: None,
        }
    }
}

/// Runs a parsed command line. The JSON report is also written to
/// `--output` when that is given.
pub fn run(cli: &Cli) -> Outcome {
    let (result, output) = match &cli.command {
        Command::Check(args) => (cmd_check(args), &args.output),
        Command::Pseries(args) => (cmd_pseries(args), &args.output),
        Command::Lazard(args) => (cmd_lazard(args), &args.output),
        Command::Series(args) => (cmd_series(args), &args.output),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => return Outcome::usage(&e),
    };
    if let (Some(path), Some(report)) = (output, &outcome.report) {
        if let Err(e) = write_report(path, report) {
            return Outcome::usage(&e);
        }
    }
    outcome
}

fn to_json(report: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    text
}

fn write_report(path: &Path, report: &str) -> Result<()> {
    fs::write(path, report)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn load_law(args: &LawArgs) -> Result<FormalGroupLaw> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", args.input.display())))?;
    let law = fgl::parse_law_file(&text, args.truncation)?;
    if let Some(p) = args.prime {
        let p = Prime::new(p)?;
        if p != law.prime() {
            return Err(Error::InvalidInput(format!(
                "--prime {p} disagrees with the file's prime {}",
                law.prime()
            )));
        }
    }
    Ok(law)
}

pub fn cmd_check(args: &LawArgs) -> Result<Outcome> {
    let law = load_law(args)?;
    let report = law.check_all();
    let mut s = String::new();
    writeln!(
        s,
        "law over F_{} truncated above degree {}",
        report.prime, report.truncation
    )
    .unwrap();
    for c in &report.checks {
        writeln!(s, "  {c}").unwrap();
    }
    writeln!(s, "note: {}", report.notice).unwrap();
    writeln!(
        s,
        "note: homogeneity is informational and does not affect the exit status"
    )
    .unwrap();
    writeln!(
        s,
        "{}",
        if report.passed {
            "all axioms pass"
        } else {
            "some axioms fail"
        }
    )
    .unwrap();
    Ok(Outcome::new(report.passed, s, &report))
}

#[derive(Serialize)]
struct PSeriesReport {
    prime: Prime,
    truncation: u32,
    f1: String,
    f2: String,
    notice: String,
}

pub fn cmd_pseries(args: &LawArgs) -> Result<Outcome> {
    let law = load_law(args)?;
    let [p, d] = [law.prime().get(), law.truncation()];
    let pair = law.p_series();
    let mut notice = format!("terms of geometric degree above {d} are dropped");
    if d < 2 * p {
        write!(
            notice,
            "; x^{p} has degree {} and lies beyond the truncation",
            2 * p
        )
        .unwrap();
    }
    let report = PSeriesReport {
        prime: law.prime(),
        truncation: d,
        f1: pair.odd.to_string(),
        f2: pair.even.to_string(),
        notice,
    };
    let s = format!(
        "[{p}](x, e):\n  F1 = {}\n  F2 = {}\nnote: {}\n",
        report.f1, report.f2, report.notice
    );
    Ok(Outcome::new(true, s, &report))
}

pub fn cmd_lazard(args: &LazardArgs) -> Result<Outcome> {
    let prime = Prime::new(args.prime)?;
    let mode = match args.mode {
        LazardModeArg::Modp => LazardMode::Modp,
        LazardModeArg::Ordinary => LazardMode::Ordinary,
    };
    let report = LazardReport::compute(prime, args.max_degree, mode, args.truncation)?;
    let mut s = String::new();
    writeln!(
        s,
        "{mode} Lazard ring over F_{prime}, degrees 0..={}, truncation {}",
        args.max_degree, report.truncation
    )
    .unwrap();
    writeln!(s, "expected: {}", report.expected_description).unwrap();
    let alt = report.alternative.as_ref();
    write!(
        s,
        "  {:>6}  {:>8}  {:>8}  {:>5}",
        "degree", "computed", "expected", "match"
    )
    .unwrap();
    if alt.is_some() {
        write!(s, "  {:>11}", "indexed a_i").unwrap();
    }
    s.push('\n');
    for (i, d) in report.degrees.iter().enumerate() {
        write!(
            s,
            "  {:>6}  {:>8}  {:>8}  {:>5}",
            d.degree, d.dimension, report.expected[i], report.matches[i]
        )
        .unwrap();
        if let Some(a) = alt {
            write!(s, "  {:>11}", a.expected[i]).unwrap();
        }
        s.push('\n');
    }
    if report.all_match {
        writeln!(s, "all degrees match").unwrap();
    } else {
        writeln!(s, "mismatch in degrees {:?}", report.mismatched_degrees).unwrap();
    }
    if let Some(a) = alt {
        writeln!(
            s,
            "with {}: {}",
            a.description,
            if a.all_match {
                "all degrees match".to_string()
            } else {
                format!("mismatch in degrees {:?}", a.mismatched_degrees)
            }
        )
        .unwrap();
    }
    Ok(Outcome::new(report.all_match, s, &report))
}

#[derive(Serialize)]
struct RstarReport {
    #[serde(flatten)]
    diagnostic: IdentityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    computed: Option<IdentityReport>,
}

pub fn cmd_series(args: &SeriesArgs) -> Result<Outcome> {
    let prime = Prime::new(args.prime)?;
    if args.cap < 1 {
        return Err(Error::InvalidInput("--cap must be at least 1".into()));
    }
    match args.mode {
        SeriesCheck::V1Filtration => {
            let report = series::check_v1_homology(prime, args.cap)?;
            let mut s = report.to_string();
            match report.first_discrepancy {
                None => writeln!(s, "identity holds through degree {}", args.cap).unwrap(),
                Some(d) => writeln!(s, "first discrepancy in degree {d}").unwrap(),
            }
            Ok(Outcome::new(report.equal, s, &report))
        }
        SeriesCheck::RstarDiagnostic => {
            let diagnostic = series::check_rstar_diagnostic(prime, args.cap)?;
            let mut s = diagnostic.to_string();
            writeln!(
                s,
                "report only; unequal degrees: {:?}",
                diagnostic.unequal_degrees()
            )
            .unwrap();
            let computed = if args.computed {
                let c = series::check_rstar_computed(prime, args.cap)?;
                s.push_str(&c.to_string());
                writeln!(s, "report only; unequal degrees: {:?}", c.unequal_degrees()).unwrap();
                Some(c)
            } else {
                None
            };
            Ok(Outcome::new(
                true,
                s,
                &RstarReport {
                    diagnostic,
                    computed,
                },
            ))
        }
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use neron::Complex64;
use neron_cli::commands::{self, ProbeArgs};
use neron_cli::family::{format_float, parse_family, FamilySpec};
use neron_cli::report::Report;
use neron_cli::CliError;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "neron", version, about = "Neron models of degenerating weight -1 variations")]
struct Cli {
    /// Rank tolerance for numerical linear algebra.
    #[arg(long, global = true, default_value = "1e-9", value_parser = parse_tol)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every analysis the family file supports.
    Analyze(FamilyArg),
    ComponentGroup(FamilyArg),
    LimitFiltration(FamilyArg),
    Fiber(FamilyArg),
    NfCheck(FamilyArg),
    NfExtend(FamilyArg),
    LinkCohomology(FamilyArg),
    /// Sample the bidisk example along t2 = beta t1^(|p|-1).
    ProbeHausdorff(ProbeFlags),
}

#[derive(Args)]
struct FamilyArg {
    #[arg(long)]
    family: PathBuf,
}

#[derive(Args)]
struct ProbeFlags {
    #[arg(long, allow_hyphen_values = true)]
    p: i64,
    /// `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Complex64,
    /// `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Complex64,
    #[arg(long, default_value_t = 16)]
    samples: u32,
    /// Write the sample table here instead of embedding it in the report.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("expected a positive number, found {s:?}")),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    match (re.trim().parse::<f64>(), im.trim().parse::<f64>()) {
        (Ok(re), Ok(im)) if re.is_finite() && im.is_finite() => Ok(Complex64::new(re, im)),
        _ => Err(format!("expected re,im, found {s:?}")),
    }
}

fn load(path: &Path) -> Result<FamilySpec, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_family(&text)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tol = cli.tol;
    let (name, label, result): (&str, Option<String>, Value) = match &cli.command {
        Command::ProbeHausdorff(flags) => {
            let args = ProbeArgs {
                p: flags.p,
                alpha: flags.alpha,
                beta: flags.beta,
                samples: flags.samples,
            };
            let (mut value, csv) = commands::probe(&args, tol)?;
            match &flags.csv {
                Some(path) => write(path, &csv)?,
                None => value["csv"] = Value::String(csv),
            }
            ("probe-hausdorff", None, value)
        }
        Command::Analyze(f)
        | Command::ComponentGroup(f)
        | Command::LimitFiltration(f)
        | Command::Fiber(f)
        | Command::NfCheck(f)
        | Command::NfExtend(f)
        | Command::LinkCohomology(f) => {
            let spec = load(&f.family)?;
            let (name, value) = match &cli.command {
                Command::Analyze(_) => ("analyze", commands::analyze(&spec, tol)?),
                Command::ComponentGroup(_) => ("component-group", commands::component_groups(&spec)?),
                Command::LimitFiltration(_) => ("limit-filtration", commands::limit_filtration(&spec, tol)?),
                Command::Fiber(_) => ("fiber", commands::fibers(&spec, tol)?),
                Command::NfCheck(_) => ("nf-check", commands::nf_check(&spec)?),
                Command::NfExtend(_) => ("nf-extend", commands::nf_extend(&spec, tol)?),
                Command::LinkCohomology(_) => ("link-cohomology", commands::link_cohomology(&spec)?),
                Command::ProbeHausdorff(_) => unreachable!(),
            };
            (name, spec.label.clone(), value)
        }
    };
    let report = Report {
        command: name.to_owned(),
        tolerance: format_float(tol),
        label,
        result,
    };
    let text = report.render();
    match &cli.out {
        Some(path) => write(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

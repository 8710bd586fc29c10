use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::Value;

use extortion_core::demo::{run_demo, DEMOS};
use extortion_core::error::DemoError;
use extortion_core::files::{parse_game, ReportFile, ThreatFile};
use extortion_core::taxonomy::{enumerate_ordinal_games, export_chart, scan, ChartFormat, Scheme};
use extortion_core::{analyze, EngineError, FormatError, Roles, Scenario};

#[derive(Parser)]
#[command(name = "extortion", version, about = "Binding-threat extortion analysis for normal-form games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a concrete threat and report every bound and condition.
    Analyze {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        threat: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Feasibility and bounds for a role assignment, with at most one of c1 and c2 fixed.
    Bounds {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        scenario: Scenario,
        #[arg(long)]
        extorted: String,
        #[arg(long)]
        recipient: Option<String>,
        #[arg(long)]
        extortioner: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, conflicts_with = "c2")]
        c1: Option<String>,
        #[arg(long)]
        c2: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify all strict-ordinal 2x2 games and export the chart.
    Scan {
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a bundled worked example and check its expected numbers.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(DEMOS))]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// JSON goes to `out` (summary on stdout) or to stdout (summary on stderr).
fn emit(report: &ReportFile, out: Option<&Path>) -> Result<()> {
    let json = report.to_json();
    match out {
        Some(path) => {
            write(path, &json)?;
            print!("{}", report.summary());
            println!("report written to {}", path.display());
        }
        None => {
            eprint!("{}", report.summary());
            print!("{json}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { game, threat, out } => {
            let game = parse_game(&game).with_context(|| format!("game file {}", game.display()))?;
            let request = ThreatFile::parse(&threat)
                .and_then(|t| t.resolve(&game))
                .with_context(|| format!("threat file {}", threat.display()))?;
            let report = analyze(&game, &request)?;
            emit(&ReportFile::from_report(&game, &report), out.as_deref())
        }
        Command::Bounds {
            game,
            scenario,
            extorted,
            recipient,
            extortioner,
            target,
            c1,
            c2,
            out,
        } => {
            let game = parse_game(&game).with_context(|| format!("game file {}", game.display()))?;
            let recipient = match recipient {
                Some(name) => name,
                None => {
                    let index = game.player_index(&extorted).ok_or_else(|| FormatError::UnknownName {
                        kind: "player",
                        name: extorted.clone(),
                    })?;
                    let roles = Roles::for_scenario(scenario, index);
                    roles.validate(&game)?;
                    game.player_name(roles.recipient).to_string()
                }
            };
            let threat = ThreatFile {
                scenario,
                extorted,
                recipient,
                extortioner,
                target_strategy: target,
                c1: c1.map(Value::String),
                c2: c2.map(Value::String),
            };
            let request = threat.resolve(&game)?;
            let report = analyze(&game, &request)?;
            emit(&ReportFile::from_report(&game, &report), out.as_deref())
        }
        Command::Scan { scheme, csv, svg } => {
            let records = enumerate_ordinal_games()?;
            let summary = scan(&records, scheme);
            write(&csv, &export_chart(&summary, &records, ChartFormat::Csv)?)?;
            if let Some(svg) = &svg {
                write(svg, &export_chart(&summary, &records, ChartFormat::Svg)?)?;
            }
            println!("{scheme} susceptible: {}", summary.susceptible.headline());
            println!("excluded (no unique pure equilibrium): {}", summary.excluded.headline());
            let b = &summary.canonical_breakdown;
            println!(
                "classes: row only {}, column only {}, both {}",
                b.row_only, b.column_only, b.both
            );
            Ok(())
        }
        Command::Demo { name, out } => {
            let run = run_demo(&name)?;
            emit(&ReportFile::from_report(&run.game, &run.report), out.as_deref())?;
            eprintln!("demo {}: all expected values reproduced", run.name);
            Ok(())
        }
    }
}

/// Condition label for the error stream.
fn label(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<EngineError>() {
            return e.label();
        }
        if let Some(e) = cause.downcast_ref::<FormatError>() {
            return match e {
                FormatError::Engine(inner) => inner.label(),
                _ => "format",
            };
        }
        if let Some(e) = cause.downcast_ref::<DemoError>() {
            return match e {
                DemoError::Engine(inner) | DemoError::Format(FormatError::Engine(inner)) => inner.label(),
                _ => "demo",
            };
        }
    }
    "io"
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error [{}]: {err:#}", label(&err));
            ExitCode::from(2)
        }
    }
}

//! `arcstudy`: run short-circuit and arc-flash studies from a study file.
//!
//! Exit codes: 0 success, 2 domain or validation failure, 3 I/O failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arcstudy_core::arcflash::CoefficientTable;
use arcstudy_core::fault::{worst_case_per_bus, Summation};
use arcstudy_core::label::{render_label, LabelFormat};
use arcstudy_core::network::{load_study, StudyFile};
use arcstudy_core::report::{
    build_report, contributions_csv, render_report, short_circuit_csv, ReportFormat, ReportOptions,
    ENGINE_VERSION,
};
use arcstudy_core::study::{build_labels, run_short_circuit, run_study, StudyOptions, StudyRun};
use clap::{Args, Parser, Subcommand};

const EXIT_DOMAIN: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "arcstudy", version = ENGINE_VERSION, about = "Short-circuit and arc-flash hazard studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a study file and print a summary.
    Validate {
        #[arg(long)]
        study: PathBuf,
    },
    /// Three-phase bolted fault currents for every bus and topology.
    Shortcircuit(RunArgs),
    /// Full hazard study: report plus one label per bus.
    Arcflash(RunArgs),
    /// Labels only.
    Labels(RunArgs),
    /// Report only.
    Report(RunArgs),
    /// Print engine and coefficient-data versions.
    Version,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    study: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    topology: Option<String>,
    /// May be repeated.
    #[arg(long = "bus")]
    buses: Vec<String>,
    /// Comma-separated: txt, svg, json for labels; csv, md for reports.
    #[arg(long, value_delimiter = ',')]
    format: Vec<String>,
    /// Treat advisories as errors (exit 2).
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    per_topology: bool,
    #[arg(long, default_value = "magnitude")]
    summation: Summation,
    /// Text recorded as the report generation time. Omitted by default so
    /// that repeated runs are byte-identical.
    #[arg(long)]
    generated_at: Option<String>,
    /// Add rounded display columns to reports.
    #[arg(long)]
    display_columns: bool,
}

enum Failure {
    Domain(String),
    Io(String),
}

impl From<arcstudy_core::Error> for Failure {
    fn from(e: arcstudy_core::Error) -> Self {
        match e {
            arcstudy_core::Error::Model(m) => Failure::Domain(
                m.diagnostics
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("\n"),
            ),
            arcstudy_core::Error::Matrix(m) => Failure::Domain(
                m.failures
                    .iter()
                    .map(|f| {
                        format!(
                            "bus `{}` / topology `{}`: {}",
                            f.bus_id, f.topology_name, f.error
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            ),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_study(path: &Path) -> Result<StudyFile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    load_study(&text).map_err(|e| Failure::from(arcstudy_core::Error::Model(e)))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Outcome {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

struct Formats {
    labels: Vec<LabelFormat>,
    reports: Vec<ReportFormat>,
}

fn parse_formats(list: &[String]) -> Result<Formats, Failure> {
    if list.is_empty() {
        return Ok(Formats {
            labels: vec![LabelFormat::Text, LabelFormat::Svg, LabelFormat::Json],
            reports: vec![ReportFormat::Csv, ReportFormat::Markdown],
        });
    }
    let mut f = Formats {
        labels: Vec::new(),
        reports: Vec::new(),
    };
    for name in list {
        if let Ok(l) = name.parse::<LabelFormat>() {
            if !f.labels.contains(&l) {
                f.labels.push(l);
            }
        } else if let Ok(r) = name.parse::<ReportFormat>() {
            if !f.reports.contains(&r) {
                f.reports.push(r);
            }
        } else {
            return Err(Failure::Domain(format!("unknown format `{name}`")));
        }
    }
    Ok(f)
}

fn options(args: &RunArgs) -> StudyOptions {
    StudyOptions {
        summation: args.summation,
        topology: args.topology.clone(),
        buses: args.buses.clone(),
        per_topology: args.per_topology,
    }
}

fn cmd_validate(path: &Path) -> Outcome {
    let study = read_study(path)?;
    let m = &study.model;
    println!(
        "model valid: {} sources, {} topologies, {} buses",
        m.sources().len(),
        m.topologies().len(),
        m.analysis_buses().count()
    );
    Ok(())
}

fn cmd_shortcircuit(args: &RunArgs) -> Outcome {
    let study = read_study(&args.study)?;
    let table = CoefficientTable::bundled();
    eprintln!("solving short circuits for `{}`", study.name);
    let results = run_short_circuit(&study, &options(args))?;
    let run = StudyRun {
        summation: args.summation,
        short_circuit: results,
        hazards: Vec::new(),
    };
    let report = build_report(&study, &run, table, args.generated_at.clone());
    let opts = ReportOptions {
        display_columns: args.display_columns,
    };
    write_atomic(
        &args.out.join("shortcircuit.csv"),
        &short_circuit_csv(&report, &opts),
    )?;
    write_atomic(
        &args.out.join("contributions.csv"),
        &contributions_csv(&report),
    )?;

    let worst =
        worst_case_per_bus(&run.short_circuit).map_err(|e| Failure::Domain(e.to_string()))?;
    println!("bus,topology,isc_3ph_a");
    for r in worst.values() {
        println!("{},{},{}", r.bus_id, r.topology_name, r.total_current_a);
    }
    eprintln!(
        "{} fault case(s) written to {}",
        run.short_circuit.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_hazard(args: &RunArgs, labels: bool, reports: bool) -> Outcome {
    let study = read_study(&args.study)?;
    let formats = parse_formats(&args.format)?;
    let table = CoefficientTable::bundled();
    eprintln!("running arc-flash study for `{}`", study.name);
    let run = run_study(&study, table, &options(args))?;

    if labels {
        let specs = build_labels(&study, &run)?;
        let dir = args.out.join("labels");
        for (spec, hazard) in specs.iter().zip(&run.hazards) {
            let stem = if args.per_topology {
                format!("{}.{}", spec.equipment_id, hazard.topology_name)
            } else {
                spec.equipment_id.clone()
            };
            for f in &formats.labels {
                write_atomic(
                    &dir.join(format!("{stem}.{}", f.extension())),
                    &render_label(spec, *f),
                )?;
            }
        }
        eprintln!("{} label(s) written to {}", specs.len(), dir.display());
    }
    if reports {
        let report = build_report(&study, &run, table, args.generated_at.clone());
        let opts = ReportOptions {
            display_columns: args.display_columns,
        };
        for f in &formats.reports {
            write_atomic(
                &args.out.join(format!("report.{}", f.extension())),
                &render_report(&report, *f, &opts),
            )?;
        }
        eprintln!("report written to {}", args.out.display());
    }

    let warnings: Vec<String> = run
        .hazards
        .iter()
        .flat_map(|h| {
            h.hazard
                .advisories
                .iter()
                .map(move |a| format!("{}: {a}", h.bus_id))
        })
        .collect();
    if !warnings.is_empty() {
        eprintln!("{} advisory(ies):", warnings.len());
        for w in &warnings {
            eprintln!("  {w}");
        }
        if args.strict {
            return Err(Failure::Domain(
                "advisories present and --strict given".into(),
            ));
        }
    }
    Ok(())
}

fn cmd_version() -> Outcome {
    let t = CoefficientTable::bundled();
    println!("arcstudy {ENGINE_VERSION}");
    println!("coefficients {} sha256:{}", t.version(), t.checksum());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate { study } => cmd_validate(study),
        Command::Shortcircuit(a) => cmd_shortcircuit(a),
        Command::Arcflash(a) => cmd_hazard(a, true, true),
        Command::Labels(a) => cmd_hazard(a, true, false),
        Command::Report(a) => cmd_hazard(a, false, true),
        Command::Version => cmd_version(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

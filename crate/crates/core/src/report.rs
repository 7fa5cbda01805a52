//! Study reports in CSV and Markdown.
//!
//! Numbers are written at full precision (shortest round-trip form). The
//! optional display columns repeat them at label rounding.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::arcflash::CoefficientTable;
use crate::fault::{SourceContribution, Summation};
use crate::label::RenderError;
use crate::network::StudyFile;
use crate::study::StudyRun;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(RenderError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Append rounded copies of the numeric columns.
    pub display_columns: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub study_name: String,
    pub study_sha256: String,
    pub coefficient_version: String,
    pub coefficient_sha256: String,
    pub engine_version: String,
    pub generated_at: Option<String>,
    pub summation: Summation,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcFlashRow {
    pub bus_id: String,
    pub description: String,
    pub topology: String,
    pub voc_v: f64,
    pub i_bf_ka: f64,
    pub i_arc_ka: f64,
    pub cf: f64,
    pub incident_energy_j_cm2: f64,
    pub incident_energy_cal_cm2: f64,
    pub afb_mm: f64,
    pub ppe_category: String,
    pub advisories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortCircuitRow {
    pub bus_id: String,
    pub description: String,
    pub voltage_v: f64,
    pub topology: String,
    pub total_current_a: f64,
    pub contributions: Vec<SourceContribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub meta: ReportMeta,
    pub arc_flash: Vec<ArcFlashRow>,
    pub short_circuit: Vec<ShortCircuitRow>,
}

/// Collects the report tables from a finished run.
pub fn build_report(
    study: &StudyFile,
    run: &StudyRun,
    table: &CoefficientTable,
    generated_at: Option<String>,
) -> StudyReport {
    let description = |id: &str| {
        study
            .model
            .bus(id)
            .map(|b| b.description.clone())
            .unwrap_or_default()
    };
    let arc_flash = run
        .hazards
        .iter()
        .map(|h| ArcFlashRow {
            bus_id: h.bus_id.clone(),
            description: h.description.clone(),
            topology: h.topology_name.clone(),
            voc_v: h.hazard.voc_kv * 1000.0,
            i_bf_ka: h.hazard.i_bf_ka,
            i_arc_ka: h.hazard.i_arc_ka,
            cf: h.hazard.cf,
            incident_energy_j_cm2: h.hazard.incident_energy_j_cm2,
            incident_energy_cal_cm2: h.hazard.incident_energy_cal_cm2,
            afb_mm: h.hazard.afb_mm,
            ppe_category: h.category.level.to_string(),
            advisories: h
                .hazard
                .advisories
                .iter()
                .map(ToString::to_string)
                .collect(),
        })
        .collect();
    let short_circuit = run
        .short_circuit
        .iter()
        .map(|f| ShortCircuitRow {
            bus_id: f.bus_id.clone(),
            description: description(&f.bus_id),
            voltage_v: f.fault_voltage_v,
            topology: f.topology_name.clone(),
            total_current_a: f.total_current_a,
            contributions: f.contributions.clone(),
        })
        .collect();
    StudyReport {
        meta: ReportMeta {
            study_name: study.name.clone(),
            study_sha256: study.checksum.clone(),
            coefficient_version: table.version().to_string(),
            coefficient_sha256: table.checksum().to_string(),
            engine_version: ENGINE_VERSION.to_string(),
            generated_at,
            summation: run.summation,
            notes: study.notes.clone(),
        },
        arc_flash,
        short_circuit,
    }
}

type Table = (Vec<String>, Vec<Vec<String>>);

fn num(v: f64) -> String {
    format!("{v}")
}

fn meta_table(m: &ReportMeta) -> Table {
    let mut rows = vec![
        vec!["study".into(), m.study_name.clone()],
        vec!["study_sha256".into(), m.study_sha256.clone()],
        vec!["coefficient_version".into(), m.coefficient_version.clone()],
        vec!["coefficient_sha256".into(), m.coefficient_sha256.clone()],
        vec!["engine_version".into(), m.engine_version.clone()],
        vec!["summation".into(), m.summation.to_string()],
    ];
    if let Some(t) = &m.generated_at {
        rows.push(vec!["generated_at".into(), t.clone()]);
    }
    (vec!["key".into(), "value".into()], rows)
}

fn arc_flash_table(rows: &[ArcFlashRow], opts: &ReportOptions) -> Table {
    let mut header: Vec<String> = [
        "bus",
        "description",
        "topology",
        "voc_v",
        "i_bf_ka",
        "i_arc_ka",
        "cf",
        "incident_energy_j_cm2",
        "incident_energy_cal_cm2",
        "afb_mm",
        "ppe_category",
        "advisories",
    ]
    .map(String::from)
    .to_vec();
    if opts.display_columns {
        header.extend(
            [
                "i_bf_ka_display",
                "i_arc_ka_display",
                "incident_energy_cal_cm2_display",
                "afb_cm_display",
            ]
            .map(String::from),
        );
    }
    let body = rows
        .iter()
        .map(|r| {
            let mut v = vec![
                r.bus_id.clone(),
                r.description.clone(),
                r.topology.clone(),
                num(r.voc_v),
                num(r.i_bf_ka),
                num(r.i_arc_ka),
                num(r.cf),
                num(r.incident_energy_j_cm2),
                num(r.incident_energy_cal_cm2),
                num(r.afb_mm),
                r.ppe_category.clone(),
                r.advisories.join("; "),
            ];
            if opts.display_columns {
                v.push(format!("{:.2}", r.i_bf_ka));
                v.push(format!("{:.2}", r.i_arc_ka));
                v.push(format!("{:.1}", r.incident_energy_cal_cm2));
                v.push(format!("{:.0}", r.afb_mm / 10.0));
            }
            v
        })
        .collect();
    (header, body)
}

fn short_circuit_table(rows: &[ShortCircuitRow], opts: &ReportOptions) -> Table {
    let mut header: Vec<String> = ["bus", "description", "voltage_v", "topology", "isc_3ph_a"]
        .map(String::from)
        .to_vec();
    if opts.display_columns {
        header.push("isc_3ph_a_display".into());
    }
    let body = rows
        .iter()
        .map(|r| {
            let mut v = vec![
                r.bus_id.clone(),
                r.description.clone(),
                num(r.voltage_v),
                r.topology.clone(),
                num(r.total_current_a),
            ];
            if opts.display_columns {
                v.push(format!("{:.0}", r.total_current_a));
            }
            v
        })
        .collect();
    (header, body)
}

fn contributions_table(rows: &[ShortCircuitRow]) -> Table {
    let header = [
        "bus",
        "topology",
        "source",
        "current_a",
        "limited",
        "path_r_ohm",
        "path_x_ohm",
    ]
    .map(String::from)
    .to_vec();
    let body = rows
        .iter()
        .flat_map(|r| {
            r.contributions.iter().map(move |c| {
                vec![
                    r.bus_id.clone(),
                    r.topology.clone(),
                    c.source_id.clone(),
                    num(c.current_a),
                    c.limited.to_string(),
                    num(c.path_impedance_ohm.re),
                    num(c.path_impedance_ohm.im),
                ]
            })
        })
        .collect();
    (header, body)
}

fn csv_bytes((header, body): &Table) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in body {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_table(out: &mut String, (header, body): &Table) {
    let cells = |row: &[String]| {
        row.iter()
            .map(|c| md_cell(c))
            .collect::<Vec<_>>()
            .join(" | ")
    };
    writeln!(out, "| {} |", cells(header)).unwrap();
    writeln!(out, "|{}", "---|".repeat(header.len())).unwrap();
    for row in body {
        writeln!(out, "| {} |", cells(row)).unwrap();
    }
}

pub fn render_report(report: &StudyReport, format: ReportFormat, opts: &ReportOptions) -> Vec<u8> {
    let sections = [
        ("Study", meta_table(&report.meta)),
        ("Arc-flash hazard", arc_flash_table(&report.arc_flash, opts)),
        (
            "Three-phase short circuit",
            short_circuit_table(&report.short_circuit, opts),
        ),
        (
            "Source contributions",
            contributions_table(&report.short_circuit),
        ),
    ];
    match format {
        ReportFormat::Csv => {
            let mut out = Vec::new();
            for (i, (title, table)) in sections.iter().enumerate() {
                if i > 0 {
                    out.push(b'\n');
                }
                out.extend_from_slice(format!("# {title}\n").as_bytes());
                out.extend(csv_bytes(table));
            }
            if !report.meta.notes.is_empty() {
                out.extend_from_slice(b"\n# Notes\n");
                let notes = (
                    vec!["note".to_string()],
                    report.meta.notes.iter().map(|n| vec![n.clone()]).collect(),
                );
                out.extend(csv_bytes(&notes));
            }
            out
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            writeln!(
                out,
                "# Arc-flash study: {}",
                md_cell(&report.meta.study_name)
            )
            .unwrap();
            for (title, table) in &sections {
                writeln!(out, "\n## {title}\n").unwrap();
                md_table(&mut out, table);
            }
            if !report.meta.notes.is_empty() {
                writeln!(out, "\n## Notes\n").unwrap();
                for n in &report.meta.notes {
                    writeln!(out, "- {n}").unwrap();
                }
            }
            out.into_bytes()
        }
    }
}

/// The short-circuit table alone, as CSV.
pub fn short_circuit_csv(report: &StudyReport, opts: &ReportOptions) -> Vec<u8> {
    csv_bytes(&short_circuit_table(&report.short_circuit, opts))
}

/// Per-source contributions, one row per (bus, topology, source).
pub fn contributions_csv(report: &StudyReport) -> Vec<u8> {
    csv_bytes(&contributions_table(&report.short_circuit))
}

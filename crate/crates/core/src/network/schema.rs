//! Study-file ingestion.
//!
//! The study file is TOML with the sections `study`, `buses`, `sources`,
//! `transformers`, `lines`, `topologies` and `arcflash_defaults`. Every
//! numeric field carries its unit in its name (`_v`, `_kva`, `_ohm`, `_m`,
//! `_mm`, `_a`, `_hz`). Unknown keys are rejected.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::{
    Bus, Diagnostic, LineSpec, ModelError, NetworkModel, Rule, SourceKind, SourceSpec, Topology,
    TransformerSpec, DEFAULT_FREQUENCY_HZ, DEFAULT_SOURCE_X_OVER_R,
};
use crate::arcflash::{cycles_to_ms, ArcFlashParams, ElectrodeConfig};
use crate::hazard::{ApproachBoundaries, BoundaryTable, CategoryRow, PpeTable};

/// Arc-flash inputs and labelling tables shared by every bus of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcFlashDefaults {
    pub electrode_config: ElectrodeConfig,
    pub gap_mm: f64,
    pub working_distance_mm: f64,
    pub arc_duration_cycles: f64,
    pub enclosure_size: f64,
    pub boundaries: BoundaryTable,
    pub ppe: PpeTable,
}

impl Default for ArcFlashDefaults {
    fn default() -> Self {
        ArcFlashDefaults {
            electrode_config: ElectrodeConfig::Vcb,
            gap_mm: 32.0,
            working_distance_mm: 457.2,
            arc_duration_cycles: 5.0,
            enclosure_size: 19.999,
            boundaries: BoundaryTable::default(),
            ppe: PpeTable::default(),
        }
    }
}

impl ArcFlashDefaults {
    /// Engine parameters for a bus of the given nominal voltage.
    pub fn params_for(&self, nominal_voltage_v: f64, frequency_hz: f64) -> ArcFlashParams {
        ArcFlashParams {
            open_circuit_voltage_kv: nominal_voltage_v / 1000.0,
            gap_mm: self.gap_mm,
            working_distance_mm: self.working_distance_mm,
            arc_duration_ms: cycles_to_ms(self.arc_duration_cycles, frequency_hz)
                .unwrap_or(f64::NAN),
            enclosure_size: self.enclosure_size,
            electrode_config: self.electrode_config,
        }
    }
}

/// A loaded, validated study file.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyFile {
    pub name: String,
    pub model: NetworkModel,
    pub arcflash: ArcFlashDefaults,
    /// Free-form remarks copied into reports.
    pub notes: Vec<String>,
    /// Hex SHA-256 of the study-file bytes.
    pub checksum: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StudyDoc {
    #[serde(default)]
    study: HeaderDoc,
    buses: Vec<BusDoc>,
    #[serde(default)]
    sources: Vec<SourceDoc>,
    #[serde(default)]
    transformers: Vec<TransformerDoc>,
    #[serde(default)]
    lines: Vec<LineDoc>,
    topologies: Vec<TopologyDoc>,
    arcflash_defaults: Option<DefaultsDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderDoc {
    #[serde(default)]
    name: String,
    #[serde(default = "default_frequency")]
    system_frequency_hz: f64,
    #[serde(default)]
    notes: Vec<String>,
}

impl Default for HeaderDoc {
    fn default() -> Self {
        HeaderDoc {
            name: String::new(),
            system_frequency_hz: DEFAULT_FREQUENCY_HZ,
            notes: Vec::new(),
        }
    }
}

fn default_frequency() -> f64 {
    DEFAULT_FREQUENCY_HZ
}

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BusDoc {
    id: String,
    nominal_voltage_v: f64,
    #[serde(default)]
    description: String,
    #[serde(default = "yes")]
    analysis: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceDoc {
    id: String,
    bus: String,
    kind: SourceKind,
    rated_voltage_v: f64,
    max_current_a: f64,
    #[serde(default = "one")]
    safety_factor: f64,
    x_over_r: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformerDoc {
    id: String,
    primary_bus: String,
    secondary_bus: String,
    rated_power_kva: f64,
    primary_voltage_v: f64,
    secondary_voltage_v: f64,
    impedance_pct: f64,
    x_over_r: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineDoc {
    id: String,
    from_bus: String,
    to_bus: String,
    #[serde(default)]
    length_m: f64,
    #[serde(default)]
    cable_type: String,
    resistance_ohm: f64,
    #[serde(default)]
    reactance_ohm: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyDoc {
    name: String,
    active_sources: Vec<String>,
    #[serde(default)]
    open_branches: Vec<String>,
    #[serde(default)]
    notes: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DefaultsDoc {
    electrode_config: Option<ElectrodeConfig>,
    gap_mm: Option<f64>,
    working_distance_mm: Option<f64>,
    arc_duration_cycles: Option<f64>,
    enclosure_size: Option<f64>,
    approach_boundaries: Option<Vec<ApproachBoundaries>>,
    ppe: Option<PpeDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PpeDoc {
    arc_rated_items: Vec<String>,
    additional_items: Vec<String>,
    categories: Vec<CategoryRow>,
}

/// Parses and validates a study document, returning only the network.
pub fn load_model(document: &str) -> Result<NetworkModel, ModelError> {
    load_study(document).map(|s| s.model)
}

/// Parses and validates a study document.
pub fn load_study(document: &str) -> Result<StudyFile, ModelError> {
    let checksum = hex::encode(Sha256::digest(document.as_bytes()));
    let deserializer = toml::Deserializer::new(document);
    let doc: StudyDoc = serde_path_to_error::deserialize(deserializer).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." {
            "<document>".to_string()
        } else {
            path
        };
        ModelError::single(
            path,
            Rule::Schema,
            e.into_inner().message().trim().to_string(),
        )
    })?;

    let buses = doc
        .buses
        .into_iter()
        .map(|b| Bus {
            id: b.id,
            nominal_voltage_v: b.nominal_voltage_v,
            description: b.description,
            analysis: b.analysis,
        })
        .collect();
    let sources = doc
        .sources
        .into_iter()
        .map(|s| SourceSpec {
            id: s.id,
            bus_id: s.bus,
            kind: s.kind,
            rated_voltage_v: s.rated_voltage_v,
            max_current_a: s.max_current_a,
            safety_factor: s.safety_factor,
            x_over_r: s.x_over_r.unwrap_or(DEFAULT_SOURCE_X_OVER_R),
        })
        .collect();
    let transformers = doc
        .transformers
        .into_iter()
        .map(|t| TransformerSpec {
            id: t.id,
            primary_bus_id: t.primary_bus,
            secondary_bus_id: t.secondary_bus,
            rated_power_va: t.rated_power_kva * 1000.0,
            primary_voltage_v: t.primary_voltage_v,
            secondary_voltage_v: t.secondary_voltage_v,
            impedance_pct: t.impedance_pct,
            x_over_r: t.x_over_r,
        })
        .collect();
    let lines = doc
        .lines
        .into_iter()
        .map(|l| LineSpec {
            id: l.id,
            from_bus_id: l.from_bus,
            to_bus_id: l.to_bus,
            length_m: l.length_m,
            cable_type: l.cable_type,
            resistance_ohm: l.resistance_ohm,
            reactance_ohm: l.reactance_ohm,
        })
        .collect();
    let topologies = doc
        .topologies
        .into_iter()
        .map(|t| Topology {
            name: t.name,
            active_source_ids: t.active_sources,
            open_branches: t.open_branches,
            notes: t.notes,
        })
        .collect();

    let (arcflash, mut diagnostics) = defaults_from(doc.arcflash_defaults);
    let model = match NetworkModel::from_parts(
        buses,
        sources,
        transformers,
        lines,
        topologies,
        doc.study.system_frequency_hz,
    ) {
        Ok(m) => Some(m),
        Err(e) => {
            diagnostics.splice(0..0, e.diagnostics);
            None
        }
    };
    match model {
        Some(model) if diagnostics.is_empty() => Ok(StudyFile {
            name: doc.study.name,
            model,
            arcflash,
            notes: doc.study.notes,
            checksum,
        }),
        _ => Err(ModelError { diagnostics }),
    }
}

fn defaults_from(doc: Option<DefaultsDoc>) -> (ArcFlashDefaults, Vec<Diagnostic>) {
    let mut out = ArcFlashDefaults::default();
    let mut diagnostics = Vec::new();
    let Some(doc) = doc else {
        return (out, diagnostics);
    };
    let mut bad = |field: &str, message: String| {
        diagnostics.push(Diagnostic {
            path: format!("arcflash_defaults.{field}"),
            rule: Rule::InvalidValue,
            message,
        })
    };
    if let Some(c) = doc.electrode_config {
        out.electrode_config = c;
    }
    for (field, value, slot, allow_zero) in [
        ("gap_mm", doc.gap_mm, &mut out.gap_mm, false),
        (
            "working_distance_mm",
            doc.working_distance_mm,
            &mut out.working_distance_mm,
            false,
        ),
        (
            "arc_duration_cycles",
            doc.arc_duration_cycles,
            &mut out.arc_duration_cycles,
            true,
        ),
        (
            "enclosure_size",
            doc.enclosure_size,
            &mut out.enclosure_size,
            false,
        ),
    ] {
        if let Some(v) = value {
            let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
            if !ok {
                bad(
                    field,
                    format!(
                        "must be {}, got {v}",
                        if allow_zero {
                            "non-negative"
                        } else {
                            "positive"
                        }
                    ),
                );
            }
            *slot = v;
        }
    }
    if let Some(rows) = doc.approach_boundaries {
        match BoundaryTable::new(rows) {
            Ok(t) => out.boundaries = t,
            Err(e) => bad("approach_boundaries", e.to_string()),
        }
    }
    if let Some(ppe) = doc.ppe {
        match PpeTable::new(ppe.arc_rated_items, ppe.additional_items, ppe.categories) {
            Ok(t) => out.ppe = t,
            Err(e) => bad("ppe", e.to_string()),
        }
    }
    (out, diagnostics)
}

//! Published GLEAMM results used as reference values.

#![allow(dead_code)]

use arcstudy_core::arcflash::CoefficientTable;
use arcstudy_core::fault::{FaultStudyResult, Summation};
use arcstudy_core::label::{build_label, LabelSpec};
use arcstudy_core::network::{load_study, StudyFile};
use arcstudy_core::study::{assess_bus, BusHazard};

pub const STUDY_TEXT: &str = include_str!("../../../../data/gleamm.study");

pub fn study() -> StudyFile {
    load_study(STUDY_TEXT).expect("bundled GLEAMM study is valid")
}

/// Three-phase short-circuit results: (bus, topology, amperes).
pub const PUBLISHED_SHORT_CIRCUIT: [(&str, &str, f64); 20] = [
    ("MCC", "grid_connected", 22793.0),
    ("MCC", "islanded", 1296.0),
    ("Gen", "grid_connected", 22783.0),
    ("Gen", "islanded", 1296.0),
    ("Solar", "grid_connected", 22773.0),
    ("Solar", "islanded", 1296.0),
    ("Wind", "grid_connected", 22757.0),
    ("Wind", "islanded", 1296.0),
    ("OB", "grid_connected", 22741.0),
    ("OB", "islanded", 1295.0),
    ("OB208", "grid_connected", 52386.0),
    ("OB208", "islanded", 2989.0),
    ("HA", "grid_connected", 22741.0),
    ("HA", "islanded", 1295.0),
    ("LA", "grid_connected", 52365.0),
    ("LA", "islanded", 2989.0),
    ("L1", "grid_connected", 22783.0),
    ("L1", "islanded", 1296.0),
    ("L2", "grid_connected", 22783.0),
    ("L2", "islanded", 1296.0),
];

pub struct PublishedArcFlashRow {
    pub bus: &'static str,
    pub voc_v: f64,
    pub i_bf_ka: f64,
    /// `None` where the published cell is not trusted.
    pub i_arc_ka: Option<f64>,
    pub e_cal_cm2: f64,
    pub afb_cm: f64,
    pub category: u8,
}

const fn row(
    bus: &'static str,
    voc_v: f64,
    i_bf_ka: f64,
    i_arc_ka: Option<f64>,
    e: f64,
    afb_cm: f64,
) -> PublishedArcFlashRow {
    PublishedArcFlashRow {
        bus,
        voc_v,
        i_bf_ka,
        i_arc_ka,
        e_cal_cm2: e,
        afb_cm,
        category: 1,
    }
}

/// Arc-flash results. The OutBack 480 V arcing current (18.82 kA) is left
/// out: the same inputs give about 16.8 kA on every other 480 V row.
pub const PUBLISHED_ARC_FLASH: [PublishedArcFlashRow; 10] = [
    row("MCC", 480.0, 22.79, Some(16.81), 3.6, 91.0),
    row("Gen", 480.0, 22.78, Some(16.85), 3.6, 91.0),
    row("Solar", 480.0, 22.77, Some(16.85), 3.6, 91.0),
    row("Wind", 480.0, 22.76, Some(16.82), 3.6, 91.0),
    row("OB", 480.0, 22.74, None, 3.6, 91.0),
    row("OB208", 208.0, 52.38, Some(16.12), 3.8, 94.0),
    row("HA", 480.0, 22.74, Some(16.82), 3.6, 91.0),
    row("LA", 208.0, 52.36, Some(16.12), 3.8, 94.0),
    row("L1", 480.0, 22.78, Some(16.85), 3.6, 91.0),
    row("L2", 480.0, 22.78, Some(16.85), 3.6, 91.0),
];

/// Worst-case bolted-fault current of a bus taken from the published
/// short-circuit table.
pub fn published_worst_a(bus: &str) -> f64 {
    PUBLISHED_SHORT_CIRCUIT
        .iter()
        .filter(|r| r.0 == bus)
        .map(|r| r.2)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Runs the arc-flash chain for a bus from a given bolted-fault current,
/// bypassing the solver.
pub fn hazard_from_current(study: &StudyFile, bus: &str, i_bf_a: f64) -> BusHazard {
    let fault = FaultStudyResult {
        bus_id: bus.to_string(),
        topology_name: "grid_connected".to_string(),
        fault_voltage_v: study.model.bus(bus).unwrap().nominal_voltage_v,
        summation: Summation::Magnitude,
        contributions: vec![],
        total_current_a: i_bf_a,
    };
    assess_bus(study, &fault, CoefficientTable::bundled()).unwrap()
}

/// The MCC label built from the published MCC fault current.
pub fn mcc_label() -> LabelSpec {
    let study = study();
    let h = hazard_from_current(&study, "MCC", published_worst_a("MCC"));
    build_label(
        &h,
        &study.arcflash.ppe.arc_rated_items,
        &study.arcflash.ppe.additional_items,
    )
    .unwrap()
}

/// Field values and checkbox states printed on the published MCC label.
pub const MCC_LABEL_VALUES: [(&str, &str); 8] = [
    ("nominal_voltage", "480 V"),
    ("incident_energy", "3.6"),
    ("arc_flash_boundary", "0.91 m"),
    ("working_distance", "0.46 m"),
    ("limited_approach", "1 m"),
    ("restricted_approach", "0.3 m"),
    ("ppe_category", "1"),
    ("clothing_rating", "4 cal/cm\u{b2}"),
];

pub const MCC_LABEL_ARC_RATED: [(&str, bool); 12] = [
    ("Face shield", true),
    ("Long-sleeve shirt", true),
    ("Flash suit jacket", false),
    ("Flash suit pants", false),
    ("Flash suit hood", false),
    ("Pants", true),
    ("Coverall", false),
    ("Balaclava", false),
    ("Gloves", false),
    ("Jacket", false),
    ("Parka", false),
    ("Rainwear", false),
];

pub const MCC_LABEL_ADDITIONAL: [(&str, bool); 6] = [
    ("Leather footwear", true),
    ("Hard hat", false),
    ("Safety goggles", false),
    ("Safety glasses", false),
    ("Hearing protection", true),
    ("Heavy duty leather gloves", true),
];

/// Differences between a label and the published MCC label, empty when
/// every field and checkbox agrees.
pub fn mcc_label_mismatches(spec: &LabelSpec) -> Vec<String> {
    let d = &spec.display;
    let actual = [
        &d.nominal_voltage,
        &d.incident_energy,
        &d.arc_flash_boundary,
        &d.working_distance,
        &d.limited_approach,
        &d.restricted_approach,
        &d.ppe_category,
        &d.clothing_rating,
    ];
    let mut out = vec![];
    for ((name, want), got) in MCC_LABEL_VALUES.iter().zip(actual) {
        if got != want {
            out.push(format!("{name}: expected `{want}`, got `{got}`"));
        }
    }
    let boxes = |expected: &[(&str, bool)],
                 got: &[arcstudy_core::label::Checkbox],
                 out: &mut Vec<String>| {
        let got: Vec<(&str, bool)> = got.iter().map(|c| (c.item.as_str(), c.checked)).collect();
        if got != expected {
            out.push(format!("checkboxes: expected {expected:?}, got {got:?}"));
        }
    };
    boxes(&MCC_LABEL_ARC_RATED, &spec.arc_rated_ppe, &mut out);
    boxes(&MCC_LABEL_ADDITIONAL, &spec.additional_ppe, &mut out);
    if spec.equipment_id != "MCC" {
        out.push(format!("equipment id: got `{}`", spec.equipment_id));
    }
    out
}

//! End-to-end study pipeline: fault matrix, worst-case selection, arc-flash
//! chain, PPE classification and labels.

use serde::Serialize;

use crate::arcflash::{compute_hazard, CoefficientTable, HazardResult};
use crate::fault::{solve_pairs, worst_case_per_bus, FaultStudyResult, Summation};
use crate::hazard::{ApproachBoundaries, PpeCategory};
use crate::label::{build_label, LabelSpec};
use crate::network::StudyFile;
use crate::Error;

/// Which part of the study matrix to run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StudyOptions {
    pub summation: Summation,
    /// Restrict to one topology. `None` runs all of them.
    pub topology: Option<String>,
    /// Restrict to these buses. Empty means every analysis bus.
    pub buses: Vec<String>,
    /// Report every (bus, topology) pair instead of the worst case per bus.
    pub per_topology: bool,
}

/// Everything known about one bus after the arc-flash chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BusHazard {
    pub bus_id: String,
    pub description: String,
    pub nominal_voltage_v: f64,
    /// Topology whose fault current fed the arc-flash chain.
    pub topology_name: String,
    pub fault: FaultStudyResult,
    pub hazard: HazardResult,
    pub category: PpeCategory,
    pub boundaries: ApproachBoundaries,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRun {
    pub summation: Summation,
    /// Every solved (bus, topology) pair in bus-then-topology order.
    pub short_circuit: Vec<FaultStudyResult>,
    pub hazards: Vec<BusHazard>,
}

fn selected_pairs(study: &StudyFile, opts: &StudyOptions) -> Result<Vec<(String, String)>, Error> {
    let model = &study.model;
    for id in &opts.buses {
        match model.bus(id) {
            None => {
                return Err(Error::Selection(format!(
                    "no buses selected: unknown bus `{id}`"
                )))
            }
            Some(b) if !b.analysis => {
                return Err(Error::Selection(format!(
                    "no buses selected: `{id}` is not an analysis bus"
                )))
            }
            Some(_) => {}
        }
    }
    if let Some(t) = &opts.topology {
        if model.topology(t).is_none() {
            return Err(Error::Selection(format!("unknown topology `{t}`")));
        }
    }
    let pairs = model
        .analysis_buses()
        .filter(|b| opts.buses.is_empty() || opts.buses.contains(&b.id))
        .flat_map(|b| {
            model
                .topologies()
                .iter()
                .filter(|t| opts.topology.as_ref().is_none_or(|want| want == &t.name))
                .map(move |t| (b.id.clone(), t.name.clone()))
        })
        .collect::<Vec<_>>();
    if pairs.is_empty() {
        return Err(Error::Selection("no buses selected".into()));
    }
    Ok(pairs)
}

/// Solves the selected short-circuit cases.
pub fn run_short_circuit(
    study: &StudyFile,
    opts: &StudyOptions,
) -> Result<Vec<FaultStudyResult>, Error> {
    let pairs = selected_pairs(study, opts)?;
    Ok(solve_pairs(&study.model, &pairs, opts.summation)?)
}

/// Runs the arc-flash chain for one fault result.
pub fn assess_bus(
    study: &StudyFile,
    fault: &FaultStudyResult,
    table: &CoefficientTable,
) -> Result<BusHazard, Error> {
    let bus = study
        .model
        .bus(&fault.bus_id)
        .ok_or_else(|| Error::Selection(format!("unknown bus `{}`", fault.bus_id)))?;
    let params = study
        .arcflash
        .params_for(bus.nominal_voltage_v, study.model.system_frequency_hz());
    let hazard =
        compute_hazard(fault.total_current_a / 1000.0, &params, table).map_err(|source| {
            Error::ArcFlash {
                bus: bus.id.clone(),
                source,
            }
        })?;
    let category = study
        .arcflash
        .ppe
        .ppe_category(hazard.incident_energy_cal_cm2)
        .map_err(|source| Error::Hazard {
            bus: bus.id.clone(),
            source,
        })?;
    let boundaries = study
        .arcflash
        .boundaries
        .approach_boundaries(bus.nominal_voltage_v)
        .map_err(|source| Error::Hazard {
            bus: bus.id.clone(),
            source,
        })?;
    Ok(BusHazard {
        bus_id: bus.id.clone(),
        description: bus.description.clone(),
        nominal_voltage_v: bus.nominal_voltage_v,
        topology_name: fault.topology_name.clone(),
        fault: fault.clone(),
        hazard,
        category,
        boundaries,
    })
}

/// Short-circuit matrix plus the arc-flash chain for every selected bus.
pub fn run_study(
    study: &StudyFile,
    table: &CoefficientTable,
    opts: &StudyOptions,
) -> Result<StudyRun, Error> {
    let short_circuit = run_short_circuit(study, opts)?;
    let basis: Vec<FaultStudyResult> = if opts.per_topology {
        short_circuit.clone()
    } else {
        worst_case_per_bus(&short_circuit)?.into_values().collect()
    };
    let hazards = basis
        .iter()
        .map(|f| assess_bus(study, f, table))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StudyRun {
        summation: opts.summation,
        short_circuit,
        hazards,
    })
}

/// One label per assessed bus, in run order.
pub fn build_labels(study: &StudyFile, run: &StudyRun) -> Result<Vec<LabelSpec>, Error> {
    let ppe = &study.arcflash.ppe;
    run.hazards
        .iter()
        .map(|h| build_label(h, &ppe.arc_rated_items, &ppe.additional_items).map_err(Error::from))
        .collect()
}

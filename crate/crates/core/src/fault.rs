//! Three-phase symmetrical bolted-fault currents on a radial network.
//!
//! Each active source reaches the faulted bus along the unique tree path.
//! Its path impedance (source impedance for Thevenin sources, plus every
//! cable and transformer on the way) is referred to the fault-bus voltage,
//! and the per-source currents are combined by the selected
//! [`Summation`] rule. Pre-fault voltage is the bus nominal voltage.

use std::collections::VecDeque;
use std::fmt;

use indexmap::IndexMap;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{
    reflect_impedance, source_thevenin_impedance, transformer_impedance, Branch, ImpedanceError,
    NetworkModel, Side, SourceKind, Topology,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summation {
    /// Arithmetic sum of contribution magnitudes.
    #[default]
    Magnitude,
    /// Magnitude of the phasor sum, for sensitivity checks.
    Phasor,
}

impl fmt::Display for Summation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Summation::Magnitude => "magnitude",
            Summation::Phasor => "phasor",
        })
    }
}

impl std::str::FromStr for Summation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "magnitude" => Ok(Summation::Magnitude),
            "phasor" => Ok(Summation::Phasor),
            other => Err(format!(
                "unknown summation rule `{other}` (expected magnitude|phasor)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FaultError {
    #[error("unknown bus `{0}`")]
    UnknownBus(String),
    #[error("unknown topology `{0}`")]
    UnknownTopology(String),
    #[error("topology `{topology}`: bus `{bus}` is not reachable from source `{source_id}`")]
    Unreachable {
        topology: String,
        bus: String,
        source_id: String,
    },
    #[error("topology `{0}` is not radial around the faulted bus")]
    NonRadial(String),
    #[error("topology `{0}` has no active source")]
    NoSources(String),
    #[error(transparent)]
    Impedance(#[from] ImpedanceError),
    #[error("no fault results to select from")]
    EmptyResults,
}

/// Series impedance from one source to the faulted bus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourcePath {
    pub source_id: String,
    pub kind: SourceKind,
    /// Ohms referred to the fault-bus voltage. Includes the source's own
    /// impedance for Thevenin sources.
    pub impedance_ohm: Complex64,
    /// Lines and transformers traversed, from source to fault.
    pub branches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceContribution {
    pub source_id: String,
    /// Amperes RMS at the fault-bus voltage.
    pub current_a: f64,
    pub path_impedance_ohm: Complex64,
    /// True when the current is the source's capped effective fault current.
    pub limited: bool,
    /// Current phasor relative to the pre-fault voltage, amperes.
    pub phasor_a: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultStudyResult {
    pub bus_id: String,
    pub topology_name: String,
    pub fault_voltage_v: f64,
    pub summation: Summation,
    /// Sorted by descending current.
    pub contributions: Vec<SourceContribution>,
    pub total_current_a: f64,
}

fn resolve<'m>(
    model: &'m NetworkModel,
    topology: &str,
    bus: &str,
) -> Result<(&'m Topology, usize), FaultError> {
    let topo = model
        .topology(topology)
        .ok_or_else(|| FaultError::UnknownTopology(topology.to_string()))?;
    let bus_pos = model
        .bus_position(bus)
        .ok_or_else(|| FaultError::UnknownBus(bus.to_string()))?;
    Ok((topo, bus_pos))
}

/// Path impedance of every active source of `topology` to `fault_bus`,
/// in the topology's source order.
pub fn build_reduced_network(
    model: &NetworkModel,
    topology: &str,
    fault_bus: &str,
) -> Result<Vec<SourcePath>, FaultError> {
    let (topo, root) = resolve(model, topology, fault_bus)?;
    let buses = model.buses();
    let v_fault = buses[root].nominal_voltage_v;
    let adj = model.adjacency(topo);

    // BFS tree rooted at the fault; parent[u] = (next bus toward fault, branch)
    let mut parent: Vec<Option<(usize, Branch)>> = vec![None; buses.len()];
    let mut seen = vec![false; buses.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let (mut nodes, mut edge_ends) = (1usize, 0usize);
    while let Some(u) = queue.pop_front() {
        for &(v, branch) in &adj[u] {
            edge_ends += 1;
            if !seen[v] {
                seen[v] = true;
                nodes += 1;
                parent[v] = Some((u, branch));
                queue.push_back(v);
            }
        }
    }
    if edge_ends / 2 >= nodes {
        return Err(FaultError::NonRadial(topo.name.clone()));
    }

    let mut paths = Vec::with_capacity(topo.active_source_ids.len());
    for source_id in &topo.active_source_ids {
        let source = model
            .source(source_id)
            .ok_or_else(|| FaultError::Unreachable {
                topology: topo.name.clone(),
                bus: fault_bus.to_string(),
                source_id: source_id.clone(),
            })?;
        let mut at = model
            .bus_position(&source.bus_id)
            .ok_or_else(|| FaultError::UnknownBus(source.bus_id.clone()))?;
        if !seen[at] {
            return Err(FaultError::Unreachable {
                topology: topo.name.clone(),
                bus: fault_bus.to_string(),
                source_id: source_id.clone(),
            });
        }

        let mut z = match source.kind {
            SourceKind::TheveninVoltage => reflect_impedance(
                source_thevenin_impedance(source)?,
                source.rated_voltage_v,
                v_fault,
            )?,
            SourceKind::CurrentLimited => Complex64::new(0.0, 0.0),
        };
        let mut branches = Vec::new();
        while let Some((next, branch)) = parent[at] {
            let element = match branch {
                Branch::Line(k) => {
                    let line = &model.lines()[k];
                    let v = buses[at].nominal_voltage_v;
                    reflect_impedance(
                        Complex64::new(line.resistance_ohm, line.reactance_ohm),
                        v,
                        v_fault,
                    )?
                }
                Branch::Transformer(k) => {
                    let t = &model.transformers()[k];
                    reflect_impedance(
                        transformer_impedance(t, Side::Secondary),
                        t.secondary_voltage_v,
                        v_fault,
                    )?
                }
            };
            z += element;
            branches.push(model.branch_id(branch).to_string());
            at = next;
        }
        paths.push(SourcePath {
            source_id: source_id.clone(),
            kind: source.kind,
            impedance_ohm: z,
            branches,
        });
    }
    Ok(paths)
}

/// Bolted three-phase fault current at `fault_bus` under `topology`.
pub fn bolted_fault_current(
    model: &NetworkModel,
    topology: &str,
    fault_bus: &str,
    summation: Summation,
) -> Result<FaultStudyResult, FaultError> {
    let paths = build_reduced_network(model, topology, fault_bus)?;
    if paths.is_empty() {
        return Err(FaultError::NoSources(topology.to_string()));
    }
    let fault_bus_spec = model.bus(fault_bus).expect("resolved above");
    let v_fault = fault_bus_spec.nominal_voltage_v;
    let v_phase = v_fault / 3f64.sqrt();

    let mut contributions: Vec<SourceContribution> = paths
        .into_iter()
        .map(|path| {
            let source = model
                .source(&path.source_id)
                .expect("resolved by build_reduced_network");
            let z = path.impedance_ohm;
            let through_path = if z.norm() == 0.0 {
                f64::INFINITY
            } else {
                v_phase / z.norm()
            };
            let (current_a, limited, phasor_a) = match source.kind {
                SourceKind::TheveninVoltage => {
                    (through_path, false, Complex64::new(v_phase, 0.0) / z)
                }
                SourceKind::CurrentLimited => {
                    let source_v = model
                        .bus(&source.bus_id)
                        .map_or(v_fault, |b| b.nominal_voltage_v);
                    let cap = source.effective_fault_current_a() * source_v / v_fault;
                    if cap <= through_path {
                        (cap, true, Complex64::new(cap, 0.0))
                    } else {
                        (through_path, false, Complex64::new(v_phase, 0.0) / z)
                    }
                }
            };
            SourceContribution {
                source_id: path.source_id,
                current_a,
                path_impedance_ohm: z,
                limited,
                phasor_a,
            }
        })
        .collect();

    let total_current_a = match summation {
        Summation::Magnitude => contributions.iter().map(|c| c.current_a).sum(),
        Summation::Phasor => contributions
            .iter()
            .map(|c| c.phasor_a)
            .sum::<Complex64>()
            .norm(),
    };
    contributions.sort_by(|a, b| b.current_a.total_cmp(&a.current_a));

    Ok(FaultStudyResult {
        bus_id: fault_bus.to_string(),
        topology_name: topology.to_string(),
        fault_voltage_v: v_fault,
        summation,
        contributions,
        total_current_a,
    })
}

/// One failing (bus, topology) pair of a study matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFailure {
    pub bus_id: String,
    pub topology_name: String,
    pub error: FaultError,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} fault case(s) failed; first: bus `{}` / topology `{}`: {}",
    .failures.len(), .failures[0].bus_id, .failures[0].topology_name, .failures[0].error)]
pub struct StudyMatrixError {
    pub failures: Vec<PairFailure>,
}

/// Solves the given (bus, topology) pairs. Output order equals input order
/// regardless of how the work is scheduled.
pub fn solve_pairs(
    model: &NetworkModel,
    pairs: &[(String, String)],
    summation: Summation,
) -> Result<Vec<FaultStudyResult>, StudyMatrixError> {
    let outcomes: Vec<Result<FaultStudyResult, PairFailure>> = pairs
        .par_iter()
        .map(|(bus, topology)| {
            bolted_fault_current(model, topology, bus, summation).map_err(|error| PairFailure {
                bus_id: bus.clone(),
                topology_name: topology.clone(),
                error,
            })
        })
        .collect();
    let mut results = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => results.push(r),
            Err(f) => failures.push(f),
        }
    }
    if failures.is_empty() {
        Ok(results)
    } else {
        Err(StudyMatrixError { failures })
    }
}

/// Every analysis bus under every topology, ordered by bus declaration
/// then topology declaration.
pub fn run_study_matrix(
    model: &NetworkModel,
    summation: Summation,
) -> Result<Vec<FaultStudyResult>, StudyMatrixError> {
    let pairs: Vec<(String, String)> = model
        .analysis_buses()
        .flat_map(|b| {
            model
                .topologies()
                .iter()
                .map(move |t| (b.id.clone(), t.name.clone()))
        })
        .collect();
    solve_pairs(model, &pairs, summation)
}

/// Highest-current result per bus. Ties keep the earlier result, so with
/// input in topology declaration order the first-declared topology wins.
pub fn worst_case_per_bus(
    results: &[FaultStudyResult],
) -> Result<IndexMap<String, FaultStudyResult>, FaultError> {
    if results.is_empty() {
        return Err(FaultError::EmptyResults);
    }
    let mut best: IndexMap<String, FaultStudyResult> = IndexMap::new();
    for r in results {
        match best.get(&r.bus_id) {
            Some(current) if current.total_current_a >= r.total_current_a => {}
            _ => {
                best.insert(r.bus_id.clone(), r.clone());
            }
        }
    }
    Ok(best)
}

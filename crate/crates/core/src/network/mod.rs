//! Typed one-line diagram of a facility.
//!
//! A [`NetworkModel`] is built once, validated, and is read-only afterwards.
//! Construction goes through [`NetworkModel::from_parts`] or the study-file
//! loader in [`schema`]; both run the same validation pass and report every
//! violation found rather than stopping at the first one.

pub mod impedance;
pub mod schema;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use impedance::{
    reflect_impedance, source_thevenin_impedance, split_impedance, transformer_impedance,
    ImpedanceError, Side, DEFAULT_SOURCE_X_OVER_R,
};
pub use schema::{load_model, load_study, StudyFile};

/// Default system frequency in hertz.
pub const DEFAULT_FREQUENCY_HZ: f64 = 60.0;

/// Relative tolerance used when checking that transformer ratings match the
/// nominal voltages of the buses they join.
const VOLTAGE_MATCH_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bus {
    pub id: String,
    /// Line-to-line RMS volts.
    pub nominal_voltage_v: f64,
    pub description: String,
    /// Whether the bus takes part in the fault/arc-flash study matrix.
    pub analysis: bool,
}

impl Bus {
    pub fn new(id: impl Into<String>, nominal_voltage_v: f64) -> Self {
        Bus {
            id: id.into(),
            nominal_voltage_v,
            description: String::new(),
            analysis: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    /// Voltage source behind an impedance (utility, synchronous generator).
    TheveninVoltage,
    /// Inverter-based source modelled as a capped current injection.
    CurrentLimited,
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceKind::TheveninVoltage => "thevenin_voltage",
            SourceKind::CurrentLimited => "current_limited",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub id: String,
    pub bus_id: String,
    pub kind: SourceKind,
    pub rated_voltage_v: f64,
    /// Datasheet maximum short-circuit current, amperes RMS.
    pub max_current_a: f64,
    pub safety_factor: f64,
    /// R/X split of the Thevenin impedance; ignored for current-limited sources.
    pub x_over_r: f64,
}

impl SourceSpec {
    pub fn new(
        id: impl Into<String>,
        bus_id: impl Into<String>,
        kind: SourceKind,
        rated_voltage_v: f64,
        max_current_a: f64,
        safety_factor: f64,
    ) -> Self {
        SourceSpec {
            id: id.into(),
            bus_id: bus_id.into(),
            kind,
            rated_voltage_v,
            max_current_a,
            safety_factor,
            x_over_r: DEFAULT_SOURCE_X_OVER_R,
        }
    }

    pub fn with_x_over_r(mut self, x_over_r: f64) -> Self {
        self.x_over_r = x_over_r;
        self
    }

    /// `max_current_a * safety_factor`, unrounded.
    pub fn effective_fault_current_a(&self) -> f64 {
        self.max_current_a * self.safety_factor
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformerSpec {
    pub id: String,
    pub primary_bus_id: String,
    pub secondary_bus_id: String,
    /// Volt-amperes.
    pub rated_power_va: f64,
    pub primary_voltage_v: f64,
    pub secondary_voltage_v: f64,
    /// Nameplate impedance in percent on the transformer's own base.
    pub impedance_pct: f64,
    pub x_over_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub id: String,
    pub from_bus_id: String,
    pub to_bus_id: String,
    pub length_m: f64,
    pub cable_type: String,
    /// Total per-phase resistance, ohms.
    pub resistance_ohm: f64,
    /// Total per-phase reactance, ohms. Zero unless the study file says otherwise.
    pub reactance_ohm: f64,
}

impl LineSpec {
    pub fn resistive(
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        resistance_ohm: f64,
    ) -> Self {
        LineSpec {
            id: id.into(),
            from_bus_id: from.into(),
            to_bus_id: to.into(),
            length_m: 0.0,
            cable_type: String::new(),
            resistance_ohm,
            reactance_ohm: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub name: String,
    /// Active sources in declaration order.
    pub active_source_ids: Vec<String>,
    /// Lines or transformers taken out of service in this topology.
    pub open_branches: Vec<String>,
    pub notes: String,
}

impl Topology {
    pub fn new<I, S>(name: impl Into<String>, active: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Topology {
            name: name.into(),
            active_source_ids: active.into_iter().map(Into::into).collect(),
            open_branches: Vec::new(),
            notes: String::new(),
        }
    }
}

/// A branch of the one-line diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Line(usize),
    Transformer(usize),
}

/// What rule a diagnostic reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Schema,
    DuplicateId,
    DanglingReference,
    InvalidValue,
    VoltageMismatch,
    SlackSource,
    Disconnected,
    NonRadial,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Schema => "schema",
            Rule::DuplicateId => "duplicate-id",
            Rule::DanglingReference => "dangling-reference",
            Rule::InvalidValue => "invalid-value",
            Rule::VoltageMismatch => "voltage-mismatch",
            Rule::SlackSource => "slack-source",
            Rule::Disconnected => "disconnected",
            Rule::NonRadial => "non-radial",
        })
    }
}

/// One validation finding, located by a path into the study document
/// (for example `lines[2].to_bus`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.path, self.rule, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} model violation(s); first: {}", .diagnostics.len(), .diagnostics[0])]
pub struct ModelError {
    pub diagnostics: Vec<Diagnostic>,
}

impl ModelError {
    pub(crate) fn single(path: impl Into<String>, rule: Rule, message: impl Into<String>) -> Self {
        ModelError {
            diagnostics: vec![Diagnostic {
                path: path.into(),
                rule,
                message: message.into(),
            }],
        }
    }
}

/// Validated, immutable one-line diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    buses: Vec<Bus>,
    sources: Vec<SourceSpec>,
    transformers: Vec<TransformerSpec>,
    lines: Vec<LineSpec>,
    topologies: Vec<Topology>,
    system_frequency_hz: f64,
    bus_index: HashMap<String, usize>,
}

impl NetworkModel {
    /// Validates the parts and assembles a model.
    pub fn from_parts(
        buses: Vec<Bus>,
        sources: Vec<SourceSpec>,
        transformers: Vec<TransformerSpec>,
        lines: Vec<LineSpec>,
        topologies: Vec<Topology>,
        system_frequency_hz: f64,
    ) -> Result<Self, ModelError> {
        let bus_index = buses
            .iter()
            .enumerate()
            .map(|(i, b)| (b.id.clone(), i))
            .collect();
        let model = NetworkModel {
            buses,
            sources,
            transformers,
            lines,
            topologies,
            system_frequency_hz,
            bus_index,
        };
        let diagnostics = model.validate();
        if diagnostics.is_empty() {
            Ok(model)
        } else {
            Err(ModelError { diagnostics })
        }
    }

    pub fn buses(&self) -> &[Bus] {
        &self.buses
    }

    pub fn sources(&self) -> &[SourceSpec] {
        &self.sources
    }

    pub fn transformers(&self) -> &[TransformerSpec] {
        &self.transformers
    }

    pub fn lines(&self) -> &[LineSpec] {
        &self.lines
    }

    pub fn topologies(&self) -> &[Topology] {
        &self.topologies
    }

    pub fn system_frequency_hz(&self) -> f64 {
        self.system_frequency_hz
    }

    pub fn bus(&self, id: &str) -> Option<&Bus> {
        self.bus_index.get(id).map(|&i| &self.buses[i])
    }

    pub fn bus_position(&self, id: &str) -> Option<usize> {
        self.bus_index.get(id).copied()
    }

    pub fn source(&self, id: &str) -> Option<&SourceSpec> {
        self.sources.iter().find(|s| s.id == id)
    }

    pub fn topology(&self, name: &str) -> Option<&Topology> {
        self.topologies.iter().find(|t| t.name == name)
    }

    /// Buses taking part in the study matrix, in declaration order.
    pub fn analysis_buses(&self) -> impl Iterator<Item = &Bus> {
        self.buses.iter().filter(|b| b.analysis)
    }

    /// The single active Thevenin source of a topology.
    pub fn slack_source(&self, topology: &Topology) -> Option<&SourceSpec> {
        let mut slack = topology
            .active_source_ids
            .iter()
            .filter_map(|id| self.source(id))
            .filter(|s| s.kind == SourceKind::TheveninVoltage);
        match (slack.next(), slack.next()) {
            (Some(s), None) => Some(s),
            _ => None,
        }
    }

    /// Adjacency lists over in-service branches of a topology, indexed by
    /// bus position. Neighbours keep branch declaration order (lines first).
    pub fn adjacency(&self, topology: &Topology) -> Vec<Vec<(usize, Branch)>> {
        let open: HashSet<&str> = topology.open_branches.iter().map(String::as_str).collect();
        let mut adj = vec![Vec::new(); self.buses.len()];
        let mut link = |a: &str, b: &str, branch: Branch| {
            if let (Some(&i), Some(&j)) = (self.bus_index.get(a), self.bus_index.get(b)) {
                adj[i].push((j, branch));
                adj[j].push((i, branch));
            }
        };
        for (k, l) in self.lines.iter().enumerate() {
            if !open.contains(l.id.as_str()) {
                link(&l.from_bus_id, &l.to_bus_id, Branch::Line(k));
            }
        }
        for (k, t) in self.transformers.iter().enumerate() {
            if !open.contains(t.id.as_str()) {
                link(
                    &t.primary_bus_id,
                    &t.secondary_bus_id,
                    Branch::Transformer(k),
                );
            }
        }
        adj
    }

    /// Identifier of a branch, for diagnostics.
    pub fn branch_id(&self, branch: Branch) -> &str {
        match branch {
            Branch::Line(k) => &self.lines[k].id,
            Branch::Transformer(k) => &self.transformers[k].id,
        }
    }

    fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |path: String, rule: Rule, message: String| {
            out.push(Diagnostic {
                path,
                rule,
                message,
            })
        };

        if !(self.system_frequency_hz > 0.0) || !self.system_frequency_hz.is_finite() {
            push(
                "study.system_frequency_hz".into(),
                Rule::InvalidValue,
                format!(
                    "frequency must be positive, got {}",
                    self.system_frequency_hz
                ),
            );
        }
        if self.buses.is_empty() {
            push(
                "buses".into(),
                Rule::InvalidValue,
                "at least one bus is required".into(),
            );
        }

        let mut seen = HashSet::new();
        for (i, b) in self.buses.iter().enumerate() {
            if !seen.insert(b.id.as_str()) {
                push(
                    format!("buses[{i}].id"),
                    Rule::DuplicateId,
                    format!("duplicate bus id `{}`", b.id),
                );
            }
            if !(b.nominal_voltage_v > 0.0) || !b.nominal_voltage_v.is_finite() {
                push(
                    format!("buses[{i}].nominal_voltage_v"),
                    Rule::InvalidValue,
                    format!(
                        "nominal voltage must be positive, got {}",
                        b.nominal_voltage_v
                    ),
                );
            }
        }

        // Sources, transformers and lines share one identifier namespace so
        // that `open_branches` and report rows are unambiguous.
        let mut element_ids = HashSet::new();
        for (i, s) in self.sources.iter().enumerate() {
            let p = format!("sources[{i}]");
            if !element_ids.insert(s.id.as_str()) {
                push(
                    format!("{p}.id"),
                    Rule::DuplicateId,
                    format!("duplicate id `{}`", s.id),
                );
            }
            match self.bus(&s.bus_id) {
                None => push(
                    format!("{p}.bus"),
                    Rule::DanglingReference,
                    format!("source `{}` references unknown bus `{}`", s.id, s.bus_id),
                ),
                Some(bus) => {
                    if !voltages_match(bus.nominal_voltage_v, s.rated_voltage_v) {
                        push(
                            format!("{p}.rated_voltage_v"),
                            Rule::VoltageMismatch,
                            format!(
                                "rated voltage {} V differs from bus `{}` nominal {} V",
                                s.rated_voltage_v, bus.id, bus.nominal_voltage_v
                            ),
                        );
                    }
                }
            }
            if !(s.max_current_a > 0.0) || !s.max_current_a.is_finite() {
                push(
                    format!("{p}.max_current_a"),
                    Rule::InvalidValue,
                    format!("max current must be positive, got {}", s.max_current_a),
                );
            }
            if !(s.safety_factor >= 1.0) || !s.safety_factor.is_finite() {
                push(
                    format!("{p}.safety_factor"),
                    Rule::InvalidValue,
                    format!("safety factor must be >= 1, got {}", s.safety_factor),
                );
            }
            if !(s.x_over_r > 0.0) {
                push(
                    format!("{p}.x_over_r"),
                    Rule::InvalidValue,
                    format!("X/R must be positive, got {}", s.x_over_r),
                );
            }
        }

        for (i, t) in self.transformers.iter().enumerate() {
            let p = format!("transformers[{i}]");
            if !element_ids.insert(t.id.as_str()) {
                push(
                    format!("{p}.id"),
                    Rule::DuplicateId,
                    format!("duplicate id `{}`", t.id),
                );
            }
            for (field, bus_id, rated) in [
                ("primary_bus", &t.primary_bus_id, t.primary_voltage_v),
                ("secondary_bus", &t.secondary_bus_id, t.secondary_voltage_v),
            ] {
                match self.bus(bus_id) {
                    None => push(
                        format!("{p}.{field}"),
                        Rule::DanglingReference,
                        format!("transformer `{}` references unknown bus `{}`", t.id, bus_id),
                    ),
                    Some(bus) if !voltages_match(bus.nominal_voltage_v, rated) => push(
                        format!("{p}.{field}"),
                        Rule::VoltageMismatch,
                        format!(
                            "winding rated {} V but bus `{}` is nominal {} V",
                            rated, bus.id, bus.nominal_voltage_v
                        ),
                    ),
                    Some(_) => {}
                }
            }
            if t.primary_bus_id == t.secondary_bus_id {
                push(
                    format!("{p}.secondary_bus"),
                    Rule::InvalidValue,
                    "transformer windings connect the same bus".into(),
                );
            }
            if !(t.rated_power_va > 0.0) {
                push(
                    format!("{p}.rated_power_kva"),
                    Rule::InvalidValue,
                    format!("rated power must be positive, got {} VA", t.rated_power_va),
                );
            }
            if !(t.impedance_pct > 0.0 && t.impedance_pct < 100.0) {
                push(
                    format!("{p}.impedance_pct"),
                    Rule::InvalidValue,
                    format!(
                        "impedance must lie in (0, 100) percent, got {}",
                        t.impedance_pct
                    ),
                );
            }
            if !(t.x_over_r > 0.0) {
                push(
                    format!("{p}.x_over_r"),
                    Rule::InvalidValue,
                    format!("X/R must be positive, got {}", t.x_over_r),
                );
            }
        }

        for (i, l) in self.lines.iter().enumerate() {
            let p = format!("lines[{i}]");
            if !element_ids.insert(l.id.as_str()) {
                push(
                    format!("{p}.id"),
                    Rule::DuplicateId,
                    format!("duplicate id `{}`", l.id),
                );
            }
            let from = self.bus(&l.from_bus_id);
            let to = self.bus(&l.to_bus_id);
            if from.is_none() {
                push(
                    format!("{p}.from_bus"),
                    Rule::DanglingReference,
                    format!("line `{}` references unknown bus `{}`", l.id, l.from_bus_id),
                );
            }
            if to.is_none() {
                push(
                    format!("{p}.to_bus"),
                    Rule::DanglingReference,
                    format!("line `{}` references unknown bus `{}`", l.id, l.to_bus_id),
                );
            }
            if let (Some(a), Some(b)) = (from, to) {
                if a.id == b.id {
                    push(
                        format!("{p}.to_bus"),
                        Rule::InvalidValue,
                        "line connects a bus to itself".into(),
                    );
                } else if !voltages_match(a.nominal_voltage_v, b.nominal_voltage_v) {
                    push(
                        p.to_string(),
                        Rule::VoltageMismatch,
                        format!(
                            "line `{}` joins {} V bus `{}` to {} V bus `{}`",
                            l.id, a.nominal_voltage_v, a.id, b.nominal_voltage_v, b.id
                        ),
                    );
                }
            }
            if !(l.resistance_ohm >= 0.0) || !(l.reactance_ohm >= 0.0) {
                push(
                    format!("{p}.resistance_ohm"),
                    Rule::InvalidValue,
                    format!(
                        "line impedance must be non-negative, got {} + j{} ohm",
                        l.resistance_ohm, l.reactance_ohm
                    ),
                );
            }
            if !(l.length_m >= 0.0) {
                push(
                    format!("{p}.length_m"),
                    Rule::InvalidValue,
                    format!("length must be non-negative, got {}", l.length_m),
                );
            }
        }

        if self.topologies.is_empty() {
            push(
                "topologies".into(),
                Rule::InvalidValue,
                "at least one topology is required".into(),
            );
        }
        let mut names = HashSet::new();
        for (i, t) in self.topologies.iter().enumerate() {
            let p = format!("topologies[{i}]");
            if !names.insert(t.name.as_str()) {
                push(
                    format!("{p}.name"),
                    Rule::DuplicateId,
                    format!("duplicate topology `{}`", t.name),
                );
            }
            if t.active_source_ids.is_empty() {
                push(
                    format!("{p}.active_sources"),
                    Rule::InvalidValue,
                    format!("topology `{}` has no active source", t.name),
                );
            }
            let mut active = HashSet::new();
            let mut resolved = true;
            for (j, id) in t.active_source_ids.iter().enumerate() {
                if !active.insert(id.as_str()) {
                    push(
                        format!("{p}.active_sources[{j}]"),
                        Rule::DuplicateId,
                        format!("source `{id}` listed twice"),
                    );
                }
                if self.source(id).is_none() {
                    resolved = false;
                    push(
                        format!("{p}.active_sources[{j}]"),
                        Rule::DanglingReference,
                        format!("unknown source `{id}`"),
                    );
                }
            }
            for (j, id) in t.open_branches.iter().enumerate() {
                let known = self.lines.iter().any(|l| &l.id == id)
                    || self.transformers.iter().any(|x| &x.id == id);
                if !known {
                    push(
                        format!("{p}.open_branches[{j}]"),
                        Rule::DanglingReference,
                        format!("unknown line or transformer `{id}`"),
                    );
                }
            }
            let slack_count = t
                .active_source_ids
                .iter()
                .filter_map(|id| self.source(id))
                .filter(|s| s.kind == SourceKind::TheveninVoltage)
                .count();
            if resolved && slack_count != 1 {
                push(
                    format!("{p}.active_sources"),
                    Rule::SlackSource,
                    format!(
                        "topology `{}` needs exactly one active thevenin_voltage source, found {slack_count}",
                        t.name
                    ),
                );
            }
            if resolved && slack_count == 1 && self.references_resolve() {
                self.check_tree(t, &p, &mut push);
            }
        }
        out
    }

    // Graph checks are only meaningful once every bus reference resolves.
    fn references_resolve(&self) -> bool {
        let known = |id: &String| self.bus_index.contains_key(id);
        self.bus_index.len() == self.buses.len()
            && self
                .lines
                .iter()
                .all(|l| known(&l.from_bus_id) && known(&l.to_bus_id))
            && self
                .transformers
                .iter()
                .all(|t| known(&t.primary_bus_id) && known(&t.secondary_bus_id))
            && self.sources.iter().all(|s| known(&s.bus_id))
    }

    /// Connectivity from the slack bus and absence of loops.
    fn check_tree(&self, t: &Topology, path: &str, push: &mut impl FnMut(String, Rule, String)) {
        let Some(slack) = self.slack_source(t) else {
            return;
        };
        let Some(&root) = self.bus_index.get(&slack.bus_id) else {
            return;
        };
        let adj = self.adjacency(t);
        let mut seen = vec![false; self.buses.len()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        let mut edges_in_component = 0usize;
        let mut visited = 1usize;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                edges_in_component += 1;
                if !seen[v] {
                    seen[v] = true;
                    visited += 1;
                    queue.push_back(v);
                }
            }
        }
        // every edge counted from both ends
        edges_in_component /= 2;
        let unreachable: Vec<&str> = self
            .buses
            .iter()
            .zip(&seen)
            .filter(|(_, &s)| !s)
            .map(|(b, _)| b.id.as_str())
            .collect();
        if !unreachable.is_empty() {
            push(
                path.to_string(),
                Rule::Disconnected,
                format!(
                    "topology `{}`: bus(es) {} unreachable from slack bus `{}`",
                    t.name,
                    unreachable.join(", "),
                    slack.bus_id
                ),
            );
        }
        if edges_in_component >= visited {
            push(
                path.to_string(),
                Rule::NonRadial,
                format!(
                    "topology `{}` contains a loop ({} branches over {} buses); only radial networks are supported",
                    t.name, edges_in_component, visited
                ),
            );
        }
    }
}

fn voltages_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= VOLTAGE_MATCH_RTOL * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_bus() -> (Vec<Bus>, Vec<SourceSpec>, Vec<LineSpec>) {
        (
            vec![Bus::new("A", 480.0), Bus::new("B", 480.0)],
            vec![SourceSpec::new(
                "s",
                "A",
                SourceKind::TheveninVoltage,
                480.0,
                1000.0,
                1.0,
            )],
            vec![LineSpec::resistive("A-B", "A", "B", 0.01)],
        )
    }

    #[test]
    fn effective_current_is_exact_product() {
        let wind = SourceSpec::new("w", "W", SourceKind::CurrentLimited, 480.0, 660.0, 1.4);
        assert_eq!(wind.effective_fault_current_a(), 660.0 * 1.4);
    }

    #[test]
    fn accepts_minimal_model() {
        let m = NetworkModel::from_parts(
            vec![Bus::new("A", 480.0)],
            vec![SourceSpec::new(
                "s",
                "A",
                SourceKind::TheveninVoltage,
                480.0,
                1000.0,
                1.0,
            )],
            vec![],
            vec![],
            vec![Topology::new("only", ["s"])],
            60.0,
        )
        .unwrap();
        assert_eq!(m.buses().len(), 1);
        assert_eq!(m.slack_source(&m.topologies()[0]).unwrap().id, "s");
    }

    #[test]
    fn rejects_loop() {
        let (mut buses, sources, mut lines) = two_bus();
        buses.push(Bus::new("C", 480.0));
        lines.push(LineSpec::resistive("B-C", "B", "C", 0.01));
        lines.push(LineSpec::resistive("C-A", "C", "A", 0.01));
        let err = NetworkModel::from_parts(
            buses,
            sources,
            vec![],
            lines,
            vec![Topology::new("t", ["s"])],
            60.0,
        )
        .unwrap_err();
        assert_eq!(err.diagnostics.len(), 1);
        assert_eq!(err.diagnostics[0].rule, Rule::NonRadial);
    }

    #[test]
    fn open_branch_breaks_loop_but_can_disconnect() {
        let (buses, sources, mut lines) = two_bus();
        lines.push(LineSpec::resistive("A-B2", "A", "B", 0.02));
        let mut t = Topology::new("t", ["s"]);
        t.open_branches.push("A-B2".into());
        assert!(NetworkModel::from_parts(
            buses.clone(),
            sources.clone(),
            vec![],
            lines.clone(),
            vec![t],
            60.0
        )
        .is_ok());

        let mut both = Topology::new("t", ["s"]);
        both.open_branches = vec!["A-B".into(), "A-B2".into()];
        let err =
            NetworkModel::from_parts(buses, sources, vec![], lines, vec![both], 60.0).unwrap_err();
        assert_eq!(err.diagnostics[0].rule, Rule::Disconnected);
    }

    #[test]
    fn rejects_two_slacks() {
        let (buses, mut sources, lines) = two_bus();
        sources.push(SourceSpec::new(
            "g",
            "B",
            SourceKind::TheveninVoltage,
            480.0,
            200.0,
            1.0,
        ));
        let err = NetworkModel::from_parts(
            buses,
            sources,
            vec![],
            lines,
            vec![Topology::new("t", ["s", "g"])],
            60.0,
        )
        .unwrap_err();
        assert_eq!(err.diagnostics[0].rule, Rule::SlackSource);
    }

    #[test]
    fn collects_every_violation() {
        let buses = vec![Bus::new("A", 480.0), Bus::new("A", -1.0)];
        let sources = vec![SourceSpec::new(
            "s",
            "A",
            SourceKind::TheveninVoltage,
            480.0,
            1000.0,
            0.5,
        )];
        let lines = vec![LineSpec::resistive("L", "A", "Nowhere", 0.01)];
        let err = NetworkModel::from_parts(
            buses,
            sources,
            vec![],
            lines,
            vec![Topology::new("t", ["s", "x"])],
            60.0,
        )
        .unwrap_err();
        let rules: Vec<Rule> = err.diagnostics.iter().map(|d| d.rule).collect();
        assert!(rules.contains(&Rule::DuplicateId));
        assert!(rules.contains(&Rule::InvalidValue));
        assert!(rules.contains(&Rule::DanglingReference));
        assert!(err.diagnostics.len() >= 4);
    }

    #[test]
    fn transformer_rating_must_match_buses() {
        let buses = vec![Bus::new("HV", 4160.0), Bus::new("LV", 480.0)];
        let sources = vec![SourceSpec::new(
            "s",
            "HV",
            SourceKind::TheveninVoltage,
            4160.0,
            1000.0,
            1.0,
        )];
        let t = TransformerSpec {
            id: "T".into(),
            primary_bus_id: "HV".into(),
            secondary_bus_id: "LV".into(),
            rated_power_va: 500e3,
            primary_voltage_v: 4160.0,
            secondary_voltage_v: 208.0,
            impedance_pct: 5.0,
            x_over_r: 5.0,
        };
        let err = NetworkModel::from_parts(
            buses,
            sources,
            vec![t],
            vec![],
            vec![Topology::new("t", ["s"])],
            60.0,
        )
        .unwrap_err();
        assert_eq!(err.diagnostics[0].rule, Rule::VoltageMismatch);
        assert_eq!(err.diagnostics[0].path, "transformers[0].secondary_bus");
    }
}

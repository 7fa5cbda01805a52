//! Small hand-built networks with brute-force reference answers.
//!
//! Each network is described once and turned into both a `NetworkModel`
//! and a per-unit nodal circuit. The networks are chosen so that every
//! current-limited source sees the faulted bus as its only return path,
//! which is where the per-path reduction is exact.

#![allow(dead_code)]

use arcstudy_core::network::{
    Bus, LineSpec, NetworkModel, SourceKind, SourceSpec, Topology, TransformerSpec,
};
use num_complex::Complex64 as C;

use super::nodal::{i_base, source_z_pu, transformer_z_pu, z_base, Nodal, Node};

#[derive(Clone)]
enum El {
    Line(&'static str, &'static str, C),
    Xfmr {
        primary: &'static str,
        secondary: &'static str,
        rated_va: f64,
        pct: f64,
        x_over_r: f64,
    },
    Thevenin {
        bus: &'static str,
        isc_a: f64,
        x_over_r: f64,
    },
    Limited {
        bus: &'static str,
        amps: f64,
        safety: f64,
    },
}

pub struct OracleCase {
    pub name: &'static str,
    pub model: NetworkModel,
    pub topology: &'static str,
    pub fault_bus: &'static str,
    /// |sum of contribution phasors| in amperes.
    pub phasor_total_a: f64,
    /// Sum of contribution magnitudes in amperes.
    pub magnitude_total_a: f64,
}

struct Spec {
    buses: Vec<(&'static str, f64)>,
    elements: Vec<El>,
}

impl Spec {
    fn voltage(&self, bus: &str) -> f64 {
        self.buses.iter().find(|b| b.0 == bus).unwrap().1
    }

    fn model(&self) -> NetworkModel {
        let mut sources = vec![];
        let mut lines = vec![];
        let mut transformers = vec![];
        for (k, el) in self.elements.iter().enumerate() {
            match el {
                El::Line(a, b, z) => lines.push(LineSpec {
                    id: format!("L{k}"),
                    from_bus_id: a.to_string(),
                    to_bus_id: b.to_string(),
                    length_m: 0.0,
                    cable_type: String::new(),
                    resistance_ohm: z.re,
                    reactance_ohm: z.im,
                }),
                El::Xfmr {
                    primary,
                    secondary,
                    rated_va,
                    pct,
                    x_over_r,
                } => transformers.push(TransformerSpec {
                    id: format!("T{k}"),
                    primary_bus_id: primary.to_string(),
                    secondary_bus_id: secondary.to_string(),
                    rated_power_va: *rated_va,
                    primary_voltage_v: self.voltage(primary),
                    secondary_voltage_v: self.voltage(secondary),
                    impedance_pct: *pct,
                    x_over_r: *x_over_r,
                }),
                El::Thevenin {
                    bus,
                    isc_a,
                    x_over_r,
                } => sources.push(
                    SourceSpec::new(
                        format!("S{k}"),
                        *bus,
                        SourceKind::TheveninVoltage,
                        self.voltage(bus),
                        *isc_a,
                        1.0,
                    )
                    .with_x_over_r(*x_over_r),
                ),
                El::Limited { bus, amps, safety } => sources.push(SourceSpec::new(
                    format!("S{k}"),
                    *bus,
                    SourceKind::CurrentLimited,
                    self.voltage(bus),
                    *amps,
                    *safety,
                )),
            }
        }
        let ids: Vec<String> = sources.iter().map(|s| s.id.clone()).collect();
        NetworkModel::from_parts(
            self.buses.iter().map(|(id, v)| Bus::new(*id, *v)).collect(),
            sources,
            transformers,
            lines,
            vec![Topology::new("all", ids)],
            60.0,
        )
        .expect("oracle network is valid")
    }

    /// Nodal circuit with only `active` sources energised. Inactive voltage
    /// sources keep their impedance; inactive current sources are open.
    fn nodal(&self, fault: &str, active: &dyn Fn(usize) -> bool) -> Nodal {
        let others: Vec<&str> = self
            .buses
            .iter()
            .map(|b| b.0)
            .filter(|b| *b != fault)
            .collect();
        let node = |bus: &str| {
            if bus == fault {
                Node::Fault
            } else {
                Node::N(others.iter().position(|b| *b == bus).unwrap())
            }
        };
        let mut net = Nodal::new(others.len());
        for (k, el) in self.elements.iter().enumerate() {
            match *el {
                El::Line(a, b, z) => {
                    net.branch(node(a), node(b), z / z_base(self.voltage(a)));
                }
                El::Xfmr {
                    primary,
                    secondary,
                    rated_va,
                    pct,
                    x_over_r,
                } => {
                    net.branch(
                        node(primary),
                        node(secondary),
                        transformer_z_pu(rated_va, pct, x_over_r),
                    );
                }
                El::Thevenin {
                    bus,
                    isc_a,
                    x_over_r,
                } => {
                    let e = if active(k) {
                        C::new(1.0, 0.0)
                    } else {
                        C::new(0.0, 0.0)
                    };
                    net.voltage_source(
                        node(bus),
                        e,
                        source_z_pu(self.voltage(bus), isc_a, x_over_r),
                    );
                }
                El::Limited { bus, amps, safety } => {
                    if active(k) {
                        net.current_source(
                            node(bus),
                            C::new(amps * safety / i_base(self.voltage(bus)), 0.0),
                        );
                    }
                }
            }
        }
        net
    }

    fn case(&self, name: &'static str, fault: &'static str) -> OracleCase {
        let to_amps = i_base(self.voltage(fault));
        let phasor = self.nodal(fault, &|_| true).fault_current().norm() * to_amps;
        let magnitude = (0..self.elements.len())
            .filter(|k| matches!(self.elements[*k], El::Thevenin { .. } | El::Limited { .. }))
            .map(|k| self.nodal(fault, &|j| j == k).fault_current().norm() * to_amps)
            .sum();
        OracleCase {
            name,
            model: self.model(),
            topology: "all",
            fault_bus: fault,
            phasor_total_a: phasor,
            magnitude_total_a: magnitude,
        }
    }
}

fn pure_thevenin() -> Spec {
    Spec {
        buses: vec![("U", 480.0), ("A", 480.0), ("B", 480.0)],
        elements: vec![
            El::Thevenin {
                bus: "U",
                isc_a: 30_000.0,
                x_over_r: 10.0,
            },
            El::Line("U", "A", C::new(0.002, 0.001)),
            El::Line("A", "B", C::new(0.003, 0.0005)),
        ],
    }
}

fn mixed_sources() -> Spec {
    Spec {
        buses: vec![("U", 480.0), ("H", 480.0), ("P", 480.0), ("W", 480.0)],
        elements: vec![
            El::Thevenin {
                bus: "U",
                isc_a: 20_000.0,
                x_over_r: 8.0,
            },
            El::Limited {
                bus: "P",
                amps: 400.0,
                safety: 1.25,
            },
            El::Limited {
                bus: "W",
                amps: 660.0,
                safety: 1.4,
            },
            El::Line("U", "H", C::new(0.0015, 0.0008)),
            El::Line("P", "H", C::new(0.004, 0.0)),
            El::Line("W", "H", C::new(0.006, 0.0)),
        ],
    }
}

fn behind_transformer() -> Spec {
    Spec {
        buses: vec![("Up", 12_470.0), ("S", 480.0), ("F", 480.0)],
        elements: vec![
            El::Thevenin {
                bus: "Up",
                isc_a: 10_000.0,
                x_over_r: 10.0,
            },
            El::Xfmr {
                primary: "Up",
                secondary: "S",
                rated_va: 1.0e6,
                pct: 5.75,
                x_over_r: 6.0,
            },
            El::Line("S", "F", C::new(0.004, 0.002)),
        ],
    }
}

/// One or two fault locations on each of the three networks.
pub fn oracle_cases() -> Vec<OracleCase> {
    let a = pure_thevenin();
    let b = mixed_sources();
    let c = behind_transformer();
    vec![
        a.case("pure Thevenin, far bus", "B"),
        a.case("pure Thevenin, middle bus", "A"),
        b.case("Thevenin + current-limited, hub", "H"),
        c.case("behind transformer, feeder end", "F"),
        c.case("behind transformer, secondary", "S"),
    ]
}

//! IEEE 1584-2018 arc-flash equations for open-circuit voltages up to 600 V.
//!
//! Units at this boundary: currents in kA, gap and distances in mm, arc
//! duration in ms, incident energy in J/cm² (cal/cm² is derived with
//! 1 cal = 4.184 J). All logarithms are base 10.
//!
//! The chain is
//! enclosure correction -> 600 V arcing current -> arcing current at Voc
//! -> incident energy -> arc-flash boundary.

pub mod coefficients;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coefficients::{
    ArcingCoefficients, CoefficientError, CoefficientSet, CoefficientTable, EnclosureCoefficients,
    EnergyCoefficients, Equation,
};

/// Joules per calorie.
pub const JOULES_PER_CALORIE: f64 = 4.184;

/// Incident energy that defines the arc-flash boundary, J/cm².
pub const BOUNDARY_ENERGY_J_CM2: f64 = 5.0;

/// Open-circuit voltage of the reference arcing-current equation, kV.
const VOC_REFERENCE_KV: f64 = 0.6;

/// Below this open-circuit voltage an arc is unlikely to be sustained; the
/// engine still computes but flags the result.
pub const SUSTAINED_ARC_VOC_KV: f64 = 0.240;

/// Model range of the low-voltage equations.
pub const VOC_RANGE_KV: (f64, f64) = (0.208, 0.6);
pub const BOLTED_FAULT_RANGE_KA: (f64, f64) = (0.5, 106.0);
pub const GAP_RANGE_MM: (f64, f64) = (6.35, 76.2);
pub const MIN_WORKING_DISTANCE_MM: f64 = 305.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ElectrodeConfig {
    #[serde(rename = "VCB")]
    Vcb,
    #[serde(rename = "VCBB")]
    Vcbb,
    #[serde(rename = "VOA")]
    Voa,
    #[serde(rename = "HCB")]
    Hcb,
    #[serde(rename = "HOA")]
    Hoa,
}

impl fmt::Display for ElectrodeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElectrodeConfig::Vcb => "VCB",
            ElectrodeConfig::Vcbb => "VCBB",
            ElectrodeConfig::Voa => "VOA",
            ElectrodeConfig::Hcb => "HCB",
            ElectrodeConfig::Hoa => "HOA",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArcFlashError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} = {value} is outside ({min}, {max}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error(
        "arcing current undefined: negative radicand for I_arc_600 = {i_arc_600_ka} kA, \
         I_bf = {i_bf_ka} kA, Voc = {voc_kv} kV"
    )]
    NegativeRadicand {
        i_arc_600_ka: f64,
        i_bf_ka: f64,
        voc_kv: f64,
    },
    #[error("no {equation} coefficients for electrode configuration {config}")]
    MissingCoefficients {
        config: ElectrodeConfig,
        equation: &'static str,
    },
    #[error("arc-flash boundary is undefined for a zero arc duration")]
    ZeroDuration,
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<ArcFlashError>,
    },
}

impl ArcFlashError {
    fn at(self, stage: &'static str) -> Self {
        ArcFlashError::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

impl From<(ElectrodeConfig, Equation)> for ArcFlashError {
    fn from((config, equation): (ElectrodeConfig, Equation)) -> Self {
        ArcFlashError::MissingCoefficients {
            config,
            equation: equation.name(),
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64, ArcFlashError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ArcFlashError::NonPositive { name, value })
    }
}

/// Study-wide inputs of the arc-flash chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcFlashParams {
    pub open_circuit_voltage_kv: f64,
    pub gap_mm: f64,
    pub working_distance_mm: f64,
    pub arc_duration_ms: f64,
    /// Equivalent enclosure size, as used by the correction polynomial.
    pub enclosure_size: f64,
    pub electrode_config: ElectrodeConfig,
}

impl ArcFlashParams {
    pub fn validate(&self) -> Result<(), ArcFlashError> {
        let voc = self.open_circuit_voltage_kv;
        if !(voc > 0.0 && voc <= VOC_REFERENCE_KV) {
            return Err(ArcFlashError::OutOfDomain {
                name: "open-circuit voltage (kV)",
                value: voc,
                min: 0.0,
                max: VOC_REFERENCE_KV,
            });
        }
        positive("gap (mm)", self.gap_mm)?;
        positive("working distance (mm)", self.working_distance_mm)?;
        positive("enclosure size", self.enclosure_size)?;
        if !(self.arc_duration_ms >= 0.0) || !self.arc_duration_ms.is_finite() {
            return Err(ArcFlashError::NonPositive {
                name: "arc duration (ms)",
                value: self.arc_duration_ms,
            });
        }
        Ok(())
    }
}

/// Something about an input that the standard's model does not cover well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Advisory {
    /// Arc unlikely to be sustained at this voltage; value computed anyway.
    LowVoltage { voc_kv: f64 },
    /// Input outside the range the equations were fitted over.
    OutOfRange {
        parameter: String,
        value: f64,
        min: Option<f64>,
        max: Option<f64>,
    },
}

impl fmt::Display for Advisory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Advisory::LowVoltage { voc_kv } => write!(
                f,
                "low voltage: Voc {} V is below {} V; a sustained arc is unlikely",
                fmt_trim(voc_kv * 1000.0),
                fmt_trim(SUSTAINED_ARC_VOC_KV * 1000.0)
            ),
            Advisory::OutOfRange {
                parameter,
                value,
                min,
                max,
            } => {
                let range = match (min, max) {
                    (Some(lo), Some(hi)) => format!("[{lo}, {hi}]"),
                    (Some(lo), None) => format!(">= {lo}"),
                    (None, Some(hi)) => format!("<= {hi}"),
                    (None, None) => "unbounded".into(),
                };
                write!(f, "out of range: {parameter} = {value} outside {range}")
            }
        }
    }
}

fn fmt_trim(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Intermediate and final values of the arc-flash chain for one bus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HazardResult {
    pub i_bf_ka: f64,
    pub voc_kv: f64,
    pub cf: f64,
    pub i_arc_600_ka: f64,
    pub i_arc_ka: f64,
    /// Reduced arcing current variation; not computed by this engine.
    pub i_arc_min_ka: Option<f64>,
    pub incident_energy_j_cm2: f64,
    pub incident_energy_cal_cm2: f64,
    pub afb_mm: f64,
    pub params: ArcFlashParams,
    pub advisories: Vec<Advisory>,
}

/// Converts an arc duration in cycles to milliseconds.
pub fn cycles_to_ms(cycles: f64, frequency_hz: f64) -> Result<f64, ArcFlashError> {
    if !(cycles >= 0.0) {
        return Err(ArcFlashError::NonPositive {
            name: "cycles",
            value: cycles,
        });
    }
    positive("frequency (Hz)", frequency_hz)?;
    Ok(1000.0 * cycles / frequency_hz)
}

/// Enclosure size correction factor `b1·ess² + b2·ess + b3`.
pub fn correction_factor(ess: f64, b: &EnclosureCoefficients) -> Result<f64, ArcFlashError> {
    positive("enclosure size", ess)?;
    let [b1, b2, b3] = b.b;
    Ok((b1 * ess + b2) * ess + b3)
}

// k4·x⁶ + k5·x⁵ + ... + k9·x + k10 for k4..k10 given in that order.
fn poly6(k: &[f64], x: f64) -> f64 {
    debug_assert_eq!(k.len(), 7);
    k.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Average RMS arcing current at a 600 V open-circuit voltage, kA.
pub fn arcing_current_600(
    i_bf_ka: f64,
    gap_mm: f64,
    k: &ArcingCoefficients,
) -> Result<f64, ArcFlashError> {
    positive("bolted fault current (kA)", i_bf_ka)?;
    positive("gap (mm)", gap_mm)?;
    let k = &k.k;
    let scale = 10f64.powf(k[0] + k[1] * i_bf_ka.log10() + k[2] * gap_mm.log10());
    Ok(scale * poly6(&k[3..10], i_bf_ka))
}

/// Arcing current at the actual open-circuit voltage (≤ 0.6 kV), kA.
pub fn arcing_current_le600(
    i_arc_600_ka: f64,
    i_bf_ka: f64,
    voc_kv: f64,
) -> Result<f64, ArcFlashError> {
    positive("600 V arcing current (kA)", i_arc_600_ka)?;
    positive("bolted fault current (kA)", i_bf_ka)?;
    if !(voc_kv > 0.0 && voc_kv <= VOC_REFERENCE_KV) {
        return Err(ArcFlashError::OutOfDomain {
            name: "open-circuit voltage (kV)",
            value: voc_kv,
            min: 0.0,
            max: VOC_REFERENCE_KV,
        });
    }
    if voc_kv == VOC_REFERENCE_KV {
        return Ok(i_arc_600_ka);
    }
    let v0 = VOC_REFERENCE_KV;
    let bracket = 1.0 / (i_arc_600_ka * i_arc_600_ka)
        - (v0 * v0 - voc_kv * voc_kv) / (v0 * v0 * i_bf_ka * i_bf_ka);
    let ratio = v0 / voc_kv;
    let radicand = ratio * ratio * bracket;
    if !(radicand > 0.0) {
        return Err(ArcFlashError::NegativeRadicand {
            i_arc_600_ka,
            i_bf_ka,
            voc_kv,
        });
    }
    Ok(1.0 / radicand.sqrt())
}

/// Currents, geometry and correction shared by the energy and boundary
/// equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcTerms {
    pub i_arc_ka: f64,
    pub i_arc_600_ka: f64,
    pub i_bf_ka: f64,
    pub gap_mm: f64,
    pub arc_duration_ms: f64,
    pub cf: f64,
}

impl ArcTerms {
    fn check(&self) -> Result<(), ArcFlashError> {
        positive("arcing current (kA)", self.i_arc_ka)?;
        positive("600 V arcing current (kA)", self.i_arc_600_ka)?;
        positive("bolted fault current (kA)", self.i_bf_ka)?;
        positive("gap (mm)", self.gap_mm)?;
        positive("correction factor", self.cf)?;
        if !(self.arc_duration_ms >= 0.0) || !self.arc_duration_ms.is_finite() {
            return Err(ArcFlashError::NonPositive {
                name: "arc duration (ms)",
                value: self.arc_duration_ms,
            });
        }
        Ok(())
    }

    // Everything in the energy exponent except the k12·log D term.
    fn exponent(&self, k: &EnergyCoefficients) -> f64 {
        let k = &k.k;
        let ibf = self.i_bf_ka;
        // k4·Ibf⁷ + ... + k10·Ibf = Ibf · (k4·Ibf⁶ + ... + k10)
        let denominator = ibf * poly6(&k[3..10], ibf);
        k[0] + k[1] * self.gap_mm.log10()
            + k[2] * self.i_arc_600_ka / denominator
            + k[10] * ibf.log10()
            + k[12] * self.i_arc_ka.log10()
            + (1.0 / self.cf).log10()
    }
}

/// Incident energy in J/cm².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct IncidentEnergy {
    pub j_cm2: f64,
}

impl IncidentEnergy {
    pub fn cal_cm2(self) -> f64 {
        self.j_cm2 / JOULES_PER_CALORIE
    }
}

/// Incident energy at a working distance.
pub fn incident_energy_le600(
    terms: &ArcTerms,
    working_distance_mm: f64,
    k: &EnergyCoefficients,
) -> Result<IncidentEnergy, ArcFlashError> {
    terms.check()?;
    positive("working distance (mm)", working_distance_mm)?;
    if terms.arc_duration_ms == 0.0 {
        return Ok(IncidentEnergy { j_cm2: 0.0 });
    }
    let exponent = terms.exponent(k) + k.k[11] * working_distance_mm.log10();
    Ok(IncidentEnergy {
        j_cm2: 12.552 / 50.0 * terms.arc_duration_ms * 10f64.powf(exponent),
    })
}

/// Distance at which the incident energy falls to 5 J/cm², mm.
pub fn arc_flash_boundary_le600(
    terms: &ArcTerms,
    k: &EnergyCoefficients,
) -> Result<f64, ArcFlashError> {
    terms.check()?;
    if terms.arc_duration_ms == 0.0 {
        return Err(ArcFlashError::ZeroDuration);
    }
    let numerator = terms.exponent(k) - (20.0 / terms.arc_duration_ms).log10();
    Ok(10f64.powf(numerator / -k.k[11]))
}

/// Runs the whole chain for one bolted-fault current.
pub fn compute_hazard(
    i_bf_ka: f64,
    params: &ArcFlashParams,
    table: &CoefficientTable,
) -> Result<HazardResult, ArcFlashError> {
    params.validate().map_err(|e| e.at("parameters"))?;
    let coeffs = table
        .get(params.electrode_config)
        .map_err(|missing| ArcFlashError::from(missing).at("coefficients"))?;

    let cf = correction_factor(params.enclosure_size, &coeffs.enclosure)
        .map_err(|e| e.at("correction_factor"))?;
    positive("correction factor", cf).map_err(|e| e.at("correction_factor"))?;
    let i_arc_600 = arcing_current_600(i_bf_ka, params.gap_mm, &coeffs.arcing)
        .map_err(|e| e.at("arcing_current_600"))?;
    let i_arc = arcing_current_le600(i_arc_600, i_bf_ka, params.open_circuit_voltage_kv)
        .map_err(|e| e.at("arcing_current_le600"))?;
    let terms = ArcTerms {
        i_arc_ka: i_arc,
        i_arc_600_ka: i_arc_600,
        i_bf_ka,
        gap_mm: params.gap_mm,
        arc_duration_ms: params.arc_duration_ms,
        cf,
    };
    let energy = incident_energy_le600(&terms, params.working_distance_mm, &coeffs.energy)
        .map_err(|e| e.at("incident_energy_le600"))?;
    let afb = arc_flash_boundary_le600(&terms, &coeffs.energy)
        .map_err(|e| e.at("arc_flash_boundary_le600"))?;

    Ok(HazardResult {
        i_bf_ka,
        voc_kv: params.open_circuit_voltage_kv,
        cf,
        i_arc_600_ka: i_arc_600,
        i_arc_ka: i_arc,
        i_arc_min_ka: None,
        incident_energy_j_cm2: energy.j_cm2,
        incident_energy_cal_cm2: energy.cal_cm2(),
        afb_mm: afb,
        params: *params,
        advisories: advisories(i_bf_ka, params),
    })
}

fn advisories(i_bf_ka: f64, p: &ArcFlashParams) -> Vec<Advisory> {
    let mut out = Vec::new();
    if p.open_circuit_voltage_kv < SUSTAINED_ARC_VOC_KV {
        out.push(Advisory::LowVoltage {
            voc_kv: p.open_circuit_voltage_kv,
        });
    }
    let mut check = |parameter: &str, value: f64, min: Option<f64>, max: Option<f64>| {
        let below = min.is_some_and(|lo| value < lo);
        let above = max.is_some_and(|hi| value > hi);
        if below || above {
            out.push(Advisory::OutOfRange {
                parameter: parameter.to_string(),
                value,
                min,
                max,
            });
        }
    };
    check(
        "Voc (kV)",
        p.open_circuit_voltage_kv,
        Some(VOC_RANGE_KV.0),
        Some(VOC_RANGE_KV.1),
    );
    check(
        "I_bf (kA)",
        i_bf_ka,
        Some(BOLTED_FAULT_RANGE_KA.0),
        Some(BOLTED_FAULT_RANGE_KA.1),
    );
    check(
        "gap (mm)",
        p.gap_mm,
        Some(GAP_RANGE_MM.0),
        Some(GAP_RANGE_MM.1),
    );
    check(
        "working distance (mm)",
        p.working_distance_mm,
        Some(MIN_WORKING_DISTANCE_MM),
        None,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn vcb() -> CoefficientSet {
        CoefficientTable::bundled()
            .get(ElectrodeConfig::Vcb)
            .unwrap()
    }

    fn gleamm(voc_kv: f64) -> ArcFlashParams {
        ArcFlashParams {
            open_circuit_voltage_kv: voc_kv,
            gap_mm: 32.0,
            working_distance_mm: 457.2,
            arc_duration_ms: cycles_to_ms(5.0, 60.0).unwrap(),
            enclosure_size: 19.999,
            electrode_config: ElectrodeConfig::Vcb,
        }
    }

    // Direct power-sum form of the 600 V arcing-current equation, written
    // independently of the Horner evaluation used by the engine.
    fn oracle_arcing_600(ibf: f64, gap: f64) -> f64 {
        let k = [
            -0.04287, 1.035, -0.083, 0.0, 0.0, -4.783e-9, 1.962e-6, -0.000229, 0.003141, 1.092,
        ];
        let poly: f64 = (0..7).map(|i| k[3 + i] * ibf.powi(6 - i as i32)).sum();
        10f64.powf(k[0] + k[1] * ibf.log10() + k[2] * gap.log10()) * poly
    }

    #[test]
    fn cycles() {
        assert_relative_eq!(
            cycles_to_ms(5.0, 60.0).unwrap(),
            83.333_333_333_333_33,
            max_relative = 1e-15
        );
        assert_eq!(cycles_to_ms(0.0, 60.0).unwrap(), 0.0);
        assert_eq!(cycles_to_ms(60.0, 60.0).unwrap(), 1000.0);
        assert!(cycles_to_ms(5.0, 0.0).is_err());
    }

    #[test]
    fn correction_factor_examples() {
        let cf = correction_factor(19.999, &vcb().enclosure).unwrap();
        assert!((cf - 1.0).abs() <= 0.005, "cf = {cf}");
        let constant = EnclosureCoefficients { b: [0.0, 0.0, 1.0] };
        assert_eq!(correction_factor(7.3, &constant).unwrap(), 1.0);
        let linear = EnclosureCoefficients { b: [0.0, 1.0, 0.0] };
        assert_eq!(correction_factor(2.0, &linear).unwrap(), 2.0);
        assert!(correction_factor(0.0, &constant).is_err());
    }

    #[test]
    fn arcing_current_600_golden() {
        // Frozen from a hand evaluation of the coefficient polynomial.
        let k = vcb().arcing;
        assert_relative_eq!(
            arcing_current_600(22.79, 32.0, &k).unwrap(),
            18.427249199252596,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            arcing_current_600(52.38, 32.0, &k).unwrap(),
            35.73905047699101,
            max_relative = 1e-12
        );
        for ibf in [1.0, 5.0, 22.74, 40.0] {
            assert_relative_eq!(
                arcing_current_600(ibf, 25.0, &k).unwrap(),
                oracle_arcing_600(ibf, 25.0),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn arcing_current_600_increasing() {
        let k = vcb().arcing;
        let mut prev = 0.0;
        for step in 0..=118 {
            let ibf = 1.0 + 0.5 * step as f64;
            let now = arcing_current_600(ibf, 32.0, &k).unwrap();
            assert!(now > prev, "not increasing at {ibf} kA");
            prev = now;
        }
    }

    #[test]
    fn voc_600_collapses() {
        assert_eq!(arcing_current_le600(18.4, 22.79, 0.6).unwrap(), 18.4);
    }

    #[test]
    fn reduced_voltage_arcing_current() {
        let k = vcb().arcing;
        let mcc = arcing_current_le600(arcing_current_600(22.79, 32.0, &k).unwrap(), 22.79, 0.48)
            .unwrap();
        assert!((mcc / 16.81 - 1.0).abs() <= 0.02, "{mcc}");
        let ob208 =
            arcing_current_le600(arcing_current_600(52.38, 32.0, &k).unwrap(), 52.38, 0.208)
                .unwrap();
        assert!((ob208 / 16.12 - 1.0).abs() <= 0.02, "{ob208}");
    }

    #[test]
    fn negative_radicand_reported() {
        // an arcing current above the bolted current at low Voc has no real solution
        let err = arcing_current_le600(100.0, 10.0, 0.2).unwrap_err();
        assert_eq!(
            err,
            ArcFlashError::NegativeRadicand {
                i_arc_600_ka: 100.0,
                i_bf_ka: 10.0,
                voc_kv: 0.2
            }
        );
        assert!(arcing_current_le600(10.0, 10.0, 0.7).is_err());
    }

    #[test]
    fn energy_zero_duration() {
        let terms = ArcTerms {
            i_arc_ka: 16.8,
            i_arc_600_ka: 18.4,
            i_bf_ka: 22.79,
            gap_mm: 32.0,
            arc_duration_ms: 0.0,
            cf: 1.0,
        };
        assert_eq!(
            incident_energy_le600(&terms, 457.2, &vcb().energy)
                .unwrap()
                .j_cm2,
            0.0
        );
        assert_eq!(
            arc_flash_boundary_le600(&terms, &vcb().energy),
            Err(ArcFlashError::ZeroDuration)
        );
    }

    #[test]
    fn energy_rejects_bad_geometry() {
        let terms = ArcTerms {
            i_arc_ka: 16.8,
            i_arc_600_ka: 18.4,
            i_bf_ka: 22.79,
            gap_mm: 0.0,
            arc_duration_ms: 83.3,
            cf: 1.0,
        };
        assert!(incident_energy_le600(&terms, 457.2, &vcb().energy).is_err());
        let terms = ArcTerms {
            gap_mm: 32.0,
            cf: -1.0,
            ..terms
        };
        assert!(incident_energy_le600(&terms, 457.2, &vcb().energy).is_err());
        let terms = ArcTerms { cf: 1.0, ..terms };
        assert!(incident_energy_le600(&terms, 0.0, &vcb().energy).is_err());
    }

    #[test]
    fn mcc_chain() {
        let r = compute_hazard(22.79, &gleamm(0.48), CoefficientTable::bundled()).unwrap();
        assert!((r.i_arc_ka / 16.81 - 1.0).abs() <= 0.02);
        assert!((r.incident_energy_cal_cm2 - 3.6).abs() <= 0.2);
        assert!((r.afb_mm - 910.0).abs() <= 30.0);
        assert!(r.advisories.is_empty());
        assert_eq!(r.i_arc_min_ka, None);
    }

    #[test]
    fn generator_chain() {
        let r = compute_hazard(22.78, &gleamm(0.48), CoefficientTable::bundled()).unwrap();
        assert!((r.i_arc_ka / 16.85 - 1.0).abs() <= 0.02);
        assert!((r.incident_energy_cal_cm2 - 3.6).abs() <= 0.2);
        assert!((r.afb_mm - 910.0).abs() <= 30.0);
    }

    #[test]
    fn outback_208_chain_flags_low_voltage() {
        let r = compute_hazard(52.38, &gleamm(0.208), CoefficientTable::bundled()).unwrap();
        assert!((r.i_arc_ka / 16.12 - 1.0).abs() <= 0.02);
        assert!((r.incident_energy_cal_cm2 - 3.8).abs() <= 0.2);
        assert!((r.afb_mm - 940.0).abs() <= 30.0);
        assert_eq!(r.advisories, vec![Advisory::LowVoltage { voc_kv: 0.208 }]);
    }

    #[test]
    fn out_of_range_flagged_not_rejected() {
        let r = compute_hazard(150.0, &gleamm(0.48), CoefficientTable::bundled()).unwrap();
        assert!(r.advisories.iter().any(
            |a| matches!(a, Advisory::OutOfRange { parameter, .. } if parameter == "I_bf (kA)")
        ));
    }

    #[test]
    fn unsupported_config_rejected_with_stage() {
        let p = ArcFlashParams {
            electrode_config: ElectrodeConfig::Hcb,
            ..gleamm(0.48)
        };
        let err = compute_hazard(22.79, &p, CoefficientTable::bundled()).unwrap_err();
        match err {
            ArcFlashError::Stage { stage, source } => {
                assert_eq!(stage, "coefficients");
                assert!(matches!(*source, ArcFlashError::MissingCoefficients { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn boundary_energy_is_five_joules() {
        let r = compute_hazard(22.79, &gleamm(0.48), CoefficientTable::bundled()).unwrap();
        let terms = ArcTerms {
            i_arc_ka: r.i_arc_ka,
            i_arc_600_ka: r.i_arc_600_ka,
            i_bf_ka: r.i_bf_ka,
            gap_mm: 32.0,
            arc_duration_ms: r.params.arc_duration_ms,
            cf: r.cf,
        };
        let at_boundary = incident_energy_le600(&terms, r.afb_mm, &vcb().energy).unwrap();
        assert!((at_boundary.j_cm2 / BOUNDARY_ENERGY_J_CM2 - 1.0).abs() <= 0.02);
    }

    #[test]
    fn deterministic() {
        let a = compute_hazard(22.74, &gleamm(0.48), CoefficientTable::bundled()).unwrap();
        let b = compute_hazard(22.74, &gleamm(0.48), CoefficientTable::bundled()).unwrap();
        assert_eq!(
            a.incident_energy_j_cm2.to_bits(),
            b.incident_energy_j_cm2.to_bits()
        );
        assert_eq!(a.afb_mm.to_bits(), b.afb_mm.to_bits());
    }

    proptest! {
        #[test]
        fn energy_linear_in_duration(ibf in 1.0f64..80.0, t in 1.0f64..500.0, voc in 0.21f64..0.6) {
            let table = CoefficientTable::bundled();
            let p = ArcFlashParams { arc_duration_ms: t, ..gleamm(voc) };
            let p2 = ArcFlashParams { arc_duration_ms: 2.0 * t, ..p };
            if let (Ok(a), Ok(b)) = (compute_hazard(ibf, &p, table), compute_hazard(ibf, &p2, table)) {
                prop_assert!((b.incident_energy_j_cm2 / (2.0 * a.incident_energy_j_cm2) - 1.0).abs() <= 1e-9);
            }
        }

        #[test]
        fn calorie_view_is_exact(ibf in 1.0f64..80.0, voc in 0.21f64..0.6) {
            let r = compute_hazard(ibf, &gleamm(voc), CoefficientTable::bundled()).unwrap();
            prop_assert_eq!(r.incident_energy_cal_cm2, r.incident_energy_j_cm2 / JOULES_PER_CALORIE);
        }
    }
}

//! Per-unit and ohmic impedance derivations for transformers, sources and
//! voltage-level reflection.

use num_complex::Complex64;
use thiserror::Error;

use super::{SourceKind, SourceSpec, TransformerSpec};

/// X/R ratio assumed for a Thevenin source when the study file gives none.
pub const DEFAULT_SOURCE_X_OVER_R: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpedanceError {
    #[error("voltage must be positive, got {0} V")]
    NonPositiveVoltage(f64),
    #[error("source `{0}` is current-limited and has no Thevenin impedance")]
    NotThevenin(String),
    #[error("source `{id}` has non-positive effective fault current {current} A")]
    NonPositiveCurrent { id: String, current: f64 },
}

/// Which winding an impedance is referred to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Primary,
    Secondary,
}

/// Splits an impedance magnitude into R + jX for the given X/R ratio.
///
/// An infinite ratio yields a purely reactive impedance.
pub fn split_impedance(magnitude: f64, x_over_r: f64) -> Complex64 {
    if x_over_r.is_infinite() {
        return Complex64::new(0.0, magnitude);
    }
    let r = magnitude / (1.0 + x_over_r * x_over_r).sqrt();
    Complex64::new(r, r * x_over_r)
}

/// Ohmic impedance of a two-winding transformer referred to one side.
///
/// `Zbase = V² / S`, `|Z| = IZ/100 * Zbase`, split by the nameplate X/R.
pub fn transformer_impedance(t: &TransformerSpec, side: Side) -> Complex64 {
    let v = match side {
        Side::Primary => t.primary_voltage_v,
        Side::Secondary => t.secondary_voltage_v,
    };
    let z_base = v * v / t.rated_power_va;
    let magnitude = t.impedance_pct / 100.0 * z_base;
    split_impedance(magnitude, t.x_over_r)
}

/// Refers an impedance from one voltage level to another through an ideal
/// transformer: `z * (to / from)²`.
pub fn reflect_impedance(
    z: Complex64,
    from_voltage: f64,
    to_voltage: f64,
) -> Result<Complex64, ImpedanceError> {
    if !(from_voltage > 0.0) {
        return Err(ImpedanceError::NonPositiveVoltage(from_voltage));
    }
    if !(to_voltage > 0.0) {
        return Err(ImpedanceError::NonPositiveVoltage(to_voltage));
    }
    let ratio = to_voltage / from_voltage;
    Ok(z * (ratio * ratio))
}

/// Impedance behind which a voltage source delivers exactly its effective
/// fault current into a bolted fault at its own terminals.
pub fn source_thevenin_impedance(s: &SourceSpec) -> Result<Complex64, ImpedanceError> {
    if s.kind != SourceKind::TheveninVoltage {
        return Err(ImpedanceError::NotThevenin(s.id.clone()));
    }
    if !(s.rated_voltage_v > 0.0) {
        return Err(ImpedanceError::NonPositiveVoltage(s.rated_voltage_v));
    }
    let current = s.effective_fault_current_a();
    if !(current > 0.0) {
        return Err(ImpedanceError::NonPositiveCurrent {
            id: s.id.clone(),
            current,
        });
    }
    let magnitude = s.rated_voltage_v / (3f64.sqrt() * current);
    Ok(split_impedance(magnitude, s.x_over_r))
}

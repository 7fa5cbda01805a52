//! Versioned, checksummed coefficient data for the arc-flash equations.
//!
//! File layout: the first line is `# sha256: <hex>`, the digest of every byte
//! that follows that line. The rest is TOML with a `[meta]` table and one
//! `[[record]]` per (electrode configuration, equation).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::ElectrodeConfig;

/// Coefficient file shipped with the engine.
pub const BUNDLED_COEFFICIENTS: &str = include_str!("../../../../data/ieee1584_2018.coeffs");

const CHECKSUM_PREFIX: &str = "# sha256: ";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoefficientError {
    #[error("coefficient file must start with `{CHECKSUM_PREFIX}<hex>`")]
    MissingChecksum,
    #[error("coefficient checksum mismatch: header says {expected}, content hashes to {actual}")]
    ChecksumMismatch { expected: String, actual: String },
    #[error("coefficient file is not valid: {0}")]
    Parse(String),
    #[error("record {index} ({config:?}/{equation}): {message}")]
    BadRecord {
        index: usize,
        config: ElectrodeConfig,
        equation: String,
        message: String,
    },
}

/// Which equation a coefficient record feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    #[serde(rename = "arcing_current_600")]
    ArcingCurrent600,
    #[serde(rename = "incident_energy_le600")]
    IncidentEnergyLe600,
    EnclosureCorrection,
}

impl Equation {
    pub fn name(self) -> &'static str {
        match self {
            Equation::ArcingCurrent600 => "arcing_current_600",
            Equation::IncidentEnergyLe600 => "incident_energy_le600",
            Equation::EnclosureCorrection => "enclosure_correction",
        }
    }
}

/// k1..k10 of the 600 V arcing-current equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcingCoefficients {
    pub k: [f64; 10],
}

/// k1..k13 shared by the incident-energy and boundary equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyCoefficients {
    pub k: [f64; 13],
}

/// b1..b3 of the enclosure size correction polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnclosureCoefficients {
    pub b: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub arcing: ArcingCoefficients,
    pub energy: EnergyCoefficients,
    pub enclosure: EnclosureCoefficients,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct PartialSet {
    arcing: Option<ArcingCoefficients>,
    energy: Option<EnergyCoefficients>,
    enclosure: Option<EnclosureCoefficients>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    version: String,
    checksum: String,
    sets: BTreeMap<ElectrodeConfig, PartialSet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    meta: MetaDoc,
    #[serde(default)]
    record: Vec<RecordDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaDoc {
    version: String,
    #[serde(default)]
    #[allow(dead_code)]
    description: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDoc {
    config: ElectrodeConfig,
    equation: Equation,
    k: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
}

impl CoefficientTable {
    /// The table compiled into the binary. Verified once on first use.
    pub fn bundled() -> &'static CoefficientTable {
        static TABLE: OnceLock<CoefficientTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            CoefficientTable::parse(BUNDLED_COEFFICIENTS)
                .expect("bundled coefficient file is valid")
        })
    }

    /// Verifies the checksum header and parses the records.
    pub fn parse(text: &str) -> Result<Self, CoefficientError> {
        let (header, body) = text
            .split_once('\n')
            .ok_or(CoefficientError::MissingChecksum)?;
        let expected = header
            .trim_end_matches('\r')
            .strip_prefix(CHECKSUM_PREFIX)
            .ok_or(CoefficientError::MissingChecksum)?
            .trim()
            .to_ascii_lowercase();
        let actual = hex::encode(Sha256::digest(body.as_bytes()));
        if expected != actual {
            return Err(CoefficientError::ChecksumMismatch { expected, actual });
        }

        let doc: FileDoc =
            toml::from_str(body).map_err(|e| CoefficientError::Parse(e.to_string()))?;
        let mut sets: BTreeMap<ElectrodeConfig, PartialSet> = BTreeMap::new();
        for (index, rec) in doc.record.into_iter().enumerate() {
            let bad = |message: String| CoefficientError::BadRecord {
                index,
                config: rec.config,
                equation: rec.equation.name().to_string(),
                message,
            };
            let (values, expected_len, field) = match rec.equation {
                Equation::ArcingCurrent600 => (rec.k.as_ref(), 10, "k"),
                Equation::IncidentEnergyLe600 => (rec.k.as_ref(), 13, "k"),
                Equation::EnclosureCorrection => (rec.b.as_ref(), 3, "b"),
            };
            let values = values.ok_or_else(|| bad(format!("missing `{field}` array")))?;
            if values.len() != expected_len {
                return Err(bad(format!(
                    "expected {expected_len} values in `{field}`, found {}",
                    values.len()
                )));
            }
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(bad(format!("non-finite coefficient {v}")));
            }
            let set = sets.entry(rec.config).or_default();
            let duplicate = match rec.equation {
                Equation::ArcingCurrent600 => set
                    .arcing
                    .replace(ArcingCoefficients {
                        k: values.as_slice().try_into().unwrap(),
                    })
                    .is_some(),
                Equation::IncidentEnergyLe600 => set
                    .energy
                    .replace(EnergyCoefficients {
                        k: values.as_slice().try_into().unwrap(),
                    })
                    .is_some(),
                Equation::EnclosureCorrection => set
                    .enclosure
                    .replace(EnclosureCoefficients {
                        b: values.as_slice().try_into().unwrap(),
                    })
                    .is_some(),
            };
            if duplicate {
                return Err(bad("duplicate record".into()));
            }
        }
        Ok(CoefficientTable {
            version: doc.meta.version,
            checksum: expected,
            sets,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Hex SHA-256 of the coefficient body.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    /// The full coefficient set for a configuration, or the first equation
    /// whose record is missing.
    pub fn get(
        &self,
        config: ElectrodeConfig,
    ) -> Result<CoefficientSet, (ElectrodeConfig, Equation)> {
        let partial = self.sets.get(&config);
        let arcing = partial
            .and_then(|p| p.arcing)
            .ok_or((config, Equation::ArcingCurrent600))?;
        let energy = partial
            .and_then(|p| p.energy)
            .ok_or((config, Equation::IncidentEnergyLe600))?;
        let enclosure = partial
            .and_then(|p| p.enclosure)
            .ok_or((config, Equation::EnclosureCorrection))?;
        Ok(CoefficientSet {
            arcing,
            energy,
            enclosure,
        })
    }

    pub fn enclosure(&self, config: ElectrodeConfig) -> Option<EnclosureCoefficients> {
        self.sets.get(&config).and_then(|p| p.enclosure)
    }
}

//! PPE category selection and shock approach boundaries.
//!
//! Both tables are configuration data carried by the study file; the
//! defaults reproduce the NFPA 70E low-voltage rows used for the GLEAMM
//! labels.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Incident energy at which bare skin begins to burn, cal/cm².
pub const SKIN_INJURY_THRESHOLD_CAL_CM2: f64 = 1.2;

const VOLTAGE_LOOKUP_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HazardError {
    #[error("incident energy must be non-negative, got {0} cal/cm2")]
    NegativeEnergy(f64),
    #[error("boundary data missing for {0} V nominal")]
    BoundaryDataMissing(f64),
    #[error("incident energy exceeds every PPE category; no clothing list applies")]
    BeyondCategory,
    #[error("invalid PPE/boundary table: {0}")]
    InvalidTable(String),
}

/// PPE hazard level. Ordering follows severity, with
/// [`PpeLevel::BeyondCategory`] above every numbered category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PpeLevel {
    Category(u8),
    BeyondCategory,
}

impl fmt::Display for PpeLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PpeLevel::Category(n) => write!(f, "{n}"),
            PpeLevel::BeyondCategory => f.write_str("beyond"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpeCategory {
    pub level: PpeLevel,
    /// Minimum clothing arc rating, cal/cm². `None` beyond the last category.
    pub min_clothing_rating_cal_cm2: Option<f64>,
    pub required_items: Vec<String>,
    pub additional_items: Vec<String>,
    pub skin_injury_threshold_cal_cm2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryRow {
    pub level: u8,
    pub min_arc_rating_cal_cm2: f64,
    pub required: Vec<String>,
    pub additional: Vec<String>,
}

/// Clothing catalogue and category thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpeTable {
    /// Arc-rated items printed on the label, in label order.
    pub arc_rated_items: Vec<String>,
    /// Additional (non arc-rated) items printed on the label, in label order.
    pub additional_items: Vec<String>,
    categories: Vec<CategoryRow>,
}

impl PpeTable {
    pub fn new(
        arc_rated_items: Vec<String>,
        additional_items: Vec<String>,
        categories: Vec<CategoryRow>,
    ) -> Result<Self, HazardError> {
        let bad = |m: String| Err(HazardError::InvalidTable(m));
        if categories.is_empty() {
            return bad("at least one PPE category is required".into());
        }
        for (i, row) in categories.iter().enumerate() {
            if row.level as usize != i + 1 {
                return bad(format!(
                    "categories must be numbered 1, 2, ... in order; found {} at position {}",
                    row.level,
                    i + 1
                ));
            }
            if !(row.min_arc_rating_cal_cm2 > 0.0) || !row.min_arc_rating_cal_cm2.is_finite() {
                return bad(format!("category {} rating must be positive", row.level));
            }
            if i > 0 && row.min_arc_rating_cal_cm2 <= categories[i - 1].min_arc_rating_cal_cm2 {
                return bad(format!(
                    "category {} rating must exceed category {}",
                    row.level,
                    row.level - 1
                ));
            }
            if row.required.is_empty() || row.additional.is_empty() {
                return bad(format!(
                    "category {} needs non-empty required and additional lists",
                    row.level
                ));
            }
            for item in &row.required {
                if !arc_rated_items.contains(item) {
                    return bad(format!(
                        "category {} requires `{item}` which is not an arc-rated item",
                        row.level
                    ));
                }
            }
            for item in &row.additional {
                if !additional_items.contains(item) {
                    return bad(format!(
                        "category {} lists `{item}` which is not an additional item",
                        row.level
                    ));
                }
            }
        }
        Ok(PpeTable {
            arc_rated_items,
            additional_items,
            categories,
        })
    }

    /// Four-category table with the clothing catalogue of the standard
    /// low-voltage warning label.
    pub fn nfpa70e_default() -> Self {
        let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let row = |level, rating, req: &[&str], add: &[&str]| CategoryRow {
            level,
            min_arc_rating_cal_cm2: rating,
            required: s(req),
            additional: s(add),
        };
        let suit = [
            "Flash suit jacket",
            "Flash suit pants",
            "Flash suit hood",
            "Gloves",
            "Long-sleeve shirt",
            "Pants",
        ];
        let suit_extra = [
            "Leather footwear",
            "Hard hat",
            "Safety glasses",
            "Hearing protection",
        ];
        PpeTable::new(
            s(&[
                "Face shield",
                "Long-sleeve shirt",
                "Flash suit jacket",
                "Flash suit pants",
                "Flash suit hood",
                "Pants",
                "Coverall",
                "Balaclava",
                "Gloves",
                "Jacket",
                "Parka",
                "Rainwear",
            ]),
            s(&[
                "Leather footwear",
                "Hard hat",
                "Safety goggles",
                "Safety glasses",
                "Hearing protection",
                "Heavy duty leather gloves",
            ]),
            vec![
                row(
                    1,
                    4.0,
                    &["Face shield", "Long-sleeve shirt", "Pants"],
                    &[
                        "Leather footwear",
                        "Hearing protection",
                        "Heavy duty leather gloves",
                    ],
                ),
                row(
                    2,
                    8.0,
                    &["Face shield", "Balaclava", "Long-sleeve shirt", "Pants"],
                    &[
                        "Leather footwear",
                        "Hard hat",
                        "Safety glasses",
                        "Hearing protection",
                        "Heavy duty leather gloves",
                    ],
                ),
                row(3, 25.0, &suit, &suit_extra),
                row(4, 40.0, &suit, &suit_extra),
            ],
        )
        .expect("built-in PPE table is valid")
    }

    pub fn categories(&self) -> &[CategoryRow] {
        &self.categories
    }

    /// Smallest category whose clothing rating meets the incident energy
    /// (inclusive). Energies below the first rating still map to category 1.
    pub fn ppe_category(&self, energy_cal_cm2: f64) -> Result<PpeCategory, HazardError> {
        if !(energy_cal_cm2 >= 0.0) {
            return Err(HazardError::NegativeEnergy(energy_cal_cm2));
        }
        let found = self
            .categories
            .iter()
            .find(|row| row.min_arc_rating_cal_cm2 >= energy_cal_cm2);
        Ok(match found {
            Some(row) => PpeCategory {
                level: PpeLevel::Category(row.level),
                min_clothing_rating_cal_cm2: Some(row.min_arc_rating_cal_cm2),
                required_items: row.required.clone(),
                additional_items: row.additional.clone(),
                skin_injury_threshold_cal_cm2: SKIN_INJURY_THRESHOLD_CAL_CM2,
            },
            None => PpeCategory {
                level: PpeLevel::BeyondCategory,
                min_clothing_rating_cal_cm2: None,
                required_items: Vec::new(),
                additional_items: Vec::new(),
                skin_injury_threshold_cal_cm2: SKIN_INJURY_THRESHOLD_CAL_CM2,
            },
        })
    }

    /// Required and additional clothing for a numbered category.
    pub fn clothing_lists(
        &self,
        category: &PpeCategory,
    ) -> Result<(Vec<String>, Vec<String>), HazardError> {
        match category.level {
            PpeLevel::BeyondCategory => Err(HazardError::BeyondCategory),
            PpeLevel::Category(n) => self
                .categories
                .iter()
                .find(|row| row.level == n)
                .map(|row| (row.required.clone(), row.additional.clone()))
                .ok_or_else(|| HazardError::InvalidTable(format!("no category {n} in table"))),
        }
    }
}

impl Default for PpeTable {
    fn default() -> Self {
        PpeTable::nfpa70e_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproachBoundaries {
    pub nominal_voltage_v: f64,
    pub limited_m: f64,
    pub restricted_m: f64,
}

/// Limited/restricted approach distances keyed by nominal voltage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryTable {
    rows: Vec<ApproachBoundaries>,
}

impl BoundaryTable {
    pub fn new(rows: Vec<ApproachBoundaries>) -> Result<Self, HazardError> {
        for r in &rows {
            if !(r.nominal_voltage_v > 0.0) {
                return Err(HazardError::InvalidTable(format!(
                    "boundary voltage must be positive, got {}",
                    r.nominal_voltage_v
                )));
            }
            if !(r.restricted_m > 0.0 && r.limited_m >= r.restricted_m) {
                return Err(HazardError::InvalidTable(format!(
                    "{} V: need limited ({}) >= restricted ({}) > 0",
                    r.nominal_voltage_v, r.limited_m, r.restricted_m
                )));
            }
        }
        Ok(BoundaryTable { rows })
    }

    /// 480 V and 208 V rows of the 50-750 V band.
    pub fn low_voltage_default() -> Self {
        BoundaryTable {
            rows: [480.0, 208.0]
                .into_iter()
                .map(|v| ApproachBoundaries {
                    nominal_voltage_v: v,
                    limited_m: 1.0,
                    restricted_m: 0.3,
                })
                .collect(),
        }
    }

    pub fn rows(&self) -> &[ApproachBoundaries] {
        &self.rows
    }

    pub fn approach_boundaries(&self, voltage_v: f64) -> Result<ApproachBoundaries, HazardError> {
        self.rows
            .iter()
            .find(|r| {
                (r.nominal_voltage_v - voltage_v).abs() <= VOLTAGE_LOOKUP_RTOL * voltage_v.abs()
            })
            .copied()
            .ok_or(HazardError::BoundaryDataMissing(voltage_v))
    }
}

impl Default for BoundaryTable {
    fn default() -> Self {
        BoundaryTable::low_voltage_default()
    }
}

//! Short-circuit and low-voltage arc-flash hazard studies for radial
//! microgrids.
//!
//! The pipeline runs bottom-up:
//!
//! 1. [`network`] loads and validates a study file into a [`network::NetworkModel`].
//! 2. [`fault`] computes three-phase bolted fault currents per bus and topology.
//! 3. [`arcflash`] turns a bolted fault current into arcing current,
//!    incident energy and arc-flash boundary (VCB, 208 V to 600 V).
//! 4. [`hazard`] maps incident energy to a PPE category and looks up
//!    approach boundaries.
//! 5. [`label`] and [`report`] render the results.
//!
//! [`study`] wires the stages together.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arcflash;
pub mod fault;
pub mod hazard;
pub mod label;
pub mod network;
pub mod report;
pub mod study;

use thiserror::Error;

pub use arcflash::{
    compute_hazard, ArcFlashParams, CoefficientTable, ElectrodeConfig, HazardResult,
};
pub use fault::{bolted_fault_current, FaultStudyResult, Summation};
pub use hazard::{PpeCategory, PpeLevel, PpeTable};
pub use label::{render_label, LabelFormat, LabelSpec};
pub use network::{load_study, NetworkModel, StudyFile};
pub use report::{render_report, ReportFormat, StudyReport};
pub use study::{run_study, StudyOptions, StudyRun};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] network::ModelError),
    #[error(transparent)]
    Fault(#[from] fault::FaultError),
    #[error(transparent)]
    Matrix(#[from] fault::StudyMatrixError),
    #[error("bus `{bus}`: {source}")]
    ArcFlash {
        bus: String,
        source: arcflash::ArcFlashError,
    },
    #[error("bus `{bus}`: {source}")]
    Hazard {
        bus: String,
        source: hazard::HazardError,
    },
    #[error(transparent)]
    Render(#[from] label::RenderError),
    #[error(transparent)]
    Coefficients(#[from] arcflash::CoefficientError),
    #[error("{0}")]
    Selection(String),
}

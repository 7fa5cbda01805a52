//! Python bindings for the arcstudy engine.
//!
//! ```python
//! import arcstudy
//! study = arcstudy.read_study("data/gleamm.study")
//! for bus in study.arcflash():
//!     print(bus.bus_id, bus.hazard.incident_energy_cal_cm2, bus.ppe_category)
//! ```

use std::path::PathBuf;

use arcstudy_core::arcflash::{self, ArcFlashParams, CoefficientTable, ElectrodeConfig};
use arcstudy_core::fault::{self, Summation};
use arcstudy_core::hazard::{PpeLevel, PpeTable};
use arcstudy_core::label::{self, LabelFormat, LabelSpec};
use arcstudy_core::network::{self, StudyFile};
use arcstudy_core::report::{self, ReportFormat, ReportOptions, ENGINE_VERSION};
use arcstudy_core::study::{self, BusHazard, StudyOptions};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn domain<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn summation(name: &str) -> PyResult<Summation> {
    name.parse().map_err(PyValueError::new_err)
}

fn electrode(name: &str) -> PyResult<ElectrodeConfig> {
    Ok(match name.to_ascii_uppercase().as_str() {
        "VCB" => ElectrodeConfig::Vcb,
        "VCBB" => ElectrodeConfig::Vcbb,
        "VOA" => ElectrodeConfig::Voa,
        "HCB" => ElectrodeConfig::Hcb,
        "HOA" => ElectrodeConfig::Hoa,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown electrode configuration `{other}`"
            )))
        }
    })
}

fn category_number(level: PpeLevel) -> Option<u8> {
    match level {
        PpeLevel::Category(n) => Some(n),
        PpeLevel::BeyondCategory => None,
    }
}

/// One source's share of a bolted fault.
#[pyclass(frozen, get_all, skip_from_py_object, module = "arcstudy")]
#[derive(Clone)]
struct Contribution {
    source_id: String,
    current_a: f64,
    limited: bool,
}

/// Three-phase bolted fault at one bus under one topology.
#[pyclass(frozen, get_all, skip_from_py_object, module = "arcstudy")]
#[derive(Clone)]
struct FaultResult {
    bus_id: String,
    topology: String,
    fault_voltage_v: f64,
    total_current_a: f64,
    contributions: Vec<Contribution>,
}

#[pymethods]
impl FaultResult {
    fn __repr__(&self) -> String {
        format!(
            "FaultResult(bus_id={:?}, topology={:?}, total_current_a={})",
            self.bus_id, self.topology, self.total_current_a
        )
    }
}

impl From<&fault::FaultStudyResult> for FaultResult {
    fn from(r: &fault::FaultStudyResult) -> Self {
        FaultResult {
            bus_id: r.bus_id.clone(),
            topology: r.topology_name.clone(),
            fault_voltage_v: r.fault_voltage_v,
            total_current_a: r.total_current_a,
            contributions: r
                .contributions
                .iter()
                .map(|c| Contribution {
                    source_id: c.source_id.clone(),
                    current_a: c.current_a,
                    limited: c.limited,
                })
                .collect(),
        }
    }
}

/// Arc-flash chain results for one bolted-fault current.
#[pyclass(frozen, get_all, skip_from_py_object, module = "arcstudy")]
#[derive(Clone)]
struct Hazard {
    i_bf_ka: f64,
    voc_kv: f64,
    cf: f64,
    i_arc_600_ka: f64,
    i_arc_ka: f64,
    incident_energy_j_cm2: f64,
    incident_energy_cal_cm2: f64,
    afb_mm: f64,
    advisories: Vec<String>,
}

#[pymethods]
impl Hazard {
    fn __repr__(&self) -> String {
        format!(
            "Hazard(i_bf_ka={}, i_arc_ka={}, incident_energy_cal_cm2={}, afb_mm={})",
            self.i_bf_ka, self.i_arc_ka, self.incident_energy_cal_cm2, self.afb_mm
        )
    }
}

impl From<&arcflash::HazardResult> for Hazard {
    fn from(h: &arcflash::HazardResult) -> Self {
        Hazard {
            i_bf_ka: h.i_bf_ka,
            voc_kv: h.voc_kv,
            cf: h.cf,
            i_arc_600_ka: h.i_arc_600_ka,
            i_arc_ka: h.i_arc_ka,
            incident_energy_j_cm2: h.incident_energy_j_cm2,
            incident_energy_cal_cm2: h.incident_energy_cal_cm2,
            afb_mm: h.afb_mm,
            advisories: h.advisories.iter().map(ToString::to_string).collect(),
        }
    }
}

/// A rendered-on-demand equipment label.
#[pyclass(frozen, module = "arcstudy")]
struct Label {
    spec: LabelSpec,
}

#[pymethods]
impl Label {
    #[getter]
    fn equipment_id(&self) -> &str {
        &self.spec.equipment_id
    }

    #[getter]
    fn header(&self) -> &str {
        &self.spec.header
    }

    /// Renders as `txt`, `svg` or `json`.
    #[pyo3(signature = (format = "txt"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let bytes = label::render_label_as(&self.spec, format).map_err(domain)?;
        Ok(String::from_utf8(bytes).expect("labels are UTF-8"))
    }
}

/// Hazard assessment of one bus.
#[pyclass(frozen, module = "arcstudy")]
struct BusResult {
    inner: BusHazard,
    ppe: PpeTable,
}

#[pymethods]
impl BusResult {
    #[getter]
    fn bus_id(&self) -> &str {
        &self.inner.bus_id
    }

    #[getter]
    fn topology(&self) -> &str {
        &self.inner.topology_name
    }

    #[getter]
    fn fault(&self) -> FaultResult {
        (&self.inner.fault).into()
    }

    #[getter]
    fn hazard(&self) -> Hazard {
        (&self.inner.hazard).into()
    }

    /// PPE category number, or `None` when beyond every category.
    #[getter]
    fn ppe_category(&self) -> Option<u8> {
        category_number(self.inner.category.level)
    }

    fn label(&self) -> PyResult<Label> {
        let spec = label::build_label(
            &self.inner,
            &self.ppe.arc_rated_items,
            &self.ppe.additional_items,
        )
        .map_err(domain)?;
        Ok(Label { spec })
    }

    fn __repr__(&self) -> String {
        format!(
            "BusResult(bus_id={:?}, incident_energy_cal_cm2={}, ppe_category={:?})",
            self.inner.bus_id,
            self.inner.hazard.incident_energy_cal_cm2,
            self.ppe_category()
        )
    }
}

/// A validated study file.
#[pyclass(frozen, module = "arcstudy")]
struct Study {
    inner: StudyFile,
}

impl Study {
    fn options(
        &self,
        topology: Option<String>,
        buses: Option<Vec<String>>,
        summation_rule: &str,
        per_topology: bool,
    ) -> PyResult<StudyOptions> {
        Ok(StudyOptions {
            summation: summation(summation_rule)?,
            topology,
            buses: buses.unwrap_or_default(),
            per_topology,
        })
    }
}

#[pymethods]
impl Study {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    /// Hex SHA-256 of the study-file bytes.
    #[getter]
    fn checksum(&self) -> &str {
        &self.inner.checksum
    }

    #[getter]
    fn buses(&self) -> Vec<String> {
        self.inner
            .model
            .analysis_buses()
            .map(|b| b.id.clone())
            .collect()
    }

    #[getter]
    fn topologies(&self) -> Vec<String> {
        self.inner
            .model
            .topologies()
            .iter()
            .map(|t| t.name.clone())
            .collect()
    }

    #[getter]
    fn sources(&self) -> Vec<String> {
        self.inner
            .model
            .sources()
            .iter()
            .map(|s| s.id.clone())
            .collect()
    }

    #[pyo3(signature = (bus, topology, summation = "magnitude"))]
    fn bolted_fault_current(
        &self,
        bus: &str,
        topology: &str,
        summation: &str,
    ) -> PyResult<FaultResult> {
        let rule = self::summation(summation)?;
        let r =
            fault::bolted_fault_current(&self.inner.model, topology, bus, rule).map_err(domain)?;
        Ok((&r).into())
    }

    #[pyo3(signature = (topology = None, buses = None, summation = "magnitude"))]
    fn short_circuit(
        &self,
        topology: Option<String>,
        buses: Option<Vec<String>>,
        summation: &str,
    ) -> PyResult<Vec<FaultResult>> {
        let opts = self.options(topology, buses, summation, false)?;
        let rows = study::run_short_circuit(&self.inner, &opts).map_err(domain)?;
        Ok(rows.iter().map(Into::into).collect())
    }

    #[pyo3(signature = (topology = None, buses = None, summation = "magnitude", per_topology = false))]
    fn arcflash(
        &self,
        topology: Option<String>,
        buses: Option<Vec<String>>,
        summation: &str,
        per_topology: bool,
    ) -> PyResult<Vec<BusResult>> {
        let opts = self.options(topology, buses, summation, per_topology)?;
        let run =
            study::run_study(&self.inner, CoefficientTable::bundled(), &opts).map_err(domain)?;
        Ok(run
            .hazards
            .into_iter()
            .map(|inner| BusResult {
                inner,
                ppe: self.inner.arcflash.ppe.clone(),
            })
            .collect())
    }

    /// Full study report as `csv` or `md` text.
    #[pyo3(signature = (format = "csv", display_columns = false, summation = "magnitude"))]
    fn report(&self, format: &str, display_columns: bool, summation: &str) -> PyResult<String> {
        let format: ReportFormat = format.parse().map_err(domain)?;
        let opts = self.options(None, None, summation, false)?;
        let table = CoefficientTable::bundled();
        let run = study::run_study(&self.inner, table, &opts).map_err(domain)?;
        let rep = report::build_report(&self.inner, &run, table, None);
        let bytes = report::render_report(&rep, format, &ReportOptions { display_columns });
        Ok(String::from_utf8(bytes).expect("reports are UTF-8"))
    }

    /// PPE category under this study's table, or `None` when beyond it.
    fn ppe_category(&self, incident_energy_cal_cm2: f64) -> PyResult<Option<u8>> {
        let c = self
            .inner
            .arcflash
            .ppe
            .ppe_category(incident_energy_cal_cm2)
            .map_err(domain)?;
        Ok(category_number(c.level))
    }

    fn __repr__(&self) -> String {
        format!(
            "Study(name={:?}, buses={})",
            self.inner.name,
            self.inner.model.analysis_buses().count()
        )
    }
}

/// Parses and validates study-file text.
#[pyfunction]
fn load_study(text: &str) -> PyResult<Study> {
    let inner = network::load_study(text).map_err(|e| {
        let lines: Vec<String> = e.diagnostics.iter().map(ToString::to_string).collect();
        PyValueError::new_err(lines.join("\n"))
    })?;
    Ok(Study { inner })
}

/// Reads and validates a study file.
#[pyfunction]
fn read_study(path: PathBuf) -> PyResult<Study> {
    let text = std::fs::read_to_string(&path)
        .map_err(|e| PyOSError::new_err(format!("{}: {e}", path.display())))?;
    load_study(&text)
}

/// Arc-flash chain for a bolted-fault current in kA.
#[pyfunction]
#[pyo3(signature = (
    i_bf_ka,
    voc_kv,
    gap_mm = 32.0,
    working_distance_mm = 457.2,
    arc_duration_ms = 5000.0 / 60.0,
    enclosure_size = 19.999,
    electrode_config = "VCB",
))]
fn compute_hazard(
    i_bf_ka: f64,
    voc_kv: f64,
    gap_mm: f64,
    working_distance_mm: f64,
    arc_duration_ms: f64,
    enclosure_size: f64,
    electrode_config: &str,
) -> PyResult<Hazard> {
    let params = ArcFlashParams {
        open_circuit_voltage_kv: voc_kv,
        gap_mm,
        working_distance_mm,
        arc_duration_ms,
        enclosure_size,
        electrode_config: electrode(electrode_config)?,
    };
    let h =
        arcflash::compute_hazard(i_bf_ka, &params, CoefficientTable::bundled()).map_err(domain)?;
    Ok((&h).into())
}

/// PPE category for an incident energy under the default table.
#[pyfunction]
fn ppe_category(incident_energy_cal_cm2: f64) -> PyResult<Option<u8>> {
    let c = PpeTable::default()
        .ppe_category(incident_energy_cal_cm2)
        .map_err(domain)?;
    Ok(category_number(c.level))
}

/// (engine version, coefficient-data version, coefficient SHA-256)
#[pyfunction]
fn versions() -> (&'static str, String, String) {
    let t = CoefficientTable::bundled();
    (
        ENGINE_VERSION,
        t.version().to_string(),
        t.checksum().to_string(),
    )
}

#[pymodule]
fn arcstudy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", ENGINE_VERSION)?;
    m.add(
        "LABEL_FORMATS",
        [LabelFormat::Text, LabelFormat::Svg, LabelFormat::Json].map(|f| f.extension()),
    )?;
    m.add_class::<Study>()?;
    m.add_class::<FaultResult>()?;
    m.add_class::<Contribution>()?;
    m.add_class::<Hazard>()?;
    m.add_class::<BusResult>()?;
    m.add_class::<Label>()?;
    m.add_function(wrap_pyfunction!(load_study, m)?)?;
    m.add_function(wrap_pyfunction!(read_study, m)?)?;
    m.add_function(wrap_pyfunction!(compute_hazard, m)?)?;
    m.add_function(wrap_pyfunction!(ppe_category, m)?)?;
    m.add_function(wrap_pyfunction!(versions, m)?)?;
    Ok(())
}

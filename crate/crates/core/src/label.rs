//! Equipment warning labels.
//!
//! A [`LabelSpec`] keeps full-precision values next to their display
//! strings. Display rounding:
//!
//! | field | rule |
//! |---|---|
//! | incident energy | 1 decimal, cal/cm² |
//! | arc-flash boundary, working distance | 2 decimals, metres |
//! | approach boundaries, voltage, clothing rating | up to 2 decimals, trailing zeros dropped |
//!
//! Rendering is deterministic and carries no timestamps.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hazard::PpeLevel;
use crate::study::BusHazard;

pub const LABEL_TITLE: &str = "Arc Flash and Shock Hazard";
pub const NO_CATEGORY_TEXT: &str = "DANGER \u{2014} no PPE category";

/// Field captions printed on every label, in layout order.
pub const FIELD_NAMES: [&str; 10] = [
    "Nominal System Voltage",
    "Incident Energy",
    "Arc Flash Boundary",
    "Working Distance",
    "Limited Approach",
    "Restricted Approach",
    "PPE Hazard Category",
    "Arc Rating of Clothing",
    "Arc-rated PPE",
    "Additional PPE",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("cannot build label for `{0}`: {1}")]
    MissingInput(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelFormat {
    Text,
    Svg,
    Json,
}

impl LabelFormat {
    pub fn extension(self) -> &'static str {
        match self {
            LabelFormat::Text => "txt",
            LabelFormat::Svg => "svg",
            LabelFormat::Json => "json",
        }
    }
}

impl FromStr for LabelFormat {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "txt" | "text" => Ok(LabelFormat::Text),
            "svg" => Ok(LabelFormat::Svg),
            "json" => Ok(LabelFormat::Json),
            other => Err(RenderError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkbox {
    pub item: String,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelPpe {
    pub category: u8,
    pub clothing_rating_cal_cm2: f64,
}

/// Display strings of the numeric label fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDisplay {
    pub nominal_voltage: String,
    pub incident_energy: String,
    pub arc_flash_boundary: String,
    pub working_distance: String,
    pub limited_approach: String,
    pub restricted_approach: String,
    pub ppe_category: String,
    pub clothing_rating: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSpec {
    pub equipment_id: String,
    /// `WARNING`, or `DANGER` when no PPE category applies.
    pub header: String,
    pub title: String,
    pub nominal_voltage_v: f64,
    pub incident_energy_cal_cm2: f64,
    pub arc_flash_boundary_m: f64,
    pub working_distance_m: f64,
    pub limited_approach_m: f64,
    pub restricted_approach_m: f64,
    /// `None` when the incident energy is beyond every category.
    pub ppe: Option<LabelPpe>,
    pub arc_rated_ppe: Vec<Checkbox>,
    pub additional_ppe: Vec<Checkbox>,
    pub advisories: Vec<String>,
    pub display: LabelDisplay,
}

fn trimmed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn display_voltage(v: f64) -> String {
    format!("{} V", trimmed(v, 2))
}

pub fn display_energy(cal_cm2: f64) -> String {
    format!("{cal_cm2:.1}")
}

pub fn display_metres(m: f64) -> String {
    format!("{m:.2} m")
}

pub fn display_approach(m: f64) -> String {
    format!("{} m", trimmed(m, 2))
}

pub fn display_rating(cal_cm2: f64) -> String {
    format!("{} cal/cm\u{b2}", trimmed(cal_cm2, 2))
}

/// Assembles the label for one bus from its hazard bundle.
pub fn build_label(
    bundle: &BusHazard,
    arc_rated_items: &[String],
    additional_items: &[String],
) -> Result<LabelSpec, RenderError> {
    let hazard = &bundle.hazard;
    let boundaries = &bundle.boundaries;
    let e = hazard.incident_energy_cal_cm2;
    if !e.is_finite() {
        return Err(RenderError::MissingInput(
            bundle.bus_id.clone(),
            "incident energy".into(),
        ));
    }
    let (ppe, required, additional) = match (
        bundle.category.level,
        bundle.category.min_clothing_rating_cal_cm2,
    ) {
        (PpeLevel::Category(n), Some(rating)) => (
            Some(LabelPpe {
                category: n,
                clothing_rating_cal_cm2: rating,
            }),
            bundle.category.required_items.as_slice(),
            bundle.category.additional_items.as_slice(),
        ),
        _ => (None, &[][..], &[][..]),
    };
    let boxes = |items: &[String], checked: &[String]| {
        items
            .iter()
            .map(|item| Checkbox {
                item: item.clone(),
                checked: checked.contains(item),
            })
            .collect::<Vec<_>>()
    };

    let afb_m = hazard.afb_mm / 1000.0;
    let wd_m = hazard.params.working_distance_mm / 1000.0;
    let display = LabelDisplay {
        nominal_voltage: display_voltage(bundle.nominal_voltage_v),
        incident_energy: display_energy(e),
        arc_flash_boundary: display_metres(afb_m),
        working_distance: display_metres(wd_m),
        limited_approach: display_approach(boundaries.limited_m),
        restricted_approach: display_approach(boundaries.restricted_m),
        ppe_category: ppe
            .as_ref()
            .map_or(NO_CATEGORY_TEXT.to_string(), |p| p.category.to_string()),
        clothing_rating: ppe.as_ref().map_or(NO_CATEGORY_TEXT.to_string(), |p| {
            display_rating(p.clothing_rating_cal_cm2)
        }),
    };
    Ok(LabelSpec {
        equipment_id: bundle.bus_id.clone(),
        header: if ppe.is_some() { "WARNING" } else { "DANGER" }.to_string(),
        title: LABEL_TITLE.to_string(),
        nominal_voltage_v: bundle.nominal_voltage_v,
        incident_energy_cal_cm2: e,
        arc_flash_boundary_m: afb_m,
        working_distance_m: wd_m,
        limited_approach_m: boundaries.limited_m,
        restricted_approach_m: boundaries.restricted_m,
        ppe,
        arc_rated_ppe: boxes(arc_rated_items, required),
        additional_ppe: boxes(additional_items, additional),
        advisories: hazard.advisories.iter().map(ToString::to_string).collect(),
        display,
    })
}

pub fn render_label(spec: &LabelSpec, format: LabelFormat) -> Vec<u8> {
    match format {
        LabelFormat::Text => render_text(spec).into_bytes(),
        LabelFormat::Svg => render_svg(spec).into_bytes(),
        LabelFormat::Json => {
            let mut s = serde_json::to_string_pretty(spec).expect("label serializes");
            s.push('\n');
            s.into_bytes()
        }
    }
}

/// Like [`render_label`] with the format given by name.
pub fn render_label_as(spec: &LabelSpec, format: &str) -> Result<Vec<u8>, RenderError> {
    Ok(render_label(spec, format.parse()?))
}

pub fn parse_label_json(bytes: &[u8]) -> Result<LabelSpec, serde_json::Error> {
    serde_json::from_slice(bytes)
}

const TEXT_WIDTH: usize = 78;
const CHECK_COL: usize = 26;

fn mark(checked: bool) -> &'static str {
    if checked {
        "[X]"
    } else {
        "[ ]"
    }
}

// Arc-rated items fill two columns, additional items the third.
fn checkbox_rows(spec: &LabelSpec) -> Vec<[Option<&Checkbox>; 3]> {
    let half = spec.arc_rated_ppe.len().div_ceil(2);
    let (left, mid) = spec.arc_rated_ppe.split_at(half);
    let rows = half.max(spec.additional_ppe.len());
    (0..rows)
        .map(|i| [left.get(i), mid.get(i), spec.additional_ppe.get(i)])
        .collect()
}

fn render_text(spec: &LabelSpec) -> String {
    let d = &spec.display;
    let mut out = String::new();
    let rule = |c: char| c.to_string().repeat(TEXT_WIDTH);
    let centered = |s: &str| {
        let n = s.chars().count();
        let pad = TEXT_WIDTH.saturating_sub(n) / 2;
        format!("{}{}", " ".repeat(pad), s).trim_end().to_string()
    };
    let row = |l: &str, lv: &str, r: &str, rv: &str| {
        format!("{l:<24}{lv:>12} | {r:<26}{rv:>13}")
            .trim_end()
            .to_string()
    };

    writeln!(out, "{}", rule('=')).unwrap();
    writeln!(out, "{}", centered(&format!("\u{26a0} {}", spec.header))).unwrap();
    writeln!(out, "{}", centered(&spec.title)).unwrap();
    writeln!(out, "{}", rule('=')).unwrap();
    writeln!(
        out,
        "{}",
        row(
            FIELD_NAMES[0],
            &d.nominal_voltage,
            "Incident Energy (cal/cm\u{b2})",
            &d.incident_energy
        )
    )
    .unwrap();
    writeln!(
        out,
        "{}",
        row(
            FIELD_NAMES[2],
            &d.arc_flash_boundary,
            FIELD_NAMES[3],
            &d.working_distance
        )
    )
    .unwrap();
    writeln!(
        out,
        "{}",
        row(FIELD_NAMES[4], &d.limited_approach, "", "OR")
    )
    .unwrap();
    if spec.ppe.is_some() {
        writeln!(
            out,
            "{}",
            row(
                FIELD_NAMES[5],
                &d.restricted_approach,
                FIELD_NAMES[6],
                &d.ppe_category
            )
        )
        .unwrap();
        writeln!(out, "{}", row("", "", FIELD_NAMES[7], &d.clothing_rating)).unwrap();
    } else {
        writeln!(
            out,
            "{}",
            row(FIELD_NAMES[5], &d.restricted_approach, NO_CATEGORY_TEXT, "")
        )
        .unwrap();
    }
    writeln!(out, "{}", rule('-')).unwrap();
    writeln!(
        out,
        "{:<w$}{}:",
        format!("{}:", FIELD_NAMES[8]),
        FIELD_NAMES[9],
        w = 2 * CHECK_COL
    )
    .unwrap();
    for cells in checkbox_rows(spec) {
        let mut line = String::new();
        for cell in cells {
            let text = cell.map_or(String::new(), |c| format!("{} {}", mark(c.checked), c.item));
            write!(line, "{text:<CHECK_COL$}").unwrap();
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    writeln!(out, "{}", rule('-')).unwrap();
    if spec.advisories.is_empty() {
        writeln!(out, "Advisories: none").unwrap();
    } else {
        writeln!(out, "Advisories:").unwrap();
        for a in &spec.advisories {
            writeln!(out, "  * {a}").unwrap();
        }
    }
    writeln!(out, "Equipment ID: {}", spec.equipment_id).unwrap();
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

// SVG geometry, user units on a 4:3 canvas printed at 4 in x 3 in.
const SVG_W: f64 = 480.0;
const SVG_H: f64 = 360.0;
const SVG_HEADER_H: f64 = 52.0;
const SVG_MARGIN: f64 = 12.0;
const SVG_ROW_H: f64 = 17.0;
const SVG_BOX: f64 = 9.0;
const SVG_FONT: &str = "Helvetica, Arial, sans-serif";
const WARNING_ORANGE: &str = "#FF8200";
const DANGER_RED: &str = "#C8102E";

fn render_svg(spec: &LabelSpec) -> String {
    let d = &spec.display;
    let mut s = String::new();
    let text = |s: &mut String,
                x: f64,
                y: f64,
                size: f64,
                weight: &str,
                anchor: &str,
                body: &str| {
        writeln!(
            s,
            r##"  <text x="{x}" y="{y}" font-size="{size}" font-weight="{weight}" text-anchor="{anchor}">{}</text>"##,
            xml_escape(body)
        )
        .unwrap();
    };
    writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="4in" height="3in" viewBox="0 0 {SVG_W} {SVG_H}" font-family="{SVG_FONT}">"##
    )
    .unwrap();
    writeln!(
        s,
        r##"  <rect x="1" y="1" width="{}" height="{}" fill="#FFFFFF" stroke="#000000" stroke-width="2"/>"##,
        SVG_W - 2.0,
        SVG_H - 2.0
    )
    .unwrap();
    let band = if spec.ppe.is_some() {
        WARNING_ORANGE
    } else {
        DANGER_RED
    };
    writeln!(
        s,
        r##"  <rect x="1" y="1" width="{}" height="{SVG_HEADER_H}" fill="{band}"/>"##,
        SVG_W - 2.0
    )
    .unwrap();
    // warning triangle glyph drawn as a path so no symbol font is needed
    writeln!(
        s,
        r##"  <path d="M 128 34 L 142 10 L 156 34 Z" fill="#FFD100" stroke="#000000" stroke-width="2"/><path d="M 142 17 L 142 27 M 142 30 L 142 31" stroke="#000000" stroke-width="2.5"/>"##
    )
    .unwrap();
    text(
        &mut s,
        SVG_W / 2.0 + 14.0,
        31.0,
        24.0,
        "bold",
        "middle",
        &spec.header,
    );
    text(
        &mut s,
        SVG_W / 2.0,
        47.0,
        13.0,
        "bold",
        "middle",
        &spec.title,
    );

    let mut y = SVG_HEADER_H + 20.0;
    let mid = SVG_W / 2.0;
    let rows: Vec<(&str, &str, &str, &str)> = {
        let mut r = vec![
            (
                FIELD_NAMES[0],
                d.nominal_voltage.as_str(),
                "Incident Energy (cal/cm\u{b2})",
                d.incident_energy.as_str(),
            ),
            (
                FIELD_NAMES[2],
                d.arc_flash_boundary.as_str(),
                FIELD_NAMES[3],
                d.working_distance.as_str(),
            ),
            (FIELD_NAMES[4], d.limited_approach.as_str(), "", "OR"),
        ];
        if spec.ppe.is_some() {
            r.push((
                FIELD_NAMES[5],
                d.restricted_approach.as_str(),
                FIELD_NAMES[6],
                d.ppe_category.as_str(),
            ));
            r.push(("", "", FIELD_NAMES[7], d.clothing_rating.as_str()));
        } else {
            r.push((
                FIELD_NAMES[5],
                d.restricted_approach.as_str(),
                NO_CATEGORY_TEXT,
                "",
            ));
        }
        r
    };
    for (l, lv, r, rv) in rows {
        text(&mut s, SVG_MARGIN, y, 11.0, "normal", "start", l);
        text(&mut s, mid - SVG_MARGIN, y, 11.0, "bold", "end", lv);
        text(&mut s, mid + SVG_MARGIN, y, 11.0, "normal", "start", r);
        text(&mut s, SVG_W - SVG_MARGIN, y, 11.0, "bold", "end", rv);
        y += SVG_ROW_H;
    }
    writeln!(
        s,
        r##"  <line x1="{SVG_MARGIN}" y1="{}" x2="{}" y2="{}" stroke="#000000" stroke-width="1"/>"##,
        y - 8.0,
        SVG_W - SVG_MARGIN,
        y - 8.0
    )
    .unwrap();
    y += 6.0;
    let col = (SVG_W - 2.0 * SVG_MARGIN) / 3.0;
    text(
        &mut s,
        SVG_MARGIN,
        y,
        11.0,
        "bold",
        "start",
        &format!("{}:", FIELD_NAMES[8]),
    );
    text(
        &mut s,
        SVG_MARGIN + 2.0 * col,
        y,
        11.0,
        "bold",
        "start",
        &format!("{}:", FIELD_NAMES[9]),
    );
    y += 15.0;
    for cells in checkbox_rows(spec) {
        for (i, cell) in cells.iter().enumerate() {
            let Some(c) = cell else { continue };
            let x = SVG_MARGIN + i as f64 * col;
            writeln!(
                s,
                r##"  <rect x="{x}" y="{}" width="{SVG_BOX}" height="{SVG_BOX}" fill="none" stroke="#000000" stroke-width="1"/>"##,
                y - SVG_BOX
            )
            .unwrap();
            if c.checked {
                writeln!(
                    s,
                    r##"  <path d="M {} {} L {} {} L {} {}" fill="none" stroke="#000000" stroke-width="1.8"/>"##,
                    x + 1.5,
                    y - 4.5,
                    x + 3.8,
                    y - 1.5,
                    x + 8.0,
                    y - 8.0
                )
                .unwrap();
            }
            text(
                &mut s,
                x + SVG_BOX + 4.0,
                y,
                10.0,
                "normal",
                "start",
                &c.item,
            );
        }
        y += 14.0;
    }
    for (i, a) in spec.advisories.iter().rev().enumerate() {
        let y = SVG_H - 26.0 - 12.0 * i as f64;
        text(
            &mut s,
            SVG_MARGIN,
            y,
            8.0,
            "normal",
            "start",
            &format!("Advisory: {a}"),
        );
    }
    text(
        &mut s,
        SVG_MARGIN,
        SVG_H - 12.0,
        11.0,
        "bold",
        "start",
        &format!("Equipment ID: {}", spec.equipment_id),
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_rules() {
        assert_eq!(display_voltage(480.0), "480 V");
        assert_eq!(display_energy(3.5990323), "3.6");
        assert_eq!(display_metres(0.9090905), "0.91 m");
        assert_eq!(display_metres(0.4572), "0.46 m");
        assert_eq!(display_approach(1.0), "1 m");
        assert_eq!(display_approach(0.3), "0.3 m");
        assert_eq!(display_rating(4.0), "4 cal/cm\u{b2}");
        assert_eq!(display_rating(25.0), "25 cal/cm\u{b2}");
    }

    #[test]
    fn format_names() {
        assert_eq!("txt".parse::<LabelFormat>().unwrap(), LabelFormat::Text);
        assert_eq!("svg".parse::<LabelFormat>().unwrap(), LabelFormat::Svg);
        assert_eq!(
            "pdf".parse::<LabelFormat>(),
            Err(RenderError::UnknownFormat("pdf".into()))
        );
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(xml_escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}

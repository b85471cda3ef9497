//! Browser demo: frame validity, bounded countermodel search and
//! selective filtration, each returning a JSON string with an inline SVG
//! drawing. The `*_json` functions are plain Rust so they can be tested
//! natively; the exported wrappers only convert errors.

pub mod svg;

use mmlogic::decision::{countermodel, SearchConfig, Status};
use mmlogic::filtration::{run_filtration, FiltrationError, FiltrationVariant, Limits};
use mmlogic::formula::parse_extended;
use mmlogic::frame::{FrameError, LogicId, TwoFrame};
use mmlogic::io;
use mmlogic::semantics::{frame_validates, Model, Validity};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest carrier the page lets a search visit.
pub const MAX_BROWSER_SIZE: usize = 4;

/// Valuations per validity check; keeps the page responsive.
pub const BROWSER_VALUATION_BUDGET: u64 = 1 << 20;

fn config() -> SearchConfig {
    SearchConfig {
        valuation_budget: BROWSER_VALUATION_BUDGET,
        ..SearchConfig::default()
    }
}

fn labels(model: &Model) -> Vec<String> {
    (0..model.frame.size())
        .map(|w| {
            model
                .valuation
                .iter()
                .filter(|(_, s)| s.contains(w))
                .map(|(p, _)| p.as_str())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

fn frame_svg(frame: &TwoFrame) -> String {
    svg::render(frame, &[])
}

/// Is `formula` valid on the frame given as frame-file JSON?
pub fn check_validity_json(frame_json: &str, formula: &str) -> Result<String, String> {
    let frame = io::frame_from_json(frame_json).map_err(|e| e.to_string())?;
    let phi = parse_extended(formula.trim()).map_err(|e| e.to_string())?;
    let out = match frame_validates(&frame, &phi, BROWSER_VALUATION_BUDGET).map_err(|e| e.to_string())? {
        Validity::Valid => json!({
            "formula": phi.to_string(),
            "status": "valid",
            "svg": frame_svg(&frame),
        }),
        Validity::Refuted { valuation, world } => {
            let m = Model::new(frame, valuation).map_err(|e| e.to_string())?;
            json!({
                "formula": phi.to_string(),
                "status": "refuted",
                "counterexample": io::counterexample_json(&m, world),
                "svg": svg::render(&m.frame, &labels(&m)),
            })
        }
    };
    Ok(out.to_string())
}

/// Smallest refuting frame of a class, up to `max_size` worlds.
pub fn search_countermodel_json(formula: &str, logic: &str, max_size: usize) -> Result<String, String> {
    let phi = parse_extended(formula.trim()).map_err(|e| e.to_string())?;
    let logic: LogicId = logic.parse().map_err(|e: FrameError| e.to_string())?;
    if max_size == 0 || max_size > MAX_BROWSER_SIZE {
        return Err(format!("size bound must be between 1 and {MAX_BROWSER_SIZE}"));
    }
    let out = countermodel(&phi, &logic, max_size, &config()).map_err(|e| e.to_string())?;
    let mut v = io::outcome_json(&out);
    v["formula"] = json!(phi.to_string());
    v["logic"] = json!(logic.to_string());
    if let (Status::Refuted, Some(w)) = (out.status, &out.witness) {
        v["svg"] = json!(svg::render(&w.model.frame, &labels(&w.model)));
    }
    Ok(v.to_string())
}

/// Filtration of a model (model-file JSON) refuting `formula`.
pub fn filtrate_json(model_json: &str, formula: &str, variant: &str) -> Result<String, String> {
    let m = io::model_from_json(model_json).map_err(|e| e.to_string())?;
    let phi = parse_extended(formula.trim()).map_err(|e| e.to_string())?;
    let variant: FiltrationVariant = variant.parse().map_err(|e: FiltrationError| e.to_string())?;
    let report = run_filtration(&m, &phi, variant, Limits::default()).map_err(|e| e.to_string())?;
    let mut v = io::report_json(&m, &report);
    v["source_svg"] = json!(svg::render(&m.frame, &labels(&m)));
    v["svg"] = json!(svg::render(report.frame(), &labels(&report.model)));
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn check_validity(frame_json: &str, formula: &str) -> Result<String, JsValue> {
    check_validity_json(frame_json, formula).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn search_countermodel(formula: &str, logic: &str, max_size: usize) -> Result<String, JsValue> {
    search_countermodel_json(formula, logic, max_size).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn filtrate(model_json: &str, formula: &str, variant: &str) -> Result<String, JsValue> {
    filtrate_json(model_json, formula, variant).map_err(|e| JsValue::from_str(&e))
}

//! JSON file formats: frames, models, counterexamples, and reports.
//!
//! A frame file is `{"worlds": [...], "R": [[s, t], ...], "E": [[s, t], ...]}`;
//! a model adds `"valuation": {"p": [...]}`, a counterexample adds
//! `"world"`. Unknown keys are rejected. On output `E` lists only the
//! pairs `s < t` of the closed equivalence.

use crate::decision::{CrossCheck, SearchOutcome};
use crate::filtration::{FiltrationReport, StepTag};
use crate::frame::{FrameError, TwoFrame, WorldSet};
use crate::semantics::{Model, SemanticsError, Valuation};
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

type Pair = (String, String);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    worlds: Vec<String>,
    #[serde(rename = "R", default)]
    r: Vec<Pair>,
    #[serde(rename = "E", default)]
    e: Vec<Pair>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    worlds: Vec<String>,
    #[serde(rename = "R", default)]
    r: Vec<Pair>,
    #[serde(rename = "E", default)]
    e: Vec<Pair>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    world: Option<String>,
}

fn decode<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

fn lookup(frame: &TwoFrame, name: &str) -> Result<usize, IoError> {
    frame.world_index(name).ok_or_else(|| IoError::UnknownWorld(name.to_string()))
}

pub fn frame_from_json(text: &str) -> Result<TwoFrame, IoError> {
    let file: FrameFile = decode(text)?;
    Ok(TwoFrame::new(file.worlds, &file.r, &file.e)?)
}

fn model_parts(text: &str) -> Result<(Model, Option<usize>), IoError> {
    let file: ModelFile = decode(text)?;
    let frame = TwoFrame::new(file.worlds, &file.r, &file.e)?;
    let mut valuation = Valuation::new();
    for (var, names) in &file.valuation {
        let set = names.iter().map(|n| lookup(&frame, n)).collect::<Result<WorldSet, _>>()?;
        valuation.insert(var.clone(), set);
    }
    let world = file.world.as_deref().map(|w| lookup(&frame, w)).transpose()?;
    Ok((Model::new(frame, valuation)?, world))
}

/// A model file; a `world` key is tolerated and ignored.
pub fn model_from_json(text: &str) -> Result<Model, IoError> {
    model_parts(text).map(|(m, _)| m)
}

/// A model file with its refuting `world`.
pub fn counterexample_from_json(text: &str) -> Result<(Model, usize), IoError> {
    match model_parts(text)? {
        (m, Some(w)) => Ok((m, w)),
        (_, None) => Err(IoError::Json("missing field `world`".into())),
    }
}

fn named_pairs(frame: &TwoFrame, pairs: impl Iterator<Item = (usize, usize)>) -> Vec<Value> {
    pairs
        .map(|(a, b)| json!([frame.world_name(a), frame.world_name(b)]))
        .collect()
}

pub fn frame_json(frame: &TwoFrame) -> Value {
    json!({
        "worlds": frame.worlds(),
        "R": named_pairs(frame, frame.r().pairs()),
        "E": named_pairs(frame, frame.e().pairs().filter(|(a, b)| a < b)),
    })
}

fn valuation_json(model: &Model) -> Value {
    let f = &model.frame;
    let map: serde_json::Map<String, Value> = model
        .valuation
        .iter()
        .map(|(p, set)| (p.clone(), json!(set.iter().map(|w| f.world_name(w)).collect::<Vec<_>>())))
        .collect();
    Value::Object(map)
}

pub fn model_json(model: &Model) -> Value {
    let mut v = frame_json(&model.frame);
    v["valuation"] = valuation_json(model);
    v
}

pub fn counterexample_json(model: &Model, world: usize) -> Value {
    let mut v = model_json(model);
    v["world"] = json!(model.frame.world_name(world));
    v
}

pub fn outcome_json(outcome: &SearchOutcome) -> Value {
    json!({
        "status": outcome.status.as_str(),
        "bound": outcome.bound,
        "frames_examined": outcome.frames_examined,
        "witness": outcome.witness.as_ref().map(|w| counterexample_json(&w.model, w.world)),
    })
}

pub fn crosscheck_json(c: &CrossCheck) -> Value {
    json!({
        "agree": c.agree,
        "per_size": c.per_size.iter().map(|&(size, a, b)| json!({
            "size": size,
            "plus_grz_b_refuted": a,
            "mglb_translation_refuted": b,
        })).collect::<Vec<_>>(),
        "disagreement": c.disagreement.as_ref().map(|(a, b)| json!({
            "plus_grz_b": frame_json(a),
            "mglb": frame_json(b),
        })),
    })
}

/// The construction fact a step relies on.
pub fn lemma_tag(step: StepTag) -> &'static str {
    match step {
        StepTag::Initial => "smax-existence",
        StepTag::ExistsWitness => "exists-witness",
        StepTag::DiaHorizontal | StepTag::DiaVertical => "dia-witness",
        StepTag::LeftCommutativity => "left-commutativity-closure",
        StepTag::RightCommutativity => "right-commutativity-closure",
    }
}

pub fn report_json(source: &Model, report: &FiltrationReport) -> Value {
    let sf = &source.frame;
    let name = |i: usize| sf.world_name(i).to_string();
    let pairs = |ps: &[(usize, usize)]| ps.iter().map(|&(a, b)| json!([name(a), name(b)])).collect::<Vec<_>>();
    let c = &report.checks;
    json!({
        "variant": report.variant.to_string(),
        "formula": report.formula.to_string(),
        "subformula_count": report.subformula_count,
        "model": model_json(&report.model),
        "points": report.points.iter().map(|p| json!({
            "world": name(p.source),
            "step": p.info.tag.as_str(),
            "round": p.info.round,
        })).collect::<Vec<_>>(),
        "depth": report.depth,
        "depth_bound_exponent": report.depth_bound_exponent,
        "rounds": report.rounds,
        "checks": {
            "truth_lemma": c.truth_lemma,
            "frame_class": c.frame_class,
            "skeleton_depth": c.skeleton_depth,
            "cluster_chains": c.cluster_chains,
            "total_depth": c.total_depth,
            "provenance": c.provenance,
            "all": c.all(),
        },
        "log": report.log.iter().map(|e| json!({
            "round": e.round,
            "step": e.step.as_str(),
            "lemma": lemma_tag(e.step),
            "point": e.point.map(name),
            "R": pairs(&e.r_pairs),
            "E": pairs(&e.e_pairs),
            "obligation": e.obligation,
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::fixtures::d2;

    const D2: &str = r#"{"worlds":["x","y"],"R":[["x","x"],["x","y"],["y","y"]],"E":[["x","y"]]}"#;

    #[test]
    fn frame_round_trip() {
        let f = frame_from_json(D2).unwrap();
        assert_eq!(f, d2());
        let back = frame_from_json(&frame_json(&f).to_string()).unwrap();
        assert_eq!(back, f);
        assert_eq!(frame_json(&f)["E"], json!([["x", "y"]]));
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"worlds":["x"],"R":[],"E":[],"extra":1}"#;
        assert!(matches!(frame_from_json(bad), Err(IoError::Json(_))));
        assert!(matches!(
            frame_from_json(r#"{"worlds":["x"],"R":[["x","z"]]}"#),
            Err(IoError::Frame(FrameError::UnknownWorld(_)))
        ));
    }

    #[test]
    fn counterexample_round_trip() {
        let v = [("p".to_string(), WorldSet::singleton(1))].into_iter().collect();
        let m = Model::new(d2(), v).unwrap();
        let text = counterexample_json(&m, 0).to_string();
        let (back, w) = counterexample_from_json(&text).unwrap();
        assert_eq!((back, w), (m.clone(), 0));
        assert!(counterexample_from_json(&model_json(&m).to_string()).is_err());
        assert!(matches!(
            model_from_json(r#"{"worlds":["x"],"valuation":{"p":["q"]}}"#),
            Err(IoError::UnknownWorld(_))
        ));
    }
}

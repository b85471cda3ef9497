//! The `mmlogic` command line: argument parsing, file loading and output
//! rendering. Every invocation writes one JSON document to stdout (or text
//! with `--pretty`) and maps its outcome to an exit code.

use clap::{Args, Parser, Subcommand};
use mmlogic::decision::{self, DecisionError, SearchConfig, Status, SUITES};
use mmlogic::filtration::{run_filtration, FiltrationError, FiltrationVariant, Limits};
use mmlogic::formula::{boxplus_translate, parse_extended, Formula, FormulaError};
use mmlogic::frame::{product, to_dot, FrameError, KripkeFrame, LogicId, TwoFrame};
use mmlogic::io::{self, IoError};
use mmlogic::semantics::{frame_validates, truth_set, Model, SemanticsError, Validity};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "mmlogic", version, about = "Workbench for monadic bimodal logics over finite 2-frames")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Also write the resulting frame (when there is one) as Graphviz DOT.
    #[arg(long, global = true, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Valuation budget for validity checks; step budget for `filtrate`.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct FormulaArg {
    /// A formula, a named formula (com_l, com_r, casari, bd_N), or @FILE.
    #[arg(long, value_name = "STR|@FILE")]
    pub formula: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frame validity (with --frame) or truth in a model (with --model).
    Validate {
        #[arg(long, value_name = "FILE", required_unless_present = "model", conflicts_with = "model")]
        frame: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        #[command(flatten)]
        formula: FormulaArg,
        /// Also report membership in this frame class.
        #[arg(long, value_name = "ID")]
        logic: Option<String>,
    },
    /// Bounded search for a refuting frame of a class.
    Countermodel {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_name = "ID")]
        logic: String,
        #[arg(long, value_name = "N", default_value_t = 3)]
        max_size: usize,
    },
    /// Selective filtration of a refuting model.
    Filtrate {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_name = "VARIANT")]
        variant: String,
    },
    /// The box-plus translation.
    Translate {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Product of a Kripke frame (E = identity) and an S5 frame (R an
    /// equivalence): `--frame LEFT --frame RIGHT`.
    Product {
        #[arg(long, value_name = "FILE", num_args = 1, required = true)]
        frame: Vec<PathBuf>,
    },
    /// Frames of a class by size, one per isomorphism class.
    Enumerate {
        #[arg(long, value_name = "ID")]
        logic: String,
        #[arg(long, value_name = "N", default_value_t = 2)]
        max_size: usize,
        /// Every labelled frame instead of isomorphism representatives.
        #[arg(long)]
        labelled: bool,
    },
    /// The E-skeleton of a frame.
    Skeleton {
        #[arg(long, value_name = "FILE")]
        frame: PathBuf,
    },
    /// Exhaustive check of a characterization result.
    VerifyTheorems {
        #[arg(long, value_name = "NAME")]
        suite: String,
        #[arg(long, value_name = "N", default_value_t = 3)]
        cap: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {message}")]
    Read { path: String, message: String },
    #[error("cannot write `{path}`: {message}")]
    Write { path: String, message: String },
    #[error("in `{path}`: {source}")]
    Input { path: String, source: IoError },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::Input { .. } => "input",
            CliError::Formula(_) => "formula",
            CliError::Frame(_) => "frame",
            CliError::Semantics(SemanticsError::BudgetExceeded { .. }) => "budget",
            CliError::Semantics(_) => "semantics",
            CliError::Decision(DecisionError::BudgetExceeded(_)) => "budget",
            CliError::Decision(_) => "decision",
            CliError::Filtration(FiltrationError::BudgetExceeded(_)) => "budget",
            CliError::Filtration(_) => "filtration",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_ERROR,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

/// What an invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Rendered {
    code: i32,
    json: Value,
    text: String,
    dot: Option<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load<T>(path: &Path, f: impl Fn(&str) -> Result<T, IoError>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn formula(arg: &FormulaArg) -> Result<Formula, CliError> {
    let text = match arg.formula.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => arg.formula.clone(),
    };
    Ok(parse_extended(text.trim())?)
}

fn logic(id: &str) -> Result<LogicId, CliError> {
    id.parse().map_err(|e: FrameError| CliError::Usage(e.to_string()))
}

fn model_labels(model: &Model) -> Vec<String> {
    (0..model.frame.size())
        .map(|w| {
            let vars: Vec<&str> = model
                .valuation
                .iter()
                .filter(|(_, set)| set.contains(w))
                .map(|(p, _)| p.as_str())
                .collect();
            vars.join(",")
        })
        .collect()
}

fn names(frame: &TwoFrame, worlds: impl Iterator<Item = usize>) -> Vec<String> {
    worlds.map(|w| frame.world_name(w).to_string()).collect()
}

fn config(budget: Option<u64>) -> SearchConfig {
    let mut c = SearchConfig::default();
    if let Some(b) = budget {
        c.valuation_budget = b;
    }
    c
}

/// Compact text form of a frame for `--pretty`.
fn frame_text(f: &TwoFrame) -> String {
    let r: Vec<String> = f
        .r()
        .pairs()
        .map(|(a, b)| format!("{}->{}", f.world_name(a), f.world_name(b)))
        .collect();
    let e: Vec<String> = f
        .e_clusters()
        .iter()
        .map(|c| format!("{{{}}}", names(f, c.iter()).join(",")))
        .collect();
    format!("  worlds: {}\n  R: {}\n  E-clusters: {}", f.worlds().join(" "), r.join(" "), e.join(" "))
}

fn model_text(m: &Model) -> String {
    let v: Vec<String> = m
        .valuation
        .iter()
        .map(|(p, set)| format!("{p}={{{}}}", names(&m.frame, set.iter()).join(",")))
        .collect();
    format!("{}\n  valuation: {}", frame_text(&m.frame), v.join(" "))
}

/// Adds `key` unless `value` is absent.
fn with(mut json: Value, key: &str, value: Option<Value>) -> Value {
    if let Some(v) = value {
        json[key] = v;
    }
    json
}

fn validate(
    cli: &Cli,
    frame: &Option<PathBuf>,
    model: &Option<PathBuf>,
    arg: &FormulaArg,
    class: &Option<String>,
) -> Result<Rendered, CliError> {
    let phi = formula(arg)?;
    let class = class.as_deref().map(logic).transpose()?;
    let membership = |f: &TwoFrame| class.map(|l| json!({ "logic": l.to_string(), "member": mmlogic::frame::frame_class_check(f, &l) }));
    if let Some(path) = model {
        let m = load(path, io::model_from_json)?;
        let truth = truth_set(&m, &phi);
        let refuting = m.frame.all() - truth;
        let holds = refuting.is_empty();
        let json = json!({
            "command": "validate",
            "formula": phi.to_string(),
            "status": if holds { "true_everywhere" } else { "refuted" },
            "truth_set": names(&m.frame, truth.iter()),
            "refuting_worlds": names(&m.frame, refuting.iter()),
        });
        let json = with(json, "class", membership(&m.frame));
        let text = if holds {
            format!("{phi} holds at every world of the model")
        } else {
            format!("{phi} fails at {}", names(&m.frame, refuting.iter()).join(", "))
        };
        let dot = Some(to_dot(&m.frame, &model_labels(&m)));
        return Ok(Rendered {
            code: if holds { EXIT_OK } else { EXIT_NEGATIVE },
            json,
            text,
            dot,
        });
    }
    let path = frame.as_ref().expect("clap enforces --frame or --model");
    let f = load(path, io::frame_from_json)?;
    let budget = config(cli.budget).valuation_budget;
    match frame_validates(&f, &phi, budget)? {
        Validity::Valid => Ok(Rendered {
            code: EXIT_OK,
            json: with(
                json!({ "command": "validate", "formula": phi.to_string(), "status": "valid" }),
                "class",
                membership(&f),
            ),
            text: format!("{phi} is valid on the frame"),
            dot: Some(to_dot(&f, &[])),
        }),
        Validity::Refuted { valuation, world } => {
            let m = Model::new(f, valuation)?;
            let cx = io::counterexample_json(&m, world);
            Ok(Rendered {
                code: EXIT_NEGATIVE,
                text: format!(
                    "{phi} is refuted at {}\n{}",
                    m.frame.world_name(world),
                    model_text(&m)
                ),
                json: with(
                    json!({ "command": "validate", "formula": phi.to_string(), "status": "refuted", "counterexample": cx }),
                    "class",
                    membership(&m.frame),
                ),
                dot: Some(to_dot(&m.frame, &model_labels(&m))),
            })
        }
    }
}

fn countermodel(cli: &Cli, arg: &FormulaArg, id: &str, max_size: usize) -> Result<Rendered, CliError> {
    let phi = formula(arg)?;
    let l = logic(id)?;
    if max_size == 0 {
        return Err(CliError::Usage("--max-size must be at least 1".into()));
    }
    let out = decision::countermodel(&phi, &l, max_size, &config(cli.budget))?;
    let mut json = json!({ "command": "countermodel", "formula": phi.to_string(), "logic": l.to_string() });
    for (k, v) in io::outcome_json(&out).as_object().unwrap() {
        json[k] = v.clone();
    }
    let (code, text, dot) = match (&out.status, &out.witness) {
        (Status::Refuted, Some(w)) => (
            EXIT_NEGATIVE,
            format!(
                "{phi} is refuted on a {}-world {l}-frame at {}\n{}",
                out.bound,
                w.model.frame.world_name(w.world),
                model_text(&w.model)
            ),
            Some(to_dot(&w.model.frame, &model_labels(&w.model))),
        ),
        _ => (
            EXIT_OK,
            format!(
                "{phi} is valid on every {l}-frame with at most {max_size} worlds ({} frames examined)",
                out.frames_examined
            ),
            None,
        ),
    };
    Ok(Rendered { code, json, text, dot })
}

fn filtrate(cli: &Cli, path: &Path, arg: &FormulaArg, variant: &str) -> Result<Rendered, CliError> {
    let phi = formula(arg)?;
    let variant: FiltrationVariant = variant
        .parse()
        .map_err(|e: FiltrationError| CliError::Usage(e.to_string()))?;
    let m = load(path, io::model_from_json)?;
    let limits = Limits {
        budget: cli.budget.map(|b| b as usize),
        ..Limits::default()
    };
    let report = run_filtration(&m, &phi, variant, limits)?;
    let mut json = json!({ "command": "filtrate" });
    for (k, v) in io::report_json(&m, &report).as_object().unwrap() {
        json[k] = v.clone();
    }
    let c = &report.checks;
    let text = format!(
        "{variant} filtration of {phi}: {} points, depth {}, {} rounds\n\
         truth lemma {}, frame class {}, skeleton depth {}, cluster chains {}, total depth {}, provenance {}",
        report.points.len(),
        report.depth.map_or("-".to_string(), |d| d.to_string()),
        report.rounds,
        c.truth_lemma,
        c.frame_class,
        c.skeleton_depth,
        c.cluster_chains,
        c.total_depth,
        c.provenance
    );
    Ok(Rendered {
        code: if c.all() { EXIT_OK } else { EXIT_NEGATIVE },
        dot: Some(to_dot(report.frame(), &model_labels(&report.model))),
        json,
        text,
    })
}

fn translate(arg: &FormulaArg) -> Result<Rendered, CliError> {
    let phi = formula(arg)?;
    let t = boxplus_translate(&phi);
    Ok(Rendered {
        code: EXIT_OK,
        json: json!({ "command": "translate", "formula": phi.to_string(), "translation": t.to_string() }),
        text: t.to_string(),
        dot: None,
    })
}

fn product_cmd(paths: &[PathBuf]) -> Result<Rendered, CliError> {
    let [left, right] = paths else {
        return Err(CliError::Usage("product needs exactly two --frame arguments".into()));
    };
    let f = KripkeFrame::from_unimodal(&load(left, io::frame_from_json)?)?;
    let g = KripkeFrame::s5_from(&load(right, io::frame_from_json)?)?;
    let p = product(&f, &g)?;
    Ok(Rendered {
        code: EXIT_OK,
        text: format!("{}-world product\n{}", p.size(), frame_text(&p)),
        json: json!({ "command": "product", "frame": io::frame_json(&p) }),
        dot: Some(to_dot(&p, &[])),
    })
}

fn enumerate_cmd(id: &str, max_size: usize, labelled: bool) -> Result<Rendered, CliError> {
    let l = logic(id)?;
    let config = SearchConfig::default();
    let mut sizes = Vec::new();
    let mut text = Vec::new();
    for n in 1..=max_size {
        let frames = decision::enumerate_frames(n, &l, !labelled, &config)?;
        text.push(format!("size {n}: {} frames", frames.len()));
        sizes.push(json!({
            "size": n,
            "count": frames.len(),
            "frames": frames.iter().map(io::frame_json).collect::<Vec<_>>(),
        }));
    }
    Ok(Rendered {
        code: EXIT_OK,
        json: json!({
            "command": "enumerate",
            "logic": l.to_string(),
            "modulo_iso": !labelled,
            "sizes": sizes,
        }),
        text: text.join("\n"),
        dot: None,
    })
}

fn skeleton_cmd(path: &Path) -> Result<Rendered, CliError> {
    let f = load(path, io::frame_from_json)?;
    let s = f.e_skeleton();
    let sf = s.to_frame(&f);
    let depth = s.depth().ok();
    let well_defined = mmlogic::frame::Skeleton::well_defined(&f);
    Ok(Rendered {
        code: EXIT_OK,
        text: format!(
            "{} classes, depth {}, representative-independent: {well_defined}\n{}",
            s.classes.len(),
            depth.map_or("-".to_string(), |d| d.to_string()),
            frame_text(&sf)
        ),
        json: json!({
            "command": "skeleton",
            "classes": s.classes.iter().map(|c| names(&f, c.iter())).collect::<Vec<_>>(),
            "frame": io::frame_json(&sf),
            "depth": depth,
            "well_defined": well_defined,
        }),
        dot: Some(to_dot(&sf, &[])),
    })
}

fn verify(cli: &Cli, suite: &str, cap: usize) -> Result<Rendered, CliError> {
    if !SUITES.contains(&suite) {
        return Err(CliError::Usage(format!(
            "unknown suite `{suite}`; expected one of {}",
            SUITES.join(", ")
        )));
    }
    let report = decision::verify_theorem_suite(suite, cap, &config(cli.budget))?;
    let mut json = serde_json::to_value(&report).expect("serializable");
    json["command"] = json!("verify-theorems");
    json["summary"] = json!(report.summary());
    let mut text = report.summary();
    for c in &report.counterexamples {
        text.push_str("\n  ");
        text.push_str(c);
    }
    Ok(Rendered {
        code: if report.passed() { EXIT_OK } else { EXIT_NEGATIVE },
        json,
        text,
        dot: None,
    })
}

fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Validate {
            frame,
            model,
            formula,
            logic,
        } => validate(cli, frame, model, formula, logic),
        Command::Countermodel {
            formula,
            logic,
            max_size,
        } => countermodel(cli, formula, logic, *max_size),
        Command::Filtrate { model, formula, variant } => filtrate(cli, model, formula, variant),
        Command::Translate { formula } => translate(formula),
        Command::Product { frame } => product_cmd(frame),
        Command::Enumerate {
            logic,
            max_size,
            labelled,
        } => enumerate_cmd(logic, *max_size, *labelled),
        Command::Skeleton { frame } => skeleton_cmd(frame),
        Command::VerifyTheorems { suite, cap } => verify(cli, suite, *cap),
    }
}

fn error_output(e: &CliError, pretty: bool) -> Output {
    Output {
        code: e.exit_code(),
        stdout: if pretty {
            format!("error ({}): {e}\n", e.kind())
        } else {
            format!("{}\n", e.to_json())
        },
        stderr: String::new(),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let rendered = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => return error_output(&e, cli.pretty),
    };
    if let (Some(path), Some(dot)) = (&cli.dot, &rendered.dot) {
        if let Err(e) = std::fs::write(path, dot) {
            let e = CliError::Write {
                path: path.display().to_string(),
                message: e.to_string(),
            };
            return error_output(&e, cli.pretty);
        }
    }
    Output {
        code: rendered.code,
        stdout: if cli.pretty {
            format!("{}\n", rendered.text)
        } else {
            format!("{}\n", rendered.json)
        },
        stderr: String::new(),
    }
}

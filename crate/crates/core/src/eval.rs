//! Fuel-bounded evaluation producing a full reduction trace.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{Context, Term};
use crate::rewrite::{progress, PathTag, RewriteError, Rule, StepKind, StepResult};
use crate::syntax::{print_term_in, print_type};
use crate::typing::{infer, is_normal, is_value, TypeError};

pub const DEFAULT_FUEL: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub rule: Rule,
    pub path: Vec<PathTag>,
    pub before: Term,
    pub after: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Term,
    pub steps: Vec<TraceStep>,
    pub final_term: Term,
    pub final_is_value: bool,
}

impl Trace {
    fn start(t: &Term) -> Trace {
        Trace {
            initial: t.clone(),
            steps: Vec::new(),
            final_term: t.clone(),
            final_is_value: is_value(t),
        }
    }

    fn record(&mut self, kind: StepKind, rule: Rule, path: Vec<PathTag>, after: Term) {
        let before = std::mem::replace(&mut self.final_term, after.clone());
        self.final_is_value = is_value(&after);
        self.steps.push(TraceStep {
            kind,
            rule,
            path,
            before,
            after,
        });
    }

    pub fn kinds(&self) -> Vec<StepKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(
        "fuel exhausted after {} steps without reaching a normal form; well-typed terms are \
         strongly normalizing, so either the fuel is too small or the reducer has a bug",
        .0.steps.len()
    )]
    FuelExhausted(Box<Trace>),
    #[error("closed normal form {0} is not a value")]
    ClosedNormalNotValue(Term),
}

impl EvalError {
    pub fn code(&self) -> &'static str {
        match self {
            EvalError::Type(e) => e.code(),
            EvalError::Rewrite(e) => e.code(),
            EvalError::FuelExhausted(_) => "fuel-exhausted",
            EvalError::ClosedNormalNotValue(_) => "closed-normal-not-value",
        }
    }
}

/// Applies `progress` until the term is normal, taking at most `fuel` steps.
///
/// With `fuel == 0` the term is only classified.
pub fn evaluate(g: &Context, t: &Term, fuel: usize) -> Result<Trace, EvalError> {
    infer(g, t)?;
    let mut trace = Trace::start(t);
    loop {
        match progress(g, &trace.final_term)? {
            StepResult::Done(_) => break,
            StepResult::Step {
                kind,
                rule,
                path,
                result,
                ..
            } => {
                if trace.steps.len() == fuel {
                    return Err(EvalError::FuelExhausted(Box::new(trace)));
                }
                trace.record(kind, rule, path, result);
            }
        }
    }
    debug_assert!(is_normal(&trace.final_term));
    if g.is_empty() && !trace.final_is_value {
        return Err(EvalError::ClosedNormalNotValue(trace.final_term));
    }
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    Json,
}

/// JSON shape of a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonTrace {
    pub initial: String,
    pub steps: Vec<JsonStep>,
    #[serde(rename = "final")]
    pub final_term: String,
    pub value: bool,
    pub fuel_used: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonStep {
    pub kind: StepKind,
    pub rule: String,
    pub path: Vec<PathTag>,
    pub term: String,
    #[serde(rename = "type")]
    pub ty: String,
}

pub fn trace_to_json(g: &Context, names: &[String], tr: &Trace) -> JsonTrace {
    let show = |t: &Term| print_term_in(t, names);
    JsonTrace {
        initial: show(&tr.initial),
        steps: tr
            .steps
            .iter()
            .map(|s| JsonStep {
                kind: s.kind,
                rule: s.rule.name().to_string(),
                path: s.path.clone(),
                term: show(&s.after),
                ty: infer(g, &s.after)
                    .map(|ty| print_type(&ty))
                    .unwrap_or_else(|e| format!("<{e}>")),
            })
            .collect(),
        final_term: show(&tr.final_term),
        value: tr.final_is_value,
        fuel_used: tr.steps.len(),
    }
}

fn format_path(path: &[PathTag]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Renders a trace; free variables are named by `names` (leftmost first).
pub fn format_trace_in(g: &Context, names: &[String], tr: &Trace, mode: TraceFormat) -> String {
    match mode {
        TraceFormat::Json => serde_json::to_string_pretty(&trace_to_json(g, names, tr))
            .expect("trace serialization cannot fail"),
        TraceFormat::Text => {
            let mut out = String::new();
            for (i, s) in tr.steps.iter().enumerate() {
                out.push_str(&format!(
                    "{} {} {} @ {}  {}\n",
                    i + 1,
                    s.kind.glyph(),
                    s.rule,
                    format_path(&s.path),
                    print_term_in(&s.after, names)
                ));
            }
            out.push_str(&format!(
                "{} steps; normal form: {}",
                tr.steps.len(),
                print_term_in(&tr.final_term, names)
            ));
            out
        }
    }
}

pub fn format_trace(tr: &Trace, mode: TraceFormat) -> String {
    format_trace_in(&Context::empty(), &[], tr, mode)
}

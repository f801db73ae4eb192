//! Worked instances: triangular rings, tensor rings of pro-species, a
//! semilinear clannish example over a finite field, and rings with enough
//! idempotents. Each instance records expected and actual values.

mod clannish;
mod enough_idempotents;
mod prospecies;
mod triangular;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::context::ContextObject;
use crate::error::{Error, Result};
use crate::linalg::FieldSpec;
use crate::surgery::{certify_equivalence, EquivalenceCertificate, Refusal, SurgeryResult};

pub use clannish::{clannish_instance, ClannishFields};
pub use enough_idempotents::{enough_idempotents_instance, matrix_units_instance};
pub use prospecies::{prospecies_instance, tensor_ring_context};
pub use triangular::triangular_instance;

pub const NAMES: [&str; 4] = ["triangular", "prospecies", "clannish", "enough-idempotents"];

#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub label: String,
    pub expected: Value,
    pub actual: Value,
}

impl Expectation {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

/// One corner replacement inside an instance.
#[derive(Clone, Debug)]
pub struct Step {
    pub name: String,
    pub result: SurgeryResult,
    pub certificate: std::result::Result<EquivalenceCertificate, Refusal>,
}

impl Step {
    pub fn new(name: &str, result: SurgeryResult) -> Self {
        let certificate = certify_equivalence(&result);
        Step { name: name.into(), result, certificate }
    }

    pub fn granted(&self) -> bool {
        self.certificate.is_ok()
    }

    fn status(&self) -> &'static str {
        if self.granted() {
            "granted"
        } else {
            "refused"
        }
    }
}

#[derive(Clone, Debug)]
pub struct GalleryInstance {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    /// Named inputs, exportable as a spec file.
    pub inputs: Vec<(String, ContextObject)>,
    pub steps: Vec<Step>,
    pub expectations: Vec<Expectation>,
}

impl GalleryInstance {
    fn new(name: &str) -> Self {
        GalleryInstance {
            name: name.into(),
            params: BTreeMap::new(),
            inputs: Vec::new(),
            steps: Vec::new(),
            expectations: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.into(), json!(value));
    }

    fn input(&mut self, name: &str, object: ContextObject) {
        self.inputs.push((name.into(), object));
    }

    fn expect(&mut self, label: &str, expected: impl Serialize, actual: impl Serialize) {
        self.expectations.push(Expectation { label: label.into(), expected: json!(expected), actual: json!(actual) });
    }

    /// Adds a step and an expectation that its certificate is granted.
    fn step(&mut self, name: &str, result: SurgeryResult) -> &Step {
        let s = Step::new(name, result);
        self.expect(&format!("certificate: {name}"), "granted", s.status());
        self.steps.push(s);
        self.steps.last().unwrap()
    }

    pub fn step_named(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn expectation(&self, label: &str) -> Option<&Expectation> {
        self.expectations.iter().find(|e| e.label == label)
    }

    pub fn passes(&self) -> bool {
        self.expectations.iter().all(Expectation::matches) && self.steps.iter().all(|s| s.result.report.passes())
    }

    /// The expected-vs-actual table as aligned text.
    pub fn table(&self) -> String {
        let rows: Vec<(String, String, String, &str)> = self
            .expectations
            .iter()
            .map(|e| {
                let ok = if e.matches() { "ok" } else { "MISMATCH" };
                (e.label.clone(), e.expected.to_string(), e.actual.to_string(), ok)
            })
            .collect();
        let w0 = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0).max(5);
        let w1 = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0).max(8);
        let w2 = rows.iter().map(|r| r.2.chars().count()).max().unwrap_or(0).max(6);
        let mut out = String::new();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
        let _ = writeln!(out, "{}  {}  {}  status", pad("check", w0), pad("expected", w1), pad("actual", w2));
        for (a, b, c, d) in &rows {
            let _ = writeln!(out, "{}  {}  {}  {d}", pad(a, w0), pad(b, w1), pad(c, w2));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let expectations: Vec<Value> = self
            .expectations
            .iter()
            .map(|e| json!({ "label": e.label, "expected": e.expected, "actual": e.actual, "match": e.matches() }))
            .collect();
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                let r = &s.result;
                json!({
                    "name": s.name,
                    "t": r.t + 1,
                    "dims": { "input": r.input.dims(), "composed": r.composed.dims() },
                    "ring_dims": [r.ring.dim(), r.composed_ring.dim()],
                    "report": r.report.to_json(),
                    "certificate": match &s.certificate {
                        Ok(c) => c.to_json(),
                        Err(x) => x.to_json(),
                    },
                })
            })
            .collect();
        json!({
            "instance": self.name,
            "params": self.params,
            "pass": self.passes(),
            "expectations": expectations,
            "steps": steps,
        })
    }
}

/// Parameters accepted by `run`.
#[derive(Clone, Debug, Default)]
pub struct GalleryOptions {
    pub p: Option<u64>,
    pub k: Option<usize>,
    pub split: Option<usize>,
    pub theta: Option<u32>,
}

/// Runs a named instance with defaults `p = 5`, `k = 3`, `split = 1`, `θ = 1`.
pub fn run(name: &str, opts: &GalleryOptions) -> Result<GalleryInstance> {
    let p = opts.p.unwrap_or(5);
    match name {
        "triangular" => triangular_instance(FieldSpec::prime(p)?),
        "prospecies" => prospecies_instance(FieldSpec::prime(p)?),
        "clannish" => clannish_instance(p, opts.theta.unwrap_or(1)),
        "enough-idempotents" => matrix_units_instance(FieldSpec::prime(p)?, opts.k.unwrap_or(3), opts.split.unwrap_or(1)),
        other => Err(Error::MalformedInput(format!(
            "unknown gallery instance '{other}', expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

//! Reports and their text and JSON renderings.

use abeltrans::{GroupElement, Subgroup};
use serde::Serialize;
use serde_json::{json, Value};

/// The result of one task. Every field is always emitted, `null` when absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub task: String,
    pub verdict: Option<String>,
    pub witness: Option<Value>,
    pub certificate: Option<Value>,
    pub case_tag: Option<String>,
    /// Human-readable lines for text output.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(task: &str) -> Self {
        Report {
            task: task.to_string(),
            verdict: None,
            witness: None,
            certificate: None,
            case_tag: None,
            lines: Vec::new(),
        }
    }

    pub fn verdict(mut self, v: impl ToString) -> Self {
        self.verdict = Some(v.to_string());
        self
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn certificate(mut self, c: Value) -> Self {
        self.certificate = Some(c);
        self
    }

    pub fn case_tag(mut self, t: impl ToString) -> Self {
        self.case_tag = Some(t.to_string());
        self
    }

    pub fn line(mut self, l: impl Into<String>) -> Self {
        self.lines.push(l.into());
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("task: {}\n", self.task);
        if let Some(v) = &self.verdict {
            out += &format!("verdict: {v}\n");
        }
        if let Some(t) = &self.case_tag {
            out += &format!("case: {t}\n");
        }
        for l in &self.lines {
            out += l;
            out.push('\n');
        }
        out
    }
}

pub fn element_json(x: &GroupElement) -> Value {
    json!(x.residues())
}

pub fn elements_json(xs: &[GroupElement]) -> Value {
    Value::Array(xs.iter().map(element_json).collect())
}

pub fn subgroup_json(h: &Subgroup) -> Value {
    json!({
        "order": h.order(),
        "invariant_factors": h.invariant_factors(),
        "generators": elements_json(h.smith_generators()),
        "basis": h.basis(),
    })
}

pub fn elements_text(xs: &[GroupElement]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

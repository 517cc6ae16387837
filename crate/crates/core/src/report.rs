//! Check reports shared by every law and principle checker.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Failures beyond this many are counted but not stored.
pub const MAX_STORED_FAILURES: usize = 16;

/// A single refuted instance, with enough data to replay it offline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub message: String,
    pub inputs: Vec<Value>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub lhs: Value,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub rhs: Value,
    pub deviation: f64,
}

impl Failure {
    pub fn new(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            inputs: Vec::new(),
            lhs: Value::Null,
            rhs: Value::Null,
            deviation: 0.0,
        }
    }

    pub fn inputs(mut self, inputs: Vec<Value>) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn input(mut self, v: Value) -> Self {
        self.inputs.push(v);
        self
    }

    pub fn sides(mut self, lhs: Value, rhs: Value) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self
    }

    pub fn deviation(mut self, d: f64) -> Self {
        // JSON cannot carry infinities
        self.deviation = if d.is_finite() { d } else { f64::MAX };
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub check: String,
    /// Statement of the property under test.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub statement: String,
    pub samples: usize,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl LawReport {
    pub fn new(check: impl Into<String>) -> Self {
        LawReport {
            check: check.into(),
            statement: String::new(),
            samples: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn with_statement(mut self, s: impl Into<String>) -> Self {
        self.statement = s.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn fail(&mut self, failure: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(failure);
        }
    }

    /// Counts one sample; `witness` is only built when `ok` is false.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Failure) {
        self.samples += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }

    /// Folds another report's samples and failures into this one.
    pub fn absorb(&mut self, other: LawReport) {
        self.samples += other.samples;
        for f in other.failures {
            self.fail(f);
        }
        // failures dropped by `other`'s cap still count
        let stored = other.failure_count.min(MAX_STORED_FAILURES);
        self.failure_count += other.failure_count - stored;
        for n in other.notes {
            self.note(n);
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "[{status}] {} ({} samples, {} failures)",
            self.check, self.samples, self.failure_count
        );
        if let Some(ms) = self.elapsed_ms {
            line.push_str(&format!(" {ms} ms"));
        }
        line
    }
}

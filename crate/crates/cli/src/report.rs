use serde::Serialize;
use serde_json::Value;

use crate::error::{EXIT_NEGATIVE, EXIT_UNKNOWN};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Equivalent,
    Distinguished,
    Unknown,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::True | Verdict::Equivalent => 0,
            Verdict::False | Verdict::Distinguished => EXIT_NEGATIVE,
            Verdict::Unknown => EXIT_UNKNOWN,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// What a command produced: text for humans, details for `--json`.
#[derive(Debug)]
pub struct Outcome {
    pub verdict: Option<Verdict>,
    pub text: String,
    pub details: Value,
}

impl Outcome {
    pub fn new(text: impl Into<String>, details: Value) -> Self {
        Self {
            verdict: None,
            text: text.into(),
            details,
        }
    }

    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.verdict = Some(v);
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.map_or(0, Verdict::exit_code)
    }
}

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub schema: u32,
    pub command: &'a str,
    pub inputs: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub details: &'a Value,
    pub timing_ms: f64,
}

use std::time::Instant;

use ghmst::{Error, ErrorCategory};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub payload: Value,
    pub methods: Value,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(command: &str, input_digest: String, payload: Value, methods: Value, started: Instant) -> Self {
        Report {
            command: command.to_string(),
            input_digest,
            payload,
            methods,
            timing_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Exit status for each failure category.
pub fn exit_code(category: ErrorCategory) -> i32 {
    match category {
        ErrorCategory::InvalidMetric => 2,
        ErrorCategory::SizeLimit => 3,
        ErrorCategory::Precondition => 4,
        ErrorCategory::Io => 5,
    }
}

/// Variant name of an error, e.g. `TriangleViolation`.
fn kind(err: &Error) -> String {
    let dbg = format!("{err:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

pub fn error_record(err: &Error) -> Value {
    json!({
        "error": {
            "kind": kind(err),
            "message": err.to_string(),
            "exit_code": exit_code(err.category()),
        }
    })
}

pub fn usage_record(message: &str) -> Value {
    json!({
        "error": {
            "kind": "Usage",
            "message": message.trim_end(),
            "exit_code": exit_code(ErrorCategory::Precondition),
        }
    })
}

pub fn to_string(v: &impl Serialize, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("reports serialize")
    } else {
        serde_json::to_string(v).expect("reports serialize")
    }
}

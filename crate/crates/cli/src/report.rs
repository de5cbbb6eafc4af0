use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: u64 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs outside the supported range; exit status 2.
    Usage(String),
    /// A computation that should succeed did not; exit status 1.
    Failed(String),
}

pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub body: Value,
    pub text: String,
}

impl Report {
    pub fn new(command: &'static str, passed: bool, body: Value, text: String) -> Self {
        Report { command, passed, body, text }
    }

    /// serde_json's map is ordered, so keys come out sorted.
    pub fn json_string(&self) -> String {
        let v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "passed": self.passed,
            "result": self.body,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }
}

pub fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

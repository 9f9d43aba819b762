//! Run reports and their comparison.

use cyclochern_core::Scalar;
use serde::Serialize;
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "cyclochern/report/1";

#[derive(Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Assertion { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Serialize)]
pub struct TaskReport {
    pub id: String,
    pub kind: String,
    pub assertions: Vec<Assertion>,
    pub result: Value,
    pub timing_ms: u64,
}

impl TaskReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub settings: Value,
    pub tasks: Vec<Value>,
    pub summary: Summary,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub tasks: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(settings: Value, tasks: &[TaskReport]) -> Self {
        let passed = tasks.iter().filter(|t| t.passed()).count();
        let rows = tasks
            .iter()
            .map(|t| {
                let mut v = serde_json::to_value(t).expect("task report serializes");
                v["status"] = json!(if t.passed() { "pass" } else { "fail" });
                v
            })
            .collect();
        Report {
            schema: REPORT_SCHEMA,
            settings,
            tasks: rows,
            summary: Summary { tasks: tasks.len(), passed, failed: tasks.len() - passed },
        }
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    let (re, im) = s.parts_strings();
    json!({"re": re, "im": im})
}

/// Removes every `timing_ms` field.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// JSON-pointer paths at which two values differ.
pub fn differences(a: &Value, b: &Value) -> Vec<String> {
    let mut out = Vec::new();
    walk(a, b, String::new(), &mut out);
    out
}

fn walk(a: &Value, b: &Value, path: String, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let p = format!("{path}/{k}");
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => walk(u, v, p, out),
                    _ => out.push(p),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            for i in 0..x.len().max(y.len()) {
                let p = format!("{path}/{i}");
                match (x.get(i), y.get(i)) {
                    (Some(u), Some(v)) => walk(u, v, p, out),
                    _ => out.push(p),
                }
            }
        }
        _ if a != b => out.push(if path.is_empty() { "/".into() } else { path }),
        _ => {}
    }
}

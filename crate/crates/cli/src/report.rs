use std::fmt::Write;

use serde::Serialize;
use serde_json::{Map, Value};

/// One structured document per invocation. Everything except `duration`
/// is a deterministic function of the command line.
#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub result: Value,
    pub witnesses: Vec<Value>,
    /// Wall-clock seconds.
    pub duration: f64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            params: Map::new(),
            result: Value::Null,
            witnesses: Vec::new(),
            duration: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params.insert(key.into(), to_value(value));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        if !self.params.is_empty() {
            out.push_str("params:\n");
            render_map(&mut out, &self.params, 1);
        }
        out.push_str("result:");
        render(&mut out, &self.result, 1);
        if !self.witnesses.is_empty() {
            out.push_str("witnesses:\n");
            for w in &self.witnesses {
                out.push_str("  -");
                render(&mut out, w, 2);
            }
        }
        writeln!(out, "duration: {:.3}s", self.duration).unwrap();
        out
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_) | Value::String(_))) => {
            let parts: Vec<String> = a.iter().map(|x| scalar(x).unwrap()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn render(out: &mut String, v: &Value, depth: usize) {
    if let Some(s) = scalar(v) {
        if s.contains('\n') {
            out.push('\n');
            for line in s.lines() {
                writeln!(out, "{}{line}", "  ".repeat(depth)).unwrap();
            }
        } else {
            writeln!(out, " {s}").unwrap();
        }
        return;
    }
    out.push('\n');
    match v {
        Value::Object(m) => render_map(out, m, depth),
        Value::Array(a) => {
            for item in a {
                write!(out, "{}-", "  ".repeat(depth)).unwrap();
                render(out, item, depth + 1);
            }
        }
        _ => unreachable!(),
    }
}

fn render_map(out: &mut String, m: &Map<String, Value>, depth: usize) {
    for (k, v) in m {
        write!(out, "{}{k}:", "  ".repeat(depth)).unwrap();
        render(out, v, depth + 1);
    }
}

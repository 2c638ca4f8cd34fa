#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::Value;

pub fn ordtope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordtope"))
        .args(args)
        .env_remove("ORDTOPE_BUDGET")
        .output()
        .expect("spawn ordtope")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn schema() -> jsonschema::JSONSchema {
    let raw: Value = serde_json::from_str(include_str!("../../schema/audit-report.schema.json"))
        .expect("schema is JSON");
    jsonschema::JSONSchema::compile(&raw).expect("schema compiles")
}

/// Validation messages for every report in the array; empty when all pass.
pub fn schema_errors(schema: &jsonschema::JSONSchema, reports: &Value) -> Vec<String> {
    let Some(items) = reports.as_array() else {
        return vec!["output is not a JSON array".into()];
    };
    let mut errors = Vec::new();
    for (i, r) in items.iter().enumerate() {
        if let Err(es) = schema.validate(r) {
            errors.extend(es.map(|e| format!("[{i}]{}: {e}", e.instance_path)));
        }
    }
    errors
}

#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use epsilon_forge::syntax::{parse_critical_set, CriticalFormulaSet};

pub fn data(name: &str) -> CriticalFormulaSet {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_critical_set(&text).unwrap()
}

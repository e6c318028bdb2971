//! Browser bindings. Each exported function takes plain strings and numbers
//! and returns JSON or CSV text; errors come back as JS exceptions.

use serde_json::json;
use wasm_bindgen::prelude::*;

use coxstab::basic::check_chamber_filtration;
use coxstab::cli::parse_family;
use coxstab::complexes::build_cn;
use coxstab::homology::{chain_complex_of, homology, Coefficients};
use coxstab::stability::{main_theorem_report, verify_main_theorem, DEFAULT_BUDGET};

// keeps a click from freezing the tab
const CAP: usize = 5_000;
const NMAX: i64 = 3;

fn family(name: &str) -> Result<coxstab::diagrams::FamilySpec, String> {
    if name.starts_with("file:") {
        return Err("file families are not available in the browser".into());
    }
    parse_family(name).map_err(|e| e.to_string())
}

/// `C^n` with its f-vector and reduced integral homology.
pub fn complex_summary(name: &str, n: i32) -> Result<String, String> {
    let spec = family(name)?;
    let cn = build_cn(&spec, n as i64, CAP).map_err(|e| e.to_string())?;
    let table = homology(&chain_complex_of(&cn.complex, true), Coefficients::Integers);
    let degrees: Vec<_> = table
        .degrees
        .iter()
        .map(|d| json!({"rank": d.rank, "torsion": d.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()}))
        .collect();
    let doc = json!({
        "family": spec.name(),
        "n": n,
        "order": cn.elements.len(),
        "vertices": cn.cosets.len(),
        "f_vector": cn.complex.f_vector(),
        "reduced_homology": degrees,
    });
    Ok(doc.to_string())
}

/// One row per chamber after the first, in the order the filtration adds them.
pub fn filtration_trace(name: &str, n: i32) -> Result<String, String> {
    let spec = family(name)?;
    let (report, rows) = check_chamber_filtration(&spec, n as i64, CAP).map_err(|e| e.to_string())?;
    let rows: Vec<_> = rows
        .iter()
        .map(|r| json!({"m": r.m, "word": r.word, "in_size": r.in_size, "kind": r.kind.as_str(), "betti": r.betti}))
        .collect();
    Ok(json!({"passed": report.passed(), "rows": rows}).to_string())
}

/// Stabilization table over `F_2` as CSV, with a trailing verdict line.
pub fn stability_table(name: &str, nmax: i32) -> Result<String, String> {
    if nmax as i64 > NMAX {
        return Err(format!("nmax is limited to {NMAX} here"));
    }
    let spec = family(name)?;
    let lmax = (nmax.max(0) / 2) as usize;
    let table = verify_main_theorem(&spec, nmax as i64, lmax, 2, DEFAULT_BUDGET, CAP).map_err(|e| e.to_string())?;
    let report = main_theorem_report(&table);
    let verdict = if report.passed() { "pass" } else { "fail" };
    Ok(format!("{}# {verdict}\n", table.to_csv()))
}

#[wasm_bindgen(js_name = complexSummary)]
pub fn complex_summary_js(name: &str, n: i32) -> Result<String, JsError> {
    complex_summary(name, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = filtrationTrace)]
pub fn filtration_trace_js(name: &str, n: i32) -> Result<String, JsError> {
    filtration_trace(name, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = stabilityTable)]
pub fn stability_table_js(name: &str, nmax: i32) -> Result<String, JsError> {
    stability_table(name, nmax).map_err(|e| JsError::new(&e))
}

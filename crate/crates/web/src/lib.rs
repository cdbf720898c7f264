//! Browser bindings. Every export takes a fixture name or pasted code text
//! and returns a JSON string; errors come back as `{"error": "..."}`.

use nbldpc::cyclegraph::CheckMultigraph;
use nbldpc::design::{cancelled_counts, optimize_assignment, DesignConfig};
use nbldpc::fixtures;
use nbldpc::ontology::{mine_patterns, symbol_weight_bound, MiningOptions, PatternCatalog};
use nbldpc::LdpcCode;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn load(input: &str) -> Result<LdpcCode, String> {
    let text = fixtures::text(input.trim()).unwrap_or(input);
    LdpcCode::parse(text).map_err(|e| e.to_string())
}

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Names of the bundled example codes.
#[wasm_bindgen]
pub fn fixture_names() -> String {
    json!(fixtures::NAMES).to_string()
}

/// Text of a bundled example code, or an empty string.
#[wasm_bindgen]
pub fn fixture_text(name: &str) -> String {
    fixtures::text(name).unwrap_or("").to_string()
}

/// Girth, cycle distribution and cancelled-cycle counts.
#[wasm_bindgen]
pub fn analyze(input: &str) -> String {
    respond(analyze_inner(input))
}

fn analyze_inner(input: &str) -> Result<Value, String> {
    let code = load(input)?;
    let graph = CheckMultigraph::from_code(&code).map_err(|e| e.to_string())?;
    let girth = graph.girth().map_err(|e| e.to_string())?;
    let max = 2 * symbol_weight_bound(girth);
    let cycles = graph.enumerate_cycles(max / 2);
    let mut rows = Vec::new();
    if code.values_assigned() {
        for (len, (c, t)) in cancelled_counts(&code, &cycles).map_err(|e| e.to_string())? {
            rows.push(json!({"length": len, "total": t, "cancelled": c}));
        }
    } else {
        for (len, t) in graph.cycle_distribution(max) {
            rows.push(json!({"length": len, "total": t, "cancelled": null}));
        }
    }
    Ok(json!({
        "n": code.n(), "checks": code.rows(), "row_weight": code.row_weight(),
        "girth": girth, "cycles": rows,
    }))
}

/// Inter-connected cycle pattern counts in catalog order.
#[wasm_bindgen]
pub fn patterns(input: &str, type_one_only: bool) -> String {
    respond(patterns_inner(input, type_one_only))
}

fn patterns_inner(input: &str, type_one_only: bool) -> Result<Value, String> {
    let code = load(input)?;
    let graph = CheckMultigraph::from_code(&code).map_err(|e| e.to_string())?;
    let girth = graph.girth().map_err(|e| e.to_string())?;
    let catalog = PatternCatalog::build(girth).map_err(|e| e.to_string())?;
    let mined = mine_patterns(&graph, &catalog, MiningOptions { type_one_only })
        .map_err(|e| e.to_string())?;
    let rows: Vec<Value> = catalog
        .group_counts(&mined.instances)
        .into_iter()
        .map(|(e, n)| {
            json!({
                "label": e.label, "type": e.shape.cycle_type().to_string(),
                "columns": e.weight(), "count": n,
            })
        })
        .collect();
    Ok(json!({ "girth": girth, "rows": rows, "uncatalogued": mined.uncatalogued }))
}

/// Seeded hill climb over row value assignments.
#[wasm_bindgen]
pub fn design(input: &str, seed: u32, iterations: u32) -> String {
    respond(design_inner(input, seed as u64, iterations as usize))
}

fn design_inner(input: &str, seed: u64, iterations: usize) -> Result<Value, String> {
    let code = load(input)?;
    let config = DesignConfig {
        rng_seed: seed,
        iterations,
        ..DesignConfig::default()
    };
    let out = optimize_assignment(&code, &config).map_err(|e| e.to_string())?;
    Ok(json!({
        "tanner_lengths": out.tanner_lengths,
        "totals": out.totals,
        "trajectory": out.trajectory,
        "code": out.code.to_text(),
    }))
}

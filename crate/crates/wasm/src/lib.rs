//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain strings and numbers and returns a JSON document,
//! so the page needs no generated TypeScript types. The `*_json` functions
//! without the `wasm_bindgen` wrapper are ordinary Rust and are tested
//! natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use leaderdiv::diversity::{bin_opinions_snapped, BinSpec, DiversityScore};
use leaderdiv::verify::{self, Suite, VerifyOptions};
use leaderdiv::{place, steady_state, Graph, LeaderConfig, PlaceRequest, Topology};

/// Largest sweep the page may request; keeps the tab responsive.
pub const MAX_VERIFY_BOUND: usize = 14;

/// A generator spec such as `cycle:8`, or edge-list text.
fn load_graph(source: &str) -> Result<(Graph, Option<Topology>), String> {
    let trimmed = source.trim();
    if !trimmed.contains('\n') && trimmed.contains(':') {
        let t: Topology = trimmed.parse().map_err(|e| format!("{e}"))?;
        let g = t.generate().map_err(|e| e.to_string())?;
        return Ok((g, Some(t)));
    }
    Graph::from_edge_list(source)
        .map(|g| (g, None))
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct OpinionRow {
    node: usize,
    opinion: f64,
}

#[derive(Serialize)]
struct Snapshot {
    n: usize,
    edges: Vec<(usize, usize)>,
    l0: usize,
    l1: usize,
    opinions: Vec<OpinionRow>,
    histogram: leaderdiv::BinHistogram,
    simpson: Option<f64>,
    shannon: Option<f64>,
}

/// Steady-state opinions, bin histogram and both indices for one leader pair.
pub fn opinions_json(source: &str, l0: usize, l1: usize, bins: &str, snap_tol: f64) -> Result<String, String> {
    let (g, _) = load_graph(source)?;
    let spec: BinSpec = bins.parse().map_err(|e| format!("{e}"))?;
    let lc = LeaderConfig::pair(&g, l0, l1).map_err(|e| e.to_string())?;
    let x = steady_state(&g, &lc).map_err(|e| e.to_string())?;
    let hist = bin_opinions_snapped(&x, spec.resolve(x.len()), snap_tol).map_err(|e| e.to_string())?;
    let score = DiversityScore::of(&hist).ok();
    let snapshot = Snapshot {
        n: g.n(),
        edges: g.edges().to_vec(),
        l0,
        l1,
        opinions: x.iter().map(|(node, opinion)| OpinionRow { node, opinion }).collect(),
        histogram: hist,
        simpson: score.map(|s| s.simpson),
        shannon: score.map(|s| s.shannon),
    };
    serde_json::to_string(&snapshot).map_err(|e| e.to_string())
}

/// Score table, argmax sets, bounds and predictor verdict for every 1-leader.
pub fn placement_json(source: &str, l0: usize, bins: &str, snap_tol: f64) -> Result<String, String> {
    let (g, topology) = load_graph(source)?;
    let spec: BinSpec = bins.parse().map_err(|e| format!("{e}"))?;
    let mut req = PlaceRequest::new(l0, spec);
    req.snap_tol = snap_tol;
    let report = place(&g, topology, &req).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// One sweep of the verification harness, capped at [`MAX_VERIFY_BOUND`].
pub fn verify_json(suite: &str, bound: usize, trees: usize) -> Result<String, String> {
    let suite: Suite = suite.parse().map_err(|e| format!("{e}"))?;
    if bound > MAX_VERIFY_BOUND {
        return Err(format!("bound {bound} is above the demo limit {MAX_VERIFY_BOUND}"));
    }
    let mut options = VerifyOptions::new(bound);
    options.trees = trees.min(200);
    let report = verify::run(suite, options).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn opinions(source: &str, l0: usize, l1: usize, bins: &str, snap_tol: f64) -> Result<String, JsError> {
    opinions_json(source, l0, l1, bins, snap_tol).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn placement(source: &str, l0: usize, bins: &str, snap_tol: f64) -> Result<String, JsError> {
    placement_json(source, l0, bins, snap_tol).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify_suite(suite: &str, bound: usize, trees: usize) -> Result<String, JsError> {
    verify_json(suite, bound, trees).map_err(|e| JsError::new(&e))
}

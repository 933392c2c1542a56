use leaderdiv_wasm::{opinions_json, placement_json, verify_json, MAX_VERIFY_BOUND};
use serde_json::Value;

const TREE: &str = "n 11\n1 2\n2 3\n3 4\n4 5\n5 6\n2 7\n7 8\n7 9\n7 10\n10 11\n";

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn opinions_on_a_generated_path() {
    let doc = parse(&opinions_json("path:5", 1, 5, "nf", 1e-9).unwrap());
    let values: Vec<f64> = doc["opinions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["opinion"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    for (got, want) in values.iter().zip([0.25, 0.5, 0.75]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert_eq!(doc["histogram"]["counts"], serde_json::json!([1, 1, 1]));
    assert_eq!(doc["simpson"].as_f64(), Some(1.0));
    assert_eq!(doc["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn placement_on_edge_list_text() {
    let doc = parse(&placement_json(TREE, 1, "nf", 1e-9).unwrap());
    assert_eq!(doc["result"]["argmax_simpson"], serde_json::json!([10, 11]));
    assert_eq!(doc["result"]["argmax_shannon"], serde_json::json!([5, 6]));
    assert_eq!(doc["result"]["scores"].as_array().unwrap().len(), 10);
}

#[test]
fn placement_reports_predictor_for_generated_cycle() {
    let doc = parse(&placement_json("cycle:7", 1, "nf", 1e-9).unwrap());
    assert_eq!(doc["shape"], "cycle");
    assert_eq!(doc["predictor"]["predicted"], serde_json::json!([2, 7]));
    assert_eq!(doc["predictor"]["agrees_simpson"], true);
}

#[test]
fn verify_passes_and_caps_bound() {
    let doc = parse(&verify_json("cycles", 10, 0).unwrap());
    assert_eq!(doc["counterexamples"].as_array().unwrap().len(), 0);
    assert!(verify_json("cycles", MAX_VERIFY_BOUND + 1, 0).is_err());
}

#[test]
fn errors_are_messages() {
    assert!(opinions_json("star:4", 1, 2, "nf", 1e-9).unwrap_err().contains("star"));
    assert!(opinions_json("path:5", 1, 1, "nf", 1e-9).is_err());
    assert!(placement_json("n 3\n1 2\n", 1, "2", 1e-9).is_err());
    assert!(placement_json("path:6", 1, "lots", 1e-9).is_err());
    assert!(verify_json("stars", 5, 0).is_err());
}

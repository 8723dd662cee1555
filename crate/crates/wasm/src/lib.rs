//! Browser bindings. Every export takes and returns JSON strings; the plain
//! `*_json` functions hold the logic so they can be tested natively.

use hyperchip::counting;
use hyperchip::parking::{self, DEFAULT_GUARD};
use hyperchip::trees::{self, TreeOrder};
use hyperchip::{Configuration, Hypergraph, NodeKind, VertexSet};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn load(text: &str) -> Result<Hypergraph, String> {
    Hypergraph::from_json(text).map_err(|e| e.to_string())
}

fn config(h: &Hypergraph, text: &str) -> Result<Configuration, String> {
    let c = Configuration::parse_list(text).map_err(|e| e.to_string())?;
    h.check_config(&c).map_err(|e| e.to_string())?;
    Ok(c)
}

fn rows(list: &[Configuration]) -> Value {
    list.iter().map(|c| json!(c.0)).collect()
}

/// Parking functions, maximal ones, and the site labels.
pub fn enumerate_json(hypergraph: &str) -> Result<String, String> {
    let h = load(hypergraph)?;
    let all = parking::enumerate_parking(&h, DEFAULT_GUARD).map_err(|e| e.to_string())?;
    let max = parking::maximal_parking(&h, DEFAULT_GUARD).map_err(|e| e.to_string())?;
    let sites: Vec<&str> = (0..h.n()).map(|s| h.site_label(s)).collect();
    Ok(json!({ "sites": sites, "parking": rows(&all), "maximal": rows(&max), "count": all.len() }).to_string())
}

/// Parking test with the largest bounded set as witness.
pub fn check_json(hypergraph: &str, chips: &str) -> Result<String, String> {
    let h = load(hypergraph)?;
    let c = config(&h, chips)?;
    let parking = parking::is_parking_burn(&h, &c);
    let largest = parking::bounded_sets(&h, &c)
        .into_iter()
        .fold(VertexSet::EMPTY, |acc, t| VertexSet::from_bits(acc.bits() | t.bits()));
    let bounded: Vec<&str> = largest.sites().map(|s| h.site_label(s)).collect();
    Ok(json!({ "parking": parking, "bounded_set": bounded }).to_string())
}

/// The spanning tree of a parking function as drawable nodes: name, kind,
/// height and parent index.
pub fn tree_json(hypergraph: &str, chips: &str, beta: &str) -> Result<String, String> {
    let h = load(hypergraph)?;
    let c = config(&h, chips)?;
    if !parking::is_parking_burn(&h, &c) {
        return Err(format!("{c} is not a parking function"));
    }
    let b = h.bipartite_incidence();
    let order = if beta.trim().is_empty() {
        TreeOrder::standard(&h, &b)
    } else {
        TreeOrder::parse(&h, &b, beta).map_err(|e| e.to_string())?
    };
    let (tree, class) = trees::parking_to_tree(&h, &c, &order).map_err(|e| e.to_string())?;
    let nodes: Vec<Value> = (0..b.node_count())
        .map(|x| {
            let kind = match b.kind(x) {
                NodeKind::Edge(_) => "edge",
                NodeKind::Vertex(_) => "vertex",
            };
            json!({ "name": b.node_name(&h, x), "kind": kind, "height": tree.height(x), "parent": tree.parent(x) })
        })
        .collect();
    let class: Value = serde_json::from_str(&class.to_json(&h)).map_err(|e| e.to_string())?;
    let hypertree = trees::hypertree_of(&b, &tree).0;
    Ok(json!({ "nodes": nodes, "root": b.root(), "class": class["lr"], "hypertree": hypertree }).to_string())
}

/// Houses and Steck count for the complete `d`-uniform hypergraph on `n + 1`
/// vertices.
pub fn complete_count_json(n: usize, d: usize) -> Result<String, String> {
    let u = counting::u_vector_complete(n, d).map_err(|e| e.to_string())?;
    let fact = |k: usize| (1..=k).map(|i| i as u128).product::<u128>();
    let maximal = fact(n) / fact(d - 1);
    Ok(json!({ "u": u.as_slice(), "count": counting::steck_count(&u).to_string(), "maximal": maximal.to_string() }).to_string())
}

#[wasm_bindgen]
pub fn enumerate(hypergraph: &str) -> Result<String, JsValue> {
    enumerate_json(hypergraph).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check(hypergraph: &str, chips: &str) -> Result<String, JsValue> {
    check_json(hypergraph, chips).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn tree(hypergraph: &str, chips: &str, beta: &str) -> Result<String, JsValue> {
    tree_json(hypergraph, chips, beta).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn complete_count(n: usize, d: usize) -> Result<String, JsValue> {
    complete_count_json(n, d).map_err(|e| JsValue::from_str(&e))
}

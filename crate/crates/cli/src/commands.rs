use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hyperchip::counting::{self, UVector};
use hyperchip::digraph::{self, Digraph};
use hyperchip::firing::{self, ChipVector, FiringChoice, SetFiringChoice};
use hyperchip::ideal;
use hyperchip::parking::{self, DEFAULT_GUARD};
use hyperchip::trees::{self, BTree, TreeClass, TreeOrder, DEFAULT_TREE_GUARD};
use hyperchip::{BipartiteIncidence, Configuration, Error, Hypergraph, VertexSet};
use serde_json::{json, Value};

use crate::{Cli, Command};

/// Why a command stopped: bad arguments (exit 2) or a domain error (exit 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load(path: &Path) -> Result<Hypergraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    Ok(Hypergraph::from_json(&text)?)
}

fn parse_config(text: &str) -> Result<Configuration, Failure> {
    Configuration::parse_list(text)
        .map_err(|_| usage(format!("--config: expected comma-separated nonnegative integers, got {text:?}")))
}

fn tree_order(h: &Hypergraph, b: &BipartiteIncidence, beta: Option<&str>) -> Result<TreeOrder, Failure> {
    Ok(match beta {
        Some(text) => TreeOrder::parse(h, b, text)?,
        None => TreeOrder::standard(h, b),
    })
}

/// `key=value` pairs separated by commas.
fn key_values(flag: &str, text: &str) -> Result<BTreeMap<String, String>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            pair.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| usage(format!("{flag}: expected key=value, got {pair:?}")))
        })
        .collect()
}

fn numeric(flag: &str, map: &BTreeMap<String, String>, key: &str) -> Result<usize, Failure> {
    map.get(key)
        .ok_or_else(|| usage(format!("{flag}: missing {key}=")))?
        .parse()
        .map_err(|_| usage(format!("{flag}: {key} must be a nonnegative integer")))
}

fn line(out: &mut String, value: &Value) {
    let _ = writeln!(out, "{value}");
}

fn config_lines(list: &[Configuration]) -> String {
    list.iter().map(|c| c.to_json() + "\n").collect()
}

fn class_value(h: &Hypergraph, class: &TreeClass) -> Value {
    serde_json::from_str::<Value>(&class.to_json(h)).expect("class JSON parses")["lr"].clone()
}

fn tree_value(h: &Hypergraph, b: &BipartiteIncidence, t: &BTree) -> Value {
    t.edges()
        .iter()
        .map(|&(x, p)| json!([b.node_name(h, x), b.node_name(h, p)]))
        .collect()
}

fn matrix_value(rows: &[Vec<i64>]) -> Value {
    rows.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>()).collect()
}

fn labels_of(h: &Hypergraph, set: VertexSet) -> Vec<String> {
    set.sites().map(|s| h.site_label(s).to_string()).collect()
}

pub fn execute(cli: &Cli) -> Outcome {
    let guard = cli.max_size.unwrap_or(DEFAULT_GUARD);
    match &cli.command {
        Command::Validate(input) => validate(cli, &load(&input.file)?),
        Command::Check { input, config } => check(cli, &load(&input.file)?, config),
        Command::Enumerate(input) => Ok(config_lines(&parking::enumerate_parking(&load(&input.file)?, guard)?)),
        Command::Maximal(input) => Ok(config_lines(&parking::maximal_parking(&load(&input.file)?, guard)?)),
        Command::Orientations(input) => orientations(&load(&input.file)?, guard),
        Command::Trees { input, beta } => {
            let nodes = cli.max_size.map_or(DEFAULT_TREE_GUARD, |n| n.min(usize::MAX as u64) as usize);
            tree_listing(cli, &load(&input.file)?, beta.as_deref(), nodes)
        }
        Command::Bijection { input, beta, config, class } => {
            let h = load(&input.file)?;
            match (config, class) {
                (Some(c), _) => bijection_forward(cli, &h, beta.as_deref(), c),
                (None, Some(text)) => bijection_backward(cli, &h, beta.as_deref(), text),
                (None, None) => audit(cli, &h, beta.as_deref(), guard),
            }
        }
        Command::Fire { input, config, vertex, choice, set, script } => {
            let h = load(&input.file)?;
            let c = parse_config(config)?;
            h.check_config(&c)?;
            match (vertex, set, script) {
                (Some(v), _, _) => fire_vertex(cli, &h, &c, v, choice.as_deref().unwrap_or_default()),
                (None, Some(s), _) => fire_set(cli, &h, &c, s, guard),
                (None, None, Some(path)) => fire_script(&h, &c, path),
                (None, None, None) => Err(usage("fire needs one of --vertex, --set or --script")),
            }
        }
        Command::Cyclings { input, order } => {
            let h = load(&input.file)?;
            match order {
                Some(o) => one_cycling(cli, &h, o, guard),
                None => all_cyclings(cli, &h, guard),
            }
        }
        Command::Star(input) => star(cli, &load(&input.file)?, guard),
        Command::Count { u, complete, bipartite } => count(cli, u.as_deref(), complete.as_deref(), bipartite.as_deref()),
        Command::Ideal { input, all } => ideal_listing(cli, &load(&input.file)?, *all, guard),
    }
}

fn validate(cli: &Cli, h: &Hypergraph) -> Outcome {
    if cli.json {
        return Ok(h.to_json() + "\n");
    }
    Ok(format!(
        "valid hypergraph: {} vertices, {} edges, sink {}\n",
        h.vertex_count(),
        h.edge_count(),
        h.label(h.sink())
    ))
}

fn check(cli: &Cli, h: &Hypergraph, config: &str) -> Outcome {
    let c = parse_config(config)?;
    h.check_config(&c)?;
    let parking = parking::is_parking_burn(h, &c);
    // bounded sets are closed under union, so the union is the largest one
    let largest = parking::bounded_sets(h, &c)
        .into_iter()
        .fold(VertexSet::EMPTY, |acc, t| VertexSet::from_bits(acc.bits() | t.bits()));
    if cli.json {
        let bounded = if parking { Value::Null } else { json!(labels_of(h, largest)) };
        return Ok(json!({ "config": c.0, "parking": parking, "bounded_set": bounded }).to_string() + "\n");
    }
    Ok(if parking {
        "parking function\n".to_string()
    } else {
        format!("not a parking function; bounded set {}\n", h.format_set(largest))
    })
}

fn orientations(h: &Hypergraph, guard: u64) -> Outcome {
    let mut out = String::new();
    for o in parking::enumerate_acyclic_orientations(h, guard)? {
        let sources: BTreeMap<String, &str> = o.0.iter().enumerate().map(|(e, &v)| (format!("e{}", e + 1), h.label(v))).collect();
        let c = parking::orientation_to_config(h, &o)?;
        line(&mut out, &json!({ "sources": sources, "config": c.0 }));
    }
    Ok(out)
}

fn tree_listing(cli: &Cli, h: &Hypergraph, beta: Option<&str>, nodes: usize) -> Outcome {
    let b = h.bipartite_incidence();
    let order = tree_order(h, &b, beta)?;
    let mut out = String::new();
    for class in trees::tree_classes(h, nodes)? {
        let canonical = trees::canonical_tree(h, &class, &order)?;
        if cli.dot {
            let _ = writeln!(out, "// class {}", class.to_json(h));
            out.push_str(&canonical.to_dot(h, &b));
            continue;
        }
        let back = trees::tree_to_parking(h, &canonical, &order);
        let value = json!({
            "class": class_value(h, &class),
            "hypertree": trees::hypertree_of(&b, &canonical).0,
            "config": back.vertices.0,
        });
        line(&mut out, &value);
    }
    Ok(out)
}

fn describe_tree(cli: &Cli, h: &Hypergraph, b: &BipartiteIncidence, config: &Configuration, class: &TreeClass, t: &BTree) -> String {
    if cli.dot {
        return t.to_dot(h, b);
    }
    let hypertree = trees::hypertree_of(b, t).0;
    if cli.json {
        let value = json!({
            "config": config.0,
            "class": class_value(h, class),
            "tree": tree_value(h, b, t),
            "hypertree": hypertree,
        });
        return value.to_string() + "\n";
    }
    let arcs: Vec<String> = t.edges().iter().map(|&(x, p)| format!("{}->{}", b.node_name(h, x), b.node_name(h, p))).collect();
    format!(
        "config {config}\nclass {}\ntree {}\nhypertree {hypertree:?}\n",
        class.to_json(h),
        arcs.join(" ")
    )
}

fn bijection_forward(cli: &Cli, h: &Hypergraph, beta: Option<&str>, config: &str) -> Outcome {
    let b = h.bipartite_incidence();
    let order = tree_order(h, &b, beta)?;
    let c = parse_config(config)?;
    h.check_config(&c)?;
    if !parking::is_parking_burn(h, &c) {
        return Err(Error::NotParking.into());
    }
    let (tree, class) = trees::parking_to_tree(h, &c, &order)?;
    Ok(describe_tree(cli, h, &b, &c, &class, &tree))
}

fn bijection_backward(cli: &Cli, h: &Hypergraph, beta: Option<&str>, text: &str) -> Outcome {
    let b = h.bipartite_incidence();
    let order = tree_order(h, &b, beta)?;
    let class = TreeClass::from_json(h, text)?;
    let tree = trees::canonical_tree(h, &class, &order)?;
    let back = trees::tree_to_parking(h, &tree, &order);
    Ok(describe_tree(cli, h, &b, &back.vertices, &class, &tree))
}

fn audit(cli: &Cli, h: &Hypergraph, beta: Option<&str>, guard: u64) -> Outcome {
    let b = h.bipartite_incidence();
    let order = tree_order(h, &b, beta)?;
    let (rows, distinct) = trees::audit_bijection(h, &order, guard)?;
    let passed = rows.iter().filter(|r| r.passed()).count();
    let mut out = String::new();
    for r in &rows {
        if cli.json {
            let value = json!({
                "config": r.config.0,
                "class": class_value(h, &r.class),
                "round_trip": r.round_trip,
                "grown_is_canonical": r.grown_is_canonical,
            });
            line(&mut out, &value);
        } else {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {} {}", r.config, r.class.to_json(h));
        }
    }
    if cli.json {
        line(&mut out, &json!({ "passed": passed, "total": rows.len(), "distinct": distinct }));
    } else {
        let distinct = if distinct { "classes distinct" } else { "classes repeat" };
        let _ = writeln!(out, "{passed}/{} round trips; {distinct}", rows.len());
    }
    if passed != rows.len() || !distinct {
        return Err(Failure::Domain(format!("bijection audit failed\n{out}")));
    }
    Ok(out)
}

fn chips_output(cli: &Cli, v: &ChipVector) -> String {
    if cli.json {
        json!({ "result": v.0 }).to_string() + "\n"
    } else {
        format!("{v}\n")
    }
}

fn fire_vertex(cli: &Cli, h: &Hypergraph, c: &Configuration, vertex: &str, choice: &str) -> Outcome {
    let targets = key_values("--choice", choice)?;
    let choice = FiringChoice::from_labels(h, vertex, &targets)?;
    Ok(chips_output(cli, &firing::fire_vertex(h, &ChipVector::from(c), &choice)?))
}

fn format_choice(h: &Hypergraph, choice: &SetFiringChoice) -> String {
    let parts: Vec<String> = choice
        .choices
        .values()
        .map(|f| {
            let targets: Vec<String> = f.targets().iter().map(|(&e, &w)| format!("e{}={}", e + 1, h.label(w))).collect();
            format!("{}: {}", h.label(f.vertex()), targets.join(","))
        })
        .collect();
    parts.join("; ")
}

fn fire_set(cli: &Cli, h: &Hypergraph, c: &Configuration, set: &str, guard: u64) -> Outcome {
    let t = h.parse_set(set)?;
    if t.is_empty() {
        return Err(usage("--set must name at least one non-sink vertex"));
    }
    if firing::ready_to_fire(h, c, t) {
        return Ok(if cli.json {
            json!({ "set": labels_of(h, t), "ready": true }).to_string() + "\n"
        } else {
            format!("{} is ready to fire\n", h.format_set(t))
        });
    }
    let (choice, result) = firing::find_negative_firing(h, c, t, guard)?
        .ok_or_else(|| Failure::Domain("no negative firing found for an unready set".into()))?;
    Ok(if cli.json {
        json!({ "set": labels_of(h, t), "ready": false, "choice": format_choice(h, &choice), "result": result.0 }).to_string() + "\n"
    } else {
        format!("{} is not ready to fire: choice {} gives {result}\n", h.format_set(t), format_choice(h, &choice))
    })
}

fn fire_script(h: &Hypergraph, c: &Configuration, path: &Path) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let steps = firing::parse_script(&text)?;
    let trail = firing::run_script(h, c, &steps)?;
    Ok(trail.iter().map(|v| serde_json::to_string(&v.0).expect("chips serialize") + "\n").collect())
}

fn digraph_report(cli: &Cli, d: &Digraph, extra: &[(&str, Value)]) -> String {
    if cli.dot {
        return d.to_dot();
    }
    let l = d.reduced_laplacian();
    if cli.json {
        let mut map = serde_json::Map::new();
        map.insert("labels".into(), json!(l.labels));
        map.insert("laplacian".into(), matrix_value(&l.rows));
        for (k, v) in extra {
            map.insert((*k).to_string(), v.clone());
        }
        return Value::Object(map).to_string() + "\n";
    }
    let mut out = String::new();
    let _ = writeln!(out, "reduced laplacian over {}", l.labels.join(" "));
    for row in &l.rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        let _ = writeln!(out, "  [{}]", cells.join(""));
    }
    for (k, v) in extra {
        let shown = match v {
            Value::String(s) => s.clone(),
            Value::Array(items) if items.iter().all(Value::is_array) => {
                items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            }
            other => other.to_string(),
        };
        let _ = writeln!(out, "{k}: {shown}");
    }
    out
}

fn one_cycling(cli: &Cli, h: &Hypergraph, order: &str, guard: u64) -> Outcome {
    let order = digraph::parse_vertex_order(h, order)?;
    let cycling = digraph::cycling_from_order(h, &order)?;
    let d = digraph::digraph_from_cycling(h, &cycling);
    let parking = d.parking_functions(guard)?;
    let all = parking::enumerate_parking(h, guard)?;
    let subset = parking.iter().all(|c| all.contains(c));
    Ok(digraph_report(
        cli,
        &d,
        &[
            ("cycling", json!(cycling.format(h))),
            ("eulerian", json!(d.is_eulerian())),
            ("parking", json!(parking.iter().map(|c| &c.0).collect::<Vec<_>>())),
            ("count", json!(parking.len())),
            ("subset_of_hypergraph_parking", json!(subset)),
        ],
    ))
}

fn all_cyclings(cli: &Cli, h: &Hypergraph, guard: u64) -> Outcome {
    let u = digraph::union_over_cyclings(h, guard)?;
    let cover = digraph::greedy_cycling_cover(&u);
    let suffices = u.sink_first_union == u.union;
    let mut out = String::new();
    if cli.dot {
        for (c, _) in &u.per_cycling {
            let _ = writeln!(out, "// cycling {}", c.format(h));
            out.push_str(&digraph::digraph_from_cycling(h, c).to_dot());
        }
        return Ok(out);
    }
    for (c, set) in &u.per_cycling {
        if cli.json {
            line(&mut out, &json!({ "cycling": c.format(h), "parking": set.iter().map(|x| &x.0).collect::<Vec<_>>() }));
        } else {
            let shown: Vec<String> = set.iter().map(Configuration::to_string).collect();
            let _ = writeln!(out, "{} [{}] {}", c.format(h), set.len(), shown.join(" "));
        }
    }
    let cover: Vec<String> = cover.iter().map(|c| c.format(h)).collect();
    if cli.json {
        let value = json!({
            "union": u.union.iter().map(|x| &x.0).collect::<Vec<_>>(),
            "cyclings": u.per_cycling.len(),
            "sink_first_suffices": suffices,
            "greedy_cover": cover,
        });
        line(&mut out, &value);
    } else {
        let shown: Vec<String> = u.union.iter().map(Configuration::to_string).collect();
        let _ = writeln!(out, "union [{}] {}", u.union.len(), shown.join(" "));
        let _ = writeln!(out, "sink-first orders suffice: {}", if suffices { "yes" } else { "no" });
        let _ = writeln!(out, "greedy cover ({}): {}", cover.len(), cover.join(" "));
    }
    Ok(out)
}

fn star(cli: &Cli, h: &Hypergraph, guard: u64) -> Outcome {
    let d = digraph::star_digraph(h)?;
    let det = digraph::laplacian_determinant(&d.reduced_laplacian());
    let parking = parking::enumerate_parking(h, guard)?.len();
    let product: u64 = h.site_degrees().iter().map(|&x| u64::from(x)).product();
    Ok(digraph_report(
        cli,
        &d,
        &[
            ("determinant", json!(det.to_string())),
            ("parking_functions", json!(parking)),
            ("degree_product", json!(product)),
        ],
    ))
}

fn count(cli: &Cli, u: Option<&str>, complete: Option<&str>, bipartite: Option<&str>) -> Outcome {
    let (label, value) = match (u, complete, bipartite) {
        (Some(text), _, _) => {
            let u = UVector::parse(text).map_err(|e| usage(format!("--u: {e}")))?;
            (json!({ "u": u.as_slice() }), counting::steck_count(&u))
        }
        (None, Some(text), _) => {
            let kv = key_values("--complete", text)?;
            let (n, d) = (numeric("--complete", &kv, "n")?, numeric("--complete", &kv, "d")?);
            let u = counting::u_vector_complete(n, d)?;
            (json!({ "n": n, "d": d, "u": u.as_slice() }), counting::steck_count(&u))
        }
        (None, None, Some(text)) => {
            let kv = key_values("--bipartite", text)?;
            let (m, n) = (numeric("--bipartite", &kv, "m")?, numeric("--bipartite", &kv, "n")?);
            (json!({ "m": m, "n": n }), counting::acyclic_count_complete_bipartite(m, n)?)
        }
        (None, None, None) => return Err(usage("count needs one of --u, --complete or --bipartite")),
    };
    if cli.json {
        let mut v = label;
        v["count"] = json!(value.to_string());
        return Ok(v.to_string() + "\n");
    }
    Ok(format!("{value}\n"))
}

fn ideal_listing(cli: &Cli, h: &Hypergraph, all: bool, guard: u64) -> Outcome {
    let gens = ideal::cut_ideal_generators(h, guard)?;
    let mut out = String::new();
    if all {
        for (t, m) in &gens {
            if cli.json {
                line(&mut out, &json!({ "set": labels_of(h, *t), "monomial": m.to_string(), "exponents": m.0 }));
            } else {
                let _ = writeln!(out, "{} {m}", h.format_set(*t));
            }
        }
        return Ok(out);
    }
    let monomials: Vec<_> = gens.into_iter().map(|(_, m)| m).collect();
    for m in ideal::minimal_generators(&monomials) {
        if cli.json {
            line(&mut out, &json!({ "monomial": m.to_string(), "exponents": m.0 }));
        } else {
            let _ = writeln!(out, "{m}");
        }
    }
    Ok(out)
}

//! Spanning trees of the incidence graph, burning-equivalence classes, and
//! the breadth-first bijection between classes and parking functions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{BipartiteIncidence, Configuration, Hypergraph, NodeKind};
use crate::parking::{self, lift_to_incidence};

/// Default node ceiling for exhaustive spanning-tree enumeration.
pub const DEFAULT_TREE_GUARD: usize = 14;

/// A total order on the nodes of the incidence graph, used to break height
/// ties in the breadth-first tree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOrder {
    rank: Vec<usize>,
}

impl TreeOrder {
    /// Sink first, then the other vertices in input order, then the edges in
    /// input order.
    pub fn standard(h: &Hypergraph, b: &BipartiteIncidence) -> Self {
        let mut seq = vec![b.root()];
        seq.extend(h.sites().iter().map(|&v| b.vertex_node(v)));
        seq.extend((0..h.edge_count()).map(|e| b.edge_node(e)));
        Self::from_sequence(b, &seq).expect("standard order is a permutation")
    }

    /// Order given as nodes from smallest to largest.
    pub fn from_sequence(b: &BipartiteIncidence, seq: &[usize]) -> Result<Self> {
        let n = b.node_count();
        if seq.len() != n {
            return Err(Error::InvalidOrder(format!("{} nodes given, {} expected", seq.len(), n)));
        }
        let mut rank = vec![usize::MAX; n];
        for (r, &node) in seq.iter().enumerate() {
            if node >= n || rank[node] != usize::MAX {
                return Err(Error::InvalidOrder(format!("node {node} repeated or out of range")));
            }
            rank[node] = r;
        }
        Ok(TreeOrder { rank })
    }

    /// Parses names such as `4,3,2,1,e3,e2,e1`: vertex labels, or `eK` for
    /// the K-th edge (1-based).
    pub fn parse(h: &Hypergraph, b: &BipartiteIncidence, text: &str) -> Result<Self> {
        let seq = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| parse_node(h, b, name))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sequence(b, &seq)
    }

    pub fn rank(&self, node: usize) -> usize {
        self.rank[node]
    }
}

pub fn parse_node(h: &Hypergraph, b: &BipartiteIncidence, name: &str) -> Result<usize> {
    if let Ok(v) = h.vertex_index(name) {
        return Ok(b.vertex_node(v));
    }
    name.strip_prefix('e')
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|&k| k >= 1 && k <= h.edge_count())
        .map(|k| b.edge_node(k - 1))
        .ok_or_else(|| Error::UnknownLabel(name.to_string()))
}

/// A spanning tree of the incidence graph, stored as parent pointers toward
/// the sink.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BTree {
    root: usize,
    parent: Vec<Option<usize>>,
    height: Vec<usize>,
}

impl BTree {
    pub fn from_parents(b: &BipartiteIncidence, parent: Vec<Option<usize>>) -> Result<Self> {
        let n = b.node_count();
        if parent.len() != n {
            return Err(Error::InvalidTree(format!("{} parents for {} nodes", parent.len(), n)));
        }
        if parent[b.root()].is_some() {
            return Err(Error::InvalidTree("the sink has a parent".into()));
        }
        let mut children = vec![Vec::new(); n];
        for (x, p) in parent.iter().enumerate() {
            match p {
                Some(p) if b.neighbors(x).binary_search(p).is_ok() => children[*p].push(x),
                Some(p) => return Err(Error::InvalidTree(format!("{x}-{p} is not an incidence"))),
                None if x != b.root() => return Err(Error::InvalidTree(format!("node {x} has no parent"))),
                None => {}
            }
        }
        let mut height = vec![usize::MAX; n];
        height[b.root()] = 0;
        let mut queue = VecDeque::from([b.root()]);
        while let Some(x) = queue.pop_front() {
            for &c in &children[x] {
                height[c] = height[x] + 1;
                queue.push_back(c);
            }
        }
        if height.contains(&usize::MAX) {
            return Err(Error::InvalidTree("parent pointers contain a cycle".into()));
        }
        Ok(BTree { root: b.root(), parent, height })
    }

    /// Builds the tree from an undirected edge list.
    pub fn from_edges(b: &BipartiteIncidence, edges: &[(usize, usize)]) -> Result<Self> {
        let n = b.node_count();
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!("{} edges for {} nodes", edges.len(), n)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(x, y) in edges {
            adj[x].push(y);
            adj[y].push(x);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[b.root()] = true;
        let mut queue = VecDeque::from([b.root()]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !std::mem::replace(&mut seen[y], true) {
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::InvalidTree("edges do not span".into()));
        }
        Self::from_parents(b, parent)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn height(&self, node: usize) -> usize {
        self.height[node]
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Tree edges as `(child, parent)`, ordered by child.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(x, p)| p.map(|p| (x, p)))
            .collect()
    }

    pub fn degree(&self, node: usize) -> usize {
        let up = usize::from(self.parent[node].is_some());
        up + self.parent.iter().filter(|p| **p == Some(node)).count()
    }

    /// Nodes grouped by height, each group in node order.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let top = self.height.iter().copied().max().unwrap_or(0);
        let mut levels = vec![Vec::new(); top + 1];
        for (x, &h) in self.height.iter().enumerate() {
            levels[h].push(x);
        }
        levels
    }

    pub fn to_dot(&self, h: &Hypergraph, b: &BipartiteIncidence) -> String {
        let mut out = String::from("digraph tree {\n");
        for x in 0..self.node_count() {
            let shape = if b.is_edge_node(x) { "box" } else { "circle" };
            let _ = writeln!(out, "  n{x} [label=\"{}\", shape={shape}];", b.node_name(h, x));
        }
        for (x, p) in self.edges() {
            let _ = writeln!(out, "  n{x} -> n{p};");
        }
        out.push_str("}\n");
        out
    }
}

/// The vertex-to-edge arcs of a tree oriented toward the sink, as
/// `(vertex index, edge index)` pairs sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeClass {
    pub lr: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct TreeClassDoc {
    lr: Vec<(String, String)>,
}

impl TreeClass {
    /// Checks that every non-sink vertex has exactly one pair and that each
    /// pair is an incidence.
    pub fn new(h: &Hypergraph, mut lr: Vec<(usize, usize)>) -> Result<Self> {
        lr.sort_unstable();
        let mut count = vec![0usize; h.vertex_count()];
        for &(v, e) in &lr {
            if v >= h.vertex_count() || e >= h.edge_count() || !h.edge(e).contains(&v) {
                return Err(Error::InvalidClass(format!("({v},{e}) is not an incidence")));
            }
            count[v] += 1;
        }
        for (v, &k) in count.iter().enumerate() {
            if k != usize::from(v != h.sink()) {
                return Err(Error::InvalidClass(format!("vertex {} has {k} pairs", h.label(v))));
            }
        }
        Ok(TreeClass { lr })
    }

    pub fn to_json(&self, h: &Hypergraph) -> String {
        let doc = TreeClassDoc {
            lr: self
                .lr
                .iter()
                .map(|&(v, e)| (h.label(v).to_string(), format!("e{}", e + 1)))
                .collect(),
        };
        serde_json::to_string(&doc).expect("class serializes")
    }

    pub fn from_json(h: &Hypergraph, text: &str) -> Result<Self> {
        let doc: TreeClassDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let b = h.bipartite_incidence();
        let lr = doc
            .lr
            .iter()
            .map(|(v, e)| {
                let v = h.vertex_index(v)?;
                match b.kind(parse_node(h, &b, e)?) {
                    NodeKind::Edge(e) => Ok((v, e)),
                    NodeKind::Vertex(_) => Err(Error::InvalidClass(format!("{e} is not an edge"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(h, lr)
    }
}

/// Per-edge values `f(e) = deg_T(e) - 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Hypertree(pub Vec<u32>);

/// Every spanning tree of the incidence graph exactly once, by
/// include/exclude recursion over incidences.
pub fn all_spanning_trees(b: &BipartiteIncidence, max_nodes: usize) -> Result<Vec<BTree>> {
    let n = b.node_count();
    if n > max_nodes {
        return Err(Error::SizeGuard { what: "spanning tree enumeration (nodes)", limit: max_nodes as u64, actual: n as u64 });
    }
    let edges: Vec<(usize, usize)> = (0..b.edge_count())
        .flat_map(|e| b.neighbors(e).iter().map(move |&v| (e, v)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    let comp: Vec<usize> = (0..n).collect();
    span_rec(b, &edges, 0, comp, &mut chosen, &mut out);
    Ok(out)
}

fn span_rec(
    b: &BipartiteIncidence,
    edges: &[(usize, usize)],
    idx: usize,
    comp: Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<BTree>,
) {
    let n = comp.len();
    if chosen.len() + 1 == n {
        out.push(BTree::from_edges(b, chosen).expect("n-1 forest edges span"));
        return;
    }
    if idx == edges.len() {
        return;
    }
    let (x, y) = edges[idx];
    if comp[x] != comp[y] {
        let (from, to) = (comp[y], comp[x]);
        let merged: Vec<usize> = comp.iter().map(|&c| if c == from { to } else { c }).collect();
        chosen.push((x, y));
        span_rec(b, edges, idx + 1, merged, chosen, out);
        chosen.pop();
    }
    if still_connects(n, chosen, &edges[idx + 1..]) {
        span_rec(b, edges, idx + 1, comp, chosen, out);
    }
}

fn still_connects(n: usize, chosen: &[(usize, usize)], rest: &[(usize, usize)]) -> bool {
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut x: usize) -> usize {
        while label[x] != x {
            label[x] = label[label[x]];
            x = label[x];
        }
        x
    }
    let mut parts = n;
    for &(x, y) in chosen.iter().chain(rest) {
        let (a, b) = (find(&mut label, x), find(&mut label, y));
        if a != b {
            label[a] = b;
            parts -= 1;
        }
    }
    parts == 1
}

/// The burning-equivalence class of `t`: arcs leaving vertex-nodes.
pub fn tree_class_of(b: &BipartiteIncidence, t: &BTree) -> TreeClass {
    let mut lr: Vec<(usize, usize)> = t
        .edges()
        .into_iter()
        .filter_map(|(child, parent)| match (b.kind(child), b.kind(parent)) {
            (NodeKind::Vertex(v), NodeKind::Edge(e)) => Some((v, e)),
            _ => None,
        })
        .collect();
    lr.sort_unstable();
    TreeClass { lr }
}

/// Distinct burning-equivalence classes over all spanning trees.
pub fn tree_classes(h: &Hypergraph, max_nodes: usize) -> Result<Vec<TreeClass>> {
    let b = h.bipartite_incidence();
    let classes: BTreeSet<TreeClass> = all_spanning_trees(&b, max_nodes)?
        .iter()
        .map(|t| tree_class_of(&b, t))
        .collect();
    Ok(classes.into_iter().collect())
}

/// Neighbours of `node` sorted by the breadth-first tree order.
fn sorted_by_tree_order(
    adjacency: &[Vec<usize>],
    node: usize,
    height: &[usize],
    order: &TreeOrder,
    keep: impl Fn(usize) -> bool,
) -> Vec<usize> {
    let mut nb: Vec<usize> = adjacency[node].iter().copied().filter(|&x| keep(x)).collect();
    nb.sort_by_key(|&x| (height[x], order.rank(x)));
    nb
}

/// Grows the tree for chips `b` on the nodes of a graph; `batched` adds all
/// candidates at the minimal height at once.
fn grow(
    adjacency: &[Vec<usize>],
    root: usize,
    chips: &[u32],
    order: &TreeOrder,
    batched: bool,
) -> Result<Vec<Option<usize>>> {
    let n = adjacency.len();
    let mut in_tree = vec![false; n];
    let mut parent = vec![None; n];
    let mut height = vec![0usize; n];
    in_tree[root] = true;
    let mut placed = 1;
    while placed < n {
        // (height in t, rank, node, attachment)
        let mut candidates: Vec<(usize, usize, usize, usize)> = Vec::new();
        for j in (0..n).filter(|&j| !in_tree[j]) {
            let nb = sorted_by_tree_order(adjacency, j, &height, order, |x| in_tree[x]);
            if let Some(&target) = nb.get(chips[j] as usize) {
                candidates.push((height[target] + 1, order.rank(j), j, target));
            }
        }
        let Some(&(h_min, ..)) = candidates.iter().min() else {
            return Err(Error::NotParking);
        };
        candidates.sort_unstable();
        let take = if batched {
            candidates.iter().take_while(|c| c.0 == h_min).count()
        } else {
            1
        };
        for &(hj, _, j, target) in &candidates[..take] {
            in_tree[j] = true;
            parent[j] = Some(target);
            height[j] = hj;
            placed += 1;
        }
    }
    Ok(parent)
}

/// Vertex-at-a-time inverse of the breadth-first tree-to-parking map.
pub fn inverse_bcp(b: &BipartiteIncidence, chips: &[u32], order: &TreeOrder) -> Result<BTree> {
    let parent = grow(b.adjacency(), b.root(), chips, order, false)?;
    BTree::from_parents(b, parent)
}

/// The batched variant: every candidate at the current minimal height joins
/// in one step.
pub fn bbb(b: &BipartiteIncidence, chips: &[u32], order: &TreeOrder) -> Result<BTree> {
    let parent = grow(b.adjacency(), b.root(), chips, order, true)?;
    BTree::from_parents(b, parent)
}

/// Maps a parking function to its spanning tree and class. Both growth
/// procedures run and must agree.
pub fn parking_to_tree(h: &Hypergraph, c: &Configuration, order: &TreeOrder) -> Result<(BTree, TreeClass)> {
    h.check_config(c)?;
    let b = h.bipartite_incidence();
    let chips = lift_to_incidence(h, &b, c);
    let one = inverse_bcp(&b, &chips, order)?;
    let batch = bbb(&b, &chips, order)?;
    assert_eq!(one, batch, "batched and vertex-at-a-time growth diverged for {c}");
    let class = tree_class_of(&b, &one);
    Ok((one, class))
}

/// Chips on the incidence graph read off a tree: per edge-node and per
/// non-sink vertex-node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceConfig {
    pub edges: Vec<u32>,
    pub vertices: Configuration,
}

impl IncidenceConfig {
    /// Zero on every edge-node.
    pub fn is_hypergraph_config(&self) -> bool {
        self.edges.iter().all(|&x| x == 0)
    }
}

/// The breadth-first tree-to-parking map on the incidence graph, read as a
/// symmetric digraph: `b_j` counts neighbours of `j` below its parent in the
/// tree order.
pub fn tree_to_parking(h: &Hypergraph, t: &BTree, order: &TreeOrder) -> IncidenceConfig {
    let b = h.bipartite_incidence();
    let value = |j: usize| -> u32 {
        let nb = sorted_by_tree_order(b.adjacency(), j, &t.height, order, |_| true);
        let p = t.parent(j).expect("non-root node has a parent");
        nb.iter().position(|&x| x == p).expect("parent is a neighbour") as u32
    };
    IncidenceConfig {
        edges: (0..h.edge_count()).map(|e| value(b.edge_node(e))).collect(),
        vertices: Configuration(h.sites().iter().map(|&v| value(b.vertex_node(v))).collect()),
    }
}

/// The representative of `class` whose edge-nodes each hang from their
/// smallest neighbour in the previous layer.
pub fn canonical_tree(h: &Hypergraph, class: &TreeClass, order: &TreeOrder) -> Result<BTree> {
    let b = h.bipartite_incidence();
    let n = b.node_count();
    let mut up_edge = vec![None; h.vertex_count()];
    for &(v, e) in &class.lr {
        up_edge[v] = Some(e);
    }
    let mut parent = vec![None; n];
    let mut placed = vec![false; n];
    placed[b.root()] = true;
    let mut layer = vec![b.root()];
    let mut count = 1;
    while !layer.is_empty() {
        // odd layer: unused edge-nodes next to the current vertex layer
        let mut edge_layer: Vec<usize> = layer
            .iter()
            .flat_map(|&x| b.neighbors(x).iter().copied())
            .filter(|&e| !placed[e])
            .collect();
        edge_layer.sort_unstable();
        edge_layer.dedup();
        for &e in &edge_layer {
            let p = layer
                .iter()
                .copied()
                .filter(|x| b.neighbors(e).binary_search(x).is_ok())
                .min_by_key(|&x| order.rank(x))
                .expect("edge-node touches the layer");
            parent[e] = Some(p);
            placed[e] = true;
            count += 1;
        }
        // even layer: vertices whose class arc lands in the edge layer
        let mut next = Vec::new();
        for (v, up) in up_edge.iter().enumerate() {
            let node = b.vertex_node(v);
            if let Some(e) = *up {
                if !placed[node] && edge_layer.binary_search(&e).is_ok() {
                    parent[node] = Some(e);
                    placed[node] = true;
                    count += 1;
                    next.push(node);
                }
            }
        }
        layer = next;
    }
    if count != n {
        return Err(Error::InvalidClass("class arcs do not reach every node".into()));
    }
    BTree::from_parents(&b, parent)
}

pub fn hypertree_of(b: &BipartiteIncidence, t: &BTree) -> Hypertree {
    Hypertree(
        (0..b.edge_count())
            .map(|e| t.degree(b.edge_node(e)).saturating_sub(1) as u32)
            .collect(),
    )
}

/// One line of the bijection audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub config: Configuration,
    pub class: TreeClass,
    pub canonical: BTree,
    /// Growth output coincides with the canonical representative.
    pub grown_is_canonical: bool,
    /// Reading the canonical tree back gives `config` with zeros on edges.
    pub round_trip: bool,
}

impl AuditRow {
    pub fn passed(&self) -> bool {
        self.round_trip && self.grown_is_canonical
    }
}

/// Parking function -> tree class -> canonical tree -> parking function, for
/// every parking function, plus a distinctness check on the classes.
pub fn audit_bijection(h: &Hypergraph, order: &TreeOrder, guard: u64) -> Result<(Vec<AuditRow>, bool)> {
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for c in parking::enumerate_parking(h, guard)? {
        let (grown, class) = parking_to_tree(h, &c, order)?;
        let canonical = canonical_tree(h, &class, order)?;
        let back = tree_to_parking(h, &canonical, order);
        rows.push(AuditRow {
            round_trip: back.is_hypergraph_config() && back.vertices == c,
            grown_is_canonical: grown == canonical,
            config: c,
            class: class.clone(),
            canonical,
        });
        seen.insert(class);
    }
    let distinct = seen.len() == rows.len();
    Ok((rows, distinct))
}

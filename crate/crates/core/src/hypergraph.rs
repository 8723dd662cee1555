//! Rooted hypergraphs, their bipartite incidence graphs and degree counts.
//!
//! Vertices are addressed by their position in the input vertex list
//! ("vertex index"). Configurations and vertex sets are addressed by the
//! position among the non-sink vertices ("site"), which is the input order
//! with the sink removed.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of non-sink vertices a [`VertexSet`] can hold.
pub const MAX_SITES: usize = 64;

/// A set of non-sink vertices, stored as a bitmask over sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(site: usize) -> Self {
        VertexSet(1 << site)
    }

    /// All sites `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn from_sites<I: IntoIterator<Item = usize>>(sites: I) -> Self {
        VertexSet(sites.into_iter().fold(0, |acc, s| acc | (1 << s)))
    }

    pub fn contains(self, site: usize) -> bool {
        site < 64 && self.0 >> site & 1 == 1
    }

    pub fn insert(&mut self, site: usize) {
        self.0 |= 1 << site;
    }

    pub fn remove(&mut self, site: usize) {
        self.0 &= !(1 << site);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn sites(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let s = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(s)
            }
        })
    }

    /// Every nonempty subset of `0..n`, in increasing bitmask order.
    pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
        let top = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        (1..=top).map(VertexSet)
    }
}

/// A chip configuration on the non-sink vertices, in site order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<u32>);

impl Configuration {
    pub fn zeros(n: usize) -> Self {
        Configuration(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    /// Coordinatewise `self <= other`.
    pub fn is_below(&self, other: &Configuration) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Parses `2,1,0` (whitespace tolerated).
    pub fn parse_list(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Configuration(Vec::new()));
        }
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Malformed(format!("bad configuration entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Configuration)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("vector of integers serializes")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Wire format of a rooted hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<String>>,
    pub sink: String,
}

/// A connected hypergraph with a distinguished sink vertex.
///
/// Edges are sets of at least two vertices; the edge list itself may repeat
/// an edge. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    labels: Vec<String>,
    edges: Vec<Vec<usize>>,
    sink: usize,
    sites: Vec<usize>,
    site_of: Vec<Option<usize>>,
    // non-sink members of each edge, as a site mask
    edge_sites: Vec<VertexSet>,
    edge_has_sink: Vec<bool>,
}

impl Hypergraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[Vec<S>], sink: &str) -> Result<Self> {
        let doc = HypergraphDoc {
            vertices: vertices.iter().map(|s| s.as_ref().to_string()).collect(),
            edges: edges
                .iter()
                .map(|e| e.iter().map(|s| s.as_ref().to_string()).collect())
                .collect(),
            sink: sink.to_string(),
        };
        Self::from_doc(doc)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HypergraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn from_doc(doc: HypergraphDoc) -> Result<Self> {
        let HypergraphDoc { vertices, edges: raw_edges, sink } = doc;
        let mut index = std::collections::HashMap::with_capacity(vertices.len());
        for (i, label) in vertices.iter().enumerate() {
            if index.insert(label.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(label.clone()));
            }
        }
        let sink = *index.get(sink.as_str()).ok_or_else(|| Error::SinkMissing(sink.clone()))?;

        let mut edges = Vec::with_capacity(raw_edges.len());
        for (ei, raw) in raw_edges.iter().enumerate() {
            if raw.len() < 2 {
                return Err(Error::EdgeTooSmall { edge: ei, size: raw.len() });
            }
            let mut members = Vec::with_capacity(raw.len());
            for label in raw {
                let v = *index
                    .get(label.as_str())
                    .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
                if members.contains(&v) {
                    return Err(Error::DuplicateMember { edge: ei, label: label.clone() });
                }
                members.push(v);
            }
            edges.push(members);
        }

        let sites: Vec<usize> = (0..vertices.len()).filter(|&v| v != sink).collect();
        if sites.len() > MAX_SITES {
            return Err(Error::TooManyVertices(sites.len()));
        }
        let mut site_of = vec![None; vertices.len()];
        for (s, &v) in sites.iter().enumerate() {
            site_of[v] = Some(s);
        }
        let edge_sites = edges
            .iter()
            .map(|e| VertexSet::from_sites(e.iter().filter_map(|&v| site_of[v])))
            .collect();
        let edge_has_sink = edges.iter().map(|e| e.contains(&sink)).collect();

        let h = Hypergraph { labels: vertices, edges, sink, sites, site_of, edge_sites, edge_has_sink };
        h.check_connected()?;
        Ok(h)
    }

    fn check_connected(&self) -> Result<()> {
        let nv = self.labels.len();
        let mut incident = vec![Vec::new(); nv];
        for (ei, e) in self.edges.iter().enumerate() {
            for &v in e {
                incident[v].push(ei);
            }
        }
        let mut seen = vec![false; nv];
        let mut edge_seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([self.sink]);
        seen[self.sink] = true;
        while let Some(v) = queue.pop_front() {
            for &ei in &incident[v] {
                if std::mem::replace(&mut edge_seen[ei], true) {
                    continue;
                }
                for &w in &self.edges[ei] {
                    if !std::mem::replace(&mut seen[w], true) {
                        queue.push_back(w);
                    }
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(v) => Err(Error::Disconnected(self.labels[v].clone())),
            None => Ok(()),
        }
    }

    pub fn to_doc(&self) -> HypergraphDoc {
        HypergraphDoc {
            vertices: self.labels.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| self.labels[v].clone()).collect())
                .collect(),
            sink: self.labels[self.sink].clone(),
        }
    }

    /// Compact JSON in the same field and list order as the input.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("hypergraph document serializes")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Number of non-sink vertices.
    pub fn n(&self) -> usize {
        self.sites.len()
    }

    /// Vertex index of each site.
    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn site_vertex(&self, site: usize) -> usize {
        self.sites[site]
    }

    pub fn site_of(&self, v: usize) -> Option<usize> {
        self.site_of.get(v).copied().flatten()
    }

    pub fn site_label(&self, site: usize) -> &str {
        &self.labels[self.sites[site]]
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn site_index(&self, label: &str) -> Result<usize> {
        let v = self.vertex_index(label)?;
        self.site_of(v).ok_or(Error::SinkNotAllowed)
    }

    /// Parses a comma-separated list of non-sink labels into a set.
    pub fn parse_set(&self, text: &str) -> Result<VertexSet> {
        let mut set = VertexSet::EMPTY;
        for label in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            set.insert(self.site_index(label)?);
        }
        Ok(set)
    }

    pub fn format_set(&self, set: VertexSet) -> String {
        let names: Vec<&str> = set.sites().map(|s| self.site_label(s)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Non-sink members of edge `e`.
    pub fn edge_sites(&self, e: usize) -> VertexSet {
        self.edge_sites[e]
    }

    pub fn edge_has_sink(&self, e: usize) -> bool {
        self.edge_has_sink[e]
    }

    /// Whether edge `e` lies inside the site set `set`.
    pub fn edge_within(&self, e: usize, set: VertexSet) -> bool {
        !self.edge_has_sink[e] && self.edge_sites[e].is_subset(set)
    }

    /// Edges containing vertex `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.contains(&v))
            .map(|(i, _)| i)
    }

    /// Number of edge occurrences containing vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn degree_of(&self, label: &str) -> Result<usize> {
        Ok(self.degree(self.vertex_index(label)?))
    }

    /// Degrees of the non-sink vertices in site order.
    pub fn site_degrees(&self) -> Vec<u32> {
        self.sites.iter().map(|&v| self.degree(v) as u32).collect()
    }

    /// Number of edges containing `site` that are not contained in `set`.
    pub fn degree_in_set(&self, set: VertexSet, site: usize) -> Result<usize> {
        if !set.contains(site) {
            return Err(Error::NotInSet(self.site_label(site).to_string()));
        }
        Ok(self.degree_in_set_unchecked(set, site))
    }

    pub(crate) fn degree_in_set_unchecked(&self, set: VertexSet, site: usize) -> usize {
        (0..self.edges.len())
            .filter(|&e| self.edge_sites[e].contains(site) && !self.edge_within(e, set))
            .count()
    }

    /// Every edge contains the sink.
    pub fn is_star(&self) -> bool {
        self.edge_has_sink.iter().all(|&b| b)
    }

    pub fn check_config(&self, c: &Configuration) -> Result<()> {
        if c.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: c.len() });
        }
        Ok(())
    }

    pub fn bipartite_incidence(&self) -> BipartiteIncidence {
        BipartiteIncidence::of(self)
    }
}

/// The bipartite incidence graph: one node per edge occurrence followed by
/// one node per vertex.
///
/// Node `e` (for `e < edge_count`) is the edge-node of edge `e`; node
/// `edge_count + v` is the vertex-node of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteIncidence {
    edge_count: usize,
    vertex_count: usize,
    sink: usize,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteIncidence {
    fn of(h: &Hypergraph) -> Self {
        let m = h.edge_count();
        let mut adjacency = vec![Vec::new(); m + h.vertex_count()];
        for (e, members) in h.edges().iter().enumerate() {
            for &v in members {
                adjacency[e].push(m + v);
                adjacency[m + v].push(e);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        BipartiteIncidence { edge_count: m, vertex_count: h.vertex_count(), sink: m + h.sink(), adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.edge_count + self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The sink's vertex-node.
    pub fn root(&self) -> usize {
        self.sink
    }

    pub fn edge_node(&self, e: usize) -> usize {
        e
    }

    pub fn vertex_node(&self, v: usize) -> usize {
        self.edge_count + v
    }

    pub fn is_edge_node(&self, node: usize) -> bool {
        node < self.edge_count
    }

    /// Node as an edge index or vertex index.
    pub fn kind(&self, node: usize) -> NodeKind {
        if node < self.edge_count {
            NodeKind::Edge(node)
        } else {
            NodeKind::Vertex(node - self.edge_count)
        }
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Incidences as `(edge index, vertex index)` pairs.
    pub fn incidences(&self) -> Vec<(usize, usize)> {
        (0..self.edge_count)
            .flat_map(|e| self.adjacency[e].iter().map(move |&n| (e, n - self.edge_count)))
            .collect()
    }

    pub fn incidence_count(&self) -> usize {
        self.adjacency[..self.edge_count].iter().map(Vec::len).sum()
    }

    pub fn node_name(&self, h: &Hypergraph, node: usize) -> String {
        match self.kind(node) {
            NodeKind::Edge(e) => format!("e{}", e + 1),
            NodeKind::Vertex(v) => h.label(v).to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Edge(usize),
    Vertex(usize),
}

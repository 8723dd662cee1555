//! Directed multigraphs with a sink: reduced Laplacians, digraph parking
//! functions, and the digraphs a hypergraph induces through cyclings and
//! through the star construction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::firing::ChipVector;
use crate::hypergraph::{BipartiteIncidence, Configuration, Hypergraph, VertexSet, MAX_SITES};
use crate::linalg;
use crate::parking;

/// A loopless directed multigraph with a sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<String>,
    sink: usize,
    arcs: BTreeMap<(usize, usize), u32>,
    sites: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDoc {
    pub from: String,
    pub to: String,
    pub multiplicity: u32,
}

/// Wire format: vertex labels, sink label, and an arc list with
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphDoc {
    pub vertices: Vec<String>,
    pub sink: String,
    pub arcs: Vec<ArcDoc>,
}

impl Digraph {
    /// Arcs are `(from, to)` vertex indices; repeats add up.
    pub fn new(labels: Vec<String>, sink: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (u, v) in arcs {
            *map.entry((u, v)).or_insert(0) += 1;
        }
        Self::with_multiplicities(labels, sink, map)
    }

    pub fn with_multiplicities(labels: Vec<String>, sink: usize, arcs: BTreeMap<(usize, usize), u32>) -> Result<Self> {
        let n = labels.len();
        if sink >= n {
            return Err(Error::InvalidDigraph("sink out of range".into()));
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidDigraph("duplicate vertex labels".into()));
        }
        for (&(u, v), &m) in &arcs {
            if u >= n || v >= n {
                return Err(Error::InvalidDigraph(format!("arc ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidDigraph(format!("loop at {}", labels[u])));
            }
            if m == 0 {
                return Err(Error::InvalidDigraph("zero multiplicity".into()));
            }
        }
        let sites: Vec<usize> = (0..n).filter(|&v| v != sink).collect();
        if sites.len() > MAX_SITES {
            return Err(Error::TooManyVertices(sites.len()));
        }
        Ok(Digraph { labels, sink, arcs, sites })
    }

    /// Both directions of every undirected pair.
    pub fn symmetric(labels: Vec<String>, sink: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(labels, sink, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]))
    }

    pub fn from_doc(doc: &DigraphDoc) -> Result<Self> {
        let index = |l: &str| {
            doc.vertices
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let sink = index(&doc.sink)?;
        let mut map = BTreeMap::new();
        for a in &doc.arcs {
            *map.entry((index(&a.from)?, index(&a.to)?)).or_insert(0) += a.multiplicity;
        }
        Self::with_multiplicities(doc.vertices.clone(), sink, map)
    }

    pub fn to_doc(&self) -> DigraphDoc {
        DigraphDoc {
            vertices: self.labels.clone(),
            sink: self.labels[self.sink].clone(),
            arcs: self
                .arcs
                .iter()
                .map(|(&(u, v), &m)| ArcDoc { from: self.labels[u].clone(), to: self.labels[v].clone(), multiplicity: m })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("digraph serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph D {\n");
        for (i, l) in self.labels.iter().enumerate() {
            let shape = if i == self.sink { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  n{i} [label=\"{l}\", shape={shape}];");
        }
        for (&(u, v), &m) in &self.arcs {
            for _ in 0..m {
                let _ = writeln!(out, "  n{u} -> n{v};");
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arcs(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.arcs
    }

    pub fn arc_count(&self) -> u32 {
        self.arcs.values().sum()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.arcs.get(&(u, v)).copied().unwrap_or(0)
    }

    pub fn outdegree(&self, u: usize) -> u32 {
        self.arcs.range((u, 0)..(u + 1, 0)).map(|(_, &m)| m).sum()
    }

    pub fn indegree(&self, v: usize) -> u32 {
        self.arcs.iter().filter(|((_, w), _)| *w == v).map(|(_, &m)| m).sum()
    }

    pub fn reduced_laplacian(&self) -> ReducedLaplacian {
        let rows = self
            .sites
            .iter()
            .map(|&u| {
                self.sites
                    .iter()
                    .map(|&v| {
                        if u == v {
                            i64::from(self.outdegree(u))
                        } else {
                            -i64::from(self.multiplicity(u, v))
                        }
                    })
                    .collect()
            })
            .collect();
        ReducedLaplacian { labels: self.sites.iter().map(|&v| self.labels[v].clone()).collect(), rows }
    }

    fn reach(&self, forward: bool) -> usize {
        let n = self.labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in self.arcs.keys() {
            if forward {
                adj[u].push(v);
            } else {
                adj[v].push(u);
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !std::mem::replace(&mut seen[y], true) {
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.labels.len();
        n <= 1 || (self.reach(true) == n && self.reach(false) == n)
    }

    /// Strongly connected and balanced at every vertex.
    pub fn is_eulerian(&self) -> bool {
        self.is_strongly_connected() && (0..self.labels.len()).all(|v| self.indegree(v) == self.outdegree(v))
    }

    /// Arcs from site `j` to vertices outside `set` (the sink is always
    /// outside).
    fn arcs_leaving(&self, j: usize, set: VertexSet) -> u32 {
        let u = self.sites[j];
        self.arcs
            .range((u, 0)..(u + 1, 0))
            .filter(|((_, v), _)| self.site_of(*v).is_none_or(|s| !set.contains(s)))
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn site_of(&self, v: usize) -> Option<usize> {
        if v == self.sink {
            None
        } else {
            Some(if v < self.sink { v } else { v - 1 })
        }
    }

    /// Every nonempty site set has a member with more arcs leaving the set
    /// than chips.
    pub fn is_parking(&self, c: &Configuration) -> bool {
        c.len() == self.sites.len()
            && VertexSet::nonempty_subsets(self.sites.len())
                .all(|s| s.sites().any(|j| self.arcs_leaving(j, s) > c.0[j]))
    }

    /// Subtracts the Laplacian columns of `set` from `c`: each fired site
    /// loses its outdegree and regains one chip per arc into the set, and an
    /// unfired site gains one chip per arc it sends into the set.
    pub fn fire_set(&self, c: &ChipVector, set: VertexSet) -> ChipVector {
        let l = self.reduced_laplacian();
        let mut out = c.clone();
        for (v, row) in l.rows.iter().enumerate() {
            out.0[v] -= set.sites().map(|i| row[i]).sum::<i64>();
        }
        out
    }

    /// No nonempty site set can fire without going negative.
    pub fn is_superstable(&self, c: &Configuration) -> bool {
        let start = ChipVector::from(c);
        VertexSet::nonempty_subsets(self.sites.len()).all(|s| !self.fire_set(&start, s).is_nonnegative())
    }

    fn outdegree_box(&self, guard: u64) -> Result<Vec<Configuration>> {
        let bounds: Vec<u32> = self.sites.iter().map(|&u| self.outdegree(u)).collect();
        let size = bounds.iter().fold(1u64, |a, &b| a.saturating_mul(u64::from(b)));
        let work = size.saturating_mul(1u64 << self.sites.len().min(63));
        if work > guard {
            return Err(Error::SizeGuard { what: "digraph parking scan", limit: guard, actual: work });
        }
        Ok(parking::box_points(&bounds))
    }

    /// Digraph parking functions by box scan over `[0, outdeg - 1]`.
    pub fn parking_functions(&self, guard: u64) -> Result<Vec<Configuration>> {
        Ok(self.outdegree_box(guard)?.into_iter().filter(|c| self.is_parking(c)).collect())
    }

    /// Superstable configurations under set-firing, over the same box.
    pub fn superstables(&self, guard: u64) -> Result<Vec<Configuration>> {
        Ok(self.outdegree_box(guard)?.into_iter().filter(|c| self.is_superstable(c)).collect())
    }
}

/// Outdegree on the diagonal, minus arc multiplicities off it; rows and
/// columns indexed by the non-sink vertices in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedLaplacian {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

impl ReducedLaplacian {
    /// Row-major JSON with integer strings.
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(i64::to_string).collect()).collect();
        serde_json::to_string(&rows).expect("matrix serializes")
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }
}

pub fn laplacian_determinant(l: &ReducedLaplacian) -> BigInt {
    linalg::determinant_i64(&l.rows)
}

/// A cyclic order on every edge, rotated so the smallest vertex index
/// leads.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycling {
    cycles: Vec<Vec<usize>>,
}

impl Cycling {
    pub fn new(h: &Hypergraph, cycles: Vec<Vec<usize>>) -> Result<Self> {
        if cycles.len() != h.edge_count() {
            return Err(Error::InvalidCycling(format!("{} cycles for {} edges", cycles.len(), h.edge_count())));
        }
        let mut out = Vec::with_capacity(cycles.len());
        for (e, mut cyc) in cycles.into_iter().enumerate() {
            let mut a = cyc.clone();
            a.sort_unstable();
            let mut b = h.edge(e).to_vec();
            b.sort_unstable();
            if a != b {
                return Err(Error::InvalidCycling(format!("cycle {e} is not a permutation of its edge")));
            }
            let lead = cyc.iter().position(|&v| v == a[0]).expect("nonempty");
            cyc.rotate_left(lead);
            out.push(cyc);
        }
        Ok(Cycling { cycles: out })
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn format(&self, h: &Hypergraph) -> String {
        let parts: Vec<String> = self
            .cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|&v| h.label(v)).join(" ")))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Sorts each edge by the vertex order and closes it into a cycle. `order`
/// lists vertex indices from smallest to largest.
pub fn cycling_from_order(h: &Hypergraph, order: &[usize]) -> Result<Cycling> {
    let n = h.vertex_count();
    let mut rank = vec![usize::MAX; n];
    if order.len() != n {
        return Err(Error::InvalidOrder(format!("{} vertices given, {} expected", order.len(), n)));
    }
    for (r, &v) in order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(Error::InvalidOrder("not a permutation of the vertices".into()));
        }
        rank[v] = r;
    }
    let cycles = h
        .edges()
        .iter()
        .map(|e| {
            let mut c = e.clone();
            c.sort_by_key(|&v| rank[v]);
            c
        })
        .collect();
    Cycling::new(h, cycles)
}

pub fn parse_vertex_order(h: &Hypergraph, text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|l| h.vertex_index(l))
        .collect()
}

/// One arc per consecutive pair of every cycle.
pub fn digraph_from_cycling(h: &Hypergraph, c: &Cycling) -> Digraph {
    let arcs = c.cycles.iter().flat_map(|cyc| {
        (0..cyc.len()).map(move |i| (cyc[i], cyc[(i + 1) % cyc.len()]))
    });
    Digraph::new(h.labels().to_vec(), h.sink(), arcs).expect("cycling arcs are loopless")
}

/// Union of the digraph parking sets over all vertex-induced cyclings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclingUnion {
    /// Distinct cyclings with the parking set of their digraph.
    pub per_cycling: Vec<(Cycling, Vec<Configuration>)>,
    pub union: Vec<Configuration>,
    /// Union restricted to orders that put the sink first.
    pub sink_first_union: Vec<Configuration>,
}

fn factorial_capped(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |a, k| a.saturating_mul(k))
}

pub fn union_over_cyclings(h: &Hypergraph, guard: u64) -> Result<CyclingUnion> {
    let n = h.vertex_count();
    let orders = factorial_capped(n);
    if orders > guard {
        return Err(Error::SizeGuard { what: "vertex orders", limit: guard, actual: orders });
    }
    let mut cyclings: BTreeMap<Cycling, bool> = BTreeMap::new();
    for order in (0..n).permutations(n) {
        let sink_first = order[0] == h.sink();
        let c = cycling_from_order(h, &order)?;
        *cyclings.entry(c).or_insert(false) |= sink_first;
    }
    let mut union = BTreeSet::new();
    let mut sink_first_union = BTreeSet::new();
    let mut per_cycling = Vec::with_capacity(cyclings.len());
    for (c, sink_first) in cyclings {
        let set = digraph_from_cycling(h, &c).parking_functions(guard)?;
        union.extend(set.iter().cloned());
        if sink_first {
            sink_first_union.extend(set.iter().cloned());
        }
        per_cycling.push((c, set));
    }
    Ok(CyclingUnion {
        per_cycling,
        union: union.into_iter().collect(),
        sink_first_union: sink_first_union.into_iter().collect(),
    })
}

/// Greedily picks cyclings until their parking sets cover the union. The
/// result is a valid cover, not necessarily a smallest one.
pub fn greedy_cycling_cover(u: &CyclingUnion) -> Vec<Cycling> {
    let mut left: BTreeSet<&Configuration> = u.union.iter().collect();
    let mut cover = Vec::new();
    while !left.is_empty() {
        let (c, set) = u
            .per_cycling
            .iter()
            .max_by_key(|(_, s)| s.iter().filter(|x| left.contains(x)).count())
            .expect("union is covered by its members");
        for x in set {
            left.remove(x);
        }
        cover.push(c.clone());
    }
    cover
}

/// For a star hypergraph: nodes are the edges then the vertices; each edge
/// points at the sink and each non-sink vertex points at its edges.
pub fn star_digraph(h: &Hypergraph) -> Result<Digraph> {
    if let Some(e) = (0..h.edge_count()).find(|&e| !h.edge_has_sink(e)) {
        return Err(Error::NotStar(e));
    }
    let m = h.edge_count();
    let mut labels: Vec<String> = (0..m).map(|e| edge_label(h, e)).collect();
    labels.extend(h.labels().iter().cloned());
    let sink = m + h.sink();
    let mut arcs = Vec::new();
    for (e, members) in h.edges().iter().enumerate() {
        arcs.push((e, sink));
        for &v in members.iter().filter(|&&v| v != h.sink()) {
            arcs.push((m + v, e));
        }
    }
    Digraph::new(labels, sink, arcs)
}

/// `eK`, prefixed with `_` until it clashes with no vertex label.
fn edge_label(h: &Hypergraph, e: usize) -> String {
    let mut l = format!("e{}", e + 1);
    while h.labels().contains(&l) {
        l.insert(0, '_');
    }
    l
}

/// The symmetric digraph of a hypergraph whose edges all have two members.
pub fn graph_digraph(h: &Hypergraph) -> Result<Digraph> {
    let pairs = h
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| match e.as_slice() {
            &[u, v] => Ok((u, v)),
            _ => Err(Error::InvalidDigraph(format!("edge {i} has {} members", e.len()))),
        })
        .collect::<Result<Vec<_>>>()?;
    Digraph::symmetric(h.labels().to_vec(), h.sink(), &pairs)
}

/// The incidence graph as a symmetric digraph, nodes in incidence order.
pub fn incidence_digraph(h: &Hypergraph, b: &BipartiteIncidence) -> Digraph {
    let labels: Vec<String> = (0..b.node_count()).map(|x| format!("#{}", b.node_name(h, x))).collect();
    let pairs: Vec<(usize, usize)> = (0..b.edge_count())
        .flat_map(|e| b.neighbors(e).iter().map(move |&v| (e, v)))
        .collect();
    Digraph::symmetric(labels, b.root(), &pairs).expect("incidence graph is loopless")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;

    fn cfgs(list: &[[u32; 3]]) -> Vec<Configuration> {
        let mut v: Vec<Configuration> = list.iter().map(|c| Configuration(c.to_vec())).collect();
        v.sort();
        v
    }

    fn example_cycling(h: &Hypergraph) -> Cycling {
        cycling_from_order(h, &parse_vertex_order(h, "1,3,2,4").unwrap()).unwrap()
    }

    #[test]
    fn cycling_of_example_order() {
        let h = running_example();
        let c = example_cycling(&h);
        assert_eq!(c.format(&h), "{(1 3 2), (1 2 4), (1 3 4)}");
        let two = Hypergraph::new(&["a", "b"], &[vec!["a", "b"]], "b").unwrap();
        assert_eq!(cycling_from_order(&two, &[0, 1]).unwrap(), cycling_from_order(&two, &[1, 0]).unwrap());
        let rev = cycling_from_order(&h, &parse_vertex_order(&h, "4,2,3,1").unwrap()).unwrap();
        for (a, b) in c.cycles().iter().zip(rev.cycles()) {
            let mut b2 = b.clone();
            b2.reverse();
            b2.rotate_right(1);
            assert_eq!(a, &b2);
        }
        assert!(cycling_from_order(&h, &[0, 1, 2]).is_err());
        assert!(cycling_from_order(&h, &[0, 1, 2, 2]).is_err());
    }

    #[test]
    fn example_digraph_and_laplacian() {
        let h = running_example();
        let d = digraph_from_cycling(&h, &example_cycling(&h));
        assert_eq!(d.arc_count(), 9);
        assert_eq!(d.multiplicity(0, 2), 2);
        let l = d.reduced_laplacian();
        assert_eq!(l.rows, vec![vec![3, -1, -2], vec![-1, 2, 0], vec![0, -1, 2]]);
        assert!(l.row_sums().iter().all(|&s| s >= 0));
        assert!(d.is_eulerian());
        let want = cfgs(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [1, 1, 0], [1, 0, 1], [2, 0, 1]]);
        assert_eq!(d.parking_functions(1 << 20).unwrap(), want);
        assert_eq!(d.superstables(1 << 20).unwrap(), want);
    }

    #[test]
    fn duplicate_edge_doubles_arcs() {
        let h = Hypergraph::new(&["1", "2", "3"], &[vec!["1", "2", "3"], vec!["1", "2", "3"]], "3").unwrap();
        let d = digraph_from_cycling(&h, &cycling_from_order(&h, &[0, 1, 2]).unwrap());
        assert_eq!(d.multiplicity(0, 1), 2);
        assert_eq!(d.multiplicity(1, 2), 2);
        assert_eq!(d.multiplicity(2, 0), 2);
        assert_eq!(d.arc_count(), 6);
    }

    #[test]
    fn small_digraphs() {
        let k2 = graph_digraph(&single_edge()).unwrap();
        assert_eq!(k2.arcs().len(), 2);
        assert_eq!(k2.reduced_laplacian().rows, vec![vec![1]]);
        assert_eq!(k2.parking_functions(1 << 20).unwrap(), vec![Configuration(vec![0])]);
        let one_way = Digraph::new(vec!["1".into(), "2".into()], 1, [(0, 1)]).unwrap();
        assert!(!one_way.is_eulerian());
        let k4 = graph_digraph(&complete(4, 2)).unwrap();
        assert!(k4.is_eulerian());
        assert_eq!(k4.parking_functions(1 << 20).unwrap().len(), 16);
        assert_eq!(laplacian_determinant(&k4.reduced_laplacian()), BigInt::from(16));
        assert!(Digraph::new(vec!["a".into()], 0, [(0, 0)]).is_err());
    }

    #[test]
    fn union_of_running_example() {
        let h = running_example();
        let u = union_over_cyclings(&h, 1 << 20).unwrap();
        assert_eq!(u.union, parking::enumerate_parking(&h, 1 << 20).unwrap());
        let one = digraph_from_cycling(&h, &example_cycling(&h)).parking_functions(1 << 20).unwrap();
        assert!(one.iter().all(|c| u.union.contains(c)));
        let cover = greedy_cycling_cover(&u);
        let covered: BTreeSet<Configuration> = cover
            .iter()
            .flat_map(|c| digraph_from_cycling(&h, c).parking_functions(1 << 20).unwrap())
            .collect();
        assert_eq!(covered.into_iter().collect::<Vec<_>>(), u.union);
        let single = union_over_cyclings(&single_edge(), 1 << 20).unwrap();
        assert_eq!(single.union, vec![Configuration(vec![0])]);
    }

    #[test]
    fn star_digraph_matches_displayed_matrix() {
        let h = star_example();
        let d = star_digraph(&h).unwrap();
        let l = d.reduced_laplacian();
        assert_eq!(l.labels, vec!["e1", "e2", "e3", "1", "2", "3"]);
        assert_eq!(
            l.rows,
            vec![
                vec![1, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0],
                vec![0, 0, 1, 0, 0, 0],
                vec![-1, -1, -1, 3, 0, 0],
                vec![-1, -1, 0, 0, 2, 0],
                vec![-1, 0, -1, 0, 0, 2],
            ]
        );
        assert_eq!(laplacian_determinant(&l), BigInt::from(12));
        assert_eq!(star_digraph(&running_example()), Err(Error::NotStar(0)));
        let path = star_digraph(&single_edge()).unwrap();
        assert_eq!(path.arcs().keys().copied().collect::<Vec<_>>(), vec![(0, 2), (1, 0)]);
    }

    #[test]
    fn json_round_trip() {
        let h = running_example();
        let d = digraph_from_cycling(&h, &example_cycling(&h));
        let doc: DigraphDoc = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(Digraph::from_doc(&doc).unwrap(), d);
        assert_eq!(d.reduced_laplacian().to_json(), r#"[["3","-1","-2"],["-1","2","0"],["0","-1","2"]]"#);
    }
}

//! Recognition and enumeration of hypergraph parking functions, and the
//! maximal ones via acyclic orientations with a unique source.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::hypergraph::{BipartiteIncidence, Configuration, Hypergraph, VertexSet};

/// Default ceiling on brute-force search spaces.
pub const DEFAULT_GUARD: u64 = 1 << 22;

/// Nonempty site sets bounded by `c`: every member `i` has
/// `deg_T(i) <= c_i`. Exponential in `n`.
pub fn bounded_sets(h: &Hypergraph, c: &Configuration) -> Vec<VertexSet> {
    VertexSet::nonempty_subsets(h.n())
        .filter(|&t| is_bounded(h, c, t))
        .collect()
}

pub fn is_bounded(h: &Hypergraph, c: &Configuration, t: VertexSet) -> bool {
    t.sites().all(|i| h.degree_in_set_unchecked(t, i) <= c.0[i] as usize)
}

/// Subset-by-subset parking test straight from the definition.
pub fn is_parking_bruteforce(h: &Hypergraph, c: &Configuration) -> bool {
    VertexSet::nonempty_subsets(h.n()).all(|t| !is_bounded(h, c, t))
}

/// Outcome of Dhar's burning on a graph with chips on its nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Burning {
    /// `layers[k]` holds the nodes marked in round `k`; round 0 is the root.
    pub layers: Vec<Vec<usize>>,
    pub marked: Vec<bool>,
}

impl Burning {
    pub fn all_marked(&self) -> bool {
        self.marked.iter().all(|&m| m)
    }
}

/// Synchronous burning: starting from `root`, each round marks every
/// unmarked node having more marked neighbours than chips.
pub fn dhar_burn(adjacency: &[Vec<usize>], root: usize, chips: &[u32]) -> Burning {
    let mut marked = vec![false; adjacency.len()];
    marked[root] = true;
    let mut layers = vec![vec![root]];
    loop {
        let next: Vec<usize> = (0..adjacency.len())
            .filter(|&v| !marked[v])
            .filter(|&v| {
                let hot = adjacency[v].iter().filter(|&&w| marked[w]).count();
                hot > chips[v] as usize
            })
            .collect();
        if next.is_empty() {
            break;
        }
        for &v in &next {
            marked[v] = true;
        }
        layers.push(next);
    }
    Burning { layers, marked }
}

/// Chips on the nodes of the incidence graph: `c` on vertex-nodes, zero on
/// edge-nodes and on the sink.
pub fn lift_to_incidence(h: &Hypergraph, b: &BipartiteIncidence, c: &Configuration) -> Vec<u32> {
    let mut chips = vec![0; b.node_count()];
    for (site, &x) in c.0.iter().enumerate() {
        chips[b.vertex_node(h.site_vertex(site))] = x;
    }
    chips
}

/// Polynomial-time parking test by burning the incidence graph.
pub fn is_parking_burn(h: &Hypergraph, c: &Configuration) -> bool {
    let b = h.bipartite_incidence();
    let chips = lift_to_incidence(h, &b, c);
    dhar_burn(b.adjacency(), b.root(), &chips).all_marked()
}

/// An orientation picks one member `v_e` of every edge occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orientation(pub Vec<usize>);

impl Orientation {
    pub fn new(h: &Hypergraph, choice: Vec<usize>) -> Result<Self> {
        if choice.len() != h.edge_count() {
            return Err(Error::InvalidOrientation(format!(
                "{} choices for {} edges",
                choice.len(),
                h.edge_count()
            )));
        }
        for (e, &v) in choice.iter().enumerate() {
            if !h.edge(e).contains(&v) {
                return Err(Error::InvalidOrientation(format!("vertex {v} is not in edge {e}")));
            }
        }
        Ok(Orientation(choice))
    }

    /// Indegree of every vertex in the induced orientation of the incidence
    /// graph: `v` receives an arc from each edge where it is not chosen.
    pub fn indegrees(&self, h: &Hypergraph) -> Vec<usize> {
        let mut indeg = vec![0; h.vertex_count()];
        for (e, members) in h.edges().iter().enumerate() {
            for &v in members {
                if v != self.0[e] {
                    indeg[v] += 1;
                }
            }
        }
        indeg
    }

    /// Acyclic with the sink as its only source.
    pub fn is_acyclic_unique_source(&self, h: &Hypergraph) -> bool {
        let m = h.edge_count();
        let nodes = m + h.vertex_count();
        // arcs: chosen vertex -> edge -> other members
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        let mut indeg = vec![0usize; nodes];
        for (e, members) in h.edges().iter().enumerate() {
            out[m + self.0[e]].push(e);
            indeg[e] += 1;
            for &v in members.iter().filter(|&&v| v != self.0[e]) {
                out[e].push(m + v);
                indeg[m + v] += 1;
            }
        }
        let sources: Vec<usize> = (0..nodes).filter(|&x| indeg[x] == 0).collect();
        if sources != [m + h.sink()] {
            return false;
        }
        let mut queue: VecDeque<usize> = sources.into();
        let mut seen = 0;
        while let Some(x) = queue.pop_front() {
            seen += 1;
            for &y in &out[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        seen == nodes
    }
}

fn orientation_space(h: &Hypergraph) -> u64 {
    h.edges()
        .iter()
        .fold(1u64, |acc, e| acc.saturating_mul(e.len() as u64))
}

/// All orientations that are acyclic with unique source the sink, in
/// lexicographic order of member positions.
pub fn enumerate_acyclic_orientations(h: &Hypergraph, guard: u64) -> Result<Vec<Orientation>> {
    let space = orientation_space(h);
    if space > guard {
        return Err(Error::SizeGuard { what: "orientation enumeration", limit: guard, actual: space });
    }
    let mut found = Vec::new();
    let mut pick = vec![0usize; h.edge_count()];
    loop {
        let o = Orientation(pick.iter().enumerate().map(|(e, &k)| h.edge(e)[k]).collect());
        if o.is_acyclic_unique_source(h) {
            found.push(o);
        }
        // odometer
        let mut e = 0;
        loop {
            if e == pick.len() {
                return Ok(found);
            }
            pick[e] += 1;
            if pick[e] < h.edge(e).len() {
                break;
            }
            pick[e] = 0;
            e += 1;
        }
    }
}

/// `c_i = indeg(i) - 1` in the induced orientation of the incidence graph.
pub fn orientation_to_config(h: &Hypergraph, o: &Orientation) -> Result<Configuration> {
    let indeg = o.indegrees(h);
    h.sites()
        .iter()
        .map(|&v| {
            indeg[v]
                .checked_sub(1)
                .map(|x| x as u32)
                .ok_or_else(|| Error::InvalidOrientation(format!("vertex {} is a source", h.label(v))))
        })
        .collect::<Result<Vec<_>>>()
        .map(Configuration)
}

/// Maximal parking functions, one per acyclic unique-source orientation.
pub fn maximal_parking(h: &Hypergraph, guard: u64) -> Result<Vec<Configuration>> {
    let mut out = enumerate_acyclic_orientations(h, guard)?
        .iter()
        .map(|o| orientation_to_config(h, o))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// All parking functions in lexicographic order, as the downward closure of
/// the maximal ones.
pub fn enumerate_parking(h: &Hypergraph, guard: u64) -> Result<Vec<Configuration>> {
    let tops = maximal_parking(h, guard)?;
    let mut seen: HashSet<Configuration> = tops.iter().cloned().collect();
    let mut stack = tops;
    while let Some(c) = stack.pop() {
        for i in 0..c.len() {
            if c.0[i] > 0 {
                let mut d = c.clone();
                d.0[i] -= 1;
                if seen.insert(d.clone()) {
                    stack.push(d);
                }
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Every configuration in the box `prod [0, deg(i) - 1]`, lexicographically.
pub fn degree_box(h: &Hypergraph, guard: u64) -> Result<Vec<Configuration>> {
    let bounds: Vec<u32> = h.site_degrees();
    let size = bounds.iter().fold(1u64, |acc, &d| acc.saturating_mul(u64::from(d)));
    if size > guard {
        return Err(Error::SizeGuard { what: "degree box", limit: guard, actual: size });
    }
    Ok(box_points(&bounds))
}

/// Lexicographic enumeration of `prod [0, bound_i - 1]`.
pub fn box_points(bounds: &[u32]) -> Vec<Configuration> {
    if bounds.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; bounds.len()];
    loop {
        out.push(Configuration(cur.clone()));
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Box scan with the burning test; independent of orientations.
pub fn enumerate_parking_box(h: &Hypergraph, guard: u64) -> Result<Vec<Configuration>> {
    Ok(degree_box(h, guard)?
        .into_iter()
        .filter(|c| is_parking_burn(h, c))
        .collect())
}

/// Maximal elements under the coordinatewise order.
pub fn maximal_elements(set: &[Configuration]) -> Vec<Configuration> {
    let mut out: Vec<Configuration> = set
        .iter()
        .filter(|c| !set.iter().any(|d| d != *c && c.is_below(d)))
        .cloned()
        .collect();
    out.sort();
    out
}

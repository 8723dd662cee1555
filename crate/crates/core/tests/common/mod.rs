//! Random instances and brute-force oracles shared by the integration tests.
//! The oracles work from edge lists only and never call the parking module.

#![allow(dead_code)]

use hyperchip::{Configuration, Hypergraph};
use proptest::prelude::*;

/// Connected hypergraphs with at most `max_vertices` vertices (sink
/// included) and at most `max_edges` edges. Repeated edges are allowed.
pub fn hypergraph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_vertices)
        .prop_flat_map(move |k| {
            let masks = prop::collection::vec(1u32..(1 << k), 1..=max_edges);
            (Just(k), masks, 0..k)
        })
        .prop_map(|(k, masks, sink)| build(k, masks, sink))
}

/// Hypergraphs whose edges all have two members (multigraphs).
pub fn graph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_vertices)
        .prop_flat_map(move |k| {
            let pairs = prop::collection::vec((0..k, 0..k), 1..=max_edges);
            (Just(k), pairs, 0..k)
        })
        .prop_filter_map("connected simple pairs", |(k, pairs, sink)| {
            let edges: Vec<Vec<usize>> = pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| vec![a, b])
                .collect();
            from_index_edges(k, &edges, sink).ok()
        })
}

/// Hypergraphs in which every edge contains the sink.
pub fn star(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_vertices)
        .prop_flat_map(move |k| {
            let masks = prop::collection::vec(1u32..(1 << (k - 1)), 1..=max_edges);
            (Just(k), masks)
        })
        .prop_map(|(k, masks)| {
            let sink = k - 1;
            let mut edges: Vec<Vec<usize>> = masks
                .into_iter()
                .map(|m| {
                    let mut e: Vec<usize> = (0..k - 1).filter(|i| m >> i & 1 == 1).collect();
                    e.push(sink);
                    e
                })
                .collect();
            for v in 0..sink {
                if !edges.iter().any(|e| e.contains(&v)) {
                    edges[0].insert(0, v);
                    edges[0].sort_unstable();
                }
            }
            from_index_edges(k, &edges, sink).expect("star is connected")
        })
}

/// Turns random masks into a connected hypergraph: small edges get vertex
/// 0, stray components are joined to vertex 0, and uncovered vertices join
/// the first edge.
pub fn build(k: usize, masks: Vec<u32>, sink: usize) -> Hypergraph {
    let mut edges: Vec<Vec<usize>> = masks
        .into_iter()
        .map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .collect();
    for e in edges.iter_mut() {
        if e.len() < 2 {
            let extra = if e.first() == Some(&0) { 1 } else { 0 };
            e.push(extra);
            e.sort_unstable();
            e.dedup();
        }
    }
    for v in 0..k {
        if !edges.iter().any(|e| e.contains(&v)) {
            edges[0].push(v);
            edges[0].sort_unstable();
        }
    }
    loop {
        let comp = components(k, &edges);
        match (0..edges.len()).find(|&i| comp[edges[i][0]] != comp[0]) {
            Some(i) => {
                edges[i].push(0);
                edges[i].sort_unstable();
            }
            None => break,
        }
    }
    from_index_edges(k, &edges, sink).expect("repaired hypergraph is valid")
}

fn components(k: usize, edges: &[Vec<usize>]) -> Vec<usize> {
    let mut comp: Vec<usize> = (0..k).collect();
    loop {
        let mut changed = false;
        for e in edges {
            let m = e.iter().map(|&v| comp[v]).min().expect("nonempty");
            for &v in e {
                if comp[v] != m {
                    comp[v] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            return comp;
        }
    }
}

pub fn from_index_edges(k: usize, edges: &[Vec<usize>], sink: usize) -> hyperchip::Result<Hypergraph> {
    let labels: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let edges: Vec<Vec<String>> = edges
        .iter()
        .map(|e| e.iter().map(|&v| labels[v].clone()).collect())
        .collect();
    Hypergraph::new(&labels, &edges, &labels[sink])
}

/// Sites (non-sink vertices in order) as vertex indices.
pub fn sites(h: &Hypergraph) -> Vec<usize> {
    (0..h.vertex_count()).filter(|&v| v != h.sink()).collect()
}

/// Edges through `v` that are not inside the vertex set `t`.
pub fn t_degree(h: &Hypergraph, t: &[usize], v: usize) -> u32 {
    h.edges()
        .iter()
        .filter(|e| e.contains(&v) && !e.iter().all(|w| t.contains(w)))
        .count() as u32
}

/// Every sink-free nonempty vertex set, as vertex-index lists.
pub fn sink_free_sets(h: &Hypergraph) -> Vec<Vec<usize>> {
    let s = sites(h);
    (1u64..1 << s.len())
        .map(|m| (0..s.len()).filter(|i| m >> i & 1 == 1).map(|i| s[i]).collect())
        .collect()
}

/// No nonempty sink-free set has every member at or above its set degree.
pub fn oracle_parking(h: &Hypergraph, c: &Configuration) -> bool {
    let s = sites(h);
    sink_free_sets(h).iter().all(|t| {
        t.iter().any(|&v| {
            let i = s.iter().position(|&x| x == v).unwrap();
            c.0[i] < t_degree(h, t, v)
        })
    })
}

/// All configurations with `c_i <= bound_i`.
pub fn grid(bounds: &[u32]) -> Vec<Configuration> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(Configuration).collect()
}

/// Degree box widened by one in every coordinate.
pub fn test_box(h: &Hypergraph) -> Vec<Configuration> {
    grid(&sites(h).iter().map(|&v| h.degree(v) as u32).collect::<Vec<_>>())
}

pub fn oracle_parking_set(h: &Hypergraph) -> Vec<Configuration> {
    let mut v: Vec<Configuration> = test_box(h).into_iter().filter(|c| oracle_parking(h, c)).collect();
    v.sort();
    v
}

/// Spanning trees of a multigraph by trying every (n-1)-subset of edges.
pub fn oracle_spanning_tree_count(k: usize, edges: &[(usize, usize)]) -> usize {
    if k == 1 {
        return 1;
    }
    let m = edges.len();
    (0u64..1 << m)
        .filter(|mask| mask.count_ones() as usize == k - 1)
        .filter(|mask| {
            let chosen: Vec<Vec<usize>> = (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vec![edges[i].0, edges[i].1])
                .collect();
            let comp = components(k, &chosen);
            comp.iter().all(|&c| c == comp[0])
        })
        .count()
}

/// Acyclic orientations by trying every direction of every edge.
pub fn oracle_acyclic_orientations(k: usize, edges: &[(usize, usize)]) -> usize {
    let m = edges.len();
    (0u64..1 << m)
        .filter(|mask| {
            let arcs: Vec<(usize, usize)> = (0..m)
                .map(|i| if mask >> i & 1 == 1 { edges[i] } else { (edges[i].1, edges[i].0) })
                .collect();
            let mut indeg = vec![0; k];
            for &(_, b) in &arcs {
                indeg[b] += 1;
            }
            let mut stack: Vec<usize> = (0..k).filter(|&v| indeg[v] == 0).collect();
            let mut seen = 0;
            while let Some(v) = stack.pop() {
                seen += 1;
                for &(a, b) in &arcs {
                    if a == v {
                        indeg[b] -= 1;
                        if indeg[b] == 0 {
                            stack.push(b);
                        }
                    }
                }
            }
            seen == k
        })
        .count()
}

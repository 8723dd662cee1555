//! Small named hypergraphs used throughout the tests, the CLI and the demo.

use crate::hypergraph::Hypergraph;

/// Vertices 1..4, edges 123, 124, 134, sink 4.
pub fn running_example() -> Hypergraph {
    Hypergraph::new(
        &["1", "2", "3", "4"],
        &[vec!["1", "2", "3"], vec!["1", "2", "4"], vec!["1", "3", "4"]],
        "4",
    )
    .expect("running example is valid")
}

/// Star hypergraph with edges 123q, 12q, 13q.
pub fn star_example() -> Hypergraph {
    Hypergraph::new(
        &["1", "2", "3", "q"],
        &[vec!["1", "2", "3", "q"], vec!["1", "2", "q"], vec!["1", "3", "q"]],
        "q",
    )
    .expect("star example is valid")
}

/// The single edge {1,2} with sink 2.
pub fn single_edge() -> Hypergraph {
    Hypergraph::new(&["1", "2"], &[vec!["1", "2"]], "2").expect("single edge is valid")
}

/// The complete `d`-uniform hypergraph on vertices `1..=order`, sink `order`.
pub fn complete(order: usize, d: usize) -> Hypergraph {
    use itertools::Itertools;
    let labels: Vec<String> = (1..=order).map(|i| i.to_string()).collect();
    let edges: Vec<Vec<String>> = labels.iter().cloned().combinations(d).collect();
    Hypergraph::new(&labels, &edges, &labels[order - 1]).expect("complete hypergraph is valid")
}

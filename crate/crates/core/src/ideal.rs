//! The cut ideal: one monomial per nonempty sink-free vertex set, with the
//! set's degrees as exponents. Its standard monomials are the parking
//! functions.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::{Configuration, Hypergraph, VertexSet};

/// Exponent vector over the non-sink vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("exponents serialize")
    }
}

impl From<&Configuration> for Monomial {
    fn from(c: &Configuration) -> Self {
        Monomial(c.0.clone())
    }
}

/// `x1^3*x2^1`, skipping zero exponents; the unit prints as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, e)| format!("x{}^{e}", i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// One generator per nonempty set, in subset-bitmask order.
pub fn cut_ideal_generators(h: &Hypergraph, guard: u64) -> Result<Vec<(VertexSet, Monomial)>> {
    let n = h.n();
    let count = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    if count > guard {
        return Err(Error::SizeGuard { what: "cut ideal generators", limit: guard, actual: count });
    }
    Ok(VertexSet::nonempty_subsets(n)
        .map(|t| {
            let exps = (0..n)
                .map(|i| if t.contains(i) { h.degree_in_set_unchecked(t, i) as u32 } else { 0 })
                .collect();
            (t, Monomial(exps))
        })
        .collect())
}

/// The antichain of divisibility-minimal generators, deduplicated and listed
/// from largest to smallest in lex order.
pub fn minimal_generators(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = gens
        .iter()
        .filter(|g| !gens.iter().any(|o| o != *g && o.divides(g)))
        .cloned()
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    out
}

/// No generator divides `x^c`.
pub fn is_standard_monomial(gens: &[Monomial], c: &Configuration) -> bool {
    let m = Monomial::from(c);
    !gens.iter().any(|g| g.divides(&m))
}

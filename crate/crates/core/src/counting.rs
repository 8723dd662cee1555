//! Vector parking functions, the Steck determinant, and closed-form counts
//! for complete hypergraphs and complete bipartite graphs.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::Configuration;
use crate::linalg;

/// Nondecreasing house bounds `u_1 <= ... <= u_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UVector(Vec<u32>);

impl UVector {
    pub fn new(u: Vec<u32>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidVector("empty".into()));
        }
        if u.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidVector("not nondecreasing".into()));
        }
        Ok(UVector(u))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let c = Configuration::parse_list(text).map_err(|_| Error::InvalidVector(text.to_string()))?;
        Self::new(c.0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The sorted copy of `c` sits strictly below `u` entrywise.
pub fn is_u_parking(u: &UVector, c: &Configuration) -> bool {
    if c.len() != u.len() {
        return false;
    }
    let mut sorted = c.0.clone();
    sorted.sort_unstable();
    sorted.iter().zip(&u.0).all(|(a, b)| a < b)
}

/// Houses for the complete `d`-uniform hypergraph on `n + 1` vertices.
pub fn u_vector_complete(n: usize, d: usize) -> Result<UVector> {
    if d < 2 || d > n + 1 {
        return Err(Error::InvalidVector(format!("need 2 <= d <= n + 1, got n={n}, d={d}")));
    }
    let top = binomial(n as u64, (d - 1) as u64);
    let u = (1..=n)
        .map(|k| {
            let v = if k <= n + 1 - d { top - binomial((n - k) as u64, (d - 1) as u64) } else { top };
            u32::try_from(v).map_err(|_| Error::InvalidVector("house bound overflows u32".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    UVector::new(u)
}

/// `n! det D` with `D_ij = u_i^(j-i+1) / (j-i+1)!`.
pub fn steck_count(u: &UVector) -> BigInt {
    let n = u.len();
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    let d: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j + 1 < i {
                        BigRational::zero()
                    } else {
                        let k = j + 1 - i;
                        let num = BigInt::from(u.0[i]).pow(k as u32);
                        BigRational::new(num, fact(k))
                    }
                })
                .collect()
        })
        .collect();
    let total = linalg::rational_determinant(&d) * BigRational::from_integer(fact(n));
    assert!(total.is_integer(), "Steck determinant is integral");
    total.to_integer()
}

/// Distinct permutations of `u - 1`; empty when `u_1 = 0`.
pub fn maximal_u_parking(u: &UVector) -> Vec<Configuration> {
    if u.0[0] == 0 {
        return Vec::new();
    }
    let top: Vec<u32> = u.0.iter().map(|x| x - 1).collect();
    let mut out: Vec<Configuration> = top
        .iter()
        .copied()
        .permutations(top.len())
        .unique()
        .map(Configuration)
        .collect();
    out.sort();
    out
}

/// Stirling numbers of the second kind `S(i, j)` for `i, j <= n`.
pub fn stirling2_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = BigInt::from(j) * &s[i - 1][j] + &s[i - 1][j - 1];
        }
    }
    s
}

/// Acyclic orientations of `K_{m,n}`.
pub fn acyclic_count_complete_bipartite(m: usize, n: usize) -> Result<BigInt> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidVector("both sides need at least one vertex".into()));
    }
    let s = stirling2_table(m.max(n) + 1);
    let mut total = BigInt::zero();
    let mut fact = BigInt::one();
    for (j, (a, b)) in s[m + 1].iter().zip(&s[n + 1]).enumerate().skip(1) {
        if j > 1 {
            fact *= BigInt::from(j - 1);
        }
        total += &fact * &fact * a * b;
    }
    Ok(total)
}

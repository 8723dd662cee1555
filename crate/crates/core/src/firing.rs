//! Chip-firing on hypergraphs: firing choices, cancellative set-firing and
//! superstability.
//!
//! A fired vertex sends one chip into each incident edge; the firing choice
//! says which other member of the edge receives it. Chips sent to the sink
//! leave the system.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Configuration, Hypergraph, VertexSet};

/// Chip counts on the sites that may have gone negative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChipVector(pub Vec<i64>);

impl ChipVector {
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn to_configuration(&self) -> Option<Configuration> {
        self.0
            .iter()
            .map(|&x| u32::try_from(x).ok())
            .collect::<Option<Vec<_>>>()
            .map(Configuration)
    }
}

impl From<&Configuration> for ChipVector {
    fn from(c: &Configuration) -> Self {
        ChipVector(c.0.iter().map(|&x| i64::from(x)).collect())
    }
}

impl std::fmt::Display for ChipVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Receiving vertex for each edge incident to the fired vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiringChoice {
    vertex: usize,
    targets: BTreeMap<usize, usize>,
}

impl FiringChoice {
    /// `targets` maps edge index to vertex index; it must cover exactly the
    /// edges containing `vertex`, never pointing back at `vertex`.
    pub fn new(h: &Hypergraph, vertex: usize, targets: BTreeMap<usize, usize>) -> Result<Self> {
        if vertex == h.sink() {
            return Err(Error::SinkNotAllowed);
        }
        let incident: Vec<usize> = h.incident_edges(vertex).collect();
        let keys: Vec<usize> = targets.keys().copied().collect();
        if keys != incident {
            return Err(Error::InvalidChoice(format!(
                "vertex {} lies in edges {:?} but the choice covers {:?}",
                h.label(vertex),
                incident,
                keys
            )));
        }
        for (&e, &w) in &targets {
            if w == vertex || !h.edge(e).contains(&w) {
                return Err(Error::InvalidChoice(format!(
                    "edge {e} cannot pass the chip of {} to {}",
                    h.label(vertex),
                    h.labels().get(w).map_or("?", String::as_str)
                )));
            }
        }
        Ok(FiringChoice { vertex, targets })
    }

    /// Parses maps from edge to receiving vertex label. Edge keys are either
    /// names `e1, e2, ...` (counting from 1) or bare indices counting from 0.
    pub fn from_labels(h: &Hypergraph, vertex: &str, targets: &BTreeMap<String, String>) -> Result<Self> {
        let v = h.vertex_index(vertex)?;
        let mut map = BTreeMap::new();
        for (key, w) in targets {
            let bad = || Error::InvalidChoice(format!("edge key {key:?} is neither eK nor an index"));
            let e = match key.strip_prefix('e') {
                Some(k) => k.parse::<usize>().ok().and_then(|k| k.checked_sub(1)).ok_or_else(bad)?,
                None => key.parse::<usize>().map_err(|_| bad())?,
            };
            map.insert(e, h.vertex_index(w)?);
        }
        Self::new(h, v, map)
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn target(&self, edge: usize) -> Option<usize> {
        self.targets.get(&edge).copied()
    }

    pub fn targets(&self) -> &BTreeMap<usize, usize> {
        &self.targets
    }
}

/// One firing choice per member of a vertex set, keyed by vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetFiringChoice {
    pub choices: BTreeMap<usize, FiringChoice>,
}

impl SetFiringChoice {
    pub fn new(h: &Hypergraph, set: VertexSet, choices: Vec<FiringChoice>) -> Result<Self> {
        let map: BTreeMap<usize, FiringChoice> = choices.into_iter().map(|c| (c.vertex, c)).collect();
        let want: Vec<usize> = set.sites().map(|s| h.site_vertex(s)).collect();
        if map.keys().copied().collect::<Vec<_>>() != want {
            return Err(Error::InvalidChoice("choices must cover the fired set exactly".into()));
        }
        Ok(SetFiringChoice { choices: map })
    }

    pub fn set(&self, h: &Hypergraph) -> VertexSet {
        VertexSet::from_sites(self.choices.keys().filter_map(|&v| h.site_of(v)))
    }
}

fn apply(h: &Hypergraph, c: &mut ChipVector, choice: &FiringChoice) {
    let site = h.site_of(choice.vertex).expect("choice is for a non-sink vertex");
    c.0[site] -= choice.targets.len() as i64;
    for &w in choice.targets.values() {
        if let Some(s) = h.site_of(w) {
            c.0[s] += 1;
        }
    }
}

/// Fires one vertex; the result may be negative.
pub fn fire_vertex(h: &Hypergraph, c: &ChipVector, choice: &FiringChoice) -> Result<ChipVector> {
    if c.0.len() != h.n() {
        return Err(Error::LengthMismatch { expected: h.n(), actual: c.0.len() });
    }
    let mut out = c.clone();
    apply(h, &mut out, choice);
    Ok(out)
}

/// For every edge inside `set`, the members' targets form a fixed-point-free
/// permutation of the edge.
pub fn is_cancellative(h: &Hypergraph, set: VertexSet, choices: &SetFiringChoice) -> bool {
    first_non_cancellative(h, set, choices).is_none()
}

fn first_non_cancellative(h: &Hypergraph, set: VertexSet, choices: &SetFiringChoice) -> Option<usize> {
    (0..h.edge_count()).filter(|&e| h.edge_within(e, set)).find(|&e| {
        let mut hit: Vec<usize> = h
            .edge(e)
            .iter()
            .filter_map(|v| choices.choices.get(v).and_then(|c| c.target(e)))
            .collect();
        hit.sort_unstable();
        let mut members = h.edge(e).to_vec();
        members.sort_unstable();
        hit != members
    })
}

/// Fires every member of `set` at once under cancellative choices.
pub fn fire_set(h: &Hypergraph, c: &ChipVector, set: VertexSet, choices: &SetFiringChoice) -> Result<ChipVector> {
    if c.0.len() != h.n() {
        return Err(Error::LengthMismatch { expected: h.n(), actual: c.0.len() });
    }
    if choices.set(h) != set || choices.choices.len() != set.len() {
        return Err(Error::InvalidChoice("choices must cover the fired set exactly".into()));
    }
    if let Some(e) = first_non_cancellative(h, set, choices) {
        return Err(Error::NotCancellative(e));
    }
    let mut out = c.clone();
    for choice in choices.choices.values() {
        apply(h, &mut out, choice);
    }
    Ok(out)
}

/// `deg_T(i) <= c_i` for every `i` in `set`.
pub fn ready_to_fire(h: &Hypergraph, c: &Configuration, set: VertexSet) -> bool {
    !set.is_empty() && crate::parking::is_bounded(h, c, set)
}

/// A cancellative choice for `set` that leaves `site` with exactly
/// `c_site - deg_T(site)` chips: whole edges rotate, and every other edge
/// routes its chips away from `site`.
pub fn draining_choice(h: &Hypergraph, set: VertexSet, site: usize) -> Result<SetFiringChoice> {
    if !set.contains(site) {
        return Err(Error::NotInSet(h.site_label(site).to_string()));
    }
    let mut per_vertex: BTreeMap<usize, BTreeMap<usize, usize>> =
        set.sites().map(|s| (h.site_vertex(s), BTreeMap::new())).collect();
    for (e, members) in h.edges().iter().enumerate() {
        if h.edge_within(e, set) {
            for (k, &v) in members.iter().enumerate() {
                let w = members[(k + 1) % members.len()];
                per_vertex.get_mut(&v).expect("member of fired set").insert(e, w);
            }
        } else {
            let outside = *members
                .iter()
                .find(|&&w| h.site_of(w).is_none_or(|s| !set.contains(s)))
                .expect("edge leaves the set");
            for &v in members {
                if let Some(map) = per_vertex.get_mut(&v) {
                    map.insert(e, outside);
                }
            }
        }
    }
    let choices = per_vertex
        .into_iter()
        .map(|(v, t)| FiringChoice::new(h, v, t))
        .collect::<Result<Vec<_>>>()?;
    SetFiringChoice::new(h, set, choices)
}

/// Fixed-point-free permutations of `0..k`, as images.
fn derangements(k: usize) -> Vec<Vec<usize>> {
    (0..k)
        .permutations(k)
        .filter(|p| p.iter().enumerate().all(|(i, &x)| i != x))
        .collect()
}

/// Options for a single edge: a list of `(firer, target)` assignments.
fn edge_options(h: &Hypergraph, set: VertexSet, e: usize) -> Vec<Vec<(usize, usize)>> {
    let members = h.edge(e);
    if h.edge_within(e, set) {
        derangements(members.len())
            .into_iter()
            .map(|p| p.iter().enumerate().map(|(i, &j)| (members[i], members[j])).collect())
            .collect()
    } else {
        let firers: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&v| h.site_of(v).is_some_and(|s| set.contains(s)))
            .collect();
        firers
            .iter()
            .map(|&v| members.iter().copied().filter(move |&w| w != v).map(move |w| (v, w)))
            .multi_cartesian_product()
            .collect()
    }
}

fn choice_space(h: &Hypergraph, set: VertexSet) -> Vec<Vec<Vec<(usize, usize)>>> {
    (0..h.edge_count())
        .map(|e| edge_options(h, set, e))
        .filter(|opts| !(opts.len() == 1 && opts[0].is_empty()))
        .collect()
}

/// Number of cancellative set-firing choices for `set`.
pub fn cancellative_choice_count(h: &Hypergraph, set: VertexSet) -> u64 {
    choice_space(h, set)
        .iter()
        .fold(1u64, |acc, o| acc.saturating_mul(o.len() as u64))
}

/// Searches all cancellative choices for one that drives some site negative.
/// Targets are tried in vertex input order.
pub fn find_negative_firing(
    h: &Hypergraph,
    c: &Configuration,
    set: VertexSet,
    guard: u64,
) -> Result<Option<(SetFiringChoice, ChipVector)>> {
    let count = cancellative_choice_count(h, set);
    if count > guard {
        return Err(Error::SizeGuard { what: "cancellative choice enumeration", limit: guard, actual: count });
    }
    let space = choice_space(h, set);
    let start = ChipVector::from(c);
    for pick in space.iter().map(|o| o.iter()).multi_cartesian_product() {
        let mut out = start.clone();
        for &(v, w) in pick.iter().flat_map(|a| a.iter()) {
            out.0[h.site_of(v).expect("firer is a site")] -= 1;
            if let Some(s) = h.site_of(w) {
                out.0[s] += 1;
            }
        }
        if !out.is_nonnegative() {
            let mut per_vertex: BTreeMap<usize, BTreeMap<usize, usize>> =
                set.sites().map(|s| (h.site_vertex(s), BTreeMap::new())).collect();
            for (e, assignment) in (0..h.edge_count()).filter(|&e| edge_touches(h, set, e)).zip(&pick) {
                for &(v, w) in assignment.iter() {
                    per_vertex.get_mut(&v).expect("firer in set").insert(e, w);
                }
            }
            let choices = per_vertex
                .into_iter()
                .map(|(v, t)| FiringChoice::new(h, v, t))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Some((SetFiringChoice::new(h, set, choices)?, out)));
        }
    }
    Ok(None)
}

fn edge_touches(h: &Hypergraph, set: VertexSet, e: usize) -> bool {
    !(h.edge_sites(e).bits() & set.bits() == 0)
}

/// Ready to fire by exhaustion: every cancellative choice stays nonnegative.
pub fn ready_to_fire_oracle(h: &Hypergraph, c: &Configuration, set: VertexSet, guard: u64) -> Result<bool> {
    if set.is_empty() {
        return Ok(false);
    }
    Ok(find_negative_firing(h, c, set, guard)?.is_none())
}

/// No nonempty set of sites is ready to fire.
pub fn is_superstable(h: &Hypergraph, c: &Configuration) -> bool {
    VertexSet::nonempty_subsets(h.n()).all(|t| !ready_to_fire(h, c, t))
}

/// A step of a firing script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiringStep {
    Vertex {
        vertex: String,
        choice: BTreeMap<String, String>,
    },
    Set {
        set: Vec<String>,
        choices: BTreeMap<String, BTreeMap<String, String>>,
    },
}

/// Runs a script, returning the configuration after every step.
pub fn run_script(h: &Hypergraph, start: &Configuration, steps: &[FiringStep]) -> Result<Vec<ChipVector>> {
    h.check_config(start)?;
    let mut cur = ChipVector::from(start);
    let mut trail = Vec::with_capacity(steps.len());
    for step in steps {
        cur = match step {
            FiringStep::Vertex { vertex, choice } => {
                fire_vertex(h, &cur, &FiringChoice::from_labels(h, vertex, choice)?)?
            }
            FiringStep::Set { set, choices } => {
                let t = h.parse_set(&set.join(","))?;
                let list = choices
                    .iter()
                    .map(|(v, m)| FiringChoice::from_labels(h, v, m))
                    .collect::<Result<Vec<_>>>()?;
                fire_set(h, &cur, t, &SetFiringChoice::new(h, t, list)?)?
            }
        };
        trail.push(cur.clone());
    }
    Ok(trail)
}

pub fn parse_script(text: &str) -> Result<Vec<FiringStep>> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;

    fn choice(h: &Hypergraph, v: &str, pairs: &[(usize, &str)]) -> FiringChoice {
        let map = pairs.iter().map(|&(e, w)| (e.to_string(), w.to_string())).collect();
        FiringChoice::from_labels(h, v, &map).unwrap()
    }

    fn cv(v: &[i64]) -> ChipVector {
        ChipVector(v.to_vec())
    }

    /// The two cancellative choices on T = {1,2,3} from the worked example.
    fn example_choices(h: &Hypergraph) -> (SetFiringChoice, SetFiringChoice) {
        let t = h.parse_set("1,2,3").unwrap();
        let first = SetFiringChoice::new(
            h,
            t,
            vec![
                choice(h, "1", &[(0, "2"), (1, "2"), (2, "3")]),
                choice(h, "2", &[(0, "3"), (1, "4")]),
                choice(h, "3", &[(0, "1"), (2, "4")]),
            ],
        )
        .unwrap();
        let second = SetFiringChoice::new(
            h,
            t,
            vec![
                choice(h, "1", &[(0, "2"), (1, "4"), (2, "4")]),
                choice(h, "2", &[(0, "3"), (1, "4")]),
                choice(h, "3", &[(0, "1"), (2, "1")]),
            ],
        )
        .unwrap();
        (first, second)
    }

    #[test]
    fn single_vertex_firings() {
        let h = running_example();
        let c = cv(&[1, 2, 0]);
        assert_eq!(fire_vertex(&h, &c, &choice(&h, "2", &[(0, "3"), (1, "4")])).unwrap(), cv(&[1, 0, 1]));
        assert_eq!(fire_vertex(&h, &c, &choice(&h, "2", &[(0, "1"), (1, "1")])).unwrap(), cv(&[3, 0, 0]));
        let c = cv(&[3, 0, 0]);
        let out = fire_vertex(&h, &c, &choice(&h, "1", &[(0, "2"), (1, "4"), (2, "3")])).unwrap();
        assert_eq!(out.0[0], 0);
    }

    #[test]
    fn malformed_choices() {
        let h = running_example();
        let mut map = BTreeMap::new();
        map.insert("0".to_string(), "3".to_string());
        assert!(FiringChoice::from_labels(&h, "2", &map).is_err()); // misses edge 1
        map.insert("1".to_string(), "2".to_string());
        assert!(FiringChoice::from_labels(&h, "2", &map).is_err()); // sends to itself
        map.insert("1".to_string(), "3".to_string());
        assert!(FiringChoice::from_labels(&h, "2", &map).is_err()); // 3 not in edge 1
        assert_eq!(FiringChoice::from_labels(&h, "4", &BTreeMap::new()), Err(Error::SinkNotAllowed));
        let named: BTreeMap<String, String> = [("e1", "3"), ("e2", "4")].map(|(a, b)| (a.to_string(), b.to_string())).into();
        assert_eq!(FiringChoice::from_labels(&h, "2", &named).unwrap(), choice(&h, "2", &[(0, "3"), (1, "4")]));
        let zero: BTreeMap<String, String> = [("e0", "3"), ("e2", "4")].map(|(a, b)| (a.to_string(), b.to_string())).into();
        assert!(matches!(FiringChoice::from_labels(&h, "2", &zero), Err(Error::InvalidChoice(_))));
    }

    #[test]
    fn cancellative_examples() {
        let h = running_example();
        let t = h.parse_set("1,2,3").unwrap();
        let (first, second) = example_choices(&h);
        assert!(is_cancellative(&h, t, &first));
        assert!(is_cancellative(&h, t, &second));
        // e1 map 1->2, 2->1, 3->1
        let bad = SetFiringChoice::new(
            &h,
            t,
            vec![
                choice(&h, "1", &[(0, "2"), (1, "2"), (2, "3")]),
                choice(&h, "2", &[(0, "1"), (1, "4")]),
                choice(&h, "3", &[(0, "1"), (2, "4")]),
            ],
        )
        .unwrap();
        assert!(!is_cancellative(&h, t, &bad));
        assert_eq!(fire_set(&h, &cv(&[2, 1, 0]), t, &bad), Err(Error::NotCancellative(0)));
        // {1,2} contains no whole edge
        let t12 = h.parse_set("1,2").unwrap();
        let free = SetFiringChoice::new(
            &h,
            t12,
            vec![choice(&h, "1", &[(0, "2"), (1, "2"), (2, "3")]), choice(&h, "2", &[(0, "1"), (1, "1")])],
        )
        .unwrap();
        assert!(is_cancellative(&h, t12, &free));
    }

    #[test]
    fn set_firing_examples() {
        let h = running_example();
        let t = h.parse_set("1,2,3").unwrap();
        let (first, second) = example_choices(&h);
        let c = cv(&[2, 1, 0]);
        assert_eq!(fire_set(&h, &c, t, &first).unwrap(), cv(&[0, 1, 0]));
        assert_eq!(fire_set(&h, &c, t, &second).unwrap(), cv(&[1, 0, -1]));

        let single = choice(&h, "2", &[(0, "3"), (1, "4")]);
        let t2 = h.parse_set("2").unwrap();
        let as_set = SetFiringChoice::new(&h, t2, vec![single.clone()]).unwrap();
        let c = cv(&[1, 2, 0]);
        assert_eq!(fire_set(&h, &c, t2, &as_set).unwrap(), fire_vertex(&h, &c, &single).unwrap());
    }

    #[test]
    fn readiness_examples() {
        let h = running_example();
        let t = h.parse_set("1,2,3").unwrap();
        let c210 = Configuration(vec![2, 1, 0]);
        let c211 = Configuration(vec![2, 1, 1]);
        assert!(!ready_to_fire(&h, &c210, t));
        assert!(ready_to_fire(&h, &c211, t));
        assert!(!ready_to_fire_oracle(&h, &c210, t, 1 << 20).unwrap());
        assert!(ready_to_fire_oracle(&h, &c211, t, 1 << 20).unwrap());
        let degrees = Configuration(h.site_degrees());
        for s in 0..h.n() {
            assert!(ready_to_fire(&h, &degrees, VertexSet::singleton(s)));
            assert!(ready_to_fire_oracle(&h, &degrees, VertexSet::singleton(s), 1 << 20).unwrap());
        }
    }

    #[test]
    fn superstable_examples() {
        let h = running_example();
        assert!(is_superstable(&h, &Configuration(vec![2, 1, 0])));
        assert!(!is_superstable(&h, &Configuration(vec![2, 1, 1])));
        assert!(is_superstable(&h, &Configuration(vec![0, 0, 0])));
    }

    #[test]
    fn draining_choice_reaches_the_bound() {
        let h = running_example();
        let c = Configuration(vec![2, 1, 0]);
        let start = ChipVector::from(&c);
        for t in VertexSet::nonempty_subsets(h.n()) {
            for s in t.sites() {
                let ch = draining_choice(&h, t, s).unwrap();
                let out = fire_set(&h, &start, t, &ch).unwrap();
                let expect = i64::from(c.0[s]) - h.degree_in_set(t, s).unwrap() as i64;
                assert_eq!(out.0[s], expect);
            }
        }
    }

    #[test]
    fn script_runs() {
        let h = running_example();
        let steps = parse_script(r#"[{"vertex":"2","choice":{"0":"3","1":"4"}}]"#).unwrap();
        let trail = run_script(&h, &Configuration(vec![1, 2, 0]), &steps).unwrap();
        assert_eq!(trail, vec![cv(&[1, 0, 1])]);
        let steps = parse_script(
            r#"[{"set":["1","2","3"],"choices":{"1":{"0":"2","1":"4","2":"4"},"2":{"0":"3","1":"4"},"3":{"0":"1","2":"1"}}}]"#,
        )
        .unwrap();
        let trail = run_script(&h, &Configuration(vec![2, 1, 0]), &steps).unwrap();
        assert_eq!(trail, vec![cv(&[1, 0, -1])]);
    }
}

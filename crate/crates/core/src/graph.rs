//! Weighted conflict graphs over one-hop wireless links.
//!
//! Node `k` is link `l_k`, its weight is the link's queue backlog, and an
//! edge `{i, j}` means the two links interfere. Edges are stored once, as
//! `(i, j)` with `i < j`, sorted.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    weights: Vec<u64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl ConflictGraph {
    /// Builds a graph, canonicalising each edge to `(min, max)`.
    ///
    /// Rejects zero weights, self-edges, duplicate edges and out-of-range
    /// endpoints.
    pub fn new(weights: Vec<u64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if let Some(k) = weights.iter().position(|&w| w == 0) {
            return Err(Error::Parse(format!("weight of node {k} must be a positive integer, got 0")));
        }
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Parse(format!("edge [{a},{b}] references a node >= n = {n}")));
            }
            if a == b {
                return Err(Error::Parse(format!("self-edge [{a},{b}]")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::Parse(format!("duplicate edge [{},{}]", e.0, e.1)));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { weights, edges, adjacency })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Canonical edge list: `i < j`, lexicographically sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Nodes adjacent to `i`, ascending.
    pub fn neighbors(&self, i: usize) -> Result<&[usize]> {
        self.adjacency
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange { index: i, n: self.n() })
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i).is_some_and(|l| l.binary_search(&j).is_ok())
    }

    /// Parses the JSON graph file format.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawGraph =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed graph file: {e}")))?;
        if raw.n < 0 {
            return Err(Error::Parse(format!("n must be non-negative, got {}", raw.n)));
        }
        let n = raw.n as usize;
        if raw.weights.len() != n {
            return Err(Error::Parse(format!(
                "weights has {} entries but n = {n}",
                raw.weights.len()
            )));
        }
        let mut weights = Vec::with_capacity(n);
        for (k, &w) in raw.weights.iter().enumerate() {
            if w < 1 {
                return Err(Error::Parse(format!("weight of node {k} must be a positive integer, got {w}")));
            }
            weights.push(w as u64);
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in &raw.edges {
            let [a, b] = e.as_slice() else {
                return Err(Error::Parse(format!("edge {e:?} must have exactly two endpoints")));
            };
            if *a < 0 || *b < 0 {
                return Err(Error::Parse(format!("edge [{a},{b}] has a negative index")));
            }
            edges.push((*a as usize, *b as usize));
        }
        Self::new(weights, edges)
    }

    /// Serialises to the canonical JSON graph file format.
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            n: self.n(),
            weights: &self.weights,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialisation cannot fail")
    }
}

#[derive(Deserialize)]
struct RawGraph {
    n: i64,
    weights: Vec<i64>,
    edges: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct GraphFile<'a> {
    n: usize,
    weights: &'a [u64],
    edges: Vec<[usize; 2]>,
}

/// Parameters of the Erdős–Rényi style instance generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphGenConfig {
    pub n: usize,
    pub edge_prob: f64,
    pub weight_min: u64,
    pub weight_max: u64,
    pub seed: u64,
}

impl Default for GraphGenConfig {
    fn default() -> Self {
        Self { n: 10, edge_prob: 0.3, weight_min: 1, weight_max: 10, seed: 0 }
    }
}

impl GraphGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config("graph n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.edge_prob) {
            return Err(Error::Config(format!("edge_prob must lie in [0, 1], got {}", self.edge_prob)));
        }
        if self.weight_min < 1 || self.weight_min > self.weight_max {
            return Err(Error::Config(format!(
                "weight bounds must satisfy 1 <= weight_min <= weight_max, got [{}, {}]",
                self.weight_min, self.weight_max
            )));
        }
        Ok(())
    }
}

/// Draws a random conflict graph: each pair independently an edge with
/// probability `edge_prob`, weights uniform on `[weight_min, weight_max]`.
pub fn generate_random_graph(cfg: &GraphGenConfig) -> Result<ConflictGraph> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let weights: Vec<u64> = (0..cfg.n).map(|_| rng.random_range(cfg.weight_min..=cfg.weight_max)).collect();
    let mut edges = Vec::new();
    for i in 0..cfg.n {
        for j in i + 1..cfg.n {
            if rng.random_bool(cfg.edge_prob) {
                edges.push((i, j));
            }
        }
    }
    ConflictGraph::new(weights, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, edge_prob: f64, seed: u64) -> GraphGenConfig {
        GraphGenConfig { n, edge_prob, seed, ..Default::default() }
    }

    #[test]
    fn extreme_edge_probabilities() {
        let g = generate_random_graph(&cfg(10, 0.0, 3)).unwrap();
        assert_eq!(g.edges().len(), 0);
        let g = generate_random_graph(&cfg(10, 1.0, 3)).unwrap();
        assert_eq!(g.edges().len(), 45);
    }

    #[test]
    fn mean_edge_count_matches_binomial() {
        let seeds = 2000u64;
        let total: usize =
            (0..seeds).map(|s| generate_random_graph(&cfg(10, 0.3, s)).unwrap().edges().len()).sum();
        let mean = total as f64 / seeds as f64;
        // Binomial(45, 0.3): mean 13.5, sd 3.07; standard error over 2000 draws ~0.069.
        assert!((mean - 13.5).abs() < 1.0, "mean edge count {mean}");
        assert!((mean - 13.5).abs() < 3.0 * (45.0 * 0.3 * 0.7 / seeds as f64).sqrt());
    }

    #[test]
    fn generation_is_deterministic_and_in_bounds() {
        let c = GraphGenConfig { n: 12, edge_prob: 0.4, weight_min: 3, weight_max: 7, seed: 99 };
        let a = generate_random_graph(&c).unwrap();
        assert_eq!(a, generate_random_graph(&c).unwrap());
        assert_eq!(a.weights().len(), 12);
        assert!(a.weights().iter().all(|w| (3..=7).contains(w)));
        assert!(a.edges().iter().all(|&(i, j)| i < j));
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(generate_random_graph(&cfg(0, 0.3, 0)).is_err());
        assert!(generate_random_graph(&cfg(4, 1.5, 0)).is_err());
        let c = GraphGenConfig { weight_min: 5, weight_max: 2, ..Default::default() };
        assert!(matches!(generate_random_graph(&c), Err(Error::Config(_))));
        let c = GraphGenConfig { weight_min: 0, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn neighbor_queries() {
        let path = ConflictGraph::new(vec![1, 1, 1], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.neighbors(1).unwrap(), &[0, 2]);
        let empty = ConflictGraph::new(vec![1; 4], []).unwrap();
        assert!(empty.neighbors(3).unwrap().is_empty());
        let k4 = ConflictGraph::new(vec![1; 4], [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.neighbors(2).unwrap(), &[0, 1, 3]);
        assert!(matches!(k4.neighbors(4), Err(Error::IndexOutOfRange { index: 4, n: 4 })));
    }

    #[test]
    fn json_round_trip() {
        let g = generate_random_graph(&cfg(8, 0.5, 7)).unwrap();
        let text = g.to_json();
        let back = ConflictGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn reversed_edges_are_canonicalised() {
        let g = ConflictGraph::from_json(r#"{"n":3,"weights":[1,2,3],"edges":[[2,0],[1,0]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn malformed_files_name_the_problem() {
        let err = |s: &str| ConflictGraph::from_json(s).unwrap_err().to_string();
        assert!(err(r#"{"n":4,"weights":[1,1,1,1],"edges":[[3,3]]}"#).contains("self-edge [3,3]"));
        assert!(err(r#"{"n":2,"weights":[1,0],"edges":[]}"#).contains("weight of node 1"));
        assert!(err(r#"{"n":2,"weights":[1,-4],"edges":[]}"#).contains("weight of node 1"));
        assert!(err(r#"{"n":3,"weights":[1,1,1],"edges":[[0,1],[1,0]]}"#).contains("duplicate edge [0,1]"));
        assert!(err(r#"{"n":3,"weights":[1,1,1],"edges":[[0,3]]}"#).contains("[0,3]"));
        assert!(err(r#"{"n":3,"weights":[1,1],"edges":[]}"#).contains("weights has 2"));
        assert!(err(r#"{"n":3,"weights":[1,1,1],"edges":[[0,1,2]]}"#).contains("two endpoints"));
        assert!(err("not json").contains("malformed"));
    }
}

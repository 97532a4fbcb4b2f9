//! Graph representation, text serialization, and exact sequential oracles.
//!
//! All distances are integers; unreachable is the distinguished [`Dist::Inf`]
//! sentinel, never a large number. Weights are positive integers and default
//! to 1 on unweighted graphs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = usize;
pub type Weight = u64;

/// A hop or weighted distance; `Inf` compares greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dist {
    Finite(u64),
    Inf,
}

impl Dist {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Dist::Inf)
    }

    /// Panics on `Inf`; for contexts where finiteness was already checked.
    pub fn expect_finite(self) -> u64 {
        self.finite().expect("distance unexpectedly infinite")
    }
}

impl Add<Weight> for Dist {
    type Output = Dist;

    fn add(self, w: Weight) -> Dist {
        match self {
            Dist::Finite(d) => Dist::Finite(d + w),
            Dist::Inf => Dist::Inf,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Distances from the source along arc direction.
    Outward,
    /// Distances to the source along arc direction.
    Inward,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node {node} out of range for graph of {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("self loop at node {0} not allowed")]
    SelfLoop(NodeId),
    #[error("duplicate edge between {u} and {v}")]
    DuplicateEdge { u: NodeId, v: NodeId },
    #[error("edge weight must be a positive integer, got {0}")]
    BadWeight(Weight),
    #[error("unweighted graph must have all weights equal to 1")]
    WeightOnUnweighted,
    #[error("graph must have at least one node")]
    Empty,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid S/T partition: {0}")]
    InvalidPartition(String),
    #[error("{0}")]
    Unsupported(String),
}

/// A simple graph (no self loops, no parallel edges), directed or not,
/// weighted or not. Undirected edges are stored once in canonical
/// `(min, max)` order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    directed: bool,
    weighted: bool,
    edges: Vec<(NodeId, NodeId, Weight)>,
    #[serde(skip)]
    out_adj: Vec<Vec<(NodeId, Weight)>>,
    #[serde(skip)]
    in_adj: Vec<Vec<(NodeId, Weight)>>,
}

impl Graph {
    pub fn new(
        n: usize,
        directed: bool,
        weighted: bool,
        edges: &[(NodeId, NodeId, Weight)],
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w == 0 {
                return Err(GraphError::BadWeight(w));
            }
            if !weighted && w != 1 {
                return Err(GraphError::WeightOnUnweighted);
            }
            let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            canon.push(if directed { (u, v, w) } else { (key.0, key.1, w) });
        }
        canon.sort_unstable();
        let mut g = Graph {
            n,
            directed,
            weighted,
            edges: canon,
            out_adj: Vec::new(),
            in_adj: Vec::new(),
        };
        g.rebuild_adjacency();
        Ok(g)
    }

    pub fn undirected(n: usize, edges: &[(NodeId, NodeId, Weight)]) -> Result<Self, GraphError> {
        Self::new(n, false, true, edges)
    }

    pub fn directed(n: usize, edges: &[(NodeId, NodeId, Weight)]) -> Result<Self, GraphError> {
        Self::new(n, true, true, edges)
    }

    pub fn unweighted_undirected(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::new(n, false, false, &e)
    }

    pub fn unweighted_directed(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::new(n, true, false, &e)
    }

    fn rebuild_adjacency(&mut self) {
        self.out_adj = vec![Vec::new(); self.n];
        self.in_adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            self.out_adj[u].push((v, w));
            self.in_adj[v].push((u, w));
            if !self.directed {
                self.out_adj[v].push((u, w));
                self.in_adj[u].push((v, w));
            }
        }
        for adj in self.out_adj.iter_mut().chain(self.in_adj.iter_mut()) {
            adj.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// Canonical edge list: arcs for directed graphs, each undirected edge once.
    pub fn edges(&self) -> &[(NodeId, NodeId, Weight)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of arcs (undirected edges count twice).
    pub fn arc_count(&self) -> usize {
        if self.directed {
            self.edges.len()
        } else {
            2 * self.edges.len()
        }
    }

    pub fn out(&self, u: NodeId) -> &[(NodeId, Weight)] {
        &self.out_adj[u]
    }

    pub fn inc(&self, u: NodeId) -> &[(NodeId, Weight)] {
        &self.in_adj[u]
    }

    pub fn max_weight(&self) -> Weight {
        self.edges.iter().map(|&(_, _, w)| w).max().unwrap_or(1).max(1)
    }

    /// Serializes to the text format:
    /// header `n m directed weighted`, then one `u v [w]` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {}\n",
            self.n,
            self.edges.len(),
            self.directed as u8,
            self.weighted as u8
        );
        for &(u, v, w) in &self.edges {
            if self.weighted {
                s.push_str(&format!("{u} {v} {w}\n"));
            } else {
                s.push_str(&format!("{u} {v}\n"));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(GraphError::Parse {
                line,
                msg: "header must be `n m directed weighted`".into(),
            });
        }
        let field = |ix: usize, name: &str| -> Result<u64, GraphError> {
            parts[ix].parse().map_err(|_| GraphError::Parse {
                line,
                msg: format!("bad {name}: {}", parts[ix]),
            })
        };
        let n = field(0, "n")? as usize;
        let m = field(1, "m")? as usize;
        let directed = match field(2, "directed")? {
            0 => false,
            1 => true,
            x => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("directed flag must be 0 or 1, got {x}"),
                })
            }
        };
        let weighted = match field(3, "weighted")? {
            0 => false,
            1 => true,
            x => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("weighted flag must be 0 or 1, got {x}"),
                })
            }
        };
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, text) = lines.next().ok_or(GraphError::Parse {
                line: 0,
                msg: format!("expected {m} edge lines"),
            })?;
            let parts: Vec<&str> = text.split_whitespace().collect();
            let want = if weighted { 3 } else { 2 };
            if parts.len() != want {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("expected {want} fields, got {}", parts.len()),
                });
            }
            let mut nums = Vec::with_capacity(3);
            for p in &parts {
                nums.push(p.parse::<u64>().map_err(|_| GraphError::Parse {
                    line,
                    msg: format!("bad number: {p}"),
                })?);
            }
            let w = if weighted { nums[2] } else { 1 };
            edges.push((nums[0] as usize, nums[1] as usize, w));
        }
        if let Some((line, _)) = lines.next() {
            return Err(GraphError::Parse {
                line,
                msg: "trailing content after edge list".into(),
            });
        }
        Graph::new(n, directed, weighted, &edges)
    }
}

/// Distance vector from (or to) one source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceVector {
    pub source: NodeId,
    pub direction: Direction,
    pub dist: Vec<Dist>,
}

/// Dijkstra (or BFS on unweighted graphs) from `source`.
pub fn sssp_exact(g: &Graph, source: NodeId, direction: Direction) -> Result<DistanceVector, GraphError> {
    if source >= g.n() {
        return Err(GraphError::NodeOutOfRange { node: source, n: g.n() });
    }
    let adj = |u: NodeId| match direction {
        Direction::Outward => g.out(u),
        Direction::Inward => g.inc(u),
    };
    let mut dist = vec![Dist::Inf; g.n()];
    dist[source] = Dist::Finite(0);
    if g.is_weighted() {
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Dist::Finite(d) {
                continue;
            }
            for &(v, w) in adj(u) {
                let cand = d + w;
                if Dist::Finite(cand) < dist[v] {
                    dist[v] = Dist::Finite(cand);
                    heap.push(Reverse((cand, v)));
                }
            }
        }
    } else {
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect_finite();
            for &(v, _) in adj(u) {
                if dist[v].is_inf() {
                    dist[v] = Dist::Finite(du + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(DistanceVector { source, direction, dist })
}

/// ecc(u) = max over v of d(u, v); `Inf` when some node is unreachable.
pub fn all_eccentricities(g: &Graph) -> Vec<Dist> {
    (0..g.n())
        .map(|u| {
            let dv = sssp_exact(g, u, Direction::Outward).expect("source in range");
            dv.dist.into_iter().max().unwrap_or(Dist::Finite(0))
        })
        .collect()
}

pub fn diameter(g: &Graph) -> Dist {
    all_eccentricities(g).into_iter().max().unwrap_or(Dist::Finite(0))
}

pub fn radius(g: &Graph) -> Dist {
    all_eccentricities(g).into_iter().min().unwrap_or(Dist::Finite(0))
}

/// Source/target node sets for ST and bi-chromatic parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StPartition {
    n: usize,
    s_nodes: Vec<NodeId>,
    t_nodes: Vec<NodeId>,
    in_s: Vec<bool>,
    in_t: Vec<bool>,
}

impl StPartition {
    pub fn new(n: usize, s: &[NodeId], t: &[NodeId]) -> Result<Self, GraphError> {
        if s.is_empty() || t.is_empty() {
            return Err(GraphError::InvalidPartition("S and T must be non-empty".into()));
        }
        let mut in_s = vec![false; n];
        let mut in_t = vec![false; n];
        for (&set, name) in [(&s, "S"), (&t, "T")].iter().map(|&(a, b)| (a, b)) {
            for &v in set.iter() {
                if v >= n {
                    return Err(GraphError::NodeOutOfRange { node: v, n });
                }
                let slot = if name == "S" { &mut in_s } else { &mut in_t };
                if slot[v] {
                    return Err(GraphError::InvalidPartition(format!("node {v} repeated in {name}")));
                }
                slot[v] = true;
            }
        }
        if (0..n).any(|v| in_s[v] && in_t[v]) {
            return Err(GraphError::InvalidPartition("S and T must be disjoint".into()));
        }
        let mut s_nodes = s.to_vec();
        let mut t_nodes = t.to_vec();
        s_nodes.sort_unstable();
        t_nodes.sort_unstable();
        Ok(StPartition { n, s_nodes, t_nodes, in_s, in_t })
    }

    /// Bi-chromatic partition: T is the complement of S, so S and T cover V.
    pub fn bichromatic(n: usize, s: &[NodeId]) -> Result<Self, GraphError> {
        let mut in_s = vec![false; n];
        for &v in s {
            if v >= n {
                return Err(GraphError::NodeOutOfRange { node: v, n });
            }
            in_s[v] = true;
        }
        let t: Vec<NodeId> = (0..n).filter(|&v| !in_s[v]).collect();
        Self::new(n, s, &t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_nodes(&self) -> &[NodeId] {
        &self.s_nodes
    }

    pub fn t_nodes(&self) -> &[NodeId] {
        &self.t_nodes
    }

    pub fn in_s(&self, v: NodeId) -> bool {
        self.in_s[v]
    }

    pub fn in_t(&self, v: NodeId) -> bool {
        self.in_t[v]
    }

    pub fn is_bichromatic(&self) -> bool {
        self.s_nodes.len() + self.t_nodes.len() == self.n
    }
}

/// ecc_ST(s) = max over t of d(s, t), one entry per node of S in sorted order.
pub fn st_eccentricities(g: &Graph, p: &StPartition) -> Result<Vec<Dist>, GraphError> {
    if p.n() != g.n() {
        return Err(GraphError::InvalidPartition("partition size mismatch".into()));
    }
    p.s_nodes()
        .iter()
        .map(|&s| {
            let dv = sssp_exact(g, s, Direction::Outward)?;
            Ok(p.t_nodes().iter().map(|&t| dv.dist[t]).max().unwrap())
        })
        .collect()
}

pub fn st_diameter(g: &Graph, p: &StPartition) -> Result<Dist, GraphError> {
    Ok(st_eccentricities(g, p)?.into_iter().max().unwrap())
}

pub fn st_radius(g: &Graph, p: &StPartition) -> Result<Dist, GraphError> {
    Ok(st_eccentricities(g, p)?.into_iter().min().unwrap())
}

/// True iff every node reaches every other along arc direction.
pub fn is_strongly_connected(g: &Graph) -> bool {
    let out = sssp_exact(g, 0, Direction::Outward).expect("node 0 exists");
    let inw = sssp_exact(g, 0, Direction::Inward).expect("node 0 exists");
    out.dist.iter().chain(inw.dist.iter()).all(|d| !d.is_inf())
}

/// True iff the underlying undirected communication graph is connected.
pub fn is_connected(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.out(u).iter().chain(g.inc(u)) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == g.n()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent all-pairs oracle used to freeze derived expectations.
    fn floyd_warshall(g: &Graph) -> Vec<Vec<Dist>> {
        let n = g.n();
        let mut d = vec![vec![Dist::Inf; n]; n];
        for v in 0..n {
            d[v][v] = Dist::Finite(0);
        }
        for &(u, v, w) in g.edges() {
            d[u][v] = d[u][v].min(Dist::Finite(w));
            if !g.is_directed() {
                d[v][u] = d[v][u].min(Dist::Finite(w));
            }
        }
        for k in 0..n {
            for i in 0..n {
                if let Dist::Finite(dik) = d[i][k] {
                    for j in 0..n {
                        if let Dist::Finite(dkj) = d[k][j] {
                            d[i][j] = d[i][j].min(Dist::Finite(dik + dkj));
                        }
                    }
                }
            }
        }
        d
    }

    fn assert_matches_fw(g: &Graph) {
        let fw = floyd_warshall(g);
        for s in 0..g.n() {
            let dv = sssp_exact(g, s, Direction::Outward).unwrap();
            assert_eq!(dv.dist, fw[s], "outward from {s}");
            let iv = sssp_exact(g, s, Direction::Inward).unwrap();
            let want: Vec<Dist> = (0..g.n()).map(|v| fw[v][s]).collect();
            assert_eq!(iv.dist, want, "inward to {s}");
        }
    }

    #[test]
    fn sssp_on_path_of_three() {
        let g = Graph::unweighted_undirected(3, &[(0, 1), (1, 2)]).unwrap();
        let dv = sssp_exact(&g, 0, Direction::Outward).unwrap();
        assert_eq!(dv.dist, vec![Dist::Finite(0), Dist::Finite(1), Dist::Finite(2)]);
        assert_matches_fw(&g);
    }

    #[test]
    fn sssp_single_node() {
        let g = Graph::unweighted_undirected(1, &[]).unwrap();
        let dv = sssp_exact(&g, 0, Direction::Outward).unwrap();
        assert_eq!(dv.dist, vec![Dist::Finite(0)]);
    }

    #[test]
    fn sssp_directed_weighted_cycle() {
        let g = Graph::directed(3, &[(0, 1, 2), (1, 2, 3), (2, 0, 5)]).unwrap();
        let dv = sssp_exact(&g, 0, Direction::Outward).unwrap();
        assert_eq!(dv.dist, vec![Dist::Finite(0), Dist::Finite(2), Dist::Finite(5)]);
        assert_matches_fw(&g);
    }

    #[test]
    fn eccentricities_path_and_clique() {
        let g = Graph::unweighted_undirected(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            all_eccentricities(&g),
            vec![Dist::Finite(2), Dist::Finite(1), Dist::Finite(2)]
        );
        let k4 = Graph::unweighted_undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(all_eccentricities(&k4).iter().all(|&e| e == Dist::Finite(1)));
    }

    #[test]
    fn eccentricities_directed_path_hit_inf() {
        let g = Graph::unweighted_directed(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(all_eccentricities(&g), vec![Dist::Finite(2), Dist::Inf, Dist::Inf]);
        assert_eq!(diameter(&g), Dist::Inf);
        assert_eq!(radius(&g), Dist::Finite(2));
        assert_matches_fw(&g);
    }

    #[test]
    fn diameter_radius_star_and_weighted_triangle() {
        let star = Graph::unweighted_undirected(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(diameter(&star), Dist::Finite(2));
        assert_eq!(radius(&star), Dist::Finite(1));

        let tri = Graph::undirected(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 10)]).unwrap();
        assert_eq!(diameter(&tri), Dist::Finite(2));
        assert_eq!(radius(&tri), Dist::Finite(1));
        assert_matches_fw(&tri);
    }

    #[test]
    fn st_parameters_small_cases() {
        let g = Graph::unweighted_undirected(3, &[(0, 1), (1, 2)]).unwrap();
        let p = StPartition::new(3, &[0], &[1, 2]).unwrap();
        assert_eq!(st_eccentricities(&g, &p).unwrap(), vec![Dist::Finite(2)]);
        assert_eq!(st_diameter(&g, &p).unwrap(), Dist::Finite(2));
        assert_eq!(st_radius(&g, &p).unwrap(), Dist::Finite(2));

        let k3 = Graph::unweighted_undirected(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let p = StPartition::new(3, &[0, 1], &[2]).unwrap();
        assert_eq!(st_diameter(&k3, &p).unwrap(), Dist::Finite(1));
    }

    #[test]
    fn st_weighted_matches_brute_force() {
        let g = Graph::undirected(5, &[(0, 1, 4), (1, 2, 1), (2, 3, 2), (3, 4, 7), (0, 4, 3)]).unwrap();
        let p = StPartition::new(5, &[0, 2], &[1, 4]).unwrap();
        let fw = floyd_warshall(&g);
        let want_d = p
            .s_nodes()
            .iter()
            .map(|&s| p.t_nodes().iter().map(|&t| fw[s][t]).max().unwrap())
            .max()
            .unwrap();
        assert_eq!(st_diameter(&g, &p).unwrap(), want_d);
    }

    #[test]
    fn partition_validation() {
        assert!(StPartition::new(3, &[0], &[0]).is_err());
        assert!(StPartition::new(3, &[], &[0]).is_err());
        assert!(StPartition::new(3, &[5], &[0]).is_err());
        let p = StPartition::bichromatic(4, &[1, 2]).unwrap();
        assert!(p.is_bichromatic());
        assert_eq!(p.t_nodes(), &[0, 3]);
        let partial = StPartition::new(4, &[0], &[1]).unwrap();
        assert!(!partial.is_bichromatic());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(Graph::unweighted_undirected(2, &[(0, 0)]).is_err());
        assert!(Graph::unweighted_undirected(2, &[(0, 3)]).is_err());
        assert!(Graph::unweighted_undirected(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::directed(2, &[(0, 1, 0)]).is_err());
        assert!(Graph::new(2, false, false, &[(0, 1, 2)]).is_err());
        // Opposite arcs are distinct in a digraph.
        assert!(Graph::unweighted_directed(2, &[(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn text_format_round_trip() {
        let g = Graph::directed(4, &[(0, 1, 2), (1, 2, 3), (2, 0, 5), (3, 0, 1)]).unwrap();
        let text = g.to_text();
        let g2 = Graph::from_text(&text).unwrap();
        assert_eq!(g, g2);

        let u = Graph::unweighted_undirected(3, &[(0, 1), (1, 2)]).unwrap();
        let text = u.to_text();
        assert!(text.starts_with("3 2 0 0\n"));
        assert_eq!(Graph::from_text(&text).unwrap(), u);
    }

    #[test]
    fn text_format_rejects_malformed() {
        assert!(Graph::from_text("").is_err());
        assert!(Graph::from_text("2 1 0 0\n0 1\n0 1\n").is_err());
        assert!(Graph::from_text("2 2 0 0\n0 1\n1 0\n").is_err());
        assert!(Graph::from_text("2 1 0 0\n0 5\n").is_err());
        assert!(Graph::from_text("2 1 2 0\n0 1\n").is_err());
        assert!(Graph::from_text("2 1 0 0\n0 1 7\n").is_err());
    }

    #[test]
    fn connectivity_checks() {
        let g = Graph::unweighted_directed(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_strongly_connected(&g));
        assert!(is_connected(&g));
        let c = Graph::unweighted_directed(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(is_strongly_connected(&c));
        let disc = Graph::unweighted_undirected(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!is_connected(&disc));
    }

    #[test]
    fn dist_ordering_and_display() {
        assert!(Dist::Finite(10) < Dist::Inf);
        assert!(Dist::Finite(3) < Dist::Finite(4));
        assert_eq!((Dist::Finite(3) + 4), Dist::Finite(7));
        assert_eq!((Dist::Inf + 4), Dist::Inf);
        assert_eq!(Dist::Inf.to_string(), "inf");
    }
}

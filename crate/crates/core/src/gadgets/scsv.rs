//! Subgraph-connectivity reductions: spanning-connectivity of a marked edge
//! set encoded as a distance gap on a derived graph.

use serde::{Deserialize, Serialize};

use super::{Family, GadgetBundle, GadgetError, GapParameter, Prediction};
use crate::graph::{is_connected, Dist, Graph, NodeId, StPartition, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScsvTarget {
    /// Reweight: marked edges get weight 1, the rest n*alpha.
    WeightedDiameter { alpha: u64 },
    /// Two-layer digraph, S = one H-copy node, T = the rest.
    DirectedBichromatic,
    /// Two-layer digraph plus one back arc; plain diameter.
    DirectedDiameter,
}

/// True when the edge set touches every node and forms one component.
pub fn spanning_connected(n: usize, edges: &[(NodeId, NodeId)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut components = n;
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    components == 1
}

/// Encode whether the marked subgraph spans and connects `g` as a distance gap.
/// `h_edges` lists indices into `g.edges()`.
pub fn build_scsv_reduction(
    g: &Graph,
    h_edges: &[usize],
    target: ScsvTarget,
) -> Result<GadgetBundle, GadgetError> {
    if g.is_directed() || !is_connected(g) {
        return Err(GadgetError::BadBase);
    }
    let m = g.edge_count();
    let n = g.n();
    let mut in_h = vec![false; m];
    for &ix in h_edges {
        if ix >= m {
            return Err(GadgetError::BadHEdges(ix));
        }
        in_h[ix] = true;
    }
    let h_pairs: Vec<(NodeId, NodeId)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(ix, _)| in_h[ix])
        .map(|(_, &(u, v, _))| (u, v))
        .collect();
    let truth = spanning_connected(n, &h_pairs);

    match target {
        ScsvTarget::WeightedDiameter { alpha } => {
            if alpha == 0 {
                return Err(GadgetError::BadT("alpha must be at least 1".into()));
            }
            let heavy = n as Weight * alpha;
            let edges: Vec<(NodeId, NodeId, Weight)> = g
                .edges()
                .iter()
                .enumerate()
                .map(|(ix, &(u, v, _))| (u, v, if in_h[ix] { 1 } else { heavy }))
                .collect();
            let graph = Graph::undirected(n, &edges)?;
            Ok(GadgetBundle {
                graph,
                partition: None,
                alice_nodes: vec![],
                bob_nodes: vec![],
                labels: (0..n).map(|v| format!("v{v}")).collect(),
                family: Family::ScsvReweight,
                t: alpha,
                predicted: Prediction {
                    parameter: GapParameter::Diameter,
                    yes_value: Dist::Finite(n as u64 - 1),
                    yes_is_upper: true,
                    yes_exact: false,
                    no_bound: Dist::Finite(heavy),
                    no_exact: false,
                },
                truth,
            })
        }
        ScsvTarget::DirectedBichromatic | ScsvTarget::DirectedDiameter => {
            // layer 0 copies g in both directions, layer 1 copies the marked
            // edges; each h-node can exit to its g-twin but not return
            let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
            for v in 0..n {
                arcs.push((n + v, v));
            }
            for &(u, v, _) in g.edges() {
                arcs.push((u, v));
                arcs.push((v, u));
            }
            for &(u, v) in &h_pairs {
                arcs.push((n + u, n + v));
                arcs.push((n + v, n + u));
            }
            let mut labels: Vec<String> = (0..n).map(|v| format!("g{v}")).collect();
            labels.extend((0..n).map(|v| format!("h{v}")));
            let diameter_target = matches!(target, ScsvTarget::DirectedDiameter);
            if diameter_target {
                arcs.push((0, n));
            }
            let graph = Graph::unweighted_directed(2 * n, &arcs)?;
            let (partition, family, parameter) = if diameter_target {
                (None, Family::ScsvDiameter, GapParameter::Diameter)
            } else {
                (
                    Some(StPartition::bichromatic(2 * n, &[n])?),
                    Family::ScsvBichromatic,
                    GapParameter::StDiameter,
                )
            };
            Ok(GadgetBundle {
                graph,
                partition,
                alice_nodes: vec![],
                bob_nodes: vec![],
                labels,
                family,
                t: 0,
                predicted: Prediction {
                    parameter,
                    yes_value: Dist::Finite(2 * n as u64),
                    yes_is_upper: true,
                    yes_exact: false,
                    no_bound: Dist::Inf,
                    no_exact: false,
                },
                truth,
            })
        }
    }
}

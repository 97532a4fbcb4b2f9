//! Unweighted directed radius gadget for hitting-set existence.

use super::{
    eval_cc, CcInstance, CcKind, Family, GadgetBundle, GadgetError, GapParameter, NodeBag,
    Prediction,
};
use crate::graph::{Dist, Graph, NodeId};

/// Smallest t with (2t+4)/(t+4) > 2 - eps.
pub fn hse_t(eps: f64) -> Result<u64, GadgetError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(GadgetError::BadT(format!("eps must be in (0, 1], got {eps}")));
    }
    for t in 1..=1_000_000u64 {
        if (2 * t + 4) as f64 / (t + 4) as f64 > 2.0 - eps {
            return Ok(t);
        }
    }
    Err(GadgetError::BadT(format!("no t satisfies the gap at eps={eps}")))
}

/// Build the directed paths-and-hub gadget. Coordinates that are zero in every
/// alice vector are removed first; a hitting set puts the radius at t+4 or
/// below, otherwise every eccentricity is at least 2t+4.
pub fn build_hse_radius_gadget(
    inst: &CcInstance,
    eps: f64,
    t_override: Option<u64>,
) -> Result<GadgetBundle, GadgetError> {
    if inst.kind != CcKind::Hse {
        return Err(GadgetError::BadShape("hse instance required".into()));
    }
    let t = match t_override {
        Some(0) => return Err(GadgetError::BadT("t must be at least 1".into())),
        Some(t) => t,
        None => hse_t(eps)?,
    };
    let n_vec = inst.n_vectors();
    let kept: Vec<usize> = (0..inst.width())
        .filter(|&c| inst.alice.iter().any(|a| a[c]))
        .collect();
    if kept.is_empty() {
        return Err(GadgetError::Degenerate(
            "every coordinate is zero across alice's vectors",
        ));
    }

    let mut bag = NodeBag::new();
    let a_path: Vec<Vec<NodeId>> = (0..n_vec)
        .map(|i| (0..=t).map(|j| bag.add(format!("a{i}_{j}"))).collect())
        .collect();
    let b_path: Vec<Vec<NodeId>> = (0..n_vec)
        .map(|i| (0..=t).map(|j| bag.add(format!("b{i}_{j}"))).collect())
        .collect();
    let x = bag.add("x".into());
    let c_a: Vec<NodeId> = kept.iter().map(|&c| bag.add(format!("cA_{c}"))).collect();
    let c_b: Vec<NodeId> = kept.iter().map(|&c| bag.add(format!("cB_{c}"))).collect();

    let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
    let tu = t as usize;
    for path in a_path.iter().chain(b_path.iter()) {
        for j in 0..tu {
            arcs.push((path[j], path[j + 1]));
        }
    }
    for path in &a_path {
        arcs.push((path[tu], x));
        arcs.push((x, path[0]));
    }
    for (ci, &c) in kept.iter().enumerate() {
        arcs.push((c_a[ci], c_b[ci]));
        for i in 0..n_vec {
            if inst.alice[i][c] {
                arcs.push((a_path[i][tu], c_a[ci]));
            }
            if inst.bob[i][c] {
                arcs.push((c_b[ci], b_path[i][0]));
            }
        }
    }
    let graph = Graph::unweighted_directed(bag.n(), &arcs)?;

    let mut alice_nodes: Vec<NodeId> = a_path.into_iter().flatten().collect();
    alice_nodes.push(x);
    alice_nodes.extend(&c_a);
    alice_nodes.sort_unstable();
    let mut bob_nodes: Vec<NodeId> = b_path.into_iter().flatten().collect();
    bob_nodes.extend(&c_b);
    bob_nodes.sort_unstable();

    Ok(GadgetBundle {
        graph,
        partition: None,
        alice_nodes,
        bob_nodes,
        labels: bag.labels,
        family: Family::Hse,
        t,
        predicted: Prediction {
            parameter: GapParameter::Radius,
            yes_value: Dist::Finite(t + 4),
            yes_is_upper: true,
            yes_exact: false,
            no_bound: Dist::Finite(2 * t + 4),
            no_exact: false,
        },
        truth: eval_cc(inst),
    })
}

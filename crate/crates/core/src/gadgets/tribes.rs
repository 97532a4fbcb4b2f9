//! Weighted undirected radius gadget for the Tribes function.

use super::{
    eval_cc, CcInstance, CcKind, Family, GadgetBundle, GadgetError, GapParameter, NodeBag,
    Prediction,
};
use crate::graph::{Dist, Graph, NodeId, Weight};

/// Smallest stretch achieving the (2t)/(t+2) gap target, t = ceil(4/eps).
pub fn tribes_t(eps: f64) -> Result<u64, GadgetError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(GadgetError::BadT(format!("eps must be in (0, 1], got {eps}")));
    }
    Ok((4.0 / eps).ceil() as u64)
}

/// Build the four-clique gadget. On a yes instance the radius is at most t+2;
/// on a no instance it is at least 2t. The cut between the alice and bob sides
/// is the two matchings plus the hub edge, 2N+1 edges in total.
pub fn build_tribes_radius_gadget(
    inst: &CcInstance,
    eps: f64,
    t_override: Option<u64>,
) -> Result<GadgetBundle, GadgetError> {
    if inst.kind != CcKind::Tribes {
        return Err(GadgetError::BadShape("tribes instance required".into()));
    }
    let t = match t_override {
        Some(0) => return Err(GadgetError::BadT("t must be at least 1".into())),
        Some(t) => t,
        None => tribes_t(eps)?,
    };
    let n_vec = inst.n_vectors();

    let mut bag = NodeBag::new();
    let a0: Vec<NodeId> = (0..n_vec).map(|i| bag.add(format!("A0_{i}"))).collect();
    let a1: Vec<NodeId> = (0..n_vec).map(|i| bag.add(format!("A1_{i}"))).collect();
    let b0: Vec<NodeId> = (0..n_vec).map(|i| bag.add(format!("B0_{i}"))).collect();
    let b1: Vec<NodeId> = (0..n_vec).map(|i| bag.add(format!("B1_{i}"))).collect();
    let c_a = bag.add("cA".into());
    let c_b = bag.add("cB".into());

    let mut edges: Vec<(NodeId, NodeId, Weight)> = Vec::new();
    for group in [&a0, &a1, &b0, &b1] {
        for i in 0..n_vec {
            for j in i + 1..n_vec {
                edges.push((group[i], group[j], t));
            }
        }
    }
    for i in 0..n_vec {
        edges.push((a0[i], c_a, t));
        edges.push((b0[i], c_b, t));
        edges.push((a0[i], b0[i], 1));
        edges.push((a1[i], b1[i], 1));
    }
    edges.push((c_a, c_b, 1));
    // a zero bit opens a weight-t shortcut between the two cliques on that side
    for i in 0..n_vec {
        for j in 0..n_vec {
            if !inst.alice[i][j] {
                edges.push((a0[i], a1[j], t));
            }
            if !inst.bob[i][j] {
                edges.push((b0[i], b1[j], t));
            }
        }
    }
    let graph = Graph::undirected(bag.n(), &edges)?;

    let mut alice_nodes = a0;
    alice_nodes.extend(&a1);
    alice_nodes.push(c_a);
    alice_nodes.sort_unstable();
    let mut bob_nodes = b0;
    bob_nodes.extend(&b1);
    bob_nodes.push(c_b);
    bob_nodes.sort_unstable();

    Ok(GadgetBundle {
        graph,
        partition: None,
        alice_nodes,
        bob_nodes,
        labels: bag.labels,
        family: Family::Tribes,
        t,
        predicted: Prediction {
            parameter: GapParameter::Radius,
            yes_value: Dist::Finite(t + 2),
            yes_is_upper: true,
            yes_exact: false,
            no_bound: Dist::Finite(2 * t),
            no_exact: false,
        },
        truth: eval_cc(inst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{random_instance, verify_gap, Side};
    use crate::graph::radius;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(rows: &[&[u8]]) -> Vec<Vec<bool>> {
        rows.iter()
            .map(|r| r.iter().map(|&b| b != 0).collect())
            .collect()
    }

    fn yes_instance() -> CcInstance {
        // A_0 = {0}, B_0 = {1} are disjoint
        CcInstance::new(
            CcKind::Tribes,
            bits(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]),
            bits(&[&[0, 1, 0], &[1, 0, 1], &[1, 0, 1]]),
        )
        .unwrap()
    }

    fn no_instance() -> CcInstance {
        let ones = bits(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        CcInstance::new(CcKind::Tribes, ones.clone(), ones).unwrap()
    }

    #[test]
    fn structure_matches_the_blueprint() {
        let inst = yes_instance();
        let bundle = build_tribes_radius_gadget(&inst, 0.5, None).unwrap();
        let n_vec = inst.n_vectors();
        assert_eq!(bundle.t, 8);
        assert_eq!(bundle.graph.n(), 4 * n_vec + 2);
        assert!(bundle.graph.is_weighted());
        assert!(!bundle.graph.is_directed());
        assert_eq!(bundle.cut_arcs().len(), 2 * n_vec + 1);
        assert_eq!(
            bundle.alice_nodes.len() + bundle.bob_nodes.len(),
            bundle.graph.n()
        );
    }

    #[test]
    fn yes_side_radius_is_small() {
        let bundle = build_tribes_radius_gadget(&yes_instance(), 0.5, None).unwrap();
        assert!(bundle.truth);
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert_eq!(report.predicted_side, Side::Yes);
        assert!(report.parameter_value <= Dist::Finite(bundle.t + 2));
    }

    #[test]
    fn no_side_radius_is_large() {
        let bundle = build_tribes_radius_gadget(&no_instance(), 0.5, None).unwrap();
        assert!(!bundle.truth);
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert!(report.parameter_value >= Dist::Finite(2 * bundle.t));
    }

    #[test]
    fn random_battery_matches_predictions() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let (mut yes_seen, mut no_seen) = (0, 0);
        for round in 0..50 {
            let n = 2 + round % 5;
            let inst = random_instance(CcKind::Tribes, n, 0, 0.5, &mut rng);
            let bundle = build_tribes_radius_gadget(&inst, 0.5, None).unwrap();
            let report = verify_gap(&bundle).unwrap();
            assert!(report.pass, "round {round}: value {:?}", report.parameter_value);
            if bundle.truth {
                yes_seen += 1;
            } else {
                no_seen += 1;
            }
        }
        assert!(yes_seen > 0 && no_seen > 0, "battery must cover both sides");
    }

    #[test]
    fn alice_subgraph_ignores_bob_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a_bits = crate::gadgets::random_bits(4, 4, 0.5, &mut rng);
        let bob1 = crate::gadgets::random_bits(4, 4, 0.5, &mut rng);
        let bob2 = crate::gadgets::random_bits(4, 4, 0.3, &mut rng);
        let b1 = build_tribes_radius_gadget(
            &CcInstance::new(CcKind::Tribes, a_bits.clone(), bob1).unwrap(),
            0.5,
            None,
        )
        .unwrap();
        let b2 = build_tribes_radius_gadget(
            &CcInstance::new(CcKind::Tribes, a_bits, bob2).unwrap(),
            0.5,
            None,
        )
        .unwrap();
        let internal = |bundle: &GadgetBundle, side: &[NodeId]| {
            let mut arcs: Vec<(NodeId, NodeId, Weight)> = bundle
                .graph
                .edges()
                .iter()
                .filter(|&&(u, v, _)| side.contains(&u) && side.contains(&v))
                .copied()
                .collect();
            arcs.sort_unstable();
            arcs
        };
        assert_eq!(
            internal(&b1, &b1.alice_nodes),
            internal(&b2, &b2.alice_nodes)
        );
        assert_ne!(internal(&b1, &b1.bob_nodes), internal(&b2, &b2.bob_nodes));
    }

    #[test]
    fn mutation_breaks_the_gap() {
        // a weight-1 shortcut from the alice side to the B1 clique collapses the
        // no-side radius below 2t
        let bundle = build_tribes_radius_gadget(&no_instance(), 0.5, None).unwrap();
        let b1_first = bundle
            .labels
            .iter()
            .position(|l| l == "B1_0")
            .unwrap();
        let mut edges = bundle.graph.edges().to_vec();
        edges.push((bundle.alice_nodes[0], b1_first, 1));
        let mutated = Graph::undirected(bundle.graph.n(), &edges).unwrap();
        assert!(radius(&mutated) < Dist::Finite(2 * bundle.t));
    }

    #[test]
    fn t_override_and_eps_validation() {
        let inst = yes_instance();
        assert!(build_tribes_radius_gadget(&inst, 0.0, None).is_err());
        assert!(build_tribes_radius_gadget(&inst, 0.5, Some(0)).is_err());
        let small = build_tribes_radius_gadget(&inst, 0.5, Some(3)).unwrap();
        assert_eq!(small.t, 3);
        assert!(verify_gap(&small).unwrap().pass);
    }
}

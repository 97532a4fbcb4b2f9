//! Bichromatic diameter gadgets for orthogonal vectors.

use serde::{Deserialize, Serialize};

use super::{
    eval_cc, CcInstance, CcKind, Family, GadgetBundle, GadgetError, GapParameter, NodeBag,
    Prediction,
};
use crate::graph::{Dist, Graph, NodeId, StPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OvVariant {
    Undirected,
    Directed,
}

/// Smallest t with (5t+1)/(3t+1) > 5/3 - eps.
pub fn ov_undirected_t(eps: f64) -> Result<u64, GadgetError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(GadgetError::BadT(format!("eps must be in (0, 1], got {eps}")));
    }
    for t in 1..=1_000_000u64 {
        if (5 * t + 1) as f64 / (3 * t + 1) as f64 > 5.0 / 3.0 - eps {
            return Ok(t);
        }
    }
    Err(GadgetError::BadT(format!("no t satisfies the gap at eps={eps}")))
}

/// Smallest t >= 3 with (2t+3)/(t+3) >= 2 - eps.
pub fn ov_directed_t(eps: f64) -> Result<u64, GadgetError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(GadgetError::BadT(format!("eps must be in (0, 1], got {eps}")));
    }
    for t in 3..=1_000_000u64 {
        if (2 * t + 3) as f64 / (t + 3) as f64 >= 2.0 - eps {
            return Ok(t);
        }
    }
    Err(GadgetError::BadT(format!("no t satisfies the gap at eps={eps}")))
}

struct Col {
    label: String,
    a_bits: Vec<bool>,
    b_bits: Vec<bool>,
}

/// Columns with no one-bit on bob's side would leave their c_A node unable to
/// reach the T side without inflating the no-pair diameter; they contribute
/// nothing to any inner product, so drop them up front.
fn kept_columns(inst: &CcInstance) -> Vec<Col> {
    (0..inst.width())
        .filter(|&c| inst.bob.iter().any(|b| b[c]))
        .map(|c| Col {
            label: c.to_string(),
            a_bits: inst.alice.iter().map(|a| a[c]).collect(),
            b_bits: inst.bob.iter().map(|b| b[c]).collect(),
        })
        .collect()
}

/// Build the ST-diameter gadget for an OV instance. An orthogonal pair pushes
/// the bichromatic diameter to 5t+1 (undirected) or 2t+3 (directed) and above;
/// without one it is exactly 3t+1, respectively t+3.
pub fn build_ov_bichromatic_gadget(
    inst: &CcInstance,
    eps: f64,
    variant: OvVariant,
    t_override: Option<u64>,
) -> Result<GadgetBundle, GadgetError> {
    if inst.kind != CcKind::Ov {
        return Err(GadgetError::BadShape("ov instance required".into()));
    }
    let mut cols = kept_columns(inst);
    match variant {
        OvVariant::Undirected => {
            let t = match t_override {
                Some(0) => return Err(GadgetError::BadT("t must be at least 1".into())),
                Some(t) => t,
                None => ov_undirected_t(eps)?,
            };
            // the construction needs one column set in every b and no a
            let has_hat = cols
                .iter()
                .any(|col| col.b_bits.iter().all(|&b| b) && !col.a_bits.iter().any(|&a| a));
            if !has_hat {
                cols.push(Col {
                    label: "hat".into(),
                    a_bits: vec![false; inst.n_vectors()],
                    b_bits: vec![true; inst.n_vectors()],
                });
            }
            build_undirected(inst, &cols, t)
        }
        OvVariant::Directed => {
            let t = match t_override {
                Some(t) if t < 3 => {
                    return Err(GadgetError::BadT(format!(
                        "directed variant needs t >= 3, got {t}"
                    )))
                }
                Some(t) => t,
                None => ov_directed_t(eps)?,
            };
            build_directed(inst, &cols, t)
        }
    }
}

/// Chain of `len` edges from `from` to `to`; interior nodes join `side`.
fn connect_path(
    bag: &mut NodeBag,
    edges: &mut Vec<(NodeId, NodeId)>,
    from: NodeId,
    to: NodeId,
    len: u64,
    prefix: &str,
    side: &mut Vec<NodeId>,
) {
    let mut prev = from;
    for k in 1..len {
        let w = bag.add(format!("{prefix}_{k}"));
        side.push(w);
        edges.push((prev, w));
        prev = w;
    }
    edges.push((prev, to));
}

fn build_undirected(inst: &CcInstance, cols: &[Col], t: u64) -> Result<GadgetBundle, GadgetError> {
    let n_vec = inst.n_vectors();
    let mut bag = NodeBag::new();
    let a_path: Vec<Vec<NodeId>> = (0..n_vec)
        .map(|i| (0..=t).map(|j| bag.add(format!("a{i}_{j}"))).collect())
        .collect();
    let b0: Vec<NodeId> = (0..n_vec).map(|i| bag.add(format!("b{i}"))).collect();
    let c_a: Vec<NodeId> = cols.iter().map(|c| bag.add(format!("cA_{}", c.label))).collect();
    let c_b: Vec<NodeId> = cols.iter().map(|c| bag.add(format!("cB_{}", c.label))).collect();

    let mut alice_nodes: Vec<NodeId> = a_path.iter().flatten().copied().collect();
    alice_nodes.extend(&c_a);
    let mut bob_nodes: Vec<NodeId> = b0.clone();
    bob_nodes.extend(&c_b);

    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let tu = t as usize;
    for path in &a_path {
        for j in 0..tu {
            edges.push((path[j], path[j + 1]));
        }
    }
    for (ci, col) in cols.iter().enumerate() {
        edges.push((c_a[ci], c_b[ci]));
        for i in 0..n_vec {
            if col.a_bits[i] {
                connect_path(
                    &mut bag,
                    &mut edges,
                    a_path[i][tu],
                    c_a[ci],
                    t,
                    &format!("qa{i}_{}", col.label),
                    &mut alice_nodes,
                );
            }
            if col.b_bits[i] {
                connect_path(
                    &mut bag,
                    &mut edges,
                    c_b[ci],
                    b0[i],
                    t,
                    &format!("qb{i}_{}", col.label),
                    &mut bob_nodes,
                );
            }
        }
    }
    let graph = Graph::unweighted_undirected(bag.n(), &edges)?;

    let mut s_nodes: Vec<NodeId> = (0..bag.n()).collect();
    s_nodes.retain(|v| !b0.contains(v));
    let partition = StPartition::bichromatic(bag.n(), &s_nodes)?;

    alice_nodes.sort_unstable();
    bob_nodes.sort_unstable();
    Ok(GadgetBundle {
        graph,
        partition: Some(partition),
        alice_nodes,
        bob_nodes,
        labels: bag.labels,
        family: Family::OvUndirected,
        t,
        predicted: Prediction {
            parameter: GapParameter::StDiameter,
            yes_value: Dist::Finite(5 * t + 1),
            yes_is_upper: false,
            yes_exact: false,
            no_bound: Dist::Finite(3 * t + 1),
            no_exact: true,
        },
        truth: eval_cc(inst),
    })
}

fn build_directed(inst: &CcInstance, cols: &[Col], t: u64) -> Result<GadgetBundle, GadgetError> {
    let n_vec = inst.n_vectors();
    let mut bag = NodeBag::new();
    let a_path: Vec<Vec<NodeId>> = (0..n_vec)
        .map(|i| (0..=t).map(|j| bag.add(format!("a{i}_{j}"))).collect())
        .collect();
    let b0: Vec<NodeId> = (0..n_vec).map(|i| bag.add(format!("b{i}"))).collect();
    let c_a: Vec<NodeId> = cols.iter().map(|c| bag.add(format!("cA_{}", c.label))).collect();
    let c_b: Vec<NodeId> = cols.iter().map(|c| bag.add(format!("cB_{}", c.label))).collect();
    let tu = t as usize;
    // return path of length t-2 feeding back into the coordinate layer
    let p: Vec<NodeId> = (0..tu - 1).map(|k| bag.add(format!("p{k}"))).collect();

    let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
    for path in &a_path {
        for j in 0..tu {
            arcs.push((path[j], path[j + 1]));
        }
    }
    for k in 0..p.len() - 1 {
        arcs.push((p[k], p[k + 1]));
    }
    for &b in &b0 {
        arcs.push((b, p[0]));
    }
    for (ci, col) in cols.iter().enumerate() {
        arcs.push((c_a[ci], c_b[ci]));
        arcs.push((p[p.len() - 1], c_b[ci]));
        for i in 0..n_vec {
            if col.a_bits[i] {
                arcs.push((a_path[i][tu], c_a[ci]));
            }
            if col.b_bits[i] {
                arcs.push((c_b[ci], b0[i]));
            }
        }
    }
    let graph = Graph::unweighted_directed(bag.n(), &arcs)?;

    let mut s_nodes: Vec<NodeId> = (0..bag.n()).collect();
    s_nodes.retain(|v| !b0.contains(v));
    let partition = StPartition::bichromatic(bag.n(), &s_nodes)?;

    let mut alice_nodes: Vec<NodeId> = a_path.into_iter().flatten().collect();
    alice_nodes.extend(&c_a);
    alice_nodes.sort_unstable();
    let mut bob_nodes: Vec<NodeId> = b0;
    bob_nodes.extend(&c_b);
    bob_nodes.extend(&p);
    bob_nodes.sort_unstable();

    Ok(GadgetBundle {
        graph,
        partition: Some(partition),
        alice_nodes,
        bob_nodes,
        labels: bag.labels,
        family: Family::OvDirected,
        t,
        predicted: Prediction {
            parameter: GapParameter::StDiameter,
            yes_value: Dist::Finite(2 * t + 3),
            yes_is_upper: false,
            yes_exact: false,
            no_bound: Dist::Finite(t + 3),
            no_exact: true,
        },
        truth: eval_cc(inst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{random_instance, verify_gap};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(rows: &[&[u8]]) -> Vec<Vec<bool>> {
        rows.iter()
            .map(|r| r.iter().map(|&b| b != 0).collect())
            .collect()
    }

    fn no_pair() -> CcInstance {
        CcInstance::new(CcKind::Ov, bits(&[&[1, 0], &[1, 1]]), bits(&[&[1, 1], &[1, 0]]))
            .unwrap()
    }

    fn with_pair() -> CcInstance {
        CcInstance::new(CcKind::Ov, bits(&[&[1, 0]]), bits(&[&[0, 1]])).unwrap()
    }

    #[test]
    fn undirected_no_pair_is_exact() {
        let bundle =
            build_ov_bichromatic_gadget(&no_pair(), 0.5, OvVariant::Undirected, None).unwrap();
        assert_eq!(bundle.t, 1);
        assert!(!bundle.truth);
        assert!(bundle.labels.contains(&"cA_hat".to_string()));
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert_eq!(report.parameter_value, Dist::Finite(3 * bundle.t + 1));
    }

    #[test]
    fn undirected_pair_is_large() {
        let bundle =
            build_ov_bichromatic_gadget(&with_pair(), 0.5, OvVariant::Undirected, None).unwrap();
        assert!(bundle.truth);
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert!(report.parameter_value >= Dist::Finite(5 * bundle.t + 1));
    }

    #[test]
    fn bob_empty_column_is_dropped() {
        // column 1 has no bob ones; keeping it would put its c_B at 3t+2
        let inst = CcInstance::new(
            CcKind::Ov,
            bits(&[&[1, 1], &[1, 0]]),
            bits(&[&[1, 0], &[1, 0]]),
        )
        .unwrap();
        assert!(!eval_cc(&inst));
        let bundle =
            build_ov_bichromatic_gadget(&inst, 0.5, OvVariant::Undirected, None).unwrap();
        let coord_labels: Vec<&String> = bundle
            .labels
            .iter()
            .filter(|l| l.starts_with("cA_"))
            .collect();
        assert_eq!(coord_labels, ["cA_0", "cA_hat"]);
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert_eq!(report.parameter_value, Dist::Finite(3 * bundle.t + 1));
    }

    #[test]
    fn existing_hat_column_is_reused() {
        let inst = CcInstance::new(CcKind::Ov, bits(&[&[1, 0]]), bits(&[&[1, 1]])).unwrap();
        let bundle =
            build_ov_bichromatic_gadget(&inst, 0.5, OvVariant::Undirected, None).unwrap();
        assert!(!bundle.labels.contains(&"cA_hat".to_string()));
        assert_eq!(
            bundle.labels.iter().filter(|l| l.starts_with("cA_")).count(),
            2
        );
        assert!(verify_gap(&bundle).unwrap().pass);
    }

    #[test]
    fn undirected_longer_paths_stay_exact() {
        let bundle =
            build_ov_bichromatic_gadget(&no_pair(), 0.5, OvVariant::Undirected, Some(3)).unwrap();
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert_eq!(report.parameter_value, Dist::Finite(10));
    }

    #[test]
    fn directed_no_pair_is_exact() {
        let bundle =
            build_ov_bichromatic_gadget(&no_pair(), 0.5, OvVariant::Directed, None).unwrap();
        assert_eq!(bundle.t, 3);
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert_eq!(report.parameter_value, Dist::Finite(bundle.t + 3));
    }

    #[test]
    fn directed_pair_is_large() {
        let bundle =
            build_ov_bichromatic_gadget(&with_pair(), 0.5, OvVariant::Directed, None).unwrap();
        assert!(bundle.truth);
        let report = verify_gap(&bundle).unwrap();
        assert!(report.pass);
        assert!(report.parameter_value >= Dist::Finite(2 * bundle.t + 3));
    }

    #[test]
    fn directed_rejects_small_t() {
        assert!(matches!(
            build_ov_bichromatic_gadget(&no_pair(), 0.5, OvVariant::Directed, Some(2)),
            Err(GadgetError::BadT(_))
        ));
    }

    #[test]
    fn partition_puts_exactly_the_b_nodes_in_t() {
        for variant in [OvVariant::Undirected, OvVariant::Directed] {
            let bundle = build_ov_bichromatic_gadget(&no_pair(), 0.5, variant, None).unwrap();
            let p = bundle.partition.as_ref().unwrap();
            assert!(p.is_bichromatic());
            let t_labels: Vec<&str> = p
                .t_nodes()
                .iter()
                .map(|&v| bundle.labels[v].as_str())
                .collect();
            assert_eq!(t_labels, ["b0", "b1"]);
            // the communication cut is one arc per coordinate pair
            let coords = bundle.labels.iter().filter(|l| l.starts_with("cA_")).count();
            assert_eq!(bundle.cut_arcs().len(), coords);
        }
    }

    #[test]
    fn random_battery_matches_predictions() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for variant in [OvVariant::Undirected, OvVariant::Directed] {
            let (mut yes_seen, mut no_seen) = (0, 0);
            for round in 0..50 {
                let p_one = if round % 2 == 0 { 0.75 } else { 0.35 };
                let n = 2 + round % 5;
                let inst = random_instance(CcKind::Ov, n, 5, p_one, &mut rng);
                let bundle = build_ov_bichromatic_gadget(&inst, 0.5, variant, None).unwrap();
                let report = verify_gap(&bundle).unwrap();
                assert!(
                    report.pass,
                    "{variant:?} round {round}: {:?} truth {}",
                    report.parameter_value, bundle.truth
                );
                if bundle.truth {
                    yes_seen += 1;
                } else {
                    no_seen += 1;
                }
            }
            assert!(yes_seen > 0 && no_seen > 0, "{variant:?} battery one-sided");
        }
    }

    #[test]
    fn alice_subgraph_ignores_bob_input() {
        // bob variations keep every column populated so the drop set is stable
        let a_bits = bits(&[&[1, 1], &[1, 0]]);
        let bob1 = bits(&[&[1, 1], &[1, 0]]);
        let bob2 = bits(&[&[1, 0], &[1, 1]]);
        for variant in [OvVariant::Undirected, OvVariant::Directed] {
            let b1 = build_ov_bichromatic_gadget(
                &CcInstance::new(CcKind::Ov, a_bits.clone(), bob1.clone()).unwrap(),
                0.5,
                variant,
                None,
            )
            .unwrap();
            let b2 = build_ov_bichromatic_gadget(
                &CcInstance::new(CcKind::Ov, a_bits.clone(), bob2.clone()).unwrap(),
                0.5,
                variant,
                None,
            )
            .unwrap();
            let alice_arcs = |bundle: &GadgetBundle| {
                let inside: Vec<bool> = (0..bundle.graph.n())
                    .map(|v| bundle.alice_nodes.binary_search(&v).is_ok())
                    .collect();
                let mut named: Vec<(String, String)> = bundle
                    .graph
                    .edges()
                    .iter()
                    .filter(|&&(u, v, _)| inside[u] && inside[v])
                    .map(|&(u, v, _)| {
                        let (lu, lv) = (bundle.labels[u].clone(), bundle.labels[v].clone());
                        if lu <= lv {
                            (lu, lv)
                        } else {
                            (lv, lu)
                        }
                    })
                    .collect();
                named.sort();
                named
            };
            assert_eq!(alice_arcs(&b1), alice_arcs(&b2), "{variant:?}");
        }
    }
}

//! Communication-complexity instances, the Disjointness to hitting-set-existence
//! reduction, and graph gadget families whose distance parameters encode the
//! instance truth value with a verifiable yes/no gap.

mod hse;
mod ov;
mod scsv;
mod tribes;

pub use hse::{build_hse_radius_gadget, hse_t};
pub use ov::{build_ov_bichromatic_gadget, ov_directed_t, ov_undirected_t, OvVariant};
pub use scsv::{build_scsv_reduction, spanning_connected, ScsvTarget};
pub use tribes::{build_tribes_radius_gadget, tribes_t};

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{diameter, radius, st_diameter, Dist, Graph, GraphError, NodeId, StPartition};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("instance shape invalid: {0}")]
    BadShape(String),
    #[error("degenerate instance: {0}")]
    Degenerate(&'static str),
    #[error("stretch parameter invalid: {0}")]
    BadT(String),
    #[error("h_edges index {0} out of range")]
    BadHEdges(usize),
    #[error("base graph must be connected and undirected")]
    BadBase,
    #[error("bundle parameter needs an ST partition but none is attached")]
    MissingPartition,
    #[error("graph too large for exact verification: n={n}, arcs={arcs}, cap={cap}")]
    Oversize { n: usize, arcs: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CcKind {
    Disj,
    Tribes,
    Ov,
    Hse,
}

/// Two-party instance: `alice` and `bob` each hold N bit vectors of width d.
/// Disj uses width 1 (set membership); Tribes requires d = N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CcInstance {
    pub kind: CcKind,
    pub alice: Vec<Vec<bool>>,
    pub bob: Vec<Vec<bool>>,
}

impl CcInstance {
    pub fn new(
        kind: CcKind,
        alice: Vec<Vec<bool>>,
        bob: Vec<Vec<bool>>,
    ) -> Result<Self, GadgetError> {
        let n = alice.len();
        if n == 0 || bob.len() != n {
            return Err(GadgetError::BadShape(format!(
                "need equal nonzero vector counts, got {} and {}",
                n,
                bob.len()
            )));
        }
        let d = alice[0].len();
        if d == 0 {
            return Err(GadgetError::BadShape("zero-width vectors".into()));
        }
        if alice.iter().chain(bob.iter()).any(|row| row.len() != d) {
            return Err(GadgetError::BadShape("ragged bit matrix".into()));
        }
        match kind {
            CcKind::Disj if d != 1 => {
                return Err(GadgetError::BadShape(format!("disj needs width 1, got {d}")))
            }
            CcKind::Tribes if d != n => {
                return Err(GadgetError::BadShape(format!(
                    "tribes needs width {n} to match the vector count, got {d}"
                )))
            }
            _ => {}
        }
        Ok(CcInstance { kind, alice, bob })
    }

    pub fn n_vectors(&self) -> usize {
        self.alice.len()
    }

    pub fn width(&self) -> usize {
        self.alice[0].len()
    }
}

fn dot(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).any(|(&x, &y)| x && y)
}

/// Brute-force truth value of the instance.
///
/// Disj: the index sets are disjoint. Tribes: some pair (A_i, B_i) is disjoint.
/// OV: some cross pair is orthogonal. HSE: some a hits every b.
pub fn eval_cc(inst: &CcInstance) -> bool {
    match inst.kind {
        CcKind::Disj => !inst
            .alice
            .iter()
            .zip(&inst.bob)
            .any(|(x, y)| x[0] && y[0]),
        CcKind::Tribes => inst
            .alice
            .iter()
            .zip(&inst.bob)
            .any(|(a, b)| !dot(a, b)),
        CcKind::Ov => inst
            .alice
            .iter()
            .any(|a| inst.bob.iter().any(|b| !dot(a, b))),
        CcKind::Hse => inst
            .alice
            .iter()
            .any(|a| inst.bob.iter().all(|b| dot(a, b))),
    }
}

fn code_width(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn bit_code(i: usize, width: usize) -> Vec<bool> {
    (0..width).map(|k| (i >> k) & 1 == 1).collect()
}

/// Encode a Disjointness pair as a hitting-set instance of width 2*ceil(log2 N)+1.
///
/// A_i carries the binary code of i, its complement, then X_i; B_i swaps the two
/// code blocks and appends Y_i. Cross pairs always intersect on a code bit, so a
/// hitting set exists exactly when some X_i = Y_i = 1, i.e. Disj(X, Y) = 0.
pub fn disj_to_hse(x: &[bool], y: &[bool]) -> CcInstance {
    assert_eq!(x.len(), y.len(), "vector lengths must match");
    let n = x.len();
    assert!(n >= 1, "need at least one element");
    let w = code_width(n);
    let mut alice = Vec::with_capacity(n);
    let mut bob = Vec::with_capacity(n);
    for i in 0..n {
        let code = bit_code(i, w);
        let mut a: Vec<bool> = code.clone();
        a.extend(code.iter().map(|&bit| !bit));
        a.push(x[i]);
        let mut b: Vec<bool> = code.iter().map(|&bit| !bit).collect();
        b.extend(code.iter().copied());
        b.push(y[i]);
        alice.push(a);
        bob.push(b);
    }
    CcInstance {
        kind: CcKind::Hse,
        alice,
        bob,
    }
}

/// Bit matrix with independent one-density `p_one` per cell.
pub fn random_bits(n: usize, d: usize, p_one: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.gen_bool(p_one)).collect())
        .collect()
}

/// Random instance of the given kind; `d` is ignored where the kind fixes the width.
pub fn random_instance(
    kind: CcKind,
    n: usize,
    d: usize,
    p_one: f64,
    rng: &mut ChaCha8Rng,
) -> CcInstance {
    let width = match kind {
        CcKind::Disj => 1,
        CcKind::Tribes => n,
        CcKind::Ov | CcKind::Hse => d,
    };
    CcInstance::new(
        kind,
        random_bits(n, width, p_one, rng),
        random_bits(n, width, p_one, rng),
    )
    .expect("generated shapes are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Tribes,
    Hse,
    OvUndirected,
    OvDirected,
    ScsvReweight,
    ScsvBichromatic,
    ScsvDiameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapParameter {
    Radius,
    Diameter,
    StDiameter,
}

/// Predicted two-sided gap. With `yes_is_upper` the parameter is at most
/// `yes_value` when the instance is true and at least `no_bound` otherwise;
/// clearing it flips both directions. The exact flags tighten a bound to
/// equality, and an `Inf` bound on the lower side demands an infinite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub parameter: GapParameter,
    pub yes_value: Dist,
    pub yes_is_upper: bool,
    pub yes_exact: bool,
    pub no_bound: Dist,
    pub no_exact: bool,
}

/// A lower-bound graph with its communication cut and predicted distance gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetBundle {
    pub graph: Graph,
    pub partition: Option<StPartition>,
    pub alice_nodes: Vec<NodeId>,
    pub bob_nodes: Vec<NodeId>,
    pub labels: Vec<String>,
    pub family: Family,
    pub t: u64,
    pub predicted: Prediction,
    pub truth: bool,
}

impl GadgetBundle {
    /// Arcs with one endpoint on each side of the communication cut.
    pub fn cut_arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut side = vec![0u8; self.graph.n()];
        for &v in &self.alice_nodes {
            side[v] = 1;
        }
        for &v in &self.bob_nodes {
            side[v] = 2;
        }
        self.graph
            .edges()
            .iter()
            .filter(|&&(u, v, _)| side[u] != 0 && side[v] != 0 && side[u] != side[v])
            .map(|&(u, v, _)| (u, v))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Yes,
    No,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapReport {
    pub parameter_value: Dist,
    pub predicted_side: Side,
    pub pass: bool,
    pub n: usize,
    pub arcs: usize,
}

pub const VERIFY_ARC_CAP: usize = 50_000;

pub fn verify_gap(bundle: &GadgetBundle) -> Result<GapReport, GadgetError> {
    verify_gap_with(bundle, VERIFY_ARC_CAP)
}

/// Compute the bundle's parameter with the exact oracles and check it lands on
/// the side its truth value predicts. Refuses graphs above the arc cap.
pub fn verify_gap_with(bundle: &GadgetBundle, max_arcs: usize) -> Result<GapReport, GadgetError> {
    let g = &bundle.graph;
    let arcs = g.arc_count();
    if arcs > max_arcs {
        return Err(GadgetError::Oversize {
            n: g.n(),
            arcs,
            cap: max_arcs,
        });
    }
    let value = match bundle.predicted.parameter {
        GapParameter::Radius => radius(g),
        GapParameter::Diameter => diameter(g),
        GapParameter::StDiameter => {
            let p = bundle
                .partition
                .as_ref()
                .ok_or(GadgetError::MissingPartition)?;
            st_diameter(g, p)?
        }
    };
    let pred = &bundle.predicted;
    let (bound, upper, exact) = if bundle.truth {
        (pred.yes_value, pred.yes_is_upper, pred.yes_exact)
    } else {
        (pred.no_bound, !pred.yes_is_upper, pred.no_exact)
    };
    let pass = if exact {
        value == bound
    } else if upper {
        value <= bound
    } else {
        value >= bound
    };
    Ok(GapReport {
        parameter_value: value,
        predicted_side: if bundle.truth { Side::Yes } else { Side::No },
        pass,
        n: g.n(),
        arcs,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    family: Family,
    t: u64,
    truth: bool,
    predicted: Prediction,
    s_nodes: Option<&'a [NodeId]>,
    t_nodes: Option<&'a [NodeId]>,
    alice_nodes: &'a [NodeId],
    bob_nodes: &'a [NodeId],
    labels: &'a [String],
}

/// Write `<stem>.graph` (text format) and `<stem>.json` (metadata sidecar).
pub fn export_bundle(
    bundle: &GadgetBundle,
    dir: &Path,
    stem: &str,
) -> io::Result<(PathBuf, PathBuf)> {
    let graph_path = dir.join(format!("{stem}.graph"));
    let json_path = dir.join(format!("{stem}.json"));
    fs::write(&graph_path, bundle.graph.to_text())?;
    let sidecar = Sidecar {
        family: bundle.family,
        t: bundle.t,
        truth: bundle.truth,
        predicted: bundle.predicted,
        s_nodes: bundle.partition.as_ref().map(|p| p.s_nodes()),
        t_nodes: bundle.partition.as_ref().map(|p| p.t_nodes()),
        alice_nodes: &bundle.alice_nodes,
        bob_nodes: &bundle.bob_nodes,
        labels: &bundle.labels,
    };
    let body = serde_json::to_string_pretty(&sidecar).map_err(io::Error::other)?;
    fs::write(&json_path, body)?;
    Ok((graph_path, json_path))
}

/// Node id allocator that keeps a label per id for export and debugging.
pub(crate) struct NodeBag {
    pub labels: Vec<String>,
}

impl NodeBag {
    pub fn new() -> Self {
        NodeBag { labels: Vec::new() }
    }

    pub fn add(&mut self, label: String) -> NodeId {
        let id = self.labels.len();
        self.labels.push(label);
        id
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

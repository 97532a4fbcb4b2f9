//! Farthest-node election: marked nodes start a hop wave; behind the wave,
//! every node floods the best (distance, id) pair it has seen. One message
//! stream serves both purposes, so the whole election runs in one phase of
//! at most ecc(marked) + D + O(1) rounds.
//!
//! Wave correctness leans on speed-of-light: the first message a node at
//! distance d receives arrives at round d+1, and the smallest distance among
//! those first arrivals is exactly d-1, so adopting min+1 is sound even
//! though max-flood traffic shares the stream.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::sim::{run, Ctx, Message, NodeProgram, RunReport, SimConfig, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElectOutput {
    /// This node's hop distance to the marked set.
    pub dist: Option<u64>,
    pub best_dist: u64,
    pub best_id: NodeId,
}

/// Larger distance wins; ties go to the smaller id.
fn beats(d: u64, id: NodeId, best_d: u64, best_id: NodeId) -> bool {
    d > best_d || (d == best_d && id < best_id)
}

pub struct ElectProgram {
    marked: bool,
    dist: Option<u64>,
    best: Option<(u64, NodeId)>,
    dirty: bool,
}

impl ElectProgram {
    pub fn new(marked: bool) -> Self {
        ElectProgram { marked, dist: None, best: None, dirty: false }
    }

    fn offer(&mut self, d: u64, id: NodeId) {
        let better = match self.best {
            None => true,
            Some((bd, bid)) => beats(d, id, bd, bid),
        };
        if better {
            self.best = Some((d, id));
            self.dirty = true;
        }
    }
}

impl NodeProgram for ElectProgram {
    type Output = ElectOutput;

    fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Option<Message>]) -> Status {
        if self.marked && self.dist.is_none() {
            self.dist = Some(0);
            self.offer(0, ctx.id);
        }
        let mut min_seen: Option<u64> = None;
        for msg in inbox.iter().flatten() {
            let (d, id) = (msg.words()[0], msg.words()[1] as NodeId);
            min_seen = Some(min_seen.map_or(d, |m| m.min(d)));
            self.offer(d, id);
        }
        if self.dist.is_none() {
            if let Some(m) = min_seen {
                // First arrivals carry exactly dist-1 as their minimum.
                let d = m + 1;
                self.dist = Some(d);
                self.offer(d, ctx.id);
            }
        }
        if self.dirty {
            self.dirty = false;
            let (d, id) = self.best.expect("dirty implies a candidate");
            ctx.broadcast(&Message::new(vec![d, id as u64]));
        }
        Status::Idle
    }

    fn output(&self) -> Option<ElectOutput> {
        self.best.map(|(best_dist, best_id)| ElectOutput {
            dist: self.dist,
            best_dist,
            best_id,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ElectResult {
    pub winner: NodeId,
    pub winner_dist: u64,
    /// Per-node hop distance to the marked set.
    pub dist: Vec<Option<u64>>,
    pub report: RunReport<ElectOutput>,
}

#[derive(Debug, thiserror::Error)]
pub enum ElectError {
    #[error("marked set must be non-empty")]
    EmptyMarked,
    #[error("simulation failed: {0}")]
    Sim(String),
}

/// Elects the node farthest (in hops) from the marked set; every node learns
/// the winning (distance, id) pair. Ties break toward the smaller id.
pub fn elect_farthest(
    g: &Graph,
    marked: &[NodeId],
    cfg: &SimConfig,
) -> Result<ElectResult, ElectError> {
    if marked.is_empty() {
        return Err(ElectError::EmptyMarked);
    }
    let mut is_marked = vec![false; g.n()];
    for &m in marked {
        assert!(m < g.n(), "marked node out of range");
        is_marked[m] = true;
    }
    let programs: Vec<ElectProgram> = is_marked.iter().map(|&m| ElectProgram::new(m)).collect();
    let report = run(g, programs, cfg).map_err(|e| ElectError::Sim(e.to_string()))?;
    let out0 = report.outputs[marked[0]]
        .as_ref()
        .expect("marked nodes always hold a candidate");
    let (winner, winner_dist) = (out0.best_id, out0.best_dist);
    let dist = report
        .outputs
        .iter()
        .map(|o| o.as_ref().and_then(|o| o.dist))
        .collect();
    Ok(ElectResult { winner, winner_dist, dist, report })
}

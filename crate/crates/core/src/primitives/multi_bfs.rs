//! Multi-source BFS with pipelined announcements.
//!
//! Every node tracks its best known distance to each source. Each round a
//! node announces at most one (source, dist) pair, namely the smallest
//! unannounced one in (dist, source-id) order. Improvements re-enter the
//! queue, so stale announcements are superseded rather than retracted.
//! The pipelining keeps the round count near |S| + D instead of |S| * D.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::{Dist, Graph, NodeId};
use crate::sim::{Ctx, Message, NodeProgram, RunReport, SimConfig, Status};

use super::EngineError;

#[derive(Clone, Serialize)]
pub struct MultiBfsOutput {
    /// Sorted (source, dist) pairs for every source this node has heard from.
    pub dists: Vec<(NodeId, u64)>,
}

struct MultiBfsProgram {
    is_source: bool,
    best: Vec<Option<u64>>,
    queued: Vec<bool>,
    queue: BTreeSet<(u64, NodeId)>,
}

impl MultiBfsProgram {
    fn new(n: usize, is_source: bool) -> Self {
        MultiBfsProgram {
            is_source,
            best: vec![None; n],
            queued: vec![false; n],
            queue: BTreeSet::new(),
        }
    }

    fn improve(&mut self, src: NodeId, d: u64) {
        let known = self.best[src];
        if known.map_or(false, |k| k <= d) {
            return;
        }
        if self.queued[src] {
            self.queue.remove(&(known.unwrap(), src));
        }
        self.best[src] = Some(d);
        self.queue.insert((d, src));
        self.queued[src] = true;
    }
}

impl NodeProgram for MultiBfsProgram {
    type Output = MultiBfsOutput;

    fn step(&mut self, ctx: &mut Ctx, inbox: &[Option<Message>]) -> Status {
        if ctx.round == 1 && self.is_source {
            self.improve(ctx.id, 0);
        }
        for msg in inbox.iter().flatten() {
            let w = msg.words();
            debug_assert_eq!(w.len(), 2);
            self.improve(w[0] as NodeId, w[1] + 1);
        }
        if let Some(&(d, src)) = self.queue.iter().next() {
            self.queue.remove(&(d, src));
            self.queued[src] = false;
            ctx.broadcast(&Message::new(vec![src as u64, d]));
        }
        if self.queue.is_empty() {
            Status::Idle
        } else {
            Status::Active
        }
    }

    fn output(&self) -> Option<MultiBfsOutput> {
        let dists = self
            .best
            .iter()
            .enumerate()
            .filter_map(|(src, d)| d.map(|d| (src, d)))
            .collect();
        Some(MultiBfsOutput { dists })
    }
}

pub struct MultiBfsResult {
    /// Sorted, deduplicated source list; rows of `dist` follow this order.
    pub sources: Vec<NodeId>,
    /// dist[i][v] = hop distance from sources[i] to v.
    pub dist: Vec<Vec<Dist>>,
    /// Per node: (closest source, distance), ties to the smaller source id.
    pub closest: Vec<Option<(NodeId, u64)>>,
    pub report: RunReport<MultiBfsOutput>,
}

impl MultiBfsResult {
    pub fn dist_from(&self, source: NodeId) -> &[Dist] {
        let ix = self
            .sources
            .binary_search(&source)
            .expect("not a source of this run");
        &self.dist[ix]
    }
}

/// Runs BFS from every node in `sources` at once on an undirected
/// unweighted graph and reports all |S| * n distances.
pub fn multi_bfs(
    g: &Graph,
    sources: &[NodeId],
    cfg: &SimConfig,
) -> Result<MultiBfsResult, EngineError> {
    assert!(!g.is_weighted(), "multi_bfs needs an unweighted graph");
    assert!(!g.is_directed(), "multi_bfs needs an undirected graph");
    let mut srcs: Vec<NodeId> = sources.to_vec();
    srcs.sort_unstable();
    srcs.dedup();
    if srcs.is_empty() {
        return Err(EngineError::EmptySources);
    }
    let n = g.n();
    let programs: Vec<MultiBfsProgram> = (0..n)
        .map(|v| MultiBfsProgram::new(n, srcs.binary_search(&v).is_ok()))
        .collect();
    let report = crate::sim::run(g, programs, cfg).map_err(|e| EngineError::Sim(e.to_string()))?;

    let mut dist = vec![vec![Dist::Inf; n]; srcs.len()];
    let mut closest: Vec<Option<(NodeId, u64)>> = vec![None; n];
    for (v, out) in report.outputs.iter().enumerate() {
        let out = out.as_ref().expect("multi_bfs output always present");
        for &(src, d) in &out.dists {
            let ix = srcs.binary_search(&src).expect("unknown source id");
            dist[ix][v] = Dist::Finite(d);
            match closest[v] {
                Some((cs, cd)) if (cd, cs) <= (d, src) => {}
                _ => closest[v] = Some((src, d)),
            }
        }
    }
    Ok(MultiBfsResult {
        sources: srcs,
        dist,
        closest,
        report,
    })
}

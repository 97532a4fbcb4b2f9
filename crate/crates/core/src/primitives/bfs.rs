//! Single-source hop BFS over the communication graph.
//!
//! The wave carries the sender's level; a node adopts the first wave it sees
//! (parent = smallest-id sender that round) and answers its parent with a
//! child marker, so on completion every node knows its distance, parent, and
//! children, enough to assemble a spanning tree without extra rounds.

use serde::{Deserialize, Serialize};

use crate::graph::{Dist, Graph, NodeId};
use crate::sim::{
    run, Ctx, Message, NodeProgram, RunReport, SimConfig, SimError, SpanningTree, Status,
};

const TAG_WAVE: u64 = 0;
const TAG_CHILD: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsOutput {
    pub dist: Option<u64>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

pub struct BfsProgram {
    is_root: bool,
    dist: Option<u64>,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

impl BfsProgram {
    pub fn new(is_root: bool) -> Self {
        BfsProgram { is_root, dist: None, parent: None, children: Vec::new() }
    }

    fn adopt(&mut self, ctx: &mut Ctx<'_>, dist: u64, parent: Option<NodeId>) {
        self.dist = Some(dist);
        self.parent = parent;
        let wave = Message::new(vec![TAG_WAVE, dist]);
        for link in 0..ctx.links.len() {
            if Some(ctx.links[link].peer) == parent {
                ctx.send(link, Message::new(vec![TAG_CHILD]));
            } else {
                ctx.send(link, wave.clone());
            }
        }
    }
}

impl NodeProgram for BfsProgram {
    type Output = BfsOutput;

    fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Option<Message>]) -> Status {
        for (slot, msg) in inbox.iter().enumerate() {
            let Some(msg) = msg else { continue };
            if msg.words()[0] == TAG_CHILD {
                self.children.push(ctx.links[slot].peer);
            }
        }
        if self.dist.is_none() {
            if self.is_root {
                self.adopt(ctx, 0, None);
            } else {
                // First wave wins; among same-round waves the smallest peer id
                // (slot order is peer order) becomes the parent.
                let first = inbox.iter().enumerate().find_map(|(slot, msg)| {
                    msg.as_ref().and_then(|m| {
                        (m.words()[0] == TAG_WAVE).then(|| (slot, m.words()[1]))
                    })
                });
                if let Some((slot, d)) = first {
                    let parent = ctx.links[slot].peer;
                    self.adopt(ctx, d + 1, Some(parent));
                }
            }
        }
        Status::Idle
    }

    fn output(&self) -> Option<BfsOutput> {
        Some(BfsOutput {
            dist: self.dist,
            parent: self.parent,
            children: {
                let mut c = self.children.clone();
                c.sort_unstable();
                c
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct BfsResult {
    pub dist: Vec<Dist>,
    pub parent: Vec<Option<NodeId>>,
    pub children: Vec<Vec<NodeId>>,
    pub report: RunReport<BfsOutput>,
}

impl BfsResult {
    /// Depth of the BFS tree: the largest finite distance.
    pub fn depth(&self) -> u64 {
        self.dist.iter().filter_map(|d| d.finite()).max().unwrap_or(0)
    }

    /// The tree itself; errors when some node was unreachable.
    pub fn tree(&self, root: NodeId) -> Result<SpanningTree, String> {
        SpanningTree::from_parents(root, &self.parent)
    }
}

/// Hop-BFS from `root`, ignoring arc directions (channels carry the wave both
/// ways). Completes in ecc(root) + O(1) rounds.
pub fn bfs(g: &Graph, root: NodeId, cfg: &SimConfig) -> Result<BfsResult, SimError<BfsOutput>> {
    assert!(root < g.n(), "root out of range");
    let programs: Vec<BfsProgram> = (0..g.n()).map(|v| BfsProgram::new(v == root)).collect();
    let report = run(g, programs, cfg)?;
    let mut dist = vec![Dist::Inf; g.n()];
    let mut parent = vec![None; g.n()];
    let mut children = vec![Vec::new(); g.n()];
    for (v, out) in report.outputs.iter().enumerate() {
        let out = out.as_ref().expect("bfs programs always report");
        if let Some(d) = out.dist {
            dist[v] = Dist::Finite(d);
        }
        parent[v] = out.parent;
        children[v] = out.children.clone();
    }
    Ok(BfsResult { dist, parent, children, report })
}

// Used by modules that need a ready spanning tree plus its report.
pub fn bfs_tree(
    g: &Graph,
    root: NodeId,
    cfg: &SimConfig,
) -> Result<(SpanningTree, BfsResult), SimError<BfsOutput>> {
    let res = bfs(g, root, cfg)?;
    let tree = res
        .tree(root)
        .unwrap_or_else(|e| panic!("graph not connected under communication links: {e}"));
    Ok((tree, res))
}

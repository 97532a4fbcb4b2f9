//! Pipelined reduction of many independent keys over a spanning tree.
//!
//! Where `tree_reduce` packs a handful of components into one message,
//! this program streams an arbitrary number of keyed aggregates, one key
//! per round per tree edge. Key k travels as (k, val, arg) in strictly
//! increasing key order, so K keys cost about K + 2 * height rounds
//! instead of K separate sweeps.

use crate::graph::{Graph, NodeId};
use crate::sim::{
    link_to, reduce_identity, reduce_merge, Ctx, Message, NodeProgram, RunReport, SimConfig,
    SpanningTree, Status,
};
pub use crate::sim::{RVal, ReduceItem as KeySpec};

use super::EngineError;

struct MultiKeyProgram {
    specs: Vec<KeySpec>,
    none_id: u64,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    delivered: Vec<usize>,
    acc: Vec<RVal>,
    up_next: usize,
    finals: Vec<Option<RVal>>,
    down_recv: usize,
    down_sent: usize,
    done: bool,
}

impl MultiKeyProgram {
    fn encode(&self, k: usize, rv: RVal) -> Message {
        let arg = if self.specs[k].with_arg { rv.arg } else { None };
        Message::new(vec![k as u64, rv.val, arg.map_or(self.none_id, |a| a as u64)])
    }

    fn decode(&self, words: &[u64]) -> (usize, RVal) {
        let k = words[0] as usize;
        let arg = if words[2] == self.none_id {
            None
        } else {
            Some(words[2] as NodeId)
        };
        (k, RVal { val: words[1], arg })
    }

    fn children_have(&self, k: usize) -> bool {
        self.delivered.iter().all(|&d| d > k)
    }
}

impl NodeProgram for MultiKeyProgram {
    type Output = Vec<RVal>;

    fn step(&mut self, ctx: &mut Ctx, inbox: &[Option<Message>]) -> Status {
        let kk = self.specs.len();
        let mut forward: Option<(usize, RVal)> = None;
        for (slot, msg) in inbox.iter().enumerate() {
            let Some(msg) = msg else { continue };
            let (k, rv) = self.decode(msg.words());
            let sender = ctx.links[slot].peer;
            if self.parent == Some(sender) {
                debug_assert_eq!(k, self.down_recv);
                self.finals[k] = Some(rv);
                self.down_recv += 1;
                forward = Some((k, rv));
            } else {
                let ci = self
                    .children
                    .binary_search(&sender)
                    .expect("up traffic only from tree children");
                debug_assert_eq!(k, self.delivered[ci]);
                self.acc[k] = reduce_merge(&self.specs[k], self.acc[k], rv);
                self.delivered[ci] += 1;
            }
        }

        if let Some((k, rv)) = forward {
            let msg = self.encode(k, rv);
            for &c in &self.children {
                ctx.send(link_to(ctx.links, c), msg.clone());
            }
            self.down_sent += 1;
            if self.down_recv == kk {
                self.done = true;
                return Status::Halted;
            }
        }

        match self.parent {
            Some(p) => {
                if self.up_next < kk && self.children_have(self.up_next) {
                    let msg = self.encode(self.up_next, self.acc[self.up_next]);
                    ctx.send(link_to(ctx.links, p), msg);
                    self.up_next += 1;
                }
            }
            None => {
                // root: release finals downward in key order, one per round
                if self.down_sent < kk && self.children_have(self.down_sent) {
                    let k = self.down_sent;
                    self.finals[k] = Some(self.acc[k]);
                    let msg = self.encode(k, self.acc[k]);
                    for &c in &self.children {
                        ctx.send(link_to(ctx.links, c), msg.clone());
                    }
                    self.down_sent += 1;
                    if self.down_sent == kk {
                        self.done = true;
                        return Status::Halted;
                    }
                }
            }
        }
        if self.done {
            Status::Halted
        } else {
            Status::Active
        }
    }

    fn output(&self) -> Option<Vec<RVal>> {
        if self.done {
            Some(self.finals.iter().map(|f| f.expect("done implies full")).collect())
        } else {
            None
        }
    }
}

pub struct MultiKeyResult {
    /// Agreed aggregate per key, in spec order.
    pub finals: Vec<RVal>,
    pub report: RunReport<Vec<RVal>>,
}

/// Reduces `specs.len()` keys over the tree at once. `contributions[v][k]`
/// is node v's input for key k, None meaning the key's identity. All
/// nodes learn all results.
pub fn multi_key_reduce(
    g: &Graph,
    tree: &SpanningTree,
    specs: &[KeySpec],
    contributions: &[Vec<Option<RVal>>],
    cfg: &SimConfig,
) -> Result<MultiKeyResult, EngineError> {
    let n = g.n();
    let kk = specs.len();
    assert!(kk >= 1, "need at least one key");
    assert_eq!(contributions.len(), n);
    let limit = n as u64 * g.max_weight() as u64;
    assert!(
        kk as u64 - 1 <= limit,
        "key indices must fit the word range"
    );
    let programs: Vec<MultiKeyProgram> = (0..n)
        .map(|v| {
            assert_eq!(contributions[v].len(), kk);
            let acc: Vec<RVal> = (0..kk)
                .map(|k| contributions[v][k].unwrap_or_else(|| reduce_identity(&specs[k], limit)))
                .collect();
            let children = tree.children[v].clone();
            MultiKeyProgram {
                specs: specs.to_vec(),
                none_id: n as u64,
                parent: tree.parent[v],
                delivered: vec![0; children.len()],
                children,
                acc,
                up_next: 0,
                finals: vec![None; kk],
                down_recv: 0,
                down_sent: 0,
                done: false,
            }
        })
        .collect();
    let report = crate::sim::run(g, programs, cfg).map_err(|e| EngineError::Sim(e.to_string()))?;
    let finals = report.outputs[tree.root]
        .clone()
        .expect("root always finishes");
    debug_assert!(report
        .outputs
        .iter()
        .all(|o| o.as_ref() == Some(&finals)));
    Ok(MultiKeyResult { finals, report })
}

//! Distributed selection of the ℓ closest nodes around a root.
//!
//! A single program merges three phases that would each cost a diameter
//! of rounds if run back to back:
//!
//! 1. A BFS wave fixes each node's level and parent (smallest-id wave
//!    sender of the first wave round).
//! 2. Every node streams per-level subtree counts to its parent, one
//!    level per round, pipelined: the count for level k reaches the root
//!    by round 2k + 1. Each count carries (total, marked) so the root
//!    can also tell whether marked nodes survive the cut.
//! 3. The root picks the first level L* where the running total reaches
//!    ℓ, then floods a result message down the tree. Quota for the
//!    boundary level is split greedily, marked subtrees first, then by
//!    child id, so a marked node is selected whenever one fits.
//!
//! The verdict bit reports whether the selected set contains a marked
//! node, which the root knows exactly thanks to the marked-first split.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::sim::{Ctx, Message, NodeProgram, RunReport, SimConfig, Status};

const TAG_WAVE: u64 = 0;
const TAG_COUNT: u64 = 1;
const TAG_END: u64 = 2;
const TAG_RESULT: u64 = 3;

/// Sentinel lstar for a root that exhausted all levels below target.
const UNSAT: u64 = u64::MAX;

#[derive(Clone, Serialize)]
pub struct SelectOutput {
    pub member: bool,
    pub level: u64,
    pub verdict: bool,
    pub lstar: u64,
}

/// Per-child ledger of streamed counts. Counts arrive contiguously from
/// the child's own level upward; `ended` closes the stream, after which
/// missing levels read as zero.
#[derive(Default)]
struct ChildStream {
    counts: Vec<(u64, u64)>,
    ended: Option<u64>,
}

impl ChildStream {
    fn covers(&self, idx: usize) -> bool {
        self.ended.is_some() || idx < self.counts.len()
    }

    fn value(&self, idx: usize) -> (u64, u64) {
        self.counts.get(idx).copied().unwrap_or((0, 0))
    }
}

struct SelectProgram {
    ell: u64,
    marked: bool,
    is_root: bool,
    level: Option<u64>,
    pslot: Option<usize>,
    heard: Vec<bool>,
    streams: Vec<Option<ChildStream>>,
    up_next: u64,
    up_done: bool,
    // root bookkeeping
    agg_next: u64,
    cum: u64,
    cum_marked: u64,
    out: Option<SelectOutput>,
}

impl SelectProgram {
    fn new(ell: u64, marked: bool, is_root: bool) -> Self {
        SelectProgram {
            ell,
            marked,
            is_root,
            level: None,
            pslot: None,
            heard: Vec::new(),
            streams: Vec::new(),
            up_next: 0,
            up_done: false,
            agg_next: 0,
            cum: 0,
            cum_marked: 0,
            out: None,
        }
    }

    fn adopt(&mut self, ctx: &mut Ctx, parent_slot: usize, parent_level: u64) {
        let m = parent_level + 1;
        self.level = Some(m);
        self.pslot = Some(parent_slot);
        self.up_next = m + 1;
        for slot in 0..ctx.links.len() {
            let msg = if slot == parent_slot {
                Message::new(vec![TAG_COUNT, m, 1, self.marked as u64])
            } else {
                Message::new(vec![TAG_WAVE, m])
            };
            ctx.send(slot, msg);
        }
    }

    /// Subtree count for level k is final once every link reported in and
    /// every child stream reaches k (or has ended below it).
    fn ready(&self, k: u64) -> bool {
        let m = self.level.unwrap();
        if k == m {
            return true;
        }
        if !self.heard.iter().all(|&h| h) {
            return false;
        }
        let idx = (k - m - 1) as usize;
        self.streams.iter().flatten().all(|s| s.covers(idx))
    }

    fn total(&self, k: u64) -> (u64, u64) {
        let m = self.level.unwrap();
        let (mut c, mut z) = if k == m { (1, self.marked as u64) } else { (0, 0) };
        if k > m {
            let idx = (k - m - 1) as usize;
            for s in self.streams.iter().flatten() {
                let (cc, zz) = s.value(idx);
                c += cc;
                z += zz;
            }
        }
        (c, z)
    }

    /// Largest level this subtree can still produce. None while any link
    /// is unheard (an unheard neighbor may yet become a child) or any
    /// child is mid-stream.
    fn stream_ceiling(&self) -> Option<u64> {
        if !self.heard.iter().all(|&h| h) {
            return None;
        }
        let mut last = self.level.unwrap();
        for s in self.streams.iter().flatten() {
            match s.ended {
                None => return None,
                Some(l) => last = last.max(l),
            }
        }
        Some(last)
    }

    fn forward_result(&mut self, ctx: &mut Ctx, lstar: u64, quota: u64, verdict: bool) {
        let m = self.level.unwrap();
        let child_slots: Vec<usize> = self
            .streams
            .iter()
            .enumerate()
            .filter_map(|(s, c)| c.as_ref().map(|_| s))
            .collect();
        let mut alloc = vec![0u64; child_slots.len()];
        if m < lstar {
            let idx = (lstar - m - 1) as usize;
            let mut rem = quota;
            for (i, &slot) in child_slots.iter().enumerate() {
                let (_, zz) = self.streams[slot].as_ref().unwrap().value(idx);
                let take = rem.min(zz);
                alloc[i] += take;
                rem -= take;
            }
            for (i, &slot) in child_slots.iter().enumerate() {
                let (cc, _) = self.streams[slot].as_ref().unwrap().value(idx);
                let take = rem.min(cc - alloc[i]);
                alloc[i] += take;
                rem -= take;
            }
            debug_assert_eq!(rem, 0, "boundary quota must fit the level count");
        }
        for (i, &slot) in child_slots.iter().enumerate() {
            let child_level = m + 1;
            let member = if child_level < lstar {
                1
            } else if child_level == lstar {
                debug_assert!(alloc[i] <= 1);
                alloc[i]
            } else {
                0
            };
            let flags = verdict as u64 | (member << 1);
            ctx.send(slot, Message::new(vec![TAG_RESULT, lstar, alloc[i], flags]));
        }
    }

    fn finish(&mut self, ctx: &mut Ctx, lstar: u64, quota: u64, member: bool, verdict: bool) -> Status {
        self.forward_result(ctx, lstar, quota, verdict);
        self.out = Some(SelectOutput {
            member,
            level: self.level.unwrap(),
            verdict,
            lstar,
        });
        Status::Halted
    }
}

impl NodeProgram for SelectProgram {
    type Output = SelectOutput;

    fn step(&mut self, ctx: &mut Ctx, inbox: &[Option<Message>]) -> Status {
        if ctx.round == 1 {
            self.heard = vec![false; ctx.links.len()];
            self.streams = (0..ctx.links.len()).map(|_| None).collect();
            if self.is_root {
                self.level = Some(0);
                for slot in 0..ctx.links.len() {
                    ctx.send(slot, Message::new(vec![TAG_WAVE, 0]));
                }
                return Status::Active;
            }
        }

        let mut wave: Option<(usize, u64)> = None;
        let mut result: Option<(u64, u64, u64)> = None;
        for (slot, msg) in inbox.iter().enumerate() {
            let Some(msg) = msg else { continue };
            let w = msg.words();
            self.heard[slot] = true;
            match w[0] {
                TAG_WAVE => {
                    if self.level.is_none() && wave.is_none() {
                        wave = Some((slot, w[1]));
                    }
                }
                TAG_COUNT => {
                    let level = self.level.expect("counts only flow to adopted parents");
                    let stream = self.streams[slot].get_or_insert_with(ChildStream::default);
                    debug_assert_eq!(w[1], level + 1 + stream.counts.len() as u64);
                    stream.counts.push((w[2], w[3]));
                }
                TAG_END => {
                    let stream = self.streams[slot].as_mut().expect("end without counts");
                    debug_assert!(stream.ended.is_none());
                    stream.ended = Some(w[1]);
                }
                TAG_RESULT => result = Some((w[1], w[2], w[3])),
                _ => unreachable!("unknown tag"),
            }
        }

        if let Some((slot, lvl)) = wave {
            self.adopt(ctx, slot, lvl);
            return Status::Active;
        }

        if let Some((lstar, quota, flags)) = result {
            let verdict = flags & 1 == 1;
            let member = flags & 2 != 0;
            return self.finish(ctx, lstar, quota, member, verdict);
        }

        if self.is_root {
            loop {
                if let Some(last) = self.stream_ceiling() {
                    if self.agg_next > last {
                        // every level is in and the target was never reached
                        self.out = Some(SelectOutput {
                            member: false,
                            level: 0,
                            verdict: false,
                            lstar: UNSAT,
                        });
                        return Status::Halted;
                    }
                }
                if !self.ready(self.agg_next) {
                    return Status::Active;
                }
                let (c, z) = self.total(self.agg_next);
                if self.cum + c >= self.ell {
                    let lstar = self.agg_next;
                    let quota = self.ell - self.cum;
                    let verdict = self.cum_marked >= 1 || z >= 1;
                    return self.finish(ctx, lstar, quota, true, verdict);
                }
                self.cum += c;
                self.cum_marked += z;
                self.agg_next += 1;
            }
        }

        if self.level.is_some() && !self.up_done {
            if let Some(last) = self.stream_ceiling() {
                if self.up_next > last {
                    let payload = self.up_next - 1;
                    let pslot = self.parent_slot();
                    ctx.send(pslot, Message::new(vec![TAG_END, payload]));
                    self.up_done = true;
                    return Status::Idle;
                }
            }
            if self.ready(self.up_next) {
                let (c, z) = self.total(self.up_next);
                let pslot = self.parent_slot();
                ctx.send(pslot, Message::new(vec![TAG_COUNT, self.up_next, c, z]));
                self.up_next += 1;
            }
            return Status::Active;
        }

        Status::Idle
    }

    fn output(&self) -> Option<SelectOutput> {
        self.out.clone()
    }
}

impl SelectProgram {
    fn parent_slot(&self) -> usize {
        self.pslot.expect("adopted nodes track their parent slot")
    }
}

#[derive(Debug, Error)]
pub enum SelectError {
    #[error("target size must be between 1 and n")]
    BadTarget,
    #[error("root's component has fewer than target nodes")]
    Unsatisfiable,
    #[error("simulation failed: {0}")]
    Sim(String),
}

pub struct SelectResult {
    /// Sorted ids of the ℓ selected nodes.
    pub members: Vec<NodeId>,
    pub member_flags: Vec<bool>,
    /// BFS level per node, None if the wave never arrived.
    pub levels: Vec<Option<u64>>,
    /// Boundary level of the selection.
    pub lstar: u64,
    /// True iff the selected set contains a marked node.
    pub verdict: bool,
    pub report: RunReport<SelectOutput>,
}

/// Selects the `ell` nodes closest to `root` in hop distance: every node
/// strictly inside the boundary level, plus enough boundary nodes to make
/// the count exact. `marked` biases boundary choice toward marked nodes
/// and feeds the verdict.
pub fn select_closest_marked(
    g: &Graph,
    root: NodeId,
    ell: u64,
    marked: &[bool],
    cfg: &SimConfig,
) -> Result<SelectResult, SelectError> {
    let n = g.n();
    assert!(n >= 3, "message encoding needs word range >= 3");
    assert_eq!(marked.len(), n);
    assert!(!g.is_weighted() && !g.is_directed(), "selection runs on plain graphs");
    if ell == 0 || ell > n as u64 {
        return Err(SelectError::BadTarget);
    }
    let programs: Vec<SelectProgram> = (0..n)
        .map(|v| SelectProgram::new(ell, marked[v], v == root))
        .collect();
    let report = crate::sim::run(g, programs, cfg).map_err(|e| SelectError::Sim(e.to_string()))?;

    let root_out = report.outputs[root]
        .as_ref()
        .ok_or_else(|| SelectError::Sim("root produced no output".into()))?;
    if root_out.lstar == UNSAT {
        return Err(SelectError::Unsatisfiable);
    }
    let lstar = root_out.lstar;
    let verdict = root_out.verdict;
    let mut members = Vec::new();
    let mut member_flags = vec![false; n];
    let mut levels = vec![None; n];
    for (v, out) in report.outputs.iter().enumerate() {
        let Some(out) = out else { continue };
        levels[v] = Some(out.level);
        if out.member {
            members.push(v);
            member_flags[v] = true;
        }
    }
    debug_assert_eq!(members.len() as u64, ell);
    Ok(SelectResult {
        members,
        member_flags,
        levels,
        lstar,
        verdict,
        report,
    })
}

/// Plain closest-set selection with no marks.
pub fn select_closest_set(
    g: &Graph,
    root: NodeId,
    ell: u64,
    cfg: &SimConfig,
) -> Result<SelectResult, SelectError> {
    select_closest_marked(g, root, ell, &vec![false; g.n()], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::{sssp_exact, Direction, Dist};
    use rand::{Rng, SeedableRng};

    fn check_basic(g: &Graph, root: NodeId, res: &SelectResult, ell: u64) {
        assert_eq!(res.members.len() as u64, ell);
        let oracle = sssp_exact(g, root, Direction::Outward).unwrap();
        let mut max_in = 0u64;
        let mut min_out = u64::MAX;
        for v in 0..g.n() {
            let Dist::Finite(d) = oracle.dist[v] else { continue };
            assert_eq!(res.levels[v], Some(d));
            if res.member_flags[v] {
                max_in = max_in.max(d);
            } else {
                min_out = min_out.min(d);
            }
        }
        assert!(max_in <= min_out, "selection must be distance monotone");
        assert_eq!(max_in, res.lstar);
    }

    #[test]
    fn star_center_takes_smallest_leaves() {
        let g = gen::star(6);
        let res = select_closest_set(&g, 0, 3, &SimConfig::default()).unwrap();
        assert_eq!(res.members, vec![0, 1, 2]);
        assert_eq!(res.lstar, 1);
        assert!(!res.verdict);
    }

    #[test]
    fn path_interior_root() {
        let g = gen::path(7);
        let res = select_closest_set(&g, 3, 4, &SimConfig::default()).unwrap();
        // levels 0 and 1 give {2,3,4}, one slot left at level 2 goes to id 1
        assert_eq!(res.members, vec![1, 2, 3, 4]);
        assert_eq!(res.lstar, 2);
    }

    #[test]
    fn full_target_takes_everyone() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = gen::random_tree(17, &mut rng);
        let res = select_closest_set(&g, 5, 17, &SimConfig::default()).unwrap();
        assert_eq!(res.members, (0..17).collect::<Vec<_>>());
        check_basic(&g, 5, &res, 17);
    }

    #[test]
    fn single_target_is_root_only() {
        let g = gen::clique(5);
        let res = select_closest_set(&g, 2, 1, &SimConfig::default()).unwrap();
        assert_eq!(res.members, vec![2]);
        assert_eq!(res.lstar, 0);
    }

    #[test]
    fn bad_targets_rejected() {
        let g = gen::path(4);
        assert!(matches!(
            select_closest_set(&g, 0, 0, &SimConfig::default()),
            Err(SelectError::BadTarget)
        ));
        assert!(matches!(
            select_closest_set(&g, 0, 5, &SimConfig::default()),
            Err(SelectError::BadTarget)
        ));
    }

    #[test]
    fn unreachable_target_detected() {
        let g = Graph::unweighted_undirected(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert!(matches!(
            select_closest_set(&g, 0, 4, &SimConfig::default()),
            Err(SelectError::Unsatisfiable)
        ));
        let ok = select_closest_set(&g, 0, 3, &SimConfig::default()).unwrap();
        assert_eq!(ok.members, vec![0, 1, 2]);
    }

    #[test]
    fn random_instances_are_monotone_and_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(555);
        for trial in 0..10 {
            let n = 20 + 4 * trial;
            let g = if trial % 2 == 0 {
                gen::random_tree(n, &mut rng)
            } else {
                gen::gnp_connected(n, 0.12, 100, &mut rng).unwrap().0
            };
            let root = rng.gen_range(0..n);
            let ell = rng.gen_range(1..=n as u64);
            let res = select_closest_set(&g, root, ell, &SimConfig::default()).unwrap();
            check_basic(&g, root, &res, ell);
            assert_eq!(res.report.violations.len(), 0);
        }
    }

    #[test]
    fn verdict_matches_membership() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(808);
        for _ in 0..12 {
            let n = 25;
            let g = gen::random_tree(n, &mut rng);
            let marked: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.2)).collect();
            let root = rng.gen_range(0..n);
            let ell = rng.gen_range(1..=n as u64);
            let res = select_closest_marked(&g, root, ell, &marked, &SimConfig::default()).unwrap();
            let has_marked_member = res.members.iter().any(|&v| marked[v]);
            assert_eq!(res.verdict, has_marked_member);
            // the split prefers marked nodes, so the verdict is maximal:
            // any marked node at or inside the boundary forces it true
            let reachable_marked = (0..n).any(|v| {
                marked[v] && res.levels[v].map_or(false, |d| d <= res.lstar)
            });
            assert_eq!(res.verdict, reachable_marked);
        }
    }
}

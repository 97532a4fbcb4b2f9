//! Deterministic synchronous round engine with CONGEST bandwidth accounting.
//!
//! Execution model: in every round each live node is stepped once, in node-id
//! order, with the messages addressed to it in the previous round. A node may
//! put at most one message on each incident channel per round, and in strict
//! mode every message must fit the configured word budget, each word lying in
//! `[0, n * w_max]` so a message serializes to O(log n) bits.
//!
//! Channels follow the communication graph: one bidirectional channel per
//! neighboring pair, even on digraphs (arc weights are visible on the channel,
//! messages flow both ways).
//!
//! A run ends when every node has halted, or when the system is quiescent:
//! no messages in flight and no node asking to be scheduled. The round count
//! of a quiescent run is the last round in which anything happened.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId, Weight};

/// One CONGEST message: a short vector of machine words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message(Vec<u64>);

impl Message {
    pub fn new(words: impl Into<Vec<u64>>) -> Self {
        Message(words.into())
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Bandwidth violations abort the run.
    Strict,
    /// Violations are recorded in the report and the message is delivered.
    LogOnly,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    /// Words allowed per channel per direction per round.
    pub w_words: usize,
    pub mode: Mode,
    pub round_cap: u64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { w_words: 4, mode: Mode::Strict, round_cap: 1_000_000, seed: 0 }
    }
}

impl SimConfig {
    pub fn seeded(seed: u64) -> Self {
        SimConfig { seed, ..SimConfig::default() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SimConfig { seed, ..self.clone() }
    }
}

/// A channel endpoint as one node sees it. `fwd_weight` is the weight of the
/// arc self -> peer (if present), `rev_weight` of peer -> self. On undirected
/// graphs both are set and equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub peer: NodeId,
    pub fwd_weight: Option<Weight>,
    pub rev_weight: Option<Weight>,
}

/// Index of the channel leading to `peer`. Panics if absent.
pub fn link_to(links: &[Link], peer: NodeId) -> usize {
    links
        .binary_search_by_key(&peer, |l| l.peer)
        .expect("no channel to requested peer")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Step me next round even if I receive nothing.
    Active,
    /// Step me only while messages can still reach me.
    Idle,
    /// Never step me again.
    Halted,
}

/// Per-step view and effect buffer handed to a node program.
pub struct Ctx<'a> {
    pub id: NodeId,
    pub n: usize,
    pub round: u64,
    pub links: &'a [Link],
    rng: &'a mut ChaCha8Rng,
    sends: &'a mut Vec<(usize, Message)>,
}

impl Ctx<'_> {
    pub fn send(&mut self, link: usize, msg: Message) {
        debug_assert!(link < self.links.len());
        self.sends.push((link, msg));
    }

    pub fn broadcast(&mut self, msg: &Message) {
        for link in 0..self.links.len() {
            self.sends.push((link, msg.clone()));
        }
    }

    /// This node's private random stream, seeded by (run seed, node id).
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        self.rng
    }
}

/// A node-local protocol. `step` sees only the node's own state, its channel
/// list, and this round's inbox; there is no way to reach global graph data.
pub trait NodeProgram {
    type Output: Clone + Serialize;

    fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Option<Message>]) -> Status;

    fn output(&self) -> Option<Self::Output>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub round: u64,
    pub from: NodeId,
    pub to: NodeId,
    pub words: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<O> {
    pub rounds: u64,
    pub messages_total: u64,
    pub max_words_on_any_edge_round: usize,
    pub violations: Vec<Violation>,
    pub outputs: Vec<Option<O>>,
    pub rng_seed: u64,
    pub w_words: usize,
}

#[derive(Debug)]
pub enum SimError<O> {
    /// `round_cap` elapsed without halting or quiescence.
    Timeout { report: RunReport<O> },
    /// Strict-mode bandwidth violation.
    Bandwidth { violation: Violation, report: RunReport<O> },
}

impl<O> SimError<O> {
    pub fn report(&self) -> &RunReport<O> {
        match self {
            SimError::Timeout { report } => report,
            SimError::Bandwidth { report, .. } => report,
        }
    }
}

impl<O> fmt::Display for SimError<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Timeout { report } => {
                write!(f, "simulation hit round cap after {} rounds", report.rounds)
            }
            SimError::Bandwidth { violation, .. } => write!(
                f,
                "bandwidth violation at round {}: {} -> {} carried {} words",
                violation.round, violation.from, violation.to, violation.words
            ),
        }
    }
}

impl<O: fmt::Debug> std::error::Error for SimError<O> {}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Stable seed derivation for sub-phases and per-node streams.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    splitmix64(seed ^ splitmix64(salt))
}

/// The private random stream of `node` under a run seed.
pub fn node_rng(seed: u64, node: NodeId) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, node as u64 + 1))
}

/// Per-node channel lists of the communication graph, sorted by peer id.
pub fn channels(g: &Graph) -> Vec<Vec<Link>> {
    let mut links: Vec<Vec<Link>> = vec![Vec::new(); g.n()];
    for u in 0..g.n() {
        let mut out = g.out(u).iter().peekable();
        let mut inc = g.inc(u).iter().peekable();
        // Both lists are sorted by peer; merge them into one channel per peer.
        loop {
            let fwd = out.peek().copied();
            let rev = inc.peek().copied();
            let link = match (fwd, rev) {
                (None, None) => break,
                (Some(&(v, w)), None) => {
                    out.next();
                    Link { peer: v, fwd_weight: Some(w), rev_weight: None }
                }
                (None, Some(&(v, w))) => {
                    inc.next();
                    Link { peer: v, fwd_weight: None, rev_weight: Some(w) }
                }
                (Some(&(a, wa)), Some(&(b, wb))) => {
                    if a < b {
                        out.next();
                        Link { peer: a, fwd_weight: Some(wa), rev_weight: None }
                    } else if b < a {
                        inc.next();
                        Link { peer: b, fwd_weight: None, rev_weight: Some(wb) }
                    } else {
                        out.next();
                        inc.next();
                        Link { peer: a, fwd_weight: Some(wa), rev_weight: Some(wb) }
                    }
                }
            };
            links[u].push(link);
        }
    }
    links
}

/// Runs `programs` (one per node) to halting or quiescence.
pub fn run<P: NodeProgram>(
    g: &Graph,
    mut programs: Vec<P>,
    cfg: &SimConfig,
) -> Result<RunReport<P::Output>, SimError<P::Output>> {
    let n = g.n();
    assert_eq!(programs.len(), n, "need exactly one program per node");
    let links = channels(g);
    // Slot of u in v's link list, for routing u's sends into v's inbox.
    let return_slot: Vec<Vec<usize>> = (0..n)
        .map(|u| links[u].iter().map(|l| link_to(&links[l.peer], u)).collect())
        .collect();
    let word_limit = (n as u64) * g.max_weight();

    let mut rngs: Vec<ChaCha8Rng> = (0..n).map(|v| node_rng(cfg.seed, v)).collect();
    let mut statuses = vec![Status::Active; n];
    let mut inboxes: Vec<Vec<Option<Message>>> = (0..n).map(|v| vec![None; links[v].len()]).collect();
    let mut pending_msgs = 0u64;

    let mut messages_total = 0u64;
    let mut max_words = 0usize;
    let mut violations = Vec::new();
    let mut rounds = 0u64;
    let mut all_halted = false;

    let make_report = |rounds: u64,
                       messages_total: u64,
                       max_words: usize,
                       violations: Vec<Violation>,
                       programs: &[P]| RunReport {
        rounds,
        messages_total,
        max_words_on_any_edge_round: max_words,
        violations,
        outputs: programs.iter().map(|p| p.output()).collect(),
        rng_seed: cfg.seed,
        w_words: cfg.w_words,
    };

    for round in 1..=cfg.round_cap {
        if round > 1 {
            let any_active = statuses.iter().any(|&s| s == Status::Active);
            if pending_msgs == 0 && !any_active {
                rounds = round - 1;
                all_halted = true; // quiescent counts as finished
                break;
            }
        }
        let mut next: Vec<Vec<Option<Message>>> = (0..n).map(|v| vec![None; links[v].len()]).collect();
        let mut next_pending = 0u64;
        let mut sends: Vec<(usize, Message)> = Vec::new();
        for v in 0..n {
            if statuses[v] == Status::Halted {
                continue;
            }
            sends.clear();
            let inbox = std::mem::replace(&mut inboxes[v], vec![None; links[v].len()]);
            let mut ctx = Ctx {
                id: v,
                n,
                round,
                links: &links[v],
                rng: &mut rngs[v],
                sends: &mut sends,
            };
            statuses[v] = programs[v].step(&mut ctx, &inbox);
            for (link_ix, msg) in sends.drain(..) {
                let to = links[v][link_ix].peer;
                let words = msg.words().len();
                messages_total += 1;
                max_words = max_words.max(words);
                let oversize = words > cfg.w_words || msg.words().iter().any(|&w| w > word_limit);
                if oversize {
                    let violation = Violation { round, from: v, to, words };
                    violations.push(violation.clone());
                    if cfg.mode == Mode::Strict {
                        let report =
                            make_report(round, messages_total, max_words, violations, &programs);
                        return Err(SimError::Bandwidth { violation, report });
                    }
                }
                let slot = &mut next[to][return_slot[v][link_ix]];
                assert!(slot.is_none(), "two messages on one channel direction in round {round}");
                *slot = Some(msg);
                next_pending += 1;
            }
        }
        inboxes = next;
        pending_msgs = next_pending;
        rounds = round;
        if statuses.iter().all(|&s| s == Status::Halted) {
            all_halted = true;
            break;
        }
    }

    let report = make_report(rounds, messages_total, max_words, violations, &programs);
    if all_halted {
        Ok(report)
    } else {
        Err(SimError::Timeout { report })
    }
}

/// A rooted spanning tree of the communication graph, as produced by BFS.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: NodeId,
    pub parent: Vec<Option<NodeId>>,
    pub children: Vec<Vec<NodeId>>,
    pub depth: Vec<u64>,
    pub height: u64,
}

impl SpanningTree {
    pub fn from_parents(root: NodeId, parent: &[Option<NodeId>]) -> Result<Self, String> {
        let n = parent.len();
        if root >= n || parent[root].is_some() {
            return Err("root must exist and have no parent".into());
        }
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = parent[v] {
                if p >= n {
                    return Err(format!("parent of {v} out of range"));
                }
                children[p].push(v);
            } else if v != root {
                return Err(format!("node {v} is unreachable (no parent)"));
            }
        }
        let mut depth = vec![u64::MAX; n];
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut seen = 1usize;
        let mut height = 0;
        while let Some(u) = queue.pop_front() {
            for &c in &children[u] {
                depth[c] = depth[u] + 1;
                height = height.max(depth[c]);
                seen += 1;
                queue.push_back(c);
            }
        }
        if seen != n {
            return Err("parent pointers contain a cycle".into());
        }
        Ok(SpanningTree { root, parent: parent.to_vec(), children, depth, height })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReduceOp {
    Max,
    Min,
    Sum,
    Or,
}

/// One aggregation component; `with_arg` tracks the node achieving the
/// extremum (ties go to the smaller id). Only valid for Max and Min.
#[derive(Debug, Clone, Copy)]
pub struct ReduceItem {
    pub op: ReduceOp,
    pub with_arg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RVal {
    pub val: u64,
    pub arg: Option<NodeId>,
}

impl RVal {
    pub fn plain(val: u64) -> Self {
        RVal { val, arg: None }
    }

    pub fn tagged(val: u64, arg: NodeId) -> Self {
        RVal { val, arg: Some(arg) }
    }
}

pub(crate) fn reduce_identity(item: &ReduceItem, limit: u64) -> RVal {
    match item.op {
        ReduceOp::Max | ReduceOp::Sum | ReduceOp::Or => RVal { val: 0, arg: None },
        ReduceOp::Min => RVal { val: limit, arg: None },
    }
}

pub(crate) fn reduce_merge(item: &ReduceItem, a: RVal, b: RVal) -> RVal {
    let arg_rank = |r: &RVal| r.arg.unwrap_or(usize::MAX);
    let b_wins_tie = |better: bool| better || arg_rank(&b) < arg_rank(&a);
    match item.op {
        ReduceOp::Sum => RVal { val: a.val + b.val, arg: None },
        ReduceOp::Or => RVal { val: (a.val | b.val).min(1), arg: None },
        ReduceOp::Max => {
            if b.val != a.val {
                if b.val > a.val { b } else { a }
            } else if b_wins_tie(false) {
                b
            } else {
                a
            }
        }
        ReduceOp::Min => {
            if b.val != a.val {
                if b.val < a.val { b } else { a }
            } else if b_wins_tie(false) {
                b
            } else {
                a
            }
        }
    }
}

/// Convergecast of the component vector up a spanning tree, then a broadcast
/// of the result back down. Every node ends up holding the aggregate.
pub struct TreeReduceProgram {
    items: Vec<ReduceItem>,
    acc: Vec<RVal>,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    children_left: usize,
    sent_up: bool,
    final_vals: Option<Vec<RVal>>,
    none_id: NodeId,
}

impl TreeReduceProgram {
    pub fn new(items: Vec<ReduceItem>, mine: Vec<RVal>, tree: &SpanningTree, me: NodeId, limit: u64) -> Self {
        assert_eq!(items.len(), mine.len());
        let width: usize = items.iter().map(|i| 1 + i.with_arg as usize).sum();
        assert!(width <= 4, "reduce vector too wide for the word budget");
        for (item, v) in items.iter().zip(&mine) {
            assert!(item.with_arg || v.arg.is_none());
            assert!(
                !item.with_arg || matches!(item.op, ReduceOp::Max | ReduceOp::Min),
                "arg tracking only for Max/Min"
            );
            let _ = reduce_identity(item, limit);
        }
        TreeReduceProgram {
            items,
            acc: mine,
            parent: tree.parent[me],
            children: tree.children[me].clone(),
            children_left: tree.children[me].len(),
            sent_up: false,
            final_vals: None,
            none_id: tree.parent.len(),
        }
    }

    fn encode(&self, vals: &[RVal]) -> Message {
        let mut words = Vec::new();
        for (item, v) in self.items.iter().zip(vals) {
            words.push(v.val);
            if item.with_arg {
                words.push(v.arg.unwrap_or(self.none_id) as u64);
            }
        }
        Message::new(words)
    }

    fn decode(&self, msg: &Message) -> Vec<RVal> {
        let mut vals = Vec::with_capacity(self.items.len());
        let mut it = msg.words().iter();
        for item in &self.items {
            let val = *it.next().expect("truncated reduce message");
            let arg = if item.with_arg {
                let raw = *it.next().expect("truncated reduce message") as usize;
                (raw != self.none_id).then_some(raw)
            } else {
                None
            };
            vals.push(RVal { val, arg });
        }
        vals
    }
}

impl NodeProgram for TreeReduceProgram {
    type Output = Vec<RVal>;

    fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Option<Message>]) -> Status {
        for (slot, msg) in inbox.iter().enumerate() {
            let Some(msg) = msg else { continue };
            let from = ctx.links[slot].peer;
            if Some(from) == self.parent {
                // Result coming down.
                self.final_vals = Some(self.decode(msg));
            } else {
                debug_assert!(self.children.contains(&from));
                let vals = self.decode(msg);
                for ((item, acc), v) in self.items.iter().zip(self.acc.iter_mut()).zip(vals) {
                    *acc = reduce_merge(item, *acc, v);
                }
                self.children_left -= 1;
            }
        }
        if self.children_left == 0 && !self.sent_up {
            self.sent_up = true;
            match self.parent {
                Some(p) => {
                    let msg = self.encode(&self.acc);
                    let link = link_to(ctx.links, p);
                    ctx.send(link, msg);
                }
                None => self.final_vals = Some(self.acc.clone()),
            }
        }
        if let Some(vals) = self.final_vals.clone() {
            // Forward the result to the subtree, then stop.
            let msg = self.encode(&vals);
            for &c in &self.children {
                ctx.send(link_to(ctx.links, c), msg.clone());
            }
            return Status::Halted;
        }
        Status::Idle
    }

    fn output(&self) -> Option<Vec<RVal>> {
        self.final_vals.clone()
    }
}

/// Aggregates `values` with `op` over a spanning tree; every node learns the
/// result. Returns the aggregate and the run report.
pub fn tree_reduce(
    g: &Graph,
    tree: &SpanningTree,
    items: Vec<ReduceItem>,
    values: Vec<Vec<RVal>>,
    cfg: &SimConfig,
) -> Result<(Vec<RVal>, RunReport<Vec<RVal>>), SimError<Vec<RVal>>> {
    assert_eq!(values.len(), g.n());
    let limit = (g.n() as u64) * g.max_weight();
    let programs: Vec<TreeReduceProgram> = values
        .into_iter()
        .enumerate()
        .map(|(v, vals)| TreeReduceProgram::new(items.clone(), vals, tree, v, limit))
        .collect();
    let report = run(g, programs, cfg)?;
    let result = report.outputs[tree.root].clone().expect("root always finishes");
    Ok((result, report))
}

/// Single-component convenience wrapper: every node contributes one value.
pub fn broadcast_and_aggregate(
    g: &Graph,
    tree: &SpanningTree,
    op: ReduceOp,
    values: &[u64],
    cfg: &SimConfig,
) -> Result<(u64, RunReport<Vec<RVal>>), SimError<Vec<RVal>>> {
    let vals: Vec<Vec<RVal>> = values.iter().map(|&v| vec![RVal::plain(v)]).collect();
    let (result, report) = tree_reduce(g, tree, vec![ReduceItem { op, with_arg: false }], vals, cfg)?;
    Ok((result[0].val, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    /// Plain BFS parent array computed outside the simulator, for tree fixtures.
    fn bfs_parents(g: &Graph, root: NodeId) -> Vec<Option<NodeId>> {
        let mut parent = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in g.out(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    fn bfs_tree(g: &Graph, root: NodeId) -> SpanningTree {
        SpanningTree::from_parents(root, &bfs_parents(g, root)).unwrap()
    }

    /// Round 1: broadcast own id. Round 2: record everything heard, halt.
    struct Echo {
        me: NodeId,
        heard: Vec<u64>,
    }

    impl NodeProgram for Echo {
        type Output = Vec<u64>;

        fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Option<Message>]) -> Status {
            assert_eq!(ctx.id, self.me, "program stepped under a foreign id");
            assert_eq!(inbox.len(), ctx.links.len());
            if ctx.round == 1 {
                ctx.broadcast(&Message::new(vec![ctx.id as u64]));
                Status::Idle
            } else {
                for msg in inbox.iter().flatten() {
                    self.heard.push(msg.words()[0]);
                }
                self.heard.sort_unstable();
                Status::Halted
            }
        }

        fn output(&self) -> Option<Vec<u64>> {
            Some(self.heard.clone())
        }
    }

    #[test]
    fn echo_pair_takes_two_rounds() {
        let g = gen::path(2);
        let programs = vec![Echo { me: 0, heard: vec![] }, Echo { me: 1, heard: vec![] }];
        let report = run(&g, programs, &SimConfig::default()).unwrap();
        assert_eq!(report.rounds, 2);
        assert_eq!(report.messages_total, 2);
        assert_eq!(report.max_words_on_any_edge_round, 1);
        assert!(report.violations.is_empty());
        assert_eq!(report.outputs[0], Some(vec![1]));
        assert_eq!(report.outputs[1], Some(vec![0]));
    }

    #[test]
    fn echo_on_star_sees_all_leaves() {
        let g = gen::star(5);
        let programs: Vec<Echo> = (0..5).map(|v| Echo { me: v, heard: vec![] }).collect();
        let report = run(&g, programs, &SimConfig::default()).unwrap();
        assert_eq!(report.rounds, 2);
        assert_eq!(report.outputs[0], Some(vec![1, 2, 3, 4]));
        assert_eq!(report.outputs[3], Some(vec![0]));
    }

    struct WideSender;

    impl NodeProgram for WideSender {
        type Output = ();

        fn step(&mut self, ctx: &mut Ctx<'_>, _inbox: &[Option<Message>]) -> Status {
            if ctx.round == 1 && ctx.id == 0 {
                ctx.send(0, Message::new(vec![0; 5]));
            }
            Status::Halted
        }

        fn output(&self) -> Option<()> {
            Some(())
        }
    }

    #[test]
    fn strict_mode_rejects_wide_message() {
        let g = gen::path(2);
        let err = run(&g, vec![WideSender, WideSender], &SimConfig::default()).unwrap_err();
        match err {
            SimError::Bandwidth { violation, .. } => {
                assert_eq!(violation.round, 1);
                assert_eq!(violation.from, 0);
                assert_eq!(violation.to, 1);
                assert_eq!(violation.words, 5);
            }
            other => panic!("expected bandwidth error, got {other}"),
        }
    }

    #[test]
    fn log_only_mode_records_and_delivers() {
        let g = gen::path(2);
        let cfg = SimConfig { mode: Mode::LogOnly, ..SimConfig::default() };
        let report = run(&g, vec![WideSender, WideSender], &cfg).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.max_words_on_any_edge_round, 5);
    }

    struct RangeBuster;

    impl NodeProgram for RangeBuster {
        type Output = ();

        fn step(&mut self, ctx: &mut Ctx<'_>, _inbox: &[Option<Message>]) -> Status {
            if ctx.round == 1 && ctx.id == 0 {
                // n * w_max on an unweighted pair is 2; 3 is out of range.
                ctx.send(0, Message::new(vec![3]));
            }
            Status::Halted
        }

        fn output(&self) -> Option<()> {
            Some(())
        }
    }

    #[test]
    fn words_must_stay_within_n_times_max_weight() {
        let g = gen::path(2);
        let err = run(&g, vec![RangeBuster, RangeBuster], &SimConfig::default()).unwrap_err();
        assert!(matches!(err, SimError::Bandwidth { .. }));
    }

    struct Spinner;

    impl NodeProgram for Spinner {
        type Output = ();

        fn step(&mut self, _ctx: &mut Ctx<'_>, _inbox: &[Option<Message>]) -> Status {
            Status::Active
        }

        fn output(&self) -> Option<()> {
            None
        }
    }

    #[test]
    fn round_cap_turns_into_timeout() {
        let g = gen::path(3);
        let cfg = SimConfig { round_cap: 50, ..SimConfig::default() };
        let err = run(&g, vec![Spinner, Spinner, Spinner], &cfg).unwrap_err();
        match err {
            SimError::Timeout { report } => assert_eq!(report.rounds, 50),
            other => panic!("expected timeout, got {other}"),
        }
    }

    /// Sends once, then idles forever; the run must end by quiescence.
    struct OneShot;

    impl NodeProgram for OneShot {
        type Output = u64;

        fn step(&mut self, ctx: &mut Ctx<'_>, _inbox: &[Option<Message>]) -> Status {
            if ctx.round == 1 {
                ctx.broadcast(&Message::new(vec![1]));
            }
            Status::Idle
        }

        fn output(&self) -> Option<u64> {
            Some(0)
        }
    }

    #[test]
    fn quiescence_ends_run_without_halting() {
        let g = gen::path(4);
        let report = run(&g, vec![OneShot, OneShot, OneShot, OneShot], &SimConfig::default()).unwrap();
        // Round 1 sends, round 2 delivers into silence, nothing after.
        assert_eq!(report.rounds, 2);
    }

    struct CoinFlipper {
        sent: Option<u64>,
    }

    impl NodeProgram for CoinFlipper {
        type Output = u64;

        fn step(&mut self, ctx: &mut Ctx<'_>, _inbox: &[Option<Message>]) -> Status {
            if ctx.round == 1 {
                let coin = ctx.rng().gen_range(0..=2u64);
                self.sent = Some(coin);
                ctx.broadcast(&Message::new(vec![coin]));
                return Status::Idle;
            }
            Status::Halted
        }

        fn output(&self) -> Option<u64> {
            self.sent
        }
    }

    #[test]
    fn equal_seeds_give_byte_identical_reports() {
        let g = gen::path(3);
        let run_once = |seed: u64| {
            let programs = (0..3).map(|_| CoinFlipper { sent: None }).collect();
            let report = run(&g, programs, &SimConfig::seeded(seed)).unwrap();
            serde_json::to_string(&report).unwrap()
        };
        assert_eq!(run_once(11), run_once(11));
        assert_eq!(run_once(977), run_once(977));
    }

    #[test]
    fn node_streams_differ_between_nodes() {
        let mut a = node_rng(5, 0);
        let mut b = node_rng(5, 1);
        let xs: Vec<u64> = (0..4).map(|_| a.gen()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.gen()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn spanning_tree_validation() {
        // 0 <- 1 <- 2 is fine rooted at 0.
        let t = SpanningTree::from_parents(0, &[None, Some(0), Some(1)]).unwrap();
        assert_eq!(t.height, 2);
        assert_eq!(t.depth, vec![0, 1, 2]);
        assert_eq!(t.children[0], vec![1]);
        // Unreachable node.
        assert!(SpanningTree::from_parents(0, &[None, Some(0), None]).is_err());
        // Cycle below the root.
        assert!(SpanningTree::from_parents(0, &[None, Some(2), Some(1)]).is_err());
        // Root with a parent.
        assert!(SpanningTree::from_parents(0, &[Some(1), Some(0)]).is_err());
    }

    #[test]
    fn aggregate_max_on_star() {
        let g = gen::star(6);
        let tree = bfs_tree(&g, 0);
        let values = vec![3, 6, 4, 1, 5, 2];
        let (max, report) = broadcast_and_aggregate(&g, &tree, ReduceOp::Max, &values, &SimConfig::default()).unwrap();
        assert_eq!(max, 6);
        assert!(report.violations.is_empty());
        // Convergecast + broadcast over a height-1 tree.
        assert!(report.rounds <= 2 * tree.height + 2);
        // Every node learned the answer.
        for out in &report.outputs {
            assert_eq!(out.as_ref().unwrap()[0].val, 6);
        }
    }

    #[test]
    fn aggregate_sum_counts_ones_on_path() {
        let g = gen::path(4);
        let tree = bfs_tree(&g, 0);
        let (sum, report) = broadcast_and_aggregate(&g, &tree, ReduceOp::Sum, &[1, 1, 1, 1], &SimConfig::default()).unwrap();
        assert_eq!(sum, 4);
        assert_eq!(report.rounds, 2 * tree.height + 1);
    }

    #[test]
    fn aggregate_or_is_boolean() {
        let g = gen::path(5);
        let tree = bfs_tree(&g, 2);
        let (any, _) = broadcast_and_aggregate(&g, &tree, ReduceOp::Or, &[0, 0, 1, 0, 1], &SimConfig::default()).unwrap();
        assert_eq!(any, 1);
        let (none, _) = broadcast_and_aggregate(&g, &tree, ReduceOp::Or, &[0; 5], &SimConfig::default()).unwrap();
        assert_eq!(none, 0);
    }

    #[test]
    fn aggregate_min_matches_sequential_on_random_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = gen::random_tree(20, &mut rng);
        let tree = bfs_tree(&g, 0);
        let values: Vec<u64> = (0..20).map(|v| ((v * 13 + 5) % 17) as u64).collect();
        let (min, _) = broadcast_and_aggregate(&g, &tree, ReduceOp::Min, &values, &SimConfig::default()).unwrap();
        assert_eq!(min, *values.iter().min().unwrap());
    }

    #[test]
    fn argmax_breaks_ties_toward_smaller_id() {
        let g = gen::star(5);
        let tree = bfs_tree(&g, 0);
        let items = vec![ReduceItem { op: ReduceOp::Max, with_arg: true }];
        let values: Vec<Vec<RVal>> = [2u64, 5, 3, 5, 1]
            .iter()
            .enumerate()
            .map(|(v, &x)| vec![RVal::tagged(x, v)])
            .collect();
        let (result, _) = tree_reduce(&g, &tree, items, values, &SimConfig::default()).unwrap();
        assert_eq!(result[0], RVal::tagged(5, 1));
    }

    #[test]
    fn multi_component_reduce_carries_min_and_max_together() {
        let g = gen::path(6);
        let tree = bfs_tree(&g, 3);
        let items = vec![
            ReduceItem { op: ReduceOp::Min, with_arg: true },
            ReduceItem { op: ReduceOp::Max, with_arg: true },
        ];
        let values: Vec<Vec<RVal>> = [5u64, 2, 6, 2, 4, 6]
            .iter()
            .enumerate()
            .map(|(v, &x)| vec![RVal::tagged(x, v), RVal::tagged(x, v)])
            .collect();
        let (result, report) = tree_reduce(&g, &tree, items, values, &SimConfig::default()).unwrap();
        assert_eq!(result[0], RVal::tagged(2, 1));
        assert_eq!(result[1], RVal::tagged(6, 2));
        assert_eq!(report.max_words_on_any_edge_round, 4);
    }

    #[test]
    fn single_node_reduce_finishes_in_one_round() {
        let g = Graph::undirected(1, &[]).unwrap();
        let tree = SpanningTree::from_parents(0, &[None]).unwrap();
        let (sum, report) = broadcast_and_aggregate(&g, &tree, ReduceOp::Sum, &[7], &SimConfig::default()).unwrap();
        assert_eq!(sum, 7);
        assert_eq!(report.rounds, 1);
        assert_eq!(report.messages_total, 0);
    }

    #[test]
    fn channels_merge_arc_directions() {
        let g = Graph::directed(3, &[(0, 1, 4), (1, 0, 9), (1, 2, 2)]).unwrap();
        let links = channels(&g);
        assert_eq!(links[0], vec![Link { peer: 1, fwd_weight: Some(4), rev_weight: Some(9) }]);
        assert_eq!(
            links[1],
            vec![
                Link { peer: 0, fwd_weight: Some(9), rev_weight: Some(4) },
                Link { peer: 2, fwd_weight: Some(2), rev_weight: None },
            ]
        );
        assert_eq!(links[2], vec![Link { peer: 1, fwd_weight: None, rev_weight: Some(2) }]);
    }

    #[test]
    fn mix_seed_is_stable_and_spreads() {
        assert_eq!(mix_seed(1, 2), mix_seed(1, 2));
        assert_ne!(mix_seed(1, 2), mix_seed(1, 3));
        assert_ne!(mix_seed(1, 2), mix_seed(2, 2));
    }
}

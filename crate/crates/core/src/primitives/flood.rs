//! Extremum flooding: every node holds an optional candidate tuple; the best
//! tuple under a caller-supplied ordering floods the network by greedy
//! forwarding. Converges within D+O(1) rounds of the last candidate's birth.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::graph::Graph;
use crate::sim::{run, Ctx, Message, NodeProgram, RunReport, SimConfig, SimError, Status};

pub type TupleCmp = Arc<dyn Fn(&[u64], &[u64]) -> Ordering + Send + Sync>;

pub struct FloodProgram {
    best: Option<Vec<u64>>,
    cmp: TupleCmp,
    dirty: bool,
}

impl FloodProgram {
    pub fn new(candidate: Option<Vec<u64>>, cmp: TupleCmp) -> Self {
        if let Some(c) = &candidate {
            assert!(c.len() <= 4, "flood tuple exceeds word budget");
        }
        FloodProgram { dirty: candidate.is_some(), best: candidate, cmp }
    }
}

impl NodeProgram for FloodProgram {
    type Output = Vec<u64>;

    fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Option<Message>]) -> Status {
        for msg in inbox.iter().flatten() {
            let cand = msg.words();
            let better = match &self.best {
                None => true,
                Some(b) => (self.cmp)(cand, b) == Ordering::Greater,
            };
            if better {
                self.best = Some(cand.to_vec());
                self.dirty = true;
            }
        }
        if self.dirty {
            self.dirty = false;
            let msg = Message::new(self.best.clone().expect("dirty implies a candidate"));
            ctx.broadcast(&msg);
        }
        Status::Idle
    }

    fn output(&self) -> Option<Vec<u64>> {
        self.best.clone()
    }
}

#[derive(Debug, Clone)]
pub struct FloodResult {
    /// The winning tuple, None when no node offered a candidate.
    pub best: Option<Vec<u64>>,
    pub report: RunReport<Vec<u64>>,
}

/// Floods the maximum of `candidates` under `cmp` to every node. On a
/// connected graph all nodes end up agreeing; the caller reads `best`.
pub fn flood_extremum(
    g: &Graph,
    candidates: Vec<Option<Vec<u64>>>,
    cmp: TupleCmp,
    cfg: &SimConfig,
) -> Result<FloodResult, SimError<Vec<u64>>> {
    assert_eq!(candidates.len(), g.n());
    let programs: Vec<FloodProgram> = candidates
        .into_iter()
        .map(|c| FloodProgram::new(c, cmp.clone()))
        .collect();
    let report = run(g, programs, cfg)?;
    let mut best: Option<Vec<u64>> = None;
    for out in report.outputs.iter().flatten() {
        let better = match &best {
            None => true,
            Some(b) => cmp(out, b) == Ordering::Greater,
        };
        if better {
            best = Some(out.clone());
        }
    }
    Ok(FloodResult { best, report })
}

/// Ordering for (value, id) pairs: larger value first, then smaller id.
pub fn max_value_min_id(a: &[u64], b: &[u64]) -> Ordering {
    a[0].cmp(&b[0]).then(b[1].cmp(&a[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn cmp() -> TupleCmp {
        Arc::new(max_value_min_id)
    }

    #[test]
    fn single_candidate_reaches_everyone() {
        let g = gen::path(6);
        let mut cands = vec![None; 6];
        cands[4] = Some(vec![3, 4]);
        let res = flood_extremum(&g, cands, cmp(), &SimConfig::default()).unwrap();
        assert_eq!(res.best, Some(vec![3, 4]));
        for out in &res.report.outputs {
            assert_eq!(out.as_ref().unwrap(), &vec![3, 4]);
        }
        // Farthest node is 5 hops away.
        assert!(res.report.rounds <= 6 + 2);
    }

    #[test]
    fn ties_fall_to_smaller_id() {
        let g = gen::clique(5);
        let cands: Vec<Option<Vec<u64>>> =
            (0..5).map(|v| Some(vec![2, v as u64])).collect();
        let res = flood_extremum(&g, cands, cmp(), &SimConfig::default()).unwrap();
        assert_eq!(res.best, Some(vec![2, 0]));
    }

    #[test]
    fn no_candidates_mean_no_winner() {
        let g = gen::path(3);
        let res = flood_extremum(&g, vec![None; 3], cmp(), &SimConfig::default()).unwrap();
        assert!(res.best.is_none());
        assert_eq!(res.report.rounds, 1);
    }
}

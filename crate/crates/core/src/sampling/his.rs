//! Hierarchical importance samplers: periphery traversal with weighted
//! core-neighbor augmentation.

use std::collections::{HashMap, VecDeque};

use rand::Rng;

use super::weights::{core_draw_count, core_weights, periphery_weights};
use super::{NodeOrigin, ResolvedConfig, SampleOutcome};
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::partition::CorePeripheryPartition;

/// Rejection attempts before a seed draw falls back to scanning the periphery.
const SEED_REJECTIONS: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Queued,
    Member(NodeOrigin),
}

/// Working state shared by both samplers.
struct Draft<'a> {
    graph: &'a Graph,
    partition: &'a CorePeripheryPartition,
    gamma: f64,
    slots: HashMap<NodeId, Slot>,
    members: usize,
    periphery_members: usize,
}

impl<'a> Draft<'a> {
    fn new(graph: &'a Graph, partition: &'a CorePeripheryPartition, gamma: f64) -> Self {
        Self {
            graph,
            partition,
            gamma,
            slots: HashMap::new(),
            members: 0,
            periphery_members: 0,
        }
    }

    fn is_member(&self, v: usize) -> bool {
        matches!(self.slots.get(&(v as NodeId)), Some(Slot::Member(_)))
    }

    fn is_tracked(&self, v: usize) -> bool {
        self.slots.contains_key(&(v as NodeId))
    }

    fn admit(&mut self, v: usize, origin: NodeOrigin) {
        let slot = self.slots.entry(v as NodeId).or_insert(Slot::Queued);
        if *slot == Slot::Queued {
            *slot = Slot::Member(origin);
            self.members += 1;
            if !self.partition.is_core(v) {
                self.periphery_members += 1;
            }
        }
    }

    fn periphery_exhausted(&self) -> bool {
        self.periphery_members >= self.partition.periphery_count()
    }

    /// Draws `⟨γ·|N_cor(v)|⟩` distinct core neighbors of `v` into the subgraph.
    fn add_core_neighbors<R: Rng + ?Sized>(&mut self, v: usize, rng: &mut R) -> Result<()> {
        let dist = core_weights(self.graph, self.partition, v)?;
        let t = core_draw_count(self.gamma, dist.len());
        for u in dist.sample_without_replacement(rng, t) {
            self.admit(u as usize, NodeOrigin::Core);
        }
        Ok(())
    }

    /// Uniform periphery node not yet tracked, or `None` when none remain.
    fn fresh_seed<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let per = self.partition.periphery_nodes();
        for _ in 0..SEED_REJECTIONS {
            let w = per[rng.random_range(0..per.len())] as usize;
            if !self.is_tracked(w) {
                return Some(w);
            }
        }
        let rest: Vec<NodeId> = per
            .iter()
            .copied()
            .filter(|&w| !self.is_tracked(w as usize))
            .collect();
        if rest.is_empty() {
            None
        } else {
            Some(rest[rng.random_range(0..rest.len())] as usize)
        }
    }

    fn finish(self, truncated: bool) -> Result<SampleOutcome> {
        let members = self
            .slots
            .into_iter()
            .filter_map(|(v, s)| match s {
                Slot::Member(o) => Some((v, o)),
                Slot::Queued => None,
            })
            .collect();
        SampleOutcome::from_members(self.graph, members, truncated)
    }
}

/// Forest-fire style periphery traversal.
///
/// A FIFO queue of periphery nodes is burned one node at a time. Each
/// dequeued node joins the subgraph together with `⟨γ·|N_cor(v)|⟩` of its
/// core neighbors drawn from [`core_weights`]; then a geometric number of
/// unvisited periphery neighbors drawn from [`periphery_weights`] is queued,
/// as long as subgraph plus queue is still below the target. An empty queue
/// is reseeded uniformly from unvisited periphery nodes.
pub fn sample_his_ff<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &CorePeripheryPartition,
    config: &ResolvedConfig,
    rng: &mut R,
) -> Result<SampleOutcome> {
    let target = config.target;
    let mut draft = Draft::new(graph, partition, config.gamma);
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut next_origin: HashMap<usize, NodeOrigin> = HashMap::new();
    let mut truncated = false;

    while draft.members < target {
        if queue.is_empty() {
            match draft.fresh_seed(rng) {
                Some(w) => {
                    draft.slots.insert(w as NodeId, Slot::Queued);
                    next_origin.insert(w, NodeOrigin::Seed);
                    queue.push_back(w);
                }
                None => {
                    truncated = true;
                    break;
                }
            }
        }
        let v = queue.pop_front().expect("queue refilled above");
        let origin = next_origin.remove(&v).unwrap_or(NodeOrigin::Periphery);
        draft.admit(v, origin);
        draft.add_core_neighbors(v, rng)?;

        let s = config.burn.sample(rng);
        if draft.members + queue.len() < target {
            let dist = periphery_weights(graph, partition, v, |u| draft.is_tracked(u))?;
            for u in dist.sample_without_replacement(rng, s) {
                draft.slots.insert(u, Slot::Queued);
                queue.push_back(u as usize);
            }
        }
    }
    draft.finish(truncated)
}

/// Periphery random walks with weighted core-neighbor augmentation.
///
/// Each walk starts at a uniform periphery node and visits `h + 1`
/// positions; a position not yet in the subgraph joins it together with
/// `⟨γ·|N_cor(v)|⟩` core neighbors. Steps follow [`periphery_weights`]; a
/// node without periphery neighbors ends the walk early.
pub fn sample_his_rw<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &CorePeripheryPartition,
    config: &ResolvedConfig,
    rng: &mut R,
) -> Result<SampleOutcome> {
    let per = partition.periphery_nodes();
    let mut draft = Draft::new(graph, partition, config.gamma);
    let mut truncated = false;

    while draft.members < config.target {
        if draft.periphery_exhausted() {
            truncated = true;
            break;
        }
        let mut v = per[rng.random_range(0..per.len())] as usize;
        let mut origin = NodeOrigin::Seed;
        for step in 1..=config.walk_length + 1 {
            if !draft.is_member(v) {
                draft.add_core_neighbors(v, rng)?;
                draft.admit(v, origin);
            }
            if step <= config.walk_length {
                let dist = periphery_weights(graph, partition, v, |_| false)?;
                match dist.sample(rng) {
                    Some(u) => v = u as usize,
                    None => break,
                }
                origin = NodeOrigin::Periphery;
            }
        }
    }
    draft.finish(truncated)
}

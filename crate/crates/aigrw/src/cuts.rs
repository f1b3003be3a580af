//! Bottom-up enumeration of k-feasible cuts with per-cut truth tables.
//!
//! Cut lists define the per-node action space for rewriting: action `i` at a
//! node selects the node's `i`-th cut. Lists are deterministic given the
//! graph and the cap: the trivial cut is always first, the rest are ordered
//! by leaf count then lexicographic leaf order, dominated cuts removed.

use std::collections::HashMap;

use crate::aig::{Aig, NodeId};
use crate::error::{Error, Result};
use crate::tt;

pub const DEFAULT_K: usize = 4;
pub const DEFAULT_CUT_CAP: usize = 16;

/// A set of at most four leaf nodes plus the 16-bit truth table of the root
/// over those leaves in ascending order (lower leaf index = lower variable).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cut {
    pub leaves: Vec<NodeId>,
    pub truth: u16,
}

impl Cut {
    pub fn trivial(root: NodeId) -> Cut {
        Cut {
            leaves: vec![root],
            truth: tt::VAR[0],
        }
    }

    pub fn is_trivial_of(&self, root: NodeId) -> bool {
        self.leaves.len() == 1 && self.leaves[0] == root
    }
}

/// Per-node ordered cut lists.
#[derive(Clone, Debug)]
pub struct CutSet {
    cuts: Vec<Vec<Cut>>,
    cap: usize,
}

impl CutSet {
    pub fn cuts(&self, node: NodeId) -> &[Cut] {
        &self.cuts[node]
    }

    pub fn n_cuts(&self, node: NodeId) -> usize {
        self.cuts[node].len()
    }

    /// Widest cut list in the set; the Q-matrix column count.
    pub fn max_cuts(&self) -> usize {
        self.cuts.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

fn merge_leaves(a: &[NodeId], b: &[NodeId], k: usize) -> Option<Vec<NodeId>> {
    let mut out = Vec::with_capacity(k);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
            if i < a.len() && j < b.len() && a[i] == b[j] {
                j += 1;
            }
            let v = a[i];
            i += 1;
            v
        } else {
            let v = b[j];
            j += 1;
            v
        };
        if out.len() == k {
            return None;
        }
        out.push(next);
    }
    Some(out)
}

/// Positions of `subset` leaves within `union` (both ascending).
fn positions(subset: &[NodeId], union: &[NodeId]) -> Vec<usize> {
    subset
        .iter()
        .map(|l| union.binary_search(l).expect("leaf present in union"))
        .collect()
}

/// Enumerates up to `cap` k-feasible cuts per node, trivial cut first,
/// dominated cuts removed.
pub fn enumerate_cuts(aig: &Aig, k: usize, cap: usize) -> Result<CutSet> {
    if !(2..=4).contains(&k) {
        return Err(Error::InvalidConfig(format!("cut size k={k} not in 2..=4")));
    }
    if cap < 2 {
        return Err(Error::InvalidConfig(format!("cut cap {cap} < 2")));
    }
    let mut cuts: Vec<Vec<Cut>> = vec![Vec::new(); aig.len()];
    cuts[0] = vec![Cut::trivial(0)];
    for &inp in aig.inputs() {
        cuts[inp] = vec![Cut::trivial(inp)];
    }
    for id in aig.topological_order() {
        let (f0, f1) = aig.node(id).fanins().unwrap();
        let mut merged: Vec<Cut> = Vec::new();
        for c0 in &cuts[f0.node()] {
            let t0 = if f0.is_complemented() { !c0.truth } else { c0.truth };
            for c1 in &cuts[f1.node()] {
                let t1 = if f1.is_complemented() { !c1.truth } else { c1.truth };
                let Some(union) = merge_leaves(&c0.leaves, &c1.leaves, k) else {
                    continue;
                };
                // a constant leaf would make the table claim a free variable
                if union[0] == 0 {
                    continue;
                }
                let truth = tt::remap(t0, &positions(&c0.leaves, &union))
                    & tt::remap(t1, &positions(&c1.leaves, &union));
                merged.push(Cut {
                    leaves: union,
                    truth,
                });
            }
        }
        merged.sort_by(|a, b| (a.leaves.len(), &a.leaves).cmp(&(b.leaves.len(), &b.leaves)));
        merged.dedup_by(|a, b| a.leaves == b.leaves);
        // dominated-cut removal: drop any strict superset of another leaf set
        let kept: Vec<Cut> = merged
            .iter()
            .filter(|c| {
                !merged.iter().any(|other| {
                    other.leaves.len() < c.leaves.len()
                        && other.leaves.iter().all(|l| c.leaves.binary_search(l).is_ok())
                })
            })
            .cloned()
            .collect();
        let mut list = Vec::with_capacity(cap.min(kept.len() + 1));
        list.push(Cut::trivial(id));
        list.extend(kept);
        list.truncate(cap);
        cuts[id] = list;
    }
    Ok(CutSet { cuts, cap })
}

/// Truth table of `root` over the cut's leaves, by direct cone evaluation.
/// Fails when a primary input is reachable without passing a leaf.
pub fn cut_truth_table(aig: &Aig, root: NodeId, cut: &Cut) -> Result<u16> {
    let mut memo: HashMap<NodeId, u16> = HashMap::new();
    for (i, &leaf) in cut.leaves.iter().enumerate() {
        memo.insert(leaf, tt::VAR[i]);
    }
    eval_cone(aig, root, &mut memo)
}

fn eval_cone(aig: &Aig, node: NodeId, memo: &mut HashMap<NodeId, u16>) -> Result<u16> {
    if let Some(&t) = memo.get(&node) {
        return Ok(t);
    }
    let t = match aig.node(node).fanins() {
        Some((f0, f1)) => {
            let t0 = eval_cone(aig, f0.node(), memo)?;
            let t1 = eval_cone(aig, f1.node(), memo)?;
            let t0 = if f0.is_complemented() { !t0 } else { t0 };
            let t1 = if f1.is_complemented() { !t1 } else { t1 };
            t0 & t1
        }
        None if node == 0 => 0x0000,
        None => return Err(Error::IncompleteCut { root: node }),
    };
    memo.insert(node, t);
    Ok(t)
}

/// True when every leaf of the cut is still alive in the graph.
pub fn cut_is_valid(aig: &Aig, cut: &Cut) -> bool {
    cut.leaves.iter().all(|&l| l < aig.len() && aig.node(l).is_alive())
}

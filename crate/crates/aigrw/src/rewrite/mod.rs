//! Cut-based rewriting with the cut choice as an external action.
//!
//! For a chosen cut the engine generates equivalent replacement cones,
//! scores each by the exact node-count change it would cause (reuse through
//! the structural hash included), and splices the best one in. Gain
//! prediction and application share one resolution pass, so predicted and
//! measured deltas agree by construction; the applied delta is still
//! measured independently from the live reference counts.

mod candidates;

pub use candidates::{build_candidates, CandLit, CandTarget, Candidate, CandidateOrigin};

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aig::{Aig, NodeId};
use crate::cuts::{cut_is_valid, Cut, CutSet};
use crate::error::{Error, Result};
use crate::literal::Literal;

/// Result of one applied (or attempted) rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewriteOutcome {
    /// Alive-node-count change; negative means fewer nodes.
    pub delta_v: i64,
    /// False when the chosen candidate resolved back to the root (identity).
    pub applied: bool,
    pub chosen_cut: usize,
    pub chosen_candidate: usize,
}

/// How `rewrite_pass` selects a cut at each node.
pub enum Policy<'a> {
    /// Evaluate every cut, apply the best candidate only on strict gain.
    Greedy,
    /// One raw action per state in snapshot topological order, reduced
    /// modulo the node's cut count, applied unconditionally.
    Actions(&'a [u32]),
    /// Uniform cut choice per node, applied unconditionally.
    Random { seed: u64 },
}

/// One visited node during a pass.
#[derive(Clone, Copy, Debug)]
pub struct PassStep {
    /// Position in the snapshot topological order: the RL state index.
    pub state: usize,
    pub node: NodeId,
    /// Raw action as drawn or supplied, before the modulo mapping.
    pub action: u32,
    pub cut_index: usize,
    pub candidate_index: usize,
    pub delta_v: i64,
    pub applied: bool,
}

#[derive(Clone, Debug, Default)]
pub struct PassResult {
    pub total_delta_v: i64,
    pub steps: Vec<PassStep>,
}

/// Number of And nodes that would die if `root` were removed: recursive
/// dereference where a fanin joins the cone iff its fanout count drops to
/// zero. The graph is not modified.
pub fn mffc_size(aig: &Aig, root: NodeId) -> usize {
    deaths_from(aig, root, &HashMap::new())
}

fn deaths_from(aig: &Aig, root: NodeId, extra_refs: &HashMap<NodeId, i64>) -> usize {
    let mut overlay: HashMap<NodeId, i64> = HashMap::new();
    let mut stack = vec![root];
    let mut deaths = 0usize;
    while let Some(n) = stack.pop() {
        deaths += 1;
        let (f0, f1) = aig.node(n).fanins().expect("cone members are And nodes");
        for lit in [f0, f1] {
            let m = lit.node();
            if !aig.node(m).is_and() {
                continue;
            }
            let e = overlay.entry(m).or_insert(0);
            *e -= 1;
            let refs =
                aig.node(m).fanout_count() as i64 + extra_refs.get(&m).copied().unwrap_or(0) + *e;
            debug_assert!(refs >= 0);
            if refs == 0 {
                stack.push(m);
            }
        }
    }
    deaths
}

/// Outcome of resolving a candidate against the current graph without
/// touching it. Virtual node ids start at `aig.len()` and correspond 1:1 to
/// the ids a commit would allocate.
struct Plan {
    output: Literal,
    new_nodes: usize,
    /// Candidate resolved back onto the root; treat as identity.
    root_hit: bool,
    /// Reference increments a commit would place on existing nodes.
    extra_refs: HashMap<NodeId, i64>,
}

fn cand_lit_to_literal(cl: CandLit, cut: &Cut, resolved: &[Literal]) -> Literal {
    let base = match cl.target {
        CandTarget::Const => Literal::FALSE,
        CandTarget::Leaf(i) => Literal::positive(cut.leaves[i]),
        CandTarget::Spec(j) => resolved[j],
    };
    base.complement_if(cl.complemented)
}

/// Mirrors `add_and` against the live graph plus virtual allocations.
struct Resolver<'a> {
    aig: &'a Aig,
    real_len: usize,
    /// Pairs allocated within this plan, mirroring the hash growth a commit
    /// would see.
    local: HashMap<(Literal, Literal), Literal>,
    extra_refs: HashMap<NodeId, i64>,
    new_nodes: usize,
}

impl<'a> Resolver<'a> {
    fn new(aig: &'a Aig) -> Self {
        Resolver {
            aig,
            real_len: aig.len(),
            local: HashMap::new(),
            extra_refs: HashMap::new(),
            new_nodes: 0,
        }
    }

    fn and(&mut self, a: Literal, b: Literal) -> Literal {
        let (a, b) = if a.node() <= b.node() { (a, b) } else { (b, a) };
        if a == Literal::FALSE || b == Literal::FALSE || a == !b {
            return Literal::FALSE;
        }
        if a == Literal::TRUE {
            return b;
        }
        if b == Literal::TRUE {
            return a;
        }
        if a == b {
            return a;
        }
        if a.node() < self.real_len && b.node() < self.real_len {
            if let Some(id) = self.aig.strash_lookup(a, b) {
                return Literal::positive(id);
            }
        }
        if let Some(&lit) = self.local.get(&(a, b)) {
            return lit;
        }
        let v = Literal::positive(self.real_len + self.new_nodes);
        self.new_nodes += 1;
        for lit in [a, b] {
            if lit.node() < self.real_len {
                *self.extra_refs.entry(lit.node()).or_insert(0) += 1;
            }
        }
        self.local.insert((a, b), v);
        v
    }
}

fn plan_candidate(aig: &Aig, root: NodeId, cut: &Cut, cand: &Candidate) -> Plan {
    let mut resolver = Resolver::new(aig);
    let mut resolved: Vec<Literal> = Vec::with_capacity(cand.specs.len());
    for &(a_cl, b_cl) in &cand.specs {
        let la = cand_lit_to_literal(a_cl, cut, &resolved);
        let lb = cand_lit_to_literal(b_cl, cut, &resolved);
        let lit = resolver.and(la, lb);
        if lit.node() == root {
            // the candidate rebuilds through the root; splicing would be
            // cyclic, so the rewrite degenerates to the identity
            return Plan {
                output: Literal::positive(root),
                new_nodes: 0,
                root_hit: true,
                extra_refs: HashMap::new(),
            };
        }
        resolved.push(lit);
    }
    let output = cand_lit_to_literal(cand.output, cut, &resolved);
    let root_hit = output.node() == root;
    Plan {
        output,
        new_nodes: if root_hit { 0 } else { resolver.new_nodes },
        root_hit,
        extra_refs: resolver.extra_refs,
    }
}

fn predicted_delta(aig: &Aig, root: NodeId, plan: &Plan) -> i64 {
    if plan.root_hit {
        return 0;
    }
    let mut extra = plan.extra_refs.clone();
    if plan.output.node() < aig.len() {
        // fanout transfer protects the replacement node
        *extra.entry(plan.output.node()).or_insert(0) += aig.node(root).fanout_count() as i64;
    }
    plan.new_nodes as i64 - deaths_from(aig, root, &extra) as i64
}

fn fetch_cut(cutset: &CutSet, root: NodeId, cut_index: usize) -> Result<&Cut> {
    cutset.cuts(root).get(cut_index).ok_or(Error::CutIndexOutOfRange {
        node: root,
        index: cut_index,
        n_cuts: cutset.n_cuts(root),
    })
}

fn check_root_and_cut(aig: &Aig, root: NodeId, cut: &Cut) -> Result<()> {
    if !aig.node(root).is_alive() || !aig.node(root).is_and() {
        return Err(Error::DanglingLiteral { node: root });
    }
    if !cut_is_valid(aig, cut) {
        return Err(Error::DanglingLiteral {
            node: *cut
                .leaves
                .iter()
                .find(|&&l| l >= aig.len() || !aig.node(l).is_alive())
                .unwrap(),
        });
    }
    Ok(())
}

/// Dry run of one specific candidate: the node-count change applying it
/// would cause. The graph is unchanged.
pub fn predict_rewrite(
    aig: &Aig,
    cutset: &CutSet,
    root: NodeId,
    cut_index: usize,
    candidate_index: usize,
) -> Result<i64> {
    let cut = fetch_cut(cutset, root, cut_index)?;
    check_root_and_cut(aig, root, cut)?;
    let cands = build_candidates(cut.truth, cut.leaves.len());
    let cand = cands.get(candidate_index).ok_or(Error::CandidateIndexOutOfRange {
        index: candidate_index,
        n_candidates: cands.len(),
    })?;
    let plan = plan_candidate(aig, root, cut, cand);
    Ok(predicted_delta(aig, root, &plan))
}

/// Dry run of every candidate for one cut: returns the candidate with the
/// best (most negative) node-count change and that change. Ties go to the
/// lower candidate index. The graph is unchanged.
pub fn try_cut(
    aig: &Aig,
    cutset: &CutSet,
    root: NodeId,
    cut_index: usize,
) -> Result<(usize, i64)> {
    let cut = fetch_cut(cutset, root, cut_index)?;
    check_root_and_cut(aig, root, cut)?;
    let cands = build_candidates(cut.truth, cut.leaves.len());
    Ok(best_candidate(aig, root, cut, &cands))
}

fn best_candidate(aig: &Aig, root: NodeId, cut: &Cut, cands: &[Candidate]) -> (usize, i64) {
    let mut best = (0usize, i64::MAX);
    for (i, cand) in cands.iter().enumerate() {
        let plan = plan_candidate(aig, root, cut, cand);
        let delta = predicted_delta(aig, root, &plan);
        if delta < best.1 {
            best = (i, delta);
        }
    }
    debug_assert!(best.1 != i64::MAX, "candidate list is never empty");
    best
}

/// Splices candidate `candidate_index` of cut `cut_index` in at `root`:
/// builds the cone through the structural hash, transfers all fanouts of the
/// root onto the replacement literal, and dereferences the old cone.
pub fn apply_rewrite(
    aig: &mut Aig,
    cutset: &CutSet,
    root: NodeId,
    cut_index: usize,
    candidate_index: usize,
) -> Result<RewriteOutcome> {
    let cut = fetch_cut(cutset, root, cut_index)?.clone();
    check_root_and_cut(aig, root, &cut)?;
    let cands = build_candidates(cut.truth, cut.leaves.len());
    let cand = cands.get(candidate_index).ok_or(Error::CandidateIndexOutOfRange {
        index: candidate_index,
        n_candidates: cands.len(),
    })?;
    commit_candidate(aig, root, &cut, cand, cut_index, candidate_index)
}

fn commit_candidate(
    aig: &mut Aig,
    root: NodeId,
    cut: &Cut,
    cand: &Candidate,
    cut_index: usize,
    candidate_index: usize,
) -> Result<RewriteOutcome> {
    let plan = plan_candidate(aig, root, cut, cand);
    if plan.root_hit {
        return Ok(RewriteOutcome {
            delta_v: 0,
            applied: false,
            chosen_cut: cut_index,
            chosen_candidate: candidate_index,
        });
    }
    let predicted = predicted_delta(aig, root, &plan);
    let before = aig.node_count() as i64;
    let len_before = aig.len();
    let mut resolved: Vec<Literal> = Vec::with_capacity(cand.specs.len());
    for &(a_cl, b_cl) in &cand.specs {
        let la = cand_lit_to_literal(a_cl, cut, &resolved);
        let lb = cand_lit_to_literal(b_cl, cut, &resolved);
        resolved.push(aig.add_and(la, lb)?);
    }
    debug_assert_eq!(aig.len() - len_before, plan.new_nodes);
    let output = cand_lit_to_literal(cand.output, cut, &resolved);
    debug_assert_eq!(output, plan.output);
    debug_assert_ne!(output.node(), root);
    transfer_fanouts(aig, root, output);
    aig.delete_cone(root);
    let delta_v = aig.node_count() as i64 - before;
    debug_assert_eq!(delta_v, predicted, "dry run disagrees with applied delta");
    Ok(RewriteOutcome {
        delta_v,
        applied: true,
        chosen_cut: cut_index,
        chosen_candidate: candidate_index,
    })
}

/// Repoints every fanin edge and output referencing `root` at `new_lit`,
/// complement-adjusted, updating reference counts and hash entries.
fn transfer_fanouts(aig: &mut Aig, root: NodeId, new_lit: Literal) {
    for id in 0..aig.len() {
        if id == root || !aig.node(id).is_alive() {
            continue;
        }
        let Some((f0, f1)) = aig.node(id).fanins() else {
            continue;
        };
        if f0.node() != root && f1.node() != root {
            continue;
        }
        let patch = |lit: Literal, aig: &mut Aig| -> Literal {
            if lit.node() == root {
                aig.bump_fanout(root, -1);
                aig.bump_fanout(new_lit.node(), 1);
                new_lit.complement_if(lit.is_complemented())
            } else {
                lit
            }
        };
        aig.strash_remove((f0, f1), id);
        let nf0 = patch(f0, aig);
        let nf1 = patch(f1, aig);
        aig.set_fanins(id, nf0, nf1);
        let (nf0, nf1) = aig.node(id).fanins().unwrap();
        aig.strash_insert_if_vacant((nf0, nf1), id);
    }
    for idx in 0..aig.outputs().len() {
        let lit = aig.outputs()[idx];
        if lit.node() == root {
            aig.bump_fanout(root, -1);
            aig.bump_fanout(new_lit.node(), 1);
            aig.set_output(idx, new_lit.complement_if(lit.is_complemented()));
        }
    }
    debug_assert_eq!(aig.node(root).fanout_count(), 0);
}

/// Visits alive And nodes in the pass-start topological order and rewrites
/// each according to `policy`. Nodes killed by earlier rewrites are skipped.
/// A chosen cut with a dead leaf falls back to the trivial cut.
pub fn rewrite_pass(aig: &mut Aig, cutset: &CutSet, policy: Policy) -> Result<PassResult> {
    let order = aig.topological_order();
    if let Policy::Actions(actions) = &policy {
        if actions.len() < order.len() {
            return Err(Error::ActionListTooShort {
                expected: order.len(),
                got: actions.len(),
            });
        }
    }
    let mut rng = match &policy {
        Policy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut cache: HashMap<(u16, u8), Vec<Candidate>> = HashMap::new();
    let mut steps = Vec::with_capacity(order.len());
    let mut total = 0i64;
    for (state, &node) in order.iter().enumerate() {
        if !aig.node(node).is_alive() {
            continue;
        }
        let n_cuts = cutset.n_cuts(node);
        let step = match &policy {
            Policy::Greedy => {
                let mut best: Option<(usize, usize, i64)> = None;
                for ci in 0..n_cuts {
                    let cut = &cutset.cuts(node)[ci];
                    if !cut_is_valid(aig, cut) {
                        continue;
                    }
                    let cands = cache
                        .entry((cut.truth, cut.leaves.len() as u8))
                        .or_insert_with(|| build_candidates(cut.truth, cut.leaves.len()));
                    let (cand, delta) = best_candidate(aig, node, cut, cands);
                    if best.is_none_or(|(_, _, d)| delta < d) {
                        best = Some((ci, cand, delta));
                    }
                }
                let (ci, cand, delta) = best.expect("trivial cut is always valid");
                if delta < 0 {
                    let cut = cutset.cuts(node)[ci].clone();
                    let cands = cache.get(&(cut.truth, cut.leaves.len() as u8)).unwrap();
                    let outcome = commit_candidate(aig, node, &cut, &cands[cand], ci, cand)?;
                    PassStep {
                        state,
                        node,
                        action: ci as u32,
                        cut_index: ci,
                        candidate_index: cand,
                        delta_v: outcome.delta_v,
                        applied: outcome.applied,
                    }
                } else {
                    PassStep {
                        state,
                        node,
                        action: ci as u32,
                        cut_index: ci,
                        candidate_index: cand,
                        delta_v: 0,
                        applied: false,
                    }
                }
            }
            Policy::Actions(actions) => {
                let raw = actions[state];
                let ci = map_raw_action(raw as usize, n_cuts);
                run_chosen_cut(aig, cutset, node, state, raw, ci, &mut cache)?
            }
            Policy::Random { .. } => {
                let raw = rng.as_mut().unwrap().gen_range(0..n_cuts) as u32;
                run_chosen_cut(aig, cutset, node, state, raw, raw as usize, &mut cache)?
            }
        };
        total += step.delta_v;
        steps.push(step);
    }
    Ok(PassResult {
        total_delta_v: total,
        steps,
    })
}

/// Uniform-width raw action to a valid cut index.
pub fn map_raw_action(raw: usize, n_cuts: usize) -> usize {
    debug_assert!(n_cuts >= 1);
    raw % n_cuts
}

fn run_chosen_cut(
    aig: &mut Aig,
    cutset: &CutSet,
    node: NodeId,
    state: usize,
    raw: u32,
    mut cut_index: usize,
    cache: &mut HashMap<(u16, u8), Vec<Candidate>>,
) -> Result<PassStep> {
    if !cut_is_valid(aig, &cutset.cuts(node)[cut_index]) {
        cut_index = 0; // stale cut: fall back to the trivial cut
    }
    let cut = cutset.cuts(node)[cut_index].clone();
    let cands = cache
        .entry((cut.truth, cut.leaves.len() as u8))
        .or_insert_with(|| build_candidates(cut.truth, cut.leaves.len()));
    let (cand_idx, _) = best_candidate(aig, node, &cut, cands);
    let cand = cands[cand_idx].clone();
    let outcome = commit_candidate(aig, node, &cut, &cand, cut_index, cand_idx)?;
    Ok(PassStep {
        state,
        node,
        action: raw,
        cut_index,
        candidate_index: cand_idx,
        delta_v: outcome.delta_v,
        applied: outcome.applied,
    })
}

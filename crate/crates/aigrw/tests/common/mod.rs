//! Shared fixtures and independent oracles for the integration suites.
//!
//! The oracles deliberately avoid the library's fast paths: simulation is a
//! plain recursive evaluator, cut enumeration is a cone-subset search, and
//! the action-space optimum is a full odometer sweep.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use aigrw::aig::{Aig, NodeId};
use aigrw::cuts::CutSet;
use aigrw::gen::random_aig;
use aigrw::literal::Literal;
use aigrw::rewrite::{rewrite_pass, Policy};

#[allow(dead_code)]
pub fn benchmarks_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks")
}

#[allow(dead_code)]
pub fn load_bench(name: &str) -> Aig {
    let path = benchmarks_dir().join(name);
    aigrw::io::read_circuit(&path).unwrap_or_else(|e| panic!("loading {name}: {e}"))
}

/// Frozen 12-node instance on which the greedy pass stops at 6 nodes while
/// a better action list reaches 5; found by exhaustive action search and
/// kept as an explicit construction.
pub fn local_minimum_fixture() -> Aig {
    let mut g = Aig::new("local_minimum_fixture");
    let n: Vec<Literal> = (0..5).map(|_| g.add_input()).collect();
    let (n2, n3, n4, n5) = (n[1], n[2], n[3], n[4]);
    let n6 = g.add_and(n3, !n5).unwrap();
    let n7 = g.add_and(n4, !n6).unwrap();
    let n8 = g.add_and(n3, n4).unwrap();
    let n9 = g.add_and(!n2, !n5).unwrap();
    let n10 = g.add_and(!n5, n8).unwrap();
    let n11 = g.add_and(!n7, n8).unwrap();
    let n12 = g.add_and(!n2, n4).unwrap();
    let n13 = g.add_and(n2, !n9).unwrap();
    let n14 = g.add_and(n3, n6).unwrap();
    let n15 = g.add_and(n2, n6).unwrap();
    let n16 = g.add_and(n6, n14).unwrap();
    let n17 = g.add_and(!n4, n13).unwrap();
    for out in [n10, n11, n12, n15, n16, !n17] {
        g.add_output(out).unwrap();
    }
    assert_eq!(g.node_count(), 12);
    g
}

/// Plain recursive evaluator, independent of the packed simulator.
#[allow(dead_code)]
pub fn naive_eval(aig: &Aig, assignment: &[bool]) -> Vec<bool> {
    assert_eq!(assignment.len(), aig.inputs().len());
    let mut values: HashMap<NodeId, bool> = HashMap::new();
    values.insert(0, false);
    for (i, &inp) in aig.inputs().iter().enumerate() {
        values.insert(inp, assignment[i]);
    }
    fn eval(aig: &Aig, node: NodeId, values: &mut HashMap<NodeId, bool>) -> bool {
        if let Some(&v) = values.get(&node) {
            return v;
        }
        let (f0, f1) = aig.node(node).fanins().expect("non-terminal is an And");
        let a = eval(aig, f0.node(), values) ^ f0.is_complemented();
        let b = eval(aig, f1.node(), values) ^ f1.is_complemented();
        let v = a & b;
        values.insert(node, v);
        v
    }
    aig.outputs()
        .iter()
        .map(|o| eval(aig, o.node(), &mut values) ^ o.is_complemented())
        .collect()
}

/// All minimal k-feasible cuts of `root` by brute force: every subset of the
/// root's cone is tested for the cut property, then dominated (strict
/// superset) leaf sets are dropped.
#[allow(dead_code)]
pub fn brute_force_cuts(aig: &Aig, root: NodeId, k: usize) -> BTreeSet<Vec<NodeId>> {
    let mut cone: Vec<NodeId> = Vec::new();
    let mut seen = vec![false; aig.len()];
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        if seen[n] {
            continue;
        }
        seen[n] = true;
        cone.push(n);
        if let Some((f0, f1)) = aig.node(n).fanins() {
            stack.push(f0.node());
            stack.push(f1.node());
        }
    }
    cone.sort_unstable();
    assert!(k <= 4);
    let mut cuts: BTreeSet<Vec<NodeId>> = BTreeSet::new();
    let m = cone.len();
    let test = |leaves: &[NodeId], cuts: &mut BTreeSet<Vec<NodeId>>| {
        if is_cut(aig, root, leaves) {
            cuts.insert(leaves.to_vec());
        }
    };
    for i in 0..m {
        test(&[cone[i]], &mut cuts);
        for j in i + 1..m {
            if k < 2 {
                break;
            }
            test(&[cone[i], cone[j]], &mut cuts);
            for l in j + 1..m {
                if k < 3 {
                    break;
                }
                test(&[cone[i], cone[j], cone[l]], &mut cuts);
                for p in l + 1..m {
                    if k < 4 {
                        break;
                    }
                    test(&[cone[i], cone[j], cone[l], cone[p]], &mut cuts);
                }
            }
        }
    }
    // dominated removal
    let all: Vec<Vec<NodeId>> = cuts.iter().cloned().collect();
    cuts.retain(|c| {
        !all.iter()
            .any(|other| other.len() < c.len() && other.iter().all(|l| c.binary_search(l).is_ok()))
    });
    cuts
}

/// Every path from an input to `root` passes a member of `leaves`, and every
/// member is actually reached.
fn is_cut(aig: &Aig, root: NodeId, leaves: &[NodeId]) -> bool {
    let mut reached: BTreeSet<NodeId> = BTreeSet::new();
    let mut seen = vec![false; aig.len()];
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        if leaves.binary_search(&n).is_ok() {
            reached.insert(n);
            continue;
        }
        if seen[n] {
            continue;
        }
        seen[n] = true;
        match aig.node(n).fanins() {
            Some((f0, f1)) => {
                stack.push(f0.node());
                stack.push(f1.node());
            }
            None => return false, // hit an input or the constant outside the cut
        }
    }
    reached.len() == leaves.len()
}

/// Full odometer sweep over the action space: the best reachable node count
/// in one pass. Panics if the space exceeds `cap_product`.
#[allow(dead_code)]
pub fn exhaustive_best_actions(aig: &Aig, cutset: &CutSet, cap_product: u64) -> i64 {
    let order = aig.topological_order();
    let widths: Vec<usize> = order.iter().map(|&n| cutset.n_cuts(n)).collect();
    let product: u64 = widths.iter().map(|&w| w as u64).product();
    assert!(
        product <= cap_product,
        "action space {product} exceeds the sweep budget"
    );
    let mut best = i64::MAX;
    let mut actions = vec![0u32; widths.len()];
    loop {
        let mut h = aig.clone();
        rewrite_pass(&mut h, cutset, Policy::Actions(&actions)).unwrap();
        best = best.min(h.node_count() as i64);
        let mut i = 0;
        loop {
            if i == widths.len() {
                return best;
            }
            actions[i] += 1;
            if (actions[i] as usize) < widths[i] {
                break;
            }
            actions[i] = 0;
            i += 1;
        }
    }
}

/// Seeded corpus of random graphs between 10 and 200 And nodes.
#[allow(dead_code)]
pub fn random_corpus(count: usize) -> Vec<Aig> {
    (0..count)
        .map(|i| {
            let seed = 1000 + i as u64;
            let n_inputs = 4 + (i % 13);
            let n_ands = 10 + (i * 7) % 191;
            random_aig(seed, n_inputs, n_ands)
        })
        .collect()
}

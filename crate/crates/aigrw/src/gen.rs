//! Seeded random graph generation for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aig::Aig;
use crate::literal::Literal;

/// Builds a random AIG with `n_inputs` inputs and as close to `n_ands`
/// alive And nodes as simplification and hashing allow. Every alive And
/// node beyond the last few is reachable from some output.
pub fn random_aig(seed: u64, n_inputs: usize, n_ands: usize) -> Aig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Aig::new(format!("rand{seed}"));
    let mut pool: Vec<Literal> = (0..n_inputs).map(|_| g.add_input()).collect();
    let mut guard = 0;
    while g.node_count() < n_ands && guard < 50 * n_ands + 100 {
        guard += 1;
        let a = pool[rng.gen_range(0..pool.len())].complement_if(rng.gen_bool(0.5));
        let b = pool[rng.gen_range(0..pool.len())].complement_if(rng.gen_bool(0.5));
        let before = g.len();
        let lit = g.add_and(a, b).expect("pool literals are alive");
        if g.len() > before {
            pool.push(lit);
        }
    }
    // outputs: everything with no fanout yet, so the whole graph is covered
    let dangling: Vec<Literal> = (0..g.len())
        .filter(|&id| g.node(id).is_and() && g.node(id).fanout_count() == 0)
        .map(Literal::positive)
        .collect();
    for lit in dangling {
        let lit = lit.complement_if(rng.gen_bool(0.5));
        g.add_output(lit).expect("node is alive");
    }
    if g.outputs().is_empty() {
        let lit = *pool.last().unwrap();
        g.add_output(lit).unwrap();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic_and_valid() {
        let a = random_aig(7, 5, 30);
        let b = random_aig(7, 5, 30);
        assert_eq!(a.len(), b.len());
        assert_eq!(a.node_count(), b.node_count());
        a.validate().unwrap();
        assert!(a.duplicate_pairs().is_empty());
        assert!(a.node_count() >= 20, "close to the requested size");
    }

    #[test]
    fn every_and_is_reachable_from_outputs() {
        let g = random_aig(3, 4, 25);
        let mut seen = vec![false; g.len()];
        let mut stack: Vec<usize> = g.outputs().iter().map(|o| o.node()).collect();
        while let Some(id) = stack.pop() {
            if seen[id] {
                continue;
            }
            seen[id] = true;
            if let Some((f0, f1)) = g.node(id).fanins() {
                stack.push(f0.node());
                stack.push(f1.node());
            }
        }
        for (id, &was_seen) in seen.iter().enumerate() {
            if g.node(id).is_and() && g.node(id).is_alive() {
                assert!(was_seen, "node {id} unreachable");
            }
        }
    }
}

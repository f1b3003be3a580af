//! Bit-parallel simulation: 64 input patterns per machine word.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::aig::{Aig, NodeId};
use crate::error::{Error, Result};
use crate::literal::Literal;

/// Words per task handed to the thread pool.
#[cfg(feature = "parallel")]
const PAR_CHUNK_WORDS: usize = 64;

#[inline]
fn lit_word(vals: &[u64], lit: Literal) -> u64 {
    vals[lit.node()] ^ (lit.is_complemented() as u64).wrapping_neg()
}

fn check_inputs(aig: &Aig, inputs: &[Vec<u64>]) -> Result<usize> {
    if inputs.len() != aig.inputs().len() {
        return Err(Error::InputCountMismatch {
            expected: aig.inputs().len(),
            got: inputs.len(),
        });
    }
    // an input-less graph still evaluates its constant outputs once
    let n_words = inputs.first().map_or(1, |v| v.len());
    if inputs.iter().any(|v| v.len() != n_words) {
        return Err(Error::RaggedPatterns);
    }
    Ok(n_words)
}

fn eval_range(
    aig: &Aig,
    order: &[NodeId],
    inputs: &[Vec<u64>],
    range: std::ops::Range<usize>,
) -> Vec<Vec<u64>> {
    let mut outs = vec![vec![0u64; range.len()]; aig.outputs().len()];
    let mut vals = vec![0u64; aig.len()];
    for (slot, w) in range.enumerate() {
        for (i, &nid) in aig.inputs().iter().enumerate() {
            vals[nid] = inputs[i][w];
        }
        for &nid in order {
            let (f0, f1) = aig.node(nid).fanins().unwrap();
            vals[nid] = lit_word(&vals, f0) & lit_word(&vals, f1);
        }
        for (o, &lit) in aig.outputs().iter().enumerate() {
            outs[o][slot] = lit_word(&vals, lit);
        }
    }
    outs
}

/// Single-threaded packed simulation; one `Vec<u64>` of patterns per input,
/// one per output in return.
pub fn simulate_packed_seq(aig: &Aig, inputs: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let n_words = check_inputs(aig, inputs)?;
    let order = aig.topological_order();
    Ok(eval_range(aig, &order, inputs, 0..n_words))
}

/// Packed simulation. With the `parallel` feature the word range is split
/// across the thread pool; results are bit-identical to the sequential path.
pub fn simulate_packed(aig: &Aig, inputs: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let n_words = check_inputs(aig, inputs)?;
    #[cfg(feature = "parallel")]
    {
        if n_words >= 2 * PAR_CHUNK_WORDS {
            let order = aig.topological_order();
            let ranges: Vec<_> = (0..n_words)
                .step_by(PAR_CHUNK_WORDS)
                .map(|lo| lo..(lo + PAR_CHUNK_WORDS).min(n_words))
                .collect();
            let parts: Vec<Vec<Vec<u64>>> = ranges
                .into_par_iter()
                .map(|r| eval_range(aig, &order, inputs, r))
                .collect();
            let mut outs = vec![Vec::with_capacity(n_words); aig.outputs().len()];
            for part in parts {
                for (o, words) in part.into_iter().enumerate() {
                    outs[o].extend(words);
                }
            }
            return Ok(outs);
        }
    }
    let order = aig.topological_order();
    Ok(eval_range(aig, &order, inputs, 0..n_words))
}

/// Evaluates a single assignment, one bool per input.
pub fn simulate(aig: &Aig, assignment: &[bool]) -> Result<Vec<bool>> {
    let words: Vec<Vec<u64>> = assignment.iter().map(|&b| vec![b as u64]).collect();
    let outs = simulate_packed_seq(aig, &words)?;
    Ok(outs.into_iter().map(|w| w[0] & 1 != 0).collect())
}

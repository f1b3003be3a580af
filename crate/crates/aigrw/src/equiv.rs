//! Combinational equivalence checking by exhaustive or random simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aig::Aig;
use crate::error::{Error, Result};
use crate::sim::simulate_packed;

/// Exhaustive enumeration caps out at 2^16 patterns.
pub const EXHAUSTIVE_INPUT_CAP: usize = 16;
pub const DEFAULT_RANDOM_VECTORS: usize = 10_000;
pub const DEFAULT_RANDOM_SEED: u64 = 0xC0FFEE;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EquivMode {
    Exhaustive,
    Random { n_vectors: usize, seed: u64 },
}

impl Default for EquivMode {
    fn default() -> Self {
        EquivMode::Random {
            n_vectors: DEFAULT_RANDOM_VECTORS,
            seed: DEFAULT_RANDOM_SEED,
        }
    }
}

/// Exhaustive counting patterns: bit `p` of word `w` for input `i` is bit `i`
/// of pattern index `64w + p`.
fn exhaustive_patterns(n_inputs: usize) -> (Vec<Vec<u64>>, u64) {
    const MASKS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let total: usize = 1 << n_inputs;
    let n_words = total.div_ceil(64);
    let tail_mask = if total >= 64 { !0u64 } else { (1u64 << total) - 1 };
    let inputs = (0..n_inputs)
        .map(|i| {
            (0..n_words)
                .map(|w| {
                    if i < 6 {
                        MASKS[i]
                    } else if (w >> (i - 6)) & 1 != 0 {
                        !0u64
                    } else {
                        0u64
                    }
                })
                .collect()
        })
        .collect();
    (inputs, tail_mask)
}

fn random_patterns(n_inputs: usize, n_vectors: usize, seed: u64) -> (Vec<Vec<u64>>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_words = n_vectors.div_ceil(64);
    let rem = n_vectors % 64;
    let tail_mask = if rem == 0 { !0u64 } else { (1u64 << rem) - 1 };
    let inputs = (0..n_inputs)
        .map(|_| (0..n_words).map(|_| rng.gen::<u64>()).collect())
        .collect();
    (inputs, tail_mask)
}

/// True iff `a` and `b` agree on every compared pattern on all outputs.
pub fn check_equivalence(a: &Aig, b: &Aig, mode: EquivMode) -> Result<bool> {
    if a.inputs().len() != b.inputs().len() {
        return Err(Error::InterfaceMismatch(format!(
            "input counts differ: {} vs {}",
            a.inputs().len(),
            b.inputs().len()
        )));
    }
    if a.outputs().len() != b.outputs().len() {
        return Err(Error::InterfaceMismatch(format!(
            "output counts differ: {} vs {}",
            a.outputs().len(),
            b.outputs().len()
        )));
    }
    let n_inputs = a.inputs().len();
    let (patterns, tail_mask) = match mode {
        EquivMode::Exhaustive => {
            if n_inputs > EXHAUSTIVE_INPUT_CAP {
                return Err(Error::TooManyInputs {
                    inputs: n_inputs,
                    max: EXHAUSTIVE_INPUT_CAP,
                });
            }
            exhaustive_patterns(n_inputs)
        }
        EquivMode::Random { n_vectors, seed } => random_patterns(n_inputs, n_vectors, seed),
    };
    let oa = simulate_packed(a, &patterns)?;
    let ob = simulate_packed(b, &patterns)?;
    let n_words = patterns.first().map_or(1, |v| v.len()).max(1);
    for (wa, wb) in oa.iter().zip(&ob) {
        for w in 0..wa.len() {
            let mask = if w + 1 == n_words { tail_mask } else { !0u64 };
            if (wa[w] ^ wb[w]) & mask != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exhaustive when the interface allows it, default random otherwise.
pub fn check_equivalence_auto(a: &Aig, b: &Aig) -> Result<bool> {
    if a.inputs().len() <= EXHAUSTIVE_INPUT_CAP {
        check_equivalence(a, b, EquivMode::Exhaustive)
    } else {
        check_equivalence(a, b, EquivMode::default())
    }
}

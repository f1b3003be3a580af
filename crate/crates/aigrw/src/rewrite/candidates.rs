//! Replacement-cone generation from a cut truth table.
//!
//! Two construction families: one Shannon decomposition per leaf variable
//! (splitting on that variable first, then the rest in ascending order), and
//! one irredundant sum-of-products cover mapped to balanced And trees with
//! De Morgan disjunctions. Candidates are deduplicated; within a cut the
//! engine always applies the best one.

use std::collections::HashMap;

use crate::tt::{self, Cube};

pub const MAX_SPECS: usize = 32;

/// Operand of a candidate And spec: a cut leaf, an earlier spec, or the
/// constant, plus a complement flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CandTarget {
    Const,
    Leaf(usize),
    Spec(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandLit {
    pub target: CandTarget,
    pub complemented: bool,
}

impl CandLit {
    pub const FALSE: CandLit = CandLit {
        target: CandTarget::Const,
        complemented: false,
    };
    pub const TRUE: CandLit = CandLit {
        target: CandTarget::Const,
        complemented: true,
    };

    pub fn leaf(i: usize) -> CandLit {
        CandLit {
            target: CandTarget::Leaf(i),
            complemented: false,
        }
    }

    fn negate(self) -> CandLit {
        CandLit {
            complemented: !self.complemented,
            ..self
        }
    }
}

impl std::ops::Not for CandLit {
    type Output = CandLit;
    fn not(self) -> CandLit {
        self.negate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateOrigin {
    Shannon(usize),
    Isop,
}

/// A functionally-equivalent replacement cone over the cut leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    /// Topologically ordered And specs; every spec feeds the output.
    pub specs: Vec<(CandLit, CandLit)>,
    pub output: CandLit,
    pub origin: CandidateOrigin,
}

impl Candidate {
    /// Evaluates the candidate over all 16 leaf assignments.
    pub fn truth(&self) -> u16 {
        let mut tables = Vec::with_capacity(self.specs.len());
        let value = |lit: CandLit, tables: &[u16]| -> u16 {
            let t = match lit.target {
                CandTarget::Const => 0x0000,
                CandTarget::Leaf(i) => tt::VAR[i],
                CandTarget::Spec(j) => tables[j],
            };
            if lit.complemented {
                !t
            } else {
                t
            }
        };
        for &(a, b) in &self.specs {
            let t = value(a, &tables) & value(b, &tables);
            tables.push(t);
        }
        value(self.output, &tables)
    }
}

/// Builds a cone bottom-up with the same single-level simplification and
/// deduplication rules the graph applies, so spec lists mirror what
/// `add_and` would allocate.
struct ConeBuilder {
    specs: Vec<(CandLit, CandLit)>,
    hash: HashMap<(CandLit, CandLit), usize>,
}

impl ConeBuilder {
    fn new() -> Self {
        ConeBuilder {
            specs: Vec::new(),
            hash: HashMap::new(),
        }
    }

    fn and(&mut self, a: CandLit, b: CandLit) -> CandLit {
        let (a, b) = if a.target <= b.target { (a, b) } else { (b, a) };
        if a == CandLit::FALSE || b == CandLit::FALSE || (a.target == b.target && a != b) {
            return CandLit::FALSE;
        }
        if a == CandLit::TRUE {
            return b;
        }
        if b == CandLit::TRUE {
            return a;
        }
        if a == b {
            return a;
        }
        if let Some(&j) = self.hash.get(&(a, b)) {
            return CandLit {
                target: CandTarget::Spec(j),
                complemented: false,
            };
        }
        let j = self.specs.len();
        self.specs.push((a, b));
        self.hash.insert((a, b), j);
        CandLit {
            target: CandTarget::Spec(j),
            complemented: false,
        }
    }

    fn or(&mut self, a: CandLit, b: CandLit) -> CandLit {
        !self.and(!a, !b)
    }

    /// Drops specs unreachable from `output` and renumbers the rest, keeping
    /// topological order.
    fn finish(self, output: CandLit, origin: CandidateOrigin) -> Candidate {
        let mut used = vec![false; self.specs.len()];
        let mark = |lit: CandLit, used: &mut Vec<bool>| {
            if let CandTarget::Spec(j) = lit.target {
                used[j] = true;
            }
        };
        mark(output, &mut used);
        for j in (0..self.specs.len()).rev() {
            if used[j] {
                let (a, b) = self.specs[j];
                mark(a, &mut used);
                mark(b, &mut used);
            }
        }
        let mut remap = vec![usize::MAX; self.specs.len()];
        let mut specs = Vec::new();
        for (j, &(a, b)) in self.specs.iter().enumerate() {
            if used[j] {
                remap[j] = specs.len();
                let fix = |lit: CandLit| -> CandLit {
                    match lit.target {
                        CandTarget::Spec(k) => CandLit {
                            target: CandTarget::Spec(remap[k]),
                            complemented: lit.complemented,
                        },
                        _ => lit,
                    }
                };
                specs.push((fix(a), fix(b)));
            }
        }
        let output = match output.target {
            CandTarget::Spec(k) => CandLit {
                target: CandTarget::Spec(remap[k]),
                complemented: output.complemented,
            },
            _ => output,
        };
        debug_assert!(specs.len() <= MAX_SPECS);
        Candidate {
            specs,
            output,
            origin,
        }
    }
}

/// Recursive Shannon expansion over `vars` (first entry split first).
fn shannon_rec(f: u16, vars: &[usize], b: &mut ConeBuilder) -> CandLit {
    if f == 0x0000 {
        return CandLit::FALSE;
    }
    if f == 0xFFFF {
        return CandLit::TRUE;
    }
    for &v in vars {
        if f == tt::VAR[v] {
            return CandLit::leaf(v);
        }
        if f == !tt::VAR[v] {
            return !CandLit::leaf(v);
        }
    }
    let (pos, rest) = vars
        .iter()
        .enumerate()
        .find(|&(_, &v)| tt::depends_on(f, v))
        .map(|(i, &v)| (v, i))
        .expect("non-constant function depends on some variable");
    let mut remaining: Vec<usize> = vars.to_vec();
    remaining.remove(rest);
    let hi = shannon_rec(tt::cofactor1(f, pos), &remaining, b);
    let lo = shannon_rec(tt::cofactor0(f, pos), &remaining, b);
    if hi == lo {
        return hi;
    }
    let v = CandLit::leaf(pos);
    let t = b.and(v, hi);
    let e = b.and(!v, lo);
    b.or(t, e)
}

/// Balanced pairwise reduction.
fn reduce<F: FnMut(&mut ConeBuilder, CandLit, CandLit) -> CandLit>(
    b: &mut ConeBuilder,
    mut items: Vec<CandLit>,
    mut op: F,
) -> CandLit {
    debug_assert!(!items.is_empty());
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len() / 2 + 1);
        let mut it = items.chunks_exact(2);
        for pair in &mut it {
            next.push(op(b, pair[0], pair[1]));
        }
        next.extend(it.remainder().iter().copied());
        items = next;
    }
    items[0]
}

fn isop_candidate(f: u16, n_leaves: usize) -> Candidate {
    let mut b = ConeBuilder::new();
    let output = if f == 0x0000 {
        CandLit::FALSE
    } else if f == 0xFFFF {
        CandLit::TRUE
    } else {
        let (cubes, cover) = tt::isop(f, f, n_leaves);
        debug_assert_eq!(cover, f);
        let products: Vec<CandLit> = cubes
            .iter()
            .map(|c| cube_cone(&mut b, *c))
            .collect();
        reduce(&mut b, products, |b, x, y| b.or(x, y))
    };
    b.finish(output, CandidateOrigin::Isop)
}

fn cube_cone(b: &mut ConeBuilder, cube: Cube) -> CandLit {
    let lits: Vec<CandLit> = (0..4)
        .filter_map(|v| {
            if cube.pos >> v & 1 != 0 {
                Some(CandLit::leaf(v))
            } else if cube.neg >> v & 1 != 0 {
                Some(!CandLit::leaf(v))
            } else {
                None
            }
        })
        .collect();
    debug_assert!(!lits.is_empty(), "tautology cube handled by caller");
    reduce(b, lits, |b, x, y| b.and(x, y))
}

/// All replacement candidates for a cut function: one Shannon cone per leaf
/// variable plus one cover-based cone, deduplicated in that order.
pub fn build_candidates(truth: u16, n_leaves: usize) -> Vec<Candidate> {
    debug_assert!((1..=4).contains(&n_leaves));
    let vars: Vec<usize> = (0..n_leaves).collect();
    let mut out: Vec<Candidate> = Vec::with_capacity(n_leaves + 1);
    for first in 0..n_leaves {
        let mut order = vec![first];
        order.extend(vars.iter().copied().filter(|&v| v != first));
        let mut b = ConeBuilder::new();
        let lit = shannon_rec(truth, &order, &mut b);
        let cand = b.finish(lit, CandidateOrigin::Shannon(first));
        if !out
            .iter()
            .any(|c| c.specs == cand.specs && c.output == cand.output)
        {
            out.push(cand);
        }
    }
    let cand = isop_candidate(truth, n_leaves);
    if !out
        .iter()
        .any(|c| c.specs == cand.specs && c.output == cand.output)
    {
        out.push(cand);
    }
    debug_assert!(out.iter().all(|c| c.truth() == truth));
    out
}

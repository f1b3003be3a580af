//! Mutable And-Inverter Graph with structural hashing.
//!
//! Node 0 is the constant-false node. Inversion lives on edges as the
//! complement bit of [`Literal`]. And nodes are deduplicated through a
//! structural hash keyed on the ordered fanin pair. Deletion is mark-dead
//! plus reference counting; slots are never reused, so node indices stay
//! stable for the lifetime of the graph.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::literal::Literal;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    ConstFalse,
    Input,
    And { f0: Literal, f1: Literal },
}

#[derive(Clone, Debug)]
pub struct AigNode {
    kind: NodeKind,
    level: u32,
    fanout_count: u32,
    alive: bool,
}

impl AigNode {
    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn is_and(&self) -> bool {
        matches!(self.kind, NodeKind::And { .. })
    }

    pub fn is_input(&self) -> bool {
        matches!(self.kind, NodeKind::Input)
    }

    /// Fanin pair of an And node, `None` for inputs and the constant.
    pub fn fanins(&self) -> Option<(Literal, Literal)> {
        match self.kind {
            NodeKind::And { f0, f1 } => Some((f0, f1)),
            _ => None,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn fanout_count(&self) -> u32 {
        self.fanout_count
    }

    pub fn is_alive(&self) -> bool {
        self.alive
    }
}

#[derive(Clone, Debug)]
pub struct Aig {
    nodes: Vec<AigNode>,
    inputs: Vec<NodeId>,
    outputs: Vec<Literal>,
    strash: HashMap<(Literal, Literal), NodeId>,
    name: String,
    n_alive_ands: usize,
}

impl Aig {
    pub fn new(name: impl Into<String>) -> Self {
        Aig {
            nodes: vec![AigNode {
                kind: NodeKind::ConstFalse,
                level: 0,
                fanout_count: 0,
                alive: true,
            }],
            inputs: Vec::new(),
            outputs: Vec::new(),
            strash: HashMap::new(),
            name: name.into(),
            n_alive_ands: 0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Total number of node slots, dead ones included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_alive_ands == 0
    }

    /// Number of alive And nodes.
    pub fn node_count(&self) -> usize {
        self.n_alive_ands
    }

    /// Two fanin edges per alive And node.
    pub fn edge_count(&self) -> usize {
        2 * self.n_alive_ands
    }

    pub fn node(&self, id: NodeId) -> &AigNode {
        &self.nodes[id]
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Literal] {
        &self.outputs
    }

    fn check_literal(&self, lit: Literal) -> Result<()> {
        let n = lit.node();
        if n >= self.nodes.len() || !self.nodes[n].alive {
            return Err(Error::DanglingLiteral { node: n });
        }
        Ok(())
    }

    pub fn add_input(&mut self) -> Literal {
        let id = self.nodes.len();
        self.nodes.push(AigNode {
            kind: NodeKind::Input,
            level: 0,
            fanout_count: 0,
            alive: true,
        });
        self.inputs.push(id);
        Literal::positive(id)
    }

    /// Returns a literal functionally equal to `AND(a, b)`.
    ///
    /// Applies single-level simplification before allocation, then consults
    /// the structural hash; only allocates when neither yields a node.
    pub fn add_and(&mut self, a: Literal, b: Literal) -> Result<Literal> {
        self.check_literal(a)?;
        self.check_literal(b)?;
        let (a, b) = if a.node() <= b.node() { (a, b) } else { (b, a) };
        if a == Literal::FALSE || b == Literal::FALSE || a == !b {
            return Ok(Literal::FALSE);
        }
        if a == Literal::TRUE {
            return Ok(b);
        }
        if b == Literal::TRUE {
            return Ok(a);
        }
        if a == b {
            return Ok(a);
        }
        if let Some(&id) = self.strash.get(&(a, b)) {
            if self.nodes[id].alive {
                return Ok(Literal::positive(id));
            }
        }
        let level = 1 + self.nodes[a.node()].level.max(self.nodes[b.node()].level);
        let id = self.nodes.len();
        self.nodes.push(AigNode {
            kind: NodeKind::And { f0: a, f1: b },
            level,
            fanout_count: 0,
            alive: true,
        });
        self.strash.insert((a, b), id);
        self.nodes[a.node()].fanout_count += 1;
        self.nodes[b.node()].fanout_count += 1;
        self.n_alive_ands += 1;
        Ok(Literal::positive(id))
    }

    /// `OR(a, b)` through De Morgan.
    pub fn add_or(&mut self, a: Literal, b: Literal) -> Result<Literal> {
        Ok(!self.add_and(!a, !b)?)
    }

    /// `XOR(a, b)` as three And nodes: `!(!(a & !b) & !(!a & b))`.
    pub fn add_xor(&mut self, a: Literal, b: Literal) -> Result<Literal> {
        let p = self.add_and(a, !b)?;
        let q = self.add_and(!a, b)?;
        self.add_or(p, q)
    }

    /// Registers a primary output. Outputs hold a reference on their node.
    pub fn add_output(&mut self, lit: Literal) -> Result<()> {
        self.check_literal(lit)?;
        self.nodes[lit.node()].fanout_count += 1;
        self.outputs.push(lit);
        Ok(())
    }

    /// Alive And node indices, every node after both of its fanins.
    ///
    /// Indices are allocated in topological order, but fanout transfer during
    /// rewriting can point an old node at a newer one, so this does a real
    /// depth-first ordering rather than trusting index order.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.n_alive_ands);
        // 0 = unvisited, 1 = on stack, 2 = emitted
        let mut state = vec![0u8; self.nodes.len()];
        let mut stack: Vec<(NodeId, bool)> = Vec::new();
        for start in 0..self.nodes.len() {
            if state[start] != 0 || !self.nodes[start].alive || !self.nodes[start].is_and() {
                continue;
            }
            stack.push((start, false));
            while let Some((id, expanded)) = stack.pop() {
                if expanded {
                    state[id] = 2;
                    order.push(id);
                    continue;
                }
                if state[id] != 0 {
                    continue;
                }
                state[id] = 1;
                stack.push((id, true));
                if let Some((f0, f1)) = self.nodes[id].fanins() {
                    for lit in [f1, f0] {
                        let n = lit.node();
                        if state[n] == 0 && self.nodes[n].is_and() {
                            debug_assert!(self.nodes[n].alive, "alive node with dead fanin");
                            stack.push((n, false));
                        }
                    }
                }
            }
        }
        order
    }

    fn levels_fresh(&self) -> Vec<u32> {
        let mut levels = vec![0u32; self.nodes.len()];
        for id in self.topological_order() {
            let (f0, f1) = self.nodes[id].fanins().unwrap();
            levels[id] = 1 + levels[f0.node()].max(levels[f1.node()]);
        }
        levels
    }

    fn max_reachable_level(&self, levels: &[u32]) -> u32 {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<NodeId> = self.outputs.iter().map(|o| o.node()).collect();
        let mut depth = 0;
        while let Some(id) = stack.pop() {
            if seen[id] {
                continue;
            }
            seen[id] = true;
            depth = depth.max(levels[id]);
            if let Some((f0, f1)) = self.nodes[id].fanins() {
                stack.push(f0.node());
                stack.push(f1.node());
            }
        }
        depth
    }

    /// Recomputes all stored levels bottom-up and returns the graph depth:
    /// the largest level among alive nodes reachable from the outputs.
    pub fn recompute_levels(&mut self) -> u32 {
        let levels = self.levels_fresh();
        for (id, &l) in levels.iter().enumerate() {
            if self.nodes[id].is_and() {
                self.nodes[id].level = l;
            }
        }
        self.max_reachable_level(&levels)
    }

    /// Graph depth without touching stored levels; rewriting leaves stored
    /// levels stale, so cost reporting uses this.
    pub fn depth(&self) -> u32 {
        let levels = self.levels_fresh();
        self.max_reachable_level(&levels)
    }

    pub(crate) fn strash_lookup(&self, a: Literal, b: Literal) -> Option<NodeId> {
        let key = if a.node() <= b.node() { (a, b) } else { (b, a) };
        match self.strash.get(&key) {
            Some(&id) if self.nodes[id].alive => Some(id),
            _ => None,
        }
    }

    pub(crate) fn bump_fanout(&mut self, id: NodeId, delta: i64) {
        let c = self.nodes[id].fanout_count as i64 + delta;
        debug_assert!(c >= 0, "fanout count underflow on node {id}");
        self.nodes[id].fanout_count = c as u32;
    }

    pub(crate) fn set_fanins(&mut self, id: NodeId, f0: Literal, f1: Literal) {
        let (f0, f1) = if f0.node() <= f1.node() { (f0, f1) } else { (f1, f0) };
        self.nodes[id].kind = NodeKind::And { f0, f1 };
    }

    pub(crate) fn strash_remove(&mut self, key: (Literal, Literal), id: NodeId) {
        if self.strash.get(&key) == Some(&id) {
            self.strash.remove(&key);
        }
    }

    pub(crate) fn strash_insert_if_vacant(&mut self, key: (Literal, Literal), id: NodeId) {
        self.strash.entry(key).or_insert(id);
    }

    pub(crate) fn set_output(&mut self, idx: usize, lit: Literal) {
        self.outputs[idx] = lit;
    }

    /// Kills `id` and recursively dereferences its fanins; a fanin dies when
    /// its fanout count drops to zero. Requires `fanout_count(id) == 0`.
    pub(crate) fn delete_cone(&mut self, id: NodeId) {
        debug_assert_eq!(self.nodes[id].fanout_count, 0);
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            let (f0, f1) = match self.nodes[n].fanins() {
                Some(p) => p,
                None => continue, // inputs and the constant never die
            };
            self.nodes[n].alive = false;
            self.n_alive_ands -= 1;
            self.strash_remove((f0, f1), n);
            for lit in [f0, f1] {
                let m = lit.node();
                self.bump_fanout(m, -1);
                if self.nodes[m].fanout_count == 0 && self.nodes[m].is_and() && self.nodes[m].alive
                {
                    stack.push(m);
                }
            }
        }
    }

    /// Renumbers alive nodes densely (inputs first, And nodes in topological
    /// order), preserving structure exactly. Outputs keep their order.
    pub fn compact(&self) -> Aig {
        let mut out = Aig::new(self.name.clone());
        let mut map: Vec<Option<Literal>> = vec![None; self.nodes.len()];
        map[0] = Some(Literal::FALSE);
        for &inp in &self.inputs {
            map[inp] = Some(out.add_input());
        }
        for id in self.topological_order() {
            let (f0, f1) = self.nodes[id].fanins().unwrap();
            let a = map[f0.node()].expect("fanin precedes node").complement_if(f0.is_complemented());
            let b = map[f1.node()].expect("fanin precedes node").complement_if(f1.is_complemented());
            map[id] = Some(out.push_and_raw(a, b));
        }
        for &o in &self.outputs {
            let lit = map[o.node()].expect("output refers to alive node");
            out.add_output(lit.complement_if(o.is_complemented())).unwrap();
        }
        out
    }

    /// Appends an And node verbatim, without simplification or hash lookups.
    /// Duplicate pairs keep the first hash entry.
    fn push_and_raw(&mut self, a: Literal, b: Literal) -> Literal {
        let (a, b) = if a.node() <= b.node() { (a, b) } else { (b, a) };
        let level = 1 + self.nodes[a.node()].level.max(self.nodes[b.node()].level);
        let id = self.nodes.len();
        self.nodes.push(AigNode {
            kind: NodeKind::And { f0: a, f1: b },
            level,
            fanout_count: 0,
            alive: true,
        });
        self.strash_insert_if_vacant((a, b), id);
        self.nodes[a.node()].fanout_count += 1;
        self.nodes[b.node()].fanout_count += 1;
        self.n_alive_ands += 1;
        Literal::positive(id)
    }

    /// Full-scan consistency check: fanins alive and ordered, fanout counts
    /// match a recount, outputs alive, alive-And counter correct.
    pub fn validate(&self) -> Result<()> {
        let mut counts = vec![0u32; self.nodes.len()];
        let mut alive_ands = 0;
        for (id, node) in self.nodes.iter().enumerate() {
            if !node.alive {
                continue;
            }
            if let Some((f0, f1)) = node.fanins() {
                alive_ands += 1;
                if f0.node() > f1.node() {
                    return Err(Error::InvalidConfig(format!(
                        "node {id} fanins out of canonical order"
                    )));
                }
                for lit in [f0, f1] {
                    if lit.node() >= self.nodes.len() || !self.nodes[lit.node()].alive {
                        return Err(Error::DanglingLiteral { node: lit.node() });
                    }
                    counts[lit.node()] += 1;
                }
            }
        }
        for &o in &self.outputs {
            if !self.nodes[o.node()].alive {
                return Err(Error::DanglingLiteral { node: o.node() });
            }
            counts[o.node()] += 1;
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if node.alive && node.fanout_count != counts[id] {
                return Err(Error::InvalidConfig(format!(
                    "node {id} fanout count {} != recount {}",
                    node.fanout_count, counts[id]
                )));
            }
        }
        if alive_ands != self.n_alive_ands {
            return Err(Error::InvalidConfig(format!(
                "alive And counter {} != recount {alive_ands}",
                self.n_alive_ands
            )));
        }
        Ok(())
    }

    /// Scan for alive And nodes sharing an ordered fanin pair. Holds for any
    /// pure construction sequence; fanout transfer may break it transiently.
    pub fn duplicate_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut seen: HashMap<(Literal, Literal), NodeId> = HashMap::new();
        let mut dups = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if !node.alive {
                continue;
            }
            if let Some(pair) = node.fanins() {
                if let Some(&prev) = seen.get(&pair) {
                    dups.push((prev, id));
                } else {
                    seen.insert(pair, id);
                }
            }
        }
        dups
    }
}

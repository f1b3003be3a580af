//! ASCII AIGER (`aag`) reading and writing, combinational only.
//!
//! Literals follow the `2v + c` convention: 0 is constant false, 1 constant
//! true, even literals are uncomplemented. And definitions may appear in any
//! order; resolution iterates until a fixed point.

use std::collections::HashMap;

use crate::aig::Aig;
use crate::error::{Error, Result};
use crate::literal::Literal;

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

pub fn read_aag(text: &str) -> Result<Aig> {
    read_aag_named(text, "<aag>")
}

pub fn read_aag_named(text: &str, path: &str) -> Result<Aig> {
    let mut lines = text.lines().enumerate();
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != "aag" {
        return Err(parse_err(path, hline + 1, "expected header `aag M I L O A`"));
    }
    let nums: Vec<u64> = fields[1..]
        .iter()
        .map(|s| s.parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(path, hline + 1, format!("bad header field: {e}")))?;
    let (m, i, l, o, a) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
    if l != 0 {
        return Err(Error::Unsupported(format!(
            "{path}: {l} latches present, only combinational circuits are handled"
        )));
    }
    if i + a > m {
        return Err(parse_err(path, hline + 1, "M smaller than I + A"));
    }

    let mut next = |what: &str| -> Result<(usize, &str)> {
        for (ln, raw) in lines.by_ref() {
            if raw.trim().is_empty() {
                continue;
            }
            return Ok((ln + 1, raw));
        }
        Err(parse_err(path, 0, format!("unexpected end of file, missing {what}")))
    };

    let mut g = Aig::new(path.trim_end_matches(".aag").to_string());
    // var -> literal in the rebuilt graph
    let mut map: HashMap<u64, Literal> = HashMap::new();
    map.insert(0, Literal::FALSE);
    for _ in 0..i {
        let (ln, raw) = next("input definition")?;
        let lit: u64 = raw
            .trim()
            .parse()
            .map_err(|e| parse_err(path, ln, format!("bad input literal: {e}")))?;
        if lit < 2 || !lit.is_multiple_of(2) || lit > 2 * m + 1 {
            return Err(parse_err(path, ln, format!("invalid input literal {lit}")));
        }
        let var = lit / 2;
        if map.contains_key(&var) {
            return Err(parse_err(path, ln, format!("variable {var} defined twice")));
        }
        map.insert(var, g.add_input());
    }
    let mut out_lits: Vec<(usize, u64)> = Vec::with_capacity(o as usize);
    for _ in 0..o {
        let (ln, raw) = next("output definition")?;
        let lit: u64 = raw
            .trim()
            .parse()
            .map_err(|e| parse_err(path, ln, format!("bad output literal: {e}")))?;
        if lit > 2 * m + 1 {
            return Err(parse_err(path, ln, format!("output literal {lit} exceeds 2M+1")));
        }
        out_lits.push((ln, lit));
    }
    struct AndDef {
        line: usize,
        lhs: u64,
        rhs0: u64,
        rhs1: u64,
    }
    let mut defs: Vec<AndDef> = Vec::with_capacity(a as usize);
    for _ in 0..a {
        let (ln, raw) = next("and definition")?;
        let nums: Vec<u64> = raw
            .split_whitespace()
            .map(|s| s.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, ln, format!("bad and line: {e}")))?;
        if nums.len() != 3 {
            return Err(parse_err(path, ln, "and line needs `lhs rhs0 rhs1`"));
        }
        let (lhs, rhs0, rhs1) = (nums[0], nums[1], nums[2]);
        if lhs % 2 != 0 || lhs < 2 {
            return Err(parse_err(path, ln, format!("lhs {lhs} must be an even literal")));
        }
        for r in [lhs, rhs0, rhs1] {
            if r > 2 * m + 1 {
                return Err(parse_err(path, ln, format!("literal {r} exceeds 2M+1")));
            }
        }
        if map.contains_key(&(lhs / 2)) {
            return Err(parse_err(path, ln, format!("variable {} defined twice", lhs / 2)));
        }
        defs.push(AndDef {
            line: ln,
            lhs,
            rhs0,
            rhs1,
        });
        map.insert(lhs / 2, Literal::FALSE); // reserve; real value filled below
    }
    // two structures: reserved markers removed, then fixed-point resolution
    for d in &defs {
        map.remove(&(d.lhs / 2));
    }
    let mut pending: Vec<&AndDef> = defs.iter().collect();
    while !pending.is_empty() {
        let mut progressed = false;
        let mut rest = Vec::with_capacity(pending.len());
        for d in pending {
            let r0 = map.get(&(d.rhs0 / 2)).copied();
            let r1 = map.get(&(d.rhs1 / 2)).copied();
            match (r0, r1) {
                (Some(l0), Some(l1)) => {
                    let l0 = l0.complement_if(d.rhs0 % 2 == 1);
                    let l1 = l1.complement_if(d.rhs1 % 2 == 1);
                    let lit = g.add_and(l0, l1)?;
                    map.insert(d.lhs / 2, lit);
                    progressed = true;
                }
                _ => rest.push(d),
            }
        }
        if !progressed {
            let d = rest[0];
            return Err(parse_err(
                path,
                d.line,
                format!("and {} references undefined or cyclic literals", d.lhs),
            ));
        }
        pending = rest;
    }
    for (ln, lit) in out_lits {
        let base = map
            .get(&(lit / 2))
            .copied()
            .ok_or_else(|| parse_err(path, ln, format!("output references undefined variable {}", lit / 2)))?;
        g.add_output(base.complement_if(lit % 2 == 1))?;
    }
    Ok(g)
}

/// Writes valid ASCII AIGER. Nodes are renumbered densely (inputs first,
/// And nodes in topological order), so `M = I + A`.
pub fn write_aag(aig: &Aig) -> String {
    let order = aig.topological_order();
    let n_inputs = aig.inputs().len();
    let n_ands = order.len();
    let m = n_inputs + n_ands;
    // node id -> aiger variable
    let mut var: Vec<u64> = vec![0; aig.len()];
    for (i, &inp) in aig.inputs().iter().enumerate() {
        var[inp] = (i + 1) as u64;
    }
    for (j, &id) in order.iter().enumerate() {
        var[id] = (n_inputs + j + 1) as u64;
    }
    let enc = |lit: Literal| -> u64 { 2 * var[lit.node()] + lit.is_complemented() as u64 };
    let mut out = String::new();
    out.push_str(&format!(
        "aag {m} {n_inputs} 0 {} {n_ands}\n",
        aig.outputs().len()
    ));
    for i in 0..n_inputs {
        out.push_str(&format!("{}\n", 2 * (i + 1)));
    }
    for &o in aig.outputs() {
        out.push_str(&format!("{}\n", enc(o)));
    }
    for &id in &order {
        let (f0, f1) = aig.node(id).fanins().unwrap();
        out.push_str(&format!("{} {} {}\n", 2 * var[id], enc(f0), enc(f1)));
    }
    out
}

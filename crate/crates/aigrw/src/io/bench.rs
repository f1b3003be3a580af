//! ISCAS-style bench format reader.
//!
//! `INPUT(x)`, `OUTPUT(y)`, and `sig = GATE(a, b, ...)` lines with gates
//! drawn from AND, NAND, OR, NOR, NOT, BUFF, XOR, XNOR. Multi-input gates
//! decompose into balanced two-input trees over complement edges; XOR uses
//! the three-And construction per stage. Definitions may appear in any
//! order.

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

#[derive(Clone, Copy, PartialEq, Debug)]
enum Gate {
    And,
    Nand,
    Or,
    Nor,
    Not,
    Buff,
    Xor,
    Xnor,
}

impl Gate {
    fn parse(s: &str) -> Option<Gate> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Some(Gate::And),
            "NAND" => Some(Gate::Nand),
            "OR" => Some(Gate::Or),
            "NOR" => Some(Gate::Nor),
            "NOT" => Some(Gate::Not),
            "BUFF" | "BUF" => Some(Gate::Buff),
            "XOR" => Some(Gate::Xor),
            "XNOR" => Some(Gate::Xnor),
            _ => None,
        }
    }
}

struct GateDef {
    line: usize,
    name: String,
    gate: Gate,
    args: Vec<String>,
}

pub fn read_bench(text: &str) -> Result<Aig> {
    read_bench_named(text, "<bench>")
}

pub fn read_bench_named(text: &str, path: &str) -> Result<Aig> {
    let mut inputs: Vec<(usize, String)> = Vec::new();
    let mut outputs: Vec<(usize, String)> = Vec::new();
    let mut defs: Vec<GateDef> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let s = stripped.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix("INPUT") {
            inputs.push((line, paren_arg(rest, path, line)?));
            continue;
        }
        if let Some(rest) = s.strip_prefix("OUTPUT") {
            outputs.push((line, paren_arg(rest, path, line)?));
            continue;
        }
        let (name, rhs) = s
            .split_once('=')
            .ok_or_else(|| parse_err(path, line, "expected `sig = GATE(args)`"))?;
        let name = name.trim().to_string();
        let rhs = rhs.trim();
        let open = rhs
            .find('(')
            .ok_or_else(|| parse_err(path, line, "missing `(` in gate expression"))?;
        if !rhs.ends_with(')') {
            return Err(parse_err(path, line, "missing `)` in gate expression"));
        }
        let gate_name = rhs[..open].trim();
        let gate = Gate::parse(gate_name)
            .ok_or_else(|| parse_err(path, line, format!("unknown gate `{gate_name}`")))?;
        let args: Vec<String> = rhs[open + 1..rhs.len() - 1]
            .split(',')
            .map(|a| a.trim().to_string())
            .filter(|a| !a.is_empty())
            .collect();
        let arity_ok = match gate {
            Gate::Not | Gate::Buff => args.len() == 1,
            _ => args.len() >= 2,
        };
        if !arity_ok {
            return Err(parse_err(
                path,
                line,
                format!("gate {gate_name} with {} arguments", args.len()),
            ));
        }
        defs.push(GateDef {
            line,
            name,
            gate,
            args,
        });
    }

    let mut g = Aig::new(path.trim_end_matches(".bench").to_string());
    let mut signals: HashMap<String, Literal> = HashMap::new();
    for (line, name) in &inputs {
        if signals.contains_key(name) {
            return Err(parse_err(path, *line, format!("signal `{name}` defined twice")));
        }
        signals.insert(name.clone(), g.add_input());
    }
    for d in &defs {
        if signals.contains_key(&d.name) {
            return Err(parse_err(
                path,
                d.line,
                format!("signal `{}` defined twice", d.name),
            ));
        }
    }
    // fixed-point resolution so definitions may appear in any order
    let mut pending: Vec<&GateDef> = defs.iter().collect();
    while !pending.is_empty() {
        let mut progressed = false;
        let mut rest = Vec::with_capacity(pending.len());
        for d in pending {
            if d.args.iter().all(|a| signals.contains_key(a)) {
                let args: Vec<Literal> = d.args.iter().map(|a| signals[a]).collect();
                let lit = build_gate(&mut g, d.gate, &args)?;
                if signals.insert(d.name.clone(), lit).is_some() {
                    return Err(parse_err(
                        path,
                        d.line,
                        format!("signal `{}` defined twice", d.name),
                    ));
                }
                progressed = true;
            } else {
                rest.push(d);
            }
        }
        if !progressed {
            // some argument is never defined anywhere
            for d in &rest {
                for a in &d.args {
                    if !signals.contains_key(a) && !defs.iter().any(|e| &e.name == a) {
                        return Err(Error::UndefinedSignal(a.clone()));
                    }
                }
            }
            return Err(parse_err(
                path,
                rest[0].line,
                format!("cyclic definition around `{}`", rest[0].name),
            ));
        }
        pending = rest;
    }
    for (_, name) in &outputs {
        let lit = signals
            .get(name)
            .copied()
            .ok_or_else(|| Error::UndefinedSignal(name.clone()))?;
        g.add_output(lit)?;
    }
    Ok(g)
}

fn paren_arg(rest: &str, path: &str, line: usize) -> Result<String> {
    let rest = rest.trim();
    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let name = inner.trim();
        if !name.is_empty() {
            return Ok(name.to_string());
        }
    }
    Err(parse_err(path, line, "expected `(signal)`"))
}

fn reduce_balanced<F>(g: &mut Aig, mut items: Vec<Literal>, mut op: F) -> Result<Literal>
where
    F: FnMut(&mut Aig, Literal, Literal) -> Result<Literal>,
{
    debug_assert!(!items.is_empty());
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len() / 2 + 1);
        let mut it = items.chunks_exact(2);
        for pair in &mut it {
            next.push(op(g, pair[0], pair[1])?);
        }
        next.extend(it.remainder().iter().copied());
        items = next;
    }
    Ok(items[0])
}

fn build_gate(g: &mut Aig, gate: Gate, args: &[Literal]) -> Result<Literal> {
    let args = args.to_vec();
    match gate {
        Gate::Buff => Ok(args[0]),
        Gate::Not => Ok(!args[0]),
        Gate::And => reduce_balanced(g, args, |g, a, b| g.add_and(a, b)),
        Gate::Nand => Ok(!reduce_balanced(g, args, |g, a, b| g.add_and(a, b))?),
        Gate::Or => reduce_balanced(g, args, |g, a, b| g.add_or(a, b)),
        Gate::Nor => Ok(!reduce_balanced(g, args, |g, a, b| g.add_or(a, b))?),
        Gate::Xor => reduce_balanced(g, args, |g, a, b| g.add_xor(a, b)),
        Gate::Xnor => Ok(!reduce_balanced(g, args, |g, a, b| g.add_xor(a, b))?),
    }
}

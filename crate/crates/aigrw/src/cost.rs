//! Technology-independent cost functions and the comparison methods.
//!
//! Area proxy is the alive And count, delay proxy the AIG depth. Every
//! method verifies the rewritten graph against its input before reporting;
//! a failed check is a hard error, never a silently reported row.

use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::aig::Aig;
use crate::cuts::{enumerate_cuts, CutSet, DEFAULT_CUT_CAP, DEFAULT_K};
use crate::equiv::check_equivalence_auto;
use crate::error::{Error, Result};
use crate::rewrite::{rewrite_pass, Policy};
use crate::rl::{train, RewardConfig, TrainConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostKind {
    NodeCount,
    EdgeCount,
    Depth,
}

impl CostKind {
    pub fn parse(s: &str) -> Result<CostKind> {
        match s {
            "node" | "nodes" | "node_count" => Ok(CostKind::NodeCount),
            "edge" | "edges" | "edge_count" => Ok(CostKind::EdgeCount),
            "depth" => Ok(CostKind::Depth),
            other => Err(Error::InvalidConfig(format!("unknown cost kind `{other}`"))),
        }
    }
}

pub fn cost(aig: &Aig, kind: CostKind) -> f64 {
    match kind {
        CostKind::NodeCount => aig.node_count() as f64,
        CostKind::EdgeCount => aig.edge_count() as f64,
        CostKind::Depth => aig.depth() as f64,
    }
}

/// Cost relative to a reference graph (the reference maps to 1.0). Training
/// feeds this to the agent: the terminal constants are normalization
/// factors, so the score they scale has to be a normalized one.
pub fn relative_cost_fn(reference: &Aig, kind: CostKind) -> impl Fn(&Aig) -> crate::error::Result<f64> {
    let base = cost(reference, kind).max(1.0);
    move |g: &Aig| Ok(cost(g, kind) / base)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub depth: u32,
    pub score: f64,
}

pub fn report(aig: &Aig, kind: CostKind) -> CostReport {
    CostReport {
        node_count: aig.node_count(),
        edge_count: aig.edge_count(),
        depth: aig.depth(),
        score: cost(aig, kind),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    NoRw,
    Drw,
    DrwN(u32),
    Random { tries: u32 },
    Qdrw,
}

impl Method {
    pub fn parse(s: &str) -> Result<Method> {
        if s == "norw" {
            return Ok(Method::NoRw);
        }
        if s == "drw" {
            return Ok(Method::Drw);
        }
        if s == "qdrw" {
            return Ok(Method::Qdrw);
        }
        if let Some(n) = s.strip_prefix("drw") {
            if let Ok(n) = n.parse::<u32>() {
                if n >= 1 {
                    return Ok(Method::DrwN(n));
                }
            }
        }
        if s == "random" {
            return Ok(Method::Random { tries: 10 });
        }
        if let Some(n) = s.strip_prefix("random") {
            if let Ok(n) = n.parse::<u32>() {
                if n >= 1 {
                    return Ok(Method::Random { tries: n });
                }
            }
        }
        Err(Error::InvalidConfig(format!("unknown method `{s}`")))
    }

    pub fn label(&self) -> String {
        match self {
            Method::NoRw => "norw".into(),
            Method::Drw => "drw".into(),
            Method::DrwN(n) => format!("drw{n}"),
            Method::Random { tries } => format!("random{tries}"),
            Method::Qdrw => "qdrw".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub report: CostReport,
    pub runtime_seconds: f64,
    pub equivalence_ok: bool,
}

/// Shared knobs for all methods.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cut_cap: usize,
    pub cost: CostKind,
    pub reward: RewardConfig,
    pub train: TrainConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cut_cap: DEFAULT_CUT_CAP,
            cost: CostKind::NodeCount,
            reward: RewardConfig::default(),
            train: TrainConfig::default(),
        }
    }
}

fn cuts_of(aig: &Aig, cfg: &RunConfig) -> Result<CutSet> {
    enumerate_cuts(aig, DEFAULT_K, cfg.cut_cap)
}

fn verified(original: &Aig, rewritten: &Aig, method: Method) -> Result<bool> {
    if check_equivalence_auto(original, rewritten)? {
        Ok(true)
    } else {
        Err(Error::EquivalenceFailure(method.label()))
    }
}

fn run_random_try(aig: &Aig, cutset: &CutSet, seed: u64, kind: CostKind) -> Result<(Aig, f64)> {
    let mut g = aig.clone();
    rewrite_pass(&mut g, cutset, Policy::Random { seed })?;
    let score = cost(&g, kind);
    Ok((g, score))
}

fn random_tries(aig: &Aig, cutset: &CutSet, tries: u32, kind: CostKind) -> Result<Vec<(Aig, f64)>> {
    let seeds: Vec<u64> = (0..tries as u64).collect();
    #[cfg(feature = "parallel")]
    let results = seeds
        .into_par_iter()
        .map(|s| run_random_try(aig, cutset, s, kind))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let results = seeds
        .into_iter()
        .map(|s| run_random_try(aig, cutset, s, kind))
        .collect();
    results
}

/// Sequential variant of the random baseline, kept for benchmarking the
/// thread-pool speedup.
pub fn random_tries_seq(aig: &Aig, cutset: &CutSet, tries: u32, kind: CostKind) -> Result<Vec<f64>> {
    (0..tries as u64)
        .map(|s| run_random_try(aig, cutset, s, kind).map(|(_, score)| score))
        .collect()
}

/// Runs one comparison method on a private copy of the input.
pub fn run_method(aig: &Aig, method: Method, cfg: &RunConfig) -> Result<MethodResult> {
    let t0 = Instant::now();
    let (rep, equivalence_ok) = match method {
        Method::NoRw => {
            let ok = verified(aig, aig, method)?;
            (report(aig, cfg.cost), ok)
        }
        Method::Drw => {
            let mut g = aig.clone();
            let cuts = cuts_of(&g, cfg)?;
            rewrite_pass(&mut g, &cuts, Policy::Greedy)?;
            let ok = verified(aig, &g, method)?;
            (report(&g, cfg.cost), ok)
        }
        Method::DrwN(n) => {
            let mut g = aig.clone();
            for _ in 0..n {
                let cuts = cuts_of(&g, cfg)?;
                rewrite_pass(&mut g, &cuts, Policy::Greedy)?;
            }
            let ok = verified(aig, &g, method)?;
            (report(&g, cfg.cost), ok)
        }
        Method::Random { tries } => {
            let cuts = cuts_of(aig, cfg)?;
            let results = random_tries(aig, &cuts, tries, cfg.cost)?;
            for (g, _) in &results {
                verified(aig, g, method)?;
            }
            let n = results.len() as f64;
            let mean = |f: &dyn Fn(&Aig) -> f64| {
                results.iter().map(|(g, _)| f(g)).sum::<f64>() / n
            };
            let node_mean = mean(&|g| g.node_count() as f64);
            let depth_mean = mean(&|g| g.depth() as f64);
            let score_mean = results.iter().map(|(_, s)| s).sum::<f64>() / n;
            // integer fields are rounded means; the score is exact
            let node_count = node_mean.round() as usize;
            (
                CostReport {
                    node_count,
                    edge_count: 2 * node_count,
                    depth: depth_mean.round() as u32,
                    score: score_mean,
                },
                true,
            )
        }
        Method::Qdrw => {
            let cuts = cuts_of(aig, cfg)?;
            let result = train(
                aig,
                &cuts,
                relative_cost_fn(aig, cfg.cost),
                &cfg.reward,
                &cfg.train,
            )?;
            let ok = verified(aig, &result.best, method)?;
            (report(&result.best, cfg.cost), ok)
        }
    };
    Ok(MethodResult {
        method,
        report: rep,
        runtime_seconds: t0.elapsed().as_secs_f64(),
        equivalence_ok,
    })
}

/// Runs every (circuit, method) cell on private copies; with the `parallel`
/// feature the grid is spread over the thread pool, and rows come back in
/// input order either way.
pub fn compare(
    circuits: &[(String, Aig)],
    methods: &[Method],
    cfg: &RunConfig,
) -> Result<Vec<(String, MethodResult)>> {
    let cells: Vec<(usize, Method)> = circuits
        .iter()
        .enumerate()
        .flat_map(|(i, _)| methods.iter().map(move |&m| (i, m)))
        .collect();
    #[cfg(feature = "parallel")]
    let results: Result<Vec<_>> = cells
        .par_iter()
        .map(|&(i, m)| {
            let (name, aig) = &circuits[i];
            run_method(aig, m, cfg).map(|r| (name.clone(), r))
        })
        .collect();
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<_>> = cells
        .iter()
        .map(|&(i, m)| {
            let (name, aig) = &circuits[i];
            run_method(aig, m, cfg).map(|r| (name.clone(), r))
        })
        .collect();
    results
}

/// Fixed-column CSV: name, method, node_count, edge_count, depth, score,
/// runtime_seconds.
pub fn results_to_csv(rows: &[(String, MethodResult)]) -> String {
    let mut out = String::from("name,method,node_count,edge_count,depth,score,runtime_seconds\n");
    for (name, r) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            name,
            r.method.label(),
            r.report.node_count,
            r.report.edge_count,
            r.report.depth,
            r.report.score,
            r.runtime_seconds
        ));
    }
    out
}

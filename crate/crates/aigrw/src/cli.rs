//! Command-line surface: stats, rewrite, train, random, compare, check.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::aig::Aig;
use crate::cost::{report, results_to_csv, run_method, CostKind, Method, MethodResult, RunConfig};
use crate::cuts::{enumerate_cuts, DEFAULT_CUT_CAP, DEFAULT_K};
use crate::equiv::{check_equivalence, check_equivalence_auto, EquivMode};
use crate::error::{Error, Result};
use crate::io::{read_circuit, write_circuit};
use crate::rewrite::{rewrite_pass, Policy};
use crate::rl::{train, AlphaMode, LearningCurves, RewardConfig, TrainConfig};

#[derive(Parser)]
#[command(
    name = "aigrw",
    version,
    about = "Q-learning guided DAG-aware AIG rewriting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print node, edge, and depth statistics for a circuit
    Stats { file: PathBuf },
    /// Greedy rewrite passes
    Rewrite {
        file: PathBuf,
        /// Number of greedy passes, cuts re-enumerated between passes
        #[arg(long, default_value_t = 1)]
        passes: u32,
        /// Write the rewritten circuit as ASCII AIGER
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Q-learning guided rewrite
    Train {
        file: PathBuf,
        #[command(flatten)]
        opts: TrainOpts,
        /// Write the best netlist as ASCII AIGER
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random-action rewrite baseline, mean cost over several tries
    Random {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        tries: u32,
    },
    /// Run a comparison grid from a key=value run spec and emit a CSV
    Compare {
        config: PathBuf,
        /// Overrides output_dir from the run spec
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Overrides seed from the run spec
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check two circuits for combinational equivalence
    Check {
        a: PathBuf,
        b: PathBuf,
        /// Force exhaustive comparison (inputs must be at most 16)
        #[arg(long)]
        exhaustive: bool,
        /// Random-pattern count when not exhaustive
        #[arg(long, default_value_t = crate::equiv::DEFAULT_RANDOM_VECTORS)]
        vectors: usize,
        #[arg(long, default_value_t = crate::equiv::DEFAULT_RANDOM_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct TrainOpts {
    #[arg(long, default_value_t = 1000)]
    episodes: usize,
    #[arg(long, default_value_t = 0.9)]
    gamma: f64,
    /// Fixed learning rate
    #[arg(long, default_value_t = 0.1, conflicts_with = "alpha_one_over_k")]
    alpha: f64,
    /// Per-cell 1/k learning-rate schedule instead of a fixed alpha
    #[arg(long)]
    alpha_one_over_k: bool,
    #[arg(long, default_value_t = 0.95)]
    eps_start: f64,
    #[arg(long, default_value_t = 0.05)]
    eps_end: f64,
    #[arg(long, default_value_t = 0.995)]
    eps_decay: f64,
    #[arg(long, default_value_t = 1.0)]
    k1: f64,
    #[arg(long, default_value_t = 1.0)]
    k2: f64,
    #[arg(long, default_value_t = 10.0)]
    r_small: f64,
    #[arg(long, default_value_t = 30.0)]
    r_medium: f64,
    #[arg(long, default_value_t = 50.0)]
    r_large: f64,
    #[arg(long, default_value_t = 200.0)]
    r_supersize: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the three learning-curve CSV files
    #[arg(long)]
    curves_out: Option<PathBuf>,
}

impl TrainOpts {
    fn reward(&self) -> RewardConfig {
        RewardConfig {
            k1: self.k1,
            k2: self.k2,
            small: self.r_small,
            medium: self.r_medium,
            large: self.r_large,
            supersize: self.r_supersize,
        }
    }

    fn train(&self) -> TrainConfig {
        TrainConfig {
            episodes: self.episodes,
            gamma: self.gamma,
            alpha_mode: if self.alpha_one_over_k {
                AlphaMode::OneOverK
            } else {
                AlphaMode::Fixed(self.alpha)
            },
            epsilon_start: self.eps_start,
            epsilon_end: self.eps_end,
            epsilon_decay: self.eps_decay,
            seed: self.seed,
            ..TrainConfig::default()
        }
    }
}

/// Parses and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Stats { file } => {
            let g = read_circuit(&file)?;
            let r = report(&g, CostKind::NodeCount);
            println!("name: {}", g.name());
            println!("inputs: {}", g.inputs().len());
            println!("outputs: {}", g.outputs().len());
            println!("node_count: {}", r.node_count);
            println!("edge_count: {}", r.edge_count);
            println!("depth: {}", r.depth);
            println!("score: {}", r.score);
            Ok(0)
        }
        Command::Rewrite {
            file,
            passes,
            output,
        } => {
            let original = read_circuit(&file)?;
            let mut g = original.clone();
            let before = g.node_count();
            for _ in 0..passes {
                let cuts = enumerate_cuts(&g, DEFAULT_K, DEFAULT_CUT_CAP)?;
                rewrite_pass(&mut g, &cuts, Policy::Greedy)?;
            }
            if !check_equivalence_auto(&original, &g)? {
                return Err(Error::EquivalenceFailure("rewrite".into()));
            }
            println!("node_count: {} -> {}", before, g.node_count());
            println!("depth: {}", g.depth());
            if let Some(path) = output {
                write_circuit(&path, &g.compact())?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Train {
            file,
            opts,
            output,
        } => {
            let g = read_circuit(&file)?;
            let reward_cfg = opts.reward();
            let train_cfg = opts.train();
            println!("seed: {}", train_cfg.seed);
            let cuts = enumerate_cuts(&g, DEFAULT_K, DEFAULT_CUT_CAP)?;
            let result = train(
                &g,
                &cuts,
                crate::cost::relative_cost_fn(&g, CostKind::NodeCount),
                &reward_cfg,
                &train_cfg,
            )?;
            if !check_equivalence_auto(&g, &result.best)? {
                return Err(Error::EquivalenceFailure("qdrw".into()));
            }
            println!("baseline_node_count: {}", g.node_count());
            println!("best_node_count: {}", result.best.node_count());
            println!("best_score: {}", result.best_score);
            println!("episodes: {}", result.episodes.len());
            if let Some(dir) = &opts.curves_out {
                write_curves(dir, &result.curves)?;
                println!("curves: {}", dir.display());
            }
            if let Some(path) = output {
                write_circuit(&path, &result.best.compact())?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Random { file, tries } => {
            let g = read_circuit(&file)?;
            println!("seeds: 0..{}", tries.saturating_sub(1));
            let result = run_method(&g, Method::Random { tries }, &RunConfig::default())?;
            println!("mean_node_count: {}", result.report.score);
            Ok(0)
        }
        Command::Compare {
            config,
            output_dir,
            seed,
        } => {
            let mut spec = RunSpec::load(&config)?;
            if let Some(dir) = output_dir {
                spec.output_dir = dir;
            }
            if let Some(s) = seed {
                spec.config.train.seed = s;
            }
            println!("seed: {}", spec.config.train.seed);
            let circuits: Vec<(String, Aig)> = spec
                .circuits
                .iter()
                .map(|p| read_circuit(p).map(|g| (g.name().to_string(), g)))
                .collect::<Result<_>>()?;
            let rows = crate::cost::compare(&circuits, &spec.methods, &spec.config)?;
            std::fs::create_dir_all(&spec.output_dir)?;
            let csv_path = spec.output_dir.join("results.csv");
            std::fs::write(&csv_path, results_to_csv(&rows))?;
            print_rows(&rows);
            println!("wrote {}", csv_path.display());
            Ok(0)
        }
        Command::Check {
            a,
            b,
            exhaustive,
            vectors,
            seed,
        } => {
            let ga = read_circuit(&a)?;
            let gb = read_circuit(&b)?;
            let equal = if exhaustive || ga.inputs().len() <= crate::equiv::EXHAUSTIVE_INPUT_CAP {
                check_equivalence(&ga, &gb, EquivMode::Exhaustive)?
            } else {
                println!("seed: {seed}");
                check_equivalence(
                    &ga,
                    &gb,
                    EquivMode::Random {
                        n_vectors: vectors,
                        seed,
                    },
                )?
            };
            if equal {
                println!("equivalent");
                Ok(0)
            } else {
                println!("not equivalent");
                Ok(1)
            }
        }
    }
}

fn print_rows(rows: &[(String, MethodResult)]) {
    for (name, r) in rows {
        println!(
            "{name} {}: nodes={} edges={} depth={} score={} ({}s)",
            r.method.label(),
            r.report.node_count,
            r.report.edge_count,
            r.report.depth,
            r.report.score,
            r.runtime_seconds
        );
    }
}

fn write_curves(dir: &Path, curves: &LearningCurves) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut scores = String::from("episode,score\n");
    for (i, s) in curves.episode_scores.iter().enumerate() {
        scores.push_str(&format!("{i},{s}\n"));
    }
    std::fs::write(dir.join("scores.csv"), scores)?;
    let mut avg_scores = String::from("period,avg_score\n");
    for (i, s) in curves.period_avg_scores.iter().enumerate() {
        avg_scores.push_str(&format!("{i},{s}\n"));
    }
    std::fs::write(dir.join("avg_scores.csv"), avg_scores)?;
    let mut avg_rewards = String::from("period,avg_reward\n");
    for (i, s) in curves.period_avg_rewards.iter().enumerate() {
        avg_rewards.push_str(&format!("{i},{s}\n"));
    }
    std::fs::write(dir.join("avg_rewards.csv"), avg_rewards)?;
    Ok(())
}

/// Flat key=value run spec for `compare`. Circuit paths are relative to the
/// spec file's directory; CLI flags win on conflict.
struct RunSpec {
    circuits: Vec<PathBuf>,
    methods: Vec<Method>,
    output_dir: PathBuf,
    config: RunConfig,
}

impl RunSpec {
    fn load(path: &Path) -> Result<RunSpec> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut circuits = Vec::new();
        let mut methods = Vec::new();
        let mut output_dir = base.join("out");
        let mut config = RunConfig::default();
        let mut alpha = 0.1f64;
        let mut one_over_k = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let s = s.trim();
            if s.is_empty() {
                continue;
            }
            let (key, value) = s.split_once('=').ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                line,
                msg: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::Parse {
                path: path.display().to_string(),
                line,
                msg,
            };
            let parse_f64 =
                |v: &str| v.parse::<f64>().map_err(|e| bad(format!("bad number: {e}")));
            match key {
                "circuits" => {
                    for item in value.split(',') {
                        let p = base.join(item.trim());
                        if !p.exists() {
                            return Err(bad(format!("circuit {} does not exist", p.display())));
                        }
                        circuits.push(p);
                    }
                }
                "methods" => {
                    for item in value.split(',') {
                        methods.push(Method::parse(item.trim())?);
                    }
                }
                "output_dir" => output_dir = base.join(value),
                "seed" => {
                    config.train.seed =
                        value.parse().map_err(|e| bad(format!("bad seed: {e}")))?
                }
                "episodes" => {
                    config.train.episodes =
                        value.parse().map_err(|e| bad(format!("bad episodes: {e}")))?
                }
                "gamma" => config.train.gamma = parse_f64(value)?,
                "alpha" => alpha = parse_f64(value)?,
                "alpha_one_over_k" => {
                    one_over_k = value
                        .parse()
                        .map_err(|e| bad(format!("bad bool: {e}")))?
                }
                "eps_start" => config.train.epsilon_start = parse_f64(value)?,
                "eps_end" => config.train.epsilon_end = parse_f64(value)?,
                "eps_decay" => config.train.epsilon_decay = parse_f64(value)?,
                "period" => {
                    config.train.period =
                        value.parse().map_err(|e| bad(format!("bad period: {e}")))?
                }
                "q_init_min" => config.train.q_init_min = parse_f64(value)?,
                "q_init_max" => config.train.q_init_max = parse_f64(value)?,
                "k1" => config.reward.k1 = parse_f64(value)?,
                "k2" => config.reward.k2 = parse_f64(value)?,
                "r_small" => config.reward.small = parse_f64(value)?,
                "r_medium" => config.reward.medium = parse_f64(value)?,
                "r_large" => config.reward.large = parse_f64(value)?,
                "r_supersize" => config.reward.supersize = parse_f64(value)?,
                "cut_cap" => {
                    config.cut_cap =
                        value.parse().map_err(|e| bad(format!("bad cut_cap: {e}")))?
                }
                "cost" => config.cost = CostKind::parse(value)?,
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        config.train.alpha_mode = if one_over_k {
            AlphaMode::OneOverK
        } else {
            AlphaMode::Fixed(alpha)
        };
        if circuits.is_empty() {
            return Err(Error::InvalidConfig("run spec lists no circuits".into()));
        }
        if methods.is_empty() {
            methods = vec![
                Method::NoRw,
                Method::Drw,
                Method::DrwN(10),
                Method::Random { tries: 10 },
                Method::Qdrw,
            ];
        }
        Ok(RunSpec {
            circuits,
            methods,
            output_dir,
            config,
        })
    }
}

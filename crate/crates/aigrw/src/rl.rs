//! Tabular Q-learning over the approximate node-as-state model.
//!
//! States are positions in the episode-start topological order, one row per
//! And node; actions are raw cut indices over the widest cut list. Each
//! episode rewrites a fresh copy of the original graph with the selected
//! action list, granting per-step local rewards and one terminal reward
//! scaled by how the episode cost compares to the baseline and the best
//! cost seen so far.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aig::Aig;
use crate::cuts::CutSet;
use crate::error::{Error, Result};
use crate::rewrite::{map_raw_action, rewrite_pass, Policy};

/// State-action value table plus per-cell visit counts.
#[derive(Clone, Debug)]
pub struct QMatrix {
    values: Vec<f64>,
    visits: Vec<u32>,
    n_states: usize,
    n_actions: usize,
}

impl QMatrix {
    /// Uniform random initial values in `[init_min, init_max]`, row-major.
    pub fn new(
        n_states: usize,
        n_actions: usize,
        init_min: f64,
        init_max: f64,
        rng: &mut impl Rng,
    ) -> Self {
        let values = (0..n_states * n_actions)
            .map(|_| rng.gen_range(init_min..=init_max))
            .collect();
        QMatrix {
            values,
            visits: vec![0; n_states * n_actions],
            n_states,
            n_actions,
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.values[state * self.n_actions..(state + 1) * self.n_actions]
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.n_actions + action]
    }

    pub fn set(&mut self, state: usize, action: usize, value: f64) {
        self.values[state * self.n_actions + action] = value;
    }

    /// Increments the visit count for `(state, action)` and returns it.
    pub fn record_visit(&mut self, state: usize, action: usize) -> u32 {
        let v = &mut self.visits[state * self.n_actions + action];
        *v += 1;
        *v
    }

    pub fn visit_count(&self, state: usize, action: usize) -> u32 {
        self.visits[state * self.n_actions + action]
    }
}

/// Learning-rate schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaMode {
    Fixed(f64),
    /// `1/k` on the k-th visit of a state-action pair; the harmonic series
    /// diverges while its squares converge, which is what the convergence
    /// argument needs.
    OneOverK,
}

/// Normalization constants for local and terminal rewards.
#[derive(Clone, Copy, Debug)]
pub struct RewardConfig {
    pub k1: f64,
    pub k2: f64,
    pub small: f64,
    pub medium: f64,
    pub large: f64,
    pub supersize: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            k1: 1.0,
            k2: 1.0,
            small: 10.0,
            medium: 30.0,
            large: 50.0,
            supersize: 200.0,
        }
    }
}

impl RewardConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.k1,
            self.k2,
            self.small,
            self.medium,
            self.large,
            self.supersize,
        ];
        if all.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidConfig(
                "reward constants must be positive".into(),
            ));
        }
        if !(self.supersize > self.large
            && self.large > self.medium
            && self.medium > self.small
            && self.small > self.k1.max(self.k2))
        {
            return Err(Error::InvalidConfig(
                "terminal constants must satisfy supersize > large > medium > small > max(k1, k2)"
                    .into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrainConfig {
    pub episodes: usize,
    pub gamma: f64,
    pub alpha_mode: AlphaMode,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    pub epsilon_decay: f64,
    pub seed: u64,
    /// Learning-curve bucket width in episodes.
    pub period: usize,
    pub q_init_min: f64,
    pub q_init_max: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            episodes: 1000,
            gamma: 0.9,
            alpha_mode: AlphaMode::Fixed(0.1),
            epsilon_start: 0.95,
            epsilon_end: 0.05,
            epsilon_decay: 0.995,
            seed: 0,
            period: 200,
            q_init_min: 0.0,
            q_init_max: 0.01,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::InvalidConfig("episodes must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::InvalidConfig("gamma must lie in [0, 1)".into()));
        }
        if let AlphaMode::Fixed(a) = self.alpha_mode {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidConfig("alpha must lie in [0, 1]".into()));
            }
        }
        for e in [self.epsilon_start, self.epsilon_end] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::InvalidConfig("epsilon must lie in [0, 1]".into()));
            }
        }
        if self.epsilon_start < self.epsilon_end {
            return Err(Error::InvalidConfig(
                "epsilon_start must be >= epsilon_end".into(),
            ));
        }
        if !(self.epsilon_decay > 0.0 && self.epsilon_decay <= 1.0) {
            return Err(Error::InvalidConfig(
                "epsilon_decay must lie in (0, 1]".into(),
            ));
        }
        if self.period == 0 {
            return Err(Error::InvalidConfig("period must be positive".into()));
        }
        if self.q_init_min > self.q_init_max {
            return Err(Error::InvalidConfig("empty Q-matrix init range".into()));
        }
        Ok(())
    }
}

/// One full traversal of the graph.
#[derive(Clone, Debug)]
pub struct EpisodeRecord {
    pub actions: Vec<u32>,
    pub score: f64,
    pub local_rewards_sum: f64,
    pub global_reward: f64,
}

#[derive(Clone, Debug)]
pub struct LearningCurves {
    pub period: usize,
    pub episode_scores: Vec<f64>,
    pub period_avg_scores: Vec<f64>,
    pub period_avg_rewards: Vec<f64>,
}

#[derive(Debug)]
pub struct TrainResult {
    pub best: Aig,
    pub best_score: f64,
    pub baseline_score: f64,
    pub q: QMatrix,
    pub curves: LearningCurves,
    pub episodes: Vec<EpisodeRecord>,
}

/// One value-iteration step: `(1 - alpha) * q_old + alpha * (reward + gamma * max_next)`.
pub fn q_update(q_old: f64, reward: f64, max_next: f64, alpha: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!("alpha {alpha} not in [0, 1]")));
    }
    Ok((1.0 - alpha) * q_old + alpha * (reward + gamma * max_next))
}

/// Learning rate for the k-th visit of a state-action pair.
pub fn alpha_for(mode: AlphaMode, visit_count: u32) -> f64 {
    match mode {
        AlphaMode::Fixed(a) => a,
        AlphaMode::OneOverK => {
            debug_assert!(visit_count >= 1);
            1.0 / visit_count as f64
        }
    }
}

/// Epsilon-greedy selection over the first `n_valid_actions` entries of a
/// Q-matrix row: a uniform action with probability epsilon, the argmax
/// otherwise (lowest index on ties). Rows are stored at the widest cut
/// count, but a node's actions are its own cuts, so both the random draw
/// and the argmax range over the valid prefix.
pub fn select_action(
    q_row: &[f64],
    n_valid_actions: usize,
    epsilon: f64,
    rng: &mut impl Rng,
) -> usize {
    debug_assert!(n_valid_actions >= 1);
    let n = n_valid_actions.min(q_row.len());
    if rng.gen_range(0.0..1.0) < epsilon {
        return rng.gen_range(0..n);
    }
    let mut best = 0;
    for (i, &v) in q_row.iter().enumerate().take(n) {
        if v > q_row[best] {
            best = i;
        }
    }
    best
}

/// Raw Q-matrix column to a cut index of a node with `n_cuts` cuts.
pub fn map_action(raw_action: usize, n_cuts_of_node: usize) -> usize {
    map_raw_action(raw_action, n_cuts_of_node)
}

/// Local reward for one rewrite step: `+d*k1` for `d` fewer nodes, `-d*k2`
/// for `d` more, zero otherwise.
pub fn local_reward(delta_v: i64, cfg: &RewardConfig) -> f64 {
    if delta_v < 0 {
        (-delta_v) as f64 * cfg.k1
    } else if delta_v > 0 {
        -(delta_v as f64) * cfg.k2
    } else {
        0.0
    }
}

/// Terminal reward for an episode plus the updated best cost.
///
/// Cases in order: beats baseline and best -> supersize on the baseline gap;
/// beats baseline -> large on the baseline gap; beats only the best so far
/// -> medium on the best gap; otherwise a small penalty on the baseline gap.
pub fn global_reward(
    cost: f64,
    baseline_cost: f64,
    best_cost_so_far: f64,
    cfg: &RewardConfig,
) -> (f64, f64) {
    let dc_baseline = (cost - baseline_cost).abs();
    let dc_best = (cost - best_cost_so_far).abs();
    let reward = if cost < baseline_cost && cost < best_cost_so_far {
        dc_baseline * cfg.supersize
    } else if cost < baseline_cost {
        dc_baseline * cfg.large
    } else if cost < best_cost_so_far {
        dc_best * cfg.medium
    } else {
        -dc_baseline * cfg.small
    };
    (reward, best_cost_so_far.min(cost))
}

fn row_max(row: &[f64]) -> f64 {
    row.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// The full training loop: per episode, select one raw action per state,
/// rewrite a fresh copy of the original graph, score it, and fold the local
/// and terminal rewards back into the Q-matrix.
pub fn train<F>(
    aig: &Aig,
    cutset: &CutSet,
    cost_fn: F,
    reward_cfg: &RewardConfig,
    train_cfg: &TrainConfig,
) -> Result<TrainResult>
where
    F: Fn(&Aig) -> Result<f64>,
{
    reward_cfg.validate()?;
    train_cfg.validate()?;
    let order = aig.topological_order();
    let n_states = order.len();
    let n_actions = cutset.max_cuts().max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(train_cfg.seed);
    let mut q = QMatrix::new(
        n_states,
        n_actions,
        train_cfg.q_init_min,
        train_cfg.q_init_max,
        &mut rng,
    );
    let baseline = cost_fn(aig)?;
    let mut best_score = baseline;
    let mut best = aig.clone();
    // Threshold for the terminal-reward cases: the best episode score
    // achieved so far. On hard circuits this sits above the baseline for a
    // while, which is what lets progress earn the medium reward before the
    // baseline is ever beaten. Before the first episode it is the baseline.
    let mut achieved_best: Option<f64> = None;
    let mut epsilon = train_cfg.epsilon_start;
    let mut records: Vec<EpisodeRecord> = Vec::with_capacity(train_cfg.episodes);
    for _ in 0..train_cfg.episodes {
        let actions: Vec<u32> = (0..n_states)
            .map(|s| {
                let n_cuts = cutset.n_cuts(order[s]);
                select_action(q.row(s), n_cuts, epsilon, &mut rng) as u32
            })
            .collect();
        let mut g = aig.clone();
        let pass = rewrite_pass(&mut g, cutset, Policy::Actions(&actions))?;
        let score = match cost_fn(&g) {
            Ok(s) => s,
            Err(_) => break, // abort, keeping the best found so far
        };
        let mut local_sum = 0.0;
        for (i, step) in pass.steps.iter().enumerate() {
            let (s, a) = (step.state, step.action as usize);
            let k = q.record_visit(s, a);
            let alpha = alpha_for(train_cfg.alpha_mode, k);
            let reward = local_reward(step.delta_v, reward_cfg);
            local_sum += reward;
            let max_next = pass
                .steps
                .get(i + 1)
                .map_or(0.0, |next| row_max(q.row(next.state)));
            let updated = q_update(q.get(s, a), reward, max_next, alpha, train_cfg.gamma)?;
            q.set(s, a, updated);
        }
        let reward_threshold = achieved_best.unwrap_or(baseline);
        let (greward, _) = global_reward(score, baseline, reward_threshold, reward_cfg);
        achieved_best = Some(achieved_best.map_or(score, |b| b.min(score)));
        if score < best_score {
            best = g;
            best_score = score;
        }
        // terminal reward folded back as a discounted backup: cells close
        // to the episode end absorb most of it
        for (i, step) in pass.steps.iter().enumerate() {
            let (s, a) = (step.state, step.action as usize);
            let alpha = alpha_for(train_cfg.alpha_mode, q.visit_count(s, a));
            let dist = (pass.steps.len() - 1 - i) as i32;
            let backed = greward * train_cfg.gamma.powi(dist);
            let max_next = pass
                .steps
                .get(i + 1)
                .map_or(0.0, |next| row_max(q.row(next.state)));
            let updated = q_update(q.get(s, a), backed, max_next, alpha, train_cfg.gamma)?;
            q.set(s, a, updated);
        }
        records.push(EpisodeRecord {
            actions,
            score,
            local_rewards_sum: local_sum,
            global_reward: greward,
        });
        epsilon = (epsilon * train_cfg.epsilon_decay).max(train_cfg.epsilon_end);
    }
    let curves = build_curves(&records, train_cfg.period);
    Ok(TrainResult {
        best,
        best_score,
        baseline_score: baseline,
        q,
        curves,
        episodes: records,
    })
}

fn build_curves(records: &[EpisodeRecord], period: usize) -> LearningCurves {
    let episode_scores: Vec<f64> = records.iter().map(|r| r.score).collect();
    let mut period_avg_scores = Vec::new();
    let mut period_avg_rewards = Vec::new();
    for chunk in records.chunks(period) {
        let n = chunk.len() as f64;
        period_avg_scores.push(chunk.iter().map(|r| r.score).sum::<f64>() / n);
        period_avg_rewards.push(
            chunk
                .iter()
                .map(|r| r.local_rewards_sum + r.global_reward)
                .sum::<f64>()
                / n,
        );
    }
    LearningCurves {
        period,
        episode_scores,
        period_avg_scores,
        period_avg_rewards,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::enumerate_cuts;

    #[test]
    fn q_update_boundaries() {
        assert_eq!(q_update(3.5, 10.0, 2.0, 0.0, 0.9).unwrap(), 3.5);
        assert_eq!(q_update(3.5, 10.0, 2.0, 1.0, 0.0).unwrap(), 10.0);
        assert!((q_update(0.0, 1.0, 2.0, 0.5, 0.9).unwrap() - 1.4).abs() < 1e-15);
        assert!(q_update(0.0, 0.0, 0.0, 1.5, 0.9).is_err());
    }

    #[test]
    fn alpha_schedules() {
        assert_eq!(alpha_for(AlphaMode::OneOverK, 1), 1.0);
        assert_eq!(alpha_for(AlphaMode::OneOverK, 4), 0.25);
        assert_eq!(alpha_for(AlphaMode::Fixed(0.1), 100), 0.1);
    }

    #[test]
    fn select_action_exploits_argmax() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(select_action(&[0.1, 0.9, 0.3], 3, 0.0, &mut rng), 1);
        assert_eq!(select_action(&[0.5, 0.5], 2, 0.0, &mut rng), 0);
    }

    #[test]
    fn select_action_explores_uniformly() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let row = [0.0f64; 4];
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            counts[select_action(&row, 4, 1.0, &mut rng)] += 1;
        }
        for &c in &counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 0.25).abs() < 0.01, "column frequency {freq}");
        }
    }

    #[test]
    fn map_action_examples() {
        assert_eq!(map_action(7, 3), 1);
        assert_eq!(map_action(0, 9), 0);
        assert_eq!(map_action(2, 9), 2);
    }

    #[test]
    fn local_reward_signs() {
        let cfg = RewardConfig::default();
        assert_eq!(local_reward(-2, &cfg), 2.0);
        assert_eq!(local_reward(0, &cfg), 0.0);
        assert_eq!(local_reward(3, &cfg), -3.0);
    }

    #[test]
    fn global_reward_cases() {
        let cfg = RewardConfig::default();
        // boundary: equal everywhere, zero gap
        let (r, b) = global_reward(100.0, 100.0, 100.0, &cfg);
        assert_eq!((r, b), (0.0, 100.0));
        // beats baseline and best
        let (r, b) = global_reward(90.0, 100.0, 100.0, &cfg);
        assert_eq!((r, b), (2000.0, 90.0));
        // hard circuit: beats only the running best
        let (r, b) = global_reward(110.0, 100.0, 120.0, &cfg);
        assert_eq!((r, b), (300.0, 110.0));
        // beats baseline but not the best
        let (r, b) = global_reward(95.0, 100.0, 90.0, &cfg);
        assert_eq!((r, b), (250.0, 90.0));
        // worse than both
        let (r, b) = global_reward(130.0, 100.0, 90.0, &cfg);
        assert_eq!((r, b), (-300.0, 90.0));
    }

    #[test]
    fn reward_config_ordering_enforced() {
        let cfg = RewardConfig {
            small: 300.0,
            ..RewardConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn degenerate_single_episode_run() {
        // one episode, no exploration, zero-initialized matrix: the argmax
        // tie-break forces action 0 everywhere, a deterministic single pass
        let mut g = Aig::new("t");
        let a = g.add_input();
        let b = g.add_input();
        let n = g.add_and(a, b).unwrap();
        g.add_output(n).unwrap();
        let cs = enumerate_cuts(&g, 4, 16).unwrap();
        let cfg = TrainConfig {
            episodes: 1,
            epsilon_start: 0.0,
            epsilon_end: 0.0,
            q_init_min: 0.0,
            q_init_max: 0.0,
            ..TrainConfig::default()
        };
        let res = train(
            &g,
            &cs,
            |g| Ok(g.node_count() as f64),
            &RewardConfig::default(),
            &cfg,
        )
        .unwrap();
        assert_eq!(res.episodes.len(), 1);
        assert_eq!(res.episodes[0].actions, vec![0]);
        assert_eq!(res.best_score, 1.0);
        assert_eq!(res.curves.episode_scores, vec![1.0]);
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let mut g = Aig::new("t");
        let ins: Vec<_> = (0..3).map(|_| g.add_input()).collect();
        let x = g.add_xor(ins[0], ins[1]).unwrap();
        let y = g.add_and(x, ins[2]).unwrap();
        g.add_output(y).unwrap();
        let cs = enumerate_cuts(&g, 4, 16).unwrap();
        let cfg = TrainConfig {
            episodes: 50,
            ..TrainConfig::default()
        };
        let run = || {
            train(
                &g,
                &cs,
                |g| Ok(g.node_count() as f64),
                &RewardConfig::default(),
                &cfg,
            )
            .unwrap()
        };
        let (r1, r2) = (run(), run());
        assert_eq!(r1.curves.episode_scores, r2.curves.episode_scores);
        assert_eq!(r1.best_score, r2.best_score);
        for s in 0..r1.q.n_states() {
            assert_eq!(r1.q.row(s), r2.q.row(s));
        }
    }

    #[test]
    fn best_score_is_a_running_minimum() {
        let mut g = Aig::new("t");
        let ins: Vec<_> = (0..4).map(|_| g.add_input()).collect();
        let mut acc = ins[0];
        for &i in &ins[1..] {
            acc = g.add_xor(acc, i).unwrap();
        }
        g.add_output(acc).unwrap();
        let cs = enumerate_cuts(&g, 4, 16).unwrap();
        let cfg = TrainConfig {
            episodes: 120,
            ..TrainConfig::default()
        };
        let res = train(
            &g,
            &cs,
            |g| Ok(g.node_count() as f64),
            &RewardConfig::default(),
            &cfg,
        )
        .unwrap();
        let mut best = res.baseline_score;
        for r in &res.episodes {
            best = best.min(r.score);
        }
        assert_eq!(best, res.best_score);
        assert!(res.best_score <= res.baseline_score);
    }
}

//! Repeated play of the raider game by independent Exp3 learners.
//!
//! Each player runs Exp3 over its strategies (home first, then neighbors
//! ascending). Every round all players sample from their pre-round
//! distributions, payoffs are computed exactly on the joint profile, and each
//! player updates only the weight of the action it played with the
//! importance-weighted reward `(payoff / 2) / p_chosen`.
//!
//! The learner is a heuristic: a returned profile is always certified by the
//! exact strict-equilibrium check, but failing to return one proves nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{payoff_vector, strategies, GameParams, PayoffVector, Profile};
use crate::graph::Graph;
use crate::nash::{check_game_graph, is_strict_nash};

pub const DEFAULT_WINDOW: u64 = 500;
pub const DEFAULT_THRESHOLD: f64 = 0.95;

#[derive(Debug, Clone)]
pub struct Exp3PlayerState {
    player: usize,
    actions: Vec<usize>,
    // weights are kept as logarithms; probabilities only depend on ratios
    log_weights: Vec<f64>,
    gamma: f64,
    plays: Vec<u64>,
    rng: ChaCha8Rng,
}

impl Exp3PlayerState {
    pub fn player(&self) -> usize {
        self.player
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Weights scaled so the largest is 1.
    pub fn weights(&self) -> Vec<f64> {
        let max = self.max_log_weight();
        self.log_weights.iter().map(|&l| (l - max).exp()).collect()
    }

    pub fn plays(&self) -> &[u64] {
        &self.plays
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn max_log_weight(&self) -> f64 {
        self.log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(1 - gamma) * w_i / sum(w) + gamma / K`.
    pub fn probabilities(&self) -> Vec<f64> {
        let k = self.actions.len() as f64;
        let w = self.weights();
        let total: f64 = w.iter().sum();
        w.iter()
            .map(|wi| (1.0 - self.gamma) * wi / total + self.gamma / k)
            .collect()
    }

    fn sample(&mut self, probs: &[f64]) -> usize {
        let u: f64 = self.rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }

    fn update(&mut self, action: usize, prob: f64, reward: f64) {
        let k = self.actions.len() as f64;
        let estimate = reward / prob;
        self.log_weights[action] += self.gamma * estimate / k;
        self.plays[action] += 1;
    }
}

/// One learner per player with unit weights. Player `v` draws from ChaCha8
/// seeded with `seed` on stream `v`.
pub fn exp3_init(g: &Graph, gamma: f64, seed: u64) -> Result<Vec<Exp3PlayerState>> {
    check_game_graph(g)?;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must lie in (0, 1], got {gamma}"
        )));
    }
    Ok((0..g.n())
        .map(|v| {
            let actions: Vec<usize> = strategies(g, v).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(v as u64);
            Exp3PlayerState {
                player: v,
                log_weights: vec![0.0; actions.len()],
                plays: vec![0; actions.len()],
                actions,
                gamma,
                rng,
            }
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct RoundResult {
    pub profile: Profile,
    pub payoffs: PayoffVector,
    /// Index into each player's action list.
    pub chosen: Vec<usize>,
    /// Probability each player assigned to its chosen action.
    pub probabilities: Vec<f64>,
}

/// Plays one simultaneous round and updates every learner.
pub fn exp3_round(
    states: &mut [Exp3PlayerState],
    g: &Graph,
    params: &GameParams,
) -> Result<RoundResult> {
    let dists: Vec<Vec<f64>> = states.iter().map(Exp3PlayerState::probabilities).collect();
    let chosen: Vec<usize> = states
        .iter_mut()
        .zip(&dists)
        .map(|(s, p)| s.sample(p))
        .collect();
    let map = states
        .iter()
        .zip(&chosen)
        .map(|(s, &a)| s.actions[a])
        .collect();
    let profile = Profile::new(g, map)?;
    let payoffs = payoff_vector(g, &profile, params)?;
    let probabilities: Vec<f64> = chosen.iter().zip(&dists).map(|(&a, p)| p[a]).collect();
    for (v, s) in states.iter_mut().enumerate() {
        let p = payoffs.get(v);
        let reward = (*p.numer() as f64 / *p.denom() as f64) / 2.0;
        s.update(chosen[v], probabilities[v], reward);
    }
    Ok(RoundResult {
        profile,
        payoffs,
        chosen,
        probabilities,
    })
}

#[derive(Debug, Clone)]
pub struct LearningRun {
    pub params: GameParams,
    pub horizon: u64,
    pub gamma: f64,
    pub seed: u64,
    pub window: u64,
    pub threshold: f64,
    pub record_history: bool,
}

impl LearningRun {
    pub fn new(params: GameParams, horizon: u64, gamma: f64, seed: u64) -> Self {
        Self {
            params,
            horizon,
            gamma,
            seed,
            window: DEFAULT_WINDOW.min(horizon),
            threshold: DEFAULT_THRESHOLD,
            record_history: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        if self.window < 1 || self.window > self.horizon {
            return Err(Error::InvalidArgument(format!(
                "window must lie in 1..={}, got {}",
                self.horizon, self.window
            )));
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "threshold must lie in (0, 1], got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: u64,
    pub player: usize,
    pub action: usize,
    pub probability: f64,
    pub payoff: String,
}

#[derive(Debug, Clone)]
pub struct LearningOutcome {
    pub converged: bool,
    pub certified: bool,
    /// Modal joint profile of the converged window, certified or not.
    pub modal_profile: Option<Profile>,
    pub rounds_used: u64,
    pub seed: u64,
    pub history: Vec<RoundLog>,
}

impl LearningOutcome {
    /// The certified strict equilibrium, if any.
    pub fn equilibrium(&self) -> Option<&Profile> {
        self.modal_profile.as_ref().filter(|_| self.certified)
    }

    pub fn to_document(&self) -> LearningDocument {
        LearningDocument {
            converged: self.converged,
            certified: self.certified,
            profile: self.equilibrium().map(|p| p.map().to_vec()),
            rounds_used: self.rounds_used,
            seed: self.seed,
        }
    }
}

/// JSON result of a learning run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearningDocument {
    pub converged: bool,
    pub certified: bool,
    pub profile: Option<Vec<usize>>,
    pub rounds_used: u64,
    pub seed: u64,
}

/// Plays up to `horizon` rounds and stops at the first round where the
/// trailing window has converged.
///
/// Player `v` with `K` actions never plays any action with probability above
/// `1 - gamma + gamma/K`, so convergence asks that each player's most played
/// action in the window reach `threshold` times that ceiling. The modal joint
/// profile is then certified exactly.
pub fn exp3_run(g: &Graph, run: &LearningRun) -> Result<LearningOutcome> {
    run.validate()?;
    let mut states = exp3_init(g, run.gamma, run.seed)?;
    let n = g.n();
    let window = run.window as usize;
    let required: Vec<f64> = states
        .iter()
        .map(|s| {
            let k = s.actions.len() as f64;
            run.threshold * (1.0 - run.gamma + run.gamma / k) * window as f64
        })
        .collect();

    let mut ring: Vec<Vec<usize>> = vec![vec![0; n]; window];
    let mut counts: Vec<Vec<u64>> = states.iter().map(|s| vec![0; s.actions.len()]).collect();
    let mut history = Vec::new();

    for t in 0..run.horizon {
        let round = exp3_round(&mut states, g, &run.params)?;
        let slot = (t % run.window) as usize;
        if t >= run.window {
            for (v, &old) in ring[slot].iter().enumerate() {
                counts[v][old] -= 1;
            }
        }
        for (v, &a) in round.chosen.iter().enumerate() {
            counts[v][a] += 1;
        }
        ring[slot].clone_from(&round.chosen);

        if run.record_history {
            for v in 0..n {
                let p = round.payoffs.get(v);
                history.push(RoundLog {
                    round: t,
                    player: v,
                    action: round.profile.strategy(v),
                    probability: round.probabilities[v],
                    payoff: crate::rational::format_rational(&p),
                });
            }
        }

        if t + 1 < run.window {
            continue;
        }
        let converged = counts
            .iter()
            .zip(&required)
            .all(|(c, &need)| *c.iter().max().expect("non-empty") as f64 >= need);
        if converged {
            let map = counts
                .iter()
                .zip(&states)
                .map(|(c, s)| s.actions[modal_index(c)])
                .collect();
            let profile = Profile::new(g, map)?;
            let certified = is_strict_nash(g, &profile, &run.params)?.is_strict();
            return Ok(LearningOutcome {
                converged: true,
                certified,
                modal_profile: Some(profile),
                rounds_used: t + 1,
                seed: run.seed,
                history,
            });
        }
    }
    Ok(LearningOutcome {
        converged: false,
        certified: false,
        modal_profile: None,
        rounds_used: run.horizon,
        seed: run.seed,
        history,
    })
}

/// First index of the largest count.
fn modal_index(counts: &[u64]) -> usize {
    let max = counts.iter().max().copied().unwrap_or(0);
    counts.iter().position(|&c| c == max).unwrap_or(0)
}

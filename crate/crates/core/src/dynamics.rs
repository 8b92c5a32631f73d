//! Discrete Q-Learning with Boltzmann action selection, the continuous-time
//! Q-Learning dynamics (QLD) vector field, and the windowed convergence test.
//!
//! Each agent keeps Q-values `Q_k` and updates
//! `Q_k ← (1 − α_k) Q_k + α_k r_k(x_{-k})`, then plays
//! `x_k = softmax(Q_k / T_k)`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{dot, require_interior, ExplorationRates, JointStrategy, NetworkGame};

pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_WINDOW: usize = 2500;
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// Boltzmann distribution `exp(q_i / t) / Σ_j exp(q_j / t)`.
pub fn boltzmann(q: &[f64], t: f64) -> Result<Vec<f64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::argument(format!("temperature must be positive, got {t}")));
    }
    if q.is_empty() || q.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("Q-values must be finite and non-empty"));
    }
    let mut out = vec![0.0; q.len()];
    softmax_into(q, t, &mut out);
    Ok(out)
}

#[inline]
fn softmax_into(q: &[f64], t: f64, out: &mut [f64]) {
    let m = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for (o, v) in out.iter_mut().zip(q) {
        *o = ((v - m) / t).exp();
        s += *o;
    }
    out.iter_mut().for_each(|o| *o /= s);
}

/// Order in which agents apply their update within one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateOrder {
    /// Agents update in index order; agent `k` sees the strategies agents
    /// `0..k` already played this step.
    #[default]
    Sequential,
    /// Every agent reacts to the previous step's joint strategy.
    Simultaneous,
}

impl std::str::FromStr for UpdateOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sequential" | "seq" => Ok(UpdateOrder::Sequential),
            "simultaneous" | "sim" => Ok(UpdateOrder::Simultaneous),
            other => Err(Error::argument(format!("unknown update order '{other}'"))),
        }
    }
}

/// Which states a run keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Retention {
    /// Every state of the horizon.
    Full,
    /// Only the trailing convergence window.
    Window,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub rates: ExplorationRates,
    /// Per-agent learning rates in `(0, 1]` (zero is accepted and freezes
    /// the agent).
    pub alpha: Vec<f64>,
    pub horizon: usize,
    pub window: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub order: UpdateOrder,
    pub retention: Retention,
}

impl LearnerConfig {
    /// Uniform rate `t`, `α = 0.1`, window 2500, tolerance `1e-5`.
    pub fn new(num_agents: usize, t: f64, horizon: usize) -> Result<Self> {
        Self::with_rates(ExplorationRates::uniform(num_agents, t)?, horizon)
    }

    pub fn with_rates(rates: ExplorationRates, horizon: usize) -> Result<Self> {
        let n = rates.len();
        let cfg = Self {
            rates,
            alpha: vec![DEFAULT_ALPHA; n],
            horizon,
            window: DEFAULT_WINDOW.min(horizon),
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            order: UpdateOrder::Sequential,
            retention: Retention::Full,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = vec![alpha; self.rates.len()];
        self
    }

    pub fn window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn order(mut self, order: UpdateOrder) -> Self {
        self.order = order;
        self
    }

    pub fn retention(mut self, retention: Retention) -> Self {
        self.retention = retention;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.len() != self.rates.len() {
            return Err(Error::argument(format!(
                "{} learning rates for {} agents",
                self.alpha.len(),
                self.rates.len()
            )));
        }
        if let Some(a) = self.alpha.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::argument(format!("learning rate {a} outside [0, 1]")));
        }
        if self.horizon == 0 {
            return Err(Error::argument("horizon must be positive"));
        }
        if self.window == 0 || self.window > self.horizon {
            return Err(Error::argument(format!(
                "window {} must lie in 1..={}",
                self.window, self.horizon
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::argument("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Q-values of every agent, concatenated in agent order.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    values: Vec<f64>,
    offsets: Arc<[usize]>,
}

impl QState {
    /// `Q_k = r_k(x_{-k})`, the consistent warm start.
    pub fn warm_start(game: &NetworkGame, x: &JointStrategy) -> Result<Self> {
        Ok(Self {
            values: game.reward_vectors(x)?,
            offsets: game.offsets().clone(),
        })
    }

    pub fn agent(&self, k: usize) -> &[f64] {
        &self.values[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }
}

/// One step of the dynamics from `(q, x)`, following `cfg.order`.
pub fn q_step(
    game: &NetworkGame,
    q: &QState,
    x: &JointStrategy,
    cfg: &LearnerConfig,
) -> Result<(QState, JointStrategy)> {
    game.check_strategy(x)?;
    let mut learner = Learner::from_state(game, q.clone(), x.clone(), cfg)?;
    learner.step()?;
    Ok((learner.q_state(), learner.strategy()))
}

/// Starting point of a run.
#[derive(Debug, Clone)]
pub enum Init {
    Given(JointStrategy),
    /// Uniform on each simplex, drawn from the config seed.
    Random,
}

/// Stateful stepping engine. Carries Q-values and strategies across calls so
/// callers can change rates and continue from where they stopped.
#[derive(Debug, Clone)]
pub struct Learner<'g> {
    game: &'g NetworkGame,
    q: Vec<f64>,
    x: Vec<f64>,
    rates: Vec<f64>,
    alpha: Vec<f64>,
    order: UpdateOrder,
    steps: usize,
    scratch: Vec<f64>,
}

impl<'g> Learner<'g> {
    pub fn new(game: &'g NetworkGame, cfg: &LearnerConfig, init: Init) -> Result<Self> {
        let x0 = match init {
            Init::Given(x) => x,
            Init::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                JointStrategy::random(game.action_counts(), &mut rng)
            }
        };
        game.check_strategy(&x0)?;
        let q0 = QState::warm_start(game, &x0)?;
        Self::from_state(game, q0, x0, cfg)
    }

    pub fn from_state(
        game: &'g NetworkGame,
        q: QState,
        x: JointStrategy,
        cfg: &LearnerConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        if cfg.rates.len() != game.num_agents() {
            return Err(Error::structural(format!(
                "{} exploration rates for {} agents",
                cfg.rates.len(),
                game.num_agents()
            )));
        }
        if q.values.len() != game.total_actions() || q.offsets[..] != game.offsets()[..] {
            return Err(Error::structural("Q-state does not match the game"));
        }
        game.check_strategy(&x)?;
        Ok(Self {
            game,
            q: q.values,
            x: x.as_flat().to_vec(),
            rates: cfg.rates.as_slice().to_vec(),
            alpha: cfg.alpha.clone(),
            order: cfg.order,
            steps: 0,
            scratch: vec![0.0; game.total_actions()],
        })
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Changes the exploration rates for subsequent steps. The current
    /// strategy is kept; it is re-derived from Q at the next step.
    pub fn set_rates(&mut self, rates: &ExplorationRates) -> Result<()> {
        if rates.len() != self.rates.len() {
            return Err(Error::structural("rate vector length mismatch"));
        }
        self.rates.copy_from_slice(rates.as_slice());
        Ok(())
    }

    pub fn strategy(&self) -> JointStrategy {
        JointStrategy::from_flat_unchecked(self.x.clone(), self.game.offsets().clone())
    }

    pub fn q_state(&self) -> QState {
        QState {
            values: self.q.clone(),
            offsets: self.game.offsets().clone(),
        }
    }

    pub fn strategy_flat(&self) -> &[f64] {
        &self.x
    }

    pub fn step(&mut self) -> Result<()> {
        let game = self.game;
        let offsets = game.offsets();
        match self.order {
            UpdateOrder::Sequential => {
                for k in 0..game.num_agents() {
                    let (lo, hi) = (offsets[k], offsets[k + 1]);
                    let r = &mut self.scratch[lo..hi];
                    r.iter_mut().for_each(|v| *v = 0.0);
                    game.accumulate_reward(k, &self.x, r);
                    Self::update_agent(
                        &mut self.q[lo..hi],
                        &mut self.x[lo..hi],
                        &self.scratch[lo..hi],
                        self.alpha[k],
                        self.rates[k],
                    );
                }
            }
            UpdateOrder::Simultaneous => {
                self.scratch.iter_mut().for_each(|v| *v = 0.0);
                for k in 0..game.num_agents() {
                    let (lo, hi) = (offsets[k], offsets[k + 1]);
                    game.accumulate_reward(k, &self.x, &mut self.scratch[lo..hi]);
                }
                for k in 0..game.num_agents() {
                    let (lo, hi) = (offsets[k], offsets[k + 1]);
                    Self::update_agent(
                        &mut self.q[lo..hi],
                        &mut self.x[lo..hi],
                        &self.scratch[lo..hi],
                        self.alpha[k],
                        self.rates[k],
                    );
                }
            }
        }
        self.steps += 1;
        if self.q.iter().any(|v| !v.is_finite()) || self.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical {
                step: self.steps,
                message: "non-finite Q-value or strategy".into(),
            });
        }
        Ok(())
    }

    #[inline]
    fn update_agent(q: &mut [f64], x: &mut [f64], r: &[f64], alpha: f64, t: f64) {
        if alpha == 0.0 {
            return;
        }
        for (qi, ri) in q.iter_mut().zip(r) {
            *qi = (1.0 - alpha) * *qi + alpha * ri;
        }
        softmax_into(q, t, x);
    }

    /// Runs `steps` steps, calling `observe` with the concatenated strategy
    /// after each one.
    pub fn advance<F: FnMut(&[f64])>(&mut self, steps: usize, mut observe: F) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
            observe(&self.x);
        }
        Ok(())
    }

    /// Runs `horizon` steps and returns the recorded trajectory.
    pub fn run(&mut self, horizon: usize, window: usize, retention: Retention) -> Result<Trajectory> {
        let keep = match retention {
            Retention::Full => horizon,
            Retention::Window => window.min(horizon),
        };
        let mut traj = Trajectory::with_capacity(keep, self.steps);
        let offsets = self.game.offsets().clone();
        for _ in 0..horizon {
            self.step()?;
            traj.push(
                JointStrategy::from_flat_unchecked(self.x.clone(), offsets.clone()),
                keep,
            );
        }
        traj.trim(keep);
        Ok(traj)
    }

    /// Runs `horizon` steps and applies the convergence test to the final
    /// `window` states. Only running extremes are kept, not the states.
    pub fn run_and_test(&mut self, horizon: usize, window: usize, tol: f64) -> Result<RunSummary> {
        if window == 0 || window > horizon {
            return Err(Error::argument(format!("window {window} must lie in 1..={horizon}")));
        }
        for _ in 0..horizon - window {
            self.step()?;
        }
        self.step()?;
        let mut hi = self.x.clone();
        let mut lo = self.x.clone();
        for _ in 1..window {
            self.step()?;
            for ((h, l), v) in hi.iter_mut().zip(lo.iter_mut()).zip(&self.x) {
                *h = h.max(*v);
                *l = l.min(*v);
            }
        }
        let spread = hi
            .iter()
            .zip(&lo)
            .map(|(h, l)| if *h > 0.0 { (h - l) / h } else { 0.0 })
            .fold(0.0, f64::max);
        Ok(RunSummary {
            converged: spread < tol,
            spread,
            final_strategy: self.strategy(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub converged: bool,
    /// Largest relative window range, the statistic compared against `tol`.
    pub spread: f64,
    pub final_strategy: JointStrategy,
}

/// Strategies after each step of a run, oldest first.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    states: Vec<JointStrategy>,
    /// Step index (1-based) of `states[0]`.
    first_step: usize,
}

impl Trajectory {
    fn with_capacity(cap: usize, steps_before: usize) -> Self {
        Self {
            states: Vec::with_capacity(cap.min(1 << 16)),
            first_step: steps_before + 1,
        }
    }

    /// Appends, keeping at most `2 * keep` states between trims.
    fn push(&mut self, x: JointStrategy, keep: usize) {
        let keep = keep.max(1);
        if self.states.len() == 2 * keep {
            self.states.drain(..keep);
            self.first_step += keep;
        }
        self.states.push(x);
    }

    fn trim(&mut self, keep: usize) {
        let excess = self.states.len().saturating_sub(keep);
        self.states.drain(..excess);
        self.first_step += excess;
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[JointStrategy] {
        &self.states
    }

    /// Step number of the first retained state (steps count from 1).
    pub fn first_step(&self) -> usize {
        self.first_step
    }

    /// The final `h` states (all of them if fewer are retained).
    pub fn window(&self, h: usize) -> &[JointStrategy] {
        &self.states[self.states.len().saturating_sub(h)..]
    }

    pub fn last(&self) -> Option<&JointStrategy> {
        self.states.last()
    }
}

/// Runs `cfg.horizon` steps from `Q(0) = r(x(0))`.
pub fn run_q_learning(game: &NetworkGame, cfg: &LearnerConfig, init: Init) -> Result<Trajectory> {
    let mut learner = Learner::new(game, cfg, init)?;
    learner.run(cfg.horizon, cfg.window, cfg.retention)
}

/// `max_{k,i} (max_t x_ki − min_t x_ki) / max_t x_ki` over the window; a
/// coordinate that is identically zero contributes 0.
pub fn relative_spread(window: &[JointStrategy]) -> Result<f64> {
    let first = window
        .first()
        .ok_or_else(|| Error::argument("convergence window is empty"))?;
    let d = first.as_flat().len();
    let mut hi = first.as_flat().to_vec();
    let mut lo = hi.clone();
    for x in &window[1..] {
        let v = x.as_flat();
        if v.len() != d {
            return Err(Error::structural("window states differ in shape"));
        }
        for i in 0..d {
            hi[i] = hi[i].max(v[i]);
            lo[i] = lo[i].min(v[i]);
        }
    }
    Ok(hi
        .iter()
        .zip(&lo)
        .map(|(h, l)| if *h > 0.0 { (h - l) / h } else { 0.0 })
        .fold(0.0, f64::max))
}

/// The windowed convergence criterion: every coordinate's relative range
/// over the window is below `tol`.
pub fn converged(window: &[JointStrategy], tol: f64) -> Result<bool> {
    Ok(relative_spread(window)? < tol)
}

/// QLD: `ẋ_ki = x_ki [ r_ki − ⟨x_k, r_k⟩ + T_k Σ_j x_kj ln(x_kj / x_ki) ]`.
pub fn qld_vector_field(
    game: &NetworkGame,
    x: &JointStrategy,
    t: &ExplorationRates,
) -> Result<Vec<Vec<f64>>> {
    if t.len() != game.num_agents() {
        return Err(Error::structural("rate vector length mismatch"));
    }
    let r = game.reward_vectors(x)?;
    (0..game.num_agents())
        .map(|k| {
            let xk = x.agent(k);
            require_interior(xk, k)?;
            let rk = &r[game.offset(k)..game.offset(k) + xk.len()];
            let mean = dot(xk, rk);
            let neg_entropy: f64 = xk.iter().map(|p| p * p.ln()).sum();
            Ok(xk
                .iter()
                .zip(rk)
                .map(|(p, ri)| p * (ri - mean + t[k] * (neg_entropy - p.ln())))
                .collect())
        })
        .collect()
}

/// Largest absolute component of the QLD field.
pub fn qld_field_norm(game: &NetworkGame, x: &JointStrategy, t: &ExplorationRates) -> Result<f64> {
    Ok(qld_vector_field(game, x, t)?
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(0.0, f64::max))
}

pub const DEFAULT_EULER_DT: f64 = 0.01;

/// Explicit Euler integration of QLD; every state is kept. Fails if a step
/// leaves the interior of the simplex.
pub fn integrate_qld(
    game: &NetworkGame,
    x0: &JointStrategy,
    t: &ExplorationRates,
    dt: f64,
    steps: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::argument("Euler step must be positive"));
    }
    game.check_strategy(x0)?;
    let mut traj = Trajectory::with_capacity(steps, 0);
    let mut x = x0.clone();
    for step in 1..=steps {
        let f = qld_vector_field(game, &x, t)?;
        let mut next = x.as_flat().to_vec();
        for (v, d) in next.iter_mut().zip(f.iter().flatten()) {
            *v += dt * d;
        }
        if next.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Numerical {
                step,
                message: "Euler step left the simplex interior".into(),
            });
        }
        // tangency keeps the sums at one up to rounding
        let mut per_agent = Vec::with_capacity(game.num_agents());
        for k in 0..game.num_agents() {
            let lo = game.offset(k);
            let s = &next[lo..lo + game.num_actions(k)];
            let total: f64 = s.iter().sum();
            per_agent.extend(s.iter().map(|v| v / total));
        }
        x = JointStrategy::from_flat_unchecked(per_agent, game.offsets().clone());
        traj.push(x.clone(), steps);
    }
    Ok(traj)
}

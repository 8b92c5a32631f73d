//! Experiment harness: stability-boundary sweeps, window spread statistics,
//! threshold curves and annealing batches.
//!
//! Every stochastic piece draws its seed from a master seed through
//! [`derive_seed`], so results depend only on the inputs and never on
//! thread scheduling. Rows come back in a fixed order.

use std::io::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annealer::{anneal, AnnealParams, AnnealStatus};
use crate::catalog::{
    chakraborty_game, mismatching_game, random_game, sato_game, shapley_game, RandomGameSpec,
    TopologyKind, TopologySpec,
};
use crate::dynamics::{Init, Learner, LearnerConfig, UpdateOrder};
use crate::error::{Error, Result};
use crate::game::{ExplorationRates, JointStrategy, NetworkGame};
use crate::linalg::op_norm_two;
use crate::spectral::{interaction_block_matrix, stability_report};

/// Largest ℓ∞ distance between final strategies still counted as one QRE.
pub const UNIQUENESS_TOL: f64 = 1e-3;

/// Seed number `stream` derived from `master`: the first word of the
/// ChaCha8 stream `stream` keyed by `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}

/// A parametrised game family that can be instantiated for any size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GameFamily {
    Shapley {
        beta: f64,
    },
    Sato {
        eps_x: f64,
        eps_y: f64,
    },
    /// Directed ring only.
    Chakraborty {
        alpha: f64,
        beta: f64,
    },
    /// Directed ring only.
    Mismatching {
        m: f64,
    },
    Random {
        actions: usize,
        low: f64,
        high: f64,
        seed: u64,
    },
}

impl GameFamily {
    pub fn name(&self) -> &'static str {
        match self {
            GameFamily::Shapley { .. } => "shapley",
            GameFamily::Sato { .. } => "sato",
            GameFamily::Chakraborty { .. } => "chakraborty",
            GameFamily::Mismatching { .. } => "mismatching",
            GameFamily::Random { .. } => "random",
        }
    }

    pub fn build(&self, topology: TopologySpec) -> Result<NetworkGame> {
        let ring_only = |name: &str| {
            if topology.kind != TopologyKind::Ring {
                Err(Error::argument(format!(
                    "the {name} family is defined on a directed ring, not a {}",
                    topology.kind
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            GameFamily::Shapley { beta } => shapley_game(beta, topology),
            GameFamily::Sato { eps_x, eps_y } => sato_game(eps_x, eps_y, topology),
            GameFamily::Chakraborty { alpha, beta } => {
                ring_only("chakraborty")?;
                chakraborty_game(alpha, beta, topology.num_agents)
            }
            GameFamily::Mismatching { m } => {
                ring_only("mismatching")?;
                mismatching_game(m, topology.num_agents)
            }
            GameFamily::Random {
                actions,
                low,
                high,
                seed,
            } => random_game(&RandomGameSpec {
                num_agents: topology.num_agents,
                actions_per_agent: actions,
                topology: topology.kind,
                payoff_low: low,
                payoff_high: high,
                seed,
            }),
        }
    }
}

/// How the learning rate is chosen for a run at exploration rates `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaPolicy {
    Fixed(f64),
    /// `α = min(max, min_k T_k / ‖M‖₂)` with `M` the interaction block
    /// matrix. The discrete map's linearisation has eigenvalues up to
    /// `‖M‖₂ / T` in modulus, so a fixed α turns unstable as `T` shrinks
    /// even where the continuous dynamics converge.
    Stable { max: f64 },
}

impl Default for AlphaPolicy {
    fn default() -> Self {
        AlphaPolicy::Fixed(crate::dynamics::DEFAULT_ALPHA)
    }
}

impl AlphaPolicy {
    pub fn validate(&self) -> Result<()> {
        let a = match *self {
            AlphaPolicy::Fixed(a) => a,
            AlphaPolicy::Stable { max } => max,
        };
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::argument(format!("learning rate {a} outside (0, 1]")));
        }
        Ok(())
    }

    pub fn resolve(&self, game: &NetworkGame, rates: &ExplorationRates) -> Result<f64> {
        match *self {
            AlphaPolicy::Fixed(a) => Ok(a),
            AlphaPolicy::Stable { max } => {
                let l = op_norm_two(&interaction_block_matrix(game))?;
                let t = rates.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
                Ok(if l == 0.0 { max } else { max.min(t / l) })
            }
        }
    }
}

/// Settings shared by every simulated run of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub horizon: usize,
    pub window: usize,
    pub tol: f64,
    #[serde(default)]
    pub alpha: AlphaPolicy,
    #[serde(default)]
    pub order: UpdateOrder,
}

impl RunSettings {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 || self.window == 0 || self.window > self.horizon {
            return Err(Error::argument(format!(
                "need 0 < window ({}) ≤ horizon ({})",
                self.window, self.horizon
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::argument("tolerance must be positive"));
        }
        self.alpha.validate()
    }
}

/// Result of one run from one random start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub seed: u64,
    pub converged: bool,
    pub spread: f64,
    pub final_strategy: JointStrategy,
}

/// Runs the dynamics from a random start for every seed, in parallel.
/// Outcomes are in seed order.
pub fn run_from_seeds(
    game: &NetworkGame,
    rates: &ExplorationRates,
    settings: &RunSettings,
    seeds: &[u64],
) -> Result<Vec<RunOutcome>> {
    settings.validate()?;
    let alpha = settings.alpha.resolve(game, rates)?;
    seeds
        .par_iter()
        .map(|&seed| {
            let mut cfg = LearnerConfig::with_rates(rates.clone(), settings.horizon)?
                .alpha(alpha)
                .window(settings.window)
                .tolerance(settings.tol)
                .seed(seed)
                .order(settings.order);
            cfg.retention = crate::dynamics::Retention::Window;
            let mut learner = Learner::new(game, &cfg, Init::Random)?;
            let run = learner.run_and_test(settings.horizon, settings.window, settings.tol)?;
            Ok(RunOutcome {
                seed,
                converged: run.converged,
                spread: run.spread,
                final_strategy: run.final_strategy,
            })
        })
        .collect()
}

/// Largest pairwise ℓ∞ distance between final strategies.
pub fn max_disagreement(outcomes: &[RunOutcome]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in outcomes.iter().enumerate() {
        for b in &outcomes[i + 1..] {
            worst = worst.max(a.final_strategy.linf_distance(&b.final_strategy));
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TSearch {
    Grid { lo: f64, hi: f64, step: f64 },
    /// Assumes convergence is monotone in `T`.
    Bisection { lo: f64, hi: f64, resolution: f64 },
}

impl TSearch {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            TSearch::Grid { lo, hi, .. } | TSearch::Bisection { lo, hi, .. } => (lo, hi),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            TSearch::Grid { .. } => "grid",
            TSearch::Bisection { .. } => "bisection",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi, res) = match *self {
            TSearch::Grid { lo, hi, step } => (lo, hi, step),
            TSearch::Bisection { lo, hi, resolution } => (lo, hi, resolution),
        };
        if !(lo > 0.0 && lo < hi && hi.is_finite()) {
            return Err(Error::argument(format!("need 0 < lo < hi, got [{lo}, {hi}]")));
        }
        if !(res > 0.0) {
            return Err(Error::argument(format!("search resolution must be positive, got {res}")));
        }
        Ok(())
    }

    /// Grid points, `hi` included when the step lands on it.
    pub fn grid(&self) -> Vec<f64> {
        match *self {
            TSearch::Grid { lo, hi, step } => {
                let count = ((hi - lo) / step + 1e-9).floor() as usize;
                (0..=count).map(|i| lo + i as f64 * step).collect()
            }
            TSearch::Bisection { lo, hi, .. } => vec![lo, hi],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub game: GameFamily,
    pub topology: TopologyKind,
    pub agents: Vec<usize>,
    pub search: TSearch,
    pub num_inits: usize,
    #[serde(flatten)]
    pub run: RunSettings,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::argument("no agent counts to sweep"));
        }
        if self.num_inits == 0 {
            return Err(Error::argument("num_inits must be at least 1"));
        }
        self.search.validate()?;
        self.run.validate()
    }

    /// Seeds of the random starts for the `n`-agent game; shared by every
    /// `T` so that cells differ only in the rate.
    pub fn init_seeds(&self, n: usize) -> Vec<u64> {
        let base = derive_seed(self.seed, n as u64);
        (0..self.num_inits as u64).map(|i| derive_seed(base, i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub n: usize,
    /// Smallest `T` at which every start converged; `None` when no value in
    /// the search interval did.
    pub t_star: Option<f64>,
    pub c1_max: f64,
    pub c2: f64,
    pub c3: Option<f64>,
    /// Learning rate used at `t_star`.
    pub alpha: Option<f64>,
    /// Largest ℓ∞ distance between final strategies at `t_star`.
    pub disagreement: Option<f64>,
    pub unique: Option<bool>,
    /// Every start converges at `1.02 t_star`.
    pub upper_converges: Option<bool>,
    /// Some start fails at `0.98 t_star`.
    pub lower_fails: Option<bool>,
    /// Number of `T` values simulated for the search itself.
    pub evaluations: usize,
}

impl BoundaryRow {
    pub fn found(&self) -> bool {
        self.t_star.is_some()
    }

    /// Smallest applicable sufficient threshold.
    pub fn theory_min(&self) -> f64 {
        let m = self.c1_max.min(self.c2);
        self.c3.map_or(m, |c| m.min(c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTable {
    pub spec: SweepSpec,
    pub rows: Vec<BoundaryRow>,
}

struct Cell {
    all_converged: bool,
    alpha: f64,
    disagreement: f64,
}

fn evaluate(game: &NetworkGame, t: f64, spec: &SweepSpec, seeds: &[u64]) -> Result<Cell> {
    let rates = ExplorationRates::uniform(game.num_agents(), t)?;
    let outcomes = run_from_seeds(game, &rates, &spec.run, seeds)?;
    Ok(Cell {
        all_converged: outcomes.iter().all(|o| o.converged),
        alpha: spec.run.alpha.resolve(game, &rates)?,
        disagreement: max_disagreement(&outcomes),
    })
}

/// Empirical stability boundary per agent count, next to the sufficient
/// thresholds. A search interval without a converging `T` is reported in
/// the row, not as an error.
pub fn stability_sweep(spec: &SweepSpec) -> Result<BoundaryTable> {
    spec.validate()?;
    let rows = spec
        .agents
        .par_iter()
        .map(|&n| boundary_row(spec, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryTable {
        spec: spec.clone(),
        rows,
    })
}

fn boundary_row(spec: &SweepSpec, n: usize) -> Result<BoundaryRow> {
    let game = spec.game.build(TopologySpec::new(spec.topology, n))?;
    let report = stability_report(&game)?;
    let seeds = spec.init_seeds(n);
    let mut evaluations = 0;
    let found: Option<(f64, Cell)> = match spec.search {
        TSearch::Grid { .. } => {
            let grid = spec.search.grid();
            evaluations = grid.len();
            let cells = grid
                .par_iter()
                .map(|&t| evaluate(&game, t, spec, &seeds))
                .collect::<Result<Vec<_>>>()?;
            grid.into_iter().zip(cells).find(|(_, c)| c.all_converged)
        }
        TSearch::Bisection { lo, hi, resolution } => {
            evaluations += 1;
            let top = evaluate(&game, hi, spec, &seeds)?;
            if !top.all_converged {
                None
            } else {
                evaluations += 1;
                let bottom = evaluate(&game, lo, spec, &seeds)?;
                if bottom.all_converged {
                    Some((lo, bottom))
                } else {
                    let (mut a, mut b, mut best) = (lo, hi, top);
                    while b - a > resolution {
                        let mid = 0.5 * (a + b);
                        evaluations += 1;
                        let cell = evaluate(&game, mid, spec, &seeds)?;
                        if cell.all_converged {
                            b = mid;
                            best = cell;
                        } else {
                            a = mid;
                        }
                    }
                    Some((b, best))
                }
            }
        }
    };
    let mut row = BoundaryRow {
        n,
        t_star: None,
        c1_max: report.c1_max(),
        c2: report.c2,
        c3: report.c3_applicable.then_some(report.c3),
        alpha: None,
        disagreement: None,
        unique: None,
        upper_converges: None,
        lower_fails: None,
        evaluations,
    };
    if let Some((t, cell)) = found {
        let upper = evaluate(&game, 1.02 * t, spec, &seeds)?;
        let lower = evaluate(&game, 0.98 * t, spec, &seeds)?;
        row.t_star = Some(t);
        row.alpha = Some(cell.alpha);
        row.disagreement = Some(cell.disagreement);
        row.unique = Some(cell.disagreement <= UNIQUENESS_TOL);
        row.upper_converges = Some(upper.all_converged);
        row.lower_fails = Some(!lower.all_converged);
    }
    Ok(row)
}

impl BoundaryTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "n",
            "t_star",
            "found",
            "c1_max",
            "c2",
            "c3",
            "alpha",
            "disagreement",
            "unique",
            "upper_converges",
            "lower_fails",
            "evaluations",
            "search",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                opt(r.t_star),
                r.found().to_string(),
                r.c1_max.to_string(),
                r.c2.to_string(),
                opt(r.c3),
                opt(r.alpha),
                opt(r.disagreement),
                opt(r.unique),
                opt(r.upper_converges),
                opt(r.lower_fails),
                r.evaluations.to_string(),
                self.spec.search.mode().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Window statistics of one action probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadRow {
    pub t: f64,
    pub init: usize,
    pub agent: usize,
    pub action: usize,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl SpreadRow {
    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Boxplot statistics of every action probability over the trailing window,
/// for each uniform rate in `ts` and each of `num_inits` random starts.
pub fn spread_report(
    game: &NetworkGame,
    ts: &[f64],
    num_inits: usize,
    settings: &RunSettings,
    seed: u64,
) -> Result<Vec<SpreadRow>> {
    settings.validate()?;
    if num_inits == 0 {
        return Err(Error::argument("num_inits must be at least 1"));
    }
    let seeds: Vec<u64> = (0..num_inits as u64).map(|i| derive_seed(seed, i)).collect();
    let cells: Vec<(f64, usize)> = ts
        .iter()
        .flat_map(|&t| (0..num_inits).map(move |i| (t, i)))
        .collect();
    let blocks = cells
        .par_iter()
        .map(|&(t, init)| {
            let rates = ExplorationRates::uniform(game.num_agents(), t)?;
            let alpha = settings.alpha.resolve(game, &rates)?;
            let mut cfg = LearnerConfig::with_rates(rates, settings.horizon)?
                .alpha(alpha)
                .window(settings.window)
                .seed(seeds[init])
                .order(settings.order);
            cfg.retention = crate::dynamics::Retention::Window;
            let mut learner = Learner::new(game, &cfg, Init::Random)?;
            let traj = learner.run(settings.horizon, settings.window, cfg.retention)?;
            let window = traj.window(settings.window);
            let mut rows = Vec::new();
            for k in 0..game.num_agents() {
                for a in 0..game.num_actions(k) {
                    let mut v: Vec<f64> = window.iter().map(|x| x.agent(k)[a]).collect();
                    v.sort_by(f64::total_cmp);
                    rows.push(SpreadRow {
                        t,
                        init,
                        agent: k,
                        action: a,
                        min: v[0],
                        q25: quantile(&v, 0.25),
                        median: quantile(&v, 0.5),
                        q75: quantile(&v, 0.75),
                        max: v[v.len() - 1],
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

pub fn write_spread_csv<W: Write>(rows: &[SpreadRow], out: W) -> Result<()> {
    write_serialized(rows, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: usize,
    pub topology: TopologyKind,
    pub c1_max: f64,
    pub c2: f64,
    pub c3: Option<f64>,
}

/// Sufficient thresholds of a family over topologies and agent counts.
pub fn threshold_curves(
    family: &GameFamily,
    topologies: &[TopologyKind],
    agents: &[usize],
) -> Result<Vec<CurveRow>> {
    let mut rows = Vec::new();
    for &topology in topologies {
        for &n in agents {
            let game = family.build(TopologySpec::new(topology, n))?;
            let r = stability_report(&game)?;
            rows.push(CurveRow {
                n,
                topology,
                c1_max: r.c1_max(),
                c2: r.c2,
                c3: r.c3_applicable.then_some(r.c3),
            });
        }
    }
    Ok(rows)
}

pub fn write_curves_csv<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    write_serialized(rows, out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub game_id: usize,
    pub game_seed: u64,
    pub learner_seed: u64,
    /// `max_anneals`, `floor_reached`, `unstable`, `initial_not_converged`
    /// or `error`.
    pub status: String,
    pub initial_exploitability: Option<f64>,
    pub final_exploitability: Option<f64>,
    pub initial_epsilon: Option<f64>,
    pub final_epsilon: Option<f64>,
    pub exploitability_decrease: Option<f64>,
    pub epsilon_decrease: Option<f64>,
    /// Anneal steps run, the rejected last one included.
    pub steps_run: usize,
    pub iterations: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSpec {
    pub num_agents: usize,
    pub actions_per_agent: usize,
    pub topology: TopologyKind,
    pub payoff_low: f64,
    pub payoff_high: f64,
    pub count: usize,
    pub master_seed: u64,
    pub alpha: f64,
    pub anneal: AnnealParams,
}

impl BatchSpec {
    /// 15 agents, two actions, ring, payoffs in `[0, 5]`, `α = 0.1`.
    pub fn ring_default(count: usize, master_seed: u64) -> Self {
        Self {
            num_agents: 15,
            actions_per_agent: 2,
            topology: TopologyKind::Ring,
            payoff_low: 0.0,
            payoff_high: 5.0,
            count,
            master_seed,
            alpha: 0.1,
            anneal: AnnealParams::for_agents(15),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::argument(format!("learning rate {} outside (0, 1]", self.alpha)));
        }
        if !(self.payoff_low < self.payoff_high) {
            return Err(Error::argument("payoff_low must be below payoff_high"));
        }
        self.anneal.validate()
    }
}

/// Anneals `count` independent random games. A game that fails is recorded
/// with its status and the batch goes on.
pub fn random_batch(spec: &BatchSpec) -> Result<Vec<BatchRow>> {
    spec.validate()?;
    Ok((0..spec.count)
        .into_par_iter()
        .map(|id| batch_game(spec, id))
        .collect())
}

fn batch_game(spec: &BatchSpec, id: usize) -> BatchRow {
    let game_seed = derive_seed(spec.master_seed, 2 * id as u64);
    let learner_seed = derive_seed(spec.master_seed, 2 * id as u64 + 1);
    let mut row = BatchRow {
        game_id: id,
        game_seed,
        learner_seed,
        status: String::new(),
        initial_exploitability: None,
        final_exploitability: None,
        initial_epsilon: None,
        final_epsilon: None,
        exploitability_decrease: None,
        epsilon_decrease: None,
        steps_run: 0,
        iterations: 0,
        message: String::new(),
    };
    let result = random_game(&RandomGameSpec {
        num_agents: spec.num_agents,
        actions_per_agent: spec.actions_per_agent,
        topology: spec.topology,
        payoff_low: spec.payoff_low,
        payoff_high: spec.payoff_high,
        seed: game_seed,
    })
    .and_then(|game| {
        let alpha = vec![spec.alpha; game.num_agents()];
        anneal(&game, &spec.anneal, &alpha, learner_seed)
    });
    match result {
        Ok(h) => {
            let (first, last) = (h.initial(), h.result());
            row.status = match h.status {
                AnnealStatus::MaxAnneals => "max_anneals",
                AnnealStatus::FloorReached => "floor_reached",
                AnnealStatus::Unstable => "unstable",
            }
            .into();
            row.initial_exploitability = Some(first.exploitability);
            row.final_exploitability = Some(last.exploitability);
            row.initial_epsilon = Some(first.epsilon);
            row.final_epsilon = Some(last.epsilon);
            row.exploitability_decrease = Some(first.exploitability - last.exploitability);
            row.epsilon_decrease = Some(first.epsilon - last.epsilon);
            row.steps_run = h.steps.len() - 1;
            row.iterations = h.total_iterations();
        }
        Err(Error::InitialNotConverged { spread }) => {
            row.status = "initial_not_converged".into();
            row.message = format!("window spread {spread:e}");
        }
        Err(e) => {
            row.status = "error".into();
            row.message = e.to_string();
        }
    }
    row
}

pub fn write_batch_csv<W: Write>(rows: &[BatchRow], out: W) -> Result<()> {
    write_serialized(rows, out)
}

fn write_serialized<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
        let s: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut d = s.clone();
        d.sort();
        d.dedup();
        assert_eq!(d.len(), 100);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.0);
        assert_eq!(quantile(&v, 0.25), 1.0);
        assert_eq!(quantile(&[1.0, 2.0], 0.5), 1.5);
    }

    #[test]
    fn grid_points() {
        let g = TSearch::Grid { lo: 0.1, hi: 0.5, step: 0.1 }.grid();
        assert_eq!(g.len(), 5);
        assert!((g[4] - 0.5).abs() < 1e-12);
        assert!(TSearch::Grid { lo: 0.5, hi: 0.1, step: 0.1 }.validate().is_err());
        assert!(TSearch::Bisection { lo: 0.1, hi: 1.0, resolution: 0.0 }.validate().is_err());
    }

    #[test]
    fn ring_only_families() {
        let f = GameFamily::Chakraborty { alpha: 7.0, beta: 8.5 };
        assert!(f.build(TopologySpec::ring(3)).is_ok());
        assert!(f.build(TopologySpec::full(3)).is_err());
    }

    #[test]
    fn stable_alpha_scales_with_rate() {
        let g = GameFamily::Sato { eps_x: 0.01, eps_y: -0.05 }
            .build(TopologySpec::ring(3))
            .unwrap();
        let p = AlphaPolicy::Stable { max: 0.1 };
        let small = p.resolve(&g, &ExplorationRates::uniform(3, 0.01).unwrap()).unwrap();
        let big = p.resolve(&g, &ExplorationRates::uniform(3, 100.0).unwrap()).unwrap();
        assert!(small < 0.01);
        assert_eq!(big, 0.1);
    }

    #[test]
    fn zero_sum_boundary_at_grid_floor() {
        let spec = SweepSpec {
            game: GameFamily::Sato { eps_x: 0.0, eps_y: 0.0 },
            topology: TopologyKind::Ring,
            agents: vec![3],
            search: TSearch::Grid { lo: 0.1, hi: 0.3, step: 0.1 },
            num_inits: 3,
            run: RunSettings {
                horizon: 20_000,
                window: 2500,
                tol: 1e-5,
                alpha: AlphaPolicy::Fixed(0.1),
                order: UpdateOrder::Sequential,
            },
            seed: 1,
        };
        let table = stability_sweep(&spec).unwrap();
        assert_eq!(table.rows[0].t_star, Some(0.1));
        assert_eq!(table.rows[0].unique, Some(true));
    }

    #[test]
    fn batch_is_deterministic_and_tolerant() {
        let mut spec = BatchSpec::ring_default(2, 9);
        spec.num_agents = 4;
        spec.anneal = AnnealParams::for_agents(4);
        spec.anneal.max_anneals = 3;
        let a = random_batch(&spec).unwrap();
        let b = random_batch(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|r| !r.status.is_empty()));
    }
}

//! Centralised exploration annealing.
//!
//! Start every agent above a sufficient stability threshold, learn a QRE,
//! then repeatedly lower the rate of the agent with the largest
//! `T_k A_k(x̄_k)` by `ΔT` and keep learning from the current Q-values. The
//! loop stops when the dynamics fail the convergence test, a rate would
//! reach zero, or the anneal budget runs out; the last converged QRE is the
//! result.

use serde::{Deserialize, Serialize};

use crate::dynamics::{Init, LearnerConfig, Learner, UpdateOrder};
use crate::equilibria::{epsilon_nash, exploitability, qre_residual};
use crate::error::{Error, Result};
use crate::game::{ExplorationRates, JointStrategy, NetworkGame};
use crate::spectral::{stability_report, Condition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    /// Rate decrement. `None` uses 2% of the largest initial rate.
    pub delta_t: Option<f64>,
    pub max_anneals: usize,
    /// Learning steps per anneal.
    pub horizon: usize,
    pub window: usize,
    pub tol: f64,
    pub initial_condition: Condition,
    /// Multiplies the threshold to place `T(0)` inside the stable region.
    pub safety_margin: f64,
    /// Lower bound on `T_k(0)`, used where the threshold is zero
    /// (pairwise zero-sum games, isolated agents).
    pub min_initial_rate: f64,
    pub order: UpdateOrder,
}

impl AnnealParams {
    /// Defaults for an `n`-agent game: `H = max(500 n, 2500)`, `h = 500`,
    /// `tol = 1e-5`, C2 start with a 5% margin.
    pub fn for_agents(n: usize) -> Self {
        Self {
            delta_t: None,
            max_anneals: 1000,
            horizon: (500 * n).max(2500),
            window: 500,
            tol: 1e-5,
            initial_condition: Condition::C2,
            safety_margin: 1.05,
            min_initial_rate: 0.1,
            order: UpdateOrder::Sequential,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.delta_t {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::argument(format!("ΔT must be positive, got {d}")));
            }
        }
        if self.horizon == 0 || self.window == 0 || self.window > self.horizon {
            return Err(Error::argument(format!(
                "need 0 < window ({}) ≤ horizon ({})",
                self.window, self.horizon
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::argument("tolerance must be positive"));
        }
        if !(self.safety_margin >= 1.0) {
            return Err(Error::argument(format!(
                "safety margin must be ≥ 1, got {}",
                self.safety_margin
            )));
        }
        if !(self.min_initial_rate > 0.0) {
            return Err(Error::argument("min_initial_rate must be positive"));
        }
        Ok(())
    }

    /// `T(0)` for `game`.
    pub fn initial_rates(&self, game: &NetworkGame) -> Result<ExplorationRates> {
        let report = stability_report(game)?;
        let th = report.thresholds(self.initial_condition)?;
        ExplorationRates::new(
            th.iter()
                .map(|c| (self.safety_margin * c).max(self.min_initial_rate))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealStep {
    /// 0 for the initial run.
    pub index: usize,
    pub rates: ExplorationRates,
    pub qre: JointStrategy,
    pub epsilon: f64,
    pub exploitability: f64,
    pub qre_residual: f64,
    /// Relative window spread of the run that produced this step.
    pub spread: f64,
    pub converged: bool,
    pub annealed_agent: Option<usize>,
    /// Learning iterations up to and including this step.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnealStatus {
    /// The anneal budget was used up with every step converging.
    MaxAnneals,
    /// The next decrement would have made a rate non-positive.
    FloorReached,
    /// The last run failed the convergence test; learning halted.
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealHistory {
    /// Every step run, including a final rejected one when `status` is
    /// `Unstable`.
    pub steps: Vec<AnnealStep>,
    pub status: AnnealStatus,
    pub delta_t: f64,
}

impl AnnealHistory {
    pub fn accepted(&self) -> impl Iterator<Item = &AnnealStep> + '_ {
        self.steps.iter().filter(|s| s.converged)
    }

    pub fn initial(&self) -> &AnnealStep {
        &self.steps[0]
    }

    /// The last converged step; its QRE is the learned joint strategy.
    pub fn result(&self) -> &AnnealStep {
        self.steps.iter().rev().find(|s| s.converged).unwrap_or(&self.steps[0])
    }

    pub fn total_iterations(&self) -> usize {
        self.steps.last().map_or(0, |s| s.iterations)
    }
}

/// Relative gap below which two `T_k A_k` values count as tied. Symmetric
/// games produce exact ties that rounding would otherwise break at random.
pub const TIE_RTOL: f64 = 1e-9;

/// Index of the largest entry; entries within [`TIE_RTOL`] of the maximum
/// are ties and the lowest index among them wins.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cut = max - TIE_RTOL * max.abs();
    values.iter().position(|&v| v >= cut).unwrap_or(0)
}

pub fn anneal(
    game: &NetworkGame,
    params: &AnnealParams,
    alpha: &[f64],
    seed: u64,
) -> Result<AnnealHistory> {
    params.validate()?;
    let mut rates = params.initial_rates(game)?;
    let delta_t = params.delta_t.unwrap_or(0.02 * rates.max());
    let cfg = LearnerConfig {
        rates: rates.clone(),
        alpha: alpha.to_vec(),
        horizon: params.horizon,
        window: params.window,
        tolerance: params.tol,
        seed,
        order: params.order,
        retention: crate::dynamics::Retention::Window,
    };
    let mut learner = Learner::new(game, &cfg, Init::Random)?;

    let first = learner.run_and_test(params.horizon, params.window, params.tol)?;
    if !first.converged {
        return Err(Error::InitialNotConverged {
            spread: first.spread,
        });
    }
    let mut steps = vec![record(game, 0, &rates, first.final_strategy, first.spread, true, None, learner.steps_taken())?];

    let mut status = AnnealStatus::MaxAnneals;
    for index in 1..=params.max_anneals {
        let prev = steps.last().unwrap();
        let (_, per_agent) = epsilon_nash(game, &prev.qre, &rates)?;
        let agent = argmax_lowest(&per_agent);
        let lowered = rates[agent] - delta_t;
        if lowered <= 0.0 {
            status = AnnealStatus::FloorReached;
            break;
        }
        rates = rates.with_rate(agent, lowered)?;
        learner.set_rates(&rates)?;
        let run = learner.run_and_test(params.horizon, params.window, params.tol)?;
        let step = record(
            game,
            index,
            &rates,
            run.final_strategy,
            run.spread,
            run.converged,
            Some(agent),
            learner.steps_taken(),
        )?;
        steps.push(step);
        if !run.converged {
            status = AnnealStatus::Unstable;
            break;
        }
    }
    Ok(AnnealHistory {
        steps,
        status,
        delta_t,
    })
}

#[allow(clippy::too_many_arguments)]
fn record(
    game: &NetworkGame,
    index: usize,
    rates: &ExplorationRates,
    qre: JointStrategy,
    spread: f64,
    converged: bool,
    annealed_agent: Option<usize>,
    iterations: usize,
) -> Result<AnnealStep> {
    let (epsilon, _) = epsilon_nash(game, &qre, rates)?;
    Ok(AnnealStep {
        index,
        rates: rates.clone(),
        epsilon,
        exploitability: exploitability(game, &qre)?,
        qre_residual: qre_residual(game, &qre, rates)?,
        qre,
        spread,
        converged,
        annealed_agent,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax_lowest(&[1.0, 3.0, 3.0, 2.0]), 1);
        assert_eq!(argmax_lowest(&[5.0, 5.0]), 0);
        assert_eq!(argmax_lowest(&[0.3, 0.3 + 1e-15, 0.1]), 0);
        assert_eq!(argmax_lowest(&[0.3, 0.31, 0.1]), 1);
    }

    #[test]
    fn initial_rates_follow_condition() {
        let g = chakraborty_game(2.5, 1.5, 5).unwrap();
        let mut p = AnnealParams::for_agents(5);
        p.initial_condition = Condition::C1;
        let t = p.initial_rates(&g).unwrap();
        // δ_k = 1.5 and two neighbours
        for k in 0..5 {
            assert!((t[k] - 1.05 * 3.0).abs() < 1e-12);
        }
        p.initial_condition = Condition::C3;
        assert!(p.initial_rates(&g).is_err());
    }

    #[test]
    fn zero_sum_uses_rate_floor() {
        let g = sato_game(0.0, 0.0, TopologySpec::ring(3)).unwrap();
        let p = AnnealParams::for_agents(3);
        let t = p.initial_rates(&g).unwrap();
        assert!(t.as_slice().iter().all(|&v| v == p.min_initial_rate));
    }

    #[test]
    fn params_validation() {
        let mut p = AnnealParams::for_agents(3);
        p.safety_margin = 0.9;
        assert!(p.validate().is_err());
        let mut p = AnnealParams::for_agents(3);
        p.window = p.horizon + 1;
        assert!(p.validate().is_err());
        let mut p = AnnealParams::for_agents(3);
        p.delta_t = Some(0.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn short_anneal_bookkeeping() {
        let g = chakraborty_game(2.5, 1.5, 3).unwrap();
        let mut p = AnnealParams::for_agents(3);
        p.max_anneals = 5;
        let h = anneal(&g, &p, &[0.1; 3], 7).unwrap();
        assert!(h.initial().converged);
        assert_eq!(h.initial().annealed_agent, None);
        for pair in h.steps.windows(2) {
            let changed: Vec<usize> = (0..3)
                .filter(|&k| pair[0].rates[k] != pair[1].rates[k])
                .collect();
            assert_eq!(changed, vec![pair[1].annealed_agent.unwrap()]);
            assert!(pair[1].iterations > pair[0].iterations);
        }
    }
}

//! How far a joint strategy is from equilibrium.
//!
//! At a QRE `x̄` with rates `T`, every agent's best-response gain equals
//! `T_k A_k(x̄_k)` where `A_k(x) = max_i ln x_i − ⟨x, ln x⟩` is the surprisal
//! gap. So `x̄` is an `ε`-Nash equilibrium with `ε = max_k T_k A_k(x̄_k)`
//! and its exploitability is `Σ_k T_k A_k(x̄_k)`.

use serde::{Deserialize, Serialize};

use crate::dynamics::boltzmann;
use crate::error::{Error, Result};
use crate::game::{dot, ExplorationRates, JointStrategy, NetworkGame};

/// `max_{k,i} |x_ki − softmax(r_k(x_{-k}) / T_k)_i|`; zero exactly at a QRE.
pub fn qre_residual(game: &NetworkGame, x: &JointStrategy, t: &ExplorationRates) -> Result<f64> {
    check_rates(game, t)?;
    let r = game.reward_vectors(x)?;
    let mut worst = 0.0f64;
    for k in 0..game.num_agents() {
        let xk = x.agent(k);
        let lo = game.offset(k);
        let br = boltzmann(&r[lo..lo + xk.len()], t[k])?;
        for (a, b) in xk.iter().zip(&br) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// `A(x) = max_i ln x_i − ⟨x, ln x⟩`, with `0 ln 0 = 0` and the max taken
/// over the support. Always `≥ 0`.
pub fn surprisal_gap(x: &[f64]) -> Result<f64> {
    if let Some(p) = x.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::argument(format!("invalid probability {p}")));
    }
    let max = x.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::argument("surprisal gap of an all-zero vector"));
    }
    let neg_entropy: f64 = x.iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum();
    // rounding can push a vertex or the uniform point a hair below zero
    Ok((max.ln() - neg_entropy).max(0.0))
}

/// Best-response gain per agent, `max_i r_ki − ⟨x_k, r_k⟩`.
pub fn nash_gaps(game: &NetworkGame, x: &JointStrategy) -> Result<Vec<f64>> {
    let r = game.reward_vectors(x)?;
    Ok((0..game.num_agents())
        .map(|k| {
            let xk = x.agent(k);
            let lo = game.offset(k);
            let rk = &r[lo..lo + xk.len()];
            let best = rk.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (best - dot(xk, rk)).max(0.0)
        })
        .collect())
}

/// `ε = max_k T_k A_k(x_k)` together with the per-agent terms.
///
/// The value is the exact Nash gap only when `x` is a QRE for `t`; away from
/// a QRE use [`exploitability`].
pub fn epsilon_nash(
    game: &NetworkGame,
    x: &JointStrategy,
    t: &ExplorationRates,
) -> Result<(f64, Vec<f64>)> {
    check_rates(game, t)?;
    game.check_strategy(x)?;
    let per_agent = (0..game.num_agents())
        .map(|k| Ok(t[k] * surprisal_gap(x.agent(k))?))
        .collect::<Result<Vec<f64>>>()?;
    let eps = per_agent.iter().copied().fold(0.0, f64::max);
    Ok((eps, per_agent))
}

/// `φ(x) = Σ_k max_{y_k} u_k(y_k, x_{-k}) − u_k(x)`. The inner maximum is
/// linear in `y_k`, so it is attained at a pure action.
pub fn exploitability(game: &NetworkGame, x: &JointStrategy) -> Result<f64> {
    Ok(nash_gaps(game, x)?.iter().sum())
}

/// Largest component of the simplex-projected gradient of the perturbed
/// payoffs `u_k^H`; zero at critical points of the perturbed game.
pub fn perturbed_gradient_residual(
    game: &NetworkGame,
    x: &JointStrategy,
    t: &ExplorationRates,
) -> Result<f64> {
    let f = game.pseudo_gradient(x, t)?;
    let mut worst = 0.0f64;
    for k in 0..game.num_agents() {
        let lo = game.offset(k);
        let block = &f[lo..lo + game.num_actions(k)];
        let mean = block.iter().sum::<f64>() / block.len() as f64;
        for v in block {
            worst = worst.max((v - mean).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub qre_residual: f64,
    pub epsilon: f64,
    pub per_agent_epsilon: Vec<f64>,
    pub exploitability: f64,
}

pub fn equilibrium_report(
    game: &NetworkGame,
    x: &JointStrategy,
    t: &ExplorationRates,
) -> Result<EquilibriumReport> {
    let (epsilon, per_agent_epsilon) = epsilon_nash(game, x, t)?;
    Ok(EquilibriumReport {
        qre_residual: qre_residual(game, x, t)?,
        epsilon,
        per_agent_epsilon,
        exploitability: exploitability(game, x)?,
    })
}

fn check_rates(game: &NetworkGame, t: &ExplorationRates) -> Result<()> {
    if t.len() != game.num_agents() {
        return Err(Error::structural(format!(
            "{} exploration rates for {} agents",
            t.len(),
            game.num_agents()
        )));
    }
    Ok(())
}

const INV_E: f64 = 0.367_879_441_171_442_33;
const HALLEY_MAX_ITERS: usize = 100;

/// Principal branch `W_0(z)` for `z ≥ −1/e`, by Halley iteration with a
/// bisection fallback.
pub fn lambert_w(z: f64) -> Result<f64> {
    if z.is_nan() || z < -INV_E - 1e-16 {
        return Err(Error::domain(format!("Lambert W_0 undefined at z = {z}")));
    }
    if z <= -INV_E {
        return Ok(-1.0);
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if z < -0.25 {
        // expansion around the branch point
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if z < 3.0 {
        z.ln_1p()
    } else {
        let l = z.ln();
        l - l.ln()
    };
    for _ in 0..HALLEY_MAX_ITERS {
        let ew = w.exp();
        let f = w * ew - z;
        if f == 0.0 {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        if !next.is_finite() || next < -1.0 {
            break;
        }
        if (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs()) {
            return Ok(next);
        }
        w = next;
    }
    lambert_w_bisection(z)
}

fn lambert_w_bisection(z: f64) -> Result<f64> {
    let (mut lo, mut hi) = (-1.0, 1.0f64.max(z.ln_1p() + 1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() < z {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * (1.0 + mid.abs()) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::NonConvergence {
        method: "Lambert W bisection",
        iterations: 200,
        estimate: 0.5 * (lo + hi),
    })
}

/// The largest surprisal gap over an `n`-action simplex and where it is
/// attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurprisalGapMax {
    pub value: f64,
    /// Probability the maximizer puts on its distinguished action,
    /// `1 / (1 + W((n − 1)/e))`; the others share the rest equally.
    pub vertex_probability: f64,
    /// The same point written as `c e_i + (1 − c) U`.
    pub mixing_weight: f64,
}

impl SurprisalGapMax {
    /// Maximizer with the distinguished action `i`.
    pub fn maximizer(&self, n: usize, i: usize) -> Vec<f64> {
        let rest = (1.0 - self.vertex_probability) / (n - 1) as f64;
        (0..n)
            .map(|j| if j == i { self.vertex_probability } else { rest })
            .collect()
    }
}

/// `Ā = [ln(n − 1) − ln W((n − 1)/e)] / (1 + 1/W((n − 1)/e))`.
pub fn surprisal_gap_max(n: usize) -> Result<SurprisalGapMax> {
    if n < 2 {
        return Err(Error::argument(format!("need at least two actions, got {n}")));
    }
    let m = (n - 1) as f64;
    let w = lambert_w(m / std::f64::consts::E)?;
    let value = (m.ln() - w.ln()) / (1.0 + 1.0 / w);
    let p = 1.0 / (1.0 + w);
    let u = 1.0 / n as f64;
    Ok(SurprisalGapMax {
        value,
        vertex_probability: p,
        mixing_weight: (p - u) / (1.0 - u),
    })
}

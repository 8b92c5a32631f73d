//! Structural quantities behind the exploration thresholds: influence
//! bounds `δ_k`, the intensity of identical interests `σ_I`, graph operator
//! norms and the three sufficient conditions
//!
//! * C1: `T_k > δ_k |𝒩_k|`
//! * C2: `T_k > ½ σ_I ‖G‖_∞`
//! * C3: `T_k > ½ σ_I ‖G‖_2` (every edge carries the same bimatrix game)

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::NetworkGame;
use crate::linalg::{op_norm_inf, op_norm_one, op_norm_two, Matrix};

/// Entrywise tolerance for the pairwise zero-sum test.
pub const ZERO_SUM_TOL: f64 = 1e-12;

/// `δ_k`: the largest change in any reward component of agent `k` when a
/// single neighbour switches pure action. For polymatrix payoffs this is the
/// largest within-row spread of any incident matrix `A^{kl}`.
pub fn influence_bound(game: &NetworkGame, k: usize) -> f64 {
    game.neighbors(k)
        .map(|(_, m)| {
            (0..m.rows())
                .map(|i| {
                    let row = m.row(i);
                    let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
                    hi - lo
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// `‖A^{kl} + (A^{lk})ᵀ‖_2` for every edge, in edge order.
pub fn edge_interaction_norms(game: &NetworkGame) -> Result<Vec<f64>> {
    game.edges()
        .iter()
        .map(|e| op_norm_two(&e.a_kl.add(&e.a_lk.transpose())?))
        .collect()
}

/// `σ_I = max_{(k,l)∈ℰ} ‖A^{kl} + (A^{lk})ᵀ‖_2`.
pub fn identical_interest_intensity(game: &NetworkGame) -> Result<f64> {
    if game.edges().is_empty() {
        return Err(Error::argument("σ_I is undefined for a game without edges"));
    }
    Ok(edge_interaction_norms(game)?.into_iter().fold(0.0, f64::max))
}

/// `A^{kl} + (A^{lk})ᵀ = 0` on every edge, within [`ZERO_SUM_TOL`].
pub fn is_pairwise_zero_sum(game: &NetworkGame) -> bool {
    game.edges().iter().all(|e| {
        e.a_kl
            .add(&e.a_lk.transpose())
            .map(|s| s.max_abs() <= ZERO_SUM_TOL)
            .unwrap_or(false)
    })
}

/// True iff every edge carries the same ordered pair `(A^{kl}, A^{lk})`
/// under the stored `k < l` orientation.
pub fn shares_one_bimatrix(game: &NetworkGame) -> bool {
    let mut oriented = game.edges().iter().map(|e| {
        if e.k < e.l {
            (&e.a_kl, &e.a_lk)
        } else {
            (&e.a_lk, &e.a_kl)
        }
    });
    match oriented.next() {
        None => false,
        Some((a0, b0)) => oriented.all(|(a, b)| a == a0 && b == b0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentBound {
    pub agent: usize,
    pub influence_bound: f64,
    pub neighbors: usize,
    /// `δ_k |𝒩_k|`
    pub c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub agents: Vec<AgentBound>,
    pub sigma_i: f64,
    pub norm_inf: f64,
    pub norm_two: f64,
    /// `½ σ_I ‖G‖_∞`
    pub c2: f64,
    /// `½ σ_I ‖G‖_2`; only a sufficient condition when `c3_applicable`.
    pub c3: f64,
    pub c3_applicable: bool,
}

impl StabilityReport {
    pub fn c1_max(&self) -> f64 {
        self.agents.iter().map(|a| a.c1).fold(0.0, f64::max)
    }

    /// Smallest uniform rate certified by any applicable condition.
    pub fn min_uniform_threshold(&self) -> f64 {
        let mut t = self.c1_max().min(self.c2);
        if self.c3_applicable {
            t = t.min(self.c3);
        }
        t
    }

    /// The per-agent thresholds of one condition.
    pub fn thresholds(&self, condition: Condition) -> Result<Vec<f64>> {
        match condition {
            Condition::C1 => Ok(self.agents.iter().map(|a| a.c1).collect()),
            Condition::C2 => Ok(vec![self.c2; self.agents.len()]),
            Condition::C3 if self.c3_applicable => Ok(vec![self.c3; self.agents.len()]),
            Condition::C3 => Err(Error::argument(
                "C3 needs every edge to carry the same bimatrix game",
            )),
        }
    }

    /// Whether uniform-or-not rates `t` strictly exceed the thresholds of
    /// `condition` for every agent.
    pub fn certifies(&self, condition: Condition, t: &[f64]) -> bool {
        self.thresholds(condition)
            .map(|th| th.iter().zip(t).all(|(c, t)| t > c))
            .unwrap_or(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    C1,
    C2,
    C3,
}

impl std::str::FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C1" => Ok(Condition::C1),
            "C2" => Ok(Condition::C2),
            "C3" => Ok(Condition::C3),
            other => Err(Error::argument(format!("unknown condition '{other}'"))),
        }
    }
}

pub fn stability_report(game: &NetworkGame) -> Result<StabilityReport> {
    let g = game.adjacency();
    let norm_inf = op_norm_inf(&g);
    let norm_two = op_norm_two(&g)?;
    let sigma_i = if game.edges().is_empty() {
        0.0
    } else {
        identical_interest_intensity(game)?
    };
    let agents = (0..game.num_agents())
        .map(|k| {
            let delta = influence_bound(game, k);
            let nk = game.degree(k);
            AgentBound {
                agent: k,
                influence_bound: delta,
                neighbors: nk,
                c1: delta * nk as f64,
            }
        })
        .collect();
    Ok(StabilityReport {
        agents,
        sigma_i,
        norm_inf,
        norm_two,
        c2: 0.5 * sigma_i * norm_inf,
        c3: 0.5 * sigma_i * norm_two,
        c3_applicable: shares_one_bimatrix(game),
    })
}

/// Block matrix of size `(Σn_k)²` with block `(k, l) = −A^{kl}` on edges.
pub fn interaction_block_matrix(game: &NetworkGame) -> Matrix {
    let n = game.total_actions();
    let mut m = Matrix::zeros(n, n);
    for e in game.edges() {
        m.set_block(game.offset(e.k), game.offset(e.l), &e.a_kl.scaled(-1.0));
        m.set_block(game.offset(e.l), game.offset(e.k), &e.a_lk.scaled(-1.0));
    }
    m
}

/// Symmetric part of the interaction: block `(k, l)` is
/// `½ (A^{kl} + (A^{lk})ᵀ)` and block `(l, k)` its transpose.
pub fn symmetrized_interaction(game: &NetworkGame) -> Result<Matrix> {
    let n = game.total_actions();
    let mut m = Matrix::zeros(n, n);
    for e in game.edges() {
        let block = e.a_kl.add(&e.a_lk.transpose())?.scaled(0.5);
        m.set_block(game.offset(e.k), game.offset(e.l), &block);
        m.set_block(game.offset(e.l), game.offset(e.k), &block.transpose());
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockNormCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `‖N‖_2 ≤ √(‖G‖_1 ‖G‖_∞) · max_{edges} ‖N_{kl}‖_2` for the
/// symmetrized interaction matrix `N`.
pub fn verify_block_norm_bound(game: &NetworkGame) -> Result<BlockNormCheck> {
    let n = symmetrized_interaction(game)?;
    let lhs = op_norm_two(&n)?;
    let g = game.adjacency();
    let max_block = game
        .edges()
        .iter()
        .map(|e| op_norm_two(&e.a_kl.add(&e.a_lk.transpose())?.scaled(0.5)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let rhs = (op_norm_one(&g) * op_norm_inf(&g)).sqrt() * max_block;
    Ok(BlockNormCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}

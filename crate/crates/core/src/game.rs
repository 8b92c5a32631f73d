//! Network polymatrix games, joint mixed strategies and payoff evaluation.
//!
//! Agent `k` with neighbours `𝒩_k` receives `u_k(x) = Σ_{l∈𝒩_k} x_k · A^{kl} x_l`.
//! Each undirected edge carries the ordered pair `(A^{kl}, A^{lk})`, so both
//! endpoints read their own matrix off the same record.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Sum tolerance inside which a strategy is silently renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-9;
/// Entries below this are treated as zero by operations needing `ln x`.
pub const LOG_FLOOR: f64 = 1e-300;

/// One undirected edge `{k, l}` with the payoff matrices of both endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub k: usize,
    pub l: usize,
    /// `n_k × n_l` payoff of agent `k` against `l`.
    #[serde(rename = "A_kl")]
    pub a_kl: Matrix,
    /// `n_l × n_k` payoff of agent `l` against `k`.
    #[serde(rename = "A_lk")]
    pub a_lk: Matrix,
}

impl Edge {
    pub fn new(k: usize, l: usize, a_kl: Matrix, a_lk: Matrix) -> Self {
        Self { k, l, a_kl, a_lk }
    }

    /// The matrix agent `agent` uses on this edge, or `None` if it is not an
    /// endpoint.
    pub fn matrix_for(&self, agent: usize) -> Option<&Matrix> {
        if agent == self.k {
            Some(&self.a_kl)
        } else if agent == self.l {
            Some(&self.a_lk)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Incident {
    other: usize,
    edge: usize,
    forward: bool,
}

/// Serialized form: `{agents, action_counts, edges: [{k, l, A_kl, A_lk}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameFile {
    pub agents: usize,
    pub action_counts: Vec<usize>,
    pub edges: Vec<Edge>,
}

/// A network polymatrix game. Immutable once built.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GameFile", into = "GameFile")]
pub struct NetworkGame {
    action_counts: Vec<usize>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<Incident>>,
    offsets: Arc<[usize]>,
}

impl NetworkGame {
    pub fn new(action_counts: Vec<usize>, edges: Vec<Edge>) -> Result<Self> {
        let n = action_counts.len();
        if n == 0 {
            return Err(Error::structural("a game needs at least one agent"));
        }
        if let Some(k) = action_counts.iter().position(|&c| c == 0) {
            return Err(Error::structural(format!("agent {k} has no actions")));
        }
        let mut incidence = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (idx, e) in edges.iter().enumerate() {
            if e.k >= n || e.l >= n {
                return Err(Error::structural(format!(
                    "edge {idx} ({}, {}) references an agent outside 0..{n}",
                    e.k, e.l
                )));
            }
            if e.k == e.l {
                return Err(Error::structural(format!("edge {idx} is a self-edge on agent {}", e.k)));
            }
            if !seen.insert((e.k.min(e.l), e.k.max(e.l))) {
                return Err(Error::structural(format!(
                    "edge ({}, {}) appears more than once",
                    e.k, e.l
                )));
            }
            let (nk, nl) = (action_counts[e.k], action_counts[e.l]);
            if e.a_kl.shape() != (nk, nl) || e.a_lk.shape() != (nl, nk) {
                return Err(Error::structural(format!(
                    "edge ({}, {}) has matrices {:?}/{:?}, expected ({nk}, {nl})/({nl}, {nk})",
                    e.k,
                    e.l,
                    e.a_kl.shape(),
                    e.a_lk.shape()
                )));
            }
            if e.a_kl.as_slice().iter().chain(e.a_lk.as_slice()).any(|v| !v.is_finite()) {
                return Err(Error::structural(format!(
                    "edge ({}, {}) has non-finite payoffs",
                    e.k, e.l
                )));
            }
            incidence[e.k].push(Incident { other: e.l, edge: idx, forward: true });
            incidence[e.l].push(Incident { other: e.k, edge: idx, forward: false });
        }
        let offsets = offsets_for(&action_counts);
        Ok(Self {
            action_counts,
            edges,
            incidence,
            offsets,
        })
    }

    pub fn num_agents(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn num_actions(&self, k: usize) -> usize {
        self.action_counts[k]
    }

    /// Total number of actions `Σ n_k`.
    pub fn total_actions(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Start of agent `k`'s block in a concatenated vector.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub(crate) fn offsets(&self) -> &Arc<[usize]> {
        &self.offsets
    }

    pub fn degree(&self, k: usize) -> usize {
        self.incidence[k].len()
    }

    /// Neighbours of `k` with the matrix `A^{kl}` agent `k` plays against each.
    pub fn neighbors(&self, k: usize) -> impl Iterator<Item = (usize, &Matrix)> + '_ {
        self.incidence[k].iter().map(move |inc| {
            let e = &self.edges[inc.edge];
            (inc.other, if inc.forward { &e.a_kl } else { &e.a_lk })
        })
    }

    /// 0/1 symmetric adjacency matrix `G`.
    pub fn adjacency(&self) -> Matrix {
        let n = self.num_agents();
        let mut g = Matrix::zeros(n, n);
        for e in &self.edges {
            g[(e.k, e.l)] = 1.0;
            g[(e.l, e.k)] = 1.0;
        }
        g
    }

    pub fn to_file(&self) -> GameFile {
        GameFile {
            agents: self.num_agents(),
            action_counts: self.action_counts.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub(crate) fn check_strategy(&self, x: &JointStrategy) -> Result<()> {
        if x.offsets[..] != self.offsets[..] {
            return Err(Error::structural(format!(
                "strategy has action counts {:?}, game has {:?}",
                x.action_counts(),
                self.action_counts
            )));
        }
        Ok(())
    }

    fn check_agent(&self, k: usize) -> Result<()> {
        if k >= self.num_agents() {
            return Err(Error::structural(format!(
                "agent {k} out of range for a {}-agent game",
                self.num_agents()
            )));
        }
        Ok(())
    }

    fn check_rates(&self, t: &ExplorationRates) -> Result<()> {
        if t.len() != self.num_agents() {
            return Err(Error::structural(format!(
                "{} exploration rates for {} agents",
                t.len(),
                self.num_agents()
            )));
        }
        Ok(())
    }

    /// `out += r_k(x_{-k})` where `x` is the concatenated strategy vector.
    /// No shape checks; the dynamics call this in their inner loop.
    #[inline]
    pub(crate) fn accumulate_reward(&self, k: usize, x: &[f64], out: &mut [f64]) {
        for inc in &self.incidence[k] {
            let e = &self.edges[inc.edge];
            let m = if inc.forward { &e.a_kl } else { &e.a_lk };
            let lo = self.offsets[inc.other];
            let hi = self.offsets[inc.other + 1];
            m.mul_vec_add(&x[lo..hi], out);
        }
    }

    /// Reward vector `r_k(x_{-k})`, with `r_{ki} = Σ_l (A^{kl} x_l)_i`.
    pub fn reward_vector(&self, k: usize, x: &JointStrategy) -> Result<Vec<f64>> {
        self.check_agent(k)?;
        self.check_strategy(x)?;
        let mut r = vec![0.0; self.action_counts[k]];
        self.accumulate_reward(k, x.as_flat(), &mut r);
        Ok(r)
    }

    /// All reward vectors concatenated.
    pub fn reward_vectors(&self, x: &JointStrategy) -> Result<Vec<f64>> {
        self.check_strategy(x)?;
        let mut r = vec![0.0; self.total_actions()];
        for k in 0..self.num_agents() {
            let (lo, hi) = (self.offsets[k], self.offsets[k + 1]);
            self.accumulate_reward(k, x.as_flat(), &mut r[lo..hi]);
        }
        Ok(r)
    }

    /// `u_k(x) = Σ_{(k,l)∈ℰ} x_k · A^{kl} x_l`, summed edge by edge.
    pub fn payoff(&self, k: usize, x: &JointStrategy) -> Result<f64> {
        self.check_agent(k)?;
        self.check_strategy(x)?;
        let xk = x.agent(k);
        Ok(self
            .neighbors(k)
            .map(|(l, m)| dot(xk, &m.mul_vec(x.agent(l))))
            .sum())
    }

    /// `u_k^H(x) = u_k(x) − T_k ⟨x_k, ln x_k⟩`, the entropy-perturbed payoff.
    pub fn perturbed_payoff(&self, k: usize, x: &JointStrategy, t: &ExplorationRates) -> Result<f64> {
        self.check_rates(t)?;
        let u = self.payoff(k, x)?;
        let xk = x.agent(k);
        require_interior(xk, k)?;
        let neg_entropy: f64 = xk.iter().map(|p| p * p.ln()).sum();
        Ok(u - t[k] * neg_entropy)
    }

    /// Pseudo-gradient of the perturbed game: block `k` is
    /// `T_k (ln x_k + 1) − r_k(x_{-k})`.
    pub fn pseudo_gradient(&self, x: &JointStrategy, t: &ExplorationRates) -> Result<Vec<f64>> {
        self.check_rates(t)?;
        let r = self.reward_vectors(x)?;
        let mut f = vec![0.0; r.len()];
        for k in 0..self.num_agents() {
            let xk = x.agent(k);
            require_interior(xk, k)?;
            let lo = self.offsets[k];
            for (i, p) in xk.iter().enumerate() {
                f[lo + i] = t[k] * (p.ln() + 1.0) - r[lo + i];
            }
        }
        Ok(f)
    }
}

impl TryFrom<GameFile> for NetworkGame {
    type Error = Error;

    fn try_from(f: GameFile) -> Result<Self> {
        if f.agents != f.action_counts.len() {
            return Err(Error::structural(format!(
                "agents = {} but {} action counts given",
                f.agents,
                f.action_counts.len()
            )));
        }
        NetworkGame::new(f.action_counts, f.edges)
    }
}

impl From<NetworkGame> for GameFile {
    fn from(g: NetworkGame) -> Self {
        g.to_file()
    }
}

pub(crate) fn require_interior(xk: &[f64], k: usize) -> Result<()> {
    if let Some(i) = xk.iter().position(|&p| p < LOG_FLOOR) {
        return Err(Error::domain(format!(
            "agent {k} action {i} has probability {} (interior point required)",
            xk[i]
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn offsets_for(counts: &[usize]) -> Arc<[usize]> {
    let mut offsets = Vec::with_capacity(counts.len() + 1);
    offsets.push(0);
    let mut acc = 0;
    for c in counts {
        acc += c;
        offsets.push(acc);
    }
    offsets.into()
}

/// One mixed strategy per agent, stored as a single concatenated vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct JointStrategy {
    data: Vec<f64>,
    offsets: Arc<[usize]>,
}

impl JointStrategy {
    /// Validates each vector: entries must be finite and non-negative, and
    /// sums within `1e-9` of one are renormalized. Larger deviations are
    /// rejected.
    pub fn new(per_agent: Vec<Vec<f64>>) -> Result<Self> {
        let counts: Vec<usize> = per_agent.iter().map(Vec::len).collect();
        let mut data = Vec::with_capacity(counts.iter().sum());
        for (k, mut v) in per_agent.into_iter().enumerate() {
            normalize_simplex(&mut v, k)?;
            data.extend(v);
        }
        Ok(Self {
            data,
            offsets: offsets_for(&counts),
        })
    }

    pub fn uniform(action_counts: &[usize]) -> Self {
        Self::new(action_counts.iter().map(|&n| vec![1.0 / n as f64; n]).collect())
            .expect("uniform strategies are valid")
    }

    pub fn uniform_for(game: &NetworkGame) -> Self {
        let mut x = Self::uniform(game.action_counts());
        x.offsets = game.offsets().clone();
        x
    }

    /// Independent uniform draws on each simplex (flat Dirichlet).
    pub fn random<R: Rng + ?Sized>(action_counts: &[usize], rng: &mut R) -> Self {
        let per_agent = action_counts
            .iter()
            .map(|&n| {
                let e: Vec<f64> = (0..n)
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let s: f64 = e.iter().sum();
                e.into_iter().map(|v| v / s).collect()
            })
            .collect();
        Self::new(per_agent).expect("normalized exponential draws are valid")
    }

    /// Builds from a concatenated vector laid out like `game`. Used by the
    /// dynamics, whose softmax output is already normalized.
    pub(crate) fn from_flat_unchecked(data: Vec<f64>, offsets: Arc<[usize]>) -> Self {
        debug_assert_eq!(data.len(), *offsets.last().unwrap());
        Self { data, offsets }
    }

    pub fn num_agents(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    #[inline]
    pub fn agent(&self, k: usize) -> &[f64] {
        &self.data[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.num_agents()).map(move |k| self.agent(k))
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// `max |x − y|` over all coordinates.
    pub fn linf_distance(&self, other: &JointStrategy) -> f64 {
        if self.offsets[..] != other.offsets[..] {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_interior(&self) -> bool {
        self.data.iter().all(|&p| p >= LOG_FLOOR)
    }
}

impl TryFrom<Vec<Vec<f64>>> for JointStrategy {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        JointStrategy::new(v)
    }
}

impl From<JointStrategy> for Vec<Vec<f64>> {
    fn from(x: JointStrategy) -> Self {
        x.to_vecs()
    }
}

fn normalize_simplex(v: &mut [f64], k: usize) -> Result<()> {
    if v.is_empty() {
        return Err(Error::structural(format!("agent {k} has an empty strategy")));
    }
    if let Some(i) = v.iter().position(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::domain(format!(
            "agent {k} action {i} has invalid probability {}",
            v[i]
        )));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > RENORMALIZE_TOL {
        return Err(Error::domain(format!(
            "agent {k} strategy sums to {s}, not 1"
        )));
    }
    v.iter_mut().for_each(|p| *p /= s);
    Ok(())
}

/// Per-agent softmax temperatures `T_k > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExplorationRates(Vec<f64>);

impl ExplorationRates {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if let Some(k) = rates.iter().position(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::argument(format!(
                "exploration rate T_{k} = {} must be positive",
                rates[k]
            )));
        }
        Ok(Self(rates))
    }

    pub fn uniform(num_agents: usize, t: f64) -> Result<Self> {
        Self::new(vec![t; num_agents])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Every rate multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|t| t * c).collect())
    }

    /// Replaces `T_k`, keeping the positivity invariant.
    pub fn with_rate(&self, k: usize, t: f64) -> Result<Self> {
        let mut v = self.0.clone();
        v[k] = t;
        Self::new(v)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl std::ops::Index<usize> for ExplorationRates {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl TryFrom<Vec<f64>> for ExplorationRates {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ExplorationRates::new(v)
    }
}

impl From<ExplorationRates> for Vec<f64> {
    fn from(t: ExplorationRates) -> Self {
        t.0
    }
}

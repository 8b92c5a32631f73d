//! Named games, network topologies and seeded random games.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Edge, NetworkGame};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    /// `k ↔ k+1 mod N`
    Ring,
    /// Agent 0 is the hub.
    Star,
    /// Every pair connected.
    Full,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 3] = [TopologyKind::Ring, TopologyKind::Star, TopologyKind::Full];

    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::Ring => "ring",
            TopologyKind::Star => "star",
            TopologyKind::Full => "full",
        }
    }
}

impl std::fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ring" => Ok(TopologyKind::Ring),
            "star" => Ok(TopologyKind::Star),
            "full" => Ok(TopologyKind::Full),
            other => Err(Error::argument(format!("unknown topology '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub kind: TopologyKind,
    pub num_agents: usize,
}

impl TopologySpec {
    pub fn new(kind: TopologyKind, num_agents: usize) -> Self {
        Self { kind, num_agents }
    }

    pub fn ring(n: usize) -> Self {
        Self::new(TopologyKind::Ring, n)
    }

    pub fn star(n: usize) -> Self {
        Self::new(TopologyKind::Star, n)
    }

    pub fn full(n: usize) -> Self {
        Self::new(TopologyKind::Full, n)
    }

    /// Undirected edges as `(k, l)` with `k < l`, in a fixed order.
    pub fn edge_list(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.num_agents;
        if n < 2 {
            return Err(Error::argument(format!("a network needs N ≥ 2 agents, got {n}")));
        }
        Ok(match self.kind {
            TopologyKind::Ring => {
                if n < 3 {
                    return Err(Error::argument(format!("a ring needs N ≥ 3 agents, got {n}")));
                }
                (0..n)
                    .map(|k| {
                        let l = (k + 1) % n;
                        (k.min(l), k.max(l))
                    })
                    .collect()
            }
            TopologyKind::Star => (1..n).map(|l| (0, l)).collect(),
            TopologyKind::Full => (0..n)
                .flat_map(|k| (k + 1..n).map(move |l| (k, l)))
                .collect(),
        })
    }
}

/// 0/1 symmetric adjacency matrix for a topology.
pub fn make_network(spec: TopologySpec) -> Result<Matrix> {
    let n = spec.num_agents;
    let mut g = Matrix::zeros(n, n);
    for (k, l) in spec.edge_list()? {
        g[(k, l)] = 1.0;
        g[(l, k)] = 1.0;
    }
    Ok(g)
}

/// Every edge `(k, l)`, `k < l`, carries `A^{kl} = a` and `A^{lk} = b`.
pub fn shared_bimatrix_game(a: &Matrix, b: &Matrix, topology: TopologySpec) -> Result<NetworkGame> {
    if a.rows() != a.cols() || b.shape() != (a.cols(), a.rows()) {
        return Err(Error::structural(
            "shared bimatrix games need square matrices of equal size",
        ));
    }
    let edges = topology
        .edge_list()?
        .into_iter()
        .map(|(k, l)| Edge::new(k, l, a.clone(), b.clone()))
        .collect();
    NetworkGame::new(vec![a.rows(); topology.num_agents], edges)
}

/// Agent `k`'s payoff is `x_kᵀ A x_{k−1 mod N}`. Each ring edge carries `A`
/// in the influenced direction and the zero matrix in the other.
pub fn directed_ring_game(a: &Matrix, num_agents: usize) -> Result<NetworkGame> {
    if num_agents < 3 {
        return Err(Error::argument(format!(
            "a directed ring needs N ≥ 3 agents, got {num_agents}"
        )));
    }
    if !a.is_square() {
        return Err(Error::structural("directed ring games need a square matrix"));
    }
    let zero = Matrix::zeros(a.rows(), a.cols());
    let edges = (0..num_agents)
        .map(|k| {
            let l = (k + num_agents - 1) % num_agents;
            Edge::new(k, l, a.clone(), zero.clone())
        })
        .collect();
    NetworkGame::new(vec![a.rows(); num_agents], edges)
}

pub fn shapley_matrices(beta: f64) -> (Matrix, Matrix) {
    let a = Matrix::from_rows(&[[1.0, 0.0, beta], [beta, 1.0, 0.0], [0.0, beta, 1.0]]).unwrap();
    let b = Matrix::from_rows(&[[-beta, 1.0, 0.0], [0.0, -beta, 1.0], [1.0, 0.0, -beta]]).unwrap();
    (a, b)
}

/// Network Shapley game, `β ∈ (0, 1)`.
pub fn shapley_game(beta: f64, topology: TopologySpec) -> Result<NetworkGame> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::argument(format!("Shapley β must lie in (0, 1), got {beta}")));
    }
    let (a, b) = shapley_matrices(beta);
    shared_bimatrix_game(&a, &b, topology)
}

pub fn sato_matrices(eps_x: f64, eps_y: f64) -> (Matrix, Matrix) {
    let rps = |e: f64| {
        Matrix::from_rows(&[[e, -1.0, 1.0], [1.0, e, -1.0], [-1.0, 1.0, e]]).unwrap()
    };
    (rps(eps_x), rps(eps_y))
}

/// Network Sato game; `ε_X = ε_Y = 0` is pairwise zero-sum rock-paper-scissors.
pub fn sato_game(eps_x: f64, eps_y: f64, topology: TopologySpec) -> Result<NetworkGame> {
    if !(eps_x.is_finite() && eps_y.is_finite()) {
        return Err(Error::argument("Sato ε values must be finite"));
    }
    let (a, b) = sato_matrices(eps_x, eps_y);
    shared_bimatrix_game(&a, &b, topology)
}

/// Network Chakraborty game on a directed ring, `A = [[1, α], [β, 0]]`.
pub fn chakraborty_game(alpha: f64, beta: f64, num_agents: usize) -> Result<NetworkGame> {
    let a = Matrix::from_rows(&[[1.0, alpha], [beta, 0.0]])?;
    directed_ring_game(&a, num_agents)
}

/// Network mismatching game on a directed ring, `A = [[0, 1], [M, 0]]`, `M ≥ 1`.
pub fn mismatching_game(m: f64, num_agents: usize) -> Result<NetworkGame> {
    if !(m >= 1.0 && m.is_finite()) {
        return Err(Error::argument(format!("mismatching M must be ≥ 1, got {m}")));
    }
    let a = Matrix::from_rows(&[[0.0, 1.0], [m, 0.0]])?;
    directed_ring_game(&a, num_agents)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomGameSpec {
    pub num_agents: usize,
    pub actions_per_agent: usize,
    pub topology: TopologyKind,
    pub payoff_low: f64,
    pub payoff_high: f64,
    pub seed: u64,
}

impl RandomGameSpec {
    /// 15 agents, two actions, ring, payoffs in `[0, 5]`.
    pub fn ring_batch_default(seed: u64) -> Self {
        Self {
            num_agents: 15,
            actions_per_agent: 2,
            topology: TopologyKind::Ring,
            payoff_low: 0.0,
            payoff_high: 5.0,
            seed,
        }
    }
}

/// Payoff entries drawn i.i.d. uniform on `[low, high]`; both directions of
/// every edge are drawn independently. Deterministic in `spec.seed`.
pub fn random_game(spec: &RandomGameSpec) -> Result<NetworkGame> {
    if !(spec.payoff_low < spec.payoff_high) {
        return Err(Error::argument(format!(
            "payoff_low ({}) must be below payoff_high ({})",
            spec.payoff_low, spec.payoff_high
        )));
    }
    if spec.actions_per_agent == 0 {
        return Err(Error::argument("agents need at least one action"));
    }
    let topo = TopologySpec::new(spec.topology, spec.num_agents);
    let n = spec.actions_per_agent;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let data = (0..n * n)
            .map(|_| spec.payoff_low + (spec.payoff_high - spec.payoff_low) * rng.random::<f64>())
            .collect();
        Matrix::new(n, n, data).unwrap()
    };
    let edges = topo
        .edge_list()?
        .into_iter()
        .map(|(k, l)| {
            let a_kl = draw(&mut rng);
            let a_lk = draw(&mut rng);
            Edge::new(k, l, a_kl, a_lk)
        })
        .collect();
    NetworkGame::new(vec![n; spec.num_agents], edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::JointStrategy;

    #[test]
    fn ring_star_full_row_sums() {
        for n in 3..9 {
            let ring = make_network(TopologySpec::ring(n)).unwrap();
            let star = make_network(TopologySpec::star(n)).unwrap();
            let full = make_network(TopologySpec::full(n)).unwrap();
            for i in 0..n {
                assert_eq!(ring.row(i).iter().sum::<f64>(), 2.0);
                assert_eq!(full.row(i).iter().sum::<f64>(), (n - 1) as f64);
                let expect = if i == 0 { n - 1 } else { 1 };
                assert_eq!(star.row(i).iter().sum::<f64>(), expect as f64);
                assert_eq!(ring[(i, i)], 0.0);
            }
            assert!(ring.is_symmetric(0.0) && star.is_symmetric(0.0) && full.is_symmetric(0.0));
        }
    }

    #[test]
    fn small_networks_rejected() {
        assert!(make_network(TopologySpec::ring(2)).is_err());
        assert!(make_network(TopologySpec::star(1)).is_err());
        assert!(make_network(TopologySpec::full(2)).is_ok());
    }

    #[test]
    fn shapley_ring_three_edges_with_printed_matrices() {
        let g = shapley_game(0.5, TopologySpec::ring(3)).unwrap();
        assert_eq!(g.edges().len(), 3);
        let (a, b) = shapley_matrices(0.5);
        for e in g.edges() {
            assert!(e.k < e.l);
            assert_eq!(e.a_kl, a);
            assert_eq!(e.a_lk, b);
        }
        assert_eq!(a.row(1), &[0.5, 1.0, 0.0]);
        assert_eq!(b.row(2), &[1.0, 0.0, -0.5]);
    }

    #[test]
    fn shapley_two_agent_chain() {
        let g = shapley_game(0.2, TopologySpec::full(2)).unwrap();
        assert_eq!(g.edges().len(), 1);
        let e = &g.edges()[0];
        let expect_a = Matrix::from_rows(&[[1.0, 0.0, 0.2], [0.2, 1.0, 0.0], [0.0, 0.2, 1.0]]).unwrap();
        let expect_b =
            Matrix::from_rows(&[[-0.2, 1.0, 0.0], [0.0, -0.2, 1.0], [1.0, 0.0, -0.2]]).unwrap();
        assert_eq!(e.a_kl, expect_a);
        assert_eq!(e.a_lk, expect_b);
    }

    #[test]
    fn shapley_beta_range() {
        for beta in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(shapley_game(beta, TopologySpec::ring(3)).is_err());
        }
    }

    #[test]
    fn sato_sum_is_scaled_identity() {
        let (a, b) = sato_matrices(0.01, -0.05);
        let s = a.add(&b.transpose()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { -0.04 } else { 0.0 };
                assert!((s[(i, j)] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn chakraborty_depends_on_predecessor_only() {
        let g = chakraborty_game(7.0, 8.5, 3).unwrap();
        let base = JointStrategy::uniform_for(&g);
        let r0 = g.reward_vector(1, &base).unwrap();
        // moving agent 2 (not agent 1's predecessor) leaves agent 1's reward unchanged
        let mut v = base.to_vecs();
        v[2] = vec![0.9, 0.1];
        let moved = JointStrategy::new(v.clone()).unwrap();
        assert_eq!(g.reward_vector(1, &moved).unwrap(), r0);
        v[0] = vec![0.9, 0.1];
        let moved = JointStrategy::new(v).unwrap();
        assert_ne!(g.reward_vector(1, &moved).unwrap(), r0);
        assert!(chakraborty_game(7.0, 8.5, 2).is_err());
    }

    #[test]
    fn mismatching_validation() {
        assert!(mismatching_game(0.5, 3).is_err());
        assert!(mismatching_game(2.0, 2).is_err());
        let g = mismatching_game(4.0, 5).unwrap();
        assert_eq!(g.edges().len(), 5);
    }

    #[test]
    fn random_game_determinism_and_bounds() {
        let spec = RandomGameSpec::ring_batch_default(42);
        let g1 = random_game(&spec).unwrap();
        let g2 = random_game(&spec).unwrap();
        assert_eq!(g1.edges(), g2.edges());
        assert_eq!(g1.edges().len(), 15);
        for e in g1.edges() {
            assert_eq!(e.a_kl.shape(), (2, 2));
            assert!(e
                .a_kl
                .as_slice()
                .iter()
                .chain(e.a_lk.as_slice())
                .all(|v| (0.0..=5.0).contains(v)));
        }
        let g3 = random_game(&RandomGameSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(g1.edges(), g3.edges());
        assert!(random_game(&RandomGameSpec { payoff_low: 5.0, ..spec }).is_err());
    }
}

//! Q-Learning dynamics on network polymatrix games.
//!
//! * [`game`]: network games, joint strategies, payoffs and rewards
//! * [`catalog`]: Shapley, Sato, Chakraborty and mismatching games, ring /
//!   star / full topologies, seeded random games
//! * [`spectral`]: influence bounds, `σ_I`, graph norms and the C1/C2/C3
//!   exploration thresholds
//! * [`dynamics`]: Boltzmann Q-Learning, the QLD vector field, the windowed
//!   convergence test
//! * [`equilibria`]: QRE residual, surprisal gap, `ε`-Nash, exploitability,
//!   Lambert W
//! * [`annealer`]: exploration-rate annealing toward tighter Nash
//!   approximations
//! * [`experiments`]: stability sweeps, spread statistics, threshold curves
//!   and random-game batches with CSV output

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod annealer;
pub mod catalog;
pub mod dynamics;
pub mod equilibria;
mod error;
pub mod experiments;
pub mod game;
pub mod linalg;
pub mod spectral;

pub use error::{Error, Result};
pub use game::{Edge, ExplorationRates, JointStrategy, NetworkGame};
pub use linalg::{op_norm_inf, op_norm_two, Matrix};

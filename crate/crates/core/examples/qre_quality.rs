//! How far a learned QRE is from Nash: ε from the surprisal gaps, the
//! exploitability, and the identity tying them together at a QRE.
//!
//! cargo run --release --example qre_quality

use qlnet::catalog::chakraborty_game;
use qlnet::dynamics::{Init, Learner, LearnerConfig};
use qlnet::equilibria::{equilibrium_report, nash_gaps};
use qlnet::spectral::stability_report;
use qlnet::ExplorationRates;

fn main() -> qlnet::Result<()> {
    let game = chakraborty_game(2.5, 1.5, 6)?;
    let c2 = stability_report(&game)?.c2;
    for scale in [2.0, 1.0, 0.5] {
        let t = scale * c2;
        let cfg = LearnerConfig::new(6, t, 20_000)?.seed(1);
        let mut learner = Learner::new(&game, &cfg, Init::Random)?;
        let run = learner.run_and_test(cfg.horizon, cfg.window, cfg.tolerance)?;
        let rates = ExplorationRates::uniform(6, t)?;
        let rep = equilibrium_report(&game, &run.final_strategy, &rates)?;
        let sum_tk_ak: f64 = rep.per_agent_epsilon.iter().sum();
        let best_gap = nash_gaps(&game, &run.final_strategy)?
            .into_iter()
            .fold(0.0, f64::max);
        println!(
            "T = {t:.3}: converged {}  residual {:.1e}  ε {:.5} (max gap {:.5})  φ {:.5} (Σ T_k A_k {:.5})",
            run.converged, rep.qre_residual, rep.epsilon, best_gap, rep.exploitability, sum_tk_ak
        );
    }
    Ok(())
}

//! Exploration annealing on the five-agent Chakraborty game. Prints the
//! trace of rates, ε and exploitability until the dynamics stop converging.
//!
//! cargo run --release --example anneal

use qlnet::annealer::{anneal, AnnealParams};
use qlnet::catalog::chakraborty_game;

fn main() -> qlnet::Result<()> {
    let game = chakraborty_game(2.5, 1.5, 5)?;
    let params = AnnealParams::for_agents(5);
    let history = anneal(&game, &params, &[0.1; 5], 0)?;
    println!("ΔT = {:.4}, status {:?}", history.delta_t, history.status);
    for s in history.steps.iter().step_by(20).chain(history.steps.last()) {
        println!(
            "step {:>4}  iters {:>7}  ΣT {:>7.3}  ε {:.5}  φ {:.5}  converged {}",
            s.index,
            s.iterations,
            s.rates.as_slice().iter().sum::<f64>(),
            s.epsilon,
            s.exploitability,
            s.converged
        );
    }
    let r = history.result();
    println!("result: step {}  ε {:.5}  φ {:.5}", r.index, r.epsilon, r.exploitability);
    Ok(())
}

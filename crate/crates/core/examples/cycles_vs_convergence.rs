//! Q-Learning on the three-agent Chakraborty game: low exploration leaves
//! the dynamics cycling, high exploration makes them settle on one QRE.
//!
//! cargo run --release --example cycles_vs_convergence

use qlnet::catalog::chakraborty_game;
use qlnet::dynamics::{run_q_learning, relative_spread, Init, LearnerConfig};

fn main() -> qlnet::Result<()> {
    let game = chakraborty_game(7.0, 8.5, 3)?;
    for t in [0.7, 2.7] {
        println!("T = {t}");
        for seed in 0..4 {
            let cfg = LearnerConfig::new(3, t, 20_000)?.seed(seed);
            let traj = run_q_learning(&game, &cfg, Init::Random)?;
            let spread = relative_spread(traj.window(cfg.window))?;
            let last = traj.last().unwrap();
            println!(
                "  seed {seed}: spread {spread:.2e}  x_0 = ({:.4}, {:.4})",
                last.agent(0)[0],
                last.agent(0)[1]
            );
        }
    }
    Ok(())
}

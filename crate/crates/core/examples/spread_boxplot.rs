//! Boxplot statistics of first-action probabilities over the last 2500
//! steps, below and above the stability threshold.
//!
//! cargo run --release --example spread_boxplot

use qlnet::catalog::{shapley_game, TopologySpec};
use qlnet::experiments::{spread_report, RunSettings};

fn main() -> qlnet::Result<()> {
    let game = shapley_game(0.2, TopologySpec::ring(15))?;
    let settings = RunSettings {
        horizon: 20_000,
        window: 2500,
        tol: 1e-5,
        alpha: Default::default(),
        order: Default::default(),
    };
    let rows = spread_report(&game, &[0.3, 2.1], 1, &settings, 0)?;
    println!("{:>4} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}", "T", "agent", "min", "q25", "median", "q75", "max");
    for r in rows.iter().filter(|r| r.action == 0 && r.agent < 3) {
        println!(
            "{:>4} {:>5} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            r.t, r.agent, r.min, r.q25, r.median, r.q75, r.max
        );
    }
    Ok(())
}

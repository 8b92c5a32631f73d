//! Annealing over a small batch of random ring games; prints how much
//! exploitability and ε dropped in each.
//!
//! cargo run --release --example random_batch

use qlnet::experiments::{random_batch, BatchSpec};

fn main() -> qlnet::Result<()> {
    let mut spec = BatchSpec::ring_default(4, 11);
    spec.anneal.max_anneals = 150;
    let rows = random_batch(&spec)?;
    for r in &rows {
        println!(
            "game {}  {:<13}  Δφ {:>8.4}  Δε {:>8.4}  steps {}",
            r.game_id,
            r.status,
            r.exploitability_decrease.unwrap_or(f64::NAN),
            r.epsilon_decrease.unwrap_or(f64::NAN),
            r.steps_run
        );
    }
    Ok(())
}

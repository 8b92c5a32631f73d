//! Build a network game by hand, save it as JSON and evaluate payoffs.
//!
//! cargo run --example game_json

use qlnet::{Edge, JointStrategy, Matrix, NetworkGame};

fn main() -> qlnet::Result<()> {
    let pennies = Matrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]])?;
    let game = NetworkGame::new(
        vec![2, 2, 2],
        vec![
            Edge::new(0, 1, pennies.clone(), pennies.scaled(-1.0)),
            Edge::new(1, 2, pennies.clone(), pennies.scaled(-1.0)),
        ],
    )?;
    let json = game.to_json()?;
    println!("{json}");
    let back = NetworkGame::from_json(&json)?;
    let x = JointStrategy::new(vec![vec![0.7, 0.3], vec![0.5, 0.5], vec![0.2, 0.8]])?;
    for k in 0..back.num_agents() {
        println!("agent {k}: r = {:?}, u = {:.3}", back.reward_vector(k, &x)?, back.payoff(k, &x)?);
    }
    Ok(())
}

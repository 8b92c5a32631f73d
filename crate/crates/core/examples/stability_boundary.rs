//! Empirical stability boundary of the Shapley game against agent count,
//! next to the sufficient thresholds. The ring stays flat while the fully
//! connected network grows with N.
//!
//! cargo run --release --example stability_boundary

use qlnet::catalog::TopologyKind;
use qlnet::dynamics::UpdateOrder;
use qlnet::experiments::{stability_sweep, AlphaPolicy, GameFamily, RunSettings, SweepSpec, TSearch};

fn main() -> qlnet::Result<()> {
    for topology in [TopologyKind::Ring, TopologyKind::Full] {
        let spec = SweepSpec {
            game: GameFamily::Shapley { beta: 0.2 },
            topology,
            agents: vec![3, 6, 9],
            search: TSearch::Bisection { lo: 0.05, hi: 10.0, resolution: 0.02 },
            num_inits: 4,
            run: RunSettings {
                horizon: 20_000,
                window: 2500,
                tol: 1e-5,
                alpha: AlphaPolicy::Stable { max: 0.1 },
                order: UpdateOrder::Sequential,
            },
            seed: 0,
        };
        let table = stability_sweep(&spec)?;
        println!("{topology}");
        table.write_csv(std::io::stdout())?;
    }
    Ok(())
}

//! Sufficient exploration thresholds of the Shapley game on the three
//! network shapes, and the graph norms they are built from.
//!
//! cargo run --example network_bounds

use qlnet::catalog::{shapley_game, TopologyKind, TopologySpec};
use qlnet::spectral::{stability_report, verify_block_norm_bound};

fn main() -> qlnet::Result<()> {
    println!("{:>5} {:>3} {:>7} {:>7} {:>7} {:>7} {:>7}", "net", "N", "‖G‖∞", "‖G‖₂", "C1", "C2", "C3");
    for kind in TopologyKind::ALL {
        for n in [5, 10, 15] {
            let game = shapley_game(0.2, TopologySpec::new(kind, n))?;
            let r = stability_report(&game)?;
            println!(
                "{:>5} {:>3} {:>7.3} {:>7.3} {:>7.3} {:>7.3} {:>7.3}",
                kind.name(),
                n,
                r.norm_inf,
                r.norm_two,
                r.c1_max(),
                r.c2,
                r.c3
            );
        }
    }

    // the block norm bound behind the 2-norm condition
    let game = shapley_game(0.2, TopologySpec::star(8))?;
    let check = verify_block_norm_bound(&game)?;
    println!("\nstar(8): ‖N‖₂ = {:.4} ≤ {:.4}  ({})", check.lhs, check.rhs, check.holds);
    Ok(())
}

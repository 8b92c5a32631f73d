//! Threshold curves of the Sato game as CSV on stdout.
//!
//! cargo run --example threshold_curves > sato_curves.csv

use qlnet::catalog::TopologyKind;
use qlnet::experiments::{threshold_curves, write_curves_csv, GameFamily};

fn main() -> qlnet::Result<()> {
    let family = GameFamily::Sato { eps_x: 0.01, eps_y: -0.05 };
    let agents: Vec<usize> = (3..=15).collect();
    let rows = threshold_curves(&family, &TopologyKind::ALL, &agents)?;
    write_curves_csv(&rows, std::io::stdout())
}

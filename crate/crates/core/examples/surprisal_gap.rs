//! The largest surprisal gap on an n-action simplex, its closed form via
//! Lambert W, and the ln n bound.
//!
//! cargo run --example surprisal_gap

use qlnet::equilibria::{lambert_w, surprisal_gap, surprisal_gap_max};

fn main() -> qlnet::Result<()> {
    println!("W(1) = {:.12}, W(e) = {:.12}", lambert_w(1.0)?, lambert_w(std::f64::consts::E)?);
    println!("{:>3} {:>10} {:>10} {:>10} {:>8}", "n", "max A", "A(x*)", "ln n", "x*_i");
    for n in 2..=10 {
        let m = surprisal_gap_max(n)?;
        let x = m.maximizer(n, 0);
        println!(
            "{n:>3} {:>10.6} {:>10.6} {:>10.6} {:>8.4}",
            m.value,
            surprisal_gap(&x)?,
            (n as f64).ln(),
            m.vertex_probability
        );
    }
    Ok(())
}

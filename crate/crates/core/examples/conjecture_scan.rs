//! Scan of the side-ordering chain over scalene triangles.
//!
//! Apex positions `(x, y)` over the unit base cover every scalene similarity
//! class once. Each triangle is solved with Dirichlet data on its shortest,
//! middle and longest side (and pairs of sides); any violated check would be a
//! counterexample candidate. Pass `full` for the default 10 x 10 grid.
//!
//! ```text
//! cargo run --release --example conjecture_scan [full]
//! ```

use trimix::verifier::{cmd_conjecture, ConjectureGrid, RunOptions};
use trimix::Result;

fn main() -> Result<()> {
    let full = std::env::args().any(|a| a == "full");
    let grid = if full {
        ConjectureGrid::default()
    } else {
        ConjectureGrid {
            nx: 4,
            ny: 4,
            margin: 0.08,
            ..ConjectureGrid::default()
        }
    };
    let report = cmd_conjecture(&grid, &RunOptions::default())?;
    println!("{}", report.domain);
    for (k, v) in report.params.iter().filter(|(k, _)| !k.starts_with('c')) {
        println!("  {k} = {v}");
    }
    for n in report.notes.iter().filter(|n| n.starts_with("counterexample") || n.starts_with("inconclusive")) {
        println!("  {n}");
    }
    let c = report.counts();
    println!("{} verified, {} inconclusive, {} violated", c.verified, c.inconclusive, c.violated);
    Ok(())
}

//! Ordering of the nine mixed eigenvalues of right triangles.
//!
//! For each leg ratio `b` the triangle `(0,0), (1,0), (0,b)` is solved with
//! every Dirichlet/Neumann combination on its sides and the ordering chain is
//! checked with error-bar-aware statuses. The last two values straddle and hit
//! the half-equilateral case where `lambda^M` and `mu2` swap.
//!
//! ```text
//! cargo run --release --example ordering_chain [b ...]
//! ```

use trimix::verifier::{cmd_order, RunOptions, Status};
use trimix::Result;

fn main() -> Result<()> {
    let mut bs: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if bs.is_empty() {
        bs = vec![0.9, 0.7, 0.5, 1.0 / 3f64.sqrt(), 0.45, 1.0];
    }
    let opts = RunOptions::default();
    for b in bs {
        let report = cmd_order(b, &opts)?;
        println!("b = {b:.6}  alpha = {:.6}", report.params["alpha"]);
        for c in &report.checks {
            let mark = match c.status {
                Status::Verified => "ok",
                Status::Inconclusive => "??",
                Status::Violated => "XX",
            };
            println!("  {mark} {:<26} margin {:>10.4}  bars {:.1e}", c.name, c.margin, c.bars());
        }
        for n in &report.notes {
            println!("  note: {n}");
        }
    }
    Ok(())
}

//! Explicit eigenvalue bounds against computed eigenvalues.
//!
//! Sweeps leg ratios `b` for the rhombus lower bound and the right triangle
//! upper bound, half-heights `h` for the obtuse isosceles upper bound, and
//! half-apex angles for the obtuse/acute isosceles comparison.
//!
//! ```text
//! cargo run --release --example explicit_bounds
//! ```

use trimix::analysis::{bound_hooker_protter, bound_isosceles_upper, bound_obtuse_upper};
use trimix::verifier::{cmd_bounds, BoundsGrid, RunOptions};
use trimix::Result;

fn main() -> Result<()> {
    println!("   b      rhombus lower     triangle upper");
    for i in 1..=10 {
        let b = i as f64 / 10.0;
        println!("  {b:.1}  {:>14.6}  {:>16.6}", bound_hooker_protter(b)?, bound_isosceles_upper(b)?);
    }
    println!("   h      test value       bound");
    for h in [0.3, 0.5, 0.6, std::f64::consts::FRAC_1_SQRT_2] {
        let (test, bound) = bound_obtuse_upper(h)?;
        println!("  {h:.4}  {test:>12.6}  {bound:>12.6}");
    }

    let report = cmd_bounds(&BoundsGrid::default(), &RunOptions::default())?;
    for c in &report.checks {
        println!("{c}");
    }
    let c = report.counts();
    println!("{} verified, {} inconclusive, {} violated", c.verified, c.inconclusive, c.violated);
    Ok(())
}

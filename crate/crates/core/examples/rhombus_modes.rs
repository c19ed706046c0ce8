//! Symmetry classes of low rhombus modes.
//!
//! The rhombus is meshed from four reflected copies of its quarter triangle so
//! that reflections across both diagonals are exact vertex permutations. Each
//! mode is classified by its parity across the long and the short diagonal,
//! and the class eigenvalues are matched with mixed problems on the quarter.
//!
//! ```text
//! cargo run --release --example rhombus_modes [angle ...]
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use trimix::verifier::{cmd_rhombus, RunOptions};
use trimix::Result;

fn main() -> Result<()> {
    let mut angles: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if angles.is_empty() {
        angles = vec![1.4, FRAC_PI_3, 1.0, FRAC_PI_2];
    }
    for angle in angles {
        let r = cmd_rhombus(angle, &RunOptions::default())?;
        println!("smallest angle {angle:.6}");
        for label in ["mu2", "mu3", "mu4", "mu5", "lambda1", "lambda2"] {
            if let Some(e) = r.estimate(label) {
                println!("  {label:<8} {:>12.6} +- {:.1e}", e.value, e.error_bar);
            }
        }
        for n in r.notes.iter().filter(|n| n.contains("class") || n.contains("cluster")) {
            println!("  {n}");
        }
        let c = r.counts();
        println!("  checks: {} verified, {} inconclusive, {} violated", c.verified, c.inconclusive, c.violated);
    }
    Ok(())
}

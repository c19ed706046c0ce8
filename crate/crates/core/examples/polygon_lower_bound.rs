//! Second Neumann eigenvalue of convex polygons against mixed problems with
//! `n` consecutive Dirichlet sides, for polygons with `2n+1` or `2n+2` sides.
//!
//! ```text
//! cargo run --release --example polygon_lower_bound
//! ```

use trimix::geometry::{apex_triangle, regular_polygon, trapezium_fixture, unit_square};
use trimix::verifier::{cmd_polygon_lb, RunOptions};
use trimix::Result;

fn main() -> Result<()> {
    let opts = RunOptions::default();
    let cases = [
        ("scalene triangle", apex_triangle(0.3, 0.6)?.to_polygon(), 1),
        ("unit square", unit_square(), 1),
        ("trapezium", trapezium_fixture(), 1),
        ("regular pentagon", regular_polygon(5)?, 2),
        ("regular hexagon", regular_polygon(6)?, 2),
        ("regular heptagon", regular_polygon(7)?, 3),
    ];
    for (name, polygon, n) in cases {
        let r = cmd_polygon_lb(&polygon, name, n, &opts)?;
        let mu2 = r.estimate("mu2").expect("solved");
        let min = r.estimate("min lambda1^D").expect("solved");
        println!(
            "{name:<18} n={n}  min lambda1^D {:>10.5}  mu2 {:>10.5}  status {}",
            min.value,
            mu2.value,
            r.checks[0].status
        );
    }
    Ok(())
}

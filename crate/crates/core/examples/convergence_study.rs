//! Convergence of eigenvalues under uniform refinement.
//!
//! Prints per-level values, successive differences, the observed order `p`
//! in `lambda_l = lambda + C 4^(-p l)` and the extrapolated value for a few
//! mixed problems on the right triangle with `b = 1/2`. Corners where a
//! Dirichlet side meets a Neumann side at a wide angle converge more slowly.
//!
//! ```text
//! cargo run --release --example convergence_study
//! ```

use trimix::eigensolver::{estimate_index, solve_sequence, SolverOptions};
use trimix::geometry::{classify_sides, right_triangle, DEFAULT_TIE_TOL};
use trimix::Result;

fn main() -> Result<()> {
    let t = right_triangle(0.5)?;
    let sides = classify_sides(&t, DEFAULT_TIE_TOL);
    let opts = SolverOptions::default();
    for (dirichlet, index, label) in [("", 1, "mu2"), ("S", 0, "lambda^S"), ("L", 0, "lambda^L"), ("LMS", 0, "lambda1")] {
        let spectra = solve_sequence(&t.to_polygon(), &sides.boundary(dirichlet)?, 2, 6, index + 1, &opts)?;
        let e = estimate_index(&spectra, index);
        println!("{label}");
        let mut previous: Option<f64> = None;
        for (s, v) in spectra.iter().zip(&e.per_level) {
            let diff = previous.map_or(String::new(), |p| format!("{:.3e}", p - v));
            println!("  level {}  dofs {:>6}  {v:.10}  {diff}", s.level, s.pairs[index].vector.len());
            previous = Some(*v);
        }
        println!(
            "  extrapolated {:.10} +- {:.1e}  observed order {}",
            e.value,
            e.error_bar,
            e.observed_order.map_or("-".into(), |p| format!("{p:.3}"))
        );
    }
    Ok(())
}

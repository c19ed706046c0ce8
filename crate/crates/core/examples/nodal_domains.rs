//! Nodal domains of computed eigenfunctions.
//!
//! First mixed eigenfunctions have one sign, the second Neumann eigenfunction
//! has two nodal domains. Higher Dirichlet modes of the square have crossing
//! nodal lines; the mesh is not symmetric under every symmetry of the square,
//! so a discrete zero set can reconnect at a crossing and give a smaller count
//! than the continuum mode.
//!
//! ```text
//! cargo run --release --example nodal_domains
//! ```

use trimix::analysis::{nodal_domain_count, DEFAULT_NODAL_EPS};
use trimix::eigensolver::{smallest_eigenpairs_with, SolverOptions};
use trimix::fem::assemble;
use trimix::geometry::{classify_sides, right_triangle, unit_square, BoundarySpec, DEFAULT_TIE_TOL};
use trimix::mesh::{refine_to, triangulate};
use trimix::Result;

fn main() -> Result<()> {
    let opts = SolverOptions::default();
    let t = right_triangle(0.6)?;
    let sides = classify_sides(&t, DEFAULT_TIE_TOL);
    let mesh = refine_to(&triangulate(&t.to_polygon())?, 5);
    for dirichlet in ["", "S", "M", "L", "MS", "LS", "LM", "LMS"] {
        let sys = assemble(&mesh, &sides.boundary(dirichlet)?)?;
        let index = usize::from(dirichlet.is_empty());
        let spectrum = smallest_eigenpairs_with(&sys, index + 1, &opts)?;
        let pair = &spectrum.pairs[index];
        let count = nodal_domain_count(&mesh, &pair.vector, DEFAULT_NODAL_EPS)?;
        let name = if dirichlet.is_empty() { "mu2".to_string() } else { format!("lambda^{dirichlet}") };
        println!("{name:<10} {:>12.6}  nodal domains {count}", pair.value);
    }

    println!("unit square, Dirichlet");
    let mesh = refine_to(&triangulate(&unit_square())?, 5);
    let sys = assemble(&mesh, &BoundarySpec::dirichlet(4))?;
    let spectrum = smallest_eigenpairs_with(&sys, 6, &opts)?;
    for (i, pair) in spectrum.pairs.iter().enumerate() {
        let count = nodal_domain_count(&mesh, &pair.vector, DEFAULT_NODAL_EPS)?;
        println!("  #{i} {:>12.6}  nodal domains {count}", pair.value);
    }
    Ok(())
}

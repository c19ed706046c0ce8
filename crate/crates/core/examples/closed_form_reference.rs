//! Finite element eigenvalues against exact lattice spectra.
//!
//! Solves the right isosceles, half-equilateral and equilateral triangles on a
//! sequence of uniform refinements, extrapolates, and prints the relative
//! error against the closed-form values.
//!
//! ```text
//! cargo run --release --example closed_form_reference
//! ```

use std::f64::consts::PI;

use trimix::analysis::{closed_form, ReferenceBc, ReferenceDomain};
use trimix::eigensolver::{estimate_index, solve_sequence, SolverOptions};
use trimix::geometry::{classify_sides, regular_polygon, right_triangle, SideLabel, DEFAULT_TIE_TOL};
use trimix::Result;

fn main() -> Result<()> {
    let opts = SolverOptions::default();
    let (start, levels) = (2, 5);

    println!("right isosceles triangle, legs 1");
    let t = right_triangle(1.0)?;
    let sides = classify_sides(&t, DEFAULT_TIE_TOL);
    for (dirichlet, reference, count) in [
        ("", ReferenceBc::Neumann, 3),
        ("L", ReferenceBc::DirichletOn(vec![SideLabel::L]), 2),
        ("LMS", ReferenceBc::Dirichlet, 2),
    ] {
        let exact = closed_form(ReferenceDomain::RightIsosceles, &reference, count)?;
        let spectra = solve_sequence(&t.to_polygon(), &sides.boundary(dirichlet)?, start, levels, count, &opts)?;
        for (i, want) in exact.values.iter().enumerate() {
            let e = estimate_index(&spectra, i);
            println!(
                "  D={dirichlet:<3} #{i}  fem {:>12.6} +- {:.1e}  exact {:>12.6} ({:.3} pi^2)  rel err {:.2e}",
                e.value,
                e.error_bar,
                want,
                want / (PI * PI),
                rel(e.value, *want)
            );
        }
    }

    println!("half-equilateral triangle, hypotenuse 1");
    let half = right_triangle(1.0 / 3f64.sqrt())?.scaled(3f64.sqrt() / 2.0)?;
    let sides = classify_sides(&half, DEFAULT_TIE_TOL);
    for (dirichlet, reference) in [("", ReferenceBc::Neumann), ("M", ReferenceBc::DirichletOn(vec![SideLabel::M]))] {
        let exact = closed_form(ReferenceDomain::HalfEquilateral, &reference, 2)?;
        let index = usize::from(dirichlet.is_empty());
        let spectra = solve_sequence(&half.to_polygon(), &sides.boundary(dirichlet)?, start, levels, index + 1, &opts)?;
        let e = estimate_index(&spectra, index);
        let want = exact.values[index];
        println!(
            "  D={dirichlet:<3} #{index}  fem {:>12.6} +- {:.1e}  exact {:>12.6} (16 pi^2/9 = {:.6})  rel err {:.2e}",
            e.value,
            e.error_bar,
            want,
            16.0 * PI * PI / 9.0,
            rel(e.value, want)
        );
    }

    println!("equilateral triangle, side 1");
    let tri = regular_polygon(3)?;
    let side = tri.side_length(0);
    let exact = closed_form(ReferenceDomain::Equilateral { side }, &ReferenceBc::Neumann, 4)?;
    let spectra = solve_sequence(&tri, &trimix::geometry::BoundarySpec::neumann(3), start, levels, 4, &opts)?;
    for (i, want) in exact.values.iter().enumerate().skip(1) {
        let e = estimate_index(&spectra, i);
        println!("  N #{i}  fem {:>12.6} +- {:.1e}  exact {:>12.6}  rel err {:.2e}", e.value, e.error_bar, want, rel(e.value, *want));
    }
    Ok(())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

//! Extrapolated finite element eigenvalues against exact spectra computed by
//! lattice enumeration.

use std::f64::consts::PI;

use trimix::analysis::{closed_form, ReferenceBc, ReferenceDomain};
use trimix::eigensolver::{estimate_index, solve_sequence, SolverOptions};
use trimix::fem::interval_system;
use trimix::geometry::{
    classify_sides, regular_polygon, right_triangle, BoundarySpec, SideLabel, Triangle, DEFAULT_TIE_TOL,
};
use trimix::eigensolver::smallest_eigenpairs;

const START: usize = 2;
const LEVELS: usize = 5;

fn half_equilateral() -> Triangle {
    right_triangle(1.0 / 3f64.sqrt()).unwrap().scaled(3f64.sqrt() / 2.0).unwrap()
}

fn fem(t: &Triangle, dirichlet: &str, count: usize) -> Vec<(f64, f64)> {
    let bc = classify_sides(t, DEFAULT_TIE_TOL).boundary(dirichlet).unwrap();
    let spectra = solve_sequence(&t.to_polygon(), &bc, START, LEVELS, count, &SolverOptions::default()).unwrap();
    (0..count)
        .map(|i| {
            let e = estimate_index(&spectra, i);
            (e.value, e.error_bar)
        })
        .collect()
}

fn assert_close(computed: (f64, f64), exact: f64, rel: f64) {
    let (value, bar) = computed;
    let err = (value - exact).abs();
    assert!(err <= rel * exact.abs().max(1.0), "{value} vs {exact}: error {err}");
    // the error bar must cover the true error up to the verification factor
    assert!(err <= 3.0 * bar + 1e-9, "{value} vs {exact}: error {err} exceeds 3 x bar {bar}");
}

#[test]
fn right_isosceles_neumann() {
    let t = right_triangle(1.0).unwrap();
    let exact = closed_form(ReferenceDomain::RightIsosceles, &ReferenceBc::Neumann, 4).unwrap().values;
    let got = fem(&t, "", 4);
    for i in 1..4 {
        assert_close(got[i], exact[i], 1e-4);
    }
    assert!(got[0].0.abs() < 1e-8);
}

#[test]
fn right_isosceles_mixed_and_dirichlet() {
    let t = right_triangle(1.0).unwrap();
    for (d, bc) in [
        ("L", ReferenceBc::DirichletOn(vec![SideLabel::L])),
        ("LMS", ReferenceBc::Dirichlet),
    ] {
        let exact = closed_form(ReferenceDomain::RightIsosceles, &bc, 2).unwrap().values;
        let got = fem(&t, d, 2);
        for i in 0..2 {
            assert_close(got[i], exact[i], 1e-4);
        }
    }
}

#[test]
fn half_equilateral_reductions() {
    let t = half_equilateral();
    for (d, bc, index) in [
        ("", ReferenceBc::Neumann, 1),
        ("M", ReferenceBc::DirichletOn(vec![SideLabel::M]), 0),
        ("LMS", ReferenceBc::Dirichlet, 0),
    ] {
        let exact = closed_form(ReferenceDomain::HalfEquilateral, &bc, index + 1).unwrap().values;
        let got = fem(&t, d, index + 1);
        assert_close(got[index], exact[index], 1e-4);
    }
}

#[test]
fn half_equilateral_with_dirichlet_on_hypotenuse_and_short_leg() {
    // unfolding across the long leg gives the unit equilateral triangle with
    // Dirichlet data on all three sides, restricted to symmetric modes
    let got = fem(&half_equilateral(), "LS", 1)[0];
    let exact = closed_form(ReferenceDomain::Equilateral { side: 1.0 }, &ReferenceBc::Dirichlet, 1).unwrap().values[0];
    assert_close(got, exact, 1e-4);
    assert!((exact - 16.0 * PI * PI / 3.0).abs() < 1e-9);
}

#[test]
fn equilateral_double_eigenvalue() {
    let p = regular_polygon(3).unwrap();
    let side = p.side_length(0);
    let exact = closed_form(ReferenceDomain::Equilateral { side }, &ReferenceBc::Neumann, 4).unwrap().values;
    let spectra = solve_sequence(&p, &BoundarySpec::neumann(3), START, LEVELS, 4, &SolverOptions::default()).unwrap();
    for (i, &x) in exact.iter().enumerate().take(4).skip(1) {
        let e = estimate_index(&spectra, i);
        assert_close((e.value, e.error_bar), x, 1e-4);
    }
    let (a, b) = (estimate_index(&spectra, 1), estimate_index(&spectra, 2));
    assert!((a.value - b.value).abs() < 1e-6 * a.value);
}

#[test]
fn interval_spectrum() {
    let sys = interval_system(2.0, 400).unwrap();
    let spectrum = smallest_eigenpairs(&sys, 4, 1e-10).unwrap();
    let exact = closed_form(ReferenceDomain::Interval { length: 2.0 }, &ReferenceBc::Neumann, 4).unwrap().values;
    for (p, e) in spectrum.pairs.iter().zip(&exact) {
        assert!((p.value - e).abs() <= 1e-4 * e.max(1.0), "{} vs {e}", p.value);
    }
}

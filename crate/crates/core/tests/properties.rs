//! Invariants over randomly drawn triangles, boundary conditions and checks.

use proptest::prelude::*;

use trimix::analysis::{nodal_domain_count, DEFAULT_NODAL_EPS};
use trimix::eigensolver::{smallest_eigenpairs, Estimate};
use trimix::fem::assemble;
use trimix::geometry::{apex_triangle, BoundarySpec, Condition, Triangle};
use trimix::mesh::{refine_to, refine_uniform, triangulate_triangle, Mesh};
use trimix::verifier::{canon, cmd_order, InequalityCheck, Relation, RunOptions, VerificationReport};

const TOL: f64 = 1e-10;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn triangle() -> impl Strategy<Value = Triangle> {
    (0.05f64..0.95, 0.15f64..1.5).prop_map(|(x, y)| apex_triangle(x, y).unwrap())
}

fn mask(bits: u8) -> BoundarySpec {
    BoundarySpec {
        conditions: (0..3)
            .map(|i| if bits & (1 << i) != 0 { Condition::Dirichlet } else { Condition::Neumann })
            .collect(),
    }
}

/// First eigenvalue, or the first nonzero one for pure Neumann data.
fn first(mesh: &Mesh, bc: &BoundarySpec) -> (f64, trimix::fem::FEFunction) {
    let sys = assemble(mesh, bc).unwrap();
    let index = usize::from(bc.is_all_neumann());
    let s = smallest_eigenpairs(&sys, index + 1, TOL).unwrap();
    let p = &s.pairs[index];
    (p.value, p.vector.clone())
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn more_dirichlet_sides_never_lower_the_first_eigenvalue(t in triangle(), small in 1u8..8, extra in 0u8..8) {
        let mesh = refine_to(&triangulate_triangle(&t), 3);
        let (d1, d2) = (mask(small), mask(small | extra));
        prop_assert!(d1.is_subset_of(&d2));
        let (l1, _) = first(&mesh, &d1);
        let (l2, _) = first(&mesh, &d2);
        prop_assert!(l1 <= l2 * (1.0 + 1e-9), "{} > {}", l1, l2);
    }

    #[test]
    fn first_mixed_modes_have_one_sign_and_mu2_two_domains(t in triangle(), bits in 0u8..8) {
        let mesh = refine_to(&triangulate_triangle(&t), 4);
        let bc = mask(bits);
        let (_, u) = first(&mesh, &bc);
        let count = nodal_domain_count(&mesh, &u, DEFAULT_NODAL_EPS).unwrap();
        let expected = if bc.is_all_neumann() { 2 } else { 1 };
        prop_assert_eq!(count, expected);
    }

    #[test]
    fn refinement_never_raises_eigenvalues(t in triangle(), bits in 0u8..8) {
        let bc = mask(bits);
        let mut mesh = refine_to(&triangulate_triangle(&t), 1);
        let index = usize::from(bc.is_all_neumann());
        let mut previous = f64::INFINITY;
        for _ in 0..4 {
            let sys = assemble(&mesh, &bc).ok().filter(|s| s.dimension() > index);
            if let Some(sys) = sys {
                let s = smallest_eigenpairs(&sys, index + 1, TOL).unwrap();
                let v = s.pairs[index].value;
                prop_assert!(v <= previous * (1.0 + 1e-9), "{} > {}", v, previous);
                previous = v;
            }
            mesh = refine_uniform(&mesh);
        }
    }

    #[test]
    fn eigenvalues_scale_with_inverse_area(t in triangle(), c in 0.3f64..3.0, bits in 0u8..8) {
        let bc = mask(bits);
        let m1 = refine_to(&triangulate_triangle(&t), 3);
        let m2 = refine_to(&triangulate_triangle(&t.scaled(c).unwrap()), 3);
        let (a, _) = first(&m1, &bc);
        let (b, _) = first(&m2, &bc);
        prop_assert!((a - b * c * c).abs() <= 1e-7 * a, "{} vs {}", a, b * c * c);
    }

    #[test]
    fn order_reports_are_byte_identical_on_repeat(b in 0.3f64..0.95) {
        let opts = RunOptions { levels: Some(2), ..RunOptions::default() };
        let x = cmd_order(b, &opts).unwrap().to_json().unwrap();
        let y = cmd_order(b, &opts).unwrap().to_json().unwrap();
        prop_assert_eq!(x, y);
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn statuses_survive_a_json_round_trip(
        l in -1e3f64..1e3, r in -1e3f64..1e3, lb in 0.0f64..10.0, rb in 0.0f64..10.0, rel in 0usize..3
    ) {
        let relation = [Relation::Less, Relation::LessEq, Relation::Equal][rel];
        let est = |v: f64, bar: f64| Estimate { error_bar: bar, ..Estimate::exact(v) };
        let mut report = VerificationReport::new("random", vec![]);
        report.add_estimate("l", &est(l, lb));
        report.add_estimate("r", &est(r, rb));
        report.check("l ? r", "l", relation, "r").unwrap();
        let back = VerificationReport::from_json(&report.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.checks[0].reevaluate(), report.checks[0].status);
        let direct = InequalityCheck::new("x", relation, ("l", &est(canon(l), canon(lb))), ("r", &est(canon(r), canon(rb))));
        prop_assert_eq!(direct.status, report.checks[0].status);
    }

    #[test]
    fn canonical_floats_are_fixed_points(x in proptest::num::f64::NORMAL) {
        let c = canon(x);
        prop_assert_eq!(canon(c), c);
        prop_assert!((c - x).abs() <= 1e-14 * x.abs());
        let text = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<f64>(&text).unwrap(), c);
    }
}

#[test]
fn order_tables_vary_continuously_in_the_angle() {
    let opts = RunOptions {
        levels: Some(3),
        ..RunOptions::default()
    };
    let a = cmd_order(0.70, &opts).unwrap();
    let b = cmd_order(0.701, &opts).unwrap();
    for (x, y) in a.table.iter().zip(&b.table) {
        assert_eq!(x.label, y.label);
        let scale = x.extrapolated.abs().max(1.0);
        assert!((x.extrapolated - y.extrapolated).abs() < 0.01 * scale, "{}: {} vs {}", x.label, x.extrapolated, y.extrapolated);
    }
}

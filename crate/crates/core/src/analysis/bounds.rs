//! Explicit eigenvalue bounds for right triangles and isosceles triangles,
//! together with the test functions that produce them.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{Point2, H_SATURATION};

fn check_b(b: f64) -> Result<()> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::InvalidArgument(format!("b must lie in (0, 1], got {b}")));
    }
    Ok(())
}

/// Lower bound `pi^2 (1+b)^2 / (4 b^2)` for the Dirichlet ground state of the
/// rhombus built from four copies of the right triangle with legs 1 and `b`.
pub fn bound_hooker_protter(b: f64) -> Result<f64> {
    check_b(b)?;
    Ok(PI * PI * (1.0 + b).powi(2) / (4.0 * b * b))
}

/// Upper bound for the second Neumann eigenvalue of the right triangle
/// `(0,0), (1,0), (0,b)`: the Rayleigh quotient of [`isobound_test_function`].
pub fn bound_isosceles_upper(b: f64) -> Result<f64> {
    check_b(b)?;
    let pi2 = PI * PI;
    let d = (b - 1.0).powi(2);
    Ok((3.0 * pi2 * (d + 2.0) * (b * b + 1.0) - 64.0 * d * (b + 1.0)) / (3.0 * b * b * (d + 4.0)))
}

/// `9 pi^2 b^2 - (256 + 6 pi^2) b + 21 pi^2 - 256`.
pub fn gap_quadratic(b: f64) -> f64 {
    let pi2 = PI * PI;
    9.0 * pi2 * b * b - (256.0 + 6.0 * pi2) * b + 21.0 * pi2 - 256.0
}

/// Closed form of `bound_isosceles_upper(b) - bound_hooker_protter(b)`.
pub fn gap_closed_form(b: f64) -> f64 {
    let d = (b - 1.0).powi(2);
    d * gap_quadratic(b) / (12.0 * b * b * (d + 4.0))
}

/// Absolute difference between the directly computed gap and its closed form,
/// relative to the size of the bounds.
pub fn gap_identity_residual(b: f64) -> Result<f64> {
    let iso = bound_isosceles_upper(b)?;
    let hp = bound_hooker_protter(b)?;
    Ok(((iso - hp) - gap_closed_form(b)).abs() / hp)
}

/// Mean-zero test function `phi1(x, y/b) - (1-b) phi2(x, y/b)` on the right
/// triangle `(0,0), (1,0), (0,b)`, where `phi1 = cos(pi y) - cos(pi x)` and
/// `phi2 = cos(pi x) cos(pi y)`.
pub fn isobound_test_function(b: f64) -> impl Fn(Point2) -> f64 {
    move |p: Point2| {
        let (x, y) = (PI * p.x, PI * p.y / b);
        (y.cos() - x.cos()) - (1.0 - b) * x.cos() * y.cos()
    }
}

/// Pair `((pi^2 + 16h^2 - 8) / (4h^2(1-h^2)), pi^2 / (4h^2(1-h^2)))`: the
/// Rayleigh quotient of the stretched test function on the obtuse isosceles
/// triangle and the bound it implies. Equal exactly when `h^2 = 1/2`.
pub fn bound_obtuse_upper(h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && h <= H_SATURATION * (1.0 + 1e-15)) {
        return Err(Error::InvalidArgument(format!("h must lie in (0, 1/sqrt 2], got {h}")));
    }
    let pi2 = PI * PI;
    let den = 4.0 * h * h * (1.0 - h * h);
    Ok(((pi2 + 16.0 * h * h - 8.0) / den, pi2 / den))
}

/// `sin(pi x / (2 sqrt(1-h^2))) cos(pi y / (2h))` on the obtuse isosceles
/// triangle `(+-sqrt(1-h^2), 0), (0, h)`.
pub fn obtuse_test_function(h: f64) -> impl Fn(Point2) -> f64 {
    let c = (1.0 - h * h).sqrt();
    move |p: Point2| (PI * p.x / (2.0 * c)).sin() * (PI * p.y / (2.0 * h)).cos()
}

/// Lower bound `pi^2 / (4h^2)` on `int u_y^2 / int u^2` for functions odd in y
/// on the acute isosceles triangle with half-height `h`.
pub fn interval_bound(h: f64) -> f64 {
    PI * PI / (4.0 * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hooker_protter_values() {
        assert_relative_eq!(bound_hooker_protter(1.0).unwrap(), PI * PI);
        assert_relative_eq!(bound_hooker_protter(0.5).unwrap(), 9.0 * PI * PI / 4.0, max_relative = 1e-15);
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        assert!(grid
            .windows(2)
            .all(|w| bound_hooker_protter(w[0]).unwrap() > bound_hooker_protter(w[1]).unwrap()));
        assert!(bound_hooker_protter(0.0).is_err());
        assert!(bound_hooker_protter(1.1).is_err());
    }

    #[test]
    fn isobound_values() {
        assert_relative_eq!(bound_isosceles_upper(1.0).unwrap(), PI * PI, max_relative = 1e-15);
        // independent symbolic evaluation of the test-function quotient
        assert_relative_eq!(bound_isosceles_upper(0.3).unwrap(), 32.659_638_6, max_relative = 1e-8);
        assert_relative_eq!(bound_isosceles_upper(0.5).unwrap(), 18.596_011_6, max_relative = 1e-8);
        assert_relative_eq!(bound_isosceles_upper(0.8).unwrap(), 12.176_573_5, max_relative = 1e-8);
    }

    #[test]
    fn gap_identity_on_fine_grid() {
        for i in 1..=1000 {
            let b = i as f64 / 1000.0;
            assert!(gap_identity_residual(b).unwrap() <= 1e-12, "b = {b}");
        }
    }

    #[test]
    fn quadratic_factor_is_negative_inside() {
        for i in 1..1000 {
            let b = i as f64 / 1000.0;
            assert!(gap_quadratic(b) < 0.0, "b = {b}");
        }
        assert!(gap_quadratic(1e-9) < 0.0);
        assert!(gap_quadratic(1.0 - 1e-9) < 0.0);
    }

    #[test]
    fn obtuse_bound_pair() {
        let (a, b) = bound_obtuse_upper(H_SATURATION).unwrap();
        assert_relative_eq!(a, PI * PI, max_relative = 1e-12);
        assert_relative_eq!(b, PI * PI, max_relative = 1e-12);
        let (a, b) = bound_obtuse_upper(0.5).unwrap();
        assert_relative_eq!(a, (PI * PI - 4.0) / 0.75, max_relative = 1e-15);
        assert_relative_eq!(b, PI * PI / 0.75, max_relative = 1e-15);
        for i in 1..700 {
            let h = i as f64 / 1000.0;
            let (a, b) = bound_obtuse_upper(h).unwrap();
            assert!(a < b);
        }
        assert!(bound_obtuse_upper(0.72).is_err());
        assert!(bound_obtuse_upper(0.0).is_err());
    }

    #[test]
    fn test_functions_vanish_where_expected() {
        let f = obtuse_test_function(0.5);
        assert_relative_eq!(f(Point2::new(0.0, 0.3)), 0.0);
        let g = isobound_test_function(1.0);
        // antisymmetric under x <-> y for the isosceles case
        let (p, q) = (Point2::new(0.2, 0.5), Point2::new(0.5, 0.2));
        assert_relative_eq!(g(p), -g(q), epsilon = 1e-15);
    }
}

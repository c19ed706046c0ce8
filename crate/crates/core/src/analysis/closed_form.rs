//! Exact spectra of domains whose eigenfunctions are trigonometric: the right
//! isosceles triangle (folded square modes), the equilateral triangle and its
//! half (Lamé modes), and the interval.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SideLabel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ReferenceDomain {
    /// Legs of length 1, as produced by `right_triangle(1.0)`.
    RightIsosceles,
    Equilateral { side: f64 },
    /// Half of the unit equilateral triangle: hypotenuse 1, legs 1/2 and sqrt(3)/2.
    HalfEquilateral,
    Interval { length: f64 },
}

/// Boundary condition for a reference spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceBc {
    Neumann,
    Dirichlet,
    /// Dirichlet on the listed sides, Neumann on the rest.
    DirichletOn(Vec<SideLabel>),
}

impl ReferenceBc {
    /// Collapses side lists that cover everything or nothing.
    fn normalized(&self) -> ReferenceBc {
        match self {
            ReferenceBc::DirichletOn(sides) => {
                let mut s = sides.clone();
                s.sort();
                s.dedup();
                match s.len() {
                    0 => ReferenceBc::Neumann,
                    3 => ReferenceBc::Dirichlet,
                    _ => ReferenceBc::DirichletOn(s),
                }
            }
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSpectrum {
    pub domain: ReferenceDomain,
    pub bc: ReferenceBc,
    /// Ascending, repeated according to multiplicity.
    pub values: Vec<f64>,
}

/// Lattice description of a spectrum: `scale * q(m, n)` over admissible pairs,
/// each pair counted `weight(m, n)` times.
struct Lattice {
    scale: f64,
    q: fn(u64, u64) -> u64,
    /// Multiplicity of the pair, 0 when not admissible.
    weight: fn(u64, u64) -> usize,
}

fn square_q(m: u64, n: u64) -> u64 {
    m * m + n * n
}

fn lame_q(m: u64, n: u64) -> u64 {
    m * m + m * n + n * n
}

/// Smallest `count` values of the lattice. All pairs with `q <= cutoff` are
/// enumerated (both `q` forms are at least `max(m, n)^2`), and the cutoff is
/// doubled until it holds `count` values, so nothing below is missed.
fn enumerate(lattice: &Lattice, count: usize) -> Vec<f64> {
    let mut cutoff: u64 = 4;
    loop {
        let bound = (cutoff as f64).sqrt() as u64 + 1;
        let mut qs: Vec<u64> = Vec::new();
        for m in 0..=bound {
            for n in 0..=bound {
                let q = (lattice.q)(m, n);
                if q <= cutoff {
                    qs.extend(std::iter::repeat_n(q, (lattice.weight)(m, n)));
                }
            }
        }
        if qs.len() >= count {
            qs.sort_unstable();
            qs.truncate(count);
            return qs.into_iter().map(|q| lattice.scale * q as f64).collect();
        }
        cutoff *= 2;
    }
}

fn unsupported(domain: ReferenceDomain, bc: &ReferenceBc, why: &str) -> Error {
    Error::Unsupported(format!("no closed form for {domain:?} with {bc:?}: {why}"))
}

pub fn closed_form(domain: ReferenceDomain, bc: &ReferenceBc, count: usize) -> Result<ClosedFormSpectrum> {
    let bc = bc.normalized();
    let pi2 = PI * PI;
    let lattice = match (domain, &bc) {
        // Square modes cos(m pi x) cos(n pi y) folded across the diagonal:
        // the symmetric fold is Neumann on the hypotenuse, the antisymmetric
        // one (m != n) Dirichlet on it.
        (ReferenceDomain::RightIsosceles, ReferenceBc::Neumann) => Lattice {
            scale: pi2,
            q: square_q,
            weight: |m, n| usize::from(m <= n),
        },
        (ReferenceDomain::RightIsosceles, ReferenceBc::Dirichlet) => Lattice {
            scale: pi2,
            q: square_q,
            weight: |m, n| usize::from(1 <= m && m < n),
        },
        (ReferenceDomain::RightIsosceles, ReferenceBc::DirichletOn(s)) if s == &[SideLabel::L] => Lattice {
            scale: pi2,
            q: square_q,
            weight: |m, n| usize::from(m < n),
        },
        (ReferenceDomain::Equilateral { side }, ReferenceBc::Neumann) => Lattice {
            scale: 16.0 * pi2 / (9.0 * side * side),
            q: lame_q,
            weight: |m, n| match m.cmp(&n) {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            },
        },
        (ReferenceDomain::Equilateral { side }, ReferenceBc::Dirichlet) => Lattice {
            scale: 16.0 * pi2 / (9.0 * side * side),
            q: lame_q,
            weight: |m, n| match (m.cmp(&n), n >= 1) {
                (std::cmp::Ordering::Greater, true) => 2,
                (std::cmp::Ordering::Equal, true) => 1,
                _ => 0,
            },
        },
        // Each Lamé pair m > n carries one mode symmetric and one antisymmetric
        // about an altitude; pairs m = n are symmetric only.
        (ReferenceDomain::HalfEquilateral, ReferenceBc::Neumann) => Lattice {
            scale: 16.0 * pi2 / 9.0,
            q: lame_q,
            weight: |m, n| usize::from(m >= n),
        },
        (ReferenceDomain::HalfEquilateral, ReferenceBc::Dirichlet) => Lattice {
            scale: 16.0 * pi2 / 9.0,
            q: lame_q,
            weight: |m, n| usize::from(m > n && n >= 1),
        },
        (ReferenceDomain::HalfEquilateral, ReferenceBc::DirichletOn(s)) if s == &[SideLabel::M] => Lattice {
            scale: 16.0 * pi2 / 9.0,
            q: lame_q,
            weight: |m, n| usize::from(m > n),
        },
        (ReferenceDomain::HalfEquilateral, ReferenceBc::DirichletOn(s)) if s == &[SideLabel::S, SideLabel::L] => {
            return Err(unsupported(
                domain,
                &bc,
                "lambda^LS of the half-equilateral triangle has no closed formula",
            ))
        }
        (ReferenceDomain::Interval { length }, ReferenceBc::Neumann) => {
            if !(length > 0.0) {
                return Err(Error::InvalidArgument(format!("interval length must be positive, got {length}")));
            }
            let values = (0..count as u64).map(|k| (k as f64 * PI / length).powi(2)).collect();
            return Ok(ClosedFormSpectrum { domain, bc, values });
        }
        _ => return Err(unsupported(domain, &bc, "mixed conditions without a trigonometric reduction")),
    };
    if let ReferenceDomain::Equilateral { side } = domain {
        if !(side > 0.0) {
            return Err(Error::InvalidArgument(format!("side must be positive, got {side}")));
        }
    }
    Ok(ClosedFormSpectrum {
        domain,
        bc,
        values: enumerate(&lattice, count),
    })
}

//! Nodal domains, symmetry classes of rhombus modes, and the energy-ratio
//! condition on acute isosceles triangles.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{energy_split, AssembledSystem, FEFunction};
use crate::mesh::{Mesh, SymmetryMap};

/// Default relative threshold below which nodal values count as zero.
pub const DEFAULT_NODAL_EPS: f64 = 1e-3;

/// Number of connected components of `{u > eps}` and `{u < -eps}` with
/// `eps = eps_rel * max|u|`, two vertices being adjacent when they share a cell.
pub fn nodal_domain_count(mesh: &Mesh, u: &FEFunction, eps_rel: f64) -> Result<usize> {
    if u.len() != mesh.vertex_count() {
        return Err(Error::InvalidArgument("function length does not match the mesh".into()));
    }
    let eps = eps_rel * u.max_abs();
    let sign: Vec<i8> = u
        .values
        .iter()
        .map(|&v| {
            if v > eps {
                1
            } else if v < -eps {
                -1
            } else {
                0
            }
        })
        .collect();
    if u.max_abs() == 0.0 || sign.iter().all(|&s| s == 0) {
        return Err(Error::ZeroFunction);
    }
    let mut uf = UnionFind::<usize>::new(mesh.vertex_count());
    for c in &mesh.cells {
        for k in 0..3 {
            let (a, b) = (c[k], c[(k + 1) % 3]);
            if sign[a] != 0 && sign[a] == sign[b] {
                uf.union(a, b);
            }
        }
    }
    let mut roots: Vec<usize> = (0..mesh.vertex_count())
        .filter(|&v| sign[v] != 0)
        .map(|v| uf.find(v))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}

/// Parity of a rhombus mode. The first letter refers to the long diagonal,
/// the second to the short one: `SA` is symmetric across the long diagonal
/// and antisymmetric across the short one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryClass {
    SS,
    SA,
    AS,
    AA,
    DegenerateCluster,
}

impl SymmetryClass {
    pub const PURE: [SymmetryClass; 4] = [SymmetryClass::SS, SymmetryClass::SA, SymmetryClass::AS, SymmetryClass::AA];

    /// Reflection signs `(long, short)` of a pure class.
    pub fn signs(self) -> Option<(f64, f64)> {
        match self {
            SymmetryClass::SS => Some((1.0, 1.0)),
            SymmetryClass::SA => Some((1.0, -1.0)),
            SymmetryClass::AS => Some((-1.0, 1.0)),
            SymmetryClass::AA => Some((-1.0, -1.0)),
            SymmetryClass::DegenerateCluster => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::SS => "SS",
            SymmetryClass::SA => "SA",
            SymmetryClass::AS => "AS",
            SymmetryClass::AA => "AA",
            SymmetryClass::DegenerateCluster => "cluster",
        }
    }
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSymmetry {
    pub class: SymmetryClass,
    /// `u^T M (u o sigma) / u^T M u` for the long and the short diagonal.
    pub scores: [f64; 2],
}

/// Score above which a mode counts as symmetric (below minus it, antisymmetric).
pub const SYMMETRY_THRESHOLD: f64 = 0.99;

fn reflection_score(sys: &AssembledSystem, u: &FEFunction, map: &SymmetryMap) -> Result<f64> {
    let x = sys.restrict(u)?;
    let y = sys.restrict(&FEFunction::new(map.pull_back(&u.values)))?;
    let norm = sys.mass_inner(&x, &x);
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(sys.mass_inner(&x, &y) / norm)
}

/// Classifies a single mode by its reflection scores.
pub fn symmetry_class(sys: &AssembledSystem, u: &FEFunction, long: &SymmetryMap, short: &SymmetryMap) -> Result<ModeSymmetry> {
    let scores = [reflection_score(sys, u, long)?, reflection_score(sys, u, short)?];
    let parity = |s: f64| {
        if s > SYMMETRY_THRESHOLD {
            Some(true)
        } else if s < -SYMMETRY_THRESHOLD {
            Some(false)
        } else {
            None
        }
    };
    let class = match (parity(scores[0]), parity(scores[1])) {
        (Some(true), Some(true)) => SymmetryClass::SS,
        (Some(true), Some(false)) => SymmetryClass::SA,
        (Some(false), Some(true)) => SymmetryClass::AS,
        (Some(false), Some(false)) => SymmetryClass::AA,
        _ => {
            return Err(Error::Classification {
                long: scores[0],
                short: scores[1],
            })
        }
    };
    Ok(ModeSymmetry { class, scores })
}

/// Dimensions of the projections of an invariant subspace onto the four
/// symmetry classes, in the order SS, SA, AS, AA.
///
/// `vectors` must be M-orthonormal. Each class projector is M-orthogonal, so
/// the Gram matrix of the projected basis has eigenvalues near 0 or 1 and its
/// trace rounds to the dimension.
pub fn cluster_symmetry(sys: &AssembledSystem, vectors: &[FEFunction], long: &SymmetryMap, short: &SymmetryMap) -> Result<[usize; 4]> {
    let mut dims = [0usize; 4];
    for (slot, class) in SymmetryClass::PURE.iter().enumerate() {
        let (sl, ss) = class.signs().expect("pure class");
        let mut trace = 0.0;
        for u in vectors {
            let a = long.pull_back(&u.values);
            let b = short.pull_back(&u.values);
            let ab = short.pull_back(&a);
            let projected: Vec<f64> = (0..u.len())
                .map(|i| 0.25 * (u.values[i] + sl * a[i] + ss * b[i] + sl * ss * ab[i]))
                .collect();
            let x = sys.restrict(u)?;
            let p = sys.restrict(&FEFunction::new(projected))?;
            trace += sys.mass_inner(&x, &p);
        }
        dims[slot] = trace.round().max(0.0) as usize;
    }
    Ok(dims)
}

/// Ratio `int u_y^2 / int u_x^2` and whether it exceeds `tan^2(beta)`.
/// A function with no x-energy has infinite ratio and satisfies the condition.
pub fn cond_ratio(mesh: &Mesh, u: &FEFunction, beta: f64) -> (f64, bool) {
    let (ex, ey) = energy_split(mesh, u);
    // rounding leaves ~1e-16 relative x-energy for functions of y alone
    if ex <= 1e-13 * (ex + ey) {
        return (f64::INFINITY, true);
    }
    let ratio = ey / ex;
    (ratio, ratio > beta.tan().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{smallest_eigenpairs, DEFAULT_TOL};
    use crate::fem::assemble;
    use crate::geometry::{acute_isosceles, right_triangle, BoundarySpec, Point2};
    use crate::mesh::{refine_to, symmetric_rhombus_mesh, triangulate_triangle};

    #[test]
    fn two_patches_give_two_domains() {
        let m = refine_to(&triangulate_triangle(&right_triangle(1.0).unwrap()), 3);
        let u = FEFunction::interpolate(&m, |p| if p.x > 0.6 { 1.0 } else if p.y > 0.6 { -1.0 } else { 0.0 });
        assert_eq!(nodal_domain_count(&m, &u, DEFAULT_NODAL_EPS).unwrap(), 2);
        let u = FEFunction::interpolate(&m, |p| if p.x > 0.6 || p.y > 0.6 { 1.0 } else { 0.0 });
        assert_eq!(nodal_domain_count(&m, &u, DEFAULT_NODAL_EPS).unwrap(), 2);
        let zero = FEFunction::new(vec![0.0; m.vertex_count()]);
        assert!(matches!(nodal_domain_count(&m, &zero, DEFAULT_NODAL_EPS), Err(Error::ZeroFunction)));
    }

    #[test]
    fn nodal_count_ignores_sign_and_scale() {
        let m = refine_to(&triangulate_triangle(&right_triangle(0.7).unwrap()), 4);
        let u = FEFunction::interpolate(&m, |p| (3.0 * p.x).sin() - 0.4);
        let n = nodal_domain_count(&m, &u, DEFAULT_NODAL_EPS).unwrap();
        let neg = FEFunction::new(u.values.iter().map(|v| -2.5 * v).collect());
        assert_eq!(nodal_domain_count(&m, &neg, DEFAULT_NODAL_EPS).unwrap(), n);
    }

    #[test]
    fn square_rhombus_modes_classify() {
        let rm = symmetric_rhombus_mesh(&right_triangle(1.0).unwrap(), 3).unwrap();
        let sys = assemble(&rm.mesh, &BoundarySpec::neumann(4)).unwrap();
        let s = smallest_eigenpairs(&sys, 4, DEFAULT_TOL).unwrap();
        // constant mode
        let c = symmetry_class(&sys, &s.pairs[0].vector, &rm.long, &rm.short).unwrap();
        assert_eq!(c.class, SymmetryClass::SS);
        let vs = vec![s.pairs[1].vector.clone(), s.pairs[2].vector.clone()];
        assert_eq!(cluster_symmetry(&sys, &vs, &rm.long, &rm.short).unwrap(), [0, 1, 1, 0]);
    }

    #[test]
    fn mixed_mode_is_rejected() {
        let rm = symmetric_rhombus_mesh(&right_triangle(0.8).unwrap(), 2).unwrap();
        let sys = assemble(&rm.mesh, &BoundarySpec::neumann(4)).unwrap();
        let u = FEFunction::interpolate(&rm.mesh, |p| 1.0 + p.x);
        assert!(matches!(
            symmetry_class(&sys, &u, &rm.long, &rm.short),
            Err(Error::Classification { .. })
        ));
    }

    #[test]
    fn cond_ratio_examples() {
        let t = acute_isosceles(0.5).unwrap();
        let m = refine_to(&triangulate_triangle(&t), 2);
        let (r, ok) = cond_ratio(&m, &FEFunction::interpolate(&m, |p: Point2| p.y), 1.0);
        assert!(r.is_infinite() && ok);
        let (r, ok) = cond_ratio(&m, &FEFunction::interpolate(&m, |p: Point2| p.x), 1.0);
        assert_eq!(r, 0.0);
        assert!(!ok);
    }
}

//! Smallest eigenpairs of `K u = lambda M u` and extrapolation across
//! refinement levels.
//!
//! Small systems are solved densely. Larger ones use a shift-invert block
//! Krylov method on a sparse `LDL^T` factor of `K + sM`; the positive shift
//! keeps pure Neumann pencils definite and is removed from the returned values.

mod dense;
mod extrapolate;
mod krylov;

pub use extrapolate::{extrapolate, extrapolate_with_residual, Estimate};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::{assemble, dot, AssembledSystem, FEFunction};
use crate::geometry::{BoundarySpec, Polygon};
use crate::mesh::{refine_to, triangulate, Mesh};

/// Default relative residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    /// Shift `s` applied as `K + sM` before factorisation.
    pub shift: f64,
    /// Systems up to this dimension are solved densely.
    pub dense_limit: usize,
    pub max_basis: usize,
    pub max_expansions: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            shift: 1.0,
            dense_limit: 400,
            max_basis: 120,
            max_expansions: 400,
            seed: 0x5eed,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// M-normalised nodal values, zero on constrained vertices.
    pub vector: FEFunction,
    /// `|Ku - lambda Mu| / (|Ku| + |lambda| |Mu|)`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending eigenpairs.
    pub pairs: Vec<EigenPair>,
    pub bc: BoundarySpec,
    pub level: usize,
}

impl Spectrum {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Makes the M-weighted mean positive, or the first significant entry for
/// mean-zero vectors.
fn fix_sign(sys: &AssembledSystem, x: &mut [f64]) {
    let ones = vec![1.0; x.len()];
    let mean = sys.mass_inner(&ones, x);
    let norm = sys.mass_inner(x, x).sqrt();
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flip = if mean.abs() > 1e-8 * norm * sys.mass_inner(&ones, &ones).sqrt() {
        mean < 0.0
    } else {
        x.iter().find(|v| v.abs() > 1e-6 * max).is_some_and(|v| *v < 0.0)
    };
    if flip {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

pub fn smallest_eigenpairs(sys: &AssembledSystem, k: usize, tol: f64) -> Result<Spectrum> {
    smallest_eigenpairs_with(sys, k, &SolverOptions::with_tol(tol))
}

pub fn smallest_eigenpairs_with(sys: &AssembledSystem, k: usize, opts: &SolverOptions) -> Result<Spectrum> {
    let n = sys.dimension();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if k > n {
        return Err(Error::Dimension {
            requested: k,
            dimension: n,
        });
    }
    let raw: Vec<(f64, Vec<f64>, f64)> = if n <= opts.dense_limit {
        dense::smallest(sys, k)?
            .into_iter()
            .map(|(value, vector)| {
                let r = krylov::residual(sys, value, &vector, opts.shift);
                (value, vector, r)
            })
            .collect()
    } else {
        let cfg = krylov::KrylovConfig {
            shift: opts.shift,
            tol: opts.tol,
            max_basis: opts.max_basis.max(3 * (k + 2)),
            max_expansions: opts.max_expansions,
            seed: opts.seed,
        };
        krylov::smallest(sys, k, &cfg)?
            .into_iter()
            .map(|p| (p.value, p.vector, p.residual))
            .collect()
    };
    let mut pairs: Vec<EigenPair> = raw
        .into_iter()
        .map(|(value, mut x, residual)| {
            let norm = sys.mass_inner(&x, &x).sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
            fix_sign(sys, &mut x);
            EigenPair {
                value,
                vector: sys.extend(&x),
                residual,
            }
        })
        .collect();
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(Spectrum {
        pairs,
        bc: sys.bc.clone(),
        level: sys.level,
    })
}

/// Solves on each mesh in order, in parallel.
pub fn solve_on_meshes(meshes: &[Mesh], bc: &BoundarySpec, k: usize, opts: &SolverOptions) -> Result<Vec<Spectrum>> {
    meshes
        .par_iter()
        .map(|m| {
            let sys = assemble(m, bc)?;
            smallest_eigenpairs_with(&sys, k, opts)
        })
        .collect()
}

/// Nested uniform refinements `start_level .. start_level + levels` of a
/// fan-triangulated convex polygon.
pub fn nested_meshes(polygon: &Polygon, start_level: usize, levels: usize) -> Result<Vec<Mesh>> {
    let base = triangulate(polygon)?;
    let mut meshes = Vec::with_capacity(levels);
    let mut current = refine_to(&base, start_level);
    for i in 0..levels {
        if i > 0 {
            current = crate::mesh::refine_uniform(&current);
        }
        meshes.push(current.clone());
    }
    Ok(meshes)
}

pub fn solve_sequence(
    polygon: &Polygon,
    bc: &BoundarySpec,
    start_level: usize,
    levels: usize,
    k: usize,
    opts: &SolverOptions,
) -> Result<Vec<Spectrum>> {
    if levels < 2 {
        return Err(Error::InvalidArgument("a refinement sequence needs at least 2 levels".into()));
    }
    let meshes = nested_meshes(polygon, start_level, levels)?;
    solve_on_meshes(&meshes, bc, k, opts)
}

/// Extrapolated estimate of eigenvalue `index` across a level sequence.
pub fn estimate_index(spectra: &[Spectrum], index: usize) -> Estimate {
    let values: Vec<f64> = spectra.iter().map(|s| s.pairs[index].value).collect();
    let last = spectra.last().map(|s| &s.pairs[index]);
    extrapolate_with_residual(&values, last.map_or(0.0, |p| p.residual * p.value.abs()))
}

/// Groups consecutive eigenvalues whose relative gap (to the larger value)
/// is below `rel_gap`.
pub fn degeneracy_clusters(spec: &Spectrum, rel_gap: f64) -> Vec<Vec<usize>> {
    cluster_values(&spec.values(), rel_gap)
}

pub fn cluster_values(values: &[f64], rel_gap: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if let Some(last) = clusters.last_mut() {
            let prev = values[*last.last().expect("clusters are nonempty")];
            let scale = prev.abs().max(v.abs());
            if (v - prev).abs() < rel_gap * scale {
                last.push(i);
                continue;
            }
        }
        clusters.push(vec![i]);
    }
    clusters
}

/// M-inner product matrix of the eigenvectors (for orthogonality checks).
pub fn gram_matrix(sys: &AssembledSystem, spec: &Spectrum) -> Result<Vec<Vec<f64>>> {
    let xs: Vec<Vec<f64>> = spec
        .pairs
        .iter()
        .map(|p| sys.restrict(&p.vector))
        .collect::<Result<_>>()?;
    Ok(xs
        .iter()
        .map(|a| {
            let ma = sys.apply_mass(a);
            xs.iter().map(|b| dot(&ma, b)).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::interval_system;
    use crate::geometry::{right_triangle, Condition};
    use crate::mesh::triangulate_triangle;
    use std::f64::consts::PI;

    fn system(level: usize, bc: &str) -> AssembledSystem {
        let m = refine_to(&triangulate_triangle(&right_triangle(0.8).unwrap()), level);
        assemble(&m, &bc.parse().unwrap()).unwrap()
    }

    #[test]
    fn sparse_path_agrees_with_dense() {
        let sys = system(4, "NND");
        let dense = smallest_eigenpairs_with(&sys, 5, &SolverOptions { dense_limit: usize::MAX, ..Default::default() }).unwrap();
        let sparse = smallest_eigenpairs_with(&sys, 5, &SolverOptions { dense_limit: 0, ..Default::default() }).unwrap();
        for (a, b) in dense.pairs.iter().zip(&sparse.pairs) {
            assert!((a.value - b.value).abs() <= 1e-9 * a.value, "{} vs {}", a.value, b.value);
            assert!(b.residual <= DEFAULT_TOL);
        }
    }

    #[test]
    fn neumann_ground_state_is_constant() {
        let sys = system(3, "NNN");
        for limit in [0, usize::MAX] {
            let s = smallest_eigenpairs_with(&sys, 3, &SolverOptions { dense_limit: limit, ..Default::default() }).unwrap();
            assert!(s.pairs[0].value.abs() <= DEFAULT_TOL);
            let v = &s.pairs[0].vector.values;
            let c = v[0];
            assert!(c > 0.0);
            assert!(v.iter().all(|x| (x - c).abs() <= 1e-8 * c));
        }
    }

    #[test]
    fn mixed_ground_state_is_positive_and_single_signed() {
        for bc in ["DNN", "NDN", "NND", "DDN", "DDD"] {
            let sys = system(4, bc);
            let s = smallest_eigenpairs(&sys, 2, DEFAULT_TOL).unwrap();
            assert!(s.pairs[0].value > 0.0);
            let free = sys.restrict(&s.pairs[0].vector).unwrap();
            assert!(free.iter().all(|&x| x > 0.0), "{bc}");
        }
    }

    #[test]
    fn interval_second_neumann_value() {
        // interval [-h, h] with h = 0.5
        let values: Vec<f64> = (3..8)
            .map(|l| {
                let sys = interval_system(1.0, 1 << l).unwrap();
                smallest_eigenpairs(&sys, 2, DEFAULT_TOL).unwrap().pairs[1].value
            })
            .collect();
        let est = extrapolate(&values);
        let exact = PI * PI / (4.0 * 0.25);
        assert!((est.value - exact).abs() <= est.error_bar.max(1e-9), "{est:?}");
    }

    #[test]
    fn vectors_are_mass_orthonormal_with_small_residuals() {
        let sys = system(5, "NNN");
        let s = smallest_eigenpairs(&sys, 6, DEFAULT_TOL).unwrap();
        let g = gram_matrix(&sys, &s).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-8);
            }
        }
        // the constant mode converges to the rounding floor of a 0/0 ratio
        assert!(s.pairs[0].value.abs() < 1e-10);
        assert!(s.pairs[1..].iter().all(|p| p.residual <= DEFAULT_TOL));
        assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn shifted_pencil_shifts_values() {
        let sys = system(4, "DNN");
        let base = smallest_eigenpairs(&sys, 4, DEFAULT_TOL).unwrap();
        let s = 3.5;
        let mut shifted = sys.clone();
        shifted.stiffness = &sys.stiffness + &sys.mass.map(|v| s * v);
        let moved = smallest_eigenpairs(&shifted, 4, DEFAULT_TOL).unwrap();
        for (a, b) in base.pairs.iter().zip(&moved.pairs) {
            assert!((b.value - a.value - s).abs() < 1e-8 * b.value);
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let sys = system(2, "DDD");
        assert!(matches!(
            smallest_eigenpairs(&sys, sys.dimension() + 1, DEFAULT_TOL),
            Err(Error::Dimension { .. })
        ));
        assert!(smallest_eigenpairs(&sys, 0, DEFAULT_TOL).is_err());
        assert!(smallest_eigenpairs(&sys, 1, 0.0).is_err());
    }

    #[test]
    fn clusters() {
        assert_eq!(cluster_values(&[1.0, 2.0, 2.0 + 1e-9, 3.0], 1e-6), vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(cluster_values(&[1.0, 1.0, 1.0], 0.0), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn constraint_monotonicity_on_one_mesh() {
        let m = refine_to(&triangulate_triangle(&right_triangle(0.7).unwrap()), 4);
        let specs = ["DNN", "DDN", "DDD"];
        let vals: Vec<f64> = specs
            .iter()
            .map(|b| {
                let bc: BoundarySpec = b.parse().unwrap();
                assert!(bc.conditions.contains(&Condition::Dirichlet));
                smallest_eigenpairs(&assemble(&m, &bc).unwrap(), 1, DEFAULT_TOL).unwrap().pairs[0].value
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }
}

//! Shift-invert block Krylov iteration with Rayleigh-Ritz extraction and
//! restarts.
//!
//! The operator is `A = (K + sM)^-1 M`, self-adjoint in the M inner product;
//! its largest eigenvalues `1 / (lambda + s)` are the wanted ones. A block of
//! random vectors is expanded with `A`, M-orthonormalised, and projected.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sprs_ldl::{Ldl, LdlNumeric};

use crate::error::{Error, Result};
use crate::fem::{dot, AssembledSystem};

pub(crate) struct KrylovConfig {
    pub shift: f64,
    pub tol: f64,
    pub max_basis: usize,
    pub max_expansions: usize,
    pub seed: u64,
}

struct ShiftInvert<'a> {
    sys: &'a AssembledSystem,
    factor: LdlNumeric<f64, usize>,
}

impl ShiftInvert<'_> {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mx = self.sys.apply_mass(x);
        self.factor.solve(&mx)
    }
}

fn factorize(sys: &AssembledSystem, shift: f64) -> Result<LdlNumeric<f64, usize>> {
    let shifted = &sys.stiffness + &sys.mass.map(|v| shift * v);
    Ldl::new()
        .fill_in_reduction(sprs::FillInReduction::ReverseCuthillMcKee)
        .check_symmetry(sprs::SymmetryCheck::DontCheckSymmetry)
        .numeric(shifted.view())
        .map_err(|e| Error::Linalg(format!("LDL factorization failed: {e:?}")))
}

/// M-orthogonalises `v` against `basis` (two passes) and normalises it.
/// Returns `None` when `v` is numerically inside the span.
fn orthonormalize(sys: &AssembledSystem, basis: &[Vec<f64>], mut v: Vec<f64>) -> Option<Vec<f64>> {
    let norm0 = sys.mass_inner(&v, &v).sqrt();
    if norm0 == 0.0 {
        return None;
    }
    for _ in 0..2 {
        let mv = sys.apply_mass(&v);
        for b in basis {
            let c = dot(b, &mv);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let norm = sys.mass_inner(&v, &v).sqrt();
    if norm <= 1e-10 * norm0 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}

pub(crate) struct RitzPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// Relative residual of the pencil. `floor` stands in for `|lambda|` in the
/// denominator when the eigenvalue is near zero (constant Neumann mode).
pub(crate) fn residual(sys: &AssembledSystem, value: f64, x: &[f64], floor: f64) -> f64 {
    let kx = sys.apply_stiffness(x);
    let mx = sys.apply_mass(x);
    let r: f64 = kx
        .iter()
        .zip(&mx)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = dot(&kx, &kx).sqrt() + value.abs().max(floor) * dot(&mx, &mx).sqrt();
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

/// Rayleigh-Ritz for `(K, M)` on the span of `vectors`, ascending.
fn rayleigh_ritz_pencil(sys: &AssembledSystem, vectors: Vec<Vec<f64>>, floor: f64) -> Vec<RitzPair> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if let Some(u) = orthonormalize(sys, &q, v) {
            q.push(u);
        }
    }
    let m = q.len();
    let kq: Vec<Vec<f64>> = q.iter().map(|v| sys.apply_stiffness(v)).collect();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = 0.5 * (dot(&q[i], &kq[j]) + dot(&q[j], &kq[i]));
            t[(i, j)] = v;
            t[(j, i)] = v;
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = sys.dimension();
    order
        .into_iter()
        .map(|col| {
            let mut vector = vec![0.0; n];
            for (s, v) in eig.eigenvectors.column(col).iter().zip(&q) {
                for (o, x) in vector.iter_mut().zip(v) {
                    *o += s * x;
                }
            }
            let value = eig.eigenvalues[col];
            RitzPair {
                residual: residual(sys, value, &vector, floor),
                value,
                vector,
            }
        })
        .collect()
}

/// Largest absolute row sum.
fn inf_norm(a: &sprs::CsMat<f64>) -> f64 {
    a.outer_iterator()
        .map(|row| row.iter().map(|(_, v)| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// True when the residual is at the rounding floor of the pencil, measured
/// normwise: `|Kx - lambda Mx| <= c eps (|K| + |lambda| |M|) |x|`.
fn at_rounding_floor(sys: &AssembledSystem, norms: (f64, f64), value: f64, x: &[f64]) -> bool {
    let kx = sys.apply_stiffness(x);
    let mx = sys.apply_mass(x);
    let r = kx.iter().zip(&mx).map(|(a, b)| (a - value * b).abs()).fold(0.0, f64::max);
    let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    r <= 1e3 * f64::EPSILON * (norms.0 + value.abs() * norms.1) * xn
}

pub(crate) fn smallest(sys: &AssembledSystem, k: usize, cfg: &KrylovConfig) -> Result<Vec<RitzPair>> {
    let n = sys.dimension();
    let op = ShiftInvert {
        sys,
        factor: factorize(sys, cfg.shift)?,
    };
    let norms = (inf_norm(&sys.stiffness), inf_norm(&sys.mass));
    let block = (k + 2).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut pending: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let mut best_residuals = vec![f64::INFINITY; k];

    for _ in 0..cfg.max_expansions {
        let start = basis.len();
        for v in pending.drain(..) {
            if let Some(q) = orthonormalize(sys, &basis, v) {
                images.push(op.apply(&q));
                basis.push(q);
            }
        }
        if basis.len() == start {
            // Krylov space exhausted; refill with random directions
            for _ in 0..block {
                pending.push((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
            }
            continue;
        }

        // Rayleigh-Ritz for A in the M inner product
        let m = basis.len();
        let mut t = DMatrix::zeros(m, m);
        let m_images: Vec<Vec<f64>> = images.iter().map(|w| sys.apply_mass(w)).collect();
        for i in 0..m {
            for j in 0..=i {
                let v = 0.5 * (dot(&basis[i], &m_images[j]) + dot(&basis[j], &m_images[i]));
                t[(i, j)] = v;
                t[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let combine = |vectors: &[Vec<f64>], col: usize| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (s, v) in eig.eigenvectors.column(col).iter().zip(vectors) {
                for (o, x) in out.iter_mut().zip(v) {
                    *o += s * x;
                }
            }
            out
        };

        let wanted = k.min(m);
        // Ritz vectors are smoothed by one application of the operator, which
        // damps the high-frequency rounding noise of the combination
        let smoothed: Vec<Vec<f64>> = order.iter().take(wanted).map(|&c| combine(&images, c)).collect();
        let pairs = rayleigh_ritz_pencil(sys, smoothed, cfg.shift);
        for (b, p) in best_residuals.iter_mut().zip(&pairs) {
            *b = b.min(p.residual);
        }
        let converged = |p: &RitzPair| p.residual <= cfg.tol || at_rounding_floor(sys, norms, p.value, &p.vector);
        if wanted == k && pairs.iter().all(converged) {
            return Ok(pairs);
        }
        if m >= n {
            // full space: Ritz pairs are exact up to rounding
            if wanted == k {
                return Ok(pairs);
            }
            return Err(Error::Dimension {
                requested: k,
                dimension: n,
            });
        }

        // next block: residual directions of the leading Ritz vectors
        let keep = (k + block).min(m);
        let ritz_images: Vec<Vec<f64>> = order.iter().take(keep).map(|&c| combine(&images, c)).collect();
        if m + block > cfg.max_basis {
            let ritz: Vec<Vec<f64>> = order.iter().take(keep).map(|&c| combine(&basis, c)).collect();
            basis = ritz;
            images = ritz_images.clone();
        }
        pending = ritz_images.into_iter().take(block).collect();
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_expansions,
        residuals: best_residuals,
    })
}

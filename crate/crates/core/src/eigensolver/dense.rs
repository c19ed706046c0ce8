use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fem::AssembledSystem;

fn to_dense(a: &sprs::CsMat<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.rows(), a.cols());
    for (v, (i, j)) in a.iter() {
        d[(i, j)] += *v;
    }
    d
}

/// All eigenpairs of the pencil via `M = L L^T` and a symmetric
/// tridiagonal-QR solve of `L^-1 K L^-T`. Returns the `k` smallest, ascending,
/// with M-orthonormal vectors on free dofs.
pub(crate) fn smallest(sys: &AssembledSystem, k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let kd = to_dense(&sys.stiffness);
    let md = to_dense(&sys.mass);
    let chol = md
        .cholesky()
        .ok_or_else(|| Error::Linalg("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv_k = l
        .solve_lower_triangular(&kd)
        .ok_or_else(|| Error::Linalg("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or_else(|| Error::Linalg("singular Cholesky factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    order
        .into_iter()
        .take(k)
        .map(|i| {
            let y = eig.eigenvectors.column(i).into_owned();
            let x = lt
                .solve_upper_triangular(&y)
                .ok_or_else(|| Error::Linalg("singular Cholesky factor".into()))?;
            Ok((eig.eigenvalues[i], x.iter().copied().collect()))
        })
        .collect()
}

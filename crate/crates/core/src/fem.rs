//! Piecewise-linear stiffness and mass assembly with Dirichlet elimination.
//!
//! Element matrices are closed form: for a cell with area `A` and barycentric
//! gradients `g_i`, `K_ij = A g_i . g_j` and `M_ij = A (1 + delta_ij) / 12`.
//! A vertex is constrained iff it lies on at least one Dirichlet side.

use sprs::{CsMat, TriMat};

use crate::error::{Error, Result};
use crate::geometry::{BoundarySpec, Point2};
use crate::mesh::Mesh;

/// Nodal values of a piecewise-linear function, one per mesh vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct FEFunction {
    pub values: Vec<f64>,
}

impl FEFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn interpolate(mesh: &Mesh, f: impl Fn(Point2) -> f64) -> Self {
        Self::new(mesh.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Stiffness/mass pair restricted to unconstrained vertices.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub stiffness: CsMat<f64>,
    pub mass: CsMat<f64>,
    pub free_dofs: Vec<usize>,
    pub constrained_dofs: Vec<usize>,
    /// Position of each vertex among the free dofs.
    pub dof_of_vertex: Vec<Option<usize>>,
    pub bc: BoundarySpec,
    pub level: usize,
}

impl AssembledSystem {
    pub fn dimension(&self) -> usize {
        self.free_dofs.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.dof_of_vertex.len()
    }

    /// Free-dof values of `u`; errors if `u` is nonzero on a constrained vertex.
    pub fn restrict(&self, u: &FEFunction) -> Result<Vec<f64>> {
        if u.len() != self.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "function has {} values, mesh has {} vertices",
                u.len(),
                self.vertex_count()
            )));
        }
        if self.constrained_dofs.iter().any(|&v| u.values[v] != 0.0) {
            return Err(Error::InvalidArgument(
                "function is nonzero on a Dirichlet vertex".into(),
            ));
        }
        Ok(self.free_dofs.iter().map(|&v| u.values[v]).collect())
    }

    /// Full nodal vector with zeros on constrained vertices.
    pub fn extend(&self, free: &[f64]) -> FEFunction {
        let mut values = vec![0.0; self.vertex_count()];
        for (&v, &x) in self.free_dofs.iter().zip(free) {
            values[v] = x;
        }
        FEFunction::new(values)
    }

    pub fn apply_stiffness(&self, x: &[f64]) -> Vec<f64> {
        csr_mul(&self.stiffness, x)
    }

    pub fn apply_mass(&self, x: &[f64]) -> Vec<f64> {
        csr_mul(&self.mass, x)
    }

    /// `x^T M y` on free dofs.
    pub fn mass_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.apply_mass(y))
    }
}

pub(crate) fn csr_mul(a: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    a.outer_iterator()
        .map(|row| row.iter().map(|(j, v)| v * x[j]).sum())
        .collect()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Area and barycentric gradients of a cell.
pub(crate) fn cell_gradients(mesh: &Mesh, cell: [usize; 3]) -> (f64, [[f64; 2]; 3]) {
    let p = cell.map(|v| mesh.vertices[v]);
    let area2 = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[1].y - p[0].y) * (p[2].x - p[0].x);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let a = p[(i + 1) % 3];
        let b = p[(i + 2) % 3];
        // gradient of the hat function at vertex i is the rotated opposite edge
        g[i] = [(a.y - b.y) / area2, (b.x - a.x) / area2];
    }
    (0.5 * area2, g)
}

/// Element stiffness and mass matrices of one cell.
pub fn element_matrices(mesh: &Mesh, cell: [usize; 3]) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let (area, g) = cell_gradients(mesh, cell);
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    (k, m)
}

pub fn assemble(mesh: &Mesh, bc: &BoundarySpec) -> Result<AssembledSystem> {
    if bc.len() != mesh.side_count {
        return Err(Error::BoundaryMismatch {
            expected: mesh.side_count,
            got: bc.len(),
        });
    }
    let n = mesh.vertex_count();
    let mut constrained = vec![false; n];
    for e in &mesh.boundary {
        if bc.is_dirichlet(e.side) {
            constrained[e.vertices[0]] = true;
            constrained[e.vertices[1]] = true;
        }
    }
    let mut dof_of_vertex = vec![None; n];
    let mut free_dofs = Vec::new();
    let mut constrained_dofs = Vec::new();
    for v in 0..n {
        if constrained[v] {
            constrained_dofs.push(v);
        } else {
            dof_of_vertex[v] = Some(free_dofs.len());
            free_dofs.push(v);
        }
    }
    if free_dofs.is_empty() {
        return Err(Error::FullyConstrained);
    }
    let dim = free_dofs.len();
    let mut k = TriMat::with_capacity((dim, dim), 9 * mesh.cell_count());
    let mut m = TriMat::with_capacity((dim, dim), 9 * mesh.cell_count());
    for &cell in &mesh.cells {
        let (ke, me) = element_matrices(mesh, cell);
        for i in 0..3 {
            let Some(di) = dof_of_vertex[cell[i]] else { continue };
            for j in 0..3 {
                let Some(dj) = dof_of_vertex[cell[j]] else { continue };
                k.add_triplet(di, dj, ke[i][j]);
                m.add_triplet(di, dj, me[i][j]);
            }
        }
    }
    Ok(AssembledSystem {
        stiffness: k.to_csr(),
        mass: m.to_csr(),
        free_dofs,
        constrained_dofs,
        dof_of_vertex,
        bc: bc.clone(),
        level: mesh.level,
    })
}

/// Uniform P1 system on the interval `[0, length]` with `cells` elements and
/// Neumann ends.
pub fn interval_system(length: f64, cells: usize) -> Result<AssembledSystem> {
    if !(length > 0.0) || cells == 0 {
        return Err(Error::InvalidArgument("interval needs positive length and cells".into()));
    }
    let h = length / cells as f64;
    let n = cells + 1;
    let mut k = TriMat::new((n, n));
    let mut m = TriMat::new((n, n));
    for e in 0..cells {
        let idx = [e, e + 1];
        for i in 0..2 {
            for j in 0..2 {
                let same = i == j;
                k.add_triplet(idx[i], idx[j], if same { 1.0 / h } else { -1.0 / h });
                m.add_triplet(idx[i], idx[j], h / 6.0 * if same { 2.0 } else { 1.0 });
            }
        }
    }
    Ok(AssembledSystem {
        stiffness: k.to_csr(),
        mass: m.to_csr(),
        free_dofs: (0..n).collect(),
        constrained_dofs: Vec::new(),
        dof_of_vertex: (0..n).map(Some).collect(),
        bc: BoundarySpec::neumann(2),
        level: 0,
    })
}

/// `u^T K u / u^T M u`.
pub fn rayleigh_quotient(sys: &AssembledSystem, u: &FEFunction) -> Result<f64> {
    let x = sys.restrict(u)?;
    let den = sys.mass_inner(&x, &x);
    if den <= 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(dot(&x, &sys.apply_stiffness(&x)) / den)
}

/// `(integral of u_x^2, integral of u_y^2)` from the cellwise gradients.
pub fn energy_split(mesh: &Mesh, u: &FEFunction) -> (f64, f64) {
    mesh.cells.iter().fold((0.0, 0.0), |(ex, ey), &cell| {
        let (area, g) = cell_gradients(mesh, cell);
        let (mut gx, mut gy) = (0.0, 0.0);
        for i in 0..3 {
            gx += u.values[cell[i]] * g[i][0];
            gy += u.values[cell[i]] * g[i][1];
        }
        (ex + area * gx * gx, ey + area * gy * gy)
    })
}

/// Removes the mass-weighted mean so the result is M-orthogonal to constants.
pub fn mean_zero_project(sys: &AssembledSystem, u: &FEFunction) -> Result<FEFunction> {
    if !sys.constrained_dofs.is_empty() {
        return Err(Error::InvalidArgument(
            "mean-zero projection needs a pure Neumann system".into(),
        ));
    }
    let x = sys.restrict(u)?;
    let ones = vec![1.0; x.len()];
    let m1 = sys.apply_mass(&ones);
    let mean = dot(&m1, &x) / dot(&m1, &ones);
    Ok(sys.extend(&x.iter().map(|v| v - mean).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{right_triangle, trapezium_fixture, Triangle};
    use crate::mesh::{refine_to, triangulate, triangulate_triangle};
    use approx::assert_relative_eq;

    fn tri_mesh(level: usize) -> Mesh {
        refine_to(&triangulate_triangle(&right_triangle(0.8).unwrap()), level)
    }

    #[test]
    fn reference_cell_element_matrices() {
        let t = Triangle::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)).unwrap();
        let mesh = triangulate_triangle(&t);
        let (k, m) = element_matrices(&mesh, mesh.cells[0]);
        for row in &k {
            assert!(row.iter().sum::<f64>().abs() < 1e-15);
        }
        let total: f64 = m.iter().flatten().sum();
        assert_relative_eq!(total, 0.5, epsilon = 1e-15);
        assert_relative_eq!(k[0][0], 1.0);
        assert_relative_eq!(k[1][1], 0.5);
        assert_relative_eq!(k[0][1], -0.5);
    }

    #[test]
    fn neumann_system_has_constant_kernel() {
        let mesh = tri_mesh(3);
        let sys = assemble(&mesh, &BoundarySpec::neumann(3)).unwrap();
        assert_eq!(sys.dimension(), mesh.vertex_count());
        let ones = vec![1.0; sys.dimension()];
        assert!(sys.apply_stiffness(&ones).iter().all(|v| v.abs() < 1e-12));
        assert_relative_eq!(sys.mass_inner(&ones, &ones), mesh.area(), max_relative = 1e-13);
        assert!(rayleigh_quotient(&sys, &FEFunction::new(vec![1.0; mesh.vertex_count()])).unwrap().abs() < 1e-14);
    }

    #[test]
    fn dirichlet_system_keeps_interior_vertices() {
        let mesh = tri_mesh(1);
        let sys = assemble(&mesh, &BoundarySpec::dirichlet(3));
        assert!(matches!(sys, Err(Error::FullyConstrained)));
        let mesh = tri_mesh(3);
        let sys = assemble(&mesh, &BoundarySpec::dirichlet(3)).unwrap();
        let interior = mesh.is_boundary_vertex().iter().filter(|b| !**b).count();
        assert_eq!(sys.dimension(), interior);
    }

    #[test]
    fn junction_vertices_are_constrained() {
        let mesh = tri_mesh(2);
        let bc = BoundarySpec::dirichlet_on(3, &[0]).unwrap();
        let sys = assemble(&mesh, &bc).unwrap();
        // both endpoints of side 0 touch Neumann sides too
        assert!(sys.constrained_dofs.contains(&0));
        assert!(sys.constrained_dofs.contains(&1));
        assert_eq!(sys.constrained_dofs.len(), mesh.vertices_on_side(0).len());
    }

    #[test]
    fn assembled_matrices_are_symmetric() {
        let mesh = refine_to(&triangulate(&trapezium_fixture()).unwrap(), 2);
        let sys = assemble(&mesh, &BoundarySpec::dirichlet_on(4, &[3]).unwrap()).unwrap();
        for a in [&sys.stiffness, &sys.mass] {
            let t = a.transpose_view().to_csr();
            for (v, (i, j)) in a.iter() {
                assert!((v - t.get(i, j).copied().unwrap_or(0.0)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_mismatched_boundary() {
        let mesh = tri_mesh(1);
        assert!(matches!(
            assemble(&mesh, &BoundarySpec::neumann(4)),
            Err(Error::BoundaryMismatch { .. })
        ));
    }

    #[test]
    fn energy_split_of_coordinate_functions() {
        let mesh = tri_mesh(2);
        let area = mesh.area();
        let (ex, ey) = energy_split(&mesh, &FEFunction::interpolate(&mesh, |p| p.x));
        assert_relative_eq!(ex, area, max_relative = 1e-13);
        assert!(ey.abs() < 1e-14);
        let (ex, ey) = energy_split(&mesh, &FEFunction::interpolate(&mesh, |p| p.y));
        assert!(ex.abs() < 1e-14);
        assert_relative_eq!(ey, area, max_relative = 1e-13);
    }

    #[test]
    fn energy_split_sums_to_stiffness_energy() {
        let mesh = tri_mesh(3);
        let sys = assemble(&mesh, &BoundarySpec::neumann(3)).unwrap();
        let u = FEFunction::interpolate(&mesh, |p| (3.0 * p.x).sin() + p.x * p.y * p.y);
        let (ex, ey) = energy_split(&mesh, &u);
        let x = sys.restrict(&u).unwrap();
        let e = dot(&x, &sys.apply_stiffness(&x));
        assert_relative_eq!(ex + ey, e, max_relative = 1e-12);
    }

    #[test]
    fn mean_zero_projection() {
        let mesh = tri_mesh(3);
        let sys = assemble(&mesh, &BoundarySpec::neumann(3)).unwrap();
        let c = mean_zero_project(&sys, &FEFunction::new(vec![2.5; mesh.vertex_count()])).unwrap();
        assert!(c.max_abs() < 1e-14);

        let u = FEFunction::interpolate(&mesh, |p| p.x * p.x - p.y);
        let once = mean_zero_project(&sys, &u).unwrap();
        let twice = mean_zero_project(&sys, &once).unwrap();
        for (a, b) in once.values.iter().zip(&twice.values) {
            assert!((a - b).abs() < 1e-14);
        }
        let ones = vec![1.0; sys.dimension()];
        let norm = sys.mass_inner(&once.values, &once.values).sqrt();
        assert!(sys.mass_inner(&ones, &once.values).abs() <= 1e-12 * norm);

        let dir = assemble(&mesh, &BoundarySpec::dirichlet_on(3, &[1]).unwrap()).unwrap();
        assert!(mean_zero_project(&dir, &u).is_err());
    }

    #[test]
    fn rayleigh_rejects_zero_and_constraint_violations() {
        let mesh = tri_mesh(2);
        let sys = assemble(&mesh, &BoundarySpec::neumann(3)).unwrap();
        assert!(matches!(
            rayleigh_quotient(&sys, &FEFunction::new(vec![0.0; mesh.vertex_count()])),
            Err(Error::ZeroFunction)
        ));
        let dir = assemble(&mesh, &BoundarySpec::dirichlet(3)).unwrap();
        assert!(rayleigh_quotient(&dir, &FEFunction::new(vec![1.0; mesh.vertex_count()])).is_err());
    }

    #[test]
    fn interval_system_sizes() {
        let sys = interval_system(2.0, 8).unwrap();
        assert_eq!(sys.dimension(), 9);
        let ones = vec![1.0; 9];
        assert_relative_eq!(sys.mass_inner(&ones, &ones), 2.0, max_relative = 1e-14);
    }
}

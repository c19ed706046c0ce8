//! Conforming triangulations with side-tagged boundary edges.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{cross, Axis, Point2, Polygon, Rhombus, Triangle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    /// Index of the polygon side this edge lies on.
    pub side: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point2>,
    /// Counterclockwise vertex triples.
    pub cells: Vec<[usize; 3]>,
    pub boundary: Vec<BoundaryEdge>,
    /// Number of sides of the source polygon.
    pub side_count: usize,
    pub level: usize,
}

impl Mesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        let [a, b, d] = self.cells[c];
        0.5 * cross(self.vertices[a], self.vertices[b], self.vertices[d])
    }

    pub fn area(&self) -> f64 {
        (0..self.cells.len()).map(|c| self.cell_area(c)).sum()
    }

    /// Vertices lying on boundary side `side`.
    pub fn vertices_on_side(&self, side: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .boundary
            .iter()
            .filter(|e| e.side == side)
            .flat_map(|e| e.vertices)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_boundary_vertex(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in &self.boundary {
            flags[e.vertices[0]] = true;
            flags[e.vertices[1]] = true;
        }
        flags
    }

    /// Renumbers vertices so that old vertex `i` becomes `perm[i]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> Result<Mesh> {
        let n = self.vertices.len();
        if perm.len() != n {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let mut vertices = vec![Point2::new(0.0, 0.0); n];
        for (i, &p) in perm.iter().enumerate() {
            vertices[p] = self.vertices[i];
        }
        Ok(Mesh {
            vertices,
            cells: self.cells.iter().map(|c| c.map(|v| perm[v])).collect(),
            boundary: self
                .boundary
                .iter()
                .map(|e| BoundaryEdge {
                    vertices: e.vertices.map(|v| perm[v]),
                    side: e.side,
                })
                .collect(),
            side_count: self.side_count,
            level: self.level,
        })
    }

    /// Plain-text dump: `v x y`, `c i j k`, `b i j side` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {:e} {:e}", v.x, v.y);
        }
        for c in &self.cells {
            let _ = writeln!(out, "c {} {} {}", c[0], c[1], c[2]);
        }
        for e in &self.boundary {
            let _ = writeln!(out, "b {} {} {}", e.vertices[0], e.vertices[1], e.side);
        }
        out
    }

    /// Inverse of [`Mesh::to_text`]. The side count is the largest tag plus one
    /// and the level is reset to 0.
    pub fn from_text(text: &str) -> Result<Mesh> {
        fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize) -> Result<T> {
            tok.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("malformed mesh line {}", line + 1)))
        }
        let mut mesh = Mesh {
            vertices: Vec::new(),
            cells: Vec::new(),
            boundary: Vec::new(),
            side_count: 0,
            level: 0,
        };
        for (n, line) in text.lines().enumerate() {
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("v") => mesh
                    .vertices
                    .push(Point2::new(field(toks.next(), n)?, field(toks.next(), n)?)),
                Some("c") => mesh.cells.push([
                    field(toks.next(), n)?,
                    field(toks.next(), n)?,
                    field(toks.next(), n)?,
                ]),
                Some("b") => mesh.boundary.push(BoundaryEdge {
                    vertices: [field(toks.next(), n)?, field(toks.next(), n)?],
                    side: field(toks.next(), n)?,
                }),
                None => {}
                Some(other) => return Err(Error::Parse(format!("unknown record `{other}`"))),
            }
        }
        mesh.side_count = mesh.boundary.iter().map(|e| e.side + 1).max().unwrap_or(0);
        let nv = mesh.vertices.len();
        if mesh.cells.iter().flatten().chain(mesh.boundary.iter().flat_map(|e| &e.vertices)).any(|&v| v >= nv) {
            return Err(Error::Parse("vertex index out of range".into()));
        }
        Ok(mesh)
    }
}

/// Index of the vertex with an angle above a right angle, if any.
fn obtuse_vertex(v: &[Point2]) -> Option<usize> {
    (0..3).find(|&k| {
        let (a, b, c) = (v[k], v[(k + 1) % 3], v[(k + 2) % 3]);
        let dot = (b.x - a.x) * (c.x - a.x) + (b.y - a.y) * (c.y - a.y);
        dot < -1e-12 * a.dist(b) * a.dist(c)
    })
}

/// Level-0 fan triangulation from vertex 0 of a convex polygon.
///
/// An obtuse triangle is split along the altitude from its obtuse vertex into
/// two right triangles, so that every refined cell is non-obtuse and the
/// stiffness matrix keeps nonpositive off-diagonal entries.
pub fn triangulate(p: &Polygon) -> Result<Mesh> {
    if !p.is_convex() {
        return Err(Error::Geometry("only convex polygons can be fan-triangulated".into()));
    }
    let n = p.side_count();
    if n == 3 {
        if let Some(k) = obtuse_vertex(p.vertices()) {
            return Ok(altitude_split(p, k));
        }
    }
    let mut cells = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        cells.push([0, i, i + 1]);
    }
    let boundary = (0..n)
        .map(|i| BoundaryEdge {
            vertices: [i, (i + 1) % n],
            side: i,
        })
        .collect();
    let mesh = Mesh {
        vertices: p.vertices().to_vec(),
        cells,
        boundary,
        side_count: n,
        level: 0,
    };
    if (0..mesh.cell_count()).any(|c| mesh.cell_area(c) <= 0.0) {
        return Err(Error::Geometry("fan triangulation produced a degenerate cell".into()));
    }
    Ok(mesh)
}

fn altitude_split(p: &Polygon, k: usize) -> Mesh {
    let v = p.vertices();
    let (next, prev) = ((k + 1) % 3, (k + 2) % 3);
    let (a, b, c) = (v[k], v[next], v[prev]);
    let (dx, dy) = (c.x - b.x, c.y - b.y);
    let t = ((a.x - b.x) * dx + (a.y - b.y) * dy) / (dx * dx + dy * dy);
    let foot = Point2::new(b.x + t * dx, b.y + t * dy);
    let mut vertices = v.to_vec();
    vertices.push(foot);
    let mut boundary = Vec::with_capacity(4);
    for i in 0..3 {
        let (s, e) = (i, (i + 1) % 3);
        if i == next {
            boundary.push(BoundaryEdge { vertices: [s, 3], side: i });
            boundary.push(BoundaryEdge { vertices: [3, e], side: i });
        } else {
            boundary.push(BoundaryEdge { vertices: [s, e], side: i });
        }
    }
    Mesh {
        vertices,
        cells: vec![[k, next, 3], [k, 3, prev]],
        boundary,
        side_count: 3,
        level: 0,
    }
}

pub fn triangulate_triangle(t: &Triangle) -> Mesh {
    triangulate(&t.to_polygon()).expect("triangles are convex")
}

/// Red refinement: every cell is split into four through its edge midpoints.
pub fn refine_uniform(m: &Mesh) -> Mesh {
    let mut vertices = m.vertices.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point2>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            vertices.push(vertices[a].midpoint(vertices[b]));
            vertices.len() - 1
        })
    };
    let mut cells = Vec::with_capacity(4 * m.cells.len());
    for &[a, b, c] in &m.cells {
        let ab = midpoint(a, b, &mut vertices);
        let bc = midpoint(b, c, &mut vertices);
        let ca = midpoint(c, a, &mut vertices);
        cells.push([a, ab, ca]);
        cells.push([ab, b, bc]);
        cells.push([ca, bc, c]);
        cells.push([ab, bc, ca]);
    }
    let mut boundary = Vec::with_capacity(2 * m.boundary.len());
    for e in &m.boundary {
        let [a, b] = e.vertices;
        let mid = midpoint(a, b, &mut vertices);
        boundary.push(BoundaryEdge {
            vertices: [a, mid],
            side: e.side,
        });
        boundary.push(BoundaryEdge {
            vertices: [mid, b],
            side: e.side,
        });
    }
    Mesh {
        vertices,
        cells,
        boundary,
        side_count: m.side_count,
        level: m.level + 1,
    }
}

pub fn refine_to(m: &Mesh, level: usize) -> Mesh {
    let mut mesh = m.clone();
    while mesh.level < level {
        mesh = refine_uniform(&mesh);
    }
    mesh
}

/// Reflection symmetry of a mesh given as a vertex permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryMap {
    pub axis: Axis,
    pub permutation: Vec<usize>,
}

impl SymmetryMap {
    /// Pulls nodal values back through the reflection: `(u o sigma)[v] = u[sigma(v)]`.
    pub fn pull_back(&self, values: &[f64]) -> Vec<f64> {
        self.permutation.iter().map(|&s| values[s]).collect()
    }

    pub fn is_involution(&self) -> bool {
        self.permutation
            .iter()
            .enumerate()
            .all(|(i, &s)| self.permutation[s] == i)
    }

    pub fn compose(&self, other: &SymmetryMap) -> Vec<usize> {
        self.permutation.iter().map(|&s| other.permutation[s]).collect()
    }
}

/// Rhombus mesh built from four reflected copies of a refined quarter triangle.
#[derive(Debug, Clone)]
pub struct RhombusMesh {
    pub rhombus: Rhombus,
    pub mesh: Mesh,
    /// Reflection across the long diagonal (the x axis).
    pub long: SymmetryMap,
    /// Reflection across the short diagonal (the y axis).
    pub short: SymmetryMap,
    /// Number of vertices in the quarter mesh.
    pub quarter_vertices: usize,
}

const QUADRANTS: [(f64, f64); 4] = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];

fn quadrant_index(sx: f64, sy: f64) -> usize {
    QUADRANTS
        .iter()
        .position(|&(a, b)| a == sx && b == sy)
        .expect("valid quadrant")
}

/// Symmetric rhombus mesh whose quarter is the right triangle `t` refined to `level`.
///
/// The quarter sits in the first quadrant with its longer leg on the x axis;
/// the other three quadrants are exact mirror copies, so both diagonal
/// reflections are vertex permutations. Rhombus side `q` is the hypotenuse of
/// quadrant `q` in the order `(+,+), (-,+), (-,-), (+,-)`.
pub fn symmetric_rhombus_mesh(t: &Triangle, level: usize) -> Result<RhombusMesh> {
    let rhombus = crate::geometry::rhombus_from_right_triangle(t)?;
    let quarter_tri = rhombus.quarter();
    // quarter sides: 0 = x-axis leg, 1 = hypotenuse, 2 = y-axis leg
    let quarter = refine_to(&triangulate_triangle(&quarter_tri), level);
    let nq = quarter.vertex_count();

    // global index of (quadrant, quarter vertex), merging copies on the axes
    let mut index = vec![[usize::MAX; 4]; nq];
    let mut vertices = Vec::new();
    for (q, &(sx, sy)) in QUADRANTS.iter().enumerate() {
        for (i, p) in quarter.vertices.iter().enumerate() {
            // lowest-numbered quadrant holding the same point
            let canonical = QUADRANTS
                .iter()
                .position(|&(cx, cy)| (cx == sx || p.x == 0.0) && (cy == sy || p.y == 0.0))
                .expect("own quadrant matches");
            if canonical == q {
                index[i][q] = vertices.len();
                vertices.push(Point2::new(sx * p.x, sy * p.y));
            } else {
                index[i][q] = index[i][canonical];
            }
        }
    }

    let mut cells = Vec::with_capacity(4 * quarter.cell_count());
    let mut boundary = Vec::new();
    for (q, &(sx, sy)) in QUADRANTS.iter().enumerate() {
        let flip = sx * sy < 0.0;
        for c in &quarter.cells {
            let mapped = c.map(|v| index[v][q]);
            cells.push(if flip { [mapped[0], mapped[2], mapped[1]] } else { mapped });
        }
        for e in quarter.boundary.iter().filter(|e| e.side == 1) {
            let [a, b] = e.vertices.map(|v| index[v][q]);
            boundary.push(BoundaryEdge {
                vertices: if flip { [b, a] } else { [a, b] },
                side: q,
            });
        }
    }

    let reflect = |flip_x: bool| -> Vec<usize> {
        let mut perm = vec![0; vertices.len()];
        for (q, &(sx, sy)) in QUADRANTS.iter().enumerate() {
            let target = if flip_x { quadrant_index(-sx, sy) } else { quadrant_index(sx, -sy) };
            for i in 0..nq {
                perm[index[i][q]] = index[i][target];
            }
        }
        perm
    };
    let long = SymmetryMap {
        axis: rhombus.long_axis,
        permutation: reflect(false),
    };
    let short = SymmetryMap {
        axis: rhombus.short_axis,
        permutation: reflect(true),
    };

    Ok(RhombusMesh {
        mesh: Mesh {
            vertices,
            cells,
            boundary,
            side_count: 4,
            level,
        },
        rhombus,
        long,
        short,
        quarter_vertices: nq,
    })
}

//! Polygonal domains: right triangles in canonical placement, their mirror
//! doublings (isosceles triangles and kites), rhombi built from four copies,
//! and fixed fixtures such as the trapezium.
//!
//! A canonical right triangle has vertices `(0,0)`, `(1,0)`, `(0,b)` with
//! `0 < b <= 1`. Its smallest angle is `alpha = atan(b)`; the obtuse/acute
//! isosceles pair shares a right triangle with hypotenuse 1 and short leg
//! `h = sin(alpha)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance under which two side lengths count as equal.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn scaled(self, c: f64) -> Point2 {
        Point2::new(c * self.x, c * self.y)
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Twice the signed area of the triangle `a, b, c`.
pub(crate) fn cross(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// A line through `point` with direction `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub point: Point2,
    pub direction: Point2,
}

impl Axis {
    pub fn through(a: Point2, b: Point2) -> Self {
        Self {
            point: a,
            direction: Point2::new(b.x - a.x, b.y - a.y),
        }
    }

    /// Mirror image of `p` across this line.
    pub fn reflect(&self, p: Point2) -> Point2 {
        let d = self.direction;
        let len2 = d.x * d.x + d.y * d.y;
        let (rx, ry) = (p.x - self.point.x, p.y - self.point.y);
        let t = (rx * d.x + ry * d.y) / len2;
        let (fx, fy) = (self.point.x + t * d.x, self.point.y + t * d.y);
        Point2::new(2.0 * fx - p.x, 2.0 * fy - p.y)
    }
}

/// A counterclockwise triangle. Side `i` joins vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    vertices: [Point2; 3],
    side_lengths: [f64; 3],
}

impl Triangle {
    pub fn new(a: Point2, b: Point2, c: Point2) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Geometry("non-finite vertex".into()));
        }
        let vertices = [a, b, c];
        let side_lengths = [a.dist(b), b.dist(c), c.dist(a)];
        let scale = side_lengths.iter().cloned().fold(0.0, f64::max);
        let area2 = cross(a, b, c);
        if area2 <= 1e-14 * scale * scale {
            return Err(Error::Geometry(format!(
                "triangle must have positive (counterclockwise) area, got {}",
                0.5 * area2
            )));
        }
        for i in 0..3 {
            let (s, o1, o2) = (side_lengths[i], side_lengths[(i + 1) % 3], side_lengths[(i + 2) % 3]);
            if s >= o1 + o2 {
                return Err(Error::Geometry("triangle inequality violated".into()));
            }
        }
        Ok(Self {
            vertices,
            side_lengths,
        })
    }

    pub fn vertices(&self) -> [Point2; 3] {
        self.vertices
    }

    pub fn side_lengths(&self) -> [f64; 3] {
        self.side_lengths
    }

    pub fn area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        0.5 * cross(a, b, c)
    }

    /// Interior angle at vertex `i`.
    pub fn angle(&self, i: usize) -> f64 {
        let p = self.vertices[i];
        let q = self.vertices[(i + 1) % 3];
        let r = self.vertices[(i + 2) % 3];
        let (ux, uy) = (q.x - p.x, q.y - p.y);
        let (vx, vy) = (r.x - p.x, r.y - p.y);
        (ux * vy - uy * vx).atan2(ux * vx + uy * vy).abs()
    }

    pub fn smallest_angle(&self) -> f64 {
        (0..3).map(|i| self.angle(i)).fold(f64::INFINITY, f64::min)
    }

    /// Index of the vertex carrying a right angle, if any.
    pub fn right_angle_vertex(&self, tol: f64) -> Option<usize> {
        (0..3).find(|&i| (self.angle(i) - PI / 2.0).abs() <= tol)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let [a, b, d] = self.vertices;
        Triangle::new(a.scaled(c), b.scaled(c), d.scaled(c))
    }

    pub fn to_polygon(&self) -> Polygon {
        Polygon {
            vertices: self.vertices.to_vec(),
        }
    }
}

/// Right triangle `(0,0), (1,0), (0,b)`.
///
/// Sides: 0 is the unit leg on the x axis, 1 the hypotenuse, 2 the leg of
/// length `b` on the y axis.
pub fn right_triangle(b: f64) -> Result<Triangle> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "leg ratio b must lie in (0, 1], got {b}; swap the legs instead"
        )));
    }
    Triangle::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, b))
}

pub fn b_from_alpha(alpha: f64) -> f64 {
    alpha.tan()
}

pub fn alpha_from_b(b: f64) -> f64 {
    b.atan()
}

pub fn h_from_alpha(alpha: f64) -> f64 {
    alpha.sin()
}

pub fn alpha_from_h(h: f64) -> f64 {
    h.asin()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SideLabel {
    S,
    M,
    L,
}

impl SideLabel {
    pub const ALL: [SideLabel; 3] = [SideLabel::S, SideLabel::M, SideLabel::L];

    fn rank(self) -> usize {
        match self {
            SideLabel::S => 0,
            SideLabel::M => 1,
            SideLabel::L => 2,
        }
    }

    pub fn from_char(c: char) -> Option<SideLabel> {
        match c {
            'S' => Some(SideLabel::S),
            'M' => Some(SideLabel::M),
            'L' => Some(SideLabel::L),
            _ => None,
        }
    }
}

impl fmt::Display for SideLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SideLabel::S => "S",
            SideLabel::M => "M",
            SideLabel::L => "L",
        };
        f.write_str(s)
    }
}

/// Assignment of the S, M, L labels to triangle sides.
#[derive(Debug, Clone, PartialEq)]
pub struct SideClassification {
    /// `sides[0]` is the side index labelled S, then M, then L.
    sides: [usize; 3],
    lengths: [f64; 3],
    /// Side index pairs whose lengths agree within the tie tolerance.
    pub ties: Vec<(usize, usize)>,
}

impl SideClassification {
    pub fn side(&self, label: SideLabel) -> usize {
        self.sides[label.rank()]
    }

    pub fn label(&self, side: usize) -> SideLabel {
        let pos = self.sides.iter().position(|&s| s == side).expect("side index out of range");
        SideLabel::ALL[pos]
    }

    pub fn length(&self, label: SideLabel) -> f64 {
        self.lengths[self.side(label)]
    }

    pub fn tied(&self, a: SideLabel, b: SideLabel) -> bool {
        let (sa, sb) = (self.side(a), self.side(b));
        self.ties
            .iter()
            .any(|&(p, q)| (p == sa && q == sb) || (p == sb && q == sa))
    }

    /// Boundary spec with Dirichlet conditions on the labelled sides, e.g. `"MS"`.
    /// The empty string is pure Neumann and `"LMS"` pure Dirichlet.
    pub fn boundary(&self, labels: &str) -> Result<BoundarySpec> {
        let mut spec = BoundarySpec::neumann(3);
        for c in labels.chars() {
            let label = SideLabel::from_char(c)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown side label `{c}`")))?;
            spec.conditions[self.side(label)] = Condition::Dirichlet;
        }
        Ok(spec)
    }
}

/// Labels sides by sorted length (ties broken by side index) and reports
/// every pair whose relative length difference is below `tie_tol`.
pub fn classify_sides(t: &Triangle, tie_tol: f64) -> SideClassification {
    let lengths = t.side_lengths();
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| lengths[a].total_cmp(&lengths[b]).then(a.cmp(&b)));
    let mut ties = Vec::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (a, b) = (lengths[i], lengths[j]);
            if (a - b).abs() / a.max(b) < tie_tol {
                ties.push((i, j));
            }
        }
    }
    SideClassification {
        sides: idx,
        lengths,
        ties,
    }
}

/// Simple counterclockwise polygon. Side `i` joins vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Geometry("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::Geometry("non-finite vertex".into()));
        }
        let poly = Polygon { vertices };
        if poly.signed_area() <= 0.0 {
            return Err(Error::Geometry(
                "polygon must be counterclockwise with positive area".into(),
            ));
        }
        if !poly.is_simple() {
            return Err(Error::Geometry("polygon is self-intersecting".into()));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn side(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn side_length(&self, i: usize) -> f64 {
        let (a, b) = self.side(i);
        a.dist(b)
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        (0..self.side_count()).map(|i| self.side_length(i)).collect()
    }

    fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
            * 0.5
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        self.signed_area()
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let scale = self.side_lengths().into_iter().fold(0.0, f64::max);
        (0..n).all(|i| {
            let (a, b, c) = (
                self.vertices[i],
                self.vertices[(i + 1) % n],
                self.vertices[(i + 2) % n],
            );
            cross(a, b, c) > -1e-14 * scale * scale
        })
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = self.side(i);
                let (c, d) = self.side(j);
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    pub fn scaled(&self, c: f64) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|p| p.scaled(c)).collect())
    }

    /// Drops vertices whose interior angle is straight.
    fn without_collinear(self) -> Result<Polygon> {
        let n = self.vertices.len();
        let scale = self.side_lengths().into_iter().fold(0.0, f64::max);
        let kept: Vec<Point2> = (0..n)
            .filter(|&i| {
                let prev = self.vertices[(i + n - 1) % n];
                let next = self.vertices[(i + 1) % n];
                cross(prev, self.vertices[i], next).abs() > 1e-12 * scale * scale
            })
            .map(|i| self.vertices[i])
            .collect();
        Polygon::new(kept)
    }
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Dirichlet,
    Neumann,
}

/// One boundary condition per polygon side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub conditions: Vec<Condition>,
}

impl BoundarySpec {
    pub fn neumann(sides: usize) -> Self {
        Self {
            conditions: vec![Condition::Neumann; sides],
        }
    }

    pub fn dirichlet(sides: usize) -> Self {
        Self {
            conditions: vec![Condition::Dirichlet; sides],
        }
    }

    /// Dirichlet on the listed sides, Neumann elsewhere.
    pub fn dirichlet_on(sides: usize, dirichlet: &[usize]) -> Result<Self> {
        let mut spec = Self::neumann(sides);
        for &s in dirichlet {
            if s >= sides {
                return Err(Error::InvalidArgument(format!(
                    "side {s} out of range for {sides} sides"
                )));
            }
            spec.conditions[s] = Condition::Dirichlet;
        }
        Ok(spec)
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn is_dirichlet(&self, side: usize) -> bool {
        self.conditions[side] == Condition::Dirichlet
    }

    pub fn is_all_neumann(&self) -> bool {
        self.conditions.iter().all(|&c| c == Condition::Neumann)
    }

    pub fn dirichlet_sides(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_dirichlet(i)).collect()
    }

    /// True when every Dirichlet side of `self` is Dirichlet in `other`.
    pub fn is_subset_of(&self, other: &BoundarySpec) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|i| !self.is_dirichlet(i) || other.is_dirichlet(i))
    }
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            f.write_str(match c {
                Condition::Dirichlet => "D",
                Condition::Neumann => "N",
            })?;
        }
        Ok(())
    }
}

impl FromStr for BoundarySpec {
    type Err = Error;

    /// Parses strings such as `"DNN"`, one letter per side.
    fn from_str(s: &str) -> Result<Self> {
        let conditions = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'D' => Ok(Condition::Dirichlet),
                'N' => Ok(Condition::Neumann),
                other => Err(Error::Parse(format!("boundary tag `{other}` is not D or N"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if conditions.is_empty() {
            return Err(Error::Parse("empty boundary specification".into()));
        }
        Ok(Self { conditions })
    }
}

/// Union of `t` and its mirror image across side `side_index`.
///
/// Reflecting a right triangle across a leg yields an isosceles triangle
/// (the straight-angle vertex is removed); any other reflection yields a kite.
pub fn reflect_double(t: &Triangle, side_index: usize) -> Result<Polygon> {
    if side_index > 2 {
        return Err(Error::InvalidArgument(format!("side index {side_index} out of range")));
    }
    let v = t.vertices();
    let p = v[side_index];
    let q = v[(side_index + 1) % 3];
    let r = v[(side_index + 2) % 3];
    let mirrored = Axis::through(p, q).reflect(r);
    let poly = Polygon::new(vec![p, mirrored, q, r])?.without_collinear()?;
    if poly.area() <= 0.0 {
        return Err(Error::Geometry("degenerate doubled domain".into()));
    }
    Ok(poly)
}

/// Rhombus assembled from four copies of a right triangle, centred at the
/// origin with its diagonals on the coordinate axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Rhombus {
    pub polygon: Polygon,
    /// Half of the long diagonal (along x).
    pub half_long: f64,
    /// Half of the short diagonal (along y).
    pub half_short: f64,
    /// Line containing the long diagonal.
    pub long_axis: Axis,
    /// Line containing the short diagonal.
    pub short_axis: Axis,
}

impl Rhombus {
    /// Smallest interior angle, twice the smallest angle of the quarter triangle.
    pub fn smallest_angle(&self) -> f64 {
        2.0 * (self.half_short / self.half_long).atan()
    }

    /// The quarter triangle `(0,0), (half_long,0), (0,half_short)`.
    pub fn quarter(&self) -> Triangle {
        Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(self.half_long, 0.0),
            Point2::new(0.0, self.half_short),
        )
        .expect("rhombus quarter is a valid triangle")
    }
}

pub fn rhombus_from_right_triangle(t: &Triangle) -> Result<Rhombus> {
    let corner = t
        .right_angle_vertex(1e-9)
        .ok_or_else(|| Error::Geometry("rhombus construction needs a right triangle".into()))?;
    let lens = t.side_lengths();
    // legs are the two sides meeting at the right-angle vertex
    let leg_a = lens[corner];
    let leg_b = lens[(corner + 2) % 3];
    let (half_long, half_short) = if leg_a >= leg_b { (leg_a, leg_b) } else { (leg_b, leg_a) };
    Ok(rhombus_with_half_diagonals(half_long, half_short))
}

pub(crate) fn rhombus_with_half_diagonals(half_long: f64, half_short: f64) -> Rhombus {
    let polygon = Polygon::new(vec![
        Point2::new(half_long, 0.0),
        Point2::new(0.0, half_short),
        Point2::new(-half_long, 0.0),
        Point2::new(0.0, -half_short),
    ])
    .expect("rhombus is convex");
    let origin = Point2::new(0.0, 0.0);
    Rhombus {
        polygon,
        half_long,
        half_short,
        long_axis: Axis {
            point: origin,
            direction: Point2::new(1.0, 0.0),
        },
        short_axis: Axis {
            point: origin,
            direction: Point2::new(0.0, 1.0),
        },
    }
}

/// Rhombus with smallest angle `angle` (radians, in `(0, pi/2]`) and long
/// half-diagonal 1.
pub fn rhombus_with_angle(angle: f64) -> Result<Rhombus> {
    if !(angle > 0.0 && angle <= PI / 2.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "rhombus angle must lie in (0, pi/2], got {angle}"
        )));
    }
    let b = (0.5 * angle).tan().min(1.0);
    rhombus_from_right_triangle(&right_triangle(b)?)
}

pub const TRAPEZIUM_BOTTOM: usize = 0;
pub const TRAPEZIUM_RIGHT: usize = 1;
pub const TRAPEZIUM_TOP: usize = 2;
pub const TRAPEZIUM_SLOPED: usize = 3;

/// Trapezium `(-3,0), (3,0), (3,2), (0,2)`.
pub fn trapezium_fixture() -> Polygon {
    Polygon::new(vec![
        Point2::new(-3.0, 0.0),
        Point2::new(3.0, 0.0),
        Point2::new(3.0, 2.0),
        Point2::new(0.0, 2.0),
    ])
    .expect("fixture is valid")
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidArgument(format!("h must lie in (0, 1), got {h}")));
    }
    Ok(())
}

/// Obtuse isosceles triangle `(0,h), (-sqrt(1-h^2),0), (sqrt(1-h^2),0)`
/// with unit legs.
pub fn obtuse_isosceles(h: f64) -> Result<Triangle> {
    check_h(h)?;
    let c = (1.0 - h * h).sqrt();
    Triangle::new(Point2::new(-c, 0.0), Point2::new(c, 0.0), Point2::new(0.0, h))
}

/// Acute isosceles triangle `(0,-h), (sqrt(1-h^2),0), (0,h)` with unit legs,
/// symmetric about the x axis.
pub fn acute_isosceles(h: f64) -> Result<Triangle> {
    check_h(h)?;
    let c = (1.0 - h * h).sqrt();
    Triangle::new(Point2::new(0.0, -h), Point2::new(c, 0.0), Point2::new(0.0, h))
}

/// Triangle `(0,0), (1,0), (x,y)`.
pub fn apex_triangle(x: f64, y: f64) -> Result<Triangle> {
    Triangle::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(x, y))
}

/// Regular `n`-gon with circumradius 1, first vertex at angle `-pi/2 + pi/n`
/// so that side 0 is horizontal at the bottom.
pub fn regular_polygon(n: usize) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::InvalidArgument("regular polygon needs n >= 3".into()));
    }
    let start = -PI / 2.0 - PI / n as f64;
    Polygon::new(
        (0..n)
            .map(|k| {
                let t = start + 2.0 * PI * k as f64 / n as f64;
                Point2::new(t.cos(), t.sin())
            })
            .collect(),
    )
}

pub fn unit_square() -> Polygon {
    Polygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .expect("unit square is valid")
}

/// Upper end of the admissible `h` range for the obtuse bound.
pub const H_SATURATION: f64 = FRAC_1_SQRT_2;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::time::Instant;

use rayon::prelude::*;

use super::check::{Relation, Status};
use super::plot::ModeField;
use super::report::VerificationReport;
use crate::analysis::{
    bound_hooker_protter, bound_isosceles_upper, bound_obtuse_upper, cond_ratio, gap_identity_residual,
    gap_quadratic, nodal_domain_count, triangle_to_rhombus_matching, RhombusStudy, SymmetryClass,
    DEFAULT_NODAL_EPS,
};
use crate::eigensolver::{
    estimate_index, extrapolate_with_residual, nested_meshes, solve_on_meshes, Estimate, SolverOptions, Spectrum,
};
use crate::error::{Error, Result};
use crate::fem::{assemble, FEFunction};
use crate::geometry::{
    acute_isosceles, alpha_from_b, apex_triangle, classify_sides, obtuse_isosceles, regular_polygon,
    rhombus_with_angle, right_triangle, trapezium_fixture, BoundarySpec, Polygon, SideLabel, Triangle,
    DEFAULT_TIE_TOL, H_SATURATION, TRAPEZIUM_SLOPED, TRAPEZIUM_TOP,
};
use crate::mesh::{refine_to, symmetric_rhombus_mesh, triangulate, Mesh};

/// Default number of refinement levels for triangles and convex polygons.
pub const TRIANGLE_LEVELS: usize = 5;
/// Default number of levels for rhombi and the trapezium.
pub const RHOMBUS_LEVELS: usize = 4;
/// Apex of the near-equilateral triangle probed by the conjecture scan.
pub const NEAR_EQUILATERAL_APEX: (f64, f64) = (0.49, 0.85);

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Number of refinement levels; `None` picks the command default.
    pub levels: Option<usize>,
    pub start_level: usize,
    /// Number of eigenpairs; `None` picks the command default.
    pub k: Option<usize>,
    pub solver: SolverOptions,
    /// Attach the featured eigenfunction so the report can be drawn.
    pub with_mode: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            levels: None,
            start_level: 2,
            k: None,
            solver: SolverOptions::default(),
            with_mode: false,
        }
    }
}

impl RunOptions {
    fn levels_or(&self, default: usize) -> Result<usize> {
        let l = self.levels.unwrap_or(default);
        if l < 2 {
            return Err(Error::InvalidArgument("at least 2 refinement levels are needed".into()));
        }
        Ok(l)
    }

    fn level_list(&self, levels: usize) -> Vec<usize> {
        (self.start_level..self.start_level + levels).collect()
    }
}

/// Mixed problems on a triangle, keyed by the Dirichlet side labels.
const TRIANGLE_PROBLEMS: [(&str, &str); 8] = [
    ("", "mu2"),
    ("S", "lambda^S"),
    ("M", "lambda^M"),
    ("L", "lambda^L"),
    ("MS", "lambda^MS"),
    ("LS", "lambda^LS"),
    ("LM", "lambda^LM"),
    ("LMS", "lambda1"),
];

/// Estimates and finest-level data for a set of mixed problems on one polygon.
struct Solved {
    estimates: BTreeMap<String, Estimate>,
    /// Nodal domain counts of the featured eigenfunction on the finest level.
    nodal: BTreeMap<String, usize>,
    finest_mesh: Mesh,
    /// Featured eigenfunction on the finest level per label.
    modes: BTreeMap<String, FEFunction>,
}

/// Solves each `(label, bc)` pair on the nested meshes; all-Neumann problems
/// report `mu1` and `mu2`, the others their first eigenvalue.
fn solve_problems(polygon: &Polygon, problems: &[(String, BoundarySpec)], start: usize, levels: usize, opts: &SolverOptions) -> Result<Solved> {
    let meshes = nested_meshes(polygon, start, levels)?;
    let results: Vec<(String, BoundarySpec, Vec<Spectrum>)> = problems
        .par_iter()
        .map(|(label, bc)| {
            let k = if bc.is_all_neumann() { 2 } else { 1 };
            solve_on_meshes(&meshes, bc, k, opts).map(|s| (label.clone(), bc.clone(), s))
        })
        .collect::<Result<_>>()?;
    let finest_mesh = meshes.last().expect("levels >= 2").clone();
    let mut estimates = BTreeMap::new();
    let mut nodal = BTreeMap::new();
    let mut modes = BTreeMap::new();
    for (label, bc, spectra) in results {
        let index = usize::from(bc.is_all_neumann());
        if index == 1 {
            estimates.insert("mu1".to_string(), estimate_index(&spectra, 0));
        }
        estimates.insert(label.clone(), estimate_index(&spectra, index));
        let u = spectra.last().expect("levels >= 2").pairs[index].vector.clone();
        nodal.insert(label.clone(), nodal_domain_count(&finest_mesh, &u, DEFAULT_NODAL_EPS)?);
        modes.insert(label, u);
    }
    Ok(Solved {
        estimates,
        nodal,
        finest_mesh,
        modes,
    })
}

fn triangle_problems(t: &Triangle, which: &[&str]) -> Result<Vec<(String, BoundarySpec)>> {
    let sides = classify_sides(t, DEFAULT_TIE_TOL);
    TRIANGLE_PROBLEMS
        .iter()
        .filter(|(d, _)| which.contains(d))
        .map(|(d, label)| Ok((label.to_string(), sides.boundary(d)?)))
        .collect()
}

fn add_solved(report: &mut VerificationReport, solved: &Solved, order: &[&str]) {
    for label in order {
        if let Some(e) = solved.estimates.get(*label) {
            report.add_estimate(*label, e);
        }
    }
    for (label, n) in &solved.nodal {
        report.set_param(format!("nodal_domains.{label}"), *n as f64);
    }
    let rough: Vec<&str> = order
        .iter()
        .filter(|l| solved.estimates.get(**l).is_some_and(|e| !e.is_monotone()))
        .copied()
        .collect();
    if !rough.is_empty() {
        report.note(format!("non-monotone level sequence for {}", rough.join(", ")));
    }
}

fn observed_ordering(report: &VerificationReport, labels: &[&str]) -> String {
    let mut rows: Vec<(f64, &str)> = labels
        .iter()
        .filter_map(|l| report.estimate(l).map(|e| (e.value, *l)))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    rows.iter().map(|r| r.1).collect::<Vec<_>>().join(" < ")
}

const ORDER_LABELS: [&str; 9] = [
    "mu1", "lambda^S", "lambda^M", "mu2", "lambda^L", "lambda^MS", "lambda^LS", "lambda^LM", "lambda1",
];

/// Ordering chain of mixed eigenvalues of the right triangle `(0,0), (1,0), (0,b)`.
pub fn cmd_order(b: f64, opts: &RunOptions) -> Result<VerificationReport> {
    let clock = Instant::now();
    let t = right_triangle(b)?;
    let levels = opts.levels_or(TRIANGLE_LEVELS)?;
    let alpha = alpha_from_b(b);
    if alpha > FRAC_PI_4 + 1e-12 {
        return Err(Error::InvalidArgument("b must not exceed 1".into()));
    }
    let sides = classify_sides(&t, DEFAULT_TIE_TOL);
    let mut report = VerificationReport::new(format!("right triangle (0,0), (1,0), (0,{b})"), opts.level_list(levels));
    report.set_param("b", b);
    report.set_param("alpha", alpha);
    for l in SideLabel::ALL {
        report.set_param(format!("length.{l}"), sides.length(l));
    }

    let problems = triangle_problems(&t, &["", "S", "M", "L", "MS", "LS", "LM", "LMS"])?;
    let solved = solve_problems(&t.to_polygon(), &problems, opts.start_level, levels, &opts.solver)?;
    add_solved(&mut report, &solved, &ORDER_LABELS);

    use Relation::{Equal as Eq, Less as Lt};
    let isosceles = sides.tied(SideLabel::S, SideLabel::M);
    let half_equilateral = (alpha - FRAC_PI_6).abs() <= 1e-9;
    let chain: Vec<(&str, Relation, &str)> = if isosceles {
        report.note("S = M: lambda^S = lambda^M, lambda^LS = lambda^LM and lambda^L = mu2 become equalities");
        vec![
            ("mu1", Lt, "lambda^S"),
            ("lambda^S", Eq, "lambda^M"),
            ("lambda^M", Lt, "mu2"),
            ("mu2", Eq, "lambda^L"),
            ("lambda^L", Lt, "lambda^MS"),
            ("lambda^MS", Lt, "lambda^LS"),
            ("lambda^LS", Eq, "lambda^LM"),
            ("lambda^LM", Lt, "lambda1"),
        ]
    } else {
        let middle: [(&str, Relation, &str); 3] = if half_equilateral {
            report.note("alpha = pi/6: lambda^M = mu2 becomes an equality");
            [("lambda^S", Lt, "lambda^M"), ("lambda^M", Eq, "mu2"), ("mu2", Lt, "lambda^L")]
        } else if alpha < FRAC_PI_6 {
            report.note("alpha < pi/6: mu2 lies below lambda^M");
            [("lambda^S", Lt, "mu2"), ("mu2", Lt, "lambda^M"), ("lambda^M", Lt, "lambda^L")]
        } else {
            [("lambda^S", Lt, "lambda^M"), ("lambda^M", Lt, "mu2"), ("mu2", Lt, "lambda^L")]
        };
        let mut c = vec![("mu1", Lt, "lambda^S")];
        c.extend(middle);
        c.extend([
            ("lambda^L", Lt, "lambda^MS"),
            ("lambda^MS", Lt, "lambda^LS"),
            ("lambda^LS", Lt, "lambda^LM"),
            ("lambda^LM", Lt, "lambda1"),
        ]);
        c
    };
    for (l, rel, r) in chain {
        report.check(format!("{l} {rel} {r}"), l, rel, r)?;
    }
    report.note(format!("observed ordering: {}", observed_ordering(&report, &ORDER_LABELS)));
    if opts.with_mode {
        report.mode = Some(ModeField::new("mu2", &solved.finest_mesh, &solved.modes["mu2"]));
    }
    report.elapsed_seconds = Some(clock.elapsed().as_secs_f64());
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureGrid {
    pub nx: usize,
    pub ny: usize,
    /// Distance kept from the edges of the apex region.
    pub margin: f64,
    /// Also probe [`NEAR_EQUILATERAL_APEX`].
    pub near_equilateral: bool,
}

impl Default for ConjectureGrid {
    fn default() -> Self {
        Self {
            nx: 10,
            ny: 10,
            margin: 0.02,
            near_equilateral: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureCell {
    pub x: f64,
    pub y: f64,
    pub near_equilateral: bool,
}

/// Apex positions `(x, y)` over the base `(0,0), (1,0)` with `x < 1/2` and
/// `(1-x)^2 + y^2 < 1`, so that the base is the longest side and the left side
/// the shortest: every scalene similarity class appears at most once.
pub fn conjecture_cells(grid: &ConjectureGrid) -> Result<Vec<ConjectureCell>> {
    if grid.nx < 2 || grid.ny < 2 || !(grid.margin > 0.0 && grid.margin < 0.25) {
        return Err(Error::InvalidArgument("grid needs nx, ny >= 2 and a margin in (0, 0.25)".into()));
    }
    let mut cells = Vec::new();
    for i in 0..grid.nx {
        let x = grid.margin + i as f64 * (0.5 - 2.0 * grid.margin) / (grid.nx - 1) as f64;
        let y_max = (1.0 - (1.0 - x) * (1.0 - x)).sqrt();
        let (lo, hi) = (grid.margin, y_max - grid.margin);
        if hi <= lo {
            continue;
        }
        for j in 0..grid.ny {
            let y = lo + j as f64 * (hi - lo) / (grid.ny - 1) as f64;
            let t = apex_triangle(x, y)?;
            if classify_sides(&t, DEFAULT_TIE_TOL).ties.is_empty() {
                cells.push(ConjectureCell {
                    x,
                    y,
                    near_equilateral: false,
                });
            }
        }
    }
    if grid.near_equilateral {
        let (x, y) = NEAR_EQUILATERAL_APEX;
        cells.push(ConjectureCell {
            x,
            y,
            near_equilateral: true,
        });
    }
    Ok(cells)
}

const CONJECTURE_LABELS: [&str; 7] = ["lambda^S", "lambda^M", "lambda^L", "mu2", "lambda^MS", "lambda^LS", "lambda^LM"];

fn conjecture_cell(cell: &ConjectureCell, start: usize, levels: usize, opts: &SolverOptions) -> Result<VerificationReport> {
    let t = apex_triangle(cell.x, cell.y)?;
    let problems = triangle_problems(&t, &["", "S", "M", "L", "MS", "LS", "LM"])?;
    let solved = solve_problems(&t.to_polygon(), &problems, start, levels, opts)?;
    let mut r = VerificationReport::new("", Vec::new());
    add_solved(&mut r, &solved, &CONJECTURE_LABELS);
    let smallest = ["lambda^S", "lambda^M", "lambda^L"]
        .iter()
        .map(|l| solved.estimates[*l].clone())
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("three labels");
    r.add_estimate("min(lambda^S,lambda^M,lambda^L)", &smallest);

    use Relation::{Less as Lt, LessEq as Le};
    let checks: [(&str, Relation, &str); 7] = [
        ("lambda^S", Lt, "lambda^M"),
        ("lambda^M", Lt, "lambda^L"),
        ("lambda^L", Lt, "lambda^MS"),
        ("min(lambda^S,lambda^M,lambda^L)", Lt, "mu2"),
        ("mu2", Le, "lambda^MS"),
        ("lambda^MS", Lt, "lambda^LS"),
        ("lambda^LS", Lt, "lambda^LM"),
    ];
    for (l, rel, rhs) in checks {
        r.check(format!("{l} {rel} {rhs}"), l, rel, rhs)?;
    }
    if cell.near_equilateral {
        r.check("lambda^L < mu2", "lambda^L", Lt, "mu2")?;
    }
    r.set_param("x", cell.x);
    r.set_param("y", cell.y);
    Ok(r)
}

/// Scan of the ordering `lambda^S < lambda^M < lambda^L < lambda^MS` (and the
/// proven tail) over a grid of scalene triangles.
pub fn cmd_conjecture(grid: &ConjectureGrid, opts: &RunOptions) -> Result<VerificationReport> {
    let clock = Instant::now();
    let levels = opts.levels_or(TRIANGLE_LEVELS)?;
    let cells = conjecture_cells(grid)?;
    let reports: Vec<VerificationReport> = cells
        .par_iter()
        .map(|c| conjecture_cell(c, opts.start_level, levels, &opts.solver))
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(
        format!("scalene triangles (0,0), (1,0), (x,y): {} cells", cells.len()),
        opts.level_list(levels),
    );
    report.set_param("grid.nx", grid.nx as f64);
    report.set_param("grid.ny", grid.ny as f64);
    report.set_param("grid.margin", grid.margin);
    report.set_param("cells", cells.len() as f64);
    let (mut violated, mut inconclusive) = (0usize, 0usize);
    let mut position = [0usize; 3];
    for (i, (cell, r)) in cells.iter().zip(reports).enumerate() {
        let mu2 = r.estimate("mu2").expect("mu2 solved").value;
        let m = r.estimate("lambda^M").expect("solved").value;
        let l = r.estimate("lambda^L").expect("solved").value;
        position[if mu2 < m { 0 } else if mu2 < l { 1 } else { 2 }] += 1;
        for c in &r.checks {
            let what = format!("c{i:03} (x={:.4}, y={:.4}): {}", cell.x, cell.y, c.name);
            match c.status {
                Status::Violated => {
                    violated += 1;
                    report.note(format!("counterexample candidate {what}"));
                }
                Status::Inconclusive => {
                    inconclusive += 1;
                    report.note(format!("inconclusive, re-run at a higher level: {what}"));
                }
                Status::Verified => {}
            }
        }
        report.absorb(&format!("c{i:03}."), r);
    }
    report.set_param("violated", violated as f64);
    report.set_param("inconclusive", inconclusive as f64);
    report.set_param("mu2_position.below_lambda^M", position[0] as f64);
    report.set_param("mu2_position.between_lambda^M_lambda^L", position[1] as f64);
    report.set_param("mu2_position.above_lambda^L", position[2] as f64);
    report.elapsed_seconds = Some(clock.elapsed().as_secs_f64());
    Ok(report)
}

/// Reflection score with the smallest magnitude across levels for mode `index`.
fn worst_score(study: &RhombusStudy, index: usize, diagonal: usize) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for s in &study.spectra {
        let score = s.scores.get(index).copied().flatten()?[diagonal];
        if worst.is_none_or(|w| score.abs() < w.abs()) {
            worst = Some(score);
        }
    }
    worst
}

fn class_summary(study: &RhombusStudy, index: usize) -> String {
    let classes: Vec<String> = study
        .spectra
        .iter()
        .map(|s| s.classes.get(index).map_or("-".to_string(), |c| c.to_string()))
        .collect();
    if classes.windows(2).all(|w| w[0] == w[1]) {
        format!("{} on every level", classes[0])
    } else {
        format!("varies across levels: {}", classes.join(", "))
    }
}

/// Records the class of mode `index` as two score checks against +-0.99.
fn class_checks(report: &mut VerificationReport, study: &RhombusStudy, name: &str, index: usize, class: SymmetryClass) -> Result<()> {
    let (sl, ss) = class.signs().expect("pure class");
    for (diagonal, sign, which) in [(0, sl, "long"), (1, ss, "short")] {
        let label = format!("score.{which}({name})");
        let Some(score) = worst_score(study, index, diagonal) else {
            report.note(format!("{name} lies in a degenerate cluster on some level; no {which}-diagonal score"));
            continue;
        };
        report.add_estimate(&label, &Estimate::exact(score));
        let threshold = crate::analysis::SYMMETRY_THRESHOLD;
        if sign > 0.0 {
            report.add_estimate("threshold.symmetric", &Estimate::exact(threshold));
            report.check(format!("{name} symmetric across the {which} diagonal"), "threshold.symmetric", Relation::Less, &label)?;
        } else {
            report.add_estimate("threshold.antisymmetric", &Estimate::exact(-threshold));
            report.check(format!("{name} antisymmetric across the {which} diagonal"), &label, Relation::Less, "threshold.antisymmetric")?;
        }
    }
    Ok(())
}

/// Neumann and Dirichlet modes of the rhombus with smallest angle `angle`,
/// their symmetry classes and the ordering statements about them.
pub fn cmd_rhombus(angle: f64, opts: &RunOptions) -> Result<VerificationReport> {
    let clock = Instant::now();
    let levels = opts.levels_or(RHOMBUS_LEVELS)?;
    let rhombus = rhombus_with_angle(angle)?;
    let quarter = rhombus.quarter();
    let square = (rhombus.half_short - rhombus.half_long).abs() <= DEFAULT_TIE_TOL * rhombus.half_long;
    let equilateral = (angle - FRAC_PI_3).abs() <= 1e-9;
    let mut report = VerificationReport::new(
        format!("rhombus with smallest angle {angle}, half-diagonals {} and {}", rhombus.half_long, rhombus.half_short),
        opts.level_list(levels),
    );
    report.set_param("angle", angle);
    report.set_param("half_long", rhombus.half_long);
    report.set_param("half_short", rhombus.half_short);

    let k = opts.k.unwrap_or(6).max(6);
    let neumann = RhombusStudy::run(&quarter, &BoundarySpec::neumann(4), opts.start_level, levels, k, &[], 0.0, &opts.solver)?;
    let dirichlet = RhombusStudy::run(&quarter, &BoundarySpec::dirichlet(4), opts.start_level, levels, 3, &[], 0.0, &opts.solver)?;
    let available = |study: &RhombusStudy| study.spectra.iter().map(|s| s.spectrum.len()).min().unwrap_or(0);
    if available(&neumann) < 5 || available(&dirichlet) < 3 {
        return Err(Error::InvalidArgument("mesh too coarse for five Neumann and three Dirichlet modes".into()));
    }
    for i in 0..5 {
        report.add_estimate(format!("mu{}", i + 1), &neumann.estimate_index(i));
    }
    for i in 0..3 {
        report.add_estimate(format!("lambda{}", i + 1), &dirichlet.estimate_index(i));
    }
    for i in 1..5 {
        report.note(format!("mu{} class: {}", i + 1, class_summary(&neumann, i)));
    }
    for i in 0..3 {
        report.note(format!("lambda{} class: {}", i + 1, class_summary(&dirichlet, i)));
    }
    let finest = neumann.spectra.last().expect("levels >= 2");
    for (cluster, dims) in finest.clusters.iter().zip(&finest.cluster_dims) {
        if cluster.len() > 1 {
            let names: Vec<String> = cluster.iter().map(|i| format!("mu{}", i + 1)).collect();
            report.note(format!(
                "degenerate cluster {{{}}} on the finest level: SS {} SA {} AS {} AA {}",
                names.join(", "),
                dims[0],
                dims[1],
                dims[2],
                dims[3]
            ));
        }
    }

    use Relation::{Equal as Eq, Less as Lt, LessEq as Le};
    if square {
        report.check("mu2 = mu3", "mu2", Eq, "mu3")?;
        report.check("mu3 < mu4", "mu3", Lt, "mu4")?;
        report.check("mu4 <= lambda1", "mu4", Le, "lambda1")?;
        let cluster = finest.clusters.iter().position(|c| c.contains(&1) && c.contains(&2));
        let dims = cluster.map_or([0; 4], |c| finest.cluster_dims[c]);
        report.check_exact("mu2-mu3 cluster size", ("cluster(mu2,mu3).size", cluster.map_or(1, |c| finest.clusters[c].len()) as f64), Eq, ("two", 2.0));
        report.check_exact("mu2-mu3 cluster has one SA mode", ("cluster(mu2,mu3).SA", dims[1] as f64), Eq, ("one", 1.0));
        report.check_exact("mu2-mu3 cluster has one AS mode", ("cluster(mu2,mu3).AS", dims[2] as f64), Eq, ("one", 1.0));
    } else if equilateral {
        report.check("mu2 < mu3", "mu2", Lt, "mu3")?;
        report.check("mu3 = mu4", "mu3", Eq, "mu4")?;
        report.check("mu4 < mu5", "mu4", Lt, "mu5")?;
        class_checks(&mut report, &neumann, "mu2", 1, SymmetryClass::SA)?;
        report.note("2alpha = pi/3: mu3 and mu4 coalesce in the limit; the discrete pair splits at O(h^2)");
    } else if angle > FRAC_PI_3 {
        report.check("mu2 < mu3", "mu2", Lt, "mu3")?;
        report.check("mu3 < mu4", "mu3", Lt, "mu4")?;
        report.check("mu4 < mu5", "mu4", Lt, "mu5")?;
        report.check("lambda2 < lambda3", "lambda2", Lt, "lambda3")?;
        report.check("lambda1 < lambda2", "lambda1", Lt, "lambda2")?;
        report.check("mu4 < lambda1", "mu4", Lt, "lambda1")?;
        class_checks(&mut report, &neumann, "mu2", 1, SymmetryClass::SA)?;
        class_checks(&mut report, &neumann, "mu3", 2, SymmetryClass::AS)?;
        class_checks(&mut report, &neumann, "mu4", 3, SymmetryClass::SS)?;
        class_checks(&mut report, &dirichlet, "lambda2", 1, SymmetryClass::SA)?;
    } else {
        report.check("mu2 < mu3", "mu2", Lt, "mu3")?;
        report.check("mu3 < mu4", "mu3", Lt, "mu4")?;
        class_checks(&mut report, &neumann, "mu2", 1, SymmetryClass::SA)?;
        class_checks(&mut report, &neumann, "mu3", 2, SymmetryClass::SS)?;
    }

    let matching = if square {
        report.note("the quarter is isosceles: its S and M problems share a degenerate rhombus cluster, so no class matching");
        Vec::new()
    } else {
        triangle_to_rhombus_matching(&quarter, opts.start_level, levels, &opts.solver)?.entries
    };
    for m in &matching {
        let tl = format!("T.{}", m.triangle_label);
        let rl = format!("R.{}", m.rhombus_label);
        report.add_estimate(&tl, &m.triangle);
        report.add_estimate(&rl, &m.rhombus);
        report.check(format!("{} of the quarter = {} of the rhombus", m.triangle_label, m.rhombus_label), &tl, Eq, &rl)?;
    }

    if opts.with_mode {
        let rm = neumann.meshes.last().expect("levels >= 2");
        report.mode = Some(ModeField::new("mu2", &rm.mesh, &finest.spectrum.pairs[1].vector));
    }
    report.elapsed_seconds = Some(clock.elapsed().as_secs_f64());
    Ok(report)
}

/// First eigenvalues of the trapezium with Dirichlet data on the sloped side
/// and on the top side.
pub fn cmd_trapezium(opts: &RunOptions) -> Result<VerificationReport> {
    let clock = Instant::now();
    let levels = opts.levels_or(RHOMBUS_LEVELS)?;
    let p = trapezium_fixture();
    let mut report = VerificationReport::new("trapezium (-3,0), (3,0), (3,2), (0,2)", opts.level_list(levels));
    report.set_param("length.sloped", p.side_length(TRAPEZIUM_SLOPED));
    report.set_param("length.top", p.side_length(TRAPEZIUM_TOP));
    report.set_param("area", p.area());
    let problems = vec![
        ("lambda1^sloped".to_string(), BoundarySpec::dirichlet_on(4, &[TRAPEZIUM_SLOPED])?),
        ("lambda1^top".to_string(), BoundarySpec::dirichlet_on(4, &[TRAPEZIUM_TOP])?),
    ];
    let solved = solve_problems(&p, &problems, opts.start_level, levels, &opts.solver)?;
    add_solved(&mut report, &solved, &["lambda1^sloped", "lambda1^top"]);
    report.add_estimate("zero", &Estimate::exact(0.0));
    report.check("0 < lambda1^sloped", "zero", Relation::Less, "lambda1^sloped")?;
    report.check("0 < lambda1^top", "zero", Relation::Less, "lambda1^top")?;
    report.check("lambda1^sloped < lambda1^top", "lambda1^sloped", Relation::Less, "lambda1^top")?;
    report.note("the sloped side (sqrt 13) is longer than the top side (3)");
    if opts.with_mode {
        report.mode = Some(ModeField::new("lambda1^sloped", &solved.finest_mesh, &solved.modes["lambda1^sloped"]));
    }
    report.elapsed_seconds = Some(clock.elapsed().as_secs_f64());
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsGrid {
    /// Leg ratios of right triangles, in `(0, 1]`.
    pub bs: Vec<f64>,
    /// Half-heights of obtuse isosceles triangles, in `(0, 1/sqrt 2]`.
    pub hs: Vec<f64>,
    /// Half-apex angles of acute isosceles triangles for the obtuse/acute comparison.
    pub alphas: Vec<f64>,
}

impl Default for BoundsGrid {
    fn default() -> Self {
        Self {
            bs: (1..=9).map(|i| i as f64 / 10.0).collect(),
            hs: vec![0.3, 0.5, 0.6, H_SATURATION],
            alphas: vec![0.3, 0.5, 0.7],
        }
    }
}

fn bounds_for_b(b: f64, opts: &RunOptions, tri_levels: usize, rho_levels: usize) -> Result<VerificationReport> {
    let t = right_triangle(b)?;
    let mut r = VerificationReport::new("", Vec::new());
    let n = solve_problems(&t.to_polygon(), &[("mu2(T)".to_string(), BoundarySpec::neumann(3))], opts.start_level, tri_levels, &opts.solver)?;
    r.add_estimate("mu2(T)", &n.estimates["mu2(T)"]);
    let meshes: Vec<Mesh> = (opts.start_level..opts.start_level + rho_levels)
        .map(|l| symmetric_rhombus_mesh(&t, l).map(|rm| rm.mesh))
        .collect::<Result<_>>()?;
    let spectra = solve_on_meshes(&meshes, &BoundarySpec::dirichlet(4), 1, &opts.solver)?;
    r.add_estimate("lambda1(R)", &estimate_index(&spectra, 0));
    let hp = bound_hooker_protter(b)?;
    let iso = bound_isosceles_upper(b)?;
    r.add_estimate("HP", &Estimate::exact(hp));
    r.add_estimate("isobound", &Estimate::exact(iso));
    r.check("HP <= lambda1(R)", "HP", Relation::LessEq, "lambda1(R)")?;
    r.check("mu2(T) <= isobound", "mu2(T)", Relation::LessEq, "isobound")?;
    let isosceles = (b - 1.0).abs() <= DEFAULT_TIE_TOL;
    if isosceles {
        r.check("isobound = HP", "isobound", Relation::Equal, "HP")?;
    } else {
        r.check("isobound < HP", "isobound", Relation::Less, "HP")?;
        r.check_exact("quadratic factor < 0", ("quadratic", gap_quadratic(b)), Relation::Less, ("zero", 0.0));
    }
    r.check_exact(
        "gap identity residual <= 1e-12",
        ("gap_residual", gap_identity_residual(b)?),
        Relation::LessEq,
        ("tolerance", 1e-12),
    );
    Ok(r)
}

fn bounds_for_h(h: f64, opts: &RunOptions, levels: usize) -> Result<VerificationReport> {
    let (test, bound) = bound_obtuse_upper(h)?;
    let o = obtuse_isosceles(h)?;
    let mut r = VerificationReport::new("", Vec::new());
    let n = solve_problems(&o.to_polygon(), &[("mu2(O)".to_string(), BoundarySpec::neumann(3))], opts.start_level, levels, &opts.solver)?;
    r.add_estimate("mu2(O)", &n.estimates["mu2(O)"]);
    r.add_estimate("obtuse.test", &Estimate::exact(test));
    r.add_estimate("obtuse.bound", &Estimate::exact(bound));
    r.check("mu2(O) <= obtuse.test", "mu2(O)", Relation::LessEq, "obtuse.test")?;
    if (h - H_SATURATION).abs() <= 1e-12 {
        r.check("obtuse.test = obtuse.bound", "obtuse.test", Relation::Equal, "obtuse.bound")?;
    } else {
        r.check("obtuse.test < obtuse.bound", "obtuse.test", Relation::Less, "obtuse.bound")?;
    }
    Ok(r)
}

fn dichotomy_for_alpha(alpha: f64, opts: &RunOptions, levels: usize) -> Result<VerificationReport> {
    let h = alpha.sin();
    let beta = PI / 2.0 - alpha;
    let mut r = VerificationReport::new("", Vec::new());
    let o = obtuse_isosceles(h)?;
    let a = acute_isosceles(h)?;
    let so = solve_problems(&o.to_polygon(), &[("mu2(O)".to_string(), BoundarySpec::neumann(3))], opts.start_level, levels, &opts.solver)?;
    let sa = solve_problems(&a.to_polygon(), &[("mu2(A)".to_string(), BoundarySpec::neumann(3))], opts.start_level, levels, &opts.solver)?;
    r.add_estimate("mu2(O)", &so.estimates["mu2(O)"]);
    r.add_estimate("mu2(A)", &sa.estimates["mu2(A)"]);
    r.check("mu2(O) < mu2(A)", "mu2(O)", Relation::Less, "mu2(A)")?;
    let (ratio, holds) = cond_ratio(&sa.finest_mesh, &sa.modes["mu2(A)"], beta);
    r.set_param("h", h);
    r.set_param("beta", beta);
    r.set_param("tan2_beta", beta.tan().powi(2));
    if ratio.is_finite() {
        r.set_param("energy_ratio", ratio);
    } else {
        r.note("mu2(A) eigenfunction has no x-energy");
    }
    r.set_param("energy_condition", f64::from(u8::from(holds)));
    if !holds {
        r.note("energy condition fails; the comparison rests on the computed eigenvalues alone");
    }
    Ok(r)
}

/// Explicit bounds on b and h grids, and the obtuse/acute comparison on an
/// alpha grid.
pub fn cmd_bounds(grid: &BoundsGrid, opts: &RunOptions) -> Result<VerificationReport> {
    let clock = Instant::now();
    let tri_levels = opts.levels_or(TRIANGLE_LEVELS)?;
    let rho_levels = opts.levels.unwrap_or(RHOMBUS_LEVELS).max(2);
    let mut report = VerificationReport::new("explicit bounds", opts.level_list(tri_levels));
    report.note(format!("rhombus solves use levels {:?}", opts.level_list(rho_levels)));
    let bs: Vec<VerificationReport> = grid
        .bs
        .par_iter()
        .map(|&b| bounds_for_b(b, opts, tri_levels, rho_levels))
        .collect::<Result<_>>()?;
    let hs: Vec<VerificationReport> = grid
        .hs
        .par_iter()
        .map(|&h| bounds_for_h(h, opts, tri_levels))
        .collect::<Result<_>>()?;
    let alphas: Vec<VerificationReport> = grid
        .alphas
        .par_iter()
        .map(|&a| dichotomy_for_alpha(a, opts, tri_levels))
        .collect::<Result<_>>()?;
    for (b, r) in grid.bs.iter().zip(bs) {
        report.absorb(&format!("b={b:.4}."), r);
    }
    for (h, r) in grid.hs.iter().zip(hs) {
        report.absorb(&format!("h={h:.4}."), r);
    }
    for (a, r) in grid.alphas.iter().zip(alphas) {
        report.absorb(&format!("alpha={a:.4}."), r);
    }
    report.elapsed_seconds = Some(clock.elapsed().as_secs_f64());
    Ok(report)
}

/// Compares the second Neumann eigenvalue of a convex polygon with `2n+1` or
/// `2n+2` sides against every mixed problem with `n` consecutive Dirichlet sides.
pub fn cmd_polygon_lb(polygon: &Polygon, name: &str, n: usize, opts: &RunOptions) -> Result<VerificationReport> {
    let clock = Instant::now();
    let sides = polygon.side_count();
    if n == 0 || !(sides == 2 * n + 1 || sides == 2 * n + 2) {
        return Err(Error::InvalidArgument(format!("a polygon with {sides} sides needs n with 2n+1 or 2n+2 = {sides}")));
    }
    let levels = opts.levels_or(TRIANGLE_LEVELS)?;
    let mut report = VerificationReport::new(format!("{name} ({sides} sides), n = {n}"), opts.level_list(levels));
    report.set_param("n", n as f64);
    report.set_param("sides", sides as f64);
    let mut problems = vec![("mu2".to_string(), BoundarySpec::neumann(sides))];
    let mut labels = Vec::new();
    for s in 0..sides {
        let set: Vec<usize> = (0..n).map(|j| (s + j) % sides).collect();
        let label = format!(
            "lambda1^D{{{}}}",
            set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        );
        problems.push((label.clone(), BoundarySpec::dirichlet_on(sides, &set)?));
        labels.push(label);
    }
    let solved = solve_problems(polygon, &problems, opts.start_level, levels, &opts.solver)?;
    let mut order = vec!["mu1", "mu2"];
    order.extend(labels.iter().map(String::as_str));
    add_solved(&mut report, &solved, &order);
    let smallest = labels
        .iter()
        .map(|l| solved.estimates[l].clone())
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one side");
    report.add_estimate("min lambda1^D", &smallest);
    report.check("min lambda1^D <= mu2", "min lambda1^D", Relation::LessEq, "mu2")?;
    if sides == 3 {
        report.check("min lambda1^D < mu2", "min lambda1^D", Relation::Less, "mu2")?;
    }
    if opts.with_mode {
        report.mode = Some(ModeField::new("mu2", &solved.finest_mesh, &solved.modes["mu2"]));
    }
    report.elapsed_seconds = Some(clock.elapsed().as_secs_f64());
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlotDomain {
    /// Right triangle `(0,0), (1,0), (0,b)`.
    RightTriangle(f64),
    /// Rhombus with the given smallest angle, meshed symmetrically.
    Rhombus(f64),
    Trapezium,
    ObtuseIsosceles(f64),
    AcuteIsosceles(f64),
    /// Triangle `(0,0), (1,0), (x,y)`.
    Apex(f64, f64),
    RegularPolygon(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub domain: PlotDomain,
    /// One `D`/`N` letter per side; all Neumann when `None`.
    pub bc: Option<String>,
    /// Zero-based eigenvalue index.
    pub index: usize,
    pub level: usize,
}

/// Eigenfunction `index` of a domain on one mesh level, attached to the
/// report for svg export.
pub fn cmd_plot(spec: &PlotSpec, opts: &RunOptions) -> Result<VerificationReport> {
    let clock = Instant::now();
    let (name, mesh) = match &spec.domain {
        PlotDomain::RightTriangle(b) => (format!("right triangle b={b}"), tri_mesh(&right_triangle(*b)?, spec.level)),
        PlotDomain::Rhombus(a) => {
            let r = rhombus_with_angle(*a)?;
            (format!("rhombus angle={a}"), symmetric_rhombus_mesh(&r.quarter(), spec.level)?.mesh)
        }
        PlotDomain::Trapezium => ("trapezium".to_string(), refine_to(&triangulate(&trapezium_fixture())?, spec.level)),
        PlotDomain::ObtuseIsosceles(h) => (format!("obtuse isosceles h={h}"), tri_mesh(&obtuse_isosceles(*h)?, spec.level)),
        PlotDomain::AcuteIsosceles(h) => (format!("acute isosceles h={h}"), tri_mesh(&acute_isosceles(*h)?, spec.level)),
        PlotDomain::Apex(x, y) => (format!("triangle apex ({x},{y})"), tri_mesh(&apex_triangle(*x, *y)?, spec.level)),
        PlotDomain::RegularPolygon(n) => (format!("regular {n}-gon"), refine_to(&triangulate(&regular_polygon(*n)?)?, spec.level)),
    };
    let bc: BoundarySpec = match &spec.bc {
        Some(s) => s.parse()?,
        None => BoundarySpec::neumann(mesh.side_count),
    };
    if bc.len() != mesh.side_count {
        return Err(Error::BoundaryMismatch {
            expected: mesh.side_count,
            got: bc.len(),
        });
    }
    let sys = assemble(&mesh, &bc)?;
    let spectrum = crate::eigensolver::smallest_eigenpairs_with(&sys, spec.index + 1, &opts.solver)?;
    let pair = &spectrum.pairs[spec.index];
    let label = format!("eigenvalue {} ({bc})", spec.index + 1);
    let mut report = VerificationReport::new(format!("{name}, {bc}, level {}", spec.level), vec![spec.level]);
    report.add_estimate(&label, &extrapolate_with_residual(&[pair.value], pair.residual * pair.value.abs()));
    report.set_param("nodal_domains", nodal_domain_count(&mesh, &pair.vector, DEFAULT_NODAL_EPS)? as f64);
    report.mode = Some(ModeField::new(label, &mesh, &pair.vector));
    report.elapsed_seconds = Some(clock.elapsed().as_secs_f64());
    Ok(report)
}

fn tri_mesh(t: &Triangle, level: usize) -> Mesh {
    refine_to(&crate::mesh::triangulate_triangle(t), level)
}

//! Rhombus spectra split by diagonal symmetry, and their correspondence with
//! mixed problems on the quarter triangle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nodal::{cluster_symmetry, symmetry_class, SymmetryClass};
use crate::eigensolver::{
    degeneracy_clusters, estimate_index, extrapolate, solve_sequence, smallest_eigenpairs_with, Estimate,
    SolverOptions, Spectrum,
};
use crate::error::{Error, Result};
use crate::fem::assemble;
use crate::geometry::{classify_sides, BoundarySpec, Triangle, DEFAULT_TIE_TOL};
use crate::mesh::{symmetric_rhombus_mesh, RhombusMesh};

/// Relative gap under which discrete eigenvalues on one mesh are one cluster.
pub const DEFAULT_CLUSTER_GAP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ClassifiedSpectrum {
    pub spectrum: Spectrum,
    pub classes: Vec<SymmetryClass>,
    /// Reflection scores per mode; `None` for members of degenerate clusters.
    pub scores: Vec<Option<[f64; 2]>>,
    pub clusters: Vec<Vec<usize>>,
    /// Class projection dimensions (SS, SA, AS, AA) per cluster.
    pub cluster_dims: Vec<[usize; 4]>,
}

impl ClassifiedSpectrum {
    /// Index of the lowest mode of `class`, skipping values below `floor`.
    pub fn lowest_of_class(&self, class: SymmetryClass, floor: f64) -> Option<usize> {
        (0..self.spectrum.len()).find(|&i| self.classes[i] == class && self.spectrum.pairs[i].value > floor)
    }
}

pub fn classify_spectrum(rm: &RhombusMesh, bc: &BoundarySpec, k: usize, opts: &SolverOptions, rel_gap: f64) -> Result<ClassifiedSpectrum> {
    let sys = assemble(&rm.mesh, bc)?;
    // two spare modes; a trailing cluster that may continue past them is dropped
    let wanted = (k + 2).min(sys.dimension());
    let mut spectrum = smallest_eigenpairs_with(&sys, wanted, opts)?;
    let mut clusters = degeneracy_clusters(&spectrum, rel_gap);
    if wanted < sys.dimension() && clusters.len() > 1 {
        clusters.pop();
        let keep = clusters.last().map_or(0, |c| c[c.len() - 1] + 1);
        spectrum.pairs.truncate(keep);
    }
    let mut classes = vec![SymmetryClass::DegenerateCluster; spectrum.len()];
    let mut scores = vec![None; spectrum.len()];
    let mut cluster_dims = Vec::with_capacity(clusters.len());
    for cluster in &clusters {
        let vectors: Vec<_> = cluster.iter().map(|&i| spectrum.pairs[i].vector.clone()).collect();
        cluster_dims.push(cluster_symmetry(&sys, &vectors, &rm.long, &rm.short)?);
        if let [i] = cluster[..] {
            let s = symmetry_class(&sys, &spectrum.pairs[i].vector, &rm.long, &rm.short)?;
            classes[i] = s.class;
            scores[i] = Some(s.scores);
        }
    }
    Ok(ClassifiedSpectrum {
        spectrum,
        classes,
        scores,
        clusters,
        cluster_dims,
    })
}

/// Classified rhombus spectra on nested levels `start .. start + levels`.
pub struct RhombusStudy {
    pub meshes: Vec<RhombusMesh>,
    pub spectra: Vec<ClassifiedSpectrum>,
    pub bc: BoundarySpec,
}

impl RhombusStudy {
    /// Solves with `k` modes, doubling `k` while some class in `required` has
    /// no mode above `floor` on some level.
    #[allow(clippy::too_many_arguments)]
    pub fn run(
        quarter: &Triangle,
        bc: &BoundarySpec,
        start: usize,
        levels: usize,
        k: usize,
        required: &[SymmetryClass],
        floor: f64,
        opts: &SolverOptions,
    ) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidArgument("a refinement sequence needs at least 2 levels".into()));
        }
        let meshes: Vec<RhombusMesh> = (start..start + levels)
            .map(|l| symmetric_rhombus_mesh(quarter, l))
            .collect::<Result<_>>()?;
        let mut k = k.max(1);
        loop {
            let spectra: Vec<ClassifiedSpectrum> = meshes
                .par_iter()
                .map(|rm| classify_spectrum(rm, bc, k, opts, DEFAULT_CLUSTER_GAP))
                .collect::<Result<_>>()?;
            let complete = spectra
                .iter()
                .all(|s| required.iter().all(|&c| s.lowest_of_class(c, floor).is_some()));
            let exhausted = spectra.iter().any(|s| s.spectrum.len() < k);
            if complete || exhausted {
                return Ok(Self {
                    meshes,
                    spectra,
                    bc: bc.clone(),
                });
            }
            k *= 2;
        }
    }

    pub fn levels(&self) -> Vec<usize> {
        self.meshes.iter().map(|m| m.mesh.level).collect()
    }

    /// Extrapolated eigenvalue `index` (ascending order on each level).
    pub fn estimate_index(&self, index: usize) -> Estimate {
        let plain: Vec<Spectrum> = self.spectra.iter().map(|s| s.spectrum.clone()).collect();
        estimate_index(&plain, index)
    }

    /// Extrapolated lowest eigenvalue of `class` above `floor`.
    pub fn estimate_class(&self, class: SymmetryClass, floor: f64) -> Result<Estimate> {
        let mut values = Vec::with_capacity(self.spectra.len());
        let mut residual = 0.0;
        for s in &self.spectra {
            let i = s
                .lowest_of_class(class, floor)
                .ok_or_else(|| Error::Unsupported(format!("no {class} mode among the computed rhombus modes")))?;
            let p = &s.spectrum.pairs[i];
            values.push(p.value);
            residual = p.residual * p.value.abs();
        }
        let mut e = extrapolate(&values);
        e.error_bar += residual;
        Ok(e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchEntry {
    pub triangle_label: String,
    pub rhombus_label: String,
    pub triangle: Estimate,
    pub rhombus: Estimate,
    pub difference: f64,
    pub bars: f64,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingReport {
    pub entries: Vec<MatchEntry>,
}

impl MatchingReport {
    pub fn all_matched(&self) -> bool {
        self.entries.iter().all(|e| e.matched)
    }
}

/// Mixed problems on a right triangle and the rhombus symmetry class whose
/// lowest mode reproduces them: (label, Dirichlet sides, rhombus Dirichlet?, class).
const CORRESPONDENCE: [(&str, &str, bool, SymmetryClass); 5] = [
    ("lambda^S", "S", false, SymmetryClass::SA),
    ("lambda^M", "M", false, SymmetryClass::AS),
    ("mu2", "", false, SymmetryClass::SS),
    ("lambda^MS", "MS", false, SymmetryClass::AA),
    ("lambda^L", "L", true, SymmetryClass::SS),
];

/// Compares mixed eigenvalues of the right triangle `t` with the rhombus
/// built from four copies of it, class by class.
///
/// Values match when their difference is within the combined error bars
/// (with a floor of `1e-9` relative for identical discretisations).
pub fn triangle_to_rhombus_matching(t: &Triangle, start: usize, levels: usize, opts: &SolverOptions) -> Result<MatchingReport> {
    let rhombus = crate::geometry::rhombus_from_right_triangle(t)?;
    let quarter = rhombus.quarter();
    let sides = classify_sides(&quarter, DEFAULT_TIE_TOL);
    let polygon = quarter.to_polygon();
    // positive floor that skips the constant Neumann mode
    let floor = 1e-6;

    let neumann = RhombusStudy::run(
        &quarter,
        &BoundarySpec::neumann(4),
        start,
        levels,
        8,
        &[SymmetryClass::SS, SymmetryClass::SA, SymmetryClass::AS, SymmetryClass::AA],
        floor,
        opts,
    )?;
    let dirichlet = RhombusStudy::run(&quarter, &BoundarySpec::dirichlet(4), start, levels, 2, &[SymmetryClass::SS], floor, opts)?;

    let mut entries = Vec::new();
    for (label, dsides, rhombus_dirichlet, class) in CORRESPONDENCE {
        let bc = if dsides.is_empty() {
            BoundarySpec::neumann(3)
        } else {
            sides.boundary(dsides)?
        };
        let index = usize::from(bc.is_all_neumann());
        let spectra = solve_sequence(&polygon, &bc, start, levels, index + 1, opts)?;
        let tri = estimate_index(&spectra, index);
        let study = if rhombus_dirichlet { &dirichlet } else { &neumann };
        let rho = study.estimate_class(class, floor)?;
        let difference = tri.value - rho.value;
        let bars = tri.error_bar + rho.error_bar;
        let matched = difference.abs() <= bars.max(1e-9 * tri.value.abs());
        let kind = if rhombus_dirichlet { "Dirichlet" } else { "Neumann" };
        entries.push(MatchEntry {
            triangle_label: label.to_string(),
            rhombus_label: format!("{kind} {class}"),
            triangle: tri,
            rhombus: rho,
            difference,
            bars,
            matched,
        });
    }
    Ok(MatchingReport { entries })
}

/// Labels of the triangle problems paired with each rhombus class.
pub fn correspondence_label(class: SymmetryClass, dirichlet: bool) -> Option<&'static str> {
    CORRESPONDENCE
        .iter()
        .find(|c| c.3 == class && c.2 == dirichlet)
        .map(|c| c.0)
        .or(match (class, dirichlet) {
            (SymmetryClass::SA, true) => Some("lambda^LS"),
            (SymmetryClass::AS, true) => Some("lambda^LM"),
            (SymmetryClass::AA, true) => Some("lambda1"),
            _ => None,
        })
}

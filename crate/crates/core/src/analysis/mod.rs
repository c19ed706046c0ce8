//! Reference spectra, explicit bounds, nodal and symmetry diagnostics.

mod bounds;
mod closed_form;
mod nodal;
mod rhombus;

pub use bounds::{
    bound_hooker_protter, bound_isosceles_upper, bound_obtuse_upper, gap_closed_form, gap_identity_residual,
    gap_quadratic, interval_bound, isobound_test_function, obtuse_test_function,
};
pub use closed_form::{closed_form, ClosedFormSpectrum, ReferenceBc, ReferenceDomain};
pub use nodal::{
    cluster_symmetry, cond_ratio, nodal_domain_count, symmetry_class, ModeSymmetry, SymmetryClass, DEFAULT_NODAL_EPS,
    SYMMETRY_THRESHOLD,
};
pub use rhombus::{
    classify_spectrum, correspondence_label, triangle_to_rhombus_matching, ClassifiedSpectrum, MatchEntry,
    MatchingReport, RhombusStudy, DEFAULT_CLUSTER_GAP,
};

//! Sweeps over domains and boundary conditions, inequality checks with
//! error-bar-aware statuses, and report export.

mod check;
mod commands;
mod plot;
mod report;

pub use check::{evaluate, InequalityCheck, Operand, Relation, Status, BAR_FACTOR};
pub use commands::{
    cmd_bounds, cmd_conjecture, cmd_order, cmd_plot, cmd_polygon_lb, cmd_rhombus, cmd_trapezium, conjecture_cells,
    BoundsGrid, ConjectureCell, ConjectureGrid, PlotDomain, PlotSpec, RunOptions, NEAR_EQUILATERAL_APEX,
    RHOMBUS_LEVELS, TRIANGLE_LEVELS,
};
pub use plot::{render_svg, ModeField};
pub use report::{Format, StatusCounts, TableEntry, VerificationReport};

/// Rounds to 15 significant digits so that exported reports are stable and
/// round-trip exactly.
pub fn canon(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.14e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

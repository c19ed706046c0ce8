//! Filled contour pictures of eigenfunctions with their nodal lines.
//!
//! Writes svg files for the second Neumann mode of a rhombus (nodal line on
//! the short diagonal), of a right triangle, and the first mixed mode of the
//! trapezium.
//!
//! ```text
//! cargo run --release --example mode_plot [output-dir]
//! ```

use std::path::PathBuf;

use trimix::verifier::{cmd_plot, Format, PlotDomain, PlotSpec, RunOptions};
use trimix::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir)?;
    let plots = [
        ("rhombus_mu2.svg", PlotDomain::Rhombus(1.2), None, 1),
        ("right_triangle_mu2.svg", PlotDomain::RightTriangle(0.5), None, 1),
        ("right_triangle_lambda_ms.svg", PlotDomain::RightTriangle(0.5), Some("DND".to_string()), 0),
        ("trapezium_sloped.svg", PlotDomain::Trapezium, Some("NNND".to_string()), 0),
    ];
    for (file, domain, bc, index) in plots {
        let spec = PlotSpec { domain, bc, index, level: 5 };
        let report = cmd_plot(&spec, &RunOptions::default())?;
        let path = dir.join(file);
        report.export(Format::Svg, &path)?;
        println!(
            "{}  eigenvalue {:.6}  nodal domains {}",
            path.display(),
            report.table[0].extrapolated,
            report.params["nodal_domains"]
        );
    }
    Ok(())
}

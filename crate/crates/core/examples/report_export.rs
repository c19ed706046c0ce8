//! Reports as json, csv and svg.
//!
//! Runs the ordering chain for one triangle with the featured eigenfunction
//! attached, writes all three formats, reads the json back and re-evaluates
//! every check from the stored operands.
//!
//! ```text
//! cargo run --release --example report_export [output-dir]
//! ```

use std::path::PathBuf;

use trimix::verifier::{cmd_order, Format, RunOptions, VerificationReport};
use trimix::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir)?;
    let opts = RunOptions {
        with_mode: true,
        ..RunOptions::default()
    };
    let report = cmd_order(0.6, &opts)?;
    for (format, ext) in [(Format::Json, "json"), (Format::Csv, "csv"), (Format::Svg, "svg")] {
        let path = dir.join(format!("order_b0.6.{ext}"));
        report.export(format, &path)?;
        println!("wrote {}", path.display());
    }
    let text = std::fs::read_to_string(dir.join("order_b0.6.json"))?;
    let back = VerificationReport::from_json(&text)?;
    assert_eq!(back, report);
    let stable = back.checks.iter().all(|c| c.reevaluate() == c.status);
    println!("json round trip equal: true, statuses reproduce: {stable}");
    Ok(())
}

//! On triangles, Dirichlet data on a longer side gives a larger first
//! eigenvalue. The trapezium `(-3,0), (3,0), (3,2), (0,2)` reverses this:
//! Dirichlet data on its sloped side (length sqrt 13) gives a smaller
//! eigenvalue than on its top (length 3).
//!
//! ```text
//! cargo run --release --example trapezium
//! ```

use trimix::verifier::{cmd_trapezium, RunOptions};
use trimix::Result;

fn main() -> Result<()> {
    let report = cmd_trapezium(&RunOptions::default())?;
    print!("{}", report.summary());
    Ok(())
}

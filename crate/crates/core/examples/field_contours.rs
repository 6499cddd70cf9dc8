//! Learnability coefficient over the z-plane, written as CSV and SVG contours.
//!
//!     cargo run --release --example field_contours -- out_dir

use std::fs;
use std::path::PathBuf;

use rklearn::grid::{evaluate_field, export_csv, render_contours, Metric, Region, DEFAULT_LEVELS};
use rklearn::{builtin, RootPolicy};

fn main() -> rklearn::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, PathBuf::from);
    fs::create_dir_all(&dir)?;
    let region = Region::new((-6.0, 2.0), (-6.0, 6.0), 240, 240)?;

    let runs = [
        ("explicit_euler", RootPolicy::ClosestToLambda, "euler"),
        ("explicit_midpoint", RootPolicy::Index(0), "midpoint_plus"),
        ("explicit_midpoint", RootPolicy::Index(1), "midpoint_minus"),
        ("rk4", RootPolicy::ClosestToLambda, "rk4"),
    ];
    for (method, policy, stem) in runs {
        let field = evaluate_field(&builtin(method)?, &region, Metric::LAlpha, policy)?;
        let csv = dir.join(format!("{stem}.csv"));
        export_csv(&field, fs::File::create(&csv)?)?;
        let svg = dir.join(format!("{stem}.svg"));
        fs::write(&svg, render_contours(&field, &DEFAULT_LEVELS)?)?;
        let defined = field.values.iter().flatten().count();
        println!(
            "{method} ({policy}): {defined} defined nodes -> {}, {}",
            csv.display(),
            svg.display()
        );
    }
    Ok(())
}

//! Learned against true dynamics: distances to every root, coefficients, and
//! continuous-time trajectories written as CSV.
//!
//!     cargo run --release --example compare -- trajectory.csv

use std::fs;

use rklearn::complex::{c64, format_complex};
use rklearn::trainer::{
    compare_with_theory, fit_mlp, generate_dataset, Preset, TrajectoryConfig, DEFAULT_HALF_WIDTH,
};
use rklearn::{builtin, solve, ProblemSpec, RootPolicy};

fn main() -> rklearn::Result<()> {
    let t = builtin("rk4")?;
    let lambda = c64(0.0, 1.5);
    let preset = Preset::Reduced;
    let data = generate_dataset(lambda, 1.0, preset.samples(), DEFAULT_HALF_WIDTH, 0)?;
    let report = fit_mlp(&t, &data, &preset.mlp(0), &preset.optimizer())?;
    let theory = solve(&t, &ProblemSpec::new(lambda, 1.0)?, RootPolicy::All)?;
    let cmp = compare_with_theory(&report, &theory, &TrajectoryConfig::default())?;

    println!("estimated alpha {}", format_complex(cmp.estimated_alpha));
    for (k, r) in cmp.roots.iter().enumerate() {
        let mark = if Some(k) == cmp.matched_index {
            "*"
        } else {
            " "
        };
        println!(
            "{mark} root {k}: {:<45} distance {:.4}",
            format_complex(r.alpha),
            r.distance
        );
    }
    println!(
        "theory    l_re {:?}  l_im {:?}",
        cmp.theory.l_real, cmp.theory.l_imag
    );
    println!(
        "empirical l_re {:?}  l_im {:?}",
        cmp.empirical.l_real, cmp.empirical.l_imag
    );
    println!(
        "learned amplitude grows: {}, true solution bounded: {}",
        cmp.amplitude_grows, cmp.true_bounded
    );

    match std::env::args().nth(1) {
        Some(path) => {
            fs::write(&path, cmp.trajectory_csv())?;
            println!("trajectory written to {path}");
        }
        None => {
            for s in cmp.trajectory.iter().step_by(40) {
                println!(
                    "t = {:5.1}  true {:+.4}  learned {:+.4}",
                    s.t, s.re_true, s.re_learned
                );
            }
        }
    }
    Ok(())
}

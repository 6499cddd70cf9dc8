//! Fitting `ẋ = αx` through one explicit midpoint step: the starting point
//! decides which learnability root is learned.
//!
//!     cargo run --release --example train_linear

use rklearn::builtin;
use rklearn::complex::{c64, format_complex};
use rklearn::trainer::{fit_linear, generate_dataset, OptimizerConfig};

fn main() -> rklearn::Result<()> {
    let t = builtin("explicit_midpoint")?;
    let data = generate_dataset(c64(0.1, 0.0), 1.0, 1000, 10.0, 0)?;
    let cfg = OptimizerConfig {
        lr: 1e-2,
        epochs: 4000,
        ..Default::default()
    };
    for init in [c64(0.1, 0.0), c64(-2.1, 0.0)] {
        let r = fit_linear(&t, &data, init, &cfg)?;
        println!(
            "init {:<10} -> alpha {:<28} root #{} {:<28} relative loss {:.1e} after {} steps",
            format_complex(init),
            format_complex(r.estimated_alpha),
            r.nearest_index,
            format_complex(r.nearest_root),
            r.relative_loss,
            r.iterations
        );
    }
    Ok(())
}

//! MLP trained through an rk4 step on `ẋ = 1.5i·x`, read back as a linear
//! coefficient and compared with the quartic's roots.
//!
//!     cargo run --release --example train_mlp -- reduced   # or smoke, full

use rklearn::builtin;
use rklearn::complex::{c64, format_complex};
use rklearn::trainer::{fit_mlp, generate_dataset, Preset, DEFAULT_HALF_WIDTH};

fn main() -> rklearn::Result<()> {
    let preset: Preset = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("reduced")
        .parse()?;
    let t = builtin("rk4")?;
    let data = generate_dataset(c64(0.0, 1.5), 1.0, preset.samples(), DEFAULT_HALF_WIDTH, 0)?;
    let r = fit_mlp(&t, &data, &preset.mlp(0), &preset.optimizer())?;

    let every = (r.loss_history.len() / 10).max(1);
    for (epoch, loss) in r.loss_history.iter().enumerate().step_by(every) {
        println!("epoch {epoch:5}  loss {loss:.4e}");
    }
    println!("final loss       {:.4e}", r.final_loss);
    println!("mean ratio       {}", format_complex(r.ratio_mean));
    println!("ratio spread     {:.4}", r.ratio_dispersion);
    println!("estimated alpha  {}", format_complex(r.estimated_alpha));
    for (k, root) in r.roots.iter().enumerate() {
        println!("root {k}           {}", format_complex(*root));
    }
    println!(
        "relative distance to root {}: {:.3e}",
        r.nearest_index,
        r.relative_distance.unwrap_or(f64::NAN)
    );
    Ok(())
}

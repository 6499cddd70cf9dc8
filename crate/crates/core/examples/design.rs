//! Chebyshev stability polynomials and how far along the negative real axis
//! the learned coefficient stays accurate.
//!
//!     cargo run --release --example design

use rklearn::design::{damping_reach, design};
use rklearn::{builtin, validate};

fn main() -> rklearn::Result<()> {
    for s in 1..=4 {
        let d = design(s, 0.3);
        println!(
            "s = {s}: R(z) = {}  reach(0.3) = {:.3}",
            d.polynomial, d.damping_reach
        );
    }

    let cheb2 = design(2, 0.3)
        .realized_tableau
        .expect("two stages are realized");
    println!(
        "\nrealized 2-stage tableau (order {}): {}",
        validate(&cheb2).detected_order,
        cheb2.to_json()
    );

    let midpoint = builtin("explicit_midpoint")?;
    println!("\n tol   cheb2   explicit_midpoint");
    for tol in [0.1, 0.2, 0.3, 0.5] {
        println!(
            "{tol:4.1}  {:6.3}  {:6.3}",
            damping_reach(&cheb2, tol),
            damping_reach(&midpoint, tol)
        );
    }
    Ok(())
}

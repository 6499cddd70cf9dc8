//! Exact stability functions `R(z) = N(z)/D(z)` and their Taylor expansions.
//!
//!     cargo run --example stability

use rklearn::complex::c64;
use rklearn::poly::format_rational;
use rklearn::{builtin, eval_stability, stability_function};

fn main() -> rklearn::Result<()> {
    for name in [
        "explicit_euler",
        "rk4",
        "cheb2",
        "implicit_euler",
        "implicit_midpoint",
    ] {
        let r = stability_function(&builtin(name)?);
        let taylor: Vec<String> = r.taylor(6).iter().map(format_rational).collect();
        println!("{name}");
        println!("  N(z) = {}", r.numerator());
        println!("  D(z) = {}", r.denominator());
        println!("  series: {}", taylor.join(", "));
        println!("  R(-1+2i) = {}", eval_stability(&r, c64(-1.0, 2.0))?);
    }

    // a pole of implicit Euler
    let r = stability_function(&builtin("implicit_euler")?);
    match eval_stability(&r, c64(1.0, 0.0)) {
        Err(e) => println!("\nimplicit_euler at z = 1: {e}"),
        Ok(v) => println!("\nimplicit_euler at z = 1: {v}"),
    }
    Ok(())
}

//! All learnability roots for one problem, with their coefficients.
//!
//!     cargo run --example solve -- 0+1.5i 1

use rklearn::complex::{format_complex, parse_complex};
use rklearn::{builtin, solve, ProblemSpec, RootPolicy};

fn main() -> rklearn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let lambda = parse_complex(args.first().map_or("0+1.5i", String::as_str))?;
    let h: f64 = args.get(1).map_or(Ok(1.0), |s| s.parse()).unwrap_or(1.0);
    let spec = ProblemSpec::new(lambda, h)?;
    println!("lambda = {}, h = {h}", format_complex(lambda));

    for name in [
        "explicit_euler",
        "explicit_midpoint",
        "rk4",
        "implicit_midpoint",
    ] {
        let result = solve(&builtin(name)?, &spec, RootPolicy::All)?;
        println!(
            "\n{name}: {} root(s), {} rejected",
            result.roots.len(),
            result.rejected.len()
        );
        for root in &result.roots {
            let c = &root.coefficients;
            println!(
                "  alpha = {:<45} l = {:<10.4e} l_re = {:<10} l_im = {:<10}  residual {:.1e}",
                format_complex(root.alpha),
                c.l_alpha.unwrap_or(f64::NAN),
                c.l_real.map_or("undefined".into(), |v| format!("{v:.4e}")),
                c.l_imag.map_or("undefined".into(), |v| format!("{v:.4e}")),
                root.residual
            );
        }
    }
    Ok(())
}

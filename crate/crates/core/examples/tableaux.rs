//! Built-in tableaux, their order conditions, and a user-supplied tableau.
//!
//!     cargo run --example tableaux

use rklearn::butcher::BUILTIN_METHODS;
use rklearn::{builtin, parse_tableau, validate};

fn main() -> rklearn::Result<()> {
    for name in BUILTIN_METHODS {
        let t = builtin(name)?;
        let report = validate(&t);
        println!(
            "{name:<18} stages {}  explicit {:<5}  order {}  c = {:?}",
            t.stages(),
            report.explicit,
            report.detected_order,
            t.c()
                .iter()
                .map(rklearn::poly::format_rational)
                .collect::<Vec<_>>()
        );
    }

    // Ralston's method; entries may be "p/q" strings or plain numbers
    let doc = r#"{"name": "ralston", "A": [[0, 0], ["2/3", 0]], "b": [0.25, "3/4"]}"#;
    let ralston = parse_tableau(doc)?;
    let report = validate(&ralston);
    println!("\n{} has order {}", ralston.name(), report.detected_order);
    println!("{}", ralston.to_json());
    Ok(())
}

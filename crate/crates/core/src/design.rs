//! Chebyshev-stabilized schemes for learning dissipative dynamics.

use serde::Serialize;

use crate::butcher::ButcherTableau;
use crate::complex::c64;
use crate::learnability::{LearnabilitySolver, ProblemSpec, RootPolicy};
use crate::poly::{format_rational, int, rat, RatPoly};
use crate::stability::{stability_function, RationalStabilityFunction};

/// Upper bound of the scanned negative interval.
pub const REACH_CAP: f64 = 50.0;
/// Right end of the scan; keeps clear of the singularity at `λ = 0`.
pub const REACH_FLOOR: f64 = 1e-3;
pub const REACH_POINTS: usize = 1000;

/// Shifted Chebyshev stability polynomial `T_s(1 + z/s²)` in monomial form.
pub fn chebyshev_stability(stages: usize) -> RatPoly {
    assert!(stages >= 1, "at least one stage");
    let s2 = int((stages * stages) as i64);
    let x = RatPoly::new(vec![int(1), int(1) / s2]);
    let two_x = x.scale(&int(2));
    let (mut prev, mut cur) = (RatPoly::one(), x);
    for _ in 1..stages {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Explicit 2-stage tableau with stability polynomial `1 + z + z²/8`:
/// `a₂₁ = 1/2`, `b = (3/4, 1/4)`.
pub fn realize_two_stage() -> ButcherTableau {
    ButcherTableau::new(
        "cheb2",
        vec![vec![int(0), int(0)], vec![rat(1, 2), int(0)]],
        vec![rat(3, 4), rat(1, 4)],
    )
    .expect("2x2 tableau")
}

/// Largest `r₀ ≤ 50` with `ℓ_α ≤ tol` along the negative real axis.
///
/// Scans `REACH_POINTS` uniform points from `−1e-3` to `−50` and stops at the
/// first violation; `r₀` is the magnitude of the last passing point, 0 when
/// the first point already fails. Unsolvable points count as violations.
pub fn damping_reach(t: &ButcherTableau, tol: f64) -> f64 {
    damping_reach_of(&stability_function(t), tol)
}

pub fn damping_reach_of(stability: &RationalStabilityFunction, tol: f64) -> f64 {
    assert!(tol > 0.0, "tolerance must be positive");
    let solver = LearnabilitySolver::new(stability.clone());
    let step = (REACH_CAP - REACH_FLOOR) / (REACH_POINTS - 1) as f64;
    let mut reach = 0.0;
    for k in 0..REACH_POINTS {
        let r = if k + 1 == REACH_POINTS {
            REACH_CAP
        } else {
            REACH_FLOOR + step * k as f64
        };
        let ok = ProblemSpec::new(c64(-r, 0.0), 1.0)
            .and_then(|spec| solver.solve(&spec, RootPolicy::ClosestToLambda))
            .ok()
            .and_then(|res| res.coefficients.l_alpha)
            .is_some_and(|l| l <= tol);
        if !ok {
            break;
        }
        reach = r;
    }
    reach
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignedScheme {
    pub stages: usize,
    /// Monomial coefficients as `p/q` strings, lowest degree first.
    pub stability_poly: Vec<String>,
    #[serde(skip)]
    pub polynomial: RatPoly,
    #[serde(serialize_with = "serialize_tableau")]
    pub realized_tableau: Option<ButcherTableau>,
    pub tolerance: f64,
    pub damping_reach: f64,
}

fn serialize_tableau<S: serde::Serializer>(
    t: &Option<ButcherTableau>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match t {
        Some(t) => {
            let v: serde_json::Value =
                serde_json::from_str(&t.to_json()).map_err(serde::ser::Error::custom)?;
            v.serialize(s)
        }
        None => s.serialize_none(),
    }
}

/// Chebyshev design with `stages` stages, its reach measured at `tol`.
///
/// Only the 2-stage polynomial is realized as a tableau; larger designs are
/// analyzed straight from the polynomial.
pub fn design(stages: usize, tol: f64) -> DesignedScheme {
    let polynomial = chebyshev_stability(stages);
    let realized_tableau = (stages == 2).then(realize_two_stage);
    let stability = RationalStabilityFunction::from_polynomial(polynomial.clone());
    DesignedScheme {
        stages,
        stability_poly: polynomial
            .trimmed()
            .coeffs()
            .iter()
            .map(format_rational)
            .collect(),
        damping_reach: damping_reach_of(&stability, tol),
        polynomial,
        realized_tableau,
        tolerance: tol,
    }
}

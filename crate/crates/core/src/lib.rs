//! Learnability analysis of Runge–Kutta integrators.
//!
//! When a dynamics model `ẋ = f̂(x)` is fitted to sampled trajectories by
//! comparing data with one integrator step of the model, the integrator's
//! discretization error is absorbed into the learned vector field. On the
//! linear test problem `ẋ = λx` this shows up exactly: a perfectly trained
//! linear model `ẋ = αx` satisfies `R(hα) = e^{hλ}`, where `R` is the
//! method's stability function, and the relative error `|α − λ| / |λ|` is the
//! *learnability coefficient*.
//!
//! The crate is organized as:
//!
//! - [`butcher`]: tableaux with exact rational entries, a registry, JSON I/O,
//!   order-condition checks.
//! - [`stability`]: the exact stability function `N(z)/D(z)`.
//! - [`learnability`]: all roots `α`, root selection, coefficients.
//! - [`grid`]: coefficient fields over the complex plane, CSV and SVG contours.
//! - [`design`]: Chebyshev stability polynomials and damping reach.
//! - [`trainer`]: data generation, linear and MLP models trained through an
//!   RK step, and comparison with the theory.
//! - [`cli`]: the `rklearn` command line.
//!
//! Runnable examples live in `examples/`, one per capability.

pub mod butcher;
pub mod cli;
pub mod complex;
pub mod design;
pub mod error;
pub mod grid;
pub mod learnability;
pub mod poly;
pub mod roots;
pub mod stability;
pub mod trainer;

pub use butcher::{builtin, parse_tableau, validate, ButcherTableau, ValidationReport};
pub use complex::C64;
pub use error::{Error, Result};
pub use learnability::{
    coefficients, learnability_roots, select_alpha, solve, Coefficients, LearnabilityResult,
    LearnabilitySolver, ProblemSpec, RootPolicy,
};
pub use stability::{eval_stability, stability_function, RationalStabilityFunction};

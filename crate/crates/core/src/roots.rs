//! Aberth–Ehrlich simultaneous root finding for complex polynomials.

use crate::complex::{c64, C64};
use crate::error::{Error, Result};
use crate::poly::horner;

pub const MAX_ITERATIONS: usize = 500;

/// Relative magnitude under which a leading coefficient is treated as zero.
pub const LEADING_ZERO_TOL: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<C64>,
    pub iterations: usize,
    pub converged: bool,
    /// Nominal degree minus the numeric degree after trimming.
    pub deficiency: usize,
}

/// Numeric degree of `coeffs` (lowest first) after dropping negligible leading terms.
pub fn numeric_degree(coeffs: &[C64]) -> usize {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if scale == 0.0 {
        return 0;
    }
    coeffs
        .iter()
        .rposition(|c| c.norm() > LEADING_ZERO_TOL * scale)
        .unwrap_or(0)
}

/// All roots of `Σ coeffs[k] z^k`, with multiplicity.
///
/// `accept` decides whether an unconverged iterate is still good enough; when it
/// rejects any root after [`MAX_ITERATIONS`], a convergence error carries the
/// best iterate.
pub fn find_roots(coeffs: &[C64], accept: impl Fn(C64) -> bool) -> Result<RootSet> {
    let degree = numeric_degree(coeffs);
    let deficiency = coeffs.len().saturating_sub(1) - degree;
    if degree == 0 {
        return Err(Error::NoRoots);
    }
    let lead = coeffs[degree];
    let monic: Vec<C64> = coeffs[..=degree].iter().map(|c| c / lead).collect();
    let deriv: Vec<C64> = (1..=degree).map(|k| monic[k] * k as f64).collect();

    if degree == 1 {
        return Ok(RootSet {
            roots: vec![-monic[0]],
            iterations: 0,
            converged: true,
            deficiency,
        });
    }

    let mut z = initial_guesses(&monic);
    let mut done = vec![false; degree];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let p = horner(&monic, z[i]);
            if p == c64(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let ratio = p / horner(&deriv, z[i]);
            let repulsion: C64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (c64(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // coincident iterates: nudge apart deterministically
                let nudge = c64(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
    }

    for root in z.iter_mut() {
        *root = polish(&monic, &deriv, *root);
    }

    let converged = done.iter().all(|d| *d);
    if !converged && !z.iter().all(|&r| accept(r)) {
        return Err(Error::Convergence {
            iterations,
            best: z,
        });
    }
    Ok(RootSet {
        roots: z,
        iterations,
        converged,
        deficiency,
    })
}

/// Points on a circle of radius `1 + max |c_k / c_n|` with an irrational offset.
fn initial_guesses(monic: &[C64]) -> Vec<C64> {
    let n = monic.len() - 1;
    let radius = 1.0 + monic[..n].iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            C64::from_polar(radius, theta)
        })
        .collect()
}

/// A few Newton steps, each kept only if it lowers `|p|`.
fn polish(monic: &[C64], deriv: &[C64], mut z: C64) -> C64 {
    let mut best = horner(monic, z).norm();
    for _ in 0..3 {
        if best == 0.0 {
            break;
        }
        let d = horner(deriv, z);
        if d == c64(0.0, 0.0) {
            break;
        }
        let cand = z - horner(monic, z) / d;
        let val = horner(monic, cand).norm();
        if val < best {
            z = cand;
            best = val;
        } else {
            break;
        }
    }
    z
}

/// Size of the cluster (within `rel` relative distance) each root belongs to.
pub fn multiplicities(roots: &[C64], rel: f64) -> Vec<usize> {
    roots
        .iter()
        .map(|&a| {
            roots
                .iter()
                .filter(|&&b| (a - b).norm() <= rel * a.norm().max(1.0))
                .count()
        })
        .collect()
}

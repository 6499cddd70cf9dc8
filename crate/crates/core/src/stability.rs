//! Stability function `R(z) = 1 + z bᵀ(I − zA)⁻¹𝟙` as an exact ratio `N(z) / D(z)`.
//!
//! Both polynomials come from characteristic polynomials:
//! `D(z) = det(I − zA)` and `N(z) = det(I − zA + z𝟙bᵀ)`. Common factors are
//! kept so root bookkeeping downstream sees the raw degrees.

use num_traits::{Signed, Zero};

use crate::butcher::ButcherTableau;
use crate::complex::C64;
use crate::error::{Error, Result};
use crate::poly::{horner_real, int, to_f64, RatPoly, Rational};

/// Relative pole threshold on `|D(z)|`, scaled by the largest `|D_k|`.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalStabilityFunction {
    numerator: RatPoly,
    denominator: RatPoly,
    num_f64: Vec<f64>,
    den_f64: Vec<f64>,
}

impl RationalStabilityFunction {
    pub fn new(numerator: RatPoly, denominator: RatPoly) -> Self {
        let num_f64 = numerator.to_f64();
        let den_f64 = denominator.to_f64();
        Self {
            numerator,
            denominator,
            num_f64,
            den_f64,
        }
    }

    /// A method known only through its stability polynomial (`D ≡ 1`).
    pub fn from_polynomial(poly: RatPoly) -> Self {
        Self::new(poly, RatPoly::one())
    }

    pub fn numerator(&self) -> &RatPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &RatPoly {
        &self.denominator
    }

    pub fn numerator_f64(&self) -> &[f64] {
        &self.num_f64
    }

    pub fn denominator_f64(&self) -> &[f64] {
        &self.den_f64
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.degree() == 0
    }

    /// Absolute threshold below which `|D(z)|` counts as a pole.
    pub fn pole_threshold(&self) -> f64 {
        let scale = self.den_f64.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        POLE_TOLERANCE * scale
    }

    pub fn eval_numerator(&self, z: C64) -> C64 {
        horner_real(&self.num_f64, z)
    }

    pub fn eval_denominator(&self, z: C64) -> C64 {
        horner_real(&self.den_f64, z)
    }

    /// `N(z)/D(z)` in complex floating point.
    pub fn eval(&self, z: C64) -> Result<C64> {
        let d = self.eval_denominator(z);
        if d.norm() < self.pole_threshold() {
            return Err(Error::Pole { z });
        }
        Ok(self.eval_numerator(z) / d)
    }

    /// First `terms` Taylor coefficients of `N/D` at the origin.
    pub fn taylor(&self, terms: usize) -> Vec<Rational> {
        self.numerator.series_div(&self.denominator, terms)
    }
}

/// Exact stability function of a tableau.
pub fn stability_function(t: &ButcherTableau) -> RationalStabilityFunction {
    let a = t.a().to_vec();
    let b = t.b();
    // A − 𝟙bᵀ: every row shifted by −b
    let shifted: Vec<Vec<Rational>> = a
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, bj)| x - bj).collect())
        .collect();
    RationalStabilityFunction::new(det_one_minus_z(&shifted), det_one_minus_z(&a))
}

/// `eval_stability` in free-function form.
pub fn eval_stability(r: &RationalStabilityFunction, z: C64) -> Result<C64> {
    r.eval(z)
}

/// `det(I − zM)` via Faddeev–LeVerrier: with `det(tI − M) = Σ c_k t^{p−k}`,
/// the reversed coefficients give `det(I − zM) = Σ c_k z^k`.
fn det_one_minus_z(m: &[Vec<Rational>]) -> RatPoly {
    let p = m.len();
    let mut coeffs = vec![int(1)];
    let mut mk = vec![vec![Rational::zero(); p]; p];
    for k in 1..=p {
        // M_k = M·M_{k−1} + c_{k−1} I
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[k - 1];
        }
        mk = next;
        let trace = (0..p).fold(Rational::zero(), |acc, i| {
            acc + (0..p).fold(Rational::zero(), |s, j| s + &m[i][j] * &mk[j][i])
        });
        coeffs.push(-trace / int(k as i64));
    }
    RatPoly::new(coeffs)
}

fn mat_mul(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Rational::zero(), |s, k| {
                        if x[i][k].is_zero() {
                            s
                        } else {
                            s + &x[i][k] * &y[k][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Largest coefficient magnitude, for scaling tolerances.
pub fn max_abs_coeff(p: &RatPoly) -> f64 {
    p.coeffs()
        .iter()
        .fold(0.0_f64, |m, c| m.max(to_f64(&c.abs())))
}

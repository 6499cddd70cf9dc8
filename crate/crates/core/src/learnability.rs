//! Learnability equation `R(hα) = e^{hλ}` and the learnability coefficients.
//!
//! With `w = hα` and `R = N/D`, the admissible `α` are the roots of
//! `P(w) = N(w) − e^{hλ} D(w)` that are not poles of `R`. Each root is one
//! linear model `ẋ = αx` that reproduces the data exactly under the method.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::butcher::ButcherTableau;
use crate::complex::{c64, expm1, C64};
use crate::error::{Error, Result};
use crate::poly::horner;
use crate::roots::{find_roots, multiplicities};
use crate::stability::{stability_function, RationalStabilityFunction};

/// Roots must satisfy `|P(w)| <= RESIDUAL_TOLERANCE * max(1, |e^z|)`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Relative distance under which roots are reported as one cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;
/// Largest `|Re(hλ)|` before `e^{hλ}` is considered to overflow.
pub const EXP_LIMIT: f64 = 700.0;
/// Relative gap under which two distances to `λ` count as a tie.
const TIE_TOLERANCE: f64 = 1e-9;

/// A test problem `ẋ = λx` sampled with step `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProblemSpec {
    lambda: C64,
    h: f64,
}

impl ProblemSpec {
    pub fn new(lambda: C64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "step size must be positive, got {h}"
            )));
        }
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::InvalidProblem("lambda must be finite".into()));
        }
        Ok(Self { lambda, h })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `z = hλ`.
    pub fn z(&self) -> C64 {
        self.lambda * self.h
    }

    pub fn conj(&self) -> Self {
        Self {
            lambda: self.lambda.conj(),
            h: self.h,
        }
    }

    fn exp_z(&self) -> Result<(C64, C64)> {
        let z = self.z();
        if z.re.abs() > EXP_LIMIT {
            return Err(Error::ExpOverflow { re: z.re.abs() });
        }
        let em1 = expm1(z);
        Ok((em1 + 1.0, em1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootPolicy {
    ClosestToLambda,
    All,
    Index(usize),
}

impl FromStr for RootPolicy {
    type Err = Error;

    /// `closest`, `all`, `index:K` or a bare index `K`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "closest" | "closest_to_lambda" => Ok(Self::ClosestToLambda),
            "all" => Ok(Self::All),
            _ => lower
                .strip_prefix("index:")
                .unwrap_or(&lower)
                .parse::<usize>()
                .map(Self::Index)
                .map_err(|_| Error::InvalidArgument(format!("unknown root policy `{s}`"))),
        }
    }
}

impl fmt::Display for RootPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ClosestToLambda => write!(f, "closest"),
            Self::All => write!(f, "all"),
            Self::Index(k) => write!(f, "index:{k}"),
        }
    }
}

/// Learnability coefficients of one `α`; `None` marks an undefined value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Coefficients {
    pub l_alpha: Option<f64>,
    pub l_real: Option<f64>,
    pub l_imag: Option<f64>,
    pub mu: Option<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LearnabilityRoot {
    pub alpha: C64,
    pub residual: f64,
    pub multiplicity: usize,
    pub coefficients: Coefficients,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LearnabilityResult {
    pub spec: ProblemSpec,
    pub policy: RootPolicy,
    /// Surviving roots sorted by distance to `λ` (ties by principal argument).
    pub roots: Vec<LearnabilityRoot>,
    /// Roots of `P` discarded because `D(hα)` vanishes there.
    pub rejected: Vec<C64>,
    /// Degree lost because the leading coefficient of `P` cancelled.
    pub deficiency: usize,
    pub selected: Option<C64>,
    pub selected_index: Option<usize>,
    pub coefficients: Coefficients,
}

impl LearnabilityResult {
    pub fn alphas(&self) -> Vec<C64> {
        self.roots.iter().map(|r| r.alpha).collect()
    }

    /// Nominal degree of `P` this result accounts for.
    pub fn accounted_degree(&self) -> usize {
        self.roots.len() + self.rejected.len() + self.deficiency
    }
}

/// Reusable solver bound to one stability function.
#[derive(Clone, Debug)]
pub struct LearnabilitySolver {
    stability: RationalStabilityFunction,
}

/// Roots of `N(w) − target·D(w)` before division by `h`.
#[derive(Clone, Debug)]
struct ScaledRoots {
    w: Vec<C64>,
    residuals: Vec<f64>,
    rejected: Vec<C64>,
    deficiency: usize,
}

impl LearnabilitySolver {
    pub fn new(stability: RationalStabilityFunction) -> Self {
        Self { stability }
    }

    pub fn for_tableau(t: &ButcherTableau) -> Self {
        Self::new(stability_function(t))
    }

    pub fn stability(&self) -> &RationalStabilityFunction {
        &self.stability
    }

    /// Nominal degree of `P`: the larger of `deg N` and `deg D`.
    pub fn nominal_degree(&self) -> usize {
        self.stability
            .numerator()
            .degree()
            .max(self.stability.denominator().degree())
    }

    /// `target_m1 = target − 1`, passed separately so that the constant term
    /// `N(0) − target·D(0) = −(target − 1)` keeps full precision.
    fn scaled_roots(&self, target: C64, target_m1: C64) -> Result<ScaledRoots> {
        let num = self.stability.numerator_f64();
        let den = self.stability.denominator_f64();
        let len = self.nominal_degree() + 1;
        let coeff = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        let poly: Vec<C64> = (0..len)
            .map(|k| {
                if k == 0 {
                    // N(0) = D(0) = 1
                    -target_m1
                } else {
                    c64(coeff(num, k), 0.0) - target * coeff(den, k)
                }
            })
            .collect();

        let tol = RESIDUAL_TOLERANCE * target.norm().max(1.0);
        let set = find_roots(&poly, |w| horner(&poly, w).norm() <= tol)?;

        let pole = self.stability.pole_threshold();
        let mut out = ScaledRoots {
            w: Vec::new(),
            residuals: Vec::new(),
            rejected: Vec::new(),
            deficiency: set.deficiency,
        };
        for w in set.roots {
            if self.stability.eval_denominator(w).norm() < pole {
                out.rejected.push(w);
            } else {
                out.residuals.push(horner(&poly, w).norm());
                out.w.push(w);
            }
        }
        Ok(out)
    }

    /// Admissible `α` for the problem, unsorted.
    pub fn roots(&self, spec: &ProblemSpec) -> Result<Vec<C64>> {
        let (e, em1) = spec.exp_z()?;
        let scaled = self.scaled_roots(e, em1)?;
        Ok(scaled.w.into_iter().map(|w| w / spec.h()).collect())
    }

    /// Roots of `R(hα) = ratio`, for inverting an observed one-step ratio.
    pub fn roots_for_ratio(&self, ratio: C64, h: f64) -> Result<Vec<C64>> {
        let scaled = self.scaled_roots(ratio, ratio - 1.0)?;
        Ok(scaled.w.into_iter().map(|w| w / h).collect())
    }

    pub fn solve(&self, spec: &ProblemSpec, policy: RootPolicy) -> Result<LearnabilityResult> {
        let (e, em1) = spec.exp_z()?;
        let scaled = self.scaled_roots(e, em1)?;
        let h = spec.h();
        let alphas: Vec<C64> = scaled.w.iter().map(|w| w / h).collect();
        let order = sort_order(&alphas, spec.lambda());
        let mult = multiplicities(&scaled.w, CLUSTER_TOLERANCE);

        let roots: Vec<LearnabilityRoot> = order
            .iter()
            .map(|&i| LearnabilityRoot {
                alpha: alphas[i],
                residual: scaled.residuals[i],
                multiplicity: mult[i],
                coefficients: coefficients(alphas[i], spec),
            })
            .collect();
        let rejected = scaled.rejected.iter().map(|w| w / h).collect();

        let selected_index = match policy {
            RootPolicy::All => None,
            _ if roots.is_empty() => return Err(Error::EmptyRoots),
            RootPolicy::ClosestToLambda => Some(0),
            RootPolicy::Index(k) if k < roots.len() => Some(k),
            RootPolicy::Index(k) => {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    len: roots.len(),
                })
            }
        };
        let selected = selected_index.map(|i| roots[i].alpha);
        let coefficients = selected_index
            .map(|i| roots[i].coefficients)
            .unwrap_or_default();

        Ok(LearnabilityResult {
            spec: *spec,
            policy,
            roots,
            rejected,
            deficiency: scaled.deficiency,
            selected,
            selected_index,
            coefficients,
        })
    }
}

/// All admissible `α` for the tableau, unsorted.
pub fn learnability_roots(t: &ButcherTableau, spec: &ProblemSpec) -> Result<Vec<C64>> {
    LearnabilitySolver::for_tableau(t).roots(spec)
}

pub fn solve(
    t: &ButcherTableau,
    spec: &ProblemSpec,
    policy: RootPolicy,
) -> Result<LearnabilityResult> {
    LearnabilitySolver::for_tableau(t).solve(spec, policy)
}

/// Orders by `|α − λ|`, near-ties broken by ascending principal argument.
fn closer(a: C64, b: C64, lambda: C64) -> Ordering {
    let (da, db) = ((a - lambda).norm(), (b - lambda).norm());
    if (da - db).abs() <= TIE_TOLERANCE * da.max(db) {
        a.arg().total_cmp(&b.arg())
    } else {
        da.total_cmp(&db)
    }
}

/// Indices of `alphas` in policy order. Insertion sort: the tie-aware
/// comparison is not transitive, which `slice::sort_by` does not allow.
fn sort_order(alphas: &[C64], lambda: C64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..alphas.len()).collect();
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && closer(alphas[idx[j]], alphas[idx[j - 1]], lambda) == Ordering::Less {
            idx.swap(j, j - 1);
            j -= 1;
        }
    }
    idx
}

/// Sorts roots into policy order.
pub fn sort_roots(roots: &[C64], lambda: C64) -> Vec<C64> {
    sort_order(roots, lambda)
        .into_iter()
        .map(|i| roots[i])
        .collect()
}

pub fn select_alpha(roots: &[C64], spec: &ProblemSpec, policy: RootPolicy) -> Result<C64> {
    if roots.is_empty() {
        return Err(Error::EmptyRoots);
    }
    let sorted = sort_roots(roots, spec.lambda());
    match policy {
        RootPolicy::ClosestToLambda => Ok(sorted[0]),
        RootPolicy::All => Err(Error::PolicyAll),
        RootPolicy::Index(k) => sorted.get(k).copied().ok_or(Error::IndexOutOfRange {
            index: k,
            len: sorted.len(),
        }),
    }
}

/// Relative modeling error of `α` overall and per component.
///
/// Everything is undefined at `λ = 0`. Otherwise a component whose `λ` part
/// is zero is undefined unless the `α` part matches it exactly, which gives 0.
pub fn coefficients(alpha: C64, spec: &ProblemSpec) -> Coefficients {
    let lambda = spec.lambda();
    if lambda == c64(0.0, 0.0) {
        return Coefficients::default();
    }
    let component = |a: f64, l: f64| {
        if l == 0.0 {
            (a == 0.0).then_some(0.0)
        } else {
            Some(((a - l) / l).abs())
        }
    };
    Coefficients {
        l_alpha: Some((alpha - lambda).norm() / lambda.norm()),
        l_real: component(alpha.re, lambda.re),
        l_imag: component(alpha.im, lambda.im),
        mu: Some(alpha / lambda),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::butcher::builtin;
    use std::f64::consts::PI;

    fn spec(l: C64, h: f64) -> ProblemSpec {
        ProblemSpec::new(l, h).unwrap()
    }

    #[test]
    fn euler_at_i_pi() {
        let r = solve(
            &builtin("explicit_euler").unwrap(),
            &spec(c64(0.0, PI), 1.0),
            RootPolicy::ClosestToLambda,
        )
        .unwrap();
        assert_eq!(r.roots.len(), 1);
        let a = r.selected.unwrap();
        assert!((a - c64(-2.0, 0.0)).norm() < 1e-15);
        assert!(r.roots[0].residual < 1e-12);
        let c = r.coefficients;
        assert!((c.l_alpha.unwrap() - (4.0 + PI * PI).sqrt() / PI).abs() < 1e-12);
        assert_eq!(c.l_real, None);
        assert!((c.l_imag.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn midpoint_at_zero() {
        let t = builtin("explicit_midpoint").unwrap();
        let s = spec(c64(0.0, 0.0), 1.0);
        let roots = learnability_roots(&t, &s).unwrap();
        let sorted = sort_roots(&roots, s.lambda());
        assert!(sorted[0].norm() < 1e-15);
        assert!((sorted[1] + 2.0).norm() < 1e-14);
        let second = select_alpha(&roots, &s, RootPolicy::Index(1)).unwrap();
        assert!((second + 2.0).norm() < 1e-14);
    }

    #[test]
    fn midpoint_prefers_the_approximating_branch() {
        let t = builtin("explicit_midpoint").unwrap();
        let s = spec(c64(0.1, 0.0), 1.0);
        let roots = learnability_roots(&t, &s).unwrap();
        let plus = (-1.0 + (2.0 * s.z().exp() - 1.0).sqrt()) / s.h();
        let a = select_alpha(&roots, &s, RootPolicy::ClosestToLambda).unwrap();
        assert!((a - plus).norm() < 1e-12);
    }

    #[test]
    fn single_root_returned_unchanged() {
        let s = spec(c64(0.3, 0.2), 1.0);
        let a = c64(-0.7, 0.1);
        assert_eq!(
            select_alpha(&[a], &s, RootPolicy::ClosestToLambda).unwrap(),
            a
        );
    }

    #[test]
    fn select_errors() {
        let s = spec(c64(1.0, 0.0), 1.0);
        assert!(matches!(
            select_alpha(&[], &s, RootPolicy::ClosestToLambda),
            Err(Error::EmptyRoots)
        ));
        assert!(matches!(
            select_alpha(&[c64(1.0, 0.0)], &s, RootPolicy::Index(1)),
            Err(Error::IndexOutOfRange { index: 1, len: 1 })
        ));
        assert!(matches!(
            select_alpha(&[c64(1.0, 0.0)], &s, RootPolicy::All),
            Err(Error::PolicyAll)
        ));
    }

    #[test]
    fn ties_break_by_argument() {
        let s = spec(c64(1.0, 0.0), 1.0);
        let up = c64(1.0, 0.5);
        let down = c64(1.0, -0.5);
        assert_eq!(
            select_alpha(&[up, down], &s, RootPolicy::ClosestToLambda).unwrap(),
            down
        );
        assert_eq!(
            select_alpha(&[down, up], &s, RootPolicy::ClosestToLambda).unwrap(),
            down
        );
    }

    #[test]
    fn coefficient_conventions() {
        let l = c64(0.4, -1.3);
        let c = coefficients(l, &spec(l, 1.0));
        assert_eq!(c.l_alpha, Some(0.0));
        assert_eq!(c.l_real, Some(0.0));
        assert_eq!(c.l_imag, Some(0.0));
        assert_eq!(c.mu, Some(c64(1.0, 0.0)));

        assert_eq!(
            coefficients(c64(0.0, 0.0), &spec(c64(0.0, 0.0), 1.0)),
            Coefficients::default()
        );

        // purely imaginary λ, purely imaginary α: real part matches exactly
        let c = coefficients(c64(0.0, 2.0), &spec(c64(0.0, 1.0), 1.0));
        assert_eq!(c.l_real, Some(0.0));
        assert_eq!(c.l_imag, Some(1.0));
    }

    #[test]
    fn rk4_at_zero_has_root_at_origin() {
        let r = solve(
            &builtin("rk4").unwrap(),
            &spec(c64(0.0, 0.0), 1.0),
            RootPolicy::ClosestToLambda,
        )
        .unwrap();
        assert_eq!(r.roots.len(), 4);
        assert!(r.selected.unwrap().norm() < 1e-14);
        assert_eq!(r.coefficients, Coefficients::default());
    }

    #[test]
    fn implicit_euler_root_survives_when_exp_is_one() {
        let s = spec(c64(0.0, 2.0 * PI), 1.0);
        let r = solve(
            &builtin("implicit_euler").unwrap(),
            &s,
            RootPolicy::ClosestToLambda,
        )
        .unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!(r.rejected.is_empty());
        assert!(r.selected.unwrap().norm() < 1e-14);
    }

    #[test]
    fn implicit_midpoint_loses_degree_when_exp_is_minus_one() {
        // P(w) = (1 − e^z) + w (1 + e^z)/2; leading term cancels at e^z = −1
        let s = spec(c64(0.0, PI), 1.0);
        let r = solve(&builtin("implicit_midpoint").unwrap(), &s, RootPolicy::All);
        assert!(matches!(r, Err(Error::NoRoots)), "{r:?}");
    }

    #[test]
    fn overflow_guard() {
        let s = spec(c64(800.0, 0.0), 1.0);
        assert!(matches!(
            learnability_roots(&builtin("rk4").unwrap(), &s),
            Err(Error::ExpOverflow { .. })
        ));
    }

    #[test]
    fn all_policy_leaves_selection_empty() {
        let r = solve(
            &builtin("rk4").unwrap(),
            &spec(c64(0.0, 1.5), 1.0),
            RootPolicy::All,
        )
        .unwrap();
        assert_eq!(r.selected, None);
        assert_eq!(r.roots.len(), 4);
        assert_eq!(r.accounted_degree(), 4);
    }

    #[test]
    fn policy_parsing() {
        assert_eq!(
            "closest".parse::<RootPolicy>().unwrap(),
            RootPolicy::ClosestToLambda
        );
        assert_eq!("ALL".parse::<RootPolicy>().unwrap(), RootPolicy::All);
        assert_eq!(
            "index:2".parse::<RootPolicy>().unwrap(),
            RootPolicy::Index(2)
        );
        assert_eq!("1".parse::<RootPolicy>().unwrap(), RootPolicy::Index(1));
        assert!("nearest".parse::<RootPolicy>().is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(ProblemSpec::new(c64(1.0, 0.0), 0.0).is_err());
        assert!(ProblemSpec::new(c64(1.0, 0.0), -1.0).is_err());
        assert!(ProblemSpec::new(c64(f64::NAN, 0.0), 1.0).is_err());
    }
}

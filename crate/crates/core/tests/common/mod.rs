//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rklearn::ButcherTableau;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub const EXPLICIT: [&str; 5] = [
    "explicit_euler",
    "explicit_midpoint",
    "heun2",
    "rk4",
    "cheb2",
];

/// `R(z) = 1 + z bᵀ(I − zA)⁻¹𝟙` by a dense complex LU solve.
pub fn stability_direct(t: &ButcherTableau, z: C) -> Option<C> {
    let s = t.stages();
    let a = t.a_f64();
    let b = t.b_f64();
    let m = DMatrix::from_fn(s, s, |i, j| {
        let id = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
        id - z * a[i][j]
    });
    let k = m.lu().solve(&DVector::from_element(s, c(1.0, 0.0)))?;
    let dot: C = (0..s).map(|i| k[i] * b[i]).sum();
    Some(c(1.0, 0.0) + z * dot)
}

/// Roots of `Σ coeffs[k] wᵏ` as eigenvalues of the companion matrix.
pub fn companion_roots(coeffs: &[C]) -> Vec<C> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if n == 1 {
        return vec![-coeffs[0] / lead];
    }
    let mut m = DMatrix::from_element(n, n, c(0.0, 0.0));
    for i in 1..n {
        m[(i, i - 1)] = c(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::new(m);
    schur
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

/// Explicit stability polynomial coefficients `1, bᵀ𝟙, bᵀA𝟙, bᵀA²𝟙, ...`.
pub fn explicit_poly(t: &ButcherTableau) -> Vec<f64> {
    let s = t.stages();
    let a = t.a_f64();
    let b = t.b_f64();
    let mut out = vec![1.0];
    let mut v = vec![1.0; s];
    for _ in 0..s {
        out.push((0..s).map(|i| b[i] * v[i]).sum());
        v = (0..s)
            .map(|i| (0..s).map(|j| a[i][j] * v[j]).sum())
            .collect();
    }
    out
}

/// Greedy one-to-one matching; returns the largest pair distance.
pub fn multiset_distance(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len(), "sizes differ: {a:?} vs {b:?}");
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// `(e^z − 1)/h`.
pub fn euler_root(lambda: C, h: f64) -> C {
    ((lambda * h).exp() - 1.0) / h
}

/// `(−1 ± √(2e^{hλ} − 1))/h`, principal square root.
pub fn midpoint_roots(lambda: C, h: f64) -> [C; 2] {
    let s = ((lambda * h).exp() * 2.0 - 1.0).sqrt();
    [(s - 1.0) / h, (-s - 1.0) / h]
}

/// Relative error `‖analytic − fd‖ / max(‖analytic‖, ‖fd‖)` of the loss
/// gradient against central differences with step `1e-6`.
pub fn gradient_error<M: rklearn::trainer::VectorField + Clone>(
    scheme: &rklearn::trainer::ExplicitScheme,
    model: &M,
    pairs: &[(C, C)],
    h: f64,
) -> f64 {
    use rklearn::trainer::{loss_and_grad, mse};
    let (_, analytic) = loss_and_grad(scheme, model, pairs, h);
    let base = model.params();
    let step = 1e-6;
    let mut probe = model.clone();
    let fd: Vec<f64> = (0..base.len())
        .map(|k| {
            let mut p = base.clone();
            p[k] = base[k] + step;
            probe.set_params(&p);
            let up = mse(scheme, &probe, pairs, h);
            p[k] = base[k] - step;
            probe.set_params(&p);
            let down = mse(scheme, &probe, pairs, h);
            (up - down) / (2.0 * step)
        })
        .collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = analytic.iter().zip(&fd).map(|(a, b)| a - b).collect();
    norm(&diff) / norm(&analytic).max(norm(&fd)).max(1e-300)
}

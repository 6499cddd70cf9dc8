//! Trainable vector fields `f̂: ℂ → ℂ` with reverse-mode derivatives.
//!
//! Gradients with respect to a complex quantity `y = u + iv` are carried as
//! the complex number `∂L/∂u + i ∂L/∂v`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{c64, C64};

pub trait VectorField: Sync {
    /// Per-evaluation intermediates needed by `backward`; reused between calls.
    type Cache: Clone + Default + Send;

    fn num_params(&self) -> usize;
    fn params(&self) -> Vec<f64>;
    fn set_params(&mut self, params: &[f64]);

    fn forward(&self, x: C64, cache: &mut Self::Cache) -> C64;

    /// Adds `∂L/∂θ` into `grads` and returns `∂L/∂x`, given `∂L/∂f̂(x)`.
    fn backward(&self, x: C64, cache: &Self::Cache, grad_out: C64, grads: &mut [f64]) -> C64;

    fn eval(&self, x: C64) -> C64 {
        self.forward(x, &mut Self::Cache::default())
    }

    /// The coefficient `α` when the field is exactly `αx`.
    fn linear_coefficient(&self) -> Option<C64> {
        None
    }
}

/// `f̂(x) = αx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearModel {
    pub alpha: C64,
}

impl LinearModel {
    pub fn new(alpha: C64) -> Self {
        Self { alpha }
    }
}

impl VectorField for LinearModel {
    type Cache = ();

    fn num_params(&self) -> usize {
        2
    }

    fn params(&self) -> Vec<f64> {
        vec![self.alpha.re, self.alpha.im]
    }

    fn set_params(&mut self, params: &[f64]) {
        self.alpha = c64(params[0], params[1]);
    }

    fn forward(&self, x: C64, _: &mut ()) -> C64 {
        self.alpha * x
    }

    fn linear_coefficient(&self) -> Option<C64> {
        Some(self.alpha)
    }

    fn backward(&self, x: C64, _: &(), grad_out: C64, grads: &mut [f64]) -> C64 {
        let g_alpha = x.conj() * grad_out;
        grads[0] += g_alpha.re;
        grads[1] += g_alpha.im;
        self.alpha.conj() * grad_out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub hidden: usize,
    /// Seed for weight initialization.
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: 200,
            seed: 0,
        }
    }
}

/// `2 → H → 2` perceptron with a `tanh` hidden layer acting on `(Re x, Im x)`.
///
/// Parameter layout: `W1` (`H×2`, row-major), `b1` (`H`), `W2` (`2×H`,
/// row-major), `b2` (`2`).
#[derive(Clone, Debug, PartialEq)]
pub struct MlpModel {
    hidden: usize,
    params: Vec<f64>,
}

impl MlpModel {
    /// Weights and biases uniform in `±1/√fan_in`.
    pub fn new(cfg: &MlpConfig) -> Self {
        let h = cfg.hidden;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let in_bound = 1.0 / 2f64.sqrt();
        let out_bound = 1.0 / (h as f64).sqrt();
        let mut params = Vec::with_capacity(Self::param_count(h));
        params.extend((0..3 * h).map(|_| rng.random_range(-in_bound..in_bound)));
        params.extend((0..2 * h + 2).map(|_| rng.random_range(-out_bound..out_bound)));
        Self { hidden: h, params }
    }

    pub fn from_params(hidden: usize, params: Vec<f64>) -> Self {
        assert_eq!(params.len(), Self::param_count(hidden), "parameter count");
        Self { hidden, params }
    }

    pub fn param_count(hidden: usize) -> usize {
        5 * hidden + 2
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    fn split(&self) -> (&[f64], &[f64], &[f64], &[f64]) {
        let h = self.hidden;
        let (w1, rest) = self.params.split_at(2 * h);
        let (b1, rest) = rest.split_at(h);
        let (w2, b2) = rest.split_at(2 * h);
        (w1, b1, w2, b2)
    }
}

impl VectorField for MlpModel {
    /// Hidden activations.
    type Cache = Vec<f64>;

    fn num_params(&self) -> usize {
        self.params.len()
    }

    fn params(&self) -> Vec<f64> {
        self.params.clone()
    }

    fn set_params(&mut self, params: &[f64]) {
        self.params.copy_from_slice(params);
    }

    fn forward(&self, x: C64, act: &mut Vec<f64>) -> C64 {
        let h = self.hidden;
        let (w1, b1, w2, b2) = self.split();
        act.resize(h, 0.0);
        let (mut out_re, mut out_im) = (b2[0], b2[1]);
        for j in 0..h {
            let a = (w1[2 * j] * x.re + w1[2 * j + 1] * x.im + b1[j]).tanh();
            act[j] = a;
            out_re += w2[j] * a;
            out_im += w2[h + j] * a;
        }
        c64(out_re, out_im)
    }

    fn backward(&self, x: C64, act: &Vec<f64>, g: C64, grads: &mut [f64]) -> C64 {
        let h = self.hidden;
        let (w1, _, w2, _) = self.split();
        let (gw1, rest) = grads.split_at_mut(2 * h);
        let (gb1, rest) = rest.split_at_mut(h);
        let (gw2, gb2) = rest.split_at_mut(2 * h);
        gb2[0] += g.re;
        gb2[1] += g.im;
        let (mut gx_re, mut gx_im) = (0.0, 0.0);
        for j in 0..h {
            let a = act[j];
            gw2[j] += g.re * a;
            gw2[h + j] += g.im * a;
            let g_pre = (w2[j] * g.re + w2[h + j] * g.im) * (1.0 - a * a);
            gw1[2 * j] += g_pre * x.re;
            gw1[2 * j + 1] += g_pre * x.im;
            gb1[j] += g_pre;
            gx_re += g_pre * w1[2 * j];
            gx_im += g_pre * w1[2 * j + 1];
        }
        c64(gx_re, gx_im)
    }
}

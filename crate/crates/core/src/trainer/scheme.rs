//! One explicit RK step of a model, and the one-step loss with its gradient.

use rayon::prelude::*;

use super::model::VectorField;
use crate::butcher::ButcherTableau;
use crate::complex::{c64, C64};
use crate::error::{Error, Result};

/// Float coefficients of an explicit tableau.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitScheme {
    name: String,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl ExplicitScheme {
    pub fn new(t: &ButcherTableau) -> Result<Self> {
        if !t.is_explicit() {
            return Err(Error::Unsupported(format!(
                "`{}` is implicit; training needs an explicit tableau",
                t.name()
            )));
        }
        Ok(Self {
            name: t.name().to_string(),
            a: t.a_f64(),
            b: t.b_f64(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }
}

/// Stage buffers reused across samples.
#[derive(Clone, Debug, Default)]
pub struct Workspace<C> {
    y: Vec<C64>,
    k: Vec<C64>,
    caches: Vec<C>,
    g_y: Vec<C64>,
}

impl<C: Clone + Default> Workspace<C> {
    fn ensure(&mut self, p: usize) {
        if self.y.len() != p {
            self.y = vec![C64::default(); p];
            self.k = vec![C64::default(); p];
            self.caches = vec![C::default(); p];
            self.g_y = vec![C64::default(); p];
        }
    }
}

impl ExplicitScheme {
    /// `x + h Σ bᵢkᵢ` with `kᵢ = f̂(x + h Σ_{j<i} a_ij k_j)`, keeping stage data.
    fn step_with<M: VectorField>(
        &self,
        model: &M,
        x: C64,
        h: f64,
        ws: &mut Workspace<M::Cache>,
    ) -> C64 {
        let p = self.stages();
        ws.ensure(p);
        let mut out = x;
        for i in 0..p {
            let mut y = x;
            for j in 0..i {
                if self.a[i][j] != 0.0 {
                    y += ws.k[j] * (h * self.a[i][j]);
                }
            }
            ws.y[i] = y;
            ws.k[i] = model.forward(y, &mut ws.caches[i]);
            if self.b[i] != 0.0 {
                out += ws.k[i] * (h * self.b[i]);
            }
        }
        out
    }

    /// Backpropagates `∂L/∂x̂` through the stages of the last `step_with`.
    fn backprop<M: VectorField>(
        &self,
        model: &M,
        h: f64,
        grad_out: C64,
        ws: &mut Workspace<M::Cache>,
        grads: &mut [f64],
    ) {
        let p = self.stages();
        for i in (0..p).rev() {
            let mut g_k = grad_out * (h * self.b[i]);
            for m in i + 1..p {
                if self.a[m][i] != 0.0 {
                    g_k += ws.g_y[m] * (h * self.a[m][i]);
                }
            }
            ws.g_y[i] = model.backward(ws.y[i], &ws.caches[i], g_k, grads);
        }
    }
}

/// One step of the scheme applied to `ẋ = f̂(x)`.
pub fn rk_step<M: VectorField>(scheme: &ExplicitScheme, model: &M, x: C64, h: f64) -> C64 {
    scheme.step_with(model, x, h, &mut Workspace::default())
}

/// [`rk_step`] taking a tableau; fails on implicit tableaux.
pub fn rk_step_tableau<M: VectorField>(
    t: &ButcherTableau,
    model: &M,
    x: C64,
    h: f64,
) -> Result<C64> {
    Ok(rk_step(&ExplicitScheme::new(t)?, model, x, h))
}

const CHUNK: usize = 256;

/// Mean squared one-step error over `pairs`.
pub fn mse<M: VectorField>(
    scheme: &ExplicitScheme,
    model: &M,
    pairs: &[(C64, C64)],
    h: f64,
) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    let partial: Vec<f64> = pairs
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut ws = Workspace::default();
            chunk
                .iter()
                .map(|&(x0, x1)| (scheme.step_with(model, x0, h, &mut ws) - x1).norm_sqr())
                .sum()
        })
        .collect();
    partial.iter().sum::<f64>() / pairs.len() as f64
}

/// Mean squared one-step error and its gradient with respect to the model
/// parameters. Chunks are reduced in a fixed order, so the result does not
/// depend on the thread count.
pub fn loss_and_grad<M: VectorField>(
    scheme: &ExplicitScheme,
    model: &M,
    pairs: &[(C64, C64)],
    h: f64,
) -> (f64, Vec<f64>) {
    let n_params = model.num_params();
    if pairs.is_empty() {
        return (0.0, vec![0.0; n_params]);
    }
    let scale = 1.0 / pairs.len() as f64;
    let partial: Vec<(f64, Vec<f64>)> = pairs
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut ws = Workspace::default();
            let mut grads = vec![0.0; n_params];
            let mut loss = 0.0;
            for &(x0, x1) in chunk {
                let err = scheme.step_with(model, x0, h, &mut ws) - x1;
                loss += err.norm_sqr();
                scheme.backprop(model, h, err * (2.0 * scale), &mut ws, &mut grads);
            }
            (loss, grads)
        })
        .collect();
    let mut grads = vec![0.0; n_params];
    let mut loss = 0.0;
    for (l, g) in partial {
        loss += l;
        for (acc, v) in grads.iter_mut().zip(g) {
            *acc += v;
        }
    }
    (loss * scale, grads)
}

/// Zero vector field, handy as a baseline.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroField;

impl VectorField for ZeroField {
    type Cache = ();
    fn num_params(&self) -> usize {
        0
    }
    fn params(&self) -> Vec<f64> {
        Vec::new()
    }
    fn set_params(&mut self, _: &[f64]) {}
    fn forward(&self, _: C64, _: &mut ()) -> C64 {
        c64(0.0, 0.0)
    }
    fn backward(&self, _: C64, _: &(), _: C64, _: &mut [f64]) -> C64 {
        c64(0.0, 0.0)
    }
}

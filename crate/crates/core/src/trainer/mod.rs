//! Fitting models to Dahlquist data through one RK step, and reading off the
//! learned `α`.
//!
//! The data are pairs `(x₀, e^{hλ}x₀)`. A model `f̂` is trained so that one step
//! of the method applied to `ẋ = f̂(x)` maps `x₀` to `x₁`. For a linear model
//! the minimizers are exactly the learnability roots; for an MLP the learned
//! map is read back as a linear coefficient by [`estimate_alpha`].

pub mod adam;
pub mod compare;
pub mod model;
pub mod scheme;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::butcher::ButcherTableau;
use crate::complex::{c64, C64};
use crate::error::{Error, Result};
use crate::learnability::{sort_roots, LearnabilitySolver, ProblemSpec, RootPolicy, EXP_LIMIT};

pub use adam::Adam;
pub use compare::{compare_with_theory, ComparisonReport, TrajectoryConfig};
pub use model::{LinearModel, MlpConfig, MlpModel, VectorField};
pub use scheme::{loss_and_grad, mse, rk_step, rk_step_tableau, ExplicitScheme, ZeroField};

/// Pairs with `|x₀|` below this are skipped when averaging `x̂₁/x₀`.
pub const RATIO_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dataset {
    pub lambda: C64,
    pub h: f64,
    pub seed: u64,
    /// Half-width `B` of the sampling box `[−B, B]²`.
    pub half_width: f64,
    /// `(x₀, x₁)` with `x₁ = e^{hλ}x₀`.
    pub pairs: Vec<(C64, C64)>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Mean of `|x₁|²`, the scale relative losses are measured against.
    pub fn scale(&self) -> f64 {
        if self.pairs.is_empty() {
            return 0.0;
        }
        self.pairs.iter().map(|(_, x1)| x1.norm_sqr()).sum::<f64>() / self.pairs.len() as f64
    }
}

/// Samples `n` points uniformly on `[−B, B]²` and advances each by `e^{hλ}`.
pub fn generate_dataset(
    lambda: C64,
    h: f64,
    n: usize,
    half_width: f64,
    seed: u64,
) -> Result<Dataset> {
    let spec = ProblemSpec::new(lambda, h)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dataset needs at least one pair".into(),
        ));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sampling half-width must be positive, got {half_width}"
        )));
    }
    let z = spec.z();
    if z.re.abs() > EXP_LIMIT {
        return Err(Error::ExpOverflow { re: z.re.abs() });
    }
    let growth = z.exp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..n)
        .map(|_| {
            let x0 = c64(
                rng.random_range(-half_width..=half_width),
                rng.random_range(-half_width..=half_width),
            );
            (x0, growth * x0)
        })
        .collect();
    Ok(Dataset {
        lambda,
        h,
        seed,
        half_width,
        pairs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub epochs: usize,
    /// `None` is full batch. Mini-batches are taken in dataset order.
    pub batch_size: Option<usize>,
    /// Stop once the full-batch gradient norm falls below this.
    pub grad_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            epochs: 3000,
            batch_size: None,
            grad_tol: 1e-12,
        }
    }
}

impl OptimizerConfig {
    fn check(&self) -> Result<()> {
        let ok = self.lr > 0.0
            && self.lr.is_finite()
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.eps >= 0.0
            && self.grad_tol >= 0.0
            && self.batch_size != Some(0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "invalid optimizer settings {self:?}"
            )))
        }
    }
}

/// Named sizes for MLP runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `H = 8`, `n = 100`, 50 epochs.
    Smoke,
    /// `H = 32`, `n = 2000`, 500 epochs at `lr = 1e-2`.
    Reduced,
    /// `H = 200`, `n = 10000`, 3000 epochs at `lr = 1e-3`.
    Full,
}

impl Preset {
    /// `(hidden, n, epochs, lr)`.
    pub fn sizes(self) -> (usize, usize, usize, f64) {
        match self {
            Preset::Smoke => (8, 100, 50, 1e-3),
            Preset::Reduced => (32, 2000, 500, 1e-2),
            Preset::Full => (200, 10_000, 3000, 1e-3),
        }
    }

    pub fn mlp(self, seed: u64) -> MlpConfig {
        MlpConfig {
            hidden: self.sizes().0,
            seed,
        }
    }

    pub fn samples(self) -> usize {
        self.sizes().1
    }

    pub fn optimizer(self) -> OptimizerConfig {
        let (_, _, epochs, lr) = self.sizes();
        OptimizerConfig {
            lr,
            epochs,
            ..Default::default()
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoke" => Ok(Preset::Smoke),
            "reduced" => Ok(Preset::Reduced),
            "full" => Ok(Preset::Full),
            _ => Err(Error::InvalidArgument(format!(
                "unknown preset `{s}` (smoke, reduced, full)"
            ))),
        }
    }
}

/// Default sampling half-width `B`.
pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

/// Estimated `α` from a trained model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub alpha: C64,
    /// Mean of `x̂₁/x₀` over the used pairs.
    pub ratio_mean: C64,
    /// Largest `|x̂₁/x₀ − r̄|`.
    pub dispersion: f64,
    /// Number of pairs that entered the mean.
    pub used: usize,
    /// All solutions of `R(hα) = r̄`, closest to the reference point first.
    pub candidates: Vec<C64>,
}

/// Averages the one-step ratio of the trained model and inverts it through the
/// stability function. The solution closest to the model's own coefficient is
/// picked for linear models, the one closest to `λ` otherwise.
pub fn estimate_alpha<M: VectorField>(
    t: &ButcherTableau,
    model: &M,
    data: &Dataset,
) -> Result<AlphaEstimate> {
    let scheme = ExplicitScheme::new(t)?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let ratios: Vec<C64> = data
        .pairs
        .iter()
        .filter(|(x0, _)| x0.norm() >= RATIO_FLOOR)
        .map(|&(x0, _)| rk_step(&scheme, model, x0, data.h) / x0)
        .collect();
    if ratios.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let ratio_mean = ratios.iter().sum::<C64>() / ratios.len() as f64;
    let dispersion = ratios
        .iter()
        .map(|r| (r - ratio_mean).norm())
        .fold(0.0, f64::max);
    if !ratio_mean.re.is_finite() || !ratio_mean.im.is_finite() {
        return Err(Error::NonFinite("mean one-step ratio".into()));
    }
    let roots = LearnabilitySolver::for_tableau(t).roots_for_ratio(ratio_mean, data.h)?;
    let reference = model.linear_coefficient().unwrap_or(data.lambda);
    let candidates = sort_roots(&roots, reference);
    let alpha = *candidates.first().ok_or(Error::EmptyRoots)?;
    Ok(AlphaEstimate {
        alpha,
        ratio_mean,
        dispersion,
        used: ratios.len(),
        candidates,
    })
}

/// Mean squared one-step error of `model` on the dataset.
pub fn dataset_mse<M: VectorField>(t: &ButcherTableau, model: &M, data: &Dataset) -> Result<f64> {
    Ok(mse(&ExplicitScheme::new(t)?, model, &data.pairs, data.h))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    /// `linear` or `mlp`.
    pub model: String,
    pub method: String,
    pub lambda: C64,
    pub h: f64,
    pub n: usize,
    pub half_width: f64,
    /// Dataset seed.
    pub seed: u64,
    /// Hidden width and initialization seed, for MLP runs.
    pub mlp: Option<MlpConfig>,
    /// Starting `α`, for linear runs.
    pub init_alpha: Option<C64>,
    pub optimizer: OptimizerConfig,
    /// Adam steps taken.
    pub iterations: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
    /// `final_loss / mean |x₁|²`.
    pub relative_loss: f64,
    pub estimated_alpha: C64,
    pub ratio_mean: C64,
    pub ratio_dispersion: f64,
    /// Learnability roots for `(λ, h)`, closest to `λ` first.
    pub roots: Vec<C64>,
    pub nearest_index: usize,
    pub nearest_root: C64,
    pub distance: f64,
    /// `distance / |nearest_root|`; absent when the root is zero.
    pub relative_distance: Option<f64>,
    /// Full-batch loss before each epoch's update.
    pub loss_history: Vec<f64>,
}

struct Trained<M> {
    model: M,
    iterations: usize,
    history: Vec<f64>,
    final_loss: f64,
}

fn train<M: VectorField>(
    scheme: &ExplicitScheme,
    mut model: M,
    data: &Dataset,
    cfg: &OptimizerConfig,
) -> Result<Trained<M>> {
    cfg.check()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut params = model.params();
    let mut opt = Adam::new(params.len(), cfg.lr, cfg.beta1, cfg.beta2, cfg.eps);
    let mut history = Vec::with_capacity(cfg.epochs);
    let batch = cfg.batch_size.unwrap_or(data.len()).min(data.len());
    let diverged = |iterations: usize| Error::Divergence { iterations };

    for _ in 0..cfg.epochs {
        let (loss, grads) = loss_and_grad(scheme, &model, &data.pairs, data.h);
        if !loss.is_finite() || grads.iter().any(|g| !g.is_finite()) {
            return Err(diverged(opt.steps() as usize));
        }
        history.push(loss);
        if grads.iter().map(|g| g * g).sum::<f64>().sqrt() < cfg.grad_tol {
            break;
        }
        if batch == data.len() {
            opt.step(&mut params, &grads);
            model.set_params(&params);
        } else {
            for chunk in data.pairs.chunks(batch) {
                let (_, g) = loss_and_grad(scheme, &model, chunk, data.h);
                opt.step(&mut params, &g);
                model.set_params(&params);
            }
        }
    }
    let final_loss = mse(scheme, &model, &data.pairs, data.h);
    if !final_loss.is_finite() || params.iter().any(|p| !p.is_finite()) {
        return Err(diverged(opt.steps() as usize));
    }
    Ok(Trained {
        model,
        iterations: opt.steps() as usize,
        history,
        final_loss,
    })
}

fn report<M: VectorField>(
    t: &ButcherTableau,
    data: &Dataset,
    trained: &Trained<M>,
    cfg: &OptimizerConfig,
    model: &str,
) -> Result<TrainingReport> {
    let estimate = estimate_alpha(t, &trained.model, data)?;
    let spec = ProblemSpec::new(data.lambda, data.h)?;
    let theory = LearnabilitySolver::for_tableau(t).solve(&spec, RootPolicy::All)?;
    let roots = theory.alphas();
    let (nearest_index, distance) = roots
        .iter()
        .map(|r| (r - estimate.alpha).norm())
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::EmptyRoots)?;
    let nearest_root = roots[nearest_index];
    let scale = data.scale();
    Ok(TrainingReport {
        model: model.to_string(),
        method: t.name().to_string(),
        lambda: data.lambda,
        h: data.h,
        n: data.len(),
        half_width: data.half_width,
        seed: data.seed,
        mlp: None,
        init_alpha: None,
        optimizer: *cfg,
        iterations: trained.iterations,
        initial_loss: trained
            .history
            .first()
            .copied()
            .unwrap_or(trained.final_loss),
        final_loss: trained.final_loss,
        relative_loss: if scale > 0.0 {
            trained.final_loss / scale
        } else {
            trained.final_loss
        },
        estimated_alpha: estimate.alpha,
        ratio_mean: estimate.ratio_mean,
        ratio_dispersion: estimate.dispersion,
        roots,
        nearest_index,
        nearest_root,
        distance,
        relative_distance: (nearest_root.norm() > 0.0).then(|| distance / nearest_root.norm()),
        loss_history: trained.history.clone(),
    })
}

/// Trains `ẋ = αx` from `init_alpha` and returns the report with the fitted model.
pub fn train_linear(
    t: &ButcherTableau,
    data: &Dataset,
    init_alpha: C64,
    cfg: &OptimizerConfig,
) -> Result<(LinearModel, TrainingReport)> {
    let scheme = ExplicitScheme::new(t)?;
    let trained = train(&scheme, LinearModel::new(init_alpha), data, cfg)?;
    let mut rep = report(t, data, &trained, cfg, "linear")?;
    rep.init_alpha = Some(init_alpha);
    Ok((trained.model, rep))
}

pub fn fit_linear(
    t: &ButcherTableau,
    data: &Dataset,
    init_alpha: C64,
    cfg: &OptimizerConfig,
) -> Result<TrainingReport> {
    train_linear(t, data, init_alpha, cfg).map(|(_, r)| r)
}

/// Trains a seeded MLP and returns the report with the fitted model.
pub fn train_mlp(
    t: &ButcherTableau,
    data: &Dataset,
    mlp: &MlpConfig,
    cfg: &OptimizerConfig,
) -> Result<(MlpModel, TrainingReport)> {
    let scheme = ExplicitScheme::new(t)?;
    if mlp.hidden == 0 {
        return Err(Error::InvalidArgument(
            "MLP needs at least one hidden unit".into(),
        ));
    }
    let trained = train(&scheme, MlpModel::new(mlp), data, cfg)?;
    let mut rep = report(t, data, &trained, cfg, "mlp")?;
    rep.mlp = Some(*mlp);
    Ok((trained.model, rep))
}

pub fn fit_mlp(
    t: &ButcherTableau,
    data: &Dataset,
    mlp: &MlpConfig,
    cfg: &OptimizerConfig,
) -> Result<TrainingReport> {
    train_mlp(t, data, mlp, cfg).map(|(_, r)| r)
}

//! Side-by-side view of a trained `α̂` and the learnability roots.

use std::io::Write;

use serde::Serialize;

use super::TrainingReport;
use crate::complex::{c64, C64};
use crate::error::{Error, Result};
use crate::learnability::{coefficients, Coefficients, LearnabilityResult, ProblemSpec};

/// Time grid for continuous-time trajectories `x₀e^{αt}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryConfig {
    pub t_end: f64,
    /// Number of samples including both ends.
    pub samples: usize,
    pub x0: C64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            t_end: 20.0,
            samples: 401,
            x0: c64(1.0, 0.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub re_true: f64,
    pub re_learned: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootDistance {
    pub alpha: C64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub lambda: C64,
    pub h: f64,
    pub estimated_alpha: C64,
    pub roots: Vec<RootDistance>,
    pub matched_index: Option<usize>,
    pub matched_root: Option<C64>,
    pub matched_distance: Option<f64>,
    /// Coefficients of the matched root.
    pub theory: Coefficients,
    /// Coefficients of `α̂` itself.
    pub empirical: Coefficients,
    /// `Re α̂ > 0`: the learned solution grows in amplitude.
    pub amplitude_grows: bool,
    /// `Re λ ≤ 0`: the true solution stays bounded.
    pub true_bounded: bool,
    pub trajectory: Vec<TrajectorySample>,
}

impl ComparisonReport {
    /// Trajectory as CSV with header `t,re_true,re_learned`.
    pub fn write_trajectory_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "t,re_true,re_learned")?;
        for s in &self.trajectory {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", s.t, s.re_true, s.re_learned)?;
        }
        Ok(())
    }

    pub fn trajectory_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_trajectory_csv(&mut buf)
            .expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

pub fn compare_with_theory(
    report: &TrainingReport,
    theory: &LearnabilityResult,
    traj: &TrajectoryConfig,
) -> Result<ComparisonReport> {
    if traj.samples < 2 || !(traj.t_end > 0.0 && traj.t_end.is_finite()) {
        return Err(Error::InvalidArgument(
            "trajectory needs at least two samples over a positive time span".into(),
        ));
    }
    let alpha = report.estimated_alpha;
    let spec = ProblemSpec::new(report.lambda, report.h)?;
    let roots: Vec<RootDistance> = theory
        .roots
        .iter()
        .map(|r| RootDistance {
            alpha: r.alpha,
            distance: (r.alpha - alpha).norm(),
        })
        .collect();
    let matched_index = roots
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.distance.total_cmp(&b.1.distance))
        .map(|(i, _)| i);
    let trajectory = (0..traj.samples)
        .map(|k| {
            let t = traj.t_end * k as f64 / (traj.samples - 1) as f64;
            TrajectorySample {
                t,
                re_true: (traj.x0 * (spec.lambda() * t).exp()).re,
                re_learned: (traj.x0 * (alpha * t).exp()).re,
            }
        })
        .collect();
    Ok(ComparisonReport {
        lambda: spec.lambda(),
        h: spec.h(),
        estimated_alpha: alpha,
        matched_index,
        matched_root: matched_index.map(|i| roots[i].alpha),
        matched_distance: matched_index.map(|i| roots[i].distance),
        theory: matched_index
            .map(|i| theory.roots[i].coefficients)
            .unwrap_or_default(),
        empirical: coefficients(alpha, &spec),
        amplitude_grows: alpha.re > 0.0,
        true_bounded: spec.lambda().re <= 0.0,
        roots,
        trajectory,
    })
}

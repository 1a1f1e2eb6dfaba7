use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::filter::{filtered_fraction, FilterJson, LocalFilter};
use crate::qmath::{c, complex_gaussian_matrix, diag, ComplexMatrix, QRng};
use crate::states::BipartiteState;
use crate::{Error, Result};

/// Starting point of a local-search restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterFamily {
    Identity,
    /// `diag(x,1,1) ⊗ diag(1,y,z)` with log-uniform `x, y, z`.
    Structured,
    /// Independent log-uniform diagonals on both sides.
    Diagonal,
    /// Ginibre matrices on both sides.
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdConfig {
    /// Total number of filter evaluations.
    pub trials: usize,
    /// Evaluations per restart before a fresh starting filter is drawn.
    pub steps_per_restart: usize,
    /// Initial standard deviation of the complex log-perturbation applied to
    /// one entry. It grows by 1.5 after an accepted move and shrinks by 0.9
    /// after a rejected one, within `[1e-4, 2]`.
    pub step_size: f64,
    /// Diagonal entries are drawn as `10^u` with `u` uniform in `[log10_min, 0]`.
    pub log10_min: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            steps_per_restart: 250,
            step_size: 0.35,
            log10_min: -4.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub family: FilterFamily,
    pub filter: FilterJson,
    /// `None` when the success probability is below the cutoff.
    pub fraction: Option<f64>,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct ThresholdReport {
    pub best_fraction: f64,
    pub best_probability: f64,
    pub best_trial: usize,
    pub best_filter: LocalFilter,
    /// Best fraction seen after each trial.
    pub running_best: Vec<f64>,
    pub trace: Vec<TrialRecord>,
}

impl ThresholdReport {
    /// Gain of the running best over the final tenth of the trials.
    pub fn last_decile_improvement(&self) -> f64 {
        let n = self.running_best.len();
        if n == 0 {
            return 0.0;
        }
        let start = (n * 9 / 10).saturating_sub(1);
        self.running_best[n - 1] - self.running_best[start]
    }
}

fn log_uniform(rng: &mut QRng, log10_min: f64) -> f64 {
    10f64.powf(rng.random_range(log10_min..=0.0))
}

fn start_filter(
    family: FilterFamily,
    dims: (usize, usize),
    cfg: &ThresholdConfig,
    rng: &mut QRng,
) -> (ComplexMatrix, ComplexMatrix) {
    let (da, db) = dims;
    match family {
        FilterFamily::Identity => (ComplexMatrix::identity(da, da), ComplexMatrix::identity(db, db)),
        FilterFamily::Structured => {
            let mut a = vec![1.0; da];
            let mut b = vec![1.0; db];
            a[0] = log_uniform(rng, cfg.log10_min);
            for entry in b.iter_mut().skip(1) {
                *entry = log_uniform(rng, cfg.log10_min);
            }
            (diag(&a), diag(&b))
        }
        FilterFamily::Diagonal => {
            let a: Vec<f64> = (0..da).map(|_| log_uniform(rng, cfg.log10_min)).collect();
            let b: Vec<f64> = (0..db).map(|_| log_uniform(rng, cfg.log10_min)).collect();
            (diag(&a), diag(&b))
        }
        FilterFamily::Dense => (
            complex_gaussian_matrix(da, da, rng),
            complex_gaussian_matrix(db, db, rng),
        ),
    }
}

/// Multiplies one nonzero entry of `a` or `b` by `exp(s(g₁ + i g₂))`.
fn perturb(a: &ComplexMatrix, b: &ComplexMatrix, step: f64, rng: &mut QRng) -> (ComplexMatrix, ComplexMatrix) {
    let (mut a, mut b) = (a.clone(), b.clone());
    let slots: Vec<(bool, usize)> = a
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > 0.0)
        .map(|(k, _)| (true, k))
        .chain(
            b.iter()
                .enumerate()
                .filter(|(_, z)| z.norm() > 0.0)
                .map(|(k, _)| (false, k)),
        )
        .collect();
    if slots.is_empty() {
        return (a, b);
    }
    let (on_a, k) = slots[rng.random_range(0..slots.len())];
    let g1: f64 = StandardNormal.sample(rng);
    let g2: f64 = StandardNormal.sample(rng);
    let factor = c(step * g1, step * g2).exp();
    if on_a {
        a[k] *= factor;
    } else {
        b[k] *= factor;
    }
    (a, b)
}

/// Seeded random search for the largest singlet fraction reachable by one
/// local filter. Restarts cycle through the structured, diagonal and dense
/// families (the very first trial is the identity filter); within a restart
/// single entries are perturbed multiplicatively and a move is kept when it
/// raises the fraction. Every evaluated filter is normalized to unit
/// operator norm on both sides and recorded in the trace.
pub fn threshold_experiment(rho: &BipartiteState, cfg: &ThresholdConfig, rng: &mut QRng) -> Result<ThresholdReport> {
    rho.square_dim()?;
    if cfg.trials == 0 || cfg.steps_per_restart == 0 {
        return Err(Error::OutOfRange {
            name: "trials",
            value: 0.0,
            range: "[1, ∞)".into(),
        });
    }
    let dims = rho.dims();
    let families = [FilterFamily::Structured, FilterFamily::Diagonal, FilterFamily::Dense];
    let mut trace = Vec::with_capacity(cfg.trials);
    let mut running_best = Vec::with_capacity(cfg.trials);
    let mut best: Option<(f64, f64, usize, LocalFilter)> = None;
    let mut current: Option<(ComplexMatrix, ComplexMatrix, f64)> = None;
    let mut step = cfg.step_size;
    let mut family = FilterFamily::Identity;
    let mut restart = 0usize;

    for trial in 0..cfg.trials {
        let (a, b) = if trial == 0 {
            start_filter(FilterFamily::Identity, dims, cfg, rng)
        } else if trial % cfg.steps_per_restart == 0 || current.is_none() {
            family = families[restart % families.len()];
            restart += 1;
            current = None;
            step = cfg.step_size;
            start_filter(family, dims, cfg, rng)
        } else {
            let (ca, cb, _) = current.as_ref().expect("checked above");
            perturb(ca, cb, step, rng)
        };
        let filter = LocalFilter::normalized(a.clone(), b.clone())?;
        let (fraction, probability) = match filtered_fraction(rho, &filter) {
            Ok((f, p)) => (Some(f), p),
            Err(Error::ZeroProbability { probability }) => (None, probability),
            Err(e) => return Err(e),
        };
        let improved = fraction.is_some_and(|f| current.as_ref().is_none_or(|(_, _, cf)| f > *cf));
        step = if improved {
            (step * 1.5).min(2.0)
        } else {
            (step * 0.9).max(1e-4)
        };
        if let Some(f) = fraction {
            if improved {
                current = Some((a, b, f));
            }
            if best.as_ref().is_none_or(|(bf, ..)| f > *bf) {
                best = Some((f, probability, trial, filter.clone()));
            }
        }
        running_best.push(best.as_ref().map_or(0.0, |(f, ..)| *f));
        trace.push(TrialRecord {
            trial,
            family: if trial == 0 { FilterFamily::Identity } else { family },
            filter: filter.to_json(),
            fraction,
            probability,
        });
    }

    let (best_fraction, best_probability, best_trial, best_filter) =
        best.ok_or(Error::ZeroProbability { probability: 0.0 })?;
    Ok(ThresholdReport {
        best_fraction,
        best_probability,
        best_trial,
        best_filter,
        running_best,
        trace,
    })
}

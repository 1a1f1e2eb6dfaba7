//! Seeded, byte-reproducible experiment runs.
//!
//! Each experiment renders one data file (CSV for numeric sweeps, JSON for
//! structured traces) plus `manifest.json`, which echoes the full
//! configuration. Rendering is separate from writing so runs can be checked
//! without touching the filesystem.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::channels::{
    channel_fidelity_exact, channel_fidelity_mc, channel_from_state, choi, choi_matrix, depolarizing,
    entanglement_fidelity, random_channel, random_state_with_mixed_reduction, Channel,
};
use crate::distill::{
    apply_filter, make_rho_f, make_sigma_f, quasi_distill_csv, quasi_distill_sequence, sigma_filter_sequence,
    threshold_experiment, witness_search, ThresholdConfig, DEFAULT_WITNESS_TRIALS,
};
use crate::qmath::{identity, max_abs_diff, r, rng_from_seed, trace_distance};
use crate::states::{
    self, is_ppt, max_entangled_embedded, max_entangled_state, noisy_singlet, product_basis, random_density_matrix,
    random_ppt_state, singlet_fraction, singlet_fraction_m, BipartiteState, NoisySinglet, PPT_TOLERANCE,
};
use crate::teleport::{classical_fidelity, optimal_fidelity_from_fraction, standard_teleport_channel};
use crate::twirl::{twirl_state_exact, twirl_state_mc};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    IsomorphismRoundtrip,
    FidelityTheoremSweep,
    TwirlConvergence,
    TeleportCalibration,
    ClassicalBaseline,
    PptBound,
    SigmaQuasiDistill,
    RhoThreshold,
    WitnessDemo,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::IsomorphismRoundtrip,
        Experiment::FidelityTheoremSweep,
        Experiment::TwirlConvergence,
        Experiment::TeleportCalibration,
        Experiment::ClassicalBaseline,
        Experiment::PptBound,
        Experiment::SigmaQuasiDistill,
        Experiment::RhoThreshold,
        Experiment::WitnessDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::IsomorphismRoundtrip => "isomorphism-roundtrip",
            Experiment::FidelityTheoremSweep => "fidelity-theorem-sweep",
            Experiment::TwirlConvergence => "twirl-convergence",
            Experiment::TeleportCalibration => "teleport-calibration",
            Experiment::ClassicalBaseline => "classical-baseline",
            Experiment::PptBound => "ppt-bound",
            Experiment::SigmaQuasiDistill => "sigma-quasi-distill",
            Experiment::RhoThreshold => "rho-threshold",
            Experiment::WitnessDemo => "witness-demo",
        }
    }

    fn default_d(self) -> usize {
        match self {
            Experiment::TwirlConvergence | Experiment::IsomorphismRoundtrip | Experiment::TeleportCalibration => 2,
            _ => 3,
        }
    }

    fn default_samples(self) -> usize {
        match self {
            Experiment::TwirlConvergence | Experiment::FidelityTheoremSweep => 10_000,
            _ => 0,
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Experiment::IsomorphismRoundtrip => 20,
            Experiment::PptBound => 200,
            Experiment::RhoThreshold => 10_000,
            Experiment::WitnessDemo => DEFAULT_WITNESS_TRIALS,
            _ => 0,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub d: usize,
    /// Named per-experiment parameters (`p`, `F`, `n_max`).
    pub parameters: BTreeMap<String, f64>,
    pub seed: u64,
    pub samples: usize,
    pub trials: usize,
    pub output_path: PathBuf,
    /// Optional state file in the JSON state format.
    pub state_path: Option<PathBuf>,
    /// Optional channel file in the JSON channel format.
    pub channel_path: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Config with the experiment's default dimension and budgets.
    pub fn new(experiment: Experiment, seed: u64, output_path: impl Into<PathBuf>) -> Self {
        Self {
            experiment,
            d: experiment.default_d(),
            parameters: BTreeMap::new(),
            seed,
            samples: experiment.default_samples(),
            trials: experiment.default_trials(),
            output_path: output_path.into(),
            state_path: None,
            channel_path: None,
        }
    }

    pub fn with_parameter(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    fn param(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }

    fn param_or(&self, name: &str, default: f64) -> f64 {
        self.param(name).unwrap_or(default)
    }

    fn loaded_channel(&self) -> Result<Option<Channel>> {
        self.channel_path
            .as_deref()
            .map(|p| Channel::from_json_str(&std::fs::read_to_string(p)?))
            .transpose()
    }

    fn loaded_state(&self) -> Result<Option<BipartiteState>> {
        self.state_path
            .as_deref()
            .map(|p| BipartiteState::from_json_str(&std::fs::read_to_string(p)?))
            .transpose()
    }
}

/// One rendered output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

/// Renders the experiment's data file and manifest without writing them.
pub fn render(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let data = match config.experiment {
        Experiment::IsomorphismRoundtrip => isomorphism_roundtrip(config)?,
        Experiment::FidelityTheoremSweep => fidelity_theorem_sweep(config)?,
        Experiment::TwirlConvergence => twirl_convergence(config)?,
        Experiment::TeleportCalibration => teleport_calibration(config)?,
        Experiment::ClassicalBaseline => classical_baseline(config)?,
        Experiment::PptBound => ppt_bound(config)?,
        Experiment::SigmaQuasiDistill => sigma_quasi_distill(config)?,
        Experiment::RhoThreshold => rho_threshold(config)?,
        Experiment::WitnessDemo => witness_demo(config)?,
    };
    let manifest = Artifact {
        file_name: "manifest.json".into(),
        contents: serde_json::to_string_pretty(&json!({
            "config": config,
            "files": [data.file_name],
        }))? + "\n",
    };
    Ok(vec![data, manifest])
}

/// Renders and writes all files into `config.output_path`, returning their paths.
pub fn run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let artifacts = render(config)?;
    write_artifacts(&config.output_path, &artifacts)
}

fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.file_name);
            std::fs::write(&path, &a.contents)?;
            Ok(path)
        })
        .collect()
}

fn csv(name: &str, header: &str, rows: impl IntoIterator<Item = String>) -> Artifact {
    let mut contents = String::from(header);
    contents.push('\n');
    for row in rows {
        contents.push_str(&row);
        contents.push('\n');
    }
    Artifact {
        file_name: format!("{name}.csv"),
        contents,
    }
}

fn json_artifact(name: &str, value: &serde_json::Value) -> Result<Artifact> {
    Ok(Artifact {
        file_name: format!("{name}.json"),
        contents: serde_json::to_string_pretty(value)? + "\n",
    })
}

fn isomorphism_roundtrip(cfg: &ExperimentConfig) -> Result<Artifact> {
    let d = cfg.d;
    let mut rng = rng_from_seed(cfg.seed);
    let mut rows = Vec::new();
    if let Some(ch) = cfg.loaded_channel()? {
        let back = channel_from_state(&choi(&ch)?)?;
        let err = max_abs_diff(&choi_matrix(&back)?, &choi_matrix(&ch)?);
        let kraus_err = max_abs_diff(&back.kraus_sum(), &identity(ch.d_in()));
        rows.push(format!("0,loaded-channel,{err},{kraus_err}"));
    }
    if let Some(rho) = cfg.loaded_state()? {
        let ch = channel_from_state(&rho)?;
        let err = max_abs_diff(&choi_matrix(&ch)?, rho.matrix());
        let kraus_err = max_abs_diff(&ch.kraus_sum(), &identity(rho.d_a()));
        rows.push(format!("0,loaded-state,{err},{kraus_err}"));
    }
    for idx in 0..cfg.trials {
        let ch = random_channel(d, d, &mut rng);
        let back = channel_from_state(&choi(&ch)?)?;
        let err = max_abs_diff(&choi_matrix(&back)?, &choi_matrix(&ch)?);
        let kraus_err = max_abs_diff(&back.kraus_sum(), &identity(d));
        rows.push(format!("{idx},channel,{err},{kraus_err}"));

        let rho = random_state_with_mixed_reduction(d, &mut rng);
        let ch = channel_from_state(&rho)?;
        let err = max_abs_diff(&choi_matrix(&ch)?, rho.matrix());
        let kraus_err = max_abs_diff(&ch.kraus_sum(), &identity(d));
        rows.push(format!("{idx},state,{err},{kraus_err}"));
    }
    Ok(csv(
        cfg.experiment.name(),
        "index,start,choi_error,kraus_completeness_error",
        rows,
    ))
}

fn fidelity_theorem_sweep(cfg: &ExperimentConfig) -> Result<Artifact> {
    let d = cfg.d;
    let mut rng = rng_from_seed(cfg.seed);
    let grid: Vec<f64> = match cfg.param("p") {
        Some(p) => vec![p],
        None => (0..=10).map(|k| k as f64 / 10.0).collect(),
    };
    let mut rows = Vec::new();
    if let Some(ch) = cfg.loaded_channel()? {
        let mc = channel_fidelity_mc(&ch, cfg.samples.max(1), &mut rng)?;
        rows.push(format!(
            ",{},{},{},{}",
            entanglement_fidelity(&ch)?,
            channel_fidelity_exact(&ch)?,
            mc.mean,
            mc.std_err
        ));
    }
    for p in grid {
        let resource = noisy_singlet(d, p)?;
        let fraction = singlet_fraction(&resource)?;
        let ch = standard_teleport_channel(&resource)?;
        let exact = channel_fidelity_exact(&ch)?;
        let mc = channel_fidelity_mc(&ch, cfg.samples.max(1), &mut rng)?;
        rows.push(format!("{p},{fraction},{exact},{},{}", mc.mean, mc.std_err));
    }
    Ok(csv(cfg.experiment.name(), "p,F,f_exact,f_mc,std_err", rows))
}

fn twirl_convergence(cfg: &ExperimentConfig) -> Result<Artifact> {
    let d = cfg.d;
    let mut rng = rng_from_seed(cfg.seed);
    let rho = match cfg.loaded_state()? {
        Some(s) => s,
        None => random_density_matrix(d, d, &mut rng),
    };
    let exact = twirl_state_exact(&rho)?;
    let total = cfg.samples.max(1);
    let mut checkpoints: Vec<usize> = std::iter::successors(Some(10usize), |n| Some(n * 10))
        .take_while(|&n| n < total)
        .collect();
    checkpoints.push(total);
    let rows = checkpoints
        .into_iter()
        .map(|n| {
            let mc = twirl_state_mc(&rho, n, &mut rng)?;
            Ok(format!(
                "{n},{},{},{}",
                trace_distance(mc.matrix(), &exact.matrix()),
                exact.singlet_fraction(),
                singlet_fraction(&mc)?
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(csv(
        cfg.experiment.name(),
        "samples,trace_distance,fraction_exact,fraction_mc",
        rows,
    ))
}

fn teleport_calibration(cfg: &ExperimentConfig) -> Result<Artifact> {
    let d = cfg.d;
    let mut rows = Vec::new();
    let ideal = standard_teleport_channel(&max_entangled_state(d))?;
    let dist = max_abs_diff(&choi_matrix(&ideal)?, max_entangled_state(d).matrix());
    rows.push(format!("maximally-entangled,1,{dist}"));
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let ch = standard_teleport_channel(&noisy_singlet(d, p)?)?;
        let dist = max_abs_diff(&choi_matrix(&ch)?, &choi_matrix(&depolarizing(d, p)?)?);
        rows.push(format!("noisy-singlet,{p},{dist}"));
    }
    Ok(csv(cfg.experiment.name(), "resource,p,choi_distance", rows))
}

fn classical_baseline(cfg: &ExperimentConfig) -> Result<Artifact> {
    let rows = (2..=cfg.d.max(2))
        .map(|d| {
            let no_entanglement =
                channel_fidelity_exact(&standard_teleport_channel(&BipartiteState::maximally_mixed(d, d))?)?;
            Ok(format!(
                "{d},{},{},{no_entanglement}",
                classical_fidelity(d),
                optimal_fidelity_from_fraction(d, 1.0 / d as f64)?
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(csv(
        cfg.experiment.name(),
        "d,f_classical,f_max_at_fraction_1_over_d,f_maximally_mixed_resource",
        rows,
    ))
}

fn ppt_bound(cfg: &ExperimentConfig) -> Result<Artifact> {
    let d = cfg.d;
    let mut rng = rng_from_seed(cfg.seed);
    let rows = (0..cfg.trials)
        .map(|idx| {
            let st = random_ppt_state(d, d, &mut rng);
            let fraction = singlet_fraction(&st)?;
            Ok(format!(
                "{idx},{fraction},{},{},{}",
                optimal_fidelity_from_fraction(d, fraction.max(1.0 / (d * d) as f64))?,
                classical_fidelity(d),
                is_ppt(&st, PPT_TOLERANCE)
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(csv(
        cfg.experiment.name(),
        "index,fraction,implied_f_max,f_classical,ppt",
        rows,
    ))
}

fn sigma_quasi_distill(cfg: &ExperimentConfig) -> Result<Artifact> {
    let n_max = cfg.param_or("n_max", 100.0) as usize;
    let rho = match cfg.loaded_state()? {
        Some(s) => s,
        None => make_sigma_f(cfg.param_or("F", 0.5))?,
    };
    let reports = quasi_distill_sequence(&rho, &sigma_filter_sequence(n_max), n_max)?;
    Ok(Artifact {
        file_name: format!("{}.csv", cfg.experiment.name()),
        contents: quasi_distill_csv(&reports),
    })
}

fn rho_threshold(cfg: &ExperimentConfig) -> Result<Artifact> {
    let rho = match cfg.loaded_state()? {
        Some(s) => s,
        None => make_rho_f(cfg.param_or("F", 0.5))?,
    };
    let search = ThresholdConfig {
        trials: cfg.trials,
        ..ThresholdConfig::default()
    };
    let report = threshold_experiment(&rho, &search, &mut rng_from_seed(cfg.seed))?;
    json_artifact(
        cfg.experiment.name(),
        &json!({
            "summary": {
                "initial_fraction": singlet_fraction(&rho)?,
                "best_fraction": report.best_fraction,
                "best_probability": report.best_probability,
                "best_trial": report.best_trial,
                "best_filter": report.best_filter.to_json(),
                "last_decile_improvement": report.last_decile_improvement(),
            },
            "trace": report.trace,
        }),
    )
}

fn witness_demo(cfg: &ExperimentConfig) -> Result<Artifact> {
    let mut rng = rng_from_seed(cfg.seed);
    let weight = cfg.param_or("p", 0.6);
    states::check_range("p", weight, 0.0, 1.0)?;
    let mut cases: Vec<(String, BipartiteState, usize)> = Vec::new();
    if let Some(s) = cfg.loaded_state()? {
        let m = s.d_a().min(s.d_b());
        cases.push(("loaded-state".into(), s, m));
    }
    let ent = crate::qmath::projector(&max_entangled_embedded(2, 3, 2));
    let junk = crate::qmath::projector(&product_basis(2, 3, 0, 2));
    cases.push((
        "entangled-plus-product-2x3".into(),
        BipartiteState::new(2, 3, ent * r(weight) + junk * r(1.0 - weight))?,
        2,
    ));
    cases.push(("noisy-singlet-2".into(), NoisySinglet::new(2, 0.5)?.state(), 2));

    let mut out = Vec::new();
    for (name, rho, m) in cases {
        let entry = match witness_search(&rho, m, cfg.trials, &mut rng)? {
            Some(w) => {
                let res = apply_filter(&rho, &w.filter)?;
                json!({
                    "case": name,
                    "m": m,
                    "found": true,
                    "p": crate::distill::MatrixJson::from(&w.p),
                    "q": crate::distill::MatrixJson::from(&w.q),
                    "filter": w.filter.to_json(),
                    "fraction_after": singlet_fraction_m(&res.post_state, m)?,
                    "probability": res.success_probability,
                })
            }
            None => json!({ "case": name, "m": m, "found": false }),
        };
        out.push(entry);
    }
    json_artifact(cfg.experiment.name(), &json!(out))
}

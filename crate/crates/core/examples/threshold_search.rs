//! Randomized filter search on `ρ_F`: the best singlet fraction stalls well
//! below one, while the same search on `σ_F` gets arbitrarily close.

use qtele::distill::{make_rho_f, make_sigma_f, threshold_experiment, ThresholdConfig};
use qtele::qmath::rng_from_seed;

pub fn run_example() -> qtele::Result<()> {
    let cfg = ThresholdConfig {
        trials: 2_000,
        ..ThresholdConfig::default()
    };
    for (name, rho) in [("rho", make_rho_f(0.5)?), ("sigma", make_sigma_f(0.5)?)] {
        let report = threshold_experiment(&rho, &cfg, &mut rng_from_seed(21))?;
        println!(
            "{name}_0.5: best fraction {:.6} at trial {} (probability {:.2e}), last-decile gain {:.1e}",
            report.best_fraction,
            report.best_trial,
            report.best_probability,
            report.last_decile_improvement()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

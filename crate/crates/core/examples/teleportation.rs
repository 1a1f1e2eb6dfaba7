//! Teleporting through noisy singlets: the standard protocol with resource
//! `ρ_p` acts as the depolarizing channel with the same `p`.

use qtele::channels::{channel_fidelity_exact, choi_matrix, depolarizing};
use qtele::qmath::{haar_state, max_abs_diff, rng_from_seed};
use qtele::states::{max_entangled_state, noisy_singlet};
use qtele::teleport::{classical_fidelity, standard_teleport_channel, teleport_outcomes, teleport_sample};

pub fn run_example() -> qtele::Result<()> {
    let d = 3;
    let mut rng = rng_from_seed(5);
    let psi = haar_state(d, &mut rng);

    let outcomes = teleport_outcomes(&max_entangled_state(d), &psi)?;
    let worst = outcomes
        .iter()
        .map(|o| 1.0 - o.bob_state.expectation(&psi))
        .fold(0.0, f64::max);
    println!(
        "ideal resource: {} outcomes, worst infidelity {worst:.2e}",
        outcomes.len()
    );

    for p in [0.0, 0.5, 1.0] {
        let ch = standard_teleport_channel(&noisy_singlet(d, p)?)?;
        let dist = max_abs_diff(&choi_matrix(&ch)?, &choi_matrix(&depolarizing(d, p)?)?);
        println!(
            "p={p}: fidelity {:.4} (classical {:.4}), distance to depolarizing {dist:.1e}",
            channel_fidelity_exact(&ch)?,
            classical_fidelity(d)
        );
    }

    let shot = teleport_sample(&noisy_singlet(d, 0.8)?, &psi, &mut rng)?;
    println!(
        "one shot at p=0.8: outcome {:?} (prob {:.4}), overlap {:.4}",
        shot.outcome,
        shot.probability,
        shot.bob_state.expectation(&psi)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

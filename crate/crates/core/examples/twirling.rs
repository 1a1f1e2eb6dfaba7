//! `U⊗Ū` twirling: states collapse onto the noisy-singlet line, channels onto
//! depolarizing channels, and the singlet fraction is unchanged.

use qtele::channels::{channel_fidelity_exact, entanglement_fidelity, random_channel};
use qtele::qmath::{rng_from_seed, trace_distance};
use qtele::states::{random_density_matrix, singlet_fraction};
use qtele::twirl::{twirl_channel, twirl_state_exact, twirl_state_mc, TwirlMode};

pub fn run_example() -> qtele::Result<()> {
    let mut rng = rng_from_seed(8);
    let rho = random_density_matrix(2, 2, &mut rng);
    let exact = twirl_state_exact(&rho)?;
    println!(
        "F(rho)={:.6} -> noisy singlet p={:.6}",
        singlet_fraction(&rho)?,
        exact.p()
    );
    for n in [100, 1_000, 10_000] {
        let mc = twirl_state_mc(&rho, n, &mut rng)?;
        println!(
            "  {n:>6} samples: trace distance {:.4}",
            trace_distance(mc.matrix(), &exact.matrix())
        );
    }

    let ch = random_channel(3, 2, &mut rng);
    let tw = twirl_channel(&ch, TwirlMode::Exact, &mut rng)?;
    println!(
        "channel F {:.6} -> {:.6}, f {:.6} -> {:.6}",
        entanglement_fidelity(&ch)?,
        entanglement_fidelity(&tw)?,
        channel_fidelity_exact(&ch)?,
        channel_fidelity_exact(&tw)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

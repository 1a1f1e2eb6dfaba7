//! PPT states never beat the classical teleportation fidelity: their singlet
//! fraction stays at or below `1/d`.

use qtele::qmath::rng_from_seed;
use qtele::states::{is_ppt, random_ppt_state, singlet_fraction, PPT_TOLERANCE};
use qtele::teleport::classical_fidelity;

pub fn run_example() -> qtele::Result<()> {
    let mut rng = rng_from_seed(13);
    for d in [2, 3] {
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let rho = random_ppt_state(d, d, &mut rng);
            assert!(is_ppt(&rho, PPT_TOLERANCE));
            worst = worst.max(singlet_fraction(&rho)?);
        }
        println!(
            "d={d}: max fraction over 50 PPT states {worst:.5} (bound {:.5}), classical fidelity {:.5}",
            1.0 / d as f64,
            classical_fidelity(d)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

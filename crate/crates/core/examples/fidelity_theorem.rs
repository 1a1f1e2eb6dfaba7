//! Average channel fidelity against entanglement fidelity: `f = (F d + 1)/(d + 1)`,
//! estimated by Monte-Carlo over Haar-random inputs.

use qtele::channels::{channel_fidelity_exact, channel_fidelity_mc, entanglement_fidelity, random_channel};
use qtele::qmath::rng_from_seed;

pub fn run_example() -> qtele::Result<()> {
    let mut rng = rng_from_seed(3);
    for d in [2, 3, 4] {
        let ch = random_channel(d, 3, &mut rng);
        let big_f = entanglement_fidelity(&ch)?;
        let exact = channel_fidelity_exact(&ch)?;
        let mc = channel_fidelity_mc(&ch, 4_000, &mut rng)?;
        println!(
            "d={d} F={big_f:.5} f_exact={exact:.5} f_mc={:.5} ± {:.5}",
            mc.mean, mc.std_err
        );
        assert!(mc.agrees_with(exact, 4.0));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

//! Channel/state correspondence: a channel's Choi state rebuilds the channel,
//! and a state with maximally mixed reduction yields a trace-preserving channel.

use qtele::channels::{channel_from_state, choi, choi_matrix, random_channel, random_state_with_mixed_reduction};
use qtele::qmath::{identity, max_abs_diff, rng_from_seed};

pub fn run_example() -> qtele::Result<()> {
    let mut rng = rng_from_seed(11);
    for d in [2, 3] {
        let ch = random_channel(d, 2, &mut rng);
        let rebuilt = channel_from_state(&choi(&ch)?)?;
        let err = max_abs_diff(&choi_matrix(&rebuilt)?, &choi_matrix(&ch)?);
        println!("d={d} channel -> state -> channel: max Choi error {err:.2e}");
        assert!(err < 1e-9);

        let rho = random_state_with_mixed_reduction(d, &mut rng);
        let ch = channel_from_state(&rho)?;
        let err = max_abs_diff(&choi_matrix(&ch)?, rho.matrix());
        let completeness = max_abs_diff(&ch.kraus_sum(), &identity(d));
        println!("d={d} state -> channel -> state: error {err:.2e}, Kraus completeness {completeness:.2e}");
        assert!(err < 1e-9 && completeness < 1e-9);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

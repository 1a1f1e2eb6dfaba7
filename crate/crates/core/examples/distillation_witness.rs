//! Product projections that reveal distillability: if `(P⊗Q)ρ(P⊗Q)` is a pure
//! entangled state, a local filter reaches the maximally entangled state exactly.

use qtele::distill::{apply_filter, verify_distillation_witness, witness_search};
use qtele::qmath::{diag, projector, r, rng_from_seed};
use qtele::states::{max_entangled_embedded, product_basis, singlet_fraction_m, BipartiteState, NoisySinglet};

pub fn run_example() -> qtele::Result<()> {
    let p = 0.6;
    let m = projector(&max_entangled_embedded(2, 3, 2)) * r(p) + projector(&product_basis(2, 3, 0, 2)) * r(1.0 - p);
    let rho = BipartiteState::new(2, 3, m)?;
    let filter = verify_distillation_witness(&rho, &diag(&[1.0, 1.0]), &diag(&[1.0, 1.0, 0.0]), 2)?
        .expect("projection isolates the entangled part");
    let out = apply_filter(&rho, &filter)?;
    println!(
        "witness on C2xC3: fraction {:.12} with probability {:.4}",
        singlet_fraction_m(&out.post_state, 2)?,
        out.success_probability
    );

    let mut rng = rng_from_seed(2);
    let found = witness_search(&NoisySinglet::new(2, 0.5)?.state(), 2, 500, &mut rng)?;
    println!(
        "search on separable noisy singlet: {}",
        if found.is_some() { "found" } else { "none" }
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

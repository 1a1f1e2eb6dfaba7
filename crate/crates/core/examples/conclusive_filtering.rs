//! A local filter on a non-maximally entangled pure state: the outcome is the
//! maximally entangled state with probability `2 min(a², b²)`.

use qtele::distill::{apply_filter, LocalFilter};
use qtele::qmath::{basis, diag, identity, r, tensor_vec};
use qtele::states::{singlet_fraction, BipartiteState};

pub fn run_example() -> qtele::Result<()> {
    let (a, b) = (0.8_f64, 0.6_f64);
    let psi = tensor_vec(&basis(2, 0), &basis(2, 0)) * r(a) + tensor_vec(&basis(2, 1), &basis(2, 1)) * r(b);
    let rho = BipartiteState::pure(&psi, 2, 2)?;
    let filter = LocalFilter::new(diag(&[b / a, 1.0]), identity(2))?;
    let out = apply_filter(&rho, &filter)?;
    println!(
        "fraction {:.4} -> {:.12} with probability {:.6} (2b² = {:.6})",
        singlet_fraction(&rho)?,
        singlet_fraction(&out.post_state)?,
        out.success_probability,
        2.0 * b * b
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtele::Result<()> {
    run_example()
}

//! `U⊗U*` twirling of bipartite states and the matching twirl of channels,
//! `Λ ↦ ∫dU U†Λ(U·U†)U`.
//!
//! `U*` is entrywise conjugation in the computational basis, the basis in
//! which `P_+` is written.

use crate::channels::{channel_from_state, choi_matrix, depolarizing, Channel};
use crate::qmath::{haar_unitary, r, tensor, ComplexMatrix, QRng};
use crate::states::{singlet_fraction, BipartiteState, NoisySinglet};
use crate::{Error, Result};

/// How to evaluate the Haar average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwirlMode {
    Exact,
    MonteCarlo { samples: usize },
}

/// Closed-form twirl: the invariant-family member with the same singlet
/// fraction. For `F < 1/d²` the result has `p < 0`.
pub fn twirl_state_exact(rho: &BipartiteState) -> Result<NoisySinglet> {
    let d = rho.square_dim()?;
    NoisySinglet::with_fraction(d, singlet_fraction(rho)?.clamp(0.0, 1.0))
}

/// `U⊗U*` for a single unitary.
pub fn local_twirl_operator(u: &ComplexMatrix) -> ComplexMatrix {
    tensor(u, &u.map(|z| z.conj()))
}

/// Empirical average of `(U⊗U*)ρ(U⊗U*)†` over Haar-random `U`.
pub fn twirl_state_mc(rho: &BipartiteState, samples: usize, rng: &mut QRng) -> Result<BipartiteState> {
    let d = rho.square_dim()?;
    check_samples(samples)?;
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for _ in 0..samples {
        let w = local_twirl_operator(&haar_unitary(d, rng));
        acc += &w * rho.matrix() * w.adjoint();
    }
    BipartiteState::new(d, d, acc * r(1.0 / samples as f64))
}

/// Channel twirl. The exact mode goes through the Choi state and returns the
/// depolarizing channel with the same entanglement fidelity; the Monte-Carlo
/// mode averages `U†∘Λ∘U` and rebuilds Kraus operators from the averaged
/// Choi matrix.
pub fn twirl_channel(channel: &Channel, mode: TwirlMode, rng: &mut QRng) -> Result<Channel> {
    let d = channel.square_dim()?;
    if !channel.is_trace_preserving() {
        return Err(Error::NotTracePreserving);
    }
    match mode {
        TwirlMode::Exact => {
            let choi = BipartiteState::new(d, d, choi_matrix(channel)?)?;
            let twirled = twirl_state_exact(&choi)?;
            depolarizing(d, twirled.p())
        }
        TwirlMode::MonteCarlo { samples } => {
            check_samples(samples)?;
            let mut acc = ComplexMatrix::zeros(d * d, d * d);
            for _ in 0..samples {
                let u = haar_unitary(d, rng);
                acc += choi_matrix(&channel.conjugated(&u)?)?;
            }
            let avg = BipartiteState::new(d, d, acc * r(1.0 / samples as f64))?;
            channel_from_state(&avg)
        }
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::OutOfRange {
            name: "samples",
            value: 0.0,
            range: "[1, ∞)".into(),
        });
    }
    Ok(())
}

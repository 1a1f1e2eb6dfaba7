//! Weyl operators, the standard qudit teleportation protocol and the fidelity
//! relations between singlet fraction and teleportation fidelity.

use std::f64::consts::PI;

use rand::Rng;

use crate::channels::Channel;
use crate::qmath::{self, c, eigh, identity, partial_trace, r, tensor, CVector, ComplexMatrix, QRng, Subsystem};
use crate::states::{self, check_range, max_entangled, BipartiteState, DensityMatrix};
use crate::twirl::twirl_state_exact;
use crate::{Error, Result};

/// Outcomes below this probability are treated as impossible.
pub const OUTCOME_CUTOFF: f64 = 1e-14;

/// `X^m Z^n` on `C^d`, with `X|k⟩ = |k+1 mod d⟩` and `Z|k⟩ = ω^k|k⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylOperator {
    pub d: usize,
    pub m: usize,
    pub n: usize,
}

impl WeylOperator {
    pub fn new(d: usize, m: usize, n: usize) -> Result<Self> {
        if d == 0 || m >= d || n >= d {
            return Err(Error::OutOfRange {
                name: "weyl index",
                value: m.max(n) as f64,
                range: format!("[0, {d})"),
            });
        }
        Ok(Self { d, m, n })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let d = self.d;
        let mut w = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            let angle = 2.0 * PI * ((self.n * k) % d) as f64 / d as f64;
            w[((k + self.m) % d, k)] = c(angle.cos(), angle.sin());
        }
        w
    }

    /// Bob's correction after Alice reports this outcome. For the
    /// `(I⊗W)Ψ_+` Bell basis it is `Wᵀ`, pinned by requiring the identity
    /// channel from `P_+`.
    pub fn correction(&self) -> ComplexMatrix {
        self.matrix().transpose()
    }

    /// `(I⊗W)|Ψ_+⟩`.
    pub fn bell_vector(&self) -> CVector {
        tensor(&identity(self.d), &self.matrix()) * max_entangled(self.d)
    }
}

pub fn weyl(d: usize, m: usize, n: usize) -> Result<ComplexMatrix> {
    Ok(WeylOperator::new(d, m, n)?.matrix())
}

/// All `d²` Weyl operators, `(m, n)` in row-major order so index 0 is `I`.
pub fn weyl_operators(d: usize) -> Vec<ComplexMatrix> {
    weyl_outcomes(d).map(|w| w.matrix()).collect()
}

fn weyl_outcomes(d: usize) -> impl Iterator<Item = WeylOperator> {
    (0..d).flat_map(move |m| (0..d).map(move |n| WeylOperator { d, m, n }))
}

/// Channel realised by standard teleportation through the resource `ρ`:
/// Alice measures (input, A) in the basis `(I⊗W_{mn})Ψ_+`, Bob applies
/// `W_{mn}ᵀ`.
///
/// With `ρ = Σ λ_k |φ_k⟩⟨φ_k|`, outcome `(m,n)` and component `k` contribute
/// the Kraus operator `√λ_k W_{mn}ᵀ (Φ̄_{mn} Φ_k)ᵀ`, where `Φ` denotes the
/// `d×d` coefficient matrix of a bipartite vector.
pub fn standard_teleport_channel(rho: &BipartiteState) -> Result<Channel> {
    let d = rho.square_dim()?;
    let eig = eigh(rho.matrix());
    let coeff = |v: &CVector| ComplexMatrix::from_fn(d, d, |i, j| v[i * d + j]);
    let mut kraus = Vec::new();
    for k in (0..eig.values.len()).rev() {
        let weight = eig.values[k];
        if weight <= 0.0 {
            continue;
        }
        let phi_k = coeff(&eig.vector(k));
        for w in weyl_outcomes(d) {
            let bell = coeff(&w.bell_vector()).map(|z| z.conj());
            let bob = (bell * &phi_k).transpose();
            kraus.push(w.correction() * bob * r(weight.sqrt()));
        }
    }
    Channel::new(d, d, kraus)
}

/// One branch of the protocol.
#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    pub outcome: (usize, usize),
    pub probability: f64,
    /// Bob's state after his correction.
    pub bob_state: DensityMatrix,
}

/// Every outcome with non-negligible probability, computed on the full
/// three-party state `|ψ⟩⟨ψ| ⊗ ρ` ordered (input, A, B).
pub fn teleport_outcomes(rho: &BipartiteState, psi: &CVector) -> Result<Vec<TeleportOutcome>> {
    let d = rho.square_dim()?;
    if psi.len() != d {
        return Err(Error::dims(format!("input of length {d}"), psi.len()));
    }
    let psi = psi / r(psi.norm());
    let joint = tensor(&qmath::projector(&psi), rho.matrix());
    let mut out = Vec::new();
    for w in weyl_outcomes(d) {
        let proj = tensor(&qmath::projector(&w.bell_vector()), &identity(d));
        let post = &proj * &joint * &proj;
        let bob = partial_trace(&post, (d * d, d), Subsystem::B)?;
        let probability = bob.trace().re;
        if probability <= OUTCOME_CUTOFF {
            continue;
        }
        let corr = w.correction();
        let corrected = &corr * bob * corr.adjoint() * r(1.0 / probability);
        out.push(TeleportOutcome {
            outcome: (w.m, w.n),
            probability,
            bob_state: DensityMatrix::new(qmath::hermitian_part(&corrected))?,
        });
    }
    Ok(out)
}

/// Samples one measurement outcome with its Born probability.
pub fn teleport_sample(rho: &BipartiteState, psi: &CVector, rng: &mut QRng) -> Result<TeleportOutcome> {
    let mut outcomes = teleport_outcomes(rho, psi)?;
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    let mut x = rng.random::<f64>() * total;
    let last = outcomes.len() - 1;
    for (idx, o) in outcomes.iter().enumerate() {
        if x < o.probability || idx == last {
            return Ok(outcomes.swap_remove(idx));
        }
        x -= o.probability;
    }
    unreachable!("at least one outcome has positive probability")
}

/// `f_max = (F_max d + 1)/(d + 1)`, `F_max ∈ [1/d², 1]`.
pub fn optimal_fidelity_from_fraction(d: usize, f_max: f64) -> Result<f64> {
    check_range("F_max", f_max, 1.0 / (d * d) as f64, 1.0)?;
    states::fidelity_from_fraction(d, f_max)
}

/// Best fidelity achievable without shared entanglement, `2/(d+1)`.
pub fn classical_fidelity(d: usize) -> f64 {
    2.0 / (d as f64 + 1.0)
}

/// Twirl the resource into the invariant family first, then teleport
/// through it. Attains `(F d + 1)/(d + 1)` with `F` the resource's singlet
/// fraction.
pub fn twirled_teleport_channel(rho: &BipartiteState) -> Result<Channel> {
    standard_teleport_channel(&twirl_state_exact(rho)?.state())
}

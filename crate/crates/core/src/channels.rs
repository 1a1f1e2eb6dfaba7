//! Completely positive maps in Kraus form and the channel ↔ state
//! correspondence `Λ ↦ (I⊗Λ)P_+`.

use serde::{Deserialize, Serialize};

use crate::qmath::{self, eigh, haar_state, haar_unitary, identity, max_abs_diff, r, ComplexMatrix, QRng, Subsystem};
use crate::states::{
    self, check_range, matrix_to_pairs, max_entangled, pairs_to_matrix, BipartiteState, DensityMatrix,
};
use crate::teleport::weyl_operators;
use crate::{Error, Result};

/// Tolerance on `Σ K†K = I` for trace preservation.
pub const TRACE_PRESERVING_TOLERANCE: f64 = 1e-9;

/// Spectral weights at or below this are dropped when extracting Kraus operators.
pub const KRAUS_EIGEN_CUTOFF: f64 = 1e-12;

/// Maximum deviation of the left reduction from `I/d` accepted by
/// [`channel_from_state`].
pub const REDUCTION_TOLERANCE: f64 = 1e-8;

/// A completely positive map `σ ↦ Σ K σ K†` from `C^{d_in}` to `C^{d_out}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
    trace_preserving: bool,
}

impl Channel {
    /// Builds the map and sets the trace-preserving flag from `Σ K†K`.
    pub fn new(d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        check_kraus_shapes(d_in, d_out, &kraus)?;
        let trace_preserving = completeness_defect(d_in, &kraus) <= TRACE_PRESERVING_TOLERANCE;
        Ok(Self {
            d_in,
            d_out,
            kraus,
            trace_preserving,
        })
    }

    /// Builds the map with an explicit flag; a `true` flag is checked.
    pub fn with_flag(d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix>, trace_preserving: bool) -> Result<Self> {
        check_kraus_shapes(d_in, d_out, &kraus)?;
        if trace_preserving {
            let defect = completeness_defect(d_in, &kraus);
            if defect > TRACE_PRESERVING_TOLERANCE {
                return Err(Error::invariant(
                    "trace-preserving",
                    format!("max |Σ K†K − I| = {defect:e}"),
                ));
            }
        }
        Ok(Self {
            d_in,
            d_out,
            kraus,
            trace_preserving,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::unitary(identity(d))
    }

    /// `σ ↦ U σ U†`.
    pub fn unitary(u: ComplexMatrix) -> Self {
        let d = u.nrows();
        Self::new(d, d, vec![u]).expect("square operator")
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `Σ K†K`.
    pub fn kraus_sum(&self) -> ComplexMatrix {
        kraus_sum(self.d_in, &self.kraus)
    }

    /// `Σ K†K ≼ I` within tolerance.
    pub fn is_trace_nonincreasing(&self) -> bool {
        let gap = identity(self.d_in) - self.kraus_sum();
        qmath::min_eigenvalue(&gap) >= -TRACE_PRESERVING_TOLERANCE
    }

    pub fn square_dim(&self) -> Result<usize> {
        if self.d_in != self.d_out {
            return Err(Error::dims(
                "square channel",
                format!("{} -> {}", self.d_in, self.d_out),
            ));
        }
        Ok(self.d_in)
    }

    /// `Σ K X K†` for any `d_in × d_in` operator `X`.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.nrows() != self.d_in || x.ncols() != self.d_in {
            return Err(Error::dims(
                format!("{0}x{0}", self.d_in),
                format!("{}x{}", x.nrows(), x.ncols()),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    /// Output of the map on a state. Only trace-preserving maps return a
    /// unit-trace matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        self.apply_operator(rho.matrix())
    }

    /// `σ ↦ U† Λ(U σ U†) U`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        let d = self.square_dim()?;
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::dims(
                format!("{d}x{d} unitary"),
                format!("{}x{}", u.nrows(), u.ncols()),
            ));
        }
        let kraus = self.kraus.iter().map(|k| u.adjoint() * k * u).collect();
        Ok(Self { kraus, ..self.clone() })
    }

    pub fn to_json(&self) -> ChannelJson {
        ChannelJson {
            d_in: self.d_in,
            d_out: self.d_out,
            kraus: self.kraus.iter().map(matrix_to_pairs).collect(),
            trace_preserving: self.trace_preserving,
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: ChannelJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// On-disk channel: `{ "d_in", "d_out", "kraus": [matrix, ...], "trace_preserving" }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
    pub trace_preserving: bool,
}

impl TryFrom<ChannelJson> for Channel {
    type Error = Error;

    fn try_from(raw: ChannelJson) -> Result<Self> {
        let kraus = raw
            .kraus
            .iter()
            .map(|k| pairs_to_matrix(raw.d_out, raw.d_in, k))
            .collect::<Result<Vec<_>>>()?;
        Channel::with_flag(raw.d_in, raw.d_out, kraus, raw.trace_preserving)
    }
}

fn check_kraus_shapes(d_in: usize, d_out: usize, kraus: &[ComplexMatrix]) -> Result<()> {
    if kraus.is_empty() {
        return Err(Error::invariant(
            "kraus-nonempty",
            "channel needs at least one Kraus operator",
        ));
    }
    for k in kraus {
        if k.nrows() != d_out || k.ncols() != d_in {
            return Err(Error::dims(
                format!("{d_out}x{d_in} Kraus operator"),
                format!("{}x{}", k.nrows(), k.ncols()),
            ));
        }
        if !qmath::all_finite(k) {
            return Err(Error::invariant(
                "finite-entries",
                "Kraus operator has NaN or infinite entries",
            ));
        }
    }
    Ok(())
}

fn kraus_sum(d_in: usize, kraus: &[ComplexMatrix]) -> ComplexMatrix {
    kraus
        .iter()
        .fold(ComplexMatrix::zeros(d_in, d_in), |acc, k| acc + k.adjoint() * k)
}

fn completeness_defect(d_in: usize, kraus: &[ComplexMatrix]) -> f64 {
    max_abs_diff(&kraus_sum(d_in, kraus), &identity(d_in))
}

/// `σ ↦ p σ + (1−p) I/d`, realised with the `d²` Weyl operators.
///
/// Complete positivity allows `p ∈ [−1/(d²−1), 1]`.
pub fn depolarizing(d: usize, p: f64) -> Result<Channel> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: "[2, ∞)".into(),
        });
    }
    let d2 = (d * d) as f64;
    check_range("p", p, -1.0 / (d2 - 1.0), 1.0)?;
    let kraus = weyl_operators(d)
        .into_iter()
        .enumerate()
        .filter_map(|(idx, w)| {
            let weight = if idx == 0 { p + (1.0 - p) / d2 } else { (1.0 - p) / d2 };
            (weight > 0.0).then(|| w * r(weight.sqrt()))
        })
        .collect();
    Channel::new(d, d, kraus)
}

/// `(I⊗Λ)P_+` for any square CP map.
pub fn choi_matrix(channel: &Channel) -> Result<ComplexMatrix> {
    let d = channel.square_dim()?;
    let p_plus = qmath::projector(&max_entangled(d));
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for k in channel.kraus() {
        let lifted = qmath::tensor(&identity(d), k);
        out += &lifted * &p_plus * lifted.adjoint();
    }
    Ok(out)
}

/// Choi state of a square channel. Fails with a unit-trace violation when the
/// map does not send `P_+` to a state.
pub fn choi(channel: &Channel) -> Result<BipartiteState> {
    let d = channel.square_dim()?;
    BipartiteState::new(d, d, choi_matrix(channel)?)
}

/// The unique trace-preserving channel with `(I⊗Λ)P_+ = ρ`.
///
/// Requires the left reduction of `ρ` to be `I/d`.
pub fn channel_from_state(rho: &BipartiteState) -> Result<Channel> {
    let d = rho.square_dim()?;
    let left = rho.reduced(Subsystem::A);
    let dev = max_abs_diff(&left, &(identity(d) * r(1.0 / d as f64)));
    if dev > REDUCTION_TOLERANCE {
        return Err(Error::invariant(
            "maximally-mixed-reduction",
            format!("max |Tr_B ρ − I/d| = {dev:e}"),
        ));
    }
    let kraus = kraus_from_spectrum(rho, d);
    // The reduction check above guarantees Σ K†K = I up to round-off.
    Channel::with_flag(d, d, kraus, true)
}

/// The CP map with `(I⊗Λ)P_+ = ρ` for any square state. The result is
/// flagged trace preserving only when the left reduction is `I/d`.
pub fn cp_map_from_state(rho: &BipartiteState) -> Result<Channel> {
    let d = rho.square_dim()?;
    Channel::new(d, d, kraus_from_spectrum(rho, d))
}

/// `ρ = Σ p_k |ψ_k⟩⟨ψ_k|` with `ψ_k = (I⊗V_k)Ψ_+`; with the `i·d + j`
/// index convention `V_k = √d C_kᵀ`, where `C_k[i,j]` are the coefficients of
/// `ψ_k`.
fn kraus_from_spectrum(rho: &BipartiteState, d: usize) -> Vec<ComplexMatrix> {
    let eig = eigh(rho.matrix());
    let scale = (d as f64).sqrt();
    let mut kraus: Vec<ComplexMatrix> = (0..eig.values.len())
        .rev()
        .filter(|&k| eig.values[k] > KRAUS_EIGEN_CUTOFF)
        .map(|k| {
            let psi = eig.vector(k);
            let weight = eig.values[k].sqrt() * scale;
            ComplexMatrix::from_fn(d, d, |row, col| psi[col * d + row] * r(weight))
        })
        .collect();
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(d, d));
    }
    kraus
}

/// `F(Λ) = ⟨Ψ_+|(I⊗Λ)P_+|Ψ_+⟩`.
pub fn entanglement_fidelity(channel: &Channel) -> Result<f64> {
    let d = channel.square_dim()?;
    let psi = max_entangled(d);
    Ok(psi.dotc(&(choi_matrix(channel)? * &psi)).re)
}

/// Average fidelity over pure inputs via `f = (F d + 1)/(d + 1)`.
pub fn channel_fidelity_exact(channel: &Channel) -> Result<f64> {
    let d = channel.square_dim()?;
    if !channel.is_trace_preserving() {
        return Err(Error::NotTracePreserving);
    }
    let fe = entanglement_fidelity(channel)?;
    let df = d as f64;
    Ok((fe * df + 1.0) / (df + 1.0))
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std_err = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_err,
            samples: n,
        }
    }

    /// `|mean − target| ≤ k · std_err`, with an absolute floor for the
    /// zero-variance case.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_err + 1e-12
    }
}

/// Monte-Carlo estimate of `∫dφ ⟨φ|Λ(|φ⟩⟨φ|)|φ⟩` over Haar-random inputs.
pub fn channel_fidelity_mc(channel: &Channel, samples: usize, rng: &mut QRng) -> Result<McEstimate> {
    let d = channel.square_dim()?;
    if !channel.is_trace_preserving() {
        return Err(Error::NotTracePreserving);
    }
    if samples == 0 {
        return Err(Error::OutOfRange {
            name: "samples",
            value: 0.0,
            range: "[1, ∞)".into(),
        });
    }
    let xs: Vec<f64> = (0..samples)
        .map(|_| {
            let phi = haar_state(d, rng);
            channel.kraus().iter().map(|k| phi.dotc(&(k * &phi)).norm_sqr()).sum()
        })
        .collect();
    Ok(McEstimate::from_samples(&xs))
}

/// Random channel from a Haar unitary on system ⊗ environment (environment
/// starting in `|0⟩`), with the environment traced out.
pub fn random_channel(d: usize, env_dim: usize, rng: &mut QRng) -> Channel {
    let u = haar_unitary(d * env_dim, rng);
    let kraus = (0..env_dim)
        .map(|e| ComplexMatrix::from_fn(d, d, |out, inp| u[(out * env_dim + e, inp * env_dim)]))
        .collect();
    Channel::new(d, d, kraus).expect("Stinespring dilation gives a channel")
}

/// Random state with left reduction exactly `I/d`, obtained by locally
/// filtering a random full-rank state.
pub fn random_state_with_mixed_reduction(d: usize, rng: &mut QRng) -> BipartiteState {
    let rho = states::random_density_matrix(d, d, rng);
    let left = rho.reduced(Subsystem::A);
    let filter = qmath::psd_inv_sqrt(&left, 0.0) * r(1.0 / (d as f64).sqrt());
    let lifted = qmath::tensor(&filter, &identity(d));
    let m = &lifted * rho.matrix() * lifted.adjoint();
    BipartiteState::new(d, d, m).expect("filtered state keeps unit trace")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{basis, c, rng_from_seed, tensor_vec};
    use crate::states::{max_entangled_state, noisy_singlet, singlet_fraction};

    #[test]
    fn identity_channel_leaves_states_alone() {
        let rho = DensityMatrix::pure(&basis(3, 1)).unwrap();
        let out = Channel::identity(3).apply(&rho).unwrap();
        assert!(max_abs_diff(&out, rho.matrix()) < 1e-15);
    }

    #[test]
    fn fully_depolarizing_qubit_randomizes() {
        let ch = depolarizing(2, 0.0).unwrap();
        let rho = DensityMatrix::pure(&(basis(2, 0) + basis(2, 1) * c(0.0, 1.0))).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(max_abs_diff(&out, &(identity(2) * r(0.5))) < 1e-15);
    }

    #[test]
    fn depolarizing_qutrit_on_basis_state() {
        let ch = depolarizing(3, 0.5).unwrap();
        let out = ch.apply(&DensityMatrix::pure(&basis(3, 0)).unwrap()).unwrap();
        // p|0⟩⟨0| + (1-p)I/3 = diag(0.5 + 1/6, 1/6, 1/6)
        let want = qmath::diag(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]);
        assert!(max_abs_diff(&out, &want) < 1e-14);
    }

    #[test]
    fn depolarizing_range() {
        assert!(depolarizing(2, 1.0).unwrap().is_trace_preserving());
        assert!(depolarizing(2, -1.0 / 3.0).unwrap().is_trace_preserving());
        assert!(depolarizing(2, -0.4).is_err());
        assert!(depolarizing(2, 1.1).is_err());
        let id = depolarizing(3, 1.0).unwrap();
        assert!(max_abs_diff(&choi_matrix(&id).unwrap(), max_entangled_state(3).matrix()) < 1e-14);
    }

    #[test]
    fn choi_of_depolarizing_is_noisy_singlet() {
        for d in 2..=4 {
            for p in [0.0, 0.3, 0.5, 1.0] {
                let ch = depolarizing(d, p).unwrap();
                let st = noisy_singlet(d, p).unwrap();
                assert!(max_abs_diff(&choi_matrix(&ch).unwrap(), st.matrix()) < 1e-14);
            }
        }
        let full = choi(&depolarizing(3, 0.0).unwrap()).unwrap();
        assert!(max_abs_diff(full.matrix(), &(identity(9) * r(1.0 / 9.0))) < 1e-14);
    }

    #[test]
    fn channel_from_maximally_entangled_is_identity() {
        let ch = channel_from_state(&max_entangled_state(3)).unwrap();
        assert_eq!(ch.kraus().len(), 1);
        let k = &ch.kraus()[0];
        // a single Kraus operator equal to I up to a global phase
        let phase = k[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(max_abs_diff(&(k * phase.conj()), &identity(3)) < 1e-12);
    }

    #[test]
    fn noisy_singlet_gives_depolarizing_map() {
        let ch = channel_from_state(&noisy_singlet(2, 0.5).unwrap()).unwrap();
        assert!(ch.is_trace_preserving());
        let dep = depolarizing(2, 0.5).unwrap();
        assert!(max_abs_diff(&choi_matrix(&ch).unwrap(), &choi_matrix(&dep).unwrap()) < 1e-12);
    }

    #[test]
    fn product_state_gives_non_trace_preserving_map() {
        let rho = BipartiteState::pure(&tensor_vec(&basis(2, 0), &basis(2, 1)), 2, 2).unwrap();
        assert!(matches!(
            channel_from_state(&rho),
            Err(Error::InvariantViolation {
                invariant: "maximally-mixed-reduction",
                ..
            })
        ));
        let map = cp_map_from_state(&rho).unwrap();
        assert!(!map.is_trace_preserving());
        assert!(max_abs_diff(&choi_matrix(&map).unwrap(), rho.matrix()) < 1e-12);
        assert!(channel_fidelity_exact(&map).is_err());
    }

    #[test]
    fn entanglement_fidelity_examples() {
        assert!((entanglement_fidelity(&Channel::identity(4)).unwrap() - 1.0).abs() < 1e-14);
        let f = entanglement_fidelity(&depolarizing(3, 0.5).unwrap()).unwrap();
        assert!((f - 0.555_555_555_555_555_6).abs() < 1e-12);
        let full = entanglement_fidelity(&depolarizing(5, 0.0).unwrap()).unwrap();
        assert!((full - 1.0 / 25.0).abs() < 1e-14);
    }

    #[test]
    fn channel_fidelity_exact_examples() {
        assert!((channel_fidelity_exact(&Channel::identity(3)).unwrap() - 1.0).abs() < 1e-14);
        let f = channel_fidelity_exact(&depolarizing(3, 0.5).unwrap()).unwrap();
        assert!((f - 0.666_666_666_666_666_6).abs() < 1e-12);
        for d in 2..=5 {
            let f = channel_fidelity_exact(&depolarizing(d, 0.0).unwrap()).unwrap();
            assert!((f - 1.0 / d as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn channel_fidelity_mc_identity_has_no_spread() {
        let est = channel_fidelity_mc(&Channel::identity(3), 100, &mut rng_from_seed(0)).unwrap();
        assert!((est.mean - 1.0).abs() < 1e-12);
        assert!(est.std_err < 1e-12);
    }

    #[test]
    fn channel_fidelity_mc_depolarizing_qubit() {
        let est = channel_fidelity_mc(&depolarizing(2, 0.5).unwrap(), 10_000, &mut rng_from_seed(1)).unwrap();
        assert!(est.agrees_with(0.75, 3.0), "{est:?}");
    }

    #[test]
    fn random_channels_are_trace_preserving_and_map_states_to_states() {
        let mut rng = rng_from_seed(2);
        for d in 2..=3 {
            for _ in 0..10 {
                let ch = random_channel(d, d, &mut rng);
                assert!(ch.is_trace_preserving());
                let rho = states::random_density_matrix(d, 1, &mut rng);
                let out = ch.apply(rho.density()).unwrap();
                assert!((out.trace().re - 1.0).abs() < 1e-12);
                assert!(qmath::min_eigenvalue(&out) > -1e-12);
            }
        }
    }

    #[test]
    fn choi_left_reduction_is_maximally_mixed() {
        let mut rng = rng_from_seed(9);
        let ch = random_channel(3, 2, &mut rng);
        let st = choi(&ch).unwrap();
        assert!(max_abs_diff(&st.reduced(Subsystem::A), &(identity(3) * r(1.0 / 3.0))) < 1e-12);
        assert!((singlet_fraction(&st).unwrap() - entanglement_fidelity(&ch).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn ricochet_identity() {
        let mut rng = rng_from_seed(10);
        for d in 2..=4 {
            let cm = qmath::complex_gaussian_matrix(d, d, &mut rng);
            let psi = max_entangled(d);
            let left = qmath::tensor(&cm, &identity(d)) * &psi;
            let right = qmath::tensor(&identity(d), &cm.transpose()) * &psi;
            assert!((left - right).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trips_through_the_choi_state() {
        let mut rng = rng_from_seed(12);
        for d in 2..=3 {
            for _ in 0..10 {
                let ch = random_channel(d, 1 + d, &mut rng);
                let back = channel_from_state(&choi(&ch).unwrap()).unwrap();
                assert!(max_abs_diff(&choi_matrix(&back).unwrap(), &choi_matrix(&ch).unwrap()) < 1e-9);

                let rho = random_state_with_mixed_reduction(d, &mut rng);
                let ch2 = channel_from_state(&rho).unwrap();
                assert!(max_abs_diff(&choi_matrix(&ch2).unwrap(), rho.matrix()) < 1e-9);
                assert!(max_abs_diff(&ch2.kraus_sum(), &identity(d)) < 1e-9);
            }
        }
    }

    #[test]
    fn json_round_trip_and_flag_check() {
        let ch = depolarizing(2, 0.25).unwrap();
        let back = Channel::from_json_str(&ch.to_json_string().unwrap()).unwrap();
        assert!(back.is_trace_preserving());
        assert!(max_abs_diff(&choi_matrix(&back).unwrap(), &choi_matrix(&ch).unwrap()) < 1e-15);

        let lying = r#"{"d_in":2,"d_out":2,"kraus":[[[0.5,0],[0,0],[0,0],[0.5,0]]],"trace_preserving":true}"#;
        assert!(matches!(
            Channel::from_json_str(lying),
            Err(Error::InvariantViolation {
                invariant: "trace-preserving",
                ..
            })
        ));
        let honest = r#"{"d_in":2,"d_out":2,"kraus":[[[0.5,0],[0,0],[0,0],[0.5,0]]],"trace_preserving":false}"#;
        let sub = Channel::from_json_str(honest).unwrap();
        assert!(!sub.is_trace_preserving());
        assert!(sub.is_trace_nonincreasing());
    }

    #[test]
    fn dimension_errors() {
        let ch = depolarizing(2, 0.5).unwrap();
        assert!(ch.apply_operator(&identity(3)).is_err());
        let rect = Channel::new(2, 3, vec![ComplexMatrix::zeros(3, 2)]).unwrap();
        assert!(choi_matrix(&rect).is_err());
        assert!(Channel::new(2, 2, vec![]).is_err());
    }
}

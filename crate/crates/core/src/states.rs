//! Density matrices, the maximally entangled state, noisy singlets and
//! singlet-fraction bookkeeping.

use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::qmath::{
    self, all_finite, basis, eigh, haar_state, identity, is_hermitian, min_eigenvalue, partial_trace,
    partial_transpose, r, tensor_vec, CVector, ComplexMatrix, QRng, Subsystem,
};
use crate::{Error, Result};

/// Tolerance used when validating density-matrix invariants.
pub const STATE_TOLERANCE: f64 = 1e-9;

/// Default tolerance for [`is_ppt`].
pub const PPT_TOLERANCE: f64 = 1e-9;

/// Number of product pure states mixed by [`random_separable_state`].
pub const SEPARABLE_MIXTURE_SIZE: usize = 50;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the matrix; the stored matrix is the Hermitian part of the input.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::dims(
                "square matrix",
                format!("{}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        if !all_finite(&matrix) {
            return Err(Error::invariant("finite-entries", "matrix has NaN or infinite entries"));
        }
        if !is_hermitian(&matrix, STATE_TOLERANCE) {
            let asym = qmath::max_abs_diff(&matrix, &matrix.adjoint());
            return Err(Error::invariant("hermitian", format!("max |M - M†| = {asym:e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOLERANCE || tr.im.abs() > STATE_TOLERANCE {
            return Err(Error::invariant("unit-trace", format!("trace = {tr}")));
        }
        let matrix = qmath::hermitian_part(&matrix);
        let lowest = min_eigenvalue(&matrix);
        if lowest < -STATE_TOLERANCE {
            return Err(Error::invariant(
                "positive-semidefinite",
                format!("minimum eigenvalue {lowest:e}"),
            ));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        let v = psi / r(n);
        Self::new(qmath::projector(&v))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: identity(d) * r(1.0 / d as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `⟨v|ρ|v⟩`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        v.dotc(&(&self.matrix * v)).re
    }
}

/// A density matrix on `C^{d_A}⊗C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d_a: usize,
    d_b: usize,
    state: DensityMatrix,
}

impl BipartiteState {
    pub fn new(d_a: usize, d_b: usize, matrix: ComplexMatrix) -> Result<Self> {
        Self::from_density(d_a, d_b, DensityMatrix::new(matrix)?)
    }

    pub fn from_density(d_a: usize, d_b: usize, state: DensityMatrix) -> Result<Self> {
        if d_a == 0 || d_b == 0 || state.dim() != d_a * d_b {
            return Err(Error::invariant(
                "factor-dimensions",
                format!("{}x{} matrix cannot be split as {d_a}x{d_b}", state.dim(), state.dim()),
            ));
        }
        Ok(Self { d_a, d_b, state })
    }

    pub fn pure(psi: &CVector, d_a: usize, d_b: usize) -> Result<Self> {
        Self::from_density(d_a, d_b, DensityMatrix::pure(psi)?)
    }

    /// Maximally mixed state `I/(d_A d_B)`.
    pub fn maximally_mixed(d_a: usize, d_b: usize) -> Self {
        Self {
            d_a,
            d_b,
            state: DensityMatrix::maximally_mixed(d_a * d_b),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn reduced(&self, keep: Subsystem) -> ComplexMatrix {
        partial_trace(self.matrix(), self.dims(), keep).expect("dimensions validated at construction")
    }

    /// Square `d×d` state, or a dimension error.
    pub fn square_dim(&self) -> Result<usize> {
        if self.d_a != self.d_b {
            return Err(Error::dims("d_A = d_B", format!("{} x {}", self.d_a, self.d_b)));
        }
        Ok(self.d_a)
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            d_a: self.d_a,
            d_b: self.d_b,
            matrix: matrix_to_pairs(self.matrix()),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    /// Parses and re-validates a state file.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// On-disk state: `{ "d_a", "d_b", "matrix": [[re, im], ...] }`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub d_a: usize,
    pub d_b: usize,
    pub matrix: Vec<[f64; 2]>,
}

impl TryFrom<StateJson> for BipartiteState {
    type Error = Error;

    fn try_from(raw: StateJson) -> Result<Self> {
        let n = raw.d_a * raw.d_b;
        let m = pairs_to_matrix(n, n, &raw.matrix)?;
        BipartiteState::new(raw.d_a, raw.d_b, m)
    }
}

pub(crate) fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

pub(crate) fn pairs_to_matrix(rows: usize, cols: usize, pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    if pairs.len() != rows * cols {
        return Err(Error::Malformed(format!(
            "expected {} matrix entries for {rows}x{cols}, found {}",
            rows * cols,
            pairs.len()
        )));
    }
    let m = ComplexMatrix::from_fn(rows, cols, |i, j| {
        let [re, im] = pairs[i * cols + j];
        qmath::c(re, im)
    });
    if !all_finite(&m) {
        return Err(Error::invariant("finite-entries", "matrix has NaN or infinite entries"));
    }
    Ok(m)
}

/// `(1/√d) Σ |ii⟩`.
pub fn max_entangled(d: usize) -> CVector {
    max_entangled_embedded(d, d, d)
}

/// `(1/√m) Σ_{i<m} |ii⟩` inside `C^{d_A}⊗C^{d_B}`.
pub fn max_entangled_embedded(d_a: usize, d_b: usize, m: usize) -> CVector {
    let mut v = CVector::zeros(d_a * d_b);
    let amp = r(1.0 / (m as f64).sqrt());
    for i in 0..m {
        v[i * d_b + i] = amp;
    }
    v
}

/// Projector on the maximally entangled state of `C^d⊗C^d`.
pub fn max_entangled_state(d: usize) -> BipartiteState {
    BipartiteState::pure(&max_entangled(d), d, d).expect("unit vector")
}

/// `F(ρ) = ⟨Ψ_+|ρ|Ψ_+⟩`.
pub fn singlet_fraction(rho: &BipartiteState) -> Result<f64> {
    let d = rho.square_dim()?;
    Ok(rho.density().expectation(&max_entangled(d)))
}

/// Overlap with the `m×m` maximally entangled state on the first `m` basis
/// vectors of each side.
pub fn singlet_fraction_m(rho: &BipartiteState, m: usize) -> Result<f64> {
    let (da, db) = rho.dims();
    if m == 0 || m > da.min(db) {
        return Err(Error::OutOfRange {
            name: "m",
            value: m as f64,
            range: format!("[1, {}]", da.min(db)),
        });
    }
    Ok(rho.density().expectation(&max_entangled_embedded(da, db, m)))
}

/// Member of the `U⊗U*`-invariant family `p P_+ + (1−p) I/d²`.
///
/// The physical range of `p` is `[−1/(d²−1), 1]`; the convex mixtures used
/// for noisy singlets are `0 ≤ p ≤ 1`. Below zero the state is still positive
/// and reaches singlet fraction 0 at the lower end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisySinglet {
    d: usize,
    p: f64,
}

impl NoisySinglet {
    /// Convex noisy singlet, `p ∈ [0, 1]`.
    pub fn new(d: usize, p: f64) -> Result<Self> {
        check_dim(d)?;
        check_range("p", p, 0.0, 1.0)?;
        Ok(Self { d, p })
    }

    /// Any positive member of the invariant family.
    pub fn extended(d: usize, p: f64) -> Result<Self> {
        check_dim(d)?;
        check_range("p", p, Self::min_p(d), 1.0)?;
        Ok(Self { d, p })
    }

    /// The invariant-family member with singlet fraction `F ∈ [0, 1]`.
    pub fn with_fraction(d: usize, fraction: f64) -> Result<Self> {
        check_dim(d)?;
        check_range("F", fraction, 0.0, 1.0)?;
        let d2 = (d * d) as f64;
        let p = (fraction - 1.0 / d2) / (1.0 - 1.0 / d2);
        Ok(Self {
            d,
            p: p.clamp(Self::min_p(d), 1.0),
        })
    }

    pub fn min_p(d: usize) -> f64 {
        -1.0 / ((d * d) as f64 - 1.0)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `p + (1−p)/d²`.
    pub fn singlet_fraction(&self) -> f64 {
        self.p + (1.0 - self.p) / (self.d * self.d) as f64
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let d = self.d;
        let d2 = d * d;
        let psi = max_entangled(d);
        qmath::projector(&psi) * r(self.p) + identity(d2) * r((1.0 - self.p) / d2 as f64)
    }

    pub fn state(&self) -> BipartiteState {
        BipartiteState::new(self.d, self.d, self.matrix()).expect("invariant family member is a state")
    }

    /// Separable iff `p ≤ 1/(d+1)`.
    pub fn is_separable(&self) -> bool {
        self.p <= 1.0 / (self.d as f64 + 1.0)
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            range: "[2, ∞)".into(),
        });
    }
    Ok(())
}

const RANGE_SLACK: f64 = 1e-12;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(value >= lo - RANGE_SLACK && value <= hi + RANGE_SLACK) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: format!("[{lo}, {hi}]"),
        });
    }
    Ok(())
}

/// `ρ_p = p P_+ + (1−p) I/d²` with `p ∈ [0, 1]`.
pub fn noisy_singlet(d: usize, p: f64) -> Result<BipartiteState> {
    Ok(NoisySinglet::new(d, p)?.state())
}

/// Noisy singlet whose singlet fraction is `F ∈ [1/d², 1]`.
pub fn noisy_singlet_from_fraction(d: usize, fraction: f64) -> Result<NoisySinglet> {
    check_dim(d)?;
    check_range("F", fraction, 1.0 / (d * d) as f64, 1.0)?;
    let ns = NoisySinglet::with_fraction(d, fraction)?;
    NoisySinglet::new(d, ns.p.clamp(0.0, 1.0))
}

/// `f = (F d + 1)/(d + 1)`.
pub fn fidelity_from_fraction(d: usize, fraction: f64) -> Result<f64> {
    check_dim(d)?;
    check_range("F", fraction, 0.0, 1.0)?;
    let d = d as f64;
    Ok((fraction * d + 1.0) / (d + 1.0))
}

/// `F = (f (d + 1) − 1)/d`, for `f ∈ [1/d, 1]`.
pub fn fraction_from_fidelity(d: usize, fidelity: f64) -> Result<f64> {
    check_dim(d)?;
    let df = d as f64;
    check_range("f", fidelity, 1.0 / df, 1.0)?;
    Ok((fidelity * (df + 1.0) - 1.0) / df)
}

/// True iff the partial transpose has no eigenvalue below `−tol`.
pub fn is_ppt(rho: &BipartiteState, tol: f64) -> bool {
    let pt = partial_transpose(rho.matrix(), rho.dims()).expect("dimensions validated at construction");
    min_eigenvalue(&pt) >= -tol
}

/// Closed-form separability of the noisy singlet: `p ≤ 1/(d+1)`.
pub fn noisy_singlet_separable(d: usize, p: f64) -> Result<bool> {
    Ok(NoisySinglet::new(d, p)?.is_separable())
}

/// Random full-rank mixed state `G G†/Tr(G G†)` with Ginibre `G`.
pub fn random_density_matrix(d_a: usize, d_b: usize, rng: &mut QRng) -> BipartiteState {
    random_density_matrix_rank(d_a, d_b, d_a * d_b, rng)
}

/// Random mixed state of rank at most `rank`.
pub fn random_density_matrix_rank(d_a: usize, d_b: usize, rank: usize, rng: &mut QRng) -> BipartiteState {
    let n = d_a * d_b;
    let g = qmath::complex_gaussian_matrix(n, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    BipartiteState::new(d_a, d_b, m / r(tr)).expect("Ginibre construction yields a state")
}

/// Convex mixture of [`SEPARABLE_MIXTURE_SIZE`] Haar-random product pure
/// states with flat-Dirichlet weights.
pub fn random_separable_state(d_a: usize, d_b: usize, rng: &mut QRng) -> BipartiteState {
    let n = d_a * d_b;
    let weights: Vec<f64> = (0..SEPARABLE_MIXTURE_SIZE).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(n, n);
    for w in weights {
        let v = tensor_vec(&haar_state(d_a, rng), &haar_state(d_b, rng));
        m += qmath::projector(&v) * r(w / total);
    }
    BipartiteState::new(d_a, d_b, m).expect("mixture of product states is a state")
}

/// A random state pulled toward `I/(d_A d_B)` just far enough to be PPT.
///
/// Starts from a random mixed state and shrinks the mixing weight by 5% per
/// step until [`is_ppt`] holds.
pub fn random_ppt_state(d_a: usize, d_b: usize, rng: &mut QRng) -> BipartiteState {
    let start = random_density_matrix_rank(d_a, d_b, 1 + (rng_index(rng) % (d_a * d_b)), rng);
    let n = d_a * d_b;
    let mixed = identity(n) * r(1.0 / n as f64);
    let mut t = 1.0;
    loop {
        let m = start.matrix() * r(t) + &mixed * r(1.0 - t);
        let candidate = BipartiteState::new(d_a, d_b, m).expect("convex combination of states");
        if is_ppt(&candidate, 0.0) {
            return candidate;
        }
        t *= 0.95;
    }
}

fn rng_index(rng: &mut QRng) -> usize {
    use rand::Rng;
    rng.random_range(0..usize::MAX)
}

/// `|i⟩⊗|j⟩` in `C^{d_A}⊗C^{d_B}`.
pub fn product_basis(d_a: usize, d_b: usize, i: usize, j: usize) -> CVector {
    tensor_vec(&basis(d_a, i), &basis(d_b, j))
}

/// Eigen-decomposition helper: `(weight, vector)` pairs above `cutoff`,
/// heaviest first.
pub fn spectral_components(rho: &BipartiteState, cutoff: f64) -> Vec<(f64, CVector)> {
    let eig = eigh(rho.matrix());
    (0..eig.values.len())
        .rev()
        .filter(|&k| eig.values[k] > cutoff)
        .map(|k| (eig.values[k], eig.vector(k)))
        .collect()
}

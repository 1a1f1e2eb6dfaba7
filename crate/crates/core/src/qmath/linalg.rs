use nalgebra::DVector;

use super::{hermitian_part, r, CVector, ComplexMatrix};
use crate::{Error, Result};

/// A singular value counts towards the Schmidt rank iff it exceeds this
/// fraction of the largest one.
pub const SCHMIDT_RELATIVE_THRESHOLD: f64 = 1e-8;

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }
}

/// Eigendecomposition of the Hermitian part of `m`.
pub fn eigh(m: &ComplexMatrix) -> HermitianEigen {
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = m.nrows();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        vectors,
    }
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    eigh(m).values.first().copied().unwrap_or(0.0)
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

fn spectral_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let eig = eigh(m);
    let mapped = DVector::from_iterator(eig.values.len(), eig.values.iter().map(|&x| r(f(x))));
    &eig.vectors * ComplexMatrix::from_diagonal(&mapped) * eig.vectors.adjoint()
}

/// Square root of a PSD matrix; small negative eigenvalues are clipped.
pub fn psd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    spectral_map(m, |x| x.max(0.0).sqrt())
}

/// Inverse square root on the support: eigenvalues at or below `cutoff` map to zero.
pub fn psd_inv_sqrt(m: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    spectral_map(m, |x| if x > cutoff { 1.0 / x.sqrt() } else { 0.0 })
}

/// `Ψ = Σ aᵢ |fᵢ'⟩⊗|fᵢ''⟩` with `aᵢ` descending.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<CVector>,
    pub right_vectors: Vec<CVector>,
}

impl SchmidtDecomposition {
    /// Number of coefficients above `SCHMIDT_RELATIVE_THRESHOLD × a₀`.
    pub fn rank(&self) -> usize {
        let Some(&top) = self.coefficients.first() else {
            return 0;
        };
        self.coefficients
            .iter()
            .filter(|&&a| a > SCHMIDT_RELATIVE_THRESHOLD * top)
            .count()
    }

    pub fn reconstruct(&self) -> CVector {
        let da = self.left_vectors.first().map_or(0, |v| v.len());
        let db = self.right_vectors.first().map_or(0, |v| v.len());
        let mut out = CVector::zeros(da * db);
        for ((a, f), g) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            out += f.kronecker(g) * r(*a);
        }
        out
    }
}

/// Schmidt decomposition of `v ∈ C^{d_A}⊗C^{d_B}` via the SVD of its
/// `d_A × d_B` coefficient matrix.
pub fn schmidt(v: &CVector, (da, db): (usize, usize)) -> Result<SchmidtDecomposition> {
    if v.len() != da * db {
        return Err(Error::dims(format!("vector of length {}", da * db), v.len()));
    }
    if v.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let coeffs = ComplexMatrix::from_fn(da, db, |i, j| v[i * db + j]);
    let svd = coeffs.svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    // C = Σ s_k u_k v_k†, so the right Schmidt vector is row k of V†, transposed.
    Ok(SchmidtDecomposition {
        coefficients: order.iter().map(|&k| svd.singular_values[k]).collect(),
        left_vectors: order.iter().map(|&k| u.column(k).into_owned()).collect(),
        right_vectors: order.iter().map(|&k| v_t.row(k).transpose()).collect(),
    })
}

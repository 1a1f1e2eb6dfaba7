//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra` dense matrices over `Complex<f64>`. Bipartite
//! operators use the composite index `i·d_B + j` for `|i⟩⊗|j⟩`, which is the
//! index order produced by [`tensor`].

mod linalg;
mod random;

pub use linalg::{
    eigh, min_eigenvalue, operator_norm, psd_inv_sqrt, psd_sqrt, schmidt, HermitianEigen, SchmidtDecomposition,
    SCHMIDT_RELATIVE_THRESHOLD,
};
pub use random::{complex_gaussian_matrix, haar_state, haar_unitary, rng_from_seed, stream_rng, QRng};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Shorthand for `Complex64::new(re, im)`.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Computational basis vector `|i⟩` in `C^d`.
pub fn basis(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = r(1.0);
    v
}

/// `|v⟩⟨v|`, unnormalized.
pub fn projector(v: &CVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// Real diagonal matrix.
pub fn diag(entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&CVector::from_iterator(entries.len(), entries.iter().map(|&x| r(x))))
}

/// Which factor of a bipartite system to act on or keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product; row `i·rows(b) + k`, column `j·cols(b) + l` holds
/// `a[i,j]·b[k,l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `|u⟩⊗|v⟩`.
pub fn tensor_vec(u: &CVector, v: &CVector) -> CVector {
    u.kronecker(v)
}

fn check_bipartite(m: &ComplexMatrix, (da, db): (usize, usize)) -> Result<()> {
    let n = da * db;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::dims(
            format!("{n}x{n} for dims ({da}, {db})"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

/// Reduced operator on the `keep` factor of a `(d_A·d_B)`-square matrix.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, k| (0..db).map(|j| m[(i * db + j, k * db + j)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |j, l| (0..da).map(|i| m[(i * db + j, i * db + l)]).sum()),
    })
}

/// Transpose on the second factor only.
pub fn partial_transpose(m: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let n = da * db;
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row / db, row % db);
        let (k, l) = (col / db, col % db);
        m[(i * db + l, k * db + j)]
    }))
}

/// Largest absolute entry of `a − b`. Matrices of different shape compare as
/// infinitely far apart.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `(M + M†)/2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * r(0.5)
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

/// Trace norm distance `½‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = a - b;
    0.5 * eigh(&diff).values.iter().map(|x| x.abs()).sum::<f64>()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.trace()
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

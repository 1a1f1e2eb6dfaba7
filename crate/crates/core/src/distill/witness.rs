use rand::seq::index::sample;

use super::filter::LocalFilter;
use crate::qmath::{self, eigh, haar_unitary, max_abs_diff, r, schmidt, tensor, CVector, ComplexMatrix, QRng};
use crate::states::{spectral_components, BipartiteState};
use crate::{Error, Result};

/// Random subspace pairs tried by [`witness_search`] after the structured
/// candidates.
pub const DEFAULT_WITNESS_TRIALS: usize = 2_000;

const PROJECTOR_TOLERANCE: f64 = 1e-9;
const RANK_ONE_TOLERANCE: f64 = 1e-9;
const SPECTRAL_CUTOFF: f64 = 1e-12;

/// Product projection `P⊗Q` together with the filter that distills the
/// projected state to `P_+^m`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
    pub filter: LocalFilter,
}

fn check_projector(name: &'static str, p: &ComplexMatrix, dim: usize, m: usize) -> Result<()> {
    if p.nrows() != dim || p.ncols() != dim {
        return Err(Error::dims(
            format!("{dim}x{dim} projector"),
            format!("{}x{}", p.nrows(), p.ncols()),
        ));
    }
    if !qmath::is_hermitian(p, PROJECTOR_TOLERANCE) || max_abs_diff(&(p * p), p) > PROJECTOR_TOLERANCE {
        return Err(Error::invariant(
            "projector",
            format!("{name} is not an orthogonal projector"),
        ));
    }
    let rank = p.trace().re.round() as usize;
    if rank != m {
        return Err(Error::invariant(
            "projector",
            format!("{name} has rank {rank}, expected {m}"),
        ));
    }
    Ok(())
}

/// Checks whether `(P⊗Q)ρ(P⊗Q)` is a rank-one projector whose vector has
/// Schmidt rank `m`; if so returns a filter taking `ρ` to `P_+^m` exactly.
///
/// With `(P⊗Q)ρ(P⊗Q) = |ψ⟩⟨ψ|` and `ψ = Σ aᵢ |fᵢ'⟩|fᵢ''⟩`, the filter is
/// `A = Σ |i⟩⟨fᵢ'|` and `B = Σ (a_min/aᵢ) |i⟩⟨fᵢ''|`: `B` equals the
/// inverse-coefficient filter `V Q` followed by the local unitary that
/// rotates the Schmidt bases onto the first `m` computational vectors.
pub fn verify_distillation_witness(
    rho: &BipartiteState,
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    m: usize,
) -> Result<Option<LocalFilter>> {
    let (da, db) = rho.dims();
    if m == 0 || m > da.min(db) {
        return Err(Error::OutOfRange {
            name: "m",
            value: m as f64,
            range: format!("[1, {}]", da.min(db)),
        });
    }
    check_projector("P", p, da, m)?;
    check_projector("Q", q, db, m)?;

    let pq = tensor(p, q);
    let projected = &pq * rho.matrix() * &pq;
    let total = projected.trace().re;
    if total <= super::FILTER_PROBABILITY_CUTOFF {
        return Ok(None);
    }
    let eig = eigh(&projected);
    let top = *eig.values.last().expect("nonempty spectrum");
    if total - top > RANK_ONE_TOLERANCE * total {
        return Ok(None);
    }
    let psi: CVector = eig.vector(eig.values.len() - 1) * r(top.sqrt());
    let dec = schmidt(&psi, (da, db))?;
    if dec.rank() != m {
        return Ok(None);
    }
    let a_min = dec.coefficients[m - 1];
    let mut a_op = ComplexMatrix::zeros(da, da);
    let mut b_op = ComplexMatrix::zeros(db, db);
    for i in 0..m {
        a_op += qmath::basis(da, i) * dec.left_vectors[i].adjoint();
        b_op += qmath::basis(db, i) * dec.right_vectors[i].adjoint() * r(a_min / dec.coefficients[i]);
    }
    Ok(Some(LocalFilter::new(a_op, b_op)?))
}

fn span_projector(vectors: &[CVector]) -> ComplexMatrix {
    let dim = vectors[0].len();
    vectors
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, v| acc + qmath::projector(v))
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    if n < m {
        return vec![];
    }
    let mut with_last: Vec<Vec<usize>> = subsets(n - 1, m - 1)
        .into_iter()
        .map(|mut s| {
            s.push(n - 1);
            s
        })
        .collect();
    with_last.extend(subsets(n - 1, m));
    with_last
}

/// Structured candidates: Schmidt-vector spans of each spectral component of
/// `ρ`, then spans of computational basis vectors.
fn structured_candidates(rho: &BipartiteState, m: usize) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let (da, db) = rho.dims();
    let mut out = Vec::new();
    for (_, v) in spectral_components(rho, SPECTRAL_CUTOFF) {
        let Ok(dec) = schmidt(&v, (da, db)) else { continue };
        let rank = dec.rank();
        if rank < m {
            continue;
        }
        for subset in subsets(rank, m) {
            let left: Vec<CVector> = subset.iter().map(|&i| dec.left_vectors[i].clone()).collect();
            let right: Vec<CVector> = subset.iter().map(|&i| dec.right_vectors[i].clone()).collect();
            out.push((span_projector(&left), span_projector(&right)));
        }
    }
    let basis_spans = |dim: usize| -> Vec<ComplexMatrix> {
        subsets(dim, m)
            .into_iter()
            .map(|s| span_projector(&s.iter().map(|&i| qmath::basis(dim, i)).collect::<Vec<_>>()))
            .collect()
    };
    let (left, right) = (basis_spans(da), basis_spans(db));
    for p in &left {
        for q in &right {
            out.push((p.clone(), q.clone()));
        }
    }
    out
}

fn random_subspace(dim: usize, m: usize, rng: &mut QRng) -> ComplexMatrix {
    let u = haar_unitary(dim, rng);
    let cols: Vec<CVector> = (0..m).map(|k| u.column(k).into_owned()).collect();
    span_projector(&cols)
}

/// Heuristic search for an `m×m` distillation witness: structured
/// candidates first, then `trials` Haar-random subspace pairs, plus a few
/// random subsets of the computational basis.
pub fn witness_search(rho: &BipartiteState, m: usize, trials: usize, rng: &mut QRng) -> Result<Option<Witness>> {
    let (da, db) = rho.dims();
    if m == 0 || m > da.min(db) {
        return Err(Error::OutOfRange {
            name: "m",
            value: m as f64,
            range: format!("[1, {}]", da.min(db)),
        });
    }
    for (p, q) in structured_candidates(rho, m) {
        if let Some(filter) = verify_distillation_witness(rho, &p, &q, m)? {
            return Ok(Some(Witness { p, q, filter }));
        }
    }
    for trial in 0..trials {
        // every fourth trial keeps one side on a random coordinate subspace
        let (p, q) = if trial % 4 == 3 {
            let picks = sample(rng, da, m).into_vec();
            let p = span_projector(&picks.iter().map(|&i| qmath::basis(da, i)).collect::<Vec<_>>());
            (p, random_subspace(db, m, rng))
        } else {
            (random_subspace(da, m, rng), random_subspace(db, m, rng))
        };
        if let Some(filter) = verify_distillation_witness(rho, &p, &q, m)? {
            return Ok(Some(Witness { p, q, filter }));
        }
    }
    Ok(None)
}

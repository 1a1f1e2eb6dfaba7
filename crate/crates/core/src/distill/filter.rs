use serde::{Deserialize, Serialize};

use crate::qmath::{self, identity, operator_norm, r, tensor, ComplexMatrix};
use crate::states::{matrix_to_pairs, pairs_to_matrix, singlet_fraction, BipartiteState};
use crate::{Error, Result};

/// Outcomes with success probability at or below this are failures.
pub const FILTER_PROBABILITY_CUTOFF: f64 = 1e-14;

const CONTRACTION_TOLERANCE: f64 = 1e-9;

/// Success branch `A⊗B` of a two-outcome local operation. Both operators are
/// contractions, so `A†A ≼ I` and `B†B ≼ I` are valid measurement elements.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFilter {
    a: ComplexMatrix,
    b: ComplexMatrix,
}

impl LocalFilter {
    /// Checks that both operators are contractions.
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        for (name, op) in [("alice", &a), ("bob", &b)] {
            if !qmath::all_finite(op) {
                return Err(Error::invariant("finite-entries", format!("{name} operator")));
            }
            let norm = operator_norm(op);
            if norm > 1.0 + CONTRACTION_TOLERANCE {
                return Err(Error::invariant(
                    "contraction",
                    format!("{name} operator has norm {norm} > 1"),
                ));
            }
        }
        Ok(Self { a, b })
    }

    /// Rescales each operator to unit operator norm. The filtered state does
    /// not change; the success probability becomes the largest one
    /// compatible with a valid measurement.
    pub fn normalized(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        let na = operator_norm(&a);
        let nb = operator_norm(&b);
        if !(na > 0.0 && nb > 0.0) || !na.is_finite() || !nb.is_finite() {
            return Err(Error::invariant(
                "nonzero-filter",
                "filter operator is zero or not finite",
            ));
        }
        Self::new(a * r(1.0 / na), b * r(1.0 / nb))
    }

    pub fn identity(d_a: usize, d_b: usize) -> Self {
        Self {
            a: identity(d_a),
            b: identity(d_b),
        }
    }

    pub fn alice(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn bob(&self) -> &ComplexMatrix {
        &self.b
    }

    /// `A⊗B`.
    pub fn operator(&self) -> ComplexMatrix {
        tensor(&self.a, &self.b)
    }

    pub fn to_json(&self) -> FilterJson {
        FilterJson {
            a: MatrixJson::from(&self.a),
            b: MatrixJson::from(&self.b),
        }
    }

    pub fn from_json(raw: &FilterJson) -> Result<Self> {
        Self::new(raw.a.to_matrix()?, raw.b.to_matrix()?)
    }

    fn check_input(&self, rho: &BipartiteState) -> Result<()> {
        let (da, db) = rho.dims();
        if self.a.ncols() != da || self.b.ncols() != db {
            return Err(Error::dims(
                format!("filter acting on {da}x{db}"),
                format!("{}x{}", self.a.ncols(), self.b.ncols()),
            ));
        }
        Ok(())
    }
}

/// A matrix with explicit shape and row-major `[re, im]` entries.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: matrix_to_pairs(m),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        pairs_to_matrix(self.rows, self.cols, &self.entries)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FilterJson {
    pub a: MatrixJson,
    pub b: MatrixJson,
}

/// Successful filtering outcome.
#[derive(Debug, Clone)]
pub struct FilterResult {
    pub success_probability: f64,
    pub post_state: BipartiteState,
}

fn unnormalized(rho: &BipartiteState, filter: &LocalFilter) -> Result<ComplexMatrix> {
    filter.check_input(rho)?;
    let op = filter.operator();
    Ok(&op * rho.matrix() * op.adjoint())
}

/// `(A⊗B)ρ(A⊗B)†` normalized by its trace, which is the success
/// probability. A trace at or below [`FILTER_PROBABILITY_CUTOFF`] is
/// reported as [`Error::ZeroProbability`].
pub fn apply_filter(rho: &BipartiteState, filter: &LocalFilter) -> Result<FilterResult> {
    let theta = unnormalized(rho, filter)?;
    let probability = theta.trace().re;
    if probability <= FILTER_PROBABILITY_CUTOFF {
        return Err(Error::ZeroProbability { probability });
    }
    let post_state = BipartiteState::new(filter.a.nrows(), filter.b.nrows(), theta * r(1.0 / probability))?;
    Ok(FilterResult {
        success_probability: probability,
        post_state,
    })
}

/// `(singlet fraction after filtering, success probability)`.
pub fn filtered_fraction(rho: &BipartiteState, filter: &LocalFilter) -> Result<(f64, f64)> {
    let res = apply_filter(rho, filter)?;
    Ok((singlet_fraction(&res.post_state)?, res.success_probability))
}

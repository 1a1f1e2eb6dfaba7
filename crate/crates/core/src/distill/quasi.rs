use serde::Serialize;

use super::filter::{apply_filter, LocalFilter};
use crate::qmath::{diag, projector, r};
use crate::states::{check_range, max_entangled, product_basis, singlet_fraction, BipartiteState};
use crate::{Error, Result};

/// One step of a quasi-distillation sequence. `fraction` is `None` when the
/// filter's success probability is below the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiDistillReport {
    pub n: usize,
    pub fraction: Option<f64>,
    pub probability: f64,
}

/// `σ_F = F P_+ + (1−F)|01⟩⟨01|` on `C³⊗C³`.
pub fn make_sigma_f(fraction: f64) -> Result<BipartiteState> {
    check_open_unit("F", fraction)?;
    let m = projector(&max_entangled(3)) * r(fraction) + projector(&product_basis(3, 3, 0, 1)) * r(1.0 - fraction);
    BipartiteState::new(3, 3, m)
}

/// `ρ_F = F P_+ + (1−F)/3 (|01⟩⟨01| + |12⟩⟨12| + |20⟩⟨20|)` on `C³⊗C³`.
pub fn make_rho_f(fraction: f64) -> Result<BipartiteState> {
    check_open_unit("F", fraction)?;
    let noise = [(0, 1), (1, 2), (2, 0)]
        .into_iter()
        .fold(crate::qmath::ComplexMatrix::zeros(9, 9), |acc, (i, j)| {
            acc + projector(&product_basis(3, 3, i, j))
        });
    let m = projector(&max_entangled(3)) * r(fraction) + noise * r((1.0 - fraction) / 3.0);
    BipartiteState::new(3, 3, m)
}

fn check_open_unit(name: &'static str, x: f64) -> Result<()> {
    check_range(name, x, 0.0, 1.0)?;
    if x <= 0.0 || x >= 1.0 {
        return Err(Error::OutOfRange {
            name,
            value: x,
            range: "(0, 1)".into(),
        });
    }
    Ok(())
}

/// `A_n = diag(1/n, 1, 1)`, `B_n = diag(1, 1/n, 1/n)`.
///
/// On `σ_F` these give `(A_n⊗B_n)σ_F(A_n⊗B_n)† = (1/n²)[F P_+ + (1−F)/n² |01⟩⟨01|]`,
/// so the fraction after filtering is `F/(F + (1−F)/n²)` and the success
/// probability is `(F + (1−F)/n²)/n²`.
pub fn sigma_filter(n: usize) -> LocalFilter {
    let t = 1.0 / n.max(1) as f64;
    LocalFilter::new(diag(&[t, 1.0, 1.0]), diag(&[1.0, t, t])).expect("diagonal contractions")
}

/// `sigma_filter(1..=n_max)`.
pub fn sigma_filter_sequence(n_max: usize) -> Vec<LocalFilter> {
    (1..=n_max).map(sigma_filter).collect()
}

/// Applies the first `n_max` filters of `filters` in turn (each to the
/// original state) and reports fraction and probability for each index,
/// starting at `n = 1`.
pub fn quasi_distill_sequence(
    rho: &BipartiteState,
    filters: &[LocalFilter],
    n_max: usize,
) -> Result<Vec<QuasiDistillReport>> {
    if filters.len() < n_max {
        return Err(Error::dims(format!("at least {n_max} filters"), filters.len()));
    }
    filters[..n_max]
        .iter()
        .enumerate()
        .map(|(idx, filter)| match apply_filter(rho, filter) {
            Ok(res) => Ok(QuasiDistillReport {
                n: idx + 1,
                fraction: Some(singlet_fraction(&res.post_state)?),
                probability: res.success_probability,
            }),
            Err(Error::ZeroProbability { probability }) => Ok(QuasiDistillReport {
                n: idx + 1,
                fraction: None,
                probability,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// CSV with header `n,fraction,probability`; undefined fractions are empty.
pub fn quasi_distill_csv(reports: &[QuasiDistillReport]) -> String {
    let mut out = String::from("n,fraction,probability\n");
    for rep in reports {
        let fraction = rep.fraction.map(|f| f.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", rep.n, fraction, rep.probability));
    }
    out
}

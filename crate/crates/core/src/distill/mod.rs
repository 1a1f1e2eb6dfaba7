//! Single-round local filtering `ρ ↦ (A⊗B)ρ(A⊗B)†/p`, exact distillation
//! witnesses, quasi-distillation sequences and a seeded search for the best
//! reachable singlet fraction.

mod filter;
mod quasi;
mod threshold;
mod witness;

pub use filter::{
    apply_filter, filtered_fraction, FilterJson, FilterResult, LocalFilter, MatrixJson, FILTER_PROBABILITY_CUTOFF,
};
pub use quasi::{
    make_rho_f, make_sigma_f, quasi_distill_csv, quasi_distill_sequence, sigma_filter, sigma_filter_sequence,
    QuasiDistillReport,
};
pub use threshold::{threshold_experiment, FilterFamily, ThresholdConfig, ThresholdReport, TrialRecord};
pub use witness::{verify_distillation_witness, witness_search, Witness, DEFAULT_WITNESS_TRIALS};

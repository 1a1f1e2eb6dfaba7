//! Quantum channels, qudit teleportation and local-filter distillation.
//!
//! The crate is organised around the correspondence between channels and
//! bipartite states: a channel `Λ` on `C^d` is paired with its Choi state
//! `(I⊗Λ)P_+`, where `P_+` projects on `(1/√d) Σ|ii⟩`. On top of that it
//! provides
//!
//! - [`qmath`]: dense complex linear algebra, partial traces, Schmidt
//!   decomposition and Haar sampling.
//! - [`states`]: density matrices, the noisy-singlet family, singlet fraction
//!   and PPT checks.
//! - [`channels`]: Kraus channels, depolarizing channels, the Choi map in both
//!   directions, and exact / Monte-Carlo channel fidelity.
//! - [`twirl`]: `U⊗U*` twirling of states and channels.
//! - [`teleport`]: Weyl operators, the standard qudit teleportation channel and
//!   the fidelity relations `f = (F d + 1)/(d + 1)`.
//! - [`distill`]: local filters, exact distillation witnesses,
//!   quasi-distillation sequences and a seeded threshold search.
//! - [`experiments`]: reproducible experiment runners behind the `qtele` CLI.
//!
//! Composite indices follow a single convention everywhere: `|i⟩⊗|j⟩` on
//! `C^{d_A}⊗C^{d_B}` is basis vector `i·d_B + j`.
//!
//! ```
//! use qtele::{channels, states};
//!
//! let dep = channels::depolarizing(3, 0.5).unwrap();
//! let choi = channels::choi(&dep).unwrap();
//! let rho = states::noisy_singlet(3, 0.5).unwrap();
//! assert!(qtele::qmath::max_abs_diff(choi.matrix(), rho.matrix()) < 1e-12);
//! assert!((channels::channel_fidelity_exact(&dep).unwrap() - 2.0 / 3.0).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod channels;
pub mod distill;
mod error;
pub mod experiments;
pub mod qmath;
pub mod states;
pub mod teleport;
pub mod twirl;

pub use error::{Error, Result};
pub use qmath::{CVector, ComplexMatrix, QRng};

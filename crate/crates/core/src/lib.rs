//! Discrete time-frequency analysis on cyclic groups `Z_N` and on finite
//! products of cyclic groups.
//!
//! The crate provides the short-time Fourier transform `V_g f` on `Z_N`, the
//! order-`N` subgroups `H_{b,p}` of `Z_N x Z_N`, the virtual chirp operators
//! `C_{p,a}`, and the machinery that constructs, verifies and classifies the
//! pairs `(f, g)` whose transform has the minimal support size `N`.
//!
//! Module map:
//!
//! * [`group`]: residues, divisors, `H_a`, `H_{b,p}`, coset recognition.
//! * [`tf`]: signals, translations, modulations, DFT, STFT, chirps.
//! * [`extremal`]: the extremal family, its predicted supports, the
//!   classifier and the inversion of `V_f f`.
//! * [`uncertainty`]: numerical checks of the support bounds and the
//!   exhaustive falsification scan.
//! * [`abelian`]: the same transform on `Z_{n_1} x ... x Z_{n_r}`.
//! * [`ensemble`]: seeded Gaussian signal ensembles.
//! * [`io`]: JSON and CSV encodings shared with the command-line tool.

pub mod abelian;
pub mod ensemble;
pub mod error;
pub mod extremal;
pub mod group;
pub mod io;
mod phase;
pub mod tf;
pub mod uncertainty;

pub use num_complex::Complex64;

pub use error::{Result, TfaError};
pub use extremal::{ClassificationTrace, ExtremalSpec};
pub use group::{CyclicIndex, PhasePoint, SubgroupSpec, SupportSet};
pub use tf::{Signal, StftTable, DEFAULT_TAU};
pub use uncertainty::UncertaintyReport;

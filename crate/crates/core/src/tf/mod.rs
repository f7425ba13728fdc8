//! Signals on `Z_N` and the operators acting on them.
//!
//! Conventions: `T_j f(l) = f(l - j)`, `M_k f(l) = e^{2 pi i k l / N} f(l)`,
//! `pi(j, k) = M_k T_j`, and the unitary DFT
//! `f^(k) = N^{-1/2} sum_l e^{-2 pi i k l / N} f(l)`. The STFT is
//! `V_g f(j, k) = N^{-1/2} <f, pi(j, k) g>`, linear in `f` and conjugate
//! linear in `g`.

mod ops;
mod signal;
mod stft;

pub use ops::{
    chirp, chirp_exponent, dft, embed_subgroup, idft, metaplectic_conjugate, modulate,
    restrict_subgroup, tf_shift, translate,
};
pub use signal::{best_multiple, phase_aligned_residual, Signal};
pub use stft::{stft, stft_fast, support_of, StftTable};

/// Default relative threshold for numerical supports.
pub const DEFAULT_TAU: f64 = 1e-8;

/// Relative off-subgroup mass above which a chirp input is rejected.
pub const CHIRP_SUPPORT_TOLERANCE: f64 = 1e-12;

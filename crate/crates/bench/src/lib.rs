//! Shared inputs for the criterion benchmarks.

use tfa_core::ensemble::GaussianEnsemble;
use tfa_core::extremal::{make_extremal_pair, ExtremalSpec};
use tfa_core::{Complex64, PhasePoint, Signal};

/// A seeded unit Gaussian pair on `Z_n`.
pub fn random_pair(n: usize, seed: u64) -> (Signal, Signal) {
    let mut ens = GaussianEnsemble::new(seed);
    (ens.signal(n), ens.signal(n))
}

/// An extremal pair on `Z_n` built on `H_{b,p}` with nontrivial shifts.
pub fn extremal_pair(n: usize, b: usize, p: usize) -> (Signal, Signal) {
    let spec = ExtremalSpec::new(
        n,
        b,
        p,
        PhasePoint::new(n, 1, 2),
        PhasePoint::new(n, 3, 1),
        Complex64::new(0.5, -1.0),
        Complex64::new(0.0, 2.0),
    )
    .expect("valid extremal parameters");
    make_extremal_pair(&spec).expect("constructible")
}

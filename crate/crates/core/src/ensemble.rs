//! Seeded Gaussian ensembles.
//!
//! Draws come from PCG64 (`Lcg128Xsl64`) seeded with `seed_from_u64`, and
//! normal variates from the Box-Muller transform, so a seed pins every
//! sample bit for bit.

use num_complex::Complex64;
use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use crate::group::PhasePoint;
use crate::tf::Signal;

#[derive(Debug, Clone)]
pub struct GaussianEnsemble {
    rng: Pcg64,
}

impl GaussianEnsemble {
    pub fn new(seed: u64) -> Self {
        Self { rng: Pcg64::seed_from_u64(seed) }
    }

    /// Uniform on `(0, 1]` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Circularly symmetric complex normal with `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let (x, y) = self.normal_pair();
        Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Gaussian signal on `Z_n` with i.i.d. complex normal samples.
    pub fn raw_signal(&mut self, n: usize) -> Signal {
        Signal::from_fn(n, |_| self.complex_normal())
    }

    /// Unit-norm Gaussian signal on `Z_n`.
    pub fn signal(&mut self, n: usize) -> Signal {
        loop {
            let f = self.raw_signal(n);
            if let Ok(unit) = f.normalized() {
                return unit;
            }
        }
    }

    /// Uniform residue in `[0, n)`.
    pub fn index(&mut self, n: usize) -> usize {
        // Multiply-shift keeps the bias below 2^-64 * n.
        ((self.rng.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn phase_point(&mut self, n: usize) -> PhasePoint {
        let j = self.index(n) as i64;
        let k = self.index(n) as i64;
        PhasePoint::new(n, j, k)
    }

    /// Nonzero complex scalar with modulus bounded away from zero.
    pub fn nonzero_scalar(&mut self) -> Complex64 {
        loop {
            let z = self.complex_normal();
            if z.norm() > 0.1 {
                return z;
            }
        }
    }
}

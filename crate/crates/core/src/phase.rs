//! Exact roots of unity.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `exp(2 pi i num / den)`, with `num` reduced modulo `den` before the angle
/// is formed. Quarter turns come out exact.
pub(crate) fn root_of_unity(num: i128, den: u64) -> Complex64 {
    debug_assert!(den > 0);
    let den_i = den as i128;
    let r = num.rem_euclid(den_i);
    if (4 * r) % den_i == 0 {
        return match (4 * r) / den_i {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * PI * (r as f64) / (den as f64);
    Complex64::new(angle.cos(), angle.sin())
}

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::signal::Signal;
use super::CHIRP_SUPPORT_TOLERANCE;
use crate::error::{Result, TfaError};
use crate::group::{check_divisor, CyclicIndex, PhasePoint};
use crate::phase::root_of_unity;

fn check_modulus(f: &Signal, n: usize) -> Result<()> {
    if f.n() != n {
        return Err(TfaError::ModulusMismatch { expected: f.n(), found: n });
    }
    Ok(())
}

/// `T_j f(l) = f(l - j)`.
pub fn translate(f: &Signal, j: CyclicIndex) -> Result<Signal> {
    let n = f.n();
    check_modulus(f, j.modulus())?;
    let j = j.value();
    Ok(Signal::from_fn(n, |l| f.values()[(l + n - j) % n]))
}

/// `M_k f(l) = e^{2 pi i k l / N} f(l)`.
pub fn modulate(f: &Signal, k: CyclicIndex) -> Result<Signal> {
    let n = f.n();
    check_modulus(f, k.modulus())?;
    let k = k.value() as i128;
    Ok(Signal::from_fn(n, |l| root_of_unity(k * l as i128, n as u64) * f.values()[l]))
}

/// `pi(j, k) f = M_k T_j f`.
pub fn tf_shift(f: &Signal, lambda: PhasePoint) -> Result<Signal> {
    modulate(&translate(f, lambda.time())?, lambda.frequency())
}

fn fft_scaled(f: &Signal, direction: FftDirection) -> Signal {
    let n = f.n();
    let mut buf = f.values().to_vec();
    FftPlanner::new().plan_fft(n, direction).process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for z in &mut buf {
        *z *= scale;
    }
    Signal::new(buf).expect("length preserved")
}

/// Unitary DFT, `f^(k) = N^{-1/2} sum_l e^{-2 pi i k l / N} f(l)`.
pub fn dft(f: &Signal) -> Signal {
    fft_scaled(f, FftDirection::Forward)
}

/// Inverse of [`dft`].
pub fn idft(f: &Signal) -> Signal {
    fft_scaled(f, FftDirection::Inverse)
}

/// Integer numerator `r` of the chirp phase `e^{pi i r / b}` at a
/// representative `ell` of a point of `H_a`.
///
/// `ell` need not be reduced modulo `N`; it must be a multiple of `a`. The
/// value is `p m^2 (1 + b)` with `m = ell / a`. Representatives of the same
/// residue give numerators that differ by a multiple of `2b`.
pub fn chirp_exponent(p: i64, a: usize, n: usize, ell: i64) -> Result<i128> {
    check_divisor(a, n)?;
    if ell.rem_euclid(a as i64) != 0 {
        return Err(TfaError::OutOfRange(format!("{ell} is not a multiple of {a}")));
    }
    let b = (n / a) as i128;
    let m = (ell / a as i64) as i128;
    Ok(p as i128 * m * m * (1 + b))
}

fn chirp_factor(p: i64, m: usize, b: usize) -> Complex64 {
    let two_b = 2 * b as i128;
    let m = m as i128;
    let r = (p as i128).rem_euclid(two_b) * (m * m % two_b) % two_b * ((1 + b as i128) % two_b);
    root_of_unity(r, two_b as u64)
}

/// The virtual chirp `C_{p,a}`.
///
/// For `l = m a` in `H_a` the output is `e^{pi i p m^2 (1 + b) / b} f(l)`,
/// with `b = N / a`; it vanishes off `H_a`. Inputs carrying relative mass
/// above `1e-12` outside `H_a` are rejected. For `a = 1` this is the true
/// chirp `e^{pi i p l^2 (1 + N) / N}` on all of `Z_N`.
pub fn chirp(p: i64, a: usize, f: &Signal) -> Result<Signal> {
    let n = f.n();
    check_divisor(a, n)?;
    let off: f64 = (0..n).filter(|l| l % a != 0).map(|l| f.values()[l].norm_sqr()).sum();
    if off.sqrt() > CHIRP_SUPPORT_TOLERANCE * f.norm() {
        return Err(TfaError::OffSubgroupMass { a, mass: off.sqrt() });
    }
    let b = n / a;
    Ok(Signal::from_fn(n, |l| {
        if l % a == 0 {
            chirp_factor(p, l / a, b) * f.values()[l]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `U_a^{-1}`: places `f_b` on `Z_b` onto `H_a` inside `Z_{ab}`.
pub fn embed_subgroup(f_b: &Signal, a: usize) -> Result<Signal> {
    if a == 0 {
        return Err(TfaError::ZeroModulus);
    }
    let n = f_b.n() * a;
    Ok(Signal::from_fn(n, |l| {
        if l % a == 0 {
            f_b.values()[l / a]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `U_a f(m) = f(m a)`, the restriction of `f` to `H_a` read as a signal on
/// `Z_{N/a}`.
pub fn restrict_subgroup(f: &Signal, a: usize) -> Result<Signal> {
    let n = f.n();
    check_divisor(a, n)?;
    Ok(Signal::from_fn(n / a, |m| f.values()[m * a]))
}

/// `U_a C_{p,a} U_a^{-1}` acting on `Z_b`, `b = n / a`: multiplication by
/// `e^{pi i p m^2 (1 + b) / b}`.
pub fn metaplectic_conjugate(p: i64, a: usize, n: usize, f_b: &Signal) -> Result<Signal> {
    check_divisor(a, n)?;
    let b = n / a;
    check_modulus(f_b, b)?;
    Ok(Signal::from_fn(b, |m| chirp_factor(p, m, b) * f_b.values()[m]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sig(vals: &[Complex64]) -> Signal {
        Signal::new(vals.to_vec()).unwrap()
    }

    fn idx(v: i64, n: usize) -> CyclicIndex {
        CyclicIndex::new(v, n)
    }

    fn sample(n: usize) -> Signal {
        Signal::from_fn(n, |l| c((l as f64 * 0.7).sin() + 0.1, (l as f64 * 1.3).cos()))
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translate(&Signal::delta(4, 0), idx(1, 4)).unwrap(), Signal::delta(4, 1));
        let f = sample(5);
        assert_eq!(translate(&f, idx(0, 5)).unwrap(), f);
        let back = translate(&translate(&f, idx(2, 5)).unwrap(), idx(3, 5)).unwrap();
        assert_eq!(back, f);
        assert!(translate(&f, idx(1, 4)).is_err());
    }

    #[test]
    fn modulation_examples() {
        let f = sample(6);
        assert_eq!(modulate(&f, idx(0, 6)).unwrap(), f);
        for k in 0..6 {
            assert_eq!(modulate(&Signal::delta(6, 0), idx(k, 6)).unwrap(), Signal::delta(6, 0));
        }
        assert_eq!(modulate(&Signal::ones(2), idx(1, 2)).unwrap(), sig(&[c(1.0, 0.0), c(-1.0, 0.0)]));
    }

    #[test]
    fn tf_shift_of_delta() {
        let n = 6;
        for j in 0..n {
            for k in 0..n {
                let out = tf_shift(&Signal::delta(n, 0), PhasePoint::new(n, j as i64, k as i64)).unwrap();
                let expect = root_of_unity((k * j) as i128, n as u64);
                for l in 0..n {
                    let want = if l == j { expect } else { c(0.0, 0.0) };
                    assert!((out.values()[l] - want).norm() < 1e-15);
                }
            }
        }
        let f = sample(4);
        assert_eq!(tf_shift(&f, PhasePoint::origin(4)).unwrap(), f);
    }

    #[test]
    fn dft_examples() {
        let n = 8;
        let flat = dft(&Signal::delta(n, 0));
        for z in flat.values() {
            assert!((z - c(1.0 / (n as f64).sqrt(), 0.0)).norm() < 1e-15);
        }
        let spike = dft(&Signal::ones(n));
        assert!(spike.max_abs_diff(&Signal::delta(n, 0).scale(c((n as f64).sqrt(), 0.0))).unwrap() < 1e-14);
        let h2 = dft(&Signal::subgroup_indicator(4, 2).unwrap());
        assert!(h2.max_abs_diff(&Signal::from_real(&[1.0, 0.0, 1.0, 0.0]).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn dft_is_order_four() {
        let f = sample(7);
        let four = dft(&dft(&dft(&dft(&f))));
        assert!(four.max_abs_diff(&f).unwrap() < 1e-14);
        assert!(idft(&dft(&f)).max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn chirp_examples() {
        let f = Signal::subgroup_indicator(4, 2).unwrap();
        assert_eq!(chirp(0, 2, &f).unwrap(), f);
        let out = chirp(1, 2, &f).unwrap();
        assert_eq!(out, sig(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]));

        let n = 7;
        let g = sample(n);
        let out = chirp(1, 1, &g).unwrap();
        for l in 0..n {
            let angle = std::f64::consts::PI * (l * l * (1 + n)) as f64 / n as f64;
            let want = g.values()[l] * c(angle.cos(), angle.sin());
            assert!((out.values()[l] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn chirp_rejects_off_subgroup_mass() {
        let f = Signal::ones(4);
        assert!(matches!(chirp(1, 2, &f), Err(TfaError::OffSubgroupMass { a: 2, .. })));
        assert!(matches!(chirp(1, 3, &f), Err(TfaError::NotADivisor { d: 3, n: 4 })));
        assert!(chirp(1, 2, &Signal::zeros(4)).unwrap().is_zero());
    }

    #[test]
    fn chirp_exponent_is_well_defined() {
        for n in 1..=24usize {
            for a in crate::group::divisors(n).unwrap() {
                let b = (n / a) as i128;
                for p in -3..8i64 {
                    for m in 0..(n / a) as i64 {
                        let ell = m * a as i64;
                        let r = chirp_exponent(p, a, n, ell).unwrap();
                        for shift in [-2i64, -1, 1, 3] {
                            let r2 = chirp_exponent(p, a, n, ell + shift * n as i64).unwrap();
                            assert_eq!((r2 - r).rem_euclid(2 * b), 0, "n={n} a={a} p={p} l={ell}");
                        }
                        // Same phase as the raw quadratic form (pi i / N)(p l^2 / a)(1 + N / a).
                        let (nn, aa, ll) = (n as i128, a as i128, ell as i128);
                        let lhs = p as i128 * ll * ll * (aa + nn) * b;
                        let rhs = r * nn * aa * aa;
                        assert_eq!((lhs - rhs).rem_euclid(2 * nn * aa * aa * b), 0);
                    }
                }
            }
        }
        assert!(chirp_exponent(1, 2, 4, 1).is_err());
    }

    #[test]
    fn metaplectic_examples() {
        let f_b = Signal::ones(2);
        assert_eq!(metaplectic_conjugate(0, 2, 4, &f_b).unwrap(), f_b);
        assert_eq!(
            metaplectic_conjugate(1, 2, 4, &f_b).unwrap(),
            sig(&[c(1.0, 0.0), c(0.0, -1.0)])
        );
        assert!(metaplectic_conjugate(1, 2, 4, &Signal::ones(3)).is_err());
    }

    #[test]
    fn embedding_round_trip() {
        let f_b = sample(3);
        let up = embed_subgroup(&f_b, 4).unwrap();
        assert_eq!(up.n(), 12);
        assert!(up.support(1e-12).iter().all(|l| l % 4 == 0));
        assert_eq!(restrict_subgroup(&up, 4).unwrap(), f_b);
    }
}

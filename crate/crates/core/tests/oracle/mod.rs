//! Straight-from-the-definition reference implementations used by the
//! integration tests. Nothing here calls into `tfa_core` algorithms.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;

use tfa_core::Complex64;

pub type Table = Vec<Vec<Complex64>>;

fn e(num: i128, den: i128) -> Complex64 {
    let r = num.rem_euclid(den) as f64 / den as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// `V_g f(j, k) = N^{-1/2} sum_l e^{-2 pi i k l / N} f(l) conj(g(l - j))`.
pub fn stft(f: &[Complex64], g: &[Complex64]) -> Table {
    let n = f.len();
    let s = (n as f64).sqrt();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|l| e(-((k * l) as i128), n as i128) * f[l] * g[(l + n - j) % n].conj())
                        .sum::<Complex64>()
                        / s
                })
                .collect()
        })
        .collect()
}

pub fn dft(f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    let s = (n as f64).sqrt();
    (0..n)
        .map(|k| (0..n).map(|l| e(-((k * l) as i128), n as i128) * f[l]).sum::<Complex64>() / s)
        .collect()
}

/// `M_k T_j f`.
pub fn shift(f: &[Complex64], j: usize, k: usize) -> Vec<Complex64> {
    let n = f.len();
    (0..n).map(|l| e((k * l) as i128, n as i128) * f[(l + n - j % n) % n]).collect()
}

/// Multiplies `f` on `H_a` by `e^{pi i p m^2 (1 + b) / b}` at `l = m a`.
pub fn chirp(p: i64, a: usize, f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    let b = (n / a) as i128;
    (0..n)
        .map(|l| {
            if l % a != 0 {
                return Complex64::new(0.0, 0.0);
            }
            let m = (l / a) as i128;
            e(p as i128 * m * m * (1 + b), 2 * b) * f[l]
        })
        .collect()
}

pub fn support(t: &Table, tau: f64) -> BTreeSet<(usize, usize)> {
    let max = t.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut out = BTreeSet::new();
    for (j, row) in t.iter().enumerate() {
        for (k, z) in row.iter().enumerate() {
            if z.norm() > tau * max {
                out.insert((j, k));
            }
        }
    }
    out
}

pub fn vec_support(f: &[Complex64], tau: f64) -> usize {
    let max = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    f.iter().filter(|z| z.norm() > tau * max).count()
}

/// `{(m a, n b + m p)}` with `a = N / b`.
pub fn hbp(n: usize, b: usize, p: usize) -> BTreeSet<(usize, usize)> {
    let a = n / b;
    let mut out = BTreeSet::new();
    for m in 0..b {
        for q in 0..a {
            out.insert(((m * a) % n, (q * b + m * p) % n));
        }
    }
    out
}

pub fn indicator_ha(n: usize, a: usize) -> Vec<Complex64> {
    (0..n).map(|l| Complex64::new(if l % a == 0 { 1.0 } else { 0.0 }, 0.0)).collect()
}

pub fn norm(f: &[Complex64]) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

pub fn table_diff(x: &Table, y: &Table) -> f64 {
    x.iter().zip(y).map(|(a, b)| max_diff(a, b)).fold(0.0, f64::max)
}

/// All subgroups of `Z_n x Z_n` of order `n`, found by closing every pair of
/// generators.
pub fn brute_force_subgroups(n: usize) -> BTreeSet<BTreeSet<(usize, usize)>> {
    let mut found = BTreeSet::new();
    let elems: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).collect();
    for &x in &elems {
        for &y in &elems {
            if y < x {
                continue;
            }
            let mut h = BTreeSet::new();
            for s in 0..n {
                for t in 0..n {
                    h.insert(((s * x.0 + t * y.0) % n, (s * x.1 + t * y.1) % n));
                }
            }
            if h.len() == n {
                found.insert(h);
            }
        }
    }
    found
}

pub fn sigma(n: usize) -> usize {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

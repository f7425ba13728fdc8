use std::io::{self, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::signal::Signal;
use crate::error::{Result, TfaError};
use crate::group::{PhasePoint, SupportSet};
use crate::phase::root_of_unity;

/// The `N x N` table `V_g f(j, k)`, row-major in `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StftTable {
    n: usize,
    entries: Vec<Complex64>,
}

impl StftTable {
    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(TfaError::ZeroModulus);
        }
        if entries.len() != n * n {
            return Err(TfaError::Format(format!(
                "expected {} entries for n = {n}, found {}",
                n * n,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j % self.n) * self.n + k % self.n]
    }

    pub fn at(&self, pt: PhasePoint) -> Complex64 {
        self.get(pt.j(), pt.k())
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.entries[j * self.n..(j + 1) * self.n]
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &StftTable) -> Result<f64> {
        if self.n != other.n {
            return Err(TfaError::ModulusMismatch { expected: self.n, found: other.n });
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }

    pub fn support(&self, tau: f64) -> SupportSet {
        support_of(self, tau)
    }

    /// CSV with header `j,k,re,im`, rows in `(j, k)` order, floats with 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "j,k,re,im")?;
        for j in 0..self.n {
            for k in 0..self.n {
                let z = self.get(j, k);
                writeln!(out, "{j},{k},{},{}", crate::io::fmt_f64(z.re), crate::io::fmt_f64(z.im))?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "j,k,re,im" => {}
            other => return Err(TfaError::Format(format!("bad CSV header {other:?}"))),
        }
        let mut rows = Vec::new();
        for line in lines {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 4 {
                return Err(TfaError::Format(format!("bad CSV row {line:?}")));
            }
            let bad = |_| TfaError::Format(format!("bad CSV row {line:?}"));
            let j: usize = cols[0].parse().map_err(|_| TfaError::Format(line.to_string()))?;
            let k: usize = cols[1].parse().map_err(|_| TfaError::Format(line.to_string()))?;
            let re: f64 = cols[2].parse().map_err(bad)?;
            let im: f64 = cols[3].parse().map_err(bad)?;
            rows.push((j, k, Complex64::new(re, im)));
        }
        let n = (rows.len() as f64).sqrt().round() as usize;
        if n == 0 || n * n != rows.len() {
            return Err(TfaError::Format(format!("{} rows is not a square table", rows.len())));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        let mut seen = vec![false; n * n];
        for (j, k, z) in rows {
            if j >= n || k >= n || seen[j * n + k] {
                return Err(TfaError::Format(format!("row ({j},{k}) out of range or repeated")));
            }
            seen[j * n + k] = true;
            entries[j * n + k] = z;
        }
        Self::from_entries(n, entries)
    }
}

/// Reference STFT by direct summation:
/// `V_g f(j, k) = N^{-1/2} sum_l e^{-2 pi i k l / N} f(l) conj(g(l - j))`.
pub fn stft(f: &Signal, g: &Signal) -> Result<StftTable> {
    f.check_same(g)?;
    let n = f.n();
    let twiddle: Vec<Complex64> = (0..n).map(|r| root_of_unity(-(r as i128), n as u64)).collect();
    let scale = 1.0 / (n as f64).sqrt();
    let (fv, gv) = (f.values(), g.values());
    let mut entries = Vec::with_capacity(n * n);
    let mut prod = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for (l, slot) in prod.iter_mut().enumerate() {
            *slot = fv[l] * gv[(l + n - j) % n].conj();
        }
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, h) in prod.iter().enumerate() {
                acc += twiddle[(k * l) % n] * h;
            }
            entries.push(acc * scale);
        }
    }
    Ok(StftTable { n, entries })
}

/// STFT computed row by row with an FFT: `V_g f(j, .)` is the unitary DFT of
/// `f conj(T_j g)`.
pub fn stft_fast(f: &Signal, g: &Signal) -> Result<StftTable> {
    f.check_same(g)?;
    let n = f.n();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let scale = 1.0 / (n as f64).sqrt();
    let (fv, gv) = (f.values(), g.values());
    let mut entries = Vec::with_capacity(n * n);
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for (l, slot) in row.iter_mut().enumerate() {
            *slot = fv[l] * gv[(l + n - j) % n].conj();
        }
        fft.process(&mut row);
        entries.extend(row.iter().map(|z| z * scale));
    }
    Ok(StftTable { n, entries })
}

/// `{(j, k) : |V(j, k)| > tau * max |V|}`; empty for the zero table.
pub fn support_of(t: &StftTable, tau: f64) -> SupportSet {
    let max = t.max_abs();
    if max == 0.0 {
        return SupportSet::empty(t.n);
    }
    let n = t.n;
    let pts = (0..n * n)
        .filter(|&i| t.entries[i].norm() > tau * max)
        .map(|i| PhasePoint::new(n, (i / n) as i64, (i % n) as i64));
    SupportSet::from_points(n, pts).expect("points built with the table modulus")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_pair() {
        let d = Signal::delta(4, 0);
        let t = stft(&d, &d).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                let want = if j == 0 { c(0.5, 0.0) } else { c(0.0, 0.0) };
                assert!((t.get(j, k) - want).norm() < 1e-15);
            }
        }
        let s = support_of(&t, 1e-8);
        assert_eq!(s, SupportSet::from_pairs(4, (0..4).map(|k| (0, k))));
    }

    #[test]
    fn zero_signal_gives_empty_support() {
        let t = stft(&Signal::zeros(5), &Signal::ones(5)).unwrap();
        assert_eq!(t.max_abs(), 0.0);
        assert!(support_of(&t, 1e-8).is_empty());
    }

    #[test]
    fn subgroup_indicator_pair() {
        let h = Signal::subgroup_indicator(4, 2).unwrap().scale(c(1.0 / 2f64.sqrt(), 0.0));
        let t = stft(&h, &h).unwrap();
        let expect = SupportSet::from_pairs(4, [(0, 0), (0, 2), (2, 0), (2, 2)]);
        for j in 0..4 {
            for k in 0..4 {
                let on = expect.contains(&PhasePoint::new(4, j, k));
                let want = if on { 0.5 } else { 0.0 };
                assert!((t.get(j as usize, k as usize) - c(want, 0.0)).norm() < 1e-15);
            }
        }
        assert_eq!(support_of(&t, 1e-8), expect);
    }

    #[test]
    fn fast_path_matches_reference() {
        for n in [1usize, 2, 3, 7, 12, 16] {
            let f = Signal::from_fn(n, |l| c((l as f64).sin(), 0.3 * l as f64));
            let g = Signal::from_fn(n, |l| c(1.0 / (1.0 + l as f64), (2.0 * l as f64).cos()));
            let d = stft(&f, &g).unwrap().max_abs_diff(&stft_fast(&f, &g).unwrap()).unwrap();
            assert!(d < 1e-12, "n={n} diff={d}");
        }
    }

    #[test]
    fn modulus_mismatch() {
        assert!(matches!(
            stft(&Signal::ones(3), &Signal::ones(4)),
            Err(TfaError::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn csv_round_trip_and_format() {
        let f = Signal::from_fn(3, |l| c(l as f64 + 0.1, -(l as f64)));
        let t = stft(&f, &Signal::delta(3, 1)).unwrap();
        let text = t.to_csv_string();
        assert!(text.starts_with("j,k,re,im\n0,0,"));
        assert_eq!(text.lines().count(), 10);
        assert_eq!(StftTable::from_csv(&text).unwrap(), t);
        assert!(StftTable::from_csv("x\n").is_err());
    }
}

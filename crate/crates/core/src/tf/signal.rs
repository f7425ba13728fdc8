use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, TfaError};

/// A complex function on `Z_N`, stored as its `N` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(TfaError::ZeroModulus);
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        assert!(n > 0, "modulus must be positive");
        Self { values: (0..n).map(f).collect() }
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_| Complex64::new(0.0, 0.0))
    }

    /// Point mass at `j mod n`.
    pub fn delta(n: usize, j: usize) -> Self {
        let j = j % n;
        Self::from_fn(n, |l| if l == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_| Complex64::new(1.0, 0.0))
    }

    /// Characteristic function of `{l : pred(l)}`.
    pub fn indicator(n: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        Self::from_fn(n, |l| Complex64::new(if pred(l) { 1.0 } else { 0.0 }, 0.0))
    }

    /// Characteristic function of the subgroup `H_a` of `Z_n`.
    pub fn subgroup_indicator(n: usize, a: usize) -> Result<Self> {
        crate::group::check_divisor(a, n)?;
        Ok(Self::indicator(n, |l| l % a == 0))
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, l: usize) -> Complex64 {
        self.values[l % self.n()]
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `<self, other> = sum_l self(l) conj(other(l))`.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(x, y)| x * y.conj()).sum())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { values: self.values.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &Signal) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(x, y)| x + y).collect() })
    }

    pub fn sub(&self, other: &Signal) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(x, y)| x - y).collect() })
    }

    pub fn conj(&self) -> Self {
        Self { values: self.values.iter().map(|z| z.conj()).collect() }
    }

    /// Unit-norm copy; fails on the zero signal.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(TfaError::ZeroSignal);
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }

    /// Indices `l` with `|f(l)| > tau * max |f|`.
    pub fn support(&self, tau: f64) -> Vec<usize> {
        let max = self.max_abs();
        if max == 0.0 {
            return Vec::new();
        }
        (0..self.n()).filter(|&l| self.values[l].norm() > tau * max).collect()
    }

    pub(crate) fn check_same(&self, other: &Signal) -> Result<()> {
        if self.n() != other.n() {
            return Err(TfaError::ModulusMismatch { expected: self.n(), found: other.n() });
        }
        Ok(())
    }
}

/// Least-squares coefficient `c` with `target ~ c * model`, and the relative
/// residual `||target - c model|| / ||target||`.
pub fn best_multiple(target: &Signal, model: &Signal) -> Result<(Complex64, f64)> {
    let model_sq = model.norm_sq();
    let target_norm = target.norm();
    if model_sq == 0.0 || target_norm == 0.0 {
        return Err(TfaError::ZeroSignal);
    }
    let c = target.inner(model)? / model_sq;
    let residual = target.sub(&model.scale(c))?.norm() / target_norm;
    Ok((c, residual))
}

/// `min_{|c| = 1} ||target - c model|| / ||target||`, attained at the phase of
/// `<target, model>`.
pub fn phase_aligned_residual(target: &Signal, model: &Signal) -> Result<f64> {
    let target_norm = target.norm();
    if target_norm == 0.0 {
        return Err(TfaError::ZeroSignal);
    }
    let ip = target.inner(model)?;
    let c = if ip.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { ip / ip.norm() };
    Ok(target.sub(&model.scale(c))?.norm() / target_norm)
}

#[derive(Serialize, Deserialize)]
struct SignalRepr {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for Signal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SignalRepr {
            n: self.n(),
            re: self.values.iter().map(|z| z.re).collect(),
            im: self.values.iter().map(|z| z.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Signal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SignalRepr::deserialize(deserializer)?;
        if repr.n == 0 {
            return Err(serde::de::Error::custom("modulus must be positive"));
        }
        if repr.re.len() != repr.n || repr.im.len() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "expected {} samples, found re: {} im: {}",
                repr.n,
                repr.re.len(),
                repr.im.len()
            )));
        }
        Ok(Signal {
            values: repr.re.iter().zip(&repr.im).map(|(&re, &im)| Complex64::new(re, im)).collect(),
        })
    }
}

//! Time-frequency analysis on `A = Z_{n_1} x ... x Z_{n_r}`.
//!
//! The dual group is identified with `A` through the pairing
//! `<k, l> = sum_i k_i l_i / n_i (mod 1)`. Elements are indexed in
//! lexicographic order of their coordinate tuples, last coordinate fastest,
//! so `Z_N` with a single factor indexes exactly like [`crate::tf::Signal`].

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ensemble::GaussianEnsemble;
use crate::error::{Result, TfaError};
use crate::phase::root_of_unity;
use crate::tf::Signal;
use crate::uncertainty::{energy_certificate, TrialSummary, UncertaintyReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct FiniteAbelianGroup {
    factors: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    factors: Vec<usize>,
}

impl TryFrom<GroupRepr> for FiniteAbelianGroup {
    type Error = TfaError;
    fn try_from(r: GroupRepr) -> Result<Self> {
        FiniteAbelianGroup::new(r.factors)
    }
}

impl From<FiniteAbelianGroup> for GroupRepr {
    fn from(g: FiniteAbelianGroup) -> Self {
        GroupRepr { factors: g.factors }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl FiniteAbelianGroup {
    /// An empty factor list is the trivial group.
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(TfaError::ZeroModulus);
        }
        Ok(Self { factors })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Parses `"2x4"` or `"2,4"`.
    pub fn parse(text: &str) -> Result<Self> {
        let factors = text
            .split(['x', ',', '*'])
            .map(|s| s.trim().parse::<usize>().map_err(|_| TfaError::Format(format!("bad group {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    fn exponent(&self) -> usize {
        self.factors.iter().fold(1, |acc, &n| acc / gcd(acc, n) * n)
    }

    /// Coordinates of the element with index `idx`.
    pub fn element(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = idx % n;
            idx /= n;
        }
        out
    }

    pub fn index(&self, element: &[usize]) -> Result<usize> {
        if element.len() != self.factors.len() {
            return Err(TfaError::GroupMismatch(format!(
                "element has {} coordinates, group has {} factors",
                element.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0;
        for (&x, &n) in element.iter().zip(&self.factors) {
            if x >= n {
                return Err(TfaError::GroupMismatch(format!("coordinate {x} out of range for Z_{n}")));
            }
            idx = idx * n + x;
        }
        Ok(idx)
    }

    fn combine(&self, x: usize, y: usize, sign: i64) -> usize {
        let (ex, ey) = (self.element(x), self.element(y));
        let sum: Vec<usize> = ex
            .iter()
            .zip(&ey)
            .zip(&self.factors)
            .map(|((&a, &b), &n)| (a as i64 + sign * b as i64).rem_euclid(n as i64) as usize)
            .collect();
        self.index(&sum).expect("reduced coordinates")
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.combine(x, y, 1)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.combine(x, y, -1)
    }

    /// `sum_i k_i l_i (E / n_i) mod E` for the exponent `E` of the group.
    fn pairing_numerator(&self, k: &[usize], l: &[usize]) -> (i128, u64) {
        let e = self.exponent();
        let num = k
            .iter()
            .zip(l)
            .zip(&self.factors)
            .map(|((&ki, &li), &n)| (ki as i128 * li as i128 % n as i128) * (e / n) as i128)
            .sum::<i128>()
            % e as i128;
        (num, e as u64)
    }

    /// `l -> <k, l>` pulled back into a table indexed `[k][l]`, conjugated.
    fn conj_character_table(&self) -> Vec<Complex64> {
        let order = self.order();
        let elems: Vec<Vec<usize>> = (0..order).map(|i| self.element(i)).collect();
        let mut table = Vec::with_capacity(order * order);
        for k in &elems {
            for l in &elems {
                let (num, den) = self.pairing_numerator(k, l);
                table.push(root_of_unity(-num, den));
            }
        }
        table
    }
}

/// `e^{2 pi i sum_i k_i l_i / n_i}`.
pub fn character(group: &FiniteAbelianGroup, k: &[usize], l: &[usize]) -> Result<Complex64> {
    group.index(k)?;
    group.index(l)?;
    let (num, den) = group.pairing_numerator(k, l);
    Ok(root_of_unity(num, den))
}

/// A complex function on a finite Abelian group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSignal {
    group: FiniteAbelianGroup,
    values: Vec<Complex64>,
}

impl GroupSignal {
    pub fn new(group: FiniteAbelianGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(TfaError::GroupMismatch(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(group: &FiniteAbelianGroup, mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let values = (0..group.order()).map(|i| f(&group.element(i))).collect();
        Self { group: group.clone(), values }
    }

    pub fn zeros(group: &FiniteAbelianGroup) -> Self {
        Self::from_fn(group, |_| Complex64::new(0.0, 0.0))
    }

    pub fn delta(group: &FiniteAbelianGroup, at: &[usize]) -> Result<Self> {
        let idx = group.index(at)?;
        let mut out = Self::zeros(group);
        out.values[idx] = Complex64::new(1.0, 0.0);
        Ok(out)
    }

    /// Characteristic function of `{l : pred(l)}`.
    pub fn indicator(group: &FiniteAbelianGroup, mut pred: impl FnMut(&[usize]) -> bool) -> Self {
        Self::from_fn(group, |l| Complex64::new(if pred(l) { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn from_signal(f: &Signal) -> Self {
        Self { group: FiniteAbelianGroup { factors: vec![f.n()] }, values: f.values().to_vec() }
    }

    pub fn random(group: &FiniteAbelianGroup, ens: &mut GaussianEnsemble) -> Self {
        let f = ens.signal(group.order());
        Self { group: group.clone(), values: f.into_values() }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().map(|z| z * c).collect() }
    }

    /// `M_k T_j f`.
    pub fn tf_shift(&self, j: &[usize], k: &[usize]) -> Result<Self> {
        let g = &self.group;
        let (j, _) = (g.index(j)?, g.index(k)?);
        let values = (0..g.order())
            .map(|l| character(g, k, &g.element(l)).expect("valid") * self.values[g.sub(l, j)])
            .collect();
        Ok(Self { group: g.clone(), values })
    }
}

#[derive(Serialize, Deserialize)]
struct GroupSignalRepr {
    factors: Vec<usize>,
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for GroupSignal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupSignalRepr {
            factors: self.group.factors.clone(),
            n: self.values.len(),
            re: self.values.iter().map(|z| z.re).collect(),
            im: self.values.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSignal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupSignalRepr::deserialize(d)?;
        let group = FiniteAbelianGroup::new(r.factors).map_err(serde::de::Error::custom)?;
        if r.n != group.order() || r.re.len() != r.n || r.im.len() != r.n {
            return Err(serde::de::Error::custom("sample count does not match the group order"));
        }
        let values = r.re.iter().zip(&r.im).map(|(&re, &im)| Complex64::new(re, im)).collect();
        GroupSignal::new(group, values).map_err(serde::de::Error::custom)
    }
}

/// `V_g f` on `A x A^`, row-major in the time index.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelianStft {
    group: FiniteAbelianGroup,
    entries: Vec<Complex64>,
}

impl AbelianStft {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.group.order() + k]
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Index pairs `(j, k)` with `|V(j, k)| > tau max |V|`, sorted.
    pub fn support(&self, tau: f64) -> Vec<(usize, usize)> {
        let max = self.max_abs();
        if max == 0.0 {
            return Vec::new();
        }
        let order = self.group.order();
        (0..order * order)
            .filter(|&i| self.entries[i].norm() > tau * max)
            .map(|i| (i / order, i % order))
            .collect()
    }
}

/// `V_g f(j, k) = |A|^{-1/2} <f, M_k T_j g>`.
pub fn stft_abelian(f: &GroupSignal, g: &GroupSignal) -> Result<AbelianStft> {
    if f.group != g.group {
        return Err(TfaError::GroupMismatch(format!("{:?} vs {:?}", f.group.factors, g.group.factors)));
    }
    let group = &f.group;
    let order = group.order();
    let chars = group.conj_character_table();
    let scale = 1.0 / (order as f64).sqrt();
    let mut entries = Vec::with_capacity(order * order);
    let mut prod = vec![Complex64::new(0.0, 0.0); order];
    for j in 0..order {
        for (l, slot) in prod.iter_mut().enumerate() {
            *slot = f.values[l] * g.values[group.sub(l, j)].conj();
        }
        for k in 0..order {
            let row = &chars[k * order..(k + 1) * order];
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, h) in row.iter().zip(&prod) {
                acc += w * h;
            }
            entries.push(acc * scale);
        }
    }
    Ok(AbelianStft { group: group.clone(), entries })
}

/// `|supp V_g f| >= |A|`, with the same energy certificate as the cyclic check.
pub fn abelian_weak_uncertainty_check(f: &GroupSignal, g: &GroupSignal, tau: f64) -> Result<UncertaintyReport> {
    if f.is_zero() || g.is_zero() {
        return Err(TfaError::ZeroSignal);
    }
    let table = stft_abelian(f, g)?;
    let order = f.group.order();
    let support = table.support(tau);
    let on: std::collections::HashSet<usize> = support.iter().map(|&(j, k)| j * order + k).collect();
    let certified = energy_certificate(table.entries(), |i| on.contains(&i), f.norm_sq() * g.norm_sq(), order);
    Ok(UncertaintyReport {
        n: order,
        support_size: support.len(),
        bound: order,
        holds: support.len() >= order,
        equality: support.len() == order,
        witness: None,
        energy_certified: Some(certified),
    })
}

/// A minimal support written as `offset + subgroup` inside `A x A^`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianCoset {
    pub group: FiniteAbelianGroup,
    pub offset: (usize, usize),
    pub subgroup: Vec<(usize, usize)>,
}

impl Serialize for AbelianCoset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            factors: Vec<usize>,
            offset: [Vec<usize>; 2],
            subgroup: Vec<[Vec<usize>; 2]>,
        }
        let el = |(j, k): (usize, usize)| [self.group.element(j), self.group.element(k)];
        Repr {
            factors: self.group.factors.clone(),
            offset: el(self.offset),
            subgroup: self.subgroup.iter().map(|&pt| el(pt)).collect(),
        }
        .serialize(s)
    }
}

/// For an equality case, recentres the support at its least point and checks
/// by brute force that the result is a subgroup of `A x A^` of order `|A|`.
pub fn abelian_coset_check(f: &GroupSignal, g: &GroupSignal, tau: f64) -> Result<AbelianCoset> {
    if f.is_zero() || g.is_zero() {
        return Err(TfaError::ZeroSignal);
    }
    let table = stft_abelian(f, g)?;
    let group = f.group.clone();
    let order = group.order();
    let support = table.support(tau);
    if support.len() != order {
        return Err(TfaError::NotExtremal { support_size: support.len(), bound: order });
    }
    let offset = support[0];
    let mut centred: Vec<(usize, usize)> = support
        .iter()
        .map(|&(j, k)| (group.sub(j, offset.0), group.sub(k, offset.1)))
        .collect();
    centred.sort_unstable();
    let member = |pt: &(usize, usize)| centred.binary_search(pt).is_ok();
    let closed = centred.iter().all(|&(j, k)| {
        centred.iter().all(|&(j2, k2)| member(&(group.sub(j, j2), group.sub(k, k2))))
    });
    if !closed {
        return Err(TfaError::NumericallyAmbiguous("recentred support is not a subgroup".into()));
    }
    Ok(AbelianCoset { group, offset, subgroup: centred })
}

/// Seeded Gaussian trials of the weak bound on `group`.
pub fn abelian_weak_trials(group: &FiniteAbelianGroup, trials: usize, seed: u64, tau: f64) -> TrialSummary {
    let mut ens = GaussianEnsemble::new(seed);
    let order = group.order();
    let mut summary = TrialSummary {
        check: format!("abelian-weak {:?}", group.factors),
        n: order,
        seed,
        trials: 0,
        violations: 0,
        equality_cases: 0,
        uncertified: 0,
        min_support_size: usize::MAX,
        bound: order,
        redraws: 0,
    };
    for _ in 0..trials {
        let f = GroupSignal::random(group, &mut ens);
        let g = GroupSignal::random(group, &mut ens);
        let r = abelian_weak_uncertainty_check(&f, &g, tau).expect("unit signals");
        summary.trials += 1;
        summary.violations += usize::from(!r.holds);
        summary.uncertified += usize::from(r.energy_certified == Some(false));
        summary.min_support_size = summary.min_support_size.min(r.support_size);
        if r.equality {
            summary.equality_cases += 1;
            if abelian_coset_check(&f, &g, tau).is_err() {
                summary.violations += 1;
            }
        }
    }
    summary
}

/// Indicators of the product subgroups `d_1 Z_{n_1} x ... x d_r Z_{n_r}`,
/// for every choice of divisors `d_i | n_i`.
pub fn product_subgroup_indicators(group: &FiniteAbelianGroup) -> Vec<GroupSignal> {
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    for &n in group.factors() {
        let ds = crate::group::divisors(n).expect("positive factor");
        choices = choices
            .into_iter()
            .flat_map(|prefix| {
                ds.iter().map(move |&d| {
                    let mut v = prefix.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    choices
        .into_iter()
        .map(|ds| GroupSignal::indicator(group, |l| l.iter().zip(&ds).all(|(&x, &d)| x % d == 0)))
        .collect()
}

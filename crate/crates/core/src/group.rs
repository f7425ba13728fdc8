//! Residues modulo `N`, divisors, the subgroups `H_a` of `Z_N` and the
//! order-`N` subgroups `H_{b,p}` of `Z_N x Z_N`.
//!
//! Every subgroup of order `N` in `Z_N x Z_N` is the lattice generated by
//! `(a, p)` and `(0, b)` for exactly one pair `(b, p)` with `b | N`,
//! `0 <= p < b` and `a = N / b`. The number of such subgroups is therefore
//! `sigma(N)`, the sum of the divisors of `N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, TfaError};

/// A residue class in `Z_n`, always stored in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicIndex {
    n: usize,
    value: usize,
}

impl CyclicIndex {
    /// Reduces an arbitrary integer modulo `n`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn new(value: i64, n: usize) -> Self {
        assert!(n > 0, "modulus must be positive");
        let value = (value as i128).rem_euclid(n as i128) as usize;
        Self { n, value }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(0, n)
    }

    pub fn modulus(self) -> usize {
        self.n
    }

    pub fn value(self) -> usize {
        self.value
    }

    fn same_modulus(self, other: Self) {
        assert_eq!(self.n, other.n, "residues from different moduli");
    }
}

impl Add for CyclicIndex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.same_modulus(rhs);
        Self { n: self.n, value: (self.value + rhs.value) % self.n }
    }
}

impl Sub for CyclicIndex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for CyclicIndex {
    type Output = Self;
    fn neg(self) -> Self {
        Self { n: self.n, value: (self.n - self.value) % self.n }
    }
}

impl Mul for CyclicIndex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_modulus(rhs);
        let v = (self.value as u128 * rhs.value as u128) % self.n as u128;
        Self { n: self.n, value: v as usize }
    }
}

impl fmt::Display for CyclicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A point `(j, k)` of the phase space `Z_N x Z_N`: time shift `j`,
/// frequency shift `k`. Orders lexicographically, `j` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    j: CyclicIndex,
    k: CyclicIndex,
}

impl PhasePoint {
    pub fn new(n: usize, j: i64, k: i64) -> Self {
        Self { j: CyclicIndex::new(j, n), k: CyclicIndex::new(k, n) }
    }

    pub fn origin(n: usize) -> Self {
        Self::new(n, 0, 0)
    }

    pub fn modulus(self) -> usize {
        self.j.modulus()
    }

    pub fn j(self) -> usize {
        self.j.value()
    }

    pub fn k(self) -> usize {
        self.k.value()
    }

    pub fn time(self) -> CyclicIndex {
        self.j
    }

    pub fn frequency(self) -> CyclicIndex {
        self.k
    }

    pub fn as_pair(self) -> [usize; 2] {
        [self.j(), self.k()]
    }
}

impl Add for PhasePoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { j: self.j + rhs.j, k: self.k + rhs.k }
    }
}

impl Sub for PhasePoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { j: self.j - rhs.j, k: self.k - rhs.k }
    }
}

impl Neg for PhasePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self { j: -self.j, k: -self.k }
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.j, self.k)
    }
}

/// The parameters `(b, p)` of the subgroup `H_{b,p}` of `Z_N x Z_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubgroupSpec {
    n: usize,
    b: usize,
    p: usize,
    a: usize,
}

impl SubgroupSpec {
    /// Builds `H_{b,p}` in `Z_n x Z_n`; `p` is reduced modulo `b`.
    pub fn new(n: usize, b: usize, p: i64) -> Result<Self> {
        check_divisor(b, n)?;
        let p = (p as i128).rem_euclid(b as i128) as usize;
        Ok(Self { n, b, p, a: n / b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `N / b`; also the generator of `H_a` in the first coordinate.
    pub fn a(&self) -> usize {
        self.a
    }

    pub fn points(&self) -> SupportSet {
        hbp_points(self)
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{{{},{}}} in Z_{}^2", self.b, self.p, self.n)
    }
}

/// A finite subset of `Z_N x Z_N`, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportSet {
    n: usize,
    points: Vec<PhasePoint>,
}

impl SupportSet {
    pub fn empty(n: usize) -> Self {
        Self { n, points: Vec::new() }
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = PhasePoint>) -> Result<Self> {
        let mut points: Vec<PhasePoint> = points.into_iter().collect();
        if let Some(bad) = points.iter().find(|pt| pt.modulus() != n) {
            return Err(TfaError::ModulusMismatch { expected: n, found: bad.modulus() });
        }
        points.sort_unstable();
        points.dedup();
        Ok(Self { n, points })
    }

    /// Builds a set from raw `(j, k)` pairs, reducing them modulo `n`.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut points: Vec<PhasePoint> =
            pairs.into_iter().map(|(j, k)| PhasePoint::new(n, j, k)).collect();
        points.sort_unstable();
        points.dedup();
        Self { n, points }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &PhasePoint> {
        self.points.iter()
    }

    pub fn contains(&self, pt: &PhasePoint) -> bool {
        self.points.binary_search(pt).is_ok()
    }

    /// Lexicographically least point.
    pub fn min(&self) -> Option<PhasePoint> {
        self.points.first().copied()
    }

    pub fn translate(&self, by: PhasePoint) -> Self {
        Self::from_points(self.n, self.points.iter().map(|&pt| pt + by))
            .expect("translation preserves the modulus")
    }

    /// Whether the set contains the origin and is closed under subtraction.
    pub fn is_subgroup(&self) -> bool {
        if !self.contains(&PhasePoint::origin(self.n)) {
            return false;
        }
        self.points
            .iter()
            .all(|&x| self.points.iter().all(|&y| self.contains(&(x - y))))
    }
}

#[derive(Serialize, Deserialize)]
struct SupportSetRepr {
    n: usize,
    points: Vec<[usize; 2]>,
}

impl Serialize for SupportSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SupportSetRepr { n: self.n, points: self.points.iter().map(|p| p.as_pair()).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SupportSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SupportSetRepr::deserialize(deserializer)?;
        if repr.n == 0 {
            return Err(serde::de::Error::custom("modulus must be positive"));
        }
        if let Some(bad) = repr.points.iter().find(|[j, k]| *j >= repr.n || *k >= repr.n) {
            return Err(serde::de::Error::custom(format!(
                "point {bad:?} out of range for n = {}",
                repr.n
            )));
        }
        Ok(SupportSet::from_pairs(repr.n, repr.points.iter().map(|&[j, k]| (j as i64, k as i64))))
    }
}

impl Serialize for PhasePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_pair().serialize(serializer)
    }
}

pub(crate) fn check_divisor(d: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(TfaError::ZeroModulus);
    }
    if d == 0 || !n.is_multiple_of(d) {
        return Err(TfaError::NotADivisor { d, n });
    }
    Ok(())
}

/// All positive divisors of `n`, increasing.
pub fn divisors(n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(TfaError::ZeroModulus);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// The subgroup `H_a = {0, a, 2a, ..., n - a}` of `Z_n`.
pub fn subgroup_ha(n: usize, a: usize) -> Result<Vec<CyclicIndex>> {
    check_divisor(a, n)?;
    Ok((0..n / a).map(|m| CyclicIndex::new((m * a) as i64, n)).collect())
}

/// `H_{b,p} = {(ma, nb + mp) : 0 <= m < b, 0 <= n < a}`.
pub fn hbp_points(spec: &SubgroupSpec) -> SupportSet {
    let (n, a, b, p) = (spec.n, spec.a, spec.b, spec.p);
    let pairs = (0..b).flat_map(move |m| {
        (0..a).map(move |r| ((m * a) as i64, (r * b + m * p) as i64))
    });
    SupportSet::from_pairs(n, pairs)
}

/// Every order-`n` subgroup of `Z_n x Z_n`, ordered by `b` then `p`.
pub fn enumerate_order_n_subgroups(n: usize) -> Result<Vec<SubgroupSpec>> {
    let mut out = Vec::new();
    for b in divisors(n)? {
        for p in 0..b {
            out.push(SubgroupSpec { n, b, p, a: n / b });
        }
    }
    Ok(out)
}

/// Recognises `s` as a coset `s0 + H_{b,p}`.
///
/// Returns the subgroup together with the lexicographically least point of
/// `s` as offset, or `None` when `s` is not such a coset.
pub fn is_coset_of_order_n_subgroup(s: &SupportSet) -> Option<(SubgroupSpec, PhasePoint)> {
    let n = s.n();
    if s.len() != n {
        return None;
    }
    let offset = s.min()?;
    let centred = s.translate(-offset);

    // The first-coordinate projection of H_{b,p} is H_a.
    let a = centred.iter().map(|pt| pt.j()).filter(|&j| j > 0).min().unwrap_or(n);
    if !n.is_multiple_of(a) {
        return None;
    }
    let b = n / a;
    let p = if b == 1 {
        0
    } else {
        centred.iter().find(|pt| pt.j() == a).map(|pt| pt.k() % b)?
    };
    let spec = SubgroupSpec { n, b, p, a };
    (hbp_points(&spec) == centred).then_some((spec, offset))
}

//! Numerical checks of the support bounds on `Z_N`.
//!
//! * weak STFT bound: `|supp V_g f| >= N`;
//! * Donoho-Stark: `|supp f| * |supp f^| >= N`;
//! * Tao, for prime `N`: `|supp f| + |supp f^| >= N + 1`;
//! * the coset structure of minimal STFT supports.
//!
//! Besides single-pair checks the module runs seeded Gaussian ensembles and
//! an exhaustive scan over all pairs with entries in a small alphabet.

use num_complex::Complex64;
use serde::Serialize;

use crate::ensemble::GaussianEnsemble;
use crate::error::{Result, TfaError};
use crate::extremal::classify_extremal;
use crate::group::{is_coset_of_order_n_subgroup, PhasePoint, SubgroupSpec, SupportSet};
use crate::tf::{dft, stft, support_of, Signal, StftTable};

/// Relative slack for the energy identities certified alongside the weak bound.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

/// Outcome of one bound check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub n: usize,
    pub support_size: usize,
    pub bound: usize,
    pub holds: bool,
    pub equality: bool,
    /// The support, recorded for equality cases.
    pub witness: Option<SupportSet>,
    /// For the STFT bounds: the support carries all the energy and no entry
    /// exceeds the pointwise bound.
    pub energy_certified: Option<bool>,
}

impl UncertaintyReport {
    fn new(n: usize, support_size: usize, bound: usize) -> Self {
        Self {
            n,
            support_size,
            bound,
            holds: support_size >= bound,
            equality: support_size == bound,
            witness: None,
            energy_certified: None,
        }
    }
}

/// Checks `sum_S |V|^2 = ||f||^2 ||g||^2` and `max |V|^2 <= ||f||^2 ||g||^2 / N`.
pub(crate) fn energy_certificate(entries: &[Complex64], on_support: impl Fn(usize) -> bool, total: f64, order: usize) -> bool {
    let on_s: f64 = entries
        .iter()
        .enumerate()
        .filter(|(i, _)| on_support(*i))
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let peak = entries.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
    (on_s - total).abs() <= ENERGY_TOLERANCE * total
        && peak <= total / order as f64 * (1.0 + ENERGY_TOLERANCE)
}

/// `|supp V_g f| >= N`.
pub fn weak_uncertainty_check(f: &Signal, g: &Signal, tau: f64) -> Result<UncertaintyReport> {
    if f.is_zero() || g.is_zero() {
        return Err(TfaError::ZeroSignal);
    }
    let n = f.n();
    let table = stft(f, g)?;
    let support = support_of(&table, tau);
    let total = f.norm_sq() * g.norm_sq();
    let certified = energy_certificate(
        table.entries(),
        |i| support.contains(&PhasePoint::new(n, (i / n) as i64, (i % n) as i64)),
        total,
        n,
    );
    let mut report = UncertaintyReport::new(n, support.len(), n);
    report.energy_certified = Some(certified);
    if report.equality {
        report.witness = Some(support);
    }
    Ok(report)
}

/// `|supp f| * |supp f^| >= N`.
pub fn donoho_stark_check(f: &Signal, tau: f64) -> Result<UncertaintyReport> {
    if f.is_zero() {
        return Err(TfaError::ZeroSignal);
    }
    let (s, fs) = (f.support(tau).len(), dft(f).support(tau).len());
    Ok(UncertaintyReport::new(f.n(), s * fs, f.n()))
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `|supp f| + |supp f^| >= N + 1` for prime `N`.
pub fn tao_check(f: &Signal, tau: f64) -> Result<UncertaintyReport> {
    if !is_prime(f.n()) {
        return Err(TfaError::CompositeModulus(f.n()));
    }
    if f.is_zero() {
        return Err(TfaError::ZeroSignal);
    }
    let (s, fs) = (f.support(tau).len(), dft(f).support(tau).len());
    Ok(UncertaintyReport::new(f.n(), s + fs, f.n() + 1))
}

/// For a pair with `|supp V_g f| = N`: the subgroup `H_{b,p}` and canonical
/// offset `mu` with `supp V_g f = mu + H_{b,p}`. Also checks that
/// `supp V_g g` is `H_{b,p}` itself.
pub fn coset_structure_check(f: &Signal, g: &Signal, tau: f64) -> Result<(SubgroupSpec, PhasePoint)> {
    if f.is_zero() || g.is_zero() {
        return Err(TfaError::ZeroSignal);
    }
    let n = f.n();
    let support = support_of(&stft(f, g)?, tau);
    if support.len() != n {
        return Err(TfaError::NotExtremal { support_size: support.len(), bound: n });
    }
    let found = is_coset_of_order_n_subgroup(&support).ok_or_else(|| {
        TfaError::NumericallyAmbiguous("minimal support is not a coset of an order-N subgroup".into())
    })?;
    match is_coset_of_order_n_subgroup(&support_of(&stft(g, g)?, tau)) {
        Some((sub, off)) if sub == found.0 && off == PhasePoint::origin(n) => Ok(found),
        _ => Err(TfaError::NumericallyAmbiguous("supp V_g g is not the subgroup of supp V_g f".into())),
    }
}

/// Whether some entry sits within a factor 10 of the relative threshold.
fn near_threshold(values: &[Complex64], tau: f64) -> bool {
    let max = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    max > 0.0
        && values.iter().any(|z| {
            let r = z.norm() / max;
            r >= tau / 10.0 && r <= tau * 10.0
        })
}

/// A unit Gaussian pair whose STFT has no entry near the threshold; the
/// second value counts redraws.
pub fn draw_generic_pair(ens: &mut GaussianEnsemble, n: usize, tau: f64) -> (Signal, Signal, StftTable, usize) {
    let mut redraws = 0;
    loop {
        let f = ens.signal(n);
        let g = ens.signal(n);
        let table = stft(&f, &g).expect("same modulus");
        if !near_threshold(table.entries(), tau) {
            return (f, g, table, redraws);
        }
        redraws += 1;
    }
}

/// A unit Gaussian signal with neither `f` nor `f^` near the threshold.
pub fn draw_generic_signal(ens: &mut GaussianEnsemble, n: usize, tau: f64) -> (Signal, usize) {
    let mut redraws = 0;
    loop {
        let f = ens.signal(n);
        if !near_threshold(f.values(), tau) && !near_threshold(dft(&f).values(), tau) {
            return (f, redraws);
        }
        redraws += 1;
    }
}

/// Aggregate of a seeded ensemble run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub check: String,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub violations: usize,
    pub equality_cases: usize,
    pub uncertified: usize,
    pub min_support_size: usize,
    pub bound: usize,
    pub redraws: usize,
}

impl TrialSummary {
    fn new(check: &str, n: usize, seed: u64, bound: usize) -> Self {
        Self {
            check: check.to_string(),
            n,
            seed,
            trials: 0,
            violations: 0,
            equality_cases: 0,
            uncertified: 0,
            min_support_size: usize::MAX,
            bound,
            redraws: 0,
        }
    }

    fn record(&mut self, report: &UncertaintyReport) {
        self.trials += 1;
        self.violations += usize::from(!report.holds);
        self.equality_cases += usize::from(report.equality);
        self.uncertified += usize::from(report.energy_certified == Some(false));
        self.min_support_size = self.min_support_size.min(report.support_size);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.uncertified == 0
    }
}

pub fn weak_uncertainty_trials(n: usize, trials: usize, seed: u64, tau: f64) -> TrialSummary {
    let mut ens = GaussianEnsemble::new(seed);
    let mut summary = TrialSummary::new("weak", n, seed, n);
    for _ in 0..trials {
        let (f, g, _, redraws) = draw_generic_pair(&mut ens, n, tau);
        summary.redraws += redraws;
        summary.record(&weak_uncertainty_check(&f, &g, tau).expect("unit signals"));
    }
    summary
}

pub fn donoho_stark_trials(n: usize, trials: usize, seed: u64, tau: f64) -> TrialSummary {
    let mut ens = GaussianEnsemble::new(seed);
    let mut summary = TrialSummary::new("donoho-stark", n, seed, n);
    for _ in 0..trials {
        let (f, redraws) = draw_generic_signal(&mut ens, n, tau);
        summary.redraws += redraws;
        summary.record(&donoho_stark_check(&f, tau).expect("unit signal"));
    }
    summary
}

pub fn tao_trials(n: usize, trials: usize, seed: u64, tau: f64) -> Result<TrialSummary> {
    if !is_prime(n) {
        return Err(TfaError::CompositeModulus(n));
    }
    let mut ens = GaussianEnsemble::new(seed);
    let mut summary = TrialSummary::new("tao", n, seed, n + 1);
    for _ in 0..trials {
        let (f, redraws) = draw_generic_signal(&mut ens, n, tau);
        summary.redraws += redraws;
        summary.record(&tao_check(&f, tau)?);
    }
    Ok(summary)
}

/// Which pairs an exhaustive scan visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFilter {
    /// Every pair of nonzero signals.
    All,
    /// Pairs with `||f|| = ||g||` whose supports are both cosets of
    /// subgroups of `Z_N`.
    CosetSupportedEqualNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityCase {
    pub f: Signal,
    pub g: Signal,
    pub b: usize,
    pub p: usize,
    pub mu: PhasePoint,
}

/// Result of [`exhaustive_small_scan`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub alphabet: Vec<[f64; 2]>,
    pub filter: ScanFilter,
    pub trials: usize,
    pub violations: usize,
    /// Equality cases that failed the coset or classification check.
    pub failures: usize,
    pub equality_cases: Vec<EqualityCase>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.failures == 0
    }
}

/// Largest number of pairs [`exhaustive_small_scan`] agrees to visit.
pub const SCAN_LIMIT: u128 = 50_000_000;

fn all_signals(n: usize, alphabet: &[Complex64]) -> Vec<Signal> {
    let q = alphabet.len();
    let count = q.pow(n as u32);
    (0..count)
        .map(|mut code| {
            Signal::from_fn(n, |_| {
                let z = alphabet[code % q];
                code /= q;
                z
            })
        })
        .filter(|s| !s.is_zero())
        .collect()
}

fn support_is_subgroup_coset(f: &Signal) -> bool {
    let n = f.n();
    let s = f.support(1e-12);
    let Some(&s0) = s.first() else { return false };
    let len = s.len();
    if !n.is_multiple_of(len) {
        return false;
    }
    let a = n / len;
    s.iter().all(|&l| (l + n - s0).is_multiple_of(a))
}

/// Enumerates every pair of nonzero signals on `Z_n` with entries in
/// `alphabet`, checks the weak bound on each, and runs the coset and
/// classification checks on every equality case.
pub fn exhaustive_small_scan(n: usize, alphabet: &[Complex64], filter: ScanFilter, tau: f64) -> Result<ScanReport> {
    if n == 0 {
        return Err(TfaError::ZeroModulus);
    }
    if alphabet.is_empty() {
        return Err(TfaError::OutOfRange("empty alphabet".into()));
    }
    let size = (alphabet.len() as u128).pow(2 * n as u32);
    if size > SCAN_LIMIT {
        return Err(TfaError::OutOfRange(format!("{size} pairs exceed the scan limit {SCAN_LIMIT}")));
    }
    let mut signals = all_signals(n, alphabet);
    if filter == ScanFilter::CosetSupportedEqualNorm {
        signals.retain(support_is_subgroup_coset);
    }
    let mut report = ScanReport {
        n,
        alphabet: alphabet.iter().map(|z| [z.re, z.im]).collect(),
        filter,
        trials: 0,
        violations: 0,
        failures: 0,
        equality_cases: Vec::new(),
    };
    for g in &signals {
        for f in &signals {
            if filter == ScanFilter::CosetSupportedEqualNorm && (f.norm_sq() - g.norm_sq()).abs() > 1e-12 {
                continue;
            }
            report.trials += 1;
            let check = weak_uncertainty_check(f, g, tau)?;
            if !check.holds || check.energy_certified == Some(false) {
                report.violations += 1;
                continue;
            }
            if !check.equality {
                continue;
            }
            let coset = coset_structure_check(f, g, tau);
            let classified = classify_extremal(f, g, tau);
            match (coset, classified) {
                (Ok((sub, mu)), Ok((spec, _))) if sub == spec.subgroup() && mu == spec.mu() => {
                    report.equality_cases.push(EqualityCase {
                        f: f.clone(),
                        g: g.clone(),
                        b: sub.b(),
                        p: sub.p(),
                        mu,
                    });
                }
                _ => report.failures += 1,
            }
        }
    }
    Ok(report)
}

//! Pairs `(f, g)` whose STFT has the minimal support size `N`.
//!
//! Every such pair has the form
//!
//! ```text
//! g = c1 pi(lambda) C_{p,a} chi_{H_a},    f = c2 pi(mu) g,
//! ```
//!
//! with `b | N`, `a = N / b`, `0 <= p < b`, and then
//! `supp V_g f = mu + H_{b,p}`. [`make_extremal_pair`] builds the family,
//! [`classify_extremal`] goes the other way: given an extremal pair it
//! recovers `(b, p)`, the support offset `mu`, and a canonical window model,
//! and certifies that the inputs match the model up to scalar factors.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, TfaError};
use crate::group::{check_divisor, hbp_points, is_coset_of_order_n_subgroup, CyclicIndex, PhasePoint, SubgroupSpec, SupportSet};
use crate::io::complex_pair;
use crate::tf::{
    best_multiple, chirp, idft, stft, support_of, tf_shift, translate, Signal, StftTable,
};

/// Relative residual allowed when certifying a classified pair.
pub const CLASSIFY_TOLERANCE: f64 = 1e-10;

/// Relative residual above which a table is not accepted as `V_f f`.
pub const INVERSION_TOLERANCE: f64 = 1e-8;

/// Parameters `(b, p, lambda, mu, c1, c2)` of one extremal pair on `Z_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalSpec {
    n: usize,
    b: usize,
    p: usize,
    lambda: PhasePoint,
    mu: PhasePoint,
    c1: Complex64,
    c2: Complex64,
}

impl ExtremalSpec {
    pub fn new(
        n: usize,
        b: usize,
        p: usize,
        lambda: PhasePoint,
        mu: PhasePoint,
        c1: Complex64,
        c2: Complex64,
    ) -> Result<Self> {
        check_divisor(b, n)?;
        if p >= b {
            return Err(TfaError::OutOfRange(format!("p = {p} must lie in [0, {b})")));
        }
        for pt in [lambda, mu] {
            if pt.modulus() != n {
                return Err(TfaError::ModulusMismatch { expected: n, found: pt.modulus() });
            }
        }
        if c1 == Complex64::new(0.0, 0.0) || c2 == Complex64::new(0.0, 0.0) {
            return Err(TfaError::OutOfRange("c1 and c2 must be nonzero".into()));
        }
        Ok(Self { n, b, p, lambda, mu, c1, c2 })
    }

    /// `lambda = mu = 0`, `c1 = c2 = 1`.
    pub fn basic(n: usize, b: usize, p: usize) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::new(n, b, p, PhasePoint::origin(n), PhasePoint::origin(n), one, one)
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
    pub fn a(&self) -> usize {
        self.n / self.b
    }
    pub fn lambda(&self) -> PhasePoint {
        self.lambda
    }
    pub fn mu(&self) -> PhasePoint {
        self.mu
    }
    pub fn c1(&self) -> Complex64 {
        self.c1
    }
    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    pub fn subgroup(&self) -> SubgroupSpec {
        SubgroupSpec::new(self.n, self.b, self.p as i64).expect("validated on construction")
    }
}

#[derive(Serialize, Deserialize)]
struct ExtremalSpecRepr {
    n: usize,
    b: usize,
    p: usize,
    lambda: [i64; 2],
    mu: [i64; 2],
    #[serde(with = "complex_pair")]
    c1: Complex64,
    #[serde(with = "complex_pair")]
    c2: Complex64,
}

impl Serialize for ExtremalSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = |pt: PhasePoint| [pt.j() as i64, pt.k() as i64];
        ExtremalSpecRepr {
            n: self.n,
            b: self.b,
            p: self.p,
            lambda: pair(self.lambda),
            mu: pair(self.mu),
            c1: self.c1,
            c2: self.c2,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtremalSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ExtremalSpecRepr::deserialize(d)?;
        if r.n == 0 {
            return Err(serde::de::Error::custom("modulus must be positive"));
        }
        let pt = |[j, k]: [i64; 2]| PhasePoint::new(r.n, j, k);
        ExtremalSpec::new(r.n, r.b, r.p, pt(r.lambda), pt(r.mu), r.c1, r.c2)
            .map_err(serde::de::Error::custom)
    }
}

/// Intermediate quantities of a classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationTrace {
    /// The subgroup `H_{b,p} = supp V_g g`.
    pub subgroup: SubgroupSpec,
    /// `g` lives on the coset `j0 + H_a`, `0 <= j0 < a`.
    pub j0: usize,
    /// `V_gamma gamma(a, 0) / V_gamma gamma(0, 0) = e^{-2 pi i k1 / b}`.
    pub k1: usize,
    /// `V_gamma gamma(0, b) / V_gamma gamma(0, 0) = e^{-2 pi i j1 / a}`; always 0.
    pub j1: usize,
    /// The reduced window `C_{-p,a} T_{-j0} g`.
    pub gamma: Signal,
    /// Max deviation of `V_gamma gamma` from its closed form, relative to `V_gamma gamma(0, 0)`.
    pub gamma_table_residual: f64,
    pub residual_g: f64,
    pub residual_f: f64,
}

/// `g = c1 pi(lambda) C_{p,a} chi_{H_a}` and `f = c2 pi(mu) g`.
pub fn make_extremal_pair(spec: &ExtremalSpec) -> Result<(Signal, Signal)> {
    let g = canonical_window(spec.n, spec.b, spec.p, spec.lambda)?.scale(spec.c1);
    let f = tf_shift(&g, spec.mu)?.scale(spec.c2);
    Ok((f, g))
}

/// `pi(lambda) C_{p,a} chi_{H_a}` with `a = n / b`.
fn canonical_window(n: usize, b: usize, p: usize, lambda: PhasePoint) -> Result<Signal> {
    check_divisor(b, n)?;
    let a = n / b;
    let base = chirp(p as i64, a, &Signal::subgroup_indicator(n, a)?)?;
    tf_shift(&base, lambda)
}

/// `mu + H_{b,p}`.
pub fn predicted_support(spec: &ExtremalSpec) -> SupportSet {
    hbp_points(&spec.subgroup()).translate(spec.mu)
}

/// Whether `|supp V_g f| = N`, together with the support.
pub fn verify_extremal(f: &Signal, g: &Signal, tau: f64) -> Result<(bool, SupportSet)> {
    if f.is_zero() || g.is_zero() {
        return Err(TfaError::ZeroSignal);
    }
    let support = support_of(&stft(f, g)?, tau);
    Ok((support.len() == f.n(), support))
}

fn phase_index(ratio: Complex64, modulus: usize, what: &str) -> Result<usize> {
    if (ratio.norm() - 1.0).abs() > 1e-8 {
        return Err(TfaError::NumericallyAmbiguous(format!(
            "{what}: stabilizer ratio has modulus {}",
            ratio.norm()
        )));
    }
    let turns = -ratio.arg() / (2.0 * std::f64::consts::PI) * modulus as f64;
    Ok((turns.round() as i64).rem_euclid(modulus as i64) as usize)
}

/// Recovers the parameters of an extremal pair.
///
/// The returned spec uses the canonical gauge `lambda = (j0, -k1)` and the
/// lexicographically least support point as `mu`; `c1` and `c2` are the
/// least-squares factors against that model. Fails with
/// [`TfaError::NotExtremal`] when `|supp V_g f| != N`, and with
/// [`TfaError::NumericallyAmbiguous`] when the pair does not match the model
/// to [`CLASSIFY_TOLERANCE`].
pub fn classify_extremal(f: &Signal, g: &Signal, tau: f64) -> Result<(ExtremalSpec, ClassificationTrace)> {
    let (is_min, support) = verify_extremal(f, g, tau)?;
    let n = f.n();
    if !is_min {
        return Err(TfaError::NotExtremal { support_size: support.len(), bound: n });
    }
    let ambiguous = |msg: &str| TfaError::NumericallyAmbiguous(msg.to_string());

    let window_support = support_of(&stft(g, g)?, tau);
    let (subgroup, origin) = is_coset_of_order_n_subgroup(&window_support)
        .ok_or_else(|| ambiguous("supp V_g g is not an order-N subgroup"))?;
    debug_assert_eq!(origin, PhasePoint::origin(n));
    let (coset_group, mu) = is_coset_of_order_n_subgroup(&support)
        .ok_or_else(|| ambiguous("supp V_g f is not a coset"))?;
    if coset_group != subgroup {
        return Err(ambiguous("supp V_g f and supp V_g g belong to different subgroups"));
    }
    let (a, b, p) = (subgroup.a(), subgroup.b(), subgroup.p());

    // M_{b} g = c g forces g onto a single coset j0 + H_a.
    let residues: Vec<usize> = g.support(tau).into_iter().map(|l| l % a).collect();
    let j0 = residues[0];
    if residues.iter().any(|&r| r != j0) {
        return Err(ambiguous("window is not supported on a single coset of H_a"));
    }

    let shifted = translate(g, CyclicIndex::new(-(j0 as i64), n))?;
    let on_ha = Signal::from_fn(n, |l| {
        if l % a == 0 { shifted.values()[l] } else { Complex64::new(0.0, 0.0) }
    });
    let gamma = chirp(-(p as i64), a, &on_ha)?;

    let vgg = stft(&gamma, &gamma)?;
    let v0 = vgg.get(0, 0);
    let k1 = phase_index(vgg.get(a % n, 0) / v0, b, "c(a, 0)")?;
    let j1 = phase_index(vgg.get(0, b % n) / v0, a, "c(0, b)")?;
    if j1 != 0 {
        return Err(ambiguous("reduced window has a nonzero time offset j1"));
    }
    let gamma_table_residual = gamma_table_residual(&vgg, &subgroup, k1, j1);
    if gamma_table_residual > INVERSION_TOLERANCE {
        return Err(ambiguous("V_gamma gamma deviates from its closed form"));
    }

    let lambda = PhasePoint::new(n, j0 as i64, -(k1 as i64));
    let model = canonical_window(n, b, p, lambda)?;
    let (c1, residual_g) = best_multiple(g, &model)?;
    let (c2, residual_f) = best_multiple(f, &tf_shift(g, mu)?)?;
    if residual_g > CLASSIFY_TOLERANCE || residual_f > CLASSIFY_TOLERANCE {
        return Err(TfaError::NumericallyAmbiguous(format!(
            "model residuals g: {residual_g:e}, f: {residual_f:e}"
        )));
    }

    let spec = ExtremalSpec::new(n, b, p, lambda, mu, c1, c2)?;
    let trace = ClassificationTrace {
        subgroup,
        j0,
        k1,
        j1,
        gamma,
        gamma_table_residual,
        residual_g,
        residual_f,
    };
    Ok((spec, trace))
}

/// Max over `(j, k)` of `|V(j, k) - V(0, 0) e^{-2 pi i (k1 j + k j1) / N} chi_{H_{b,0}}(j, k)|`,
/// divided by `|V(0, 0)|`.
fn gamma_table_residual(vgg: &StftTable, subgroup: &SubgroupSpec, k1: usize, j1: usize) -> f64 {
    let n = vgg.n();
    let v0 = vgg.get(0, 0);
    let h = hbp_points(&SubgroupSpec::new(n, subgroup.b(), 0).expect("b divides n"));
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let pt = PhasePoint::new(n, j as i64, k as i64);
            let model = if h.contains(&pt) {
                v0 * crate::phase::root_of_unity(-((k1 * j + k * j1) as i128), n as u64)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((vgg.get(j, k) - model).norm());
        }
    }
    worst / v0.norm()
}

/// Recovers `f`, up to a unimodular factor, from a table `V = V_f f`.
///
/// Uses `N^{-1/2} sum_k e^{2 pi i k j' / N} V(j, k) = f(j') conj(f(j' - j))`:
/// the `j = 0` row gives `|f|^2`, the least index `j0` with
/// `|f(j0)|^2 > tau max |f|^2` is fixed real positive, and the other values
/// follow from the row `j` at `j' = j0 + j`. The zero table yields the zero
/// signal. The result is certified against `V`.
pub fn reconstruct_from_autostft(v: &StftTable, tau: f64) -> Result<Signal> {
    let n = v.n();
    let vmax = v.max_abs();
    if vmax == 0.0 {
        return Ok(Signal::zeros(n));
    }
    let rows: Vec<Signal> = (0..n)
        .map(|j| idft(&Signal::new(v.row(j).to_vec()).expect("nonempty row")))
        .collect();
    let power: Vec<f64> = rows[0].values().iter().map(|z| z.re).collect();
    let pmax = power.iter().copied().fold(0.0, f64::max);
    let j0 = (0..n)
        .find(|&l| power[l] > tau * pmax)
        .ok_or(TfaError::InconsistentTable { residual: f64::INFINITY })?;
    let anchor = power[j0].sqrt();
    let f = Signal::from_fn(n, |l| {
        let j = (l + n - j0) % n;
        rows[j].values()[l] / anchor
    });
    let residual = stft(&f, &f)?.max_abs_diff(v)? / vmax;
    if residual > INVERSION_TOLERANCE {
        return Err(TfaError::InconsistentTable { residual });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::GaussianEnsemble;
    use crate::tf::{phase_aligned_residual, DEFAULT_TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basic_pairs() {
        let (f, g) = make_extremal_pair(&ExtremalSpec::basic(4, 1, 0).unwrap()).unwrap();
        assert_eq!(g, Signal::delta(4, 0));
        assert_eq!(f, g);
        let (ok, s) = verify_extremal(&f, &g, DEFAULT_TAU).unwrap();
        assert!(ok);
        assert_eq!(s, SupportSet::from_pairs(4, (0..4).map(|k| (0, k))));

        let (f, g) = make_extremal_pair(&ExtremalSpec::basic(4, 4, 0).unwrap()).unwrap();
        assert_eq!(g, Signal::ones(4));
        let (ok, s) = verify_extremal(&f, &g, DEFAULT_TAU).unwrap();
        assert!(ok);
        assert_eq!(s, SupportSet::from_pairs(4, (0..4).map(|j| (j, 0))));

        let (f, g) = make_extremal_pair(&ExtremalSpec::basic(4, 2, 1).unwrap()).unwrap();
        let want = Signal::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(g, want);
        let (ok, s) = verify_extremal(&f, &g, DEFAULT_TAU).unwrap();
        assert!(ok);
        assert_eq!(s, SupportSet::from_pairs(4, [(0, 0), (0, 2), (2, 1), (2, 3)]));
    }

    #[test]
    fn spec_validation() {
        assert!(ExtremalSpec::basic(4, 3, 0).is_err());
        assert!(ExtremalSpec::basic(4, 2, 2).is_err());
        let o = PhasePoint::origin(4);
        assert!(ExtremalSpec::new(4, 2, 0, o, o, c(0.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(ExtremalSpec::new(4, 2, 0, PhasePoint::origin(3), o, c(1.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn predicted_supports() {
        let spec = ExtremalSpec::basic(4, 2, 1).unwrap();
        assert_eq!(predicted_support(&spec), SupportSet::from_pairs(4, [(0, 0), (0, 2), (2, 1), (2, 3)]));
        let one = c(1.0, 0.0);
        let shifted =
            ExtremalSpec::new(4, 2, 1, PhasePoint::origin(4), PhasePoint::new(4, 1, 0), one, one).unwrap();
        assert_eq!(
            predicted_support(&shifted),
            SupportSet::from_pairs(4, [(1, 0), (1, 2), (3, 1), (3, 3)])
        );
        let mu = PhasePoint::new(6, 2, 5);
        let full = ExtremalSpec::new(6, 6, 4, PhasePoint::origin(6), mu, one, one).unwrap();
        let want = SupportSet::from_pairs(6, (0..6).map(|m| (m, m * 4))).translate(mu);
        assert_eq!(predicted_support(&full), want);
    }

    #[test]
    fn perturbed_pairs_are_not_extremal() {
        let spec = ExtremalSpec::basic(12, 4, 1).unwrap();
        let (_, g) = make_extremal_pair(&spec).unwrap();
        for seed in 0..100 {
            let noise = GaussianEnsemble::new(seed).raw_signal(12).scale(c(1e-3, 0.0));
            let f = g.add(&noise).unwrap();
            let (ok, s) = verify_extremal(&f, &g, DEFAULT_TAU).unwrap();
            assert!(!ok);
            assert!(s.len() > 12);
        }
    }

    #[test]
    fn two_point_indicator_is_not_extremal() {
        let h = Signal::indicator(4, |l| l < 2);
        let (ok, s) = verify_extremal(&h, &h, DEFAULT_TAU).unwrap();
        assert!(!ok);
        assert!(s.len() > 4);
        assert!(matches!(
            classify_extremal(&h, &h, DEFAULT_TAU),
            Err(TfaError::NotExtremal { bound: 4, .. })
        ));
        assert_eq!(verify_extremal(&Signal::zeros(4), &h, DEFAULT_TAU), Err(TfaError::ZeroSignal));
    }

    #[test]
    fn classify_delta() {
        let d = Signal::delta(4, 0);
        let (spec, trace) = classify_extremal(&d, &d, DEFAULT_TAU).unwrap();
        assert_eq!((spec.b(), spec.p()), (1, 0));
        assert_eq!(spec.mu(), PhasePoint::origin(4));
        assert_eq!(trace.j1, 0);
    }

    #[test]
    fn classify_round_trip_small() {
        let mut ens = GaussianEnsemble::new(5);
        for n in 1..=12 {
            for sub in crate::group::enumerate_order_n_subgroups(n).unwrap() {
                for _ in 0..3 {
                    let spec = ExtremalSpec::new(
                        n,
                        sub.b(),
                        sub.p(),
                        ens.phase_point(n),
                        ens.phase_point(n),
                        ens.nonzero_scalar(),
                        ens.nonzero_scalar(),
                    )
                    .unwrap();
                    let (f, g) = make_extremal_pair(&spec).unwrap();
                    let (found, trace) = classify_extremal(&f, &g, DEFAULT_TAU).unwrap();
                    assert_eq!((found.b(), found.p()), (spec.b(), spec.p()));
                    assert!(sub.points().contains(&(found.mu() - spec.mu())));
                    assert!(trace.residual_g <= CLASSIFY_TOLERANCE);
                    assert!(trace.residual_f <= CLASSIFY_TOLERANCE);
                    assert!(trace.gamma.support(DEFAULT_TAU).iter().all(|l| l % sub.a() == 0));
                    // The canonical spec rebuilds the inputs.
                    let (f2, g2) = make_extremal_pair(&found).unwrap();
                    assert!(g2.max_abs_diff(&g).unwrap() <= 1e-10 * g.max_abs());
                    assert!(f2.max_abs_diff(&f).unwrap() <= 1e-10 * f.max_abs());
                }
            }
        }
    }

    #[test]
    fn reconstruct_examples() {
        let d = Signal::delta(4, 2);
        let back = reconstruct_from_autostft(&stft(&d, &d).unwrap(), DEFAULT_TAU).unwrap();
        assert!(phase_aligned_residual(&d, &back).unwrap() < 1e-15);

        assert!(reconstruct_from_autostft(&StftTable::zeros(5), DEFAULT_TAU).unwrap().is_zero());

        let mut ens = GaussianEnsemble::new(9);
        for n in 1..=16 {
            let f = ens.signal(n);
            let back = reconstruct_from_autostft(&stft(&f, &f).unwrap(), DEFAULT_TAU).unwrap();
            assert!(phase_aligned_residual(&f, &back).unwrap() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn reconstruct_rejects_cross_tables() {
        let mut ens = GaussianEnsemble::new(10);
        let f = ens.signal(6);
        let g = ens.signal(6);
        assert!(matches!(
            reconstruct_from_autostft(&stft(&f, &g).unwrap(), DEFAULT_TAU),
            Err(TfaError::InconsistentTable { .. })
        ));
    }

    #[test]
    fn spec_json_shape() {
        let spec = ExtremalSpec::new(
            4,
            2,
            1,
            PhasePoint::new(4, 1, 3),
            PhasePoint::new(4, 0, 2),
            c(1.0, 0.0),
            c(0.0, 2.0),
        )
        .unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"b":2,"p":1,"lambda":[1,3],"mu":[0,2],"c1":[1.0,0.0],"c2":[0.0,2.0]}"#
        );
        assert_eq!(serde_json::from_str::<ExtremalSpec>(&json).unwrap(), spec);
        assert!(serde_json::from_str::<ExtremalSpec>(
            r#"{"n":4,"b":3,"p":0,"lambda":[0,0],"mu":[0,0],"c1":[1,0],"c2":[1,0]}"#
        )
        .is_err());
    }
}

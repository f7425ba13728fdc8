use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use tfa_core::abelian::{
    abelian_coset_check, abelian_weak_trials, abelian_weak_uncertainty_check, product_subgroup_indicators,
    FiniteAbelianGroup, GroupSignal,
};
use tfa_core::extremal::{classify_extremal, make_extremal_pair, predicted_support, verify_extremal};
use tfa_core::group::{divisors, enumerate_order_n_subgroups};
use tfa_core::io::to_json_string_pretty;
use tfa_core::tf::{stft, tf_shift};
use tfa_core::uncertainty::{
    donoho_stark_check, donoho_stark_trials, exhaustive_small_scan, is_prime, tao_check, tao_trials,
    weak_uncertainty_trials, ScanFilter,
};
use tfa_core::{Complex64, ExtremalSpec, PhasePoint, Signal, TfaError};

use crate::{Command, Common, Ensemble};

/// Largest Parseval residual `stft` accepts.
const PARSEVAL_LIMIT: f64 = 1e-9;

pub struct Outcome {
    pub code: u8,
    pub payload: String,
}

impl Outcome {
    fn new(ok: bool, payload: &Value) -> Self {
        Self { code: if ok { 0 } else { 1 }, payload: to_json_string_pretty(payload) }
    }
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Stft { n, f, g, out, common } => cmd_stft(n, &f, &g, out.as_deref(), &common),
        Command::Extremal { n, b, p, lambda, mu, c1, c2, out_dir, common } => {
            let lambda = parse_point(n, lambda.as_deref())?;
            let mu = parse_point(n, mu.as_deref())?;
            let c1 = parse_complex(c1.as_deref())?;
            let c2 = parse_complex(c2.as_deref())?;
            cmd_extremal(n, b, p, lambda, mu, c1, c2, out_dir.as_deref(), &common)
        }
        Command::Classify { f, g, common } => cmd_classify(&f, &g, &common),
        Command::Verify { n, ensemble, common } => cmd_verify(n, &ensemble, &common),
        Command::Ds { n, ensemble, common } => cmd_ds(n, &ensemble, &common),
        Command::Tao { prime, ensemble, common } => cmd_tao(prime, &ensemble, &common),
        Command::Subgroups { n, summary } => cmd_subgroups(n, summary),
        Command::Scan { n, alphabet, restricted, common } => cmd_scan(n, &alphabet, restricted, &common),
        Command::AbelianVerify { group, ensemble, common } => cmd_abelian(&group, &ensemble, &common),
    }
}

fn seed(ensemble: &Ensemble) -> Result<u64> {
    match std::env::var("TFA_SEED") {
        Ok(s) => s.trim().parse().with_context(|| format!("TFA_SEED={s:?} is not an unsigned integer")),
        Err(_) => Ok(ensemble.seed),
    }
}

fn check_tau(common: &Common) -> Result<f64> {
    if !(common.tau > 0.0 && common.tau < 1.0) {
        bail!("--tau must lie in (0, 1)");
    }
    Ok(common.tau)
}

fn read_signal(path: &Path) -> Result<Signal> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing signal {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))
}

fn parse_pair<T: std::str::FromStr>(text: &str, what: &str) -> Result<(T, T)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => Ok((
            x.parse().map_err(|_| anyhow!("bad {what} {text:?}"))?,
            y.parse().map_err(|_| anyhow!("bad {what} {text:?}"))?,
        )),
        _ => bail!("{what} must be two comma-separated numbers, got {text:?}"),
    }
}

fn parse_point(n: usize, text: Option<&str>) -> Result<PhasePoint> {
    if n == 0 {
        bail!("--n must be positive");
    }
    match text {
        None => Ok(PhasePoint::origin(n)),
        Some(t) => {
            let (j, k) = parse_pair::<i64>(t, "point")?;
            Ok(PhasePoint::new(n, j, k))
        }
    }
}

fn parse_complex(text: Option<&str>) -> Result<Complex64> {
    match text {
        None => Ok(Complex64::new(1.0, 0.0)),
        Some(t) => {
            let (re, im) = parse_pair::<f64>(t, "complex number")?;
            Ok(Complex64::new(re, im))
        }
    }
}

fn parse_alphabet(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim) {
        let z = match tok {
            "0" => Complex64::new(0.0, 0.0),
            "1" => Complex64::new(1.0, 0.0),
            "-1" => Complex64::new(-1.0, 0.0),
            "i" => Complex64::new(0.0, 1.0),
            "-i" => Complex64::new(0.0, -1.0),
            other => bail!("unknown alphabet entry {other:?}; use 0, 1, -1, i, -i"),
        };
        if !out.contains(&z) {
            out.push(z);
        }
    }
    Ok(out)
}

fn points_json(points: &[PhasePoint]) -> Value {
    json!(points.iter().map(|p| p.as_pair()).collect::<Vec<_>>())
}

fn cmd_stft(n: usize, f: &Path, g: &Path, out: Option<&Path>, common: &Common) -> Result<Outcome> {
    let tau = check_tau(common)?;
    let f = read_signal(f)?;
    let g = read_signal(g)?;
    if f.n() != n || g.n() != n {
        bail!("signal lengths {} and {} do not match --n {n}", f.n(), g.n());
    }
    let table = stft(&f, &g)?;
    let energy = f.norm_sq() * g.norm_sq();
    let parseval_residual = if energy == 0.0 {
        table.norm_sq()
    } else {
        (table.norm_sq() - energy).abs() / energy
    };
    let support = table.support(tau);
    if let Some(path) = out {
        write_file(path, &table.to_csv_string())?;
    }
    let payload = json!({
        "n": n,
        "support_size": support.len(),
        "support": points_json(support.points()),
        "parseval_residual": parseval_residual,
    });
    Ok(Outcome::new(parseval_residual <= PARSEVAL_LIMIT, &payload))
}

#[allow(clippy::too_many_arguments)]
fn cmd_extremal(
    n: usize,
    b: usize,
    p: usize,
    lambda: PhasePoint,
    mu: PhasePoint,
    c1: Complex64,
    c2: Complex64,
    out_dir: Option<&Path>,
    common: &Common,
) -> Result<Outcome> {
    let tau = check_tau(common)?;
    let spec = ExtremalSpec::new(n, b, p, lambda, mu, c1, c2)?;
    let (f, g) = make_extremal_pair(&spec)?;
    let (minimal, support) = verify_extremal(&f, &g, tau)?;
    let predicted = predicted_support(&spec);
    let matches = support == predicted;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = |name: &str| -> PathBuf { dir.join(name) };
        write_file(&path("f.json"), &to_json_string_pretty(&f))?;
        write_file(&path("g.json"), &to_json_string_pretty(&g))?;
        write_file(&path("spec.json"), &to_json_string_pretty(&spec))?;
    }
    let payload = json!({
        "spec": serde_json::to_value(spec)?,
        "support_size": support.len(),
        "support": points_json(support.points()),
        "matches_prediction": matches,
        "extremal": minimal,
        "f": serde_json::to_value(&f)?,
        "g": serde_json::to_value(&g)?,
    });
    Ok(Outcome::new(minimal && matches, &payload))
}

fn cmd_classify(f: &Path, g: &Path, common: &Common) -> Result<Outcome> {
    let tau = check_tau(common)?;
    let f = read_signal(f)?;
    let g = read_signal(g)?;
    if f.n() != g.n() {
        bail!("signal lengths {} and {} differ", f.n(), g.n());
    }
    match classify_extremal(&f, &g, tau) {
        Ok((spec, trace)) => {
            let payload = json!({
                "extremal": true,
                "b": spec.b(),
                "p": spec.p(),
                "a": spec.a(),
                "mu": spec.mu().as_pair(),
                "spec": serde_json::to_value(spec)?,
                "trace": {
                    "j0": trace.j0,
                    "k1": trace.k1,
                    "j1": trace.j1,
                    "gamma_table_residual": trace.gamma_table_residual,
                    "residual_g": trace.residual_g,
                    "residual_f": trace.residual_f,
                },
            });
            Ok(Outcome::new(true, &payload))
        }
        Err(TfaError::NotExtremal { support_size, bound }) => Ok(Outcome::new(
            false,
            &json!({"extremal": false, "support_size": support_size, "bound": bound}),
        )),
        Err(e @ TfaError::NumericallyAmbiguous(_)) => Ok(Outcome::new(
            false,
            &json!({"extremal": false, "error": e.to_string()}),
        )),
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify(n: usize, ensemble: &Ensemble, common: &Common) -> Result<Outcome> {
    let tau = check_tau(common)?;
    if n == 0 {
        bail!("--n must be positive");
    }
    let summary = weak_uncertainty_trials(n, ensemble.trials, seed(ensemble)?, tau);
    Ok(Outcome::new(summary.passed(), &serde_json::to_value(&summary)?))
}

fn cmd_ds(n: usize, ensemble: &Ensemble, common: &Common) -> Result<Outcome> {
    let tau = check_tau(common)?;
    if n == 0 {
        bail!("--n must be positive");
    }
    let summary = donoho_stark_trials(n, ensemble.trials, seed(ensemble)?, tau);
    let mut checked = 0;
    let mut failures = 0;
    for a in divisors(n)? {
        let h = Signal::subgroup_indicator(n, a)?;
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let shifted = tf_shift(&h, PhasePoint::new(n, j, k))?;
                checked += 1;
                failures += usize::from(!donoho_stark_check(&shifted, tau)?.equality);
            }
        }
    }
    let payload = json!({
        "random": serde_json::to_value(&summary)?,
        "subgroup_indicators": {"checked": checked, "non_equality": failures},
        "violations": summary.violations,
    });
    Ok(Outcome::new(summary.passed() && failures == 0, &payload))
}

fn cmd_tao(prime: usize, ensemble: &Ensemble, common: &Common) -> Result<Outcome> {
    let tau = check_tau(common)?;
    if !is_prime(prime) {
        bail!("--prime {prime} is not prime");
    }
    let summary = tao_trials(prime, ensemble.trials, seed(ensemble)?, tau)?;
    let delta = tao_check(&Signal::delta(prime, 0), tau)?;
    let constant = tao_check(&Signal::ones(prime), tau)?;
    let payload = json!({
        "random": serde_json::to_value(&summary)?,
        "delta_equality": delta.equality,
        "constant_equality": constant.equality,
        "violations": summary.violations,
    });
    Ok(Outcome::new(summary.passed() && delta.equality && constant.equality, &payload))
}

fn cmd_subgroups(n: usize, summary: bool) -> Result<Outcome> {
    let specs = enumerate_order_n_subgroups(n)?;
    let sigma: usize = divisors(n)?.iter().sum();
    let list: Vec<Value> = specs
        .iter()
        .map(|s| {
            let mut v = json!({"b": s.b(), "p": s.p(), "a": s.a()});
            if !summary {
                v["points"] = points_json(s.points().points());
            }
            v
        })
        .collect();
    let payload = json!({"n": n, "count": specs.len(), "sigma": sigma, "subgroups": list});
    Ok(Outcome::new(specs.len() == sigma, &payload))
}

fn cmd_scan(n: usize, alphabet: &str, restricted: bool, common: &Common) -> Result<Outcome> {
    let tau = check_tau(common)?;
    let alphabet = parse_alphabet(alphabet)?;
    let filter = if restricted { ScanFilter::CosetSupportedEqualNorm } else { ScanFilter::All };
    let report = exhaustive_small_scan(n, &alphabet, filter, tau)?;
    Ok(Outcome::new(report.passed(), &serde_json::to_value(&report)?))
}

fn cmd_abelian(group: &str, ensemble: &Ensemble, common: &Common) -> Result<Outcome> {
    let tau = check_tau(common)?;
    let group = FiniteAbelianGroup::parse(group)?;
    let summary = abelian_weak_trials(&group, ensemble.trials, seed(ensemble)?, tau);

    // Structured equality cases: deltas and product-subgroup indicators.
    let mut candidates = product_subgroup_indicators(&group);
    candidates.push(GroupSignal::delta(&group, &group.element(0))?);
    let mut equality_cases = 0;
    let mut coset_failures = 0;
    let mut violations = summary.violations;
    for h in &candidates {
        let report = abelian_weak_uncertainty_check(h, h, tau)?;
        violations += usize::from(!report.holds);
        if report.equality {
            equality_cases += 1;
            coset_failures += usize::from(abelian_coset_check(h, h, tau).is_err());
        }
    }
    let payload = json!({
        "group": serde_json::to_value(&group)?,
        "random": serde_json::to_value(&summary)?,
        "structured": {
            "checked": candidates.len(),
            "equality_cases": equality_cases,
            "coset_failures": coset_failures,
        },
        "violations": violations,
    });
    Ok(Outcome::new(violations == 0 && coset_failures == 0 && summary.passed(), &payload))
}

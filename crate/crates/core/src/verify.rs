//! Corpus runner comparing closed forms against the quadrature oracle.

use crate::closedform::{evaluate_target, validity, EvalResult, Example3Variant, Family, IntegralSpec, Target};
use crate::error::Error;
use crate::quad::{self, QuadResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 0xD1CE;

/// Family names accepted in corpora and on the command line.
pub const FAMILY_NAMES: [&str; 10] = [
    "I1",
    "I2",
    "I3",
    "I4",
    "trig-cos-cosh",
    "trig-sin-sinh",
    "trig-sin-cosh",
    "ex3-cosh-sinh2",
    "ex3-sinh-cosh2",
    "sinh-pow-cosh-pow",
];

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed corpus: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid case {id}: {reason}")]
    Invalid { id: String, reason: String },
}

/// One corpus entry. Numeric fields accept JSON numbers or decimal strings.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseRecord {
    pub id: String,
    pub family: String,
    #[serde(default)]
    pub m: u32,
    #[serde(default = "one", deserialize_with = "real")]
    pub mu: f64,
    #[serde(default = "one", deserialize_with = "real")]
    pub nu: f64,
    #[serde(default, deserialize_with = "real")]
    pub a: f64,
    #[serde(default = "one", deserialize_with = "real")]
    pub b: f64,
    #[serde(default, deserialize_with = "real")]
    pub beta: f64,
    #[serde(default, deserialize_with = "opt_real")]
    pub expected: Option<f64>,
    #[serde(default)]
    pub gr_ref: Option<String>,
    #[serde(default, deserialize_with = "opt_real")]
    pub tol: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrText {
    Num(f64),
    Text(String),
}

impl NumOrText {
    fn value<E: de::Error>(self) -> Result<f64, E> {
        match self {
            NumOrText::Num(x) => Ok(x),
            NumOrText::Text(s) => s.trim().parse().map_err(|_| E::custom(format!("not a number: {s:?}"))),
        }
    }
}

fn real<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    NumOrText::deserialize(d)?.value()
}

fn opt_real<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    Option::<NumOrText>::deserialize(d)?.map(NumOrText::value).transpose()
}

impl CaseRecord {
    pub fn new(id: impl Into<String>, family: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            family: family.into(),
            m: 0,
            mu: 1.0,
            nu: 1.0,
            a: 0.0,
            b: 1.0,
            beta: 0.0,
            expected: None,
            gr_ref: None,
            tol: None,
        }
    }

    pub fn from_spec(id: impl Into<String>, spec: &IntegralSpec) -> Self {
        let family = if spec.trig {
            match spec.family {
                Family::CoshOverCosh => "trig-cos-cosh",
                Family::SinhOverSinh => "trig-sin-sinh",
                _ => "trig-sin-cosh",
            }
        } else {
            spec.family.label()
        };
        Self {
            m: spec.m,
            mu: spec.mu,
            nu: spec.nu,
            a: spec.a,
            b: spec.b,
            beta: spec.beta_weight,
            ..Self::new(id, family)
        }
    }

    pub fn target(&self) -> Result<Target, String> {
        make_target(&self.family, self.m, self.mu, self.nu, self.a, self.b, self.beta)
    }
}

/// Builds the integral named by `family` from its parameters.
pub fn make_target(family: &str, m: u32, mu: f64, nu: f64, a: f64, b: f64, beta: f64) -> Result<Target, String> {
    if let Some(f) = Family::from_label(family) {
        return Ok(Target::Spec(IntegralSpec::new(f, m, mu, nu, a, b).with_beta(beta)));
    }
    let trig = |f| Ok(Target::Spec(IntegralSpec::new(f, 1, mu, nu, a, b).with_beta(beta).with_trig()));
    match family {
        "trig-cos-cosh" => trig(Family::CoshOverCosh),
        "trig-sin-sinh" => trig(Family::SinhOverSinh),
        "trig-sin-cosh" => trig(Family::SinhOverCosh),
        "ex3-cosh-sinh2" => Ok(Target::Example3(Example3Variant::CoshOverSinh2, mu)),
        "ex3-sinh-cosh2" => Ok(Target::Example3(Example3Variant::SinhOverCosh2, mu)),
        "sinh-pow-cosh-pow" => Ok(Target::BetaPower { mu, nu }),
        other => Err(format!("unknown family {other:?}; expected one of {}", FAMILY_NAMES.join(", "))),
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CaseRecord>, CorpusError> {
    let cases: Vec<CaseRecord> = serde_json::from_str(text)?;
    let mut seen = HashSet::new();
    for c in &cases {
        if !seen.insert(c.id.as_str()) {
            return Err(CorpusError::Invalid { id: c.id.clone(), reason: "duplicate id".into() });
        }
        if let Some(t) = c.tol {
            if !(t > 0.0) {
                return Err(CorpusError::Invalid {
                    id: c.id.clone(),
                    reason: format!("tol must be positive, got {t}"),
                });
            }
        }
        c.target().map_err(|reason| CorpusError::Invalid { id: c.id.clone(), reason })?;
    }
    Ok(cases)
}

pub fn load_corpus(path: &Path) -> Result<Vec<CaseRecord>, CorpusError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
    parse_corpus(&text)
}

/// Uniform draws of convergent integrals over all four families with
/// m ∈ {0..3}, μ ∈ {1, 1.5, 2, 3}, keeping ν and a/b at least 0.05 inside
/// the convergence region.
pub fn sample_specs(seed: u64, n: usize) -> Vec<IntegralSpec> {
    const MARGIN: f64 = 0.05;
    const MUS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let family = Family::ALL[rng.gen_range(0..4)];
        let m: u32 = rng.gen_range(0..=3);
        let mu = MUS[rng.gen_range(0..MUS.len())];
        let b: f64 = rng.gen_range(0.5..2.0);
        let zero_order = if family.sinh_numerator() { m as f64 } else { 0.0 };
        let nu_cap = family.sinh_denominator().then_some(mu + zero_order - MARGIN);
        let rho_max = match nu_cap {
            Some(cap) if m > 0 => ((cap - 3.0 * MARGIN) / m as f64).min(0.95),
            _ => 0.95,
        };
        if rho_max <= 0.1 {
            continue;
        }
        let rho = rng.gen_range(0.1..rho_max);
        let lo = m as f64 * rho + MARGIN;
        let hi = nu_cap.unwrap_or(lo + 2.5);
        let nu = rng.gen_range(lo..hi);
        let spec = IntegralSpec::new(family, m, mu, nu, rho * b, b);
        if validity(&spec).convergent {
            out.push(spec);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub tol: f64,
    pub seed: u64,
    pub jobs: Option<usize>,
    /// Number of sampled cases appended to the corpus.
    pub random: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, seed: DEFAULT_SEED, jobs: None, random: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub id: String,
    pub family: String,
    pub gr_ref: Option<String>,
    pub tol: f64,
    pub closed: Option<f64>,
    pub est_error: Option<f64>,
    pub formula_id: Option<String>,
    pub warnings: Vec<String>,
    pub oracle: Option<f64>,
    pub oracle_err: Option<f64>,
    pub n_evals: Option<usize>,
    pub diff: Option<f64>,
    pub expected: Option<f64>,
    pub expected_diff: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
    pub message: Option<String>,
    pub closed_seconds: f64,
    pub oracle_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_diff: Option<f64>,
    pub worst_id: Option<String>,
    pub seed: u64,
    pub random_cases: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub cases: Vec<CaseOutcome>,
    pub summary: Summary,
}

fn within(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol.max(tol * y.abs())
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

/// Evaluates one case with both engines; never panics.
pub fn run_case(case: &CaseRecord, default_tol: f64) -> CaseOutcome {
    let tol = case.tol.unwrap_or(default_tol);
    let mut out = CaseOutcome {
        id: case.id.clone(),
        family: case.family.clone(),
        gr_ref: case.gr_ref.clone(),
        tol,
        closed: None,
        est_error: None,
        formula_id: None,
        warnings: Vec::new(),
        oracle: None,
        oracle_err: None,
        n_evals: None,
        diff: None,
        expected: case.expected,
        expected_diff: None,
        pass: false,
        error: None,
        message: None,
        closed_seconds: 0.0,
        oracle_seconds: 0.0,
    };
    let target = match case.target() {
        Ok(t) => t,
        Err(msg) => {
            out.error = Some("ParseError".into());
            out.message = Some(msg);
            return out;
        }
    };
    let fail = |out: &mut CaseOutcome, name: &str, msg: String| {
        if out.error.is_none() {
            out.error = Some(name.to_string());
            out.message = Some(msg);
        }
    };

    let t0 = Instant::now();
    let closed: std::thread::Result<crate::Result<EvalResult>> =
        panic::catch_unwind(AssertUnwindSafe(|| evaluate_target(&target)));
    out.closed_seconds = t0.elapsed().as_secs_f64();
    match closed {
        Ok(Ok(r)) => {
            out.closed = Some(r.value);
            out.est_error = Some(r.est_error);
            out.formula_id = Some(r.formula_id);
            out.warnings = r.warnings;
        }
        Ok(Err(e)) => fail(&mut out, e.name(), e.to_string()),
        Err(p) => fail(&mut out, "Panic", panic_message(p)),
    }

    let t0 = Instant::now();
    let oracle: std::thread::Result<crate::Result<QuadResult>> =
        panic::catch_unwind(AssertUnwindSafe(|| quad::oracle(&target, quad::DEFAULT_TOL)));
    out.oracle_seconds = t0.elapsed().as_secs_f64();
    match oracle {
        Ok(Ok(q)) => {
            out.oracle = Some(q.value);
            out.oracle_err = Some(q.err_est);
            out.n_evals = Some(q.n_evals);
        }
        Ok(Err(e)) => {
            if let Error::NoConvergence { value, err, n_evals } = e {
                out.oracle = Some(value);
                out.oracle_err = Some(err);
                out.n_evals = Some(n_evals);
            }
            fail(&mut out, e.name(), format!("oracle: {e}"));
        }
        Err(p) => fail(&mut out, "Panic", format!("oracle: {}", panic_message(p))),
    }

    if let (Some(c), Some(o)) = (out.closed, out.oracle) {
        out.diff = Some((c - o).abs());
        let mut ok = within(c, o, tol);
        if let Some(e) = case.expected {
            out.expected_diff = Some((c - e).abs());
            ok &= within(c, e, tol);
        }
        out.pass = ok && out.error.is_none();
    }
    out
}

/// Runs every case (plus `options.random` sampled ones) and assembles a
/// report sorted by case id.
pub fn run_cases(cases: &[CaseRecord], options: &SuiteOptions) -> Report {
    let mut all: Vec<CaseRecord> = cases.to_vec();
    for (i, spec) in sample_specs(options.seed, options.random).iter().enumerate() {
        all.push(CaseRecord::from_spec(format!("random-{i:04}"), spec));
    }
    let tol = options.tol;
    let run = || all.par_iter().map(|c| run_case(c, tol)).collect::<Vec<_>>();
    let mut outcomes = match options.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => all.iter().map(|c| run_case(c, tol)).collect(),
        },
        None => run(),
    };
    outcomes.sort_by(|x, y| x.id.cmp(&y.id));
    let passed = outcomes.iter().filter(|c| c.pass).count();
    let worst = outcomes
        .iter()
        .filter_map(|c| c.diff.map(|d| (d / c.oracle.unwrap_or(1.0).abs().max(1.0), c)))
        .max_by(|x, y| x.0.total_cmp(&y.0));
    let summary = Summary {
        total: outcomes.len(),
        passed,
        failed: outcomes.len() - passed,
        worst_diff: worst.map(|w| w.1.diff.unwrap_or(0.0)),
        worst_id: worst.map(|w| w.1.id.clone()),
        seed: options.seed,
        random_cases: options.random,
    };
    Report { cases: outcomes, summary }
}

pub fn run_suite(corpus_path: &Path, options: &SuiteOptions) -> Result<Report, CorpusError> {
    let cases = load_corpus(corpus_path)?;
    Ok(run_cases(&cases, options))
}

/// f64 printed with 17 significant digits; non-finite values become null.
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Serialize)]
struct CaseJson<'a> {
    id: &'a str,
    family: &'a str,
    gr_ref: Option<&'a str>,
    pass: bool,
    tol: Num,
    closed: Option<Num>,
    oracle: Option<Num>,
    diff: Option<Num>,
    expected: Option<Num>,
    expected_diff: Option<Num>,
    formula_id: Option<&'a str>,
    est_error: Option<Num>,
    oracle_err: Option<Num>,
    n_evals: Option<usize>,
    warnings: &'a [String],
    error: Option<&'a str>,
    message: Option<&'a str>,
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    total: usize,
    passed: usize,
    failed: usize,
    worst_diff: Option<Num>,
    worst_id: Option<&'a str>,
    seed: u64,
    random_cases: usize,
}

#[derive(Serialize)]
struct TimingJson<'a> {
    id: &'a str,
    closed_seconds: Num,
    oracle_seconds: Num,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    summary: SummaryJson<'a>,
    cases: Vec<CaseJson<'a>>,
    timings: Vec<TimingJson<'a>>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Structured report. Timings live in their own trailing section so
    /// the rest is reproducible byte for byte.
    pub fn to_json(&self) -> String {
        let s = &self.summary;
        let doc = ReportJson {
            summary: SummaryJson {
                total: s.total,
                passed: s.passed,
                failed: s.failed,
                worst_diff: s.worst_diff.map(Num),
                worst_id: s.worst_id.as_deref(),
                seed: s.seed,
                random_cases: s.random_cases,
            },
            cases: self
                .cases
                .iter()
                .map(|c| CaseJson {
                    id: &c.id,
                    family: &c.family,
                    gr_ref: c.gr_ref.as_deref(),
                    pass: c.pass,
                    tol: Num(c.tol),
                    closed: c.closed.map(Num),
                    oracle: c.oracle.map(Num),
                    diff: c.diff.map(Num),
                    expected: c.expected.map(Num),
                    expected_diff: c.expected_diff.map(Num),
                    formula_id: c.formula_id.as_deref(),
                    est_error: c.est_error.map(Num),
                    oracle_err: c.oracle_err.map(Num),
                    n_evals: c.n_evals,
                    warnings: &c.warnings,
                    error: c.error.as_deref(),
                    message: c.message.as_deref(),
                })
                .collect(),
            timings: self
                .cases
                .iter()
                .map(|c| TimingJson {
                    id: &c.id,
                    closed_seconds: Num(c.closed_seconds),
                    oracle_seconds: Num(c.oracle_seconds),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let fmt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.15e}"));
        for c in &self.cases {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {:<24} {:<18} closed={} oracle={} diff={} [{}]",
                c.id,
                c.family,
                fmt(c.closed),
                fmt(c.oracle),
                c.diff.map_or_else(|| "-".to_string(), |d| format!("{d:.2e}")),
                c.formula_id.as_deref().unwrap_or("-"),
            ));
            if let Some(g) = &c.gr_ref {
                out.push_str(&format!(" G&R {g}"));
            }
            if let Some(e) = &c.error {
                out.push_str(&format!(" {e}: {}", c.message.as_deref().unwrap_or("")));
            }
            out.push('\n');
        }
        let s = &self.summary;
        if s.total == 0 {
            out.push_str("no cases to verify\n");
        }
        out.push_str(&format!("{} cases: {} passed, {} failed", s.total, s.passed, s.failed));
        if let (Some(d), Some(id)) = (s.worst_diff, &s.worst_id) {
            out.push_str(&format!("; worst |closed - oracle| = {d:.3e} ({id})"));
        }
        out.push_str(&format!("; seed {:#x}\n", s.seed));
        out
    }
}

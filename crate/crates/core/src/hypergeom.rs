//! Generalised hypergeometric series on the closed unit disk and the
//! classical closed-form summation theorems.

use crate::accel::{self, SeriesSum, DEFAULT_TERM_BUDGET};
use crate::error::{Error, Result};
use crate::specfun::{gamma_ratio, ln_gamma_real};

/// (a)_n = a(a+1)...(a+n-1).
pub fn pochhammer(a: f64, n: usize) -> f64 {
    if n <= 170 {
        let mut p = 1.0;
        for k in 0..n {
            p *= a + k as f64;
        }
        return p;
    }
    let (l, s) = ln_pochhammer(a, n);
    s * l.exp()
}

/// (ln|(a)_n|, sign((a)_n)). The sign is 0 when the symbol vanishes.
pub fn ln_pochhammer(a: f64, n: usize) -> (f64, f64) {
    if is_nonpositive_integer(a) && (n as f64) > -a {
        return (f64::NEG_INFINITY, 0.0);
    }
    if n <= 2000 || is_nonpositive_integer(a) {
        let mut l = 0.0;
        let mut s = 1.0;
        for k in 0..n {
            let f = a + k as f64;
            l += f.abs().ln();
            if f < 0.0 {
                s = -s;
            }
        }
        return (l, s);
    }
    match (ln_gamma_real(a + n as f64), ln_gamma_real(a)) {
        (Ok((la, sa)), Ok((lb, sb))) => (la - lb, sa * sb),
        _ => (f64::NAN, f64::NAN),
    }
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Parameters of pFq(α_1..α_p; β_1..β_q; z).
#[derive(Debug, Clone, PartialEq)]
pub struct ParamList {
    numerators: Vec<f64>,
    denominators: Vec<f64>,
    argument: f64,
}

impl ParamList {
    pub fn new(numerators: &[f64], denominators: &[f64], argument: f64) -> Result<Self> {
        if numerators.len() > denominators.len() + 1 {
            return Err(Error::UnsupportedRegion(format!(
                "{}F{} has zero radius of convergence",
                numerators.len(),
                denominators.len()
            )));
        }
        if let Some(b) = denominators.iter().find(|b| is_nonpositive_integer(**b)) {
            return Err(Error::Pole(format!("denominator parameter {b} is a non-positive integer")));
        }
        if numerators.iter().chain(denominators).any(|x| !x.is_finite()) || !argument.is_finite() {
            return Err(Error::NonFinite("hypergeometric parameter".into()));
        }
        Ok(Self { numerators: numerators.to_vec(), denominators: denominators.to_vec(), argument })
    }

    pub fn numerators(&self) -> &[f64] {
        &self.numerators
    }

    pub fn denominators(&self) -> &[f64] {
        &self.denominators
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    /// Number of nonzero terms if the series terminates.
    pub fn terminating_length(&self) -> Option<usize> {
        self.numerators.iter().filter(|a| is_nonpositive_integer(**a)).map(|a| (-a) as usize + 1).min()
    }

    /// t_{n+1} / t_n.
    fn term_ratio(&self, n: usize) -> f64 {
        let n = n as f64;
        let mut r = self.argument / (n + 1.0);
        for a in &self.numerators {
            r *= a + n;
        }
        for b in &self.denominators {
            r /= b + n;
        }
        r
    }

    /// Coefficient sequence c_n with c_0 = 1; the series is Σ c_n z^n.
    fn coefficients(&self) -> impl FnMut(usize) -> f64 + '_ {
        let mut next = 0usize;
        let mut c = 1.0;
        move |n| {
            debug_assert_eq!(n, next);
            if n > 0 {
                c *= self.term_ratio(n - 1) / self.argument;
            }
            next = n + 1;
            c
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AbsolutelyConvergent,
    ConditionallyConvergent,
    Divergent,
    Entire,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceClass {
    /// Σβ − Σα.
    pub omega: f64,
    pub verdict: Verdict,
}

pub fn classify(params: &ParamList) -> ConvergenceClass {
    let omega = params.denominators.iter().sum::<f64>() - params.numerators.iter().sum::<f64>();
    let z = params.argument.abs();
    let verdict = if params.numerators.len() <= params.denominators.len() {
        Verdict::Entire
    } else if z < 1.0 || (z == 1.0 && omega > 0.0) {
        Verdict::AbsolutelyConvergent
    } else if z == 1.0 && params.argument != 1.0 && omega > -1.0 {
        Verdict::ConditionallyConvergent
    } else {
        Verdict::Divergent
    };
    ConvergenceClass { omega, verdict }
}

/// pFq(params) to relative tolerance `tol`.
pub fn pfq(params: &ParamList, tol: f64) -> Result<f64> {
    pfq_sum(params, tol, DEFAULT_TERM_BUDGET).map(|s| s.value)
}

/// pFq with an explicit term budget, returning the error estimate.
pub fn pfq_sum(params: &ParamList, tol: f64, budget: usize) -> Result<SeriesSum> {
    let z = params.argument;
    if let Some(len) = params.terminating_length() {
        if len <= budget.max(1) {
            return Ok(finite_sum(params, len));
        }
    }
    if z == 0.0 {
        return Ok(SeriesSum { value: 1.0, err: 0.0, terms: 1 });
    }
    let class = classify(params);
    match class.verdict {
        Verdict::Divergent => Err(Error::DivergentSeries(format!(
            "{}F{} at z = {z} with omega = {}",
            params.numerators.len(),
            params.denominators.len(),
            class.omega
        ))),
        Verdict::Entire => direct_sum(params, 0.0, tol, budget),
        Verdict::AbsolutelyConvergent | Verdict::ConditionallyConvergent if z.abs() < 1.0 => {
            direct_sum(params, z.abs(), tol, budget)
        }
        _ if z == -1.0 => accel::euler_alternating(params.coefficients(), tol, budget),
        _ => accel::richardson_power_sum(params.coefficients(), class.omega + 1.0, 16, tol, budget),
    }
}

/// pFq at z = −1 by Euler summation, also where the series diverges.
///
/// The only finite singular point of a (q+1)Fq is z = 1, and Euler summation
/// of Σ c_n (−1)^n reproduces the analytic continuation to z = −1 for any ω.
/// Other arguments are passed to [`pfq`].
pub fn pfq_minus1_continued(params: &ParamList, tol: f64) -> Result<f64> {
    if params.argument != -1.0 || params.terminating_length().is_some() {
        return pfq(params, tol);
    }
    accel::euler_alternating(params.coefficients(), tol, DEFAULT_TERM_BUDGET).map(|s| s.value)
}

fn finite_sum(params: &ParamList, len: usize) -> SeriesSum {
    let mut acc = accel::CompensatedSum::default();
    let mut t = 1.0f64;
    let mut mag = 0.0f64;
    for n in 0..len {
        acc.add(t);
        mag = mag.max(t.abs());
        t *= params.term_ratio(n);
    }
    SeriesSum { value: acc.value(), err: 2.0 * f64::EPSILON * mag * len as f64, terms: len }
}

fn direct_sum(params: &ParamList, ratio_bound: f64, tol: f64, budget: usize) -> Result<SeriesSum> {
    let mut t = 1.0f64;
    accel::geometric_sum(
        |n| {
            if n > 0 {
                t *= params.term_ratio(n - 1);
            }
            t
        },
        ratio_bound,
        tol,
        budget,
    )
}

/// 2F1(a, b; c; −1) through the Pfaff transformation to argument 1/2.
pub fn gauss_2f1_minus1(a: f64, b: f64, c: f64, tol: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole(format!("2F1 lower parameter {c} is a non-positive integer")));
    }
    if a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    // 2F1(a,b;c;-1) = 2^{-a} 2F1(a, c-b; c; 1/2) = 2^{-b} 2F1(b, c-a; c; 1/2)
    let candidates = [(a, c - b), (b, c - a)];
    let terminates = |p: &(f64, f64)| is_nonpositive_integer(p.0) || is_nonpositive_integer(p.1);
    let (x, y) = candidates.iter().copied().find(terminates).unwrap_or_else(|| {
        if candidates[0].0.abs() + candidates[0].1.abs() <= candidates[1].0.abs() + candidates[1].1.abs() {
            candidates[0]
        } else {
            candidates[1]
        }
    });
    let params = ParamList::new(&[x, y], &[c], 0.5)?;
    let s = pfq_sum(&params, tol, DEFAULT_TERM_BUDGET)?;
    Ok(2f64.powf(-x) * s.value)
}

/// Gauss: 2F1(α, β; γ; 1) = Γ(γ)Γ(γ−α−β) / (Γ(γ−α)Γ(γ−β)).
pub fn gauss_sum(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    let excess = gamma - alpha - beta;
    if !(excess > 0.0) {
        return Err(Error::Domain(format!("gamma - alpha - beta = {excess} must be positive")));
    }
    gamma_ratio(&[gamma, excess], &[gamma - alpha, gamma - beta])
}

/// Kummer: 2F1(α, β; 1+α−β; −1) = Γ(1+α−β)Γ(1+α/2) / (Γ(1+α)Γ(1+α/2−β)).
pub fn kummer_sum(alpha: f64, beta: f64) -> Result<f64> {
    gamma_ratio(&[1.0 + alpha - beta, 1.0 + alpha / 2.0], &[1.0 + alpha, 1.0 + alpha / 2.0 - beta])
}

/// 4F3(α, 1+α/2, β, γ; α/2, 1+α−β, 1+α−γ; −1)
/// = Γ(1+α−β)Γ(1+α−γ) / (Γ(1+α)Γ(1+α−β−γ)).
pub fn f43_sum(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    let margin = alpha / 2.0 - beta - gamma;
    if !(margin > -1.0) {
        return Err(Error::Domain(format!("alpha/2 - beta - gamma = {margin} must exceed -1")));
    }
    gamma_ratio(&[1.0 + alpha - beta, 1.0 + alpha - gamma], &[1.0 + alpha, 1.0 + alpha - beta - gamma])
}

/// Parameters of the very-well-poised 4F3 summed by [`f43_sum`].
pub fn f43_params(alpha: f64, beta: f64, gamma: f64) -> Result<ParamList> {
    ParamList::new(
        &[alpha, 1.0 + alpha / 2.0, beta, gamma],
        &[alpha / 2.0, 1.0 + alpha - beta, 1.0 + alpha - gamma],
        -1.0,
    )
}

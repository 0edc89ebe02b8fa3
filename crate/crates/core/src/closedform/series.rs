//! x^{μ−1}-weighted integrals for real μ > 0 via the double series
//!
//! 2^{ν−m} Γ(μ) Σ_n (∓1)^n (ν)_n/n! Σ_r (±1)^r C(m,r) (A_r + 2bn)^{−μ},
//! A_r = νb + (2r − m)a + β.

use super::binomial::{degenerate_numerator, zero_result, Degenerate};
use super::{binom, require_convergent, EvalResult, IntegralSpec};
use crate::accel::{euler_alternating, CompensatedSum, SeriesSum, DEFAULT_TERM_BUDGET};
use crate::error::{Error, Result};
use crate::hypergeom::{pfq, ParamList};
use crate::specfun::{gamma, hurwitz_zeta, BERNOULLI_EVEN};

const SERIES_TOL: f64 = 1e-14;
const CROSS_CHECK_TOL: f64 = 1e-8;

pub fn eval_section3_series(spec: &IntegralSpec) -> Result<EvalResult> {
    require_convergent(spec)?;
    if spec.trig {
        return Err(Error::UnsupportedRegion("double series needs hyperbolic numerators".into()));
    }
    if !(spec.mu > 0.0) {
        return Err(Error::UnsupportedRegion(format!("double series needs mu > 0, got {}", spec.mu)));
    }
    match degenerate_numerator(spec) {
        Some(Degenerate::Zero) => return zero_result(),
        Some(Degenerate::Reduced(reduced)) => return eval_section3_series(&reduced),
        None => {}
    }
    let IntegralSpec { family, m, mu, nu, a, b, beta_weight, .. } = *spec;
    let base = nu * b - m as f64 * a + beta_weight;
    let step = 2.0 * a;
    let diff = family.sinh_numerator().then(|| BinomialDifference::new(m, mu));
    let mut poch = 1.0;
    let mut next = 0usize;
    let term = move |n: usize| {
        debug_assert_eq!(n, next);
        if n > 0 {
            poch *= (nu + n as f64 - 1.0) / n as f64;
        }
        next = n + 1;
        let x = base + 2.0 * b * n as f64;
        let inner = match &diff {
            Some(d) => d.eval(x, step),
            None => (0..=m).map(|r| binom(m, r) * (x + r as f64 * step).powf(-mu)).sum(),
        };
        poch * inner
    };
    let sum = if family.sinh_denominator() {
        power_law_sum(spec, term)?
    } else {
        euler_alternating(term, SERIES_TOL, DEFAULT_TERM_BUDGET)?
    };
    let pre = 2f64.powf(nu - m as f64) * gamma(mu)?;
    let value = pre * sum.value;
    let err = (pre * sum.err).abs() + 64.0 * f64::EPSILON * value.abs();
    let mut res = EvalResult::new(value, format!("{family}-double-series"), err)?;
    if mu.fract() == 0.0 && mu <= 12.0 {
        if let Ok(check) = section3_pfq_form(spec) {
            let d = (check - value).abs();
            if d > CROSS_CHECK_TOL * value.abs().max(1e-300) {
                res = res.warn(format!("CrossCheck: (mu+1)Fmu form differs by {d:.3e}"));
            }
        }
    }
    Ok(res)
}

/// Positive-integer μ: the same integral as a binomial sum of
/// (μ+1)Fμ(ν, x_r, …, x_r; 1+x_r, …, 1+x_r; ∓1), x_r = ν/2 + α_r.
///
/// Fails with `DivergentSeries` when any of the individual series diverges
/// even though the combination converges.
pub fn section3_pfq_form(spec: &IntegralSpec) -> Result<f64> {
    let IntegralSpec { family, m, mu, nu, a, b, beta_weight, .. } = *spec;
    if !(mu >= 1.0 && mu.fract() == 0.0) {
        return Err(Error::Domain(format!("(mu+1)Fmu form needs a positive integer mu, got {mu}")));
    }
    let k = mu as usize;
    let z = if family.sinh_denominator() { 1.0 } else { -1.0 };
    let mut total = 0.0;
    for r in 0..=m {
        let x = nu / 2.0 + (2.0 * r as f64 - m as f64) * a / (2.0 * b) + beta_weight / (2.0 * b);
        let mut num = vec![nu];
        num.extend(std::iter::repeat_n(x, k));
        let den = vec![1.0 + x; k];
        let f = pfq(&ParamList::new(&num, &den, z)?, 1e-13)?;
        let s = if family.sinh_numerator() && r % 2 == 1 { -1.0 } else { 1.0 };
        total += s * binom(m, r) * x.powf(-mu) * f;
    }
    Ok(2f64.powf(nu - m as f64) * gamma(mu)? * (2.0 * b).powf(-mu) * total)
}

const TAIL_TERMS: usize = 15;

/// Σ_n t(n) for sinh denominators, where t(n) = (ν)_n/n! · g(n) decays only
/// algebraically. The first N terms are summed directly; the rest use
/// t(n) ~ (2b)^{−μ}/Γ(ν) · n^{ν−1−μ} Σ_k h_k n^{−k} and Hurwitz zeta values.
fn power_law_sum<F: FnMut(usize) -> f64>(spec: &IntegralSpec, mut term: F) -> Result<SeriesSum> {
    let IntegralSpec { family, m, mu, nu, a, b, beta_weight, .. } = *spec;
    let y0 = (nu * b - m as f64 * a + beta_weight) / (2.0 * b);
    let s = a / b;
    let y_max = y0 + m as f64 * s;
    let n_head = 64usize.max((16.0 * nu.max(y_max).max(1.0)).ceil() as usize);

    let mut head = CompensatedSum::default();
    let mut mag = 0.0f64;
    for n in 0..n_head {
        let v = term(n);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("series term {n} is {v}")));
        }
        mag = mag.max(v.abs());
        head.add(v);
    }

    // (ν)_n/n! = n^{ν−1}/Γ(ν) · exp(Σ_k l_k n^{−k})
    let mut l = [0.0; TAIL_TERMS + 1];
    for (k, lk) in l.iter_mut().enumerate().skip(1) {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        *lk = sign * (bernoulli_poly(k + 1, nu) - bernoulli_poly(k + 1, 1.0)) / (k * (k + 1)) as f64;
    }
    let mut e = [0.0; TAIL_TERMS + 1];
    e[0] = 1.0;
    for k in 1..=TAIL_TERMS {
        e[k] = (1..=k).map(|j| j as f64 * l[j] * e[k - j]).sum::<f64>() / k as f64;
    }

    // g(n) = (2b)^{−μ} n^{−μ} Σ_k g_k n^{−k}
    let stirling = stirling_column(m, TAIL_TERMS);
    let mut g = [0.0; TAIL_TERMS + 1];
    let mut poch = 1.0;
    for k in 0..=TAIL_TERMS {
        if k > 0 {
            poch *= -(mu + k as f64 - 1.0) / k as f64;
        }
        let d = if family.sinh_numerator() {
            let fact: f64 = (1..=m).map(f64::from).product();
            let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
            let mut c = 1.0;
            let mut acc = 0.0;
            for j in 0..=k {
                if j > 0 {
                    c = c * (k + 1 - j) as f64 / j as f64;
                }
                if j >= m as usize {
                    acc += c * y0.powi((k - j) as i32) * s.powi(j as i32) * stirling[j];
                }
            }
            sign * fact * acc
        } else {
            (0..=m).map(|r| binom(m, r) * (y0 + r as f64 * s).powi(k as i32)).sum()
        };
        g[k] = poch * d;
    }

    let pre = (2.0 * b).powf(-mu) / gamma(nu)?;
    let mut tail = 0.0;
    let mut last = 0.0;
    for k in 0..=TAIL_TERMS {
        let h: f64 = (0..=k).map(|j| e[j] * g[k - j]).sum();
        if h == 0.0 {
            continue;
        }
        last = pre * h * hurwitz_zeta(mu + 1.0 - nu + k as f64, n_head as f64)?;
        tail += last;
    }
    let value = head.value() + tail;
    let err = last.abs() + 16.0 * f64::EPSILON * (mag + value.abs());
    Ok(SeriesSum { value, err, terms: n_head })
}

/// B_j(x) from the even Bernoulli numbers (j ≤ 16).
fn bernoulli_poly(j: usize, x: f64) -> f64 {
    let number = |i: usize| match i {
        0 => 1.0,
        1 => -0.5,
        _ if i % 2 == 1 => 0.0,
        _ => BERNOULLI_EVEN[i / 2 - 1],
    };
    let mut c = 1.0;
    let mut acc = 0.0;
    for i in 0..=j {
        if i > 0 {
            c = c * (j + 1 - i) as f64 / i as f64;
        }
        acc += c * number(i) * x.powi((j - i) as i32);
    }
    acc
}

/// S(j, m) for j = 0..=n, Stirling numbers of the second kind.
fn stirling_column(m: u32, n: usize) -> Vec<f64> {
    let m = m as usize;
    let mut row = vec![0.0; m + 1];
    row[0] = 1.0;
    let mut col = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j > 0 {
            for i in (1..=m).rev() {
                row[i] = i as f64 * row[i] + row[i - 1];
            }
            row[0] = 0.0;
        }
        col.push(row[m]);
    }
    col
}

/// Σ_r (−1)^r C(m,r) (x + r·s)^{−μ} without cancellation for small s/x.
struct BinomialDifference {
    m: u32,
    mu: f64,
    /// (μ)_k/k! · S(k, m) for k = 0..K, S the Stirling numbers of the second kind.
    coeffs: Vec<f64>,
}

const STIRLING_TERMS: usize = 120;

impl BinomialDifference {
    fn new(m: u32, mu: f64) -> Self {
        let stirling = stirling_column(m, STIRLING_TERMS - 1);
        let mut poch = 1.0;
        let coeffs = (0..STIRLING_TERMS)
            .map(|k| {
                if k > 0 {
                    poch *= (mu + k as f64 - 1.0) / k as f64;
                }
                poch * stirling[k]
            })
            .collect();
        Self { m, mu, coeffs }
    }

    fn eval(&self, x: f64, s: f64) -> f64 {
        if self.m > 0 && self.m as f64 * s < 0.25 * x {
            // (−1)^m m! x^{−μ} Σ_{k≥m} (μ)_k/k! S(k,m) (−s/x)^k
            let t = -s / x;
            let mut p = t.powi(self.m as i32);
            let mut acc = 0.0;
            for c in &self.coeffs[self.m as usize..] {
                let term = c * p;
                acc += term;
                if term.abs() <= 1e-18 * acc.abs() {
                    break;
                }
                p *= t;
            }
            let fact: f64 = (1..=self.m).map(f64::from).product();
            let sign = if self.m.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * fact * x.powf(-self.mu) * acc
        } else {
            (0..=self.m)
                .map(|r| {
                    let sg = if r % 2 == 0 { 1.0 } else { -1.0 };
                    sg * binom(self.m, r) * (x + r as f64 * s).powf(-self.mu)
                })
                .sum()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{eval_section2, validity, Family};
    use super::*;
    use crate::specfun::CATALAN;
    use std::f64::consts::{PI, SQRT_2};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn example_one_constants() {
        let s = IntegralSpec::new(Family::CoshOverCosh, 0, 2.0, 1.0, 0.0, 1.0);
        assert!(rel(eval_section3_series(&s).unwrap().value, 2.0 * CATALAN) < 1e-12);
        let s = IntegralSpec::new(Family::CoshOverSinh, 0, 2.0, 1.0, 0.0, 1.0);
        assert!(rel(eval_section3_series(&s).unwrap().value, PI * PI / 4.0) < 1e-12);
        let s = IntegralSpec::new(Family::CoshOverCosh, 1, 1.0, 1.0, 1.0, 2.0);
        assert!(rel(eval_section3_series(&s).unwrap().value, PI * SQRT_2 / 4.0) < 1e-12);
    }

    #[test]
    fn binomial_difference_matches_direct() {
        for m in 1..=4u32 {
            let d = BinomialDifference::new(m, 1.7);
            for (x, s) in [(10.0, 0.3), (5.0, 0.2), (40.0, 0.01)] {
                let direct: f64 =
                    (0..=m).map(|r| (-1f64).powi(r as i32) * binom(m, r) * (x + r as f64 * s).powf(-1.7)).sum();
                let v = d.eval(x, s);
                let scale = x.powf(-1.7);
                assert!((v - direct).abs() < 1e-13 * scale, "m={m} x={x}: {v} vs {direct}");
            }
        }
    }

    #[test]
    fn mu_one_matches_binomial_sums() {
        for f in Family::ALL {
            for (m, nu, a, b) in [(0, 0.6, 0.0, 1.0), (1, 0.8, 0.3, 1.0), (2, 1.7, 0.4, 1.3), (3, 2.2, 0.2, 0.8)] {
                let s = IntegralSpec::new(f, m, 1.0, nu, a, b);
                if !validity(&s).convergent {
                    continue;
                }
                let x = eval_section3_series(&s).unwrap().value;
                let y = eval_section2(&s).unwrap().value;
                assert!(rel(x, y) < 1e-10, "{f} m={m} nu={nu}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn pfq_form_cross_check() {
        let s = IntegralSpec::new(Family::CoshOverCosh, 2, 2.0, 1.5, 0.3, 1.0);
        let x = eval_section3_series(&s).unwrap();
        assert!(x.warnings.is_empty(), "{:?}", x.warnings);
        let y = section3_pfq_form(&s).unwrap();
        assert!(rel(x.value, y) < 1e-10);
        let s = IntegralSpec::new(Family::CoshOverSinh, 1, 3.0, 1.5, 0.5, 1.0);
        let x = eval_section3_series(&s).unwrap().value;
        let y = section3_pfq_form(&s).unwrap();
        assert!(rel(x, y) < 1e-9, "{x} vs {y}");
    }

    #[test]
    fn slowly_decaying_sinh_series() {
        // terms decay like n^{-q} with q − 1 between 0.03 and 0.1
        for s in [
            IntegralSpec::new(Family::CoshOverSinh, 2, 1.5, 1.4, 0.45, 1.25),
            IntegralSpec::new(Family::SinhOverSinh, 3, 2.0, 4.97, 0.068, 0.489),
            IntegralSpec::new(Family::CoshOverSinh, 0, 3.0, 2.93, 0.0, 1.0),
        ] {
            let x = eval_section3_series(&s).unwrap().value;
            let q = crate::quad::oracle(&crate::closedform::Target::Spec(s), 1e-12).unwrap().value;
            assert!(rel(x, q) < 1e-10, "{s:?}: {x} vs {q}");
        }
    }

    #[test]
    fn rejects_nonpositive_mu() {
        let s = IntegralSpec::new(Family::SinhOverCosh, 2, -0.5, 2.0, 0.3, 1.0);
        assert!(matches!(eval_section3_series(&s), Err(Error::UnsupportedRegion(_))));
    }
}

//! μ = 1 integrals: the binomial expansion of the numerator reduces each
//! family to a finite sum of 2F1(−1) values (cosh denominators) or of Γ
//! ratios (sinh denominators).

use super::{binom, require_convergent, EvalResult, Family, IntegralSpec, INTEGER_NU_SWITCH, NEAR_POLE_WARNING};
use crate::accel::CompensatedSum;
use crate::error::{Error, Result};
use crate::hypergeom::{gauss_2f1_minus1, pfq_minus1_continued, ParamList};
use crate::specfun::{beta_real, cos_pi, digamma_real, gamma, gamma_ratio, sin_pi, trigamma, EULER_GAMMA};
use std::f64::consts::{LN_2, PI};

const SERIES_TOL: f64 = 1e-15;
const EPS: f64 = f64::EPSILON;
const LIMIT_DIFFERENCE_STEP: f64 = 1e-3;

pub(super) enum Degenerate {
    Zero,
    Reduced(IntegralSpec),
}

/// With a = 0 and m ≥ 1 a sinh numerator vanishes identically and a cosh
/// numerator is 1.
pub(super) fn degenerate_numerator(spec: &IntegralSpec) -> Option<Degenerate> {
    if spec.m == 0 || spec.a != 0.0 {
        None
    } else if spec.family.sinh_numerator() {
        Some(Degenerate::Zero)
    } else {
        Some(Degenerate::Reduced(IntegralSpec { m: 0, ..*spec }))
    }
}

pub(super) fn zero_result() -> Result<EvalResult> {
    EvalResult::new(0.0, "sinh-numerator-zero", 0.0)
}

/// μ = 1 integrals for any m ≥ 0.
pub fn eval_section2(spec: &IntegralSpec) -> Result<EvalResult> {
    require_convergent(spec)?;
    if spec.mu != 1.0 || spec.trig {
        return Err(Error::UnsupportedRegion("binomial-sum forms need mu = 1 and hyperbolic numerators".into()));
    }
    match degenerate_numerator(spec) {
        Some(Degenerate::Zero) => return zero_result(),
        Some(Degenerate::Reduced(reduced)) => return eval_section2(&reduced),
        None => {}
    }
    match spec.family {
        Family::CoshOverCosh | Family::SinhOverCosh => hypergeometric_sum(spec),
        Family::CoshOverSinh => gamma_sum(spec),
        Family::SinhOverSinh => {
            let k = spec.nu.round();
            if k >= 1.0 && k <= spec.m as f64 && (spec.nu - k).abs() < INTEGER_NU_SWITCH {
                integer_nu_limit(spec, k as u32)
            } else {
                gamma_sum(spec)
            }
        }
    }
}

fn sign(family: Family, r: u32) -> f64 {
    if family.sinh_numerator() && r % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn alpha(spec: &IntegralSpec, r: u32) -> f64 {
    (2.0 * r as f64 - spec.m as f64) * (spec.a / (2.0 * spec.b)) + spec.beta_weight / (2.0 * spec.b)
}

/// (2^{ν−m}/2b) Σ_r (±1)^r C(m,r) 2F1(ν, ν/2+α_r; 1+ν/2+α_r; −1) / (ν/2+α_r).
fn hypergeometric_sum(spec: &IntegralSpec) -> Result<EvalResult> {
    let nu = spec.nu;
    let pre = 2f64.powf(nu - spec.m as f64) / (2.0 * spec.b);
    let mut acc = CompensatedSum::default();
    let mut mag = 0.0;
    for r in 0..=spec.m {
        let x = nu / 2.0 + alpha(spec, r);
        let f = gauss_2f1_minus1(nu, x, 1.0 + x, SERIES_TOL)?;
        let t = sign(spec.family, r) * binom(spec.m, r) * f / x;
        acc.add(t);
        mag += t.abs();
    }
    let value = pre * acc.value();
    let err = pre * mag * (32.0 * EPS + SERIES_TOL);
    EvalResult::new(value, format!("{}-2F1-sum", spec.family), err)
}

/// (2^{ν−m}/2b) Γ(1−ν) Σ_r (±1)^r C(m,r) Γ(ν/2+α_r)/Γ(1−ν/2+α_r).
fn gamma_sum(spec: &IntegralSpec) -> Result<EvalResult> {
    let nu = spec.nu;
    let pre = 2f64.powf(nu - spec.m as f64) / (2.0 * spec.b) * gamma(1.0 - nu)?;
    let mut acc = CompensatedSum::default();
    let mut mag = 0.0;
    for r in 0..=spec.m {
        let al = alpha(spec, r);
        let t = sign(spec.family, r) * binom(spec.m, r) * gamma_ratio(&[nu / 2.0 + al], &[1.0 - nu / 2.0 + al])?;
        acc.add(t);
        mag += t.abs();
    }
    let value = pre * acc.value();
    let err = (pre * mag).abs() * 64.0 * EPS;
    let id = if spec.family == Family::SinhOverSinh && nu > 1.0 {
        "I4-gamma-sum-continued".to_string()
    } else {
        format!("{}-gamma-sum", spec.family)
    };
    EvalResult::new(value, id, err)
}

/// ψ'(x) for any real x off the poles.
fn trigamma_any(x: f64) -> Result<f64> {
    if x > 0.0 {
        return trigamma(x);
    }
    let s = sin_pi(x);
    if s == 0.0 {
        return Err(Error::Pole(format!("trigamma at {x}")));
    }
    Ok(PI * PI / (s * s) - trigamma(1.0 - x)?)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// I4 near ν = k ∈ {1..m}, where Γ(1−ν) has a pole and the Γ-ratio sum S(ν)
/// has a simple zero. With ε = ν − k,
///
/// I4 = C [S'(k) + ε (S''(k)/2 − ψ(k) S'(k) + ln2 · S'(k))] + O(ε²),
/// C = 2^{k−m}/(2b) · (−1)^k/(k−1)!.
fn integer_nu_limit(spec: &IntegralSpec, k: u32) -> Result<EvalResult> {
    let kf = k as f64;
    let eps = spec.nu - kf;
    let mut s1 = CompensatedSum::default();
    let mut s2 = CompensatedSum::default();
    let mut mag = 0.0;
    for r in 0..=spec.m {
        let al = alpha(spec, r);
        let x = kf / 2.0 + al;
        let y = 1.0 - kf / 2.0 + al;
        let gx = gamma(x)?;
        let px = digamma_real(x)?;
        // derivatives of Γ(ν/2 + α)/Γ(1 − ν/2 + α) with respect to ν
        let (g1, g2) = if y <= 0.0 && y.fract() == 0.0 {
            let n = (-y) as u32;
            let parity = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            let rp = parity * factorial(n);
            let rpp = -2.0 * rp * digamma_real(n as f64 + 1.0)?;
            (-0.5 * gx * rp, 0.25 * gx * (-2.0 * px * rp + rpp))
        } else {
            let g = gamma_ratio(&[x], &[y])?;
            let s = px + digamma_real(y)?;
            (0.5 * g * s, 0.25 * g * (s * s + trigamma(x)? - trigamma_any(y)?))
        };
        let w = sign(spec.family, r) * binom(spec.m, r);
        s1.add(w * g1);
        s2.add(w * g2);
        mag += (w * g1).abs() + (w * g2).abs();
    }
    let parity = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = 2f64.powi(k as i32 - spec.m as i32) / (2.0 * spec.b) * parity / factorial(k - 1);
    let psi_k = if k == 1 { -EULER_GAMMA } else { digamma_real(kf)? };
    let (d1, d2) = (s1.value(), s2.value());
    let at_k = c * d1;
    let mut value = c * (d1 + eps * (0.5 * d2 - psi_k * d1 + LN_2 * d1));
    let mut err = c.abs() * 64.0 * EPS * mag;
    if eps != 0.0 {
        // second-order term from a central difference of the generic form
        let h = LIMIT_DIFFERENCE_STEP;
        let hi = gamma_sum(&IntegralSpec { nu: kf + h, ..*spec })?.value;
        let lo = gamma_sum(&IntegralSpec { nu: kf - h, ..*spec })?.value;
        let curvature = (hi + lo - 2.0 * at_k) / (h * h);
        value += 0.5 * eps * eps * curvature;
        err += eps.abs().powi(3) * (curvature.abs() + at_k.abs()) / h + 1e-12 * eps * eps / (h * h) * at_k.abs();
    }
    let id = if k == 1 { "I4-psi-limit" } else { "I4-integer-nu-limit" };
    let mut res = EvalResult::new(value, id, err)?;
    res = res.warn(format!("NearPole: |nu - {k}| = {:.3e} below {INTEGER_NU_SWITCH:e}; limit form used", eps.abs()));
    Ok(res)
}

/// m = 1, μ = 1 closed forms in terms of B(ν/2 + a/2b, ν/2 − a/2b).
///
/// Evaluated by formula only, so a may be negative (|a|/b < ν).
pub fn m1_formula(family: Family, nu: f64, a: f64, b: f64) -> Result<f64> {
    let c = a / (2.0 * b);
    let (p, q) = (nu / 2.0 + c, nu / 2.0 - c);
    if p == 0.0 || q == 0.0 {
        return Err(Error::Pole(format!("Beta function pole at nu = |a|/b = {}", a.abs() / b)));
    }
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::Domain(format!("need nu > |a|/b, got nu = {nu}, a/b = {}", a / b)));
    }
    let beta = beta_real(p, q)?;
    let v = match family {
        Family::CoshOverCosh => 2f64.powf(nu - 1.0) / (2.0 * b) * beta,
        Family::SinhOverCosh => {
            let f = gauss_2f1_minus1(nu, p, 1.0 + p, SERIES_TOL)?;
            2f64.powf(nu - 1.0) / (2.0 * b) * beta - 2f64.powf(nu - 1.0) / (p * b) * f
        }
        Family::CoshOverSinh => 2f64.powf(nu - 2.0) / b / cos_pi(nu / 2.0) * cos_pi(c) * beta,
        Family::SinhOverSinh => 2f64.powf(nu - 2.0) / b / sin_pi(nu / 2.0) * sin_pi(c) * beta,
    };
    Ok(v)
}

/// ∫ sinh(ax)/cosh^ν(bx) dx as 2^ν a/((νb)² − a²) · 3F2(ν, ν/2+c, ν/2−c; 1+ν/2+c, 1+ν/2−c; −1).
pub fn m1_sinh_cosh_3f2_form(nu: f64, a: f64, b: f64) -> Result<f64> {
    let c = a / (2.0 * b);
    let (p, q) = (nu / 2.0 + c, nu / 2.0 - c);
    let params = ParamList::new(&[nu, p, q], &[1.0 + p, 1.0 + q], -1.0)?;
    let f = pfq_minus1_continued(&params, 1e-14)?;
    Ok(2f64.powf(nu) * a / ((nu * b).powi(2) - a * a) * f)
}

/// m = 1, μ = 1 integrals without exponential weight.
pub fn eval_m1_closed(spec: &IntegralSpec) -> Result<EvalResult> {
    require_convergent(spec)?;
    if spec.m != 1 || spec.mu != 1.0 || spec.beta_weight != 0.0 || spec.trig {
        return Err(Error::UnsupportedRegion("m = 1 closed forms need m = 1, mu = 1, beta = 0".into()));
    }
    if spec.a == 0.0 && spec.family.sinh_numerator() {
        return zero_result();
    }
    let value = m1_formula(spec.family, spec.nu, spec.a, spec.b)?;
    let id = match spec.family {
        Family::CoshOverCosh => "I1-m1-beta",
        Family::SinhOverCosh => "I2-m1-beta-minus-2F1",
        Family::CoshOverSinh => "I3-m1-cos-beta",
        Family::SinhOverSinh => "I4-m1-sin-beta",
    };
    let scale = if spec.family == Family::SinhOverCosh {
        2f64.powf(spec.nu - 1.0) / (2.0 * spec.b)
            * beta_real(spec.nu / 2.0 + spec.a / (2.0 * spec.b), spec.nu / 2.0 - spec.a / (2.0 * spec.b))?
    } else {
        value
    };
    let mut res = EvalResult::new(value, id, 64.0 * EPS * scale.abs())?;
    let gap = spec.nu - spec.a / spec.b;
    if gap < NEAR_POLE_WARNING {
        res = res.warn(format!("NearPole: nu - a/b = {gap:.3e}"));
    }
    Ok(res)
}

/// m = ν = μ = 1 in terms of sec, tan and ψ.
pub fn eval_nu1_elementary(spec: &IntegralSpec) -> Result<EvalResult> {
    if spec.m != 1 || spec.nu != 1.0 || spec.mu != 1.0 || spec.beta_weight != 0.0 || spec.trig {
        return Err(Error::UnsupportedRegion("elementary forms need m = nu = mu = 1, beta = 0".into()));
    }
    let (a, b) = (spec.a, spec.b);
    if !(b > 0.0) || !(a >= 0.0) || !(a / b < 1.0) {
        return Err(Error::Domain(format!("need 0 <= a/b < 1, got a = {a}, b = {b}")));
    }
    let t = a / (2.0 * b);
    let head = PI / (2.0 * b);
    let (value, id, scale) = match spec.family {
        Family::CoshOverCosh => (head / cos_pi(t), "I1-nu1-sec", head / cos_pi(t)),
        Family::SinhOverSinh => (head * sin_pi(t) / cos_pi(t), "I4-nu1-tan", head / cos_pi(t)),
        Family::SinhOverCosh => {
            if a == 0.0 {
                return zero_result();
            }
            let psi = digamma_real(0.75 + t / 2.0)? - digamma_real(0.25 + t / 2.0)?;
            (head / cos_pi(t) - psi / (2.0 * b), "I2-nu1-sec-psi", head / cos_pi(t))
        }
        Family::CoshOverSinh => return Err(Error::NotConvergent("cosh(ax)/sinh(bx) diverges at x = 0".into())),
    };
    EvalResult::new(value, id, 32.0 * EPS * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn spec(f: Family, m: u32, nu: f64, a: f64, b: f64) -> IntegralSpec {
        IntegralSpec::new(f, m, 1.0, nu, a, b)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn m0_values() {
        let v = eval_section2(&spec(Family::CoshOverCosh, 0, 1.0, 0.0, 1.0)).unwrap();
        assert!(rel(v.value, PI / 2.0) < 1e-14);
        let v = eval_section2(&spec(Family::CoshOverSinh, 0, 0.5, 0.0, 1.0)).unwrap();
        let expected = gamma(0.25).unwrap().powi(2) / (2.0 * PI.sqrt());
        assert!(rel(v.value, expected) < 1e-13);
        // ∫ sech^ν = (√π/2) Γ(ν/2)/Γ(1/2 + ν/2)
        let nu = 2.7;
        let v = eval_section2(&spec(Family::CoshOverCosh, 0, nu, 0.0, 1.0)).unwrap();
        let expected = PI.sqrt() / 2.0 * gamma(nu / 2.0).unwrap() / gamma(0.5 + nu / 2.0).unwrap();
        assert!(rel(v.value, expected) < 1e-13);
    }

    #[test]
    fn psi_limit_matches_tan_form() {
        let v = eval_section2(&spec(Family::SinhOverSinh, 1, 1.0, 1.0, 2.0)).unwrap();
        assert_eq!(v.formula_id, "I4-psi-limit");
        assert!(!v.warnings.is_empty());
        assert!(rel(v.value, PI / 4.0) < 1e-13);
    }

    #[test]
    fn integer_nu_limit_is_continuous() {
        for (m, k) in [(2u32, 1.0), (2, 2.0), (3, 2.0), (3, 3.0)] {
            let s = spec(Family::SinhOverSinh, m, k, 0.3, 1.0);
            let at = eval_section2(&s).unwrap().value;
            let lo = eval_section2(&IntegralSpec { nu: k - 2e-4, ..s }).unwrap();
            let hi = eval_section2(&IntegralSpec { nu: k + 2e-4, ..s }).unwrap();
            assert!(lo.formula_id.starts_with("I4-gamma"));
            let mid = 0.5 * (lo.value + hi.value);
            assert!(rel(at, mid) < 1e-6, "m={m} k={k}: {at} vs {mid}");
            for e in [9e-5, -6e-5, 2e-5] {
                let near = eval_section2(&IntegralSpec { nu: k + e, ..s }).unwrap();
                let generic = gamma_sum(&IntegralSpec { nu: k + e, ..s }).unwrap();
                assert!(
                    rel(near.value, generic.value) < 1e-14 / e.abs(),
                    "m={m} k={k} e={e} {} {}",
                    near.value,
                    generic.value
                );
            }
        }
    }

    #[test]
    fn m1_examples() {
        let v = eval_m1_closed(&spec(Family::CoshOverCosh, 1, 1.0, 1.0, 2.0)).unwrap();
        assert!(rel(v.value, PI * SQRT_2 / 4.0) < 1e-14);
        let v = eval_m1_closed(&spec(Family::SinhOverSinh, 1, 1.0, 1.0, 2.0)).unwrap();
        assert!(rel(v.value, PI / 4.0) < 1e-14);
        assert_eq!(eval_m1_closed(&spec(Family::SinhOverCosh, 1, 1.3, 0.0, 1.0)).unwrap().value, 0.0);
        let v = eval_m1_closed(&spec(Family::CoshOverCosh, 1, 0.5 + 5e-7, 1.0, 2.0)).unwrap();
        assert!(v.warnings.iter().any(|w| w.starts_with("NearPole")));
    }

    #[test]
    fn m1_forms_agree_with_binomial_sums() {
        for f in Family::ALL {
            for (nu, a, b) in [(0.7, 0.3, 1.0), (0.9, 0.5, 1.5), (1.4, 0.8, 1.0), (2.5, 1.0, 0.7)] {
                let s = spec(f, 1, nu, a, b);
                if !super::super::validity(&s).convergent {
                    continue;
                }
                let x = eval_section2(&s).unwrap().value;
                let y = eval_m1_closed(&s).unwrap().value;
                assert!(rel(x, y) < 1e-12, "{f} nu={nu}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn three_f_two_form() {
        for (nu, a, b) in [(1.0, 0.4, 1.0), (0.6, 0.3, 1.0), (2.2, 1.0, 1.0)] {
            let x = m1_sinh_cosh_3f2_form(nu, a, b).unwrap();
            let y = m1_formula(Family::SinhOverCosh, nu, a, b).unwrap();
            assert!(rel(x, y) < 1e-11, "{nu}: {x} vs {y}");
        }
    }

    #[test]
    fn nu1_elementary() {
        let v = eval_nu1_elementary(&spec(Family::SinhOverSinh, 1, 1.0, 1.0, 3.0)).unwrap();
        assert!(rel(v.value, PI / (6.0 * 3f64.sqrt())) < 1e-14);
        let v = eval_nu1_elementary(&spec(Family::SinhOverCosh, 1, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(v.value, 0.0);
        let v = eval_nu1_elementary(&spec(Family::SinhOverCosh, 1, 1.0, 0.4, 1.0)).unwrap();
        let w = m1_formula(Family::SinhOverCosh, 1.0, 0.4, 1.0).unwrap();
        assert!(rel(v.value, w) < 1e-13);
        assert!(matches!(eval_nu1_elementary(&spec(Family::CoshOverCosh, 1, 1.0, 1.0, 1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn parity_in_a() {
        for f in [Family::SinhOverCosh, Family::SinhOverSinh] {
            let x = m1_formula(f, 1.3, 0.7, 1.0).unwrap();
            let y = m1_formula(f, 1.3, -0.7, 1.0).unwrap();
            assert!((x + y).abs() < 1e-12 * x.abs());
        }
    }
}

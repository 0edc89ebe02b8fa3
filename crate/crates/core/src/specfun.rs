//! Gamma, Beta, digamma, trigamma, Hurwitz zeta and related sums.
//!
//! Everything here works in `f64`. Complex arguments are supported for
//! `ln_gamma`, `beta` and `digamma`; they arise when the hyperbolic
//! numerators are continued to trigonometric ones.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Distance below which an argument is reported as sitting next to a pole.
pub const NEAR_POLE_THRESHOLD: f64 = 1e-12;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Catalan's constant G = Σ (-1)^n / (2n+1)^2, to full double precision
/// (0.91596559417721901505460351493238411...).
pub const CATALAN: f64 = 0.915_965_594_177_219;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Even-index Bernoulli numbers B_2, B_4, ..., B_16.
pub(crate) const BERNOULLI_EVEN: [f64; 8] =
    [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0];

/// Where an argument sits relative to the poles 0, -1, -2, ... of Γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleProximity {
    Clear,
    Near,
    Exact,
}

pub fn pole_proximity(x: f64) -> PoleProximity {
    if x <= 0.0 && x == x.floor() {
        return PoleProximity::Exact;
    }
    let nearest = x.round();
    if nearest <= 0.0 && (x - nearest).abs() < NEAR_POLE_THRESHOLD {
        PoleProximity::Near
    } else {
        PoleProximity::Clear
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn pole_error(what: &str, x: f64) -> Error {
    Error::Pole(format!("{what} at non-positive integer {x}"))
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

fn lanczos_ln_gamma_real(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Principal-branch log-gamma for complex argument.
///
/// For `Re z < 1/2` the reflection formula is used; the imaginary part is
/// then only determined modulo 2π, which is irrelevant for `exp` and for
/// ratios.
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite(format!("ln_gamma argument {z}")));
    }
    if z.im == 0.0 {
        let (lg, sign) = ln_gamma_real(z.re)?;
        return Ok(Complex64::new(lg, if sign < 0.0 { PI } else { 0.0 }));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - lanczos_ln_gamma(1.0 - z))
    } else {
        Ok(lanczos_ln_gamma(z))
    }
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("ln_gamma argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(pole_error("ln_gamma", x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let lg = PI.ln() - s.abs().ln() - lanczos_ln_gamma_real(1.0 - x);
        Ok((lg, s.signum()))
    } else {
        Ok((lanczos_ln_gamma_real(x), 1.0))
    }
}

/// Γ(x) for real x. Integer arguments up to 170 are exact factorials.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("gamma argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(pole_error("gamma", x));
    }
    if x == x.floor() && x <= 171.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx)
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    let (lg, sign) = ln_gamma_real(x)?;
    Ok(sign * lg.exp())
}

/// 1/Γ(x); entire, so zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match ln_gamma_real(x) {
        Ok((lg, sign)) if lg < 700.0 => sign * (-lg).exp(),
        Ok(_) => 0.0,
        Err(_) => f64::NAN,
    }
}

/// Ratio Π Γ(num_i) / Π Γ(den_j), evaluated in log space.
///
/// A pole among the denominator arguments makes the ratio vanish; a pole
/// among the numerator arguments is an error.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut log = 0.0;
    let mut sign = 1.0;
    for &x in num {
        let (lg, s) = ln_gamma_real(x)?;
        log += lg;
        sign *= s;
    }
    for &x in den {
        if is_nonpositive_integer(x) {
            return Ok(0.0);
        }
        let (lg, s) = ln_gamma_real(x)?;
        log -= lg;
        sign *= s;
    }
    Ok(sign * log.exp())
}

/// B(α, β) = Γ(α)Γ(β)/Γ(α+β) for complex arguments.
pub fn beta(alpha: ComplexValue, beta: ComplexValue) -> Result<ComplexValue> {
    let l = ln_gamma(alpha)? + ln_gamma(beta)? - ln_gamma(alpha + beta)?;
    Ok(l.exp())
}

/// Real Beta function.
pub fn beta_real(alpha: f64, beta: f64) -> Result<f64> {
    if is_nonpositive_integer(alpha + beta) {
        return Err(pole_error("beta (α+β)", alpha + beta));
    }
    gamma_ratio(&[alpha, beta], &[alpha + beta])
}

/// ψ(x) for real x.
pub fn digamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("digamma argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(pole_error("digamma", x));
    }
    if x < 0.0 {
        // ψ(x) = ψ(1-x) - π cot(πx)
        return Ok(digamma_real(1.0 - x)? - PI * cos_pi(x) / sin_pi(x));
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut p = inv2;
    let mut tail = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        tail += b / (2.0 * (k + 1) as f64) * p;
        p *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - tail)
}

/// ψ(z) for complex z, |z| ≤ 50.
pub fn digamma(z: ComplexValue) -> Result<ComplexValue> {
    if z.im == 0.0 {
        return digamma_real(z.re).map(|v| Complex64::new(v, 0.0));
    }
    if z.re < 0.0 {
        let w = z * PI;
        return Ok(digamma(1.0 - z)? - PI * w.cos() / w.sin());
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut z = z;
    while z.norm() < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut p = inv2;
    let mut tail = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        tail += p * (b / (2.0 * (k + 1) as f64));
        p *= inv2;
    }
    Ok(acc + z.ln() - 0.5 / z - tail)
}

/// ψ'(x) = Σ_{n≥0} (n+x)^{-2} for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("trigamma requires x > 0, got {x}")));
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut p = inv2 * inv;
    let mut tail = 0.0;
    for b in BERNOULLI_EVEN {
        tail += b * p;
        p *= inv2;
    }
    Ok(acc + inv + 0.5 * inv2 + tail)
}

fn check_zeta_args(s: f64, a: f64) -> Result<()> {
    if !s.is_finite() || !a.is_finite() {
        return Err(Error::NonFinite(format!("hurwitz_zeta({s}, {a})")));
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!("hurwitz_zeta requires a > 0, got {a}")));
    }
    if s <= -3.0 {
        return Err(Error::UnsupportedRegion(format!("hurwitz_zeta implemented for s > -3, got {s}")));
    }
    Ok(())
}

fn zeta_shift(s: f64) -> usize {
    10usize.max(s.abs().ceil() as usize + 10)
}

/// Σ_{j=1}^{6} B_{2j}/(2j)! (s)_{2j-1} w^{1-s-2j}, the Euler–Maclaurin
/// correction for Σ_{k≥N} (k+a)^{-s} with w = N + a.
fn em_corrections(s: f64, w: f64) -> f64 {
    let mut out = 0.0;
    // (s)_{2j-1} / (2j)!
    let mut poch = s;
    let mut fact = 2.0;
    let inv2 = 1.0 / (w * w);
    let mut p = w.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().take(6).enumerate() {
        out += b * poch / fact * p;
        let k = (2 * j + 2) as f64;
        poch *= (s + k - 1.0) * (s + k);
        fact *= (k + 1.0) * (k + 2.0);
        p *= inv2;
    }
    out
}

/// Hurwitz zeta ζ(s, a) for a > 0, s ≠ 1, s > -3 (analytic continuation
/// for s < 1). Euler–Maclaurin with shift N = max(10, ⌈|s|⌉ + 10) and
/// Bernoulli corrections through B_12.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    check_zeta_args(s, a)?;
    if s == 1.0 {
        return Err(Error::Pole("hurwitz_zeta at s = 1".into()));
    }
    let n = zeta_shift(s);
    let mut head = 0.0;
    for k in (0..n).rev() {
        head += (k as f64 + a).powf(-s);
    }
    let w = n as f64 + a;
    let integral = w.powf(1.0 - s) / (s - 1.0);
    Ok(head + integral + 0.5 * w.powf(-s) + em_corrections(s, w))
}

/// ζ(s, x) − ζ(s, y) as a single Euler–Maclaurin sum of differences.
///
/// Finite at s = 1, where it equals ψ(y) − ψ(x), and free of the
/// cancellation the two separate values suffer near s = 1.
pub fn hurwitz_zeta_diff(s: f64, x: f64, y: f64) -> Result<f64> {
    check_zeta_args(s, x)?;
    check_zeta_args(s, y)?;
    let n = zeta_shift(s);
    let mut head = 0.0;
    for k in (0..n).rev() {
        let k = k as f64;
        head += (k + x).powf(-s) - (k + y).powf(-s);
    }
    let u = n as f64 + x;
    let v = n as f64 + y;
    let l = ((x - y) / v).ln_1p();
    let e = 1.0 - s;
    // [u^{1-s} - v^{1-s}] / (s-1)
    let integral = if e == 0.0 { -l } else { -v.powf(e) * (e * l).exp_m1() / e };
    let half = 0.5 * (u.powf(-s) - v.powf(-s));
    let corr = em_corrections(s, u) - em_corrections(s, v);
    Ok(head + integral + half + corr)
}

/// Σ_{k≥0} (-1)^k (a + k/2)^{-s} by direct head summation and the
/// Euler–Boole expansion of the alternating tail.
fn alternating_half_step_sum(s: f64, a: f64) -> f64 {
    let target = 10.0 + s.abs();
    let m = if a >= target { 0 } else { (target - a).ceil() as usize };
    let mut head = 0.0;
    for k in (0..2 * m).rev() {
        let t = (a + 0.5 * k as f64).powf(-s);
        head += if k % 2 == 0 { t } else { -t };
    }
    let w = a + m as f64;
    // Σ(-1)^k g(k) ≈ g(0)/2 − Σ_j (4^j − 1) B_2j/(2j)! g^{(2j-1)}(0),
    // g(k) = (w + k/2)^{-s}, g^{(r)}(0) = (-1)^r (s)_r 2^{-r} w^{-s-r}.
    let mut tail = 0.5 * w.powf(-s);
    let mut poch = s;
    let mut fact = 2.0;
    let mut four = 4.0;
    let mut p = w.powf(-s - 1.0) * 0.5;
    let q = 0.25 / (w * w);
    for (j, b) in BERNOULLI_EVEN.iter().take(7).enumerate() {
        tail += (four - 1.0) * b / fact * poch * p;
        let k = (2 * j + 2) as f64;
        poch *= (s + k - 1.0) * (s + k);
        fact *= (k + 1.0) * (k + 2.0);
        four *= 4.0;
        p *= q;
    }
    head + tail
}

/// Riemann zeta ζ(s) = ζ(s, 1).
pub fn zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

/// Z(μ, a) = ζ(μ, a) − ζ(μ, a + 1/2).
///
/// For a > 5 the two zeta values nearly cancel, so the alternating form
/// Σ (-1)^k (a + k/2)^{-μ} is summed instead.
pub fn zed(mu: f64, a: f64) -> Result<f64> {
    check_zeta_args(mu, a)?;
    if a > 5.0 {
        Ok(alternating_half_step_sum(mu, a))
    } else {
        hurwitz_zeta_diff(mu, a, a + 0.5)
    }
}

/// Σ_{n≥0} (-1)^n / (n + x) = ½{ψ(½ + x/2) − ψ(x/2)}.
pub fn alt_psi_sum(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("alt_psi_sum requires x > 0, got {x}")));
    }
    Ok(0.5 * (digamma_real(0.5 + 0.5 * x)? - digamma_real(0.5 * x)?))
}

/// Σ_{n≥0} (-1)^n (n + x)^{-s} = 2^{-s}{ζ(s, x/2) − ζ(s, ½ + x/2)}.
pub fn alt_zeta_sum(s: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("alt_zeta_sum requires x > 0, got {x}")));
    }
    Ok((-s * LN_2).exp() * zed(s, 0.5 * x)?)
}

/// Catalan's constant.
pub fn catalan() -> f64 {
    CATALAN
}

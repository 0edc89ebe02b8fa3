//! Fixed-shape integrals with closed forms in ζ, ψ, ψ′ or elementary
//! functions.

use super::EvalResult;
use crate::error::{Error, Result};
use crate::specfun::{
    beta_real, cos_pi, digamma, gamma, hurwitz_zeta, hurwitz_zeta_diff, ln_gamma_real, sin_pi, trigamma, zed, zeta,
    ComplexValue, CATALAN,
};
use std::f64::consts::{LN_2, PI};

const EPS: f64 = f64::EPSILON;

/// Numerator/denominator pair for the m = ν = 1 ζ forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaVariant {
    CoshSinh,
    SinhSinh,
    CoshCosh,
    SinhCosh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mu2Variant {
    SinhCosh,
    CoshSinh,
    CoshCosh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigVariant {
    CosOverCosh,
    SinOverSinh,
    SinOverCosh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example3Variant {
    /// ∫ x^{μ−1} cosh x / sinh² x
    CoshOverSinh2,
    /// ∫ x^{μ−1} sinh x / cosh² x
    SinhOverCosh2,
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    if !(b > 0.0 && a >= 0.0 && a < b) {
        return Err(Error::Domain(format!("need 0 <= a < b, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// ∫ x^{μ−1} {cosh|sinh}(ax)/{cosh|sinh}(bx) dx through Hurwitz ζ.
pub fn eval_zeta_forms(variant: ZetaVariant, mu: f64, a: f64, b: f64) -> Result<EvalResult> {
    check_ab(a, b)?;
    let lower = match variant {
        ZetaVariant::CoshSinh => 1.0,
        ZetaVariant::SinhSinh | ZetaVariant::CoshCosh => 0.0,
        ZetaVariant::SinhCosh => -1.0,
    };
    if variant == ZetaVariant::CoshSinh && mu == 1.0 {
        return Err(Error::Pole("zeta(mu, .) at mu = 1".into()));
    }
    if !(mu > lower) {
        return Err(Error::Domain(format!("{variant:?} needs mu > {lower}, got {mu}")));
    }
    let (value, id) = match variant {
        ZetaVariant::CoshSinh | ZetaVariant::SinhSinh => {
            let (x, y) = ((b - a) / (2.0 * b), (b + a) / (2.0 * b));
            let pre = gamma(mu)? * (2.0 * b).powf(-mu);
            if variant == ZetaVariant::CoshSinh {
                (pre * (hurwitz_zeta(mu, x)? + hurwitz_zeta(mu, y)?), "zeta-cosh-sinh")
            } else {
                (pre * hurwitz_zeta_diff(mu, x, y)?, "zeta-sinh-sinh")
            }
        }
        ZetaVariant::CoshCosh | ZetaVariant::SinhCosh => {
            let (x, y) = ((b - a) / (4.0 * b), (b + a) / (4.0 * b));
            if variant == ZetaVariant::SinhCosh && mu == 0.0 {
                // Γ(μ){Z(μ,x) − Z(μ,y)} → ∂_μ at μ = 0, with ∂_s ζ(0, t) = lnΓ(t) − ln√(2π)
                let lg = |t: f64| ln_gamma_real(t).map(|v| v.0);
                let v = lg(x)? - lg(x + 0.5)? - lg(y)? + lg(y + 0.5)?;
                (v, "zed-sinh-cosh-log-gamma")
            } else {
                let pre = gamma(mu)? * (4.0 * b).powf(-mu);
                let (zx, zy) = (zed(mu, x)?, zed(mu, y)?);
                if variant == ZetaVariant::CoshCosh {
                    (pre * (zx + zy), "zed-cosh-cosh")
                } else {
                    (pre * (zx - zy), "zed-sinh-cosh")
                }
            }
        }
    };
    EvalResult::new(value, id, 256.0 * EPS * value.abs())
}

/// μ = 2, m = ν = 1 forms obtained by differentiating the ν = 1 results in a.
pub fn eval_mu2_elementary(variant: Mu2Variant, a: f64, b: f64) -> Result<EvalResult> {
    check_ab(a, b)?;
    let t = a / (2.0 * b);
    let (sec, tan) = (1.0 / cos_pi(t), sin_pi(t) / cos_pi(t));
    let k = PI * PI / (4.0 * b * b);
    let (value, id) = match variant {
        Mu2Variant::SinhCosh => (k * sec * tan, "mu2-sinh-cosh-sec-tan"),
        Mu2Variant::CoshSinh => (k * sec * sec, "mu2-cosh-sinh-sec2"),
        Mu2Variant::CoshCosh => {
            let d = trigamma(0.75 + t / 2.0)? - trigamma(0.25 + t / 2.0)?;
            (k * sec * tan - d / (8.0 * b * b), "mu2-cosh-cosh-trigamma")
        }
    };
    EvalResult::new(value, id, 64.0 * EPS * k * sec * sec.max(tan.abs()).max(1.0))
}

/// Trigonometric numerators: ∫ cos(ax)/cosh(bx), ∫ sin(ax)/sinh(bx), ∫ sin(ax)/cosh(bx).
pub fn eval_trig(variant: TrigVariant, a: f64, b: f64) -> Result<EvalResult> {
    if !(b > 0.0 && a >= 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("need a >= 0, b > 0, got a = {a}, b = {b}")));
    }
    let t = PI * (a / (2.0 * b));
    let head = PI / (2.0 * b);
    let (value, id) = match variant {
        TrigVariant::CosOverCosh => (head / t.cosh(), "trig-cos-cosh-sech"),
        TrigVariant::SinOverSinh => (head * t.tanh(), "trig-sin-sinh-tanh"),
        TrigVariant::SinOverCosh => {
            let w = digamma(ComplexValue::new(0.25, a / (4.0 * b)))?;
            (-head * t.tanh() + w.im / b, "trig-sin-cosh-tanh-psi")
        }
    };
    EvalResult::new(value, id, 64.0 * EPS * head)
}

/// Example integrals with a = b = 1, m = 1, ν = 2 in ζ form.
pub fn eval_example3(variant: Example3Variant, mu: f64) -> Result<EvalResult> {
    match variant {
        Example3Variant::CoshOverSinh2 => {
            if mu == 2.0 {
                return Err(Error::Pole("zeta(mu - 1) at mu = 2".into()));
            }
            if !(mu > 2.0) {
                return Err(Error::Domain(format!("cosh x/sinh^2 x needs mu > 2, got {mu}")));
            }
            let v = 2.0 * gamma(mu)? * zeta(mu - 1.0)? * -((1.0 - mu) * LN_2).exp_m1();
            EvalResult::new(v, "ex3-cosh-sinh2-zeta", 64.0 * EPS * v.abs())
        }
        Example3Variant::SinhOverCosh2 => {
            if mu == 0.0 {
                return EvalResult::new(4.0 * CATALAN / PI, "ex3-sinh-cosh2-catalan", 4.0 * EPS);
            }
            if !(mu > -1.0) {
                return Err(Error::Domain(format!("sinh x/cosh^2 x needs mu > -1, got {mu}")));
            }
            if mu.abs() < 0.5 {
                // Z(s, 1/4) = 4^s β(s) with β the Dirichlet beta function; its
                // functional equation cancels the pole of Γ(μ) against the zero
                // of β(μ−1) at μ = 0.
                let s = 2.0 - mu;
                let v = PI * (2.0 / PI).powf(s) * (1.0 - mu) * 4f64.powf(-s) * zed(s, 0.25)? / cos_pi(mu / 2.0);
                return EvalResult::new(v, "ex3-sinh-cosh2-reflected", 64.0 * EPS * v.abs());
            }
            // ζ(μ−1, 1/4) − ζ(μ−1, 3/4) = Z(μ−1, 1/4)
            let v = (3.0 - 2.0 * mu).exp2() * gamma(mu)? * zed(mu - 1.0, 0.25)?;
            EvalResult::new(v, "ex3-sinh-cosh2-zeta", 64.0 * EPS * v.abs())
        }
    }
}

/// ∫ sinh^μ x / cosh^ν x dx = ½ B((ν−μ)/2, (1+μ)/2).
pub fn eval_beta_power(mu: f64, nu: f64) -> Result<EvalResult> {
    if !(mu > -1.0) {
        return Err(Error::Domain(format!("need mu > -1, got {mu}")));
    }
    if !(nu > mu) {
        return Err(Error::Domain(format!("need nu > mu, got mu = {mu}, nu = {nu}")));
    }
    let v = 0.5 * beta_real((nu - mu) / 2.0, (1.0 + mu) / 2.0)?;
    EvalResult::new(v, "beta-power", 32.0 * EPS * v)
}

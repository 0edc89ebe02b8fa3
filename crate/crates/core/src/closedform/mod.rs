//! Closed-form evaluation of
//!
//! ```text
//! ∫₀^∞ x^{μ-1} e^{-βx} {cosh|sinh}^m(ax) / {cosh|sinh}^ν(bx) dx
//! ```
//!
//! and of the related trigonometric and fixed-parameter variants.
//! [`evaluate`] picks the most specific representation available for a
//! spec; the individual representations are public so they can be checked
//! against each other.

mod binomial;
mod series;
mod special;

pub use binomial::{eval_m1_closed, eval_nu1_elementary, eval_section2, m1_formula, m1_sinh_cosh_3f2_form};
pub use series::{eval_section3_series, section3_pfq_form};
pub use special::{
    eval_beta_power, eval_example3, eval_mu2_elementary, eval_trig, eval_zeta_forms, Example3Variant, Mu2Variant,
    TrigVariant, ZetaVariant,
};

use crate::error::{Error, Result};
use std::fmt;

/// Lower bound on reported error estimates.
pub const MIN_EST_ERROR: f64 = 1e-13;

/// Distance from a Beta pole below which a warning is attached.
pub const NEAR_POLE_WARNING: f64 = 1e-6;

/// Distance from an integer ν below which I4 switches to the limit form.
pub const INTEGER_NU_SWITCH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// cosh^m(ax) / cosh^ν(bx)
    CoshOverCosh,
    /// sinh^m(ax) / cosh^ν(bx)
    SinhOverCosh,
    /// cosh^m(ax) / sinh^ν(bx)
    CoshOverSinh,
    /// sinh^m(ax) / sinh^ν(bx)
    SinhOverSinh,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::CoshOverCosh, Family::SinhOverCosh, Family::CoshOverSinh, Family::SinhOverSinh];

    pub fn sinh_numerator(self) -> bool {
        matches!(self, Family::SinhOverCosh | Family::SinhOverSinh)
    }

    pub fn sinh_denominator(self) -> bool {
        matches!(self, Family::CoshOverSinh | Family::SinhOverSinh)
    }

    /// Short label I1..I4.
    pub fn label(self) -> &'static str {
        match self {
            Family::CoshOverCosh => "I1",
            Family::SinhOverCosh => "I2",
            Family::CoshOverSinh => "I3",
            Family::SinhOverSinh => "I4",
        }
    }

    pub fn from_label(s: &str) -> Option<Family> {
        match s.trim_end_matches(['\'', '′']) {
            "I1" => Some(Family::CoshOverCosh),
            "I2" => Some(Family::SinhOverCosh),
            "I3" => Some(Family::CoshOverSinh),
            "I4" => Some(Family::SinhOverSinh),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One integral instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralSpec {
    pub family: Family,
    pub m: u32,
    pub mu: f64,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
    pub beta_weight: f64,
    /// Numerator cos/sin(ax) in place of cosh/sinh(ax); requires m = 1.
    pub trig: bool,
}

impl IntegralSpec {
    pub fn new(family: Family, m: u32, mu: f64, nu: f64, a: f64, b: f64) -> Self {
        Self { family, m, mu, nu, a, b, beta_weight: 0.0, trig: false }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta_weight = beta;
        self
    }

    pub fn with_trig(mut self) -> Self {
        self.trig = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validity {
    pub nu_star: f64,
    pub convergent: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub formula_id: String,
    pub est_error: f64,
    pub warnings: Vec<String>,
}

impl EvalResult {
    pub(crate) fn new(value: f64, formula_id: impl Into<String>, est_error: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("closed form produced {value}")));
        }
        Ok(Self { value, formula_id: formula_id.into(), est_error: est_error.max(MIN_EST_ERROR), warnings: Vec::new() })
    }

    pub(crate) fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }
}

/// Convergence verdict for a spec.
pub fn validity(spec: &IntegralSpec) -> Validity {
    let IntegralSpec { family, m, mu, nu, a, b, beta_weight, trig } = *spec;
    let nu_star = a / b;
    let fail = |reason: String| Validity { nu_star, convergent: false, reason };
    if ![mu, nu, a, b, beta_weight].iter().all(|x| x.is_finite()) {
        return fail("non-finite parameter".into());
    }
    if !(b > 0.0) {
        return fail(format!("b = {b} must be positive"));
    }
    if a < 0.0 {
        return fail(format!("a = {a} must be non-negative"));
    }
    if beta_weight < 0.0 {
        return fail(format!("beta = {beta_weight} must be non-negative"));
    }
    if !(nu > 0.0) {
        return fail(format!("nu = {nu} must be positive"));
    }
    let md = m as f64;
    let shift = beta_weight / b;
    if trig {
        if m != 1 {
            return fail(format!("trigonometric numerator requires m = 1, got {m}"));
        }
        if !(nu > shift) {
            return fail(format!("infinity: need nu > beta/b = {shift}"));
        }
    } else {
        let bound = md * nu_star + shift;
        if !(nu > bound) {
            return fail(format!("infinity: need nu > m*a/b + beta/b = {bound}"));
        }
    }
    // Order of vanishing of the numerator at x = 0 (a sinh or sin factor
    // contributes m, or 1 in the trigonometric case).
    let zero_order = if family.sinh_numerator() { md } else { 0.0 };
    let ok_at_zero = if family.sinh_denominator() { nu < mu + zero_order } else { mu + zero_order > 0.0 };
    if !ok_at_zero {
        let need = match family {
            Family::CoshOverCosh => "mu > 0".to_string(),
            Family::SinhOverCosh => "mu + m > 0".to_string(),
            Family::CoshOverSinh => format!("nu < mu = {mu}"),
            Family::SinhOverSinh => format!("nu < m + mu = {}", md + mu),
        };
        return fail(format!("x = 0: need {need}"));
    }
    Validity { nu_star, convergent: true, reason: "convergent".into() }
}

/// α_r = (2r − m)·a/(2b) + β/(2b).
pub fn alpha_r(r: u32, spec: &IntegralSpec) -> Result<f64> {
    if r > spec.m {
        return Err(Error::Domain(format!("alpha_r needs 0 <= r <= m = {}, got r = {r}", spec.m)));
    }
    let c = spec.a / (2.0 * spec.b);
    Ok((2.0 * r as f64 - spec.m as f64) * c + spec.beta_weight / (2.0 * spec.b))
}

pub(crate) fn require_convergent(spec: &IntegralSpec) -> Result<()> {
    let v = validity(spec);
    if v.convergent {
        Ok(())
    } else {
        Err(Error::NotConvergent(v.reason))
    }
}

/// Closed form of `spec` via the most specific available representation.
pub fn evaluate(spec: &IntegralSpec) -> Result<EvalResult> {
    require_convergent(spec)?;
    let s = spec;
    let plain = s.beta_weight == 0.0;
    if s.trig {
        if s.m == 1 && s.nu == 1.0 && s.mu == 1.0 && plain {
            let variant = match s.family {
                Family::CoshOverCosh => TrigVariant::CosOverCosh,
                Family::SinhOverSinh => TrigVariant::SinOverSinh,
                Family::SinhOverCosh => TrigVariant::SinOverCosh,
                Family::CoshOverSinh => return Err(Error::NotConvergent("cos(ax)/sinh(bx) diverges at x = 0".into())),
            };
            return eval_trig(variant, s.a, s.b);
        }
        return Err(Error::UnsupportedRegion(
            "trigonometric numerators are evaluated only for m = nu = mu = 1 without weight".into(),
        ));
    }
    if s.mu == 1.0 {
        if plain && s.m == 1 && s.nu == 1.0 {
            return eval_nu1_elementary(s);
        }
        if plain && s.m == 1 {
            return eval_m1_closed(s);
        }
        return eval_section2(s);
    }
    if plain && s.m == 1 && s.nu == 1.0 && s.a < s.b {
        if s.mu == 2.0 {
            let variant = match s.family {
                Family::SinhOverCosh => Some(Mu2Variant::SinhCosh),
                Family::CoshOverSinh => Some(Mu2Variant::CoshSinh),
                Family::CoshOverCosh => Some(Mu2Variant::CoshCosh),
                Family::SinhOverSinh => None,
            };
            if let Some(v) = variant {
                return eval_mu2_elementary(v, s.a, s.b);
            }
        }
        let variant = match s.family {
            Family::CoshOverSinh => ZetaVariant::CoshSinh,
            Family::SinhOverSinh => ZetaVariant::SinhSinh,
            Family::CoshOverCosh => ZetaVariant::CoshCosh,
            Family::SinhOverCosh => ZetaVariant::SinhCosh,
        };
        return eval_zeta_forms(variant, s.mu, s.a, s.b);
    }
    eval_section3_series(s)
}

/// Any integral the crate knows how to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Spec(IntegralSpec),
    /// ∫ x^{μ-1} cosh x / sinh² x or ∫ x^{μ-1} sinh x / cosh² x.
    Example3(Example3Variant, f64),
    /// ∫ sinh^μ x / cosh^ν x.
    BetaPower {
        mu: f64,
        nu: f64,
    },
}

pub fn evaluate_target(target: &Target) -> Result<EvalResult> {
    match *target {
        Target::Spec(ref s) => evaluate(s),
        Target::Example3(v, mu) => eval_example3(v, mu),
        Target::BetaPower { mu, nu } => eval_beta_power(mu, nu),
    }
}

/// Binomial coefficient C(m, r) as f64.
pub(crate) fn binom(m: u32, r: u32) -> f64 {
    let mut c = 1.0;
    for k in 0..r {
        c = c * (m - k) as f64 / (k + 1) as f64;
    }
    c
}

//! Summation of slowly convergent series.
//!
//! Two accelerators are provided: the Euler transformation for alternating
//! series (which also assigns the Abel value to alternating series whose
//! terms grow polynomially), and Richardson extrapolation in the number of
//! terms for positive series whose terms behave like n^{-q} times a power
//! series in 1/n.

use crate::error::{Error, Result};

/// Default limit on the number of series terms an accelerator may request.
pub const DEFAULT_TERM_BUDGET: usize = 10_000;

/// An accelerated series value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub err: f64,
    pub terms: usize,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Lazily evaluated, memoised term sequence.
struct Terms<F> {
    f: F,
    cache: Vec<f64>,
}

impl<F: FnMut(usize) -> f64> Terms<F> {
    fn new(f: F) -> Self {
        Self { f, cache: Vec::new() }
    }

    fn get(&mut self, n: usize) -> Result<f64> {
        while self.cache.len() <= n {
            let k = self.cache.len();
            let v = (self.f)(k);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("series term {k} is {v}")));
            }
            self.cache.push(v);
        }
        Ok(self.cache[n])
    }
}

const EULER_MAX_DIFFERENCES: usize = 90;

/// Σ_{n≥0} (-1)^n a(n).
///
/// The first `head` terms are summed directly and the remainder is
/// replaced by its Euler transform Σ_k (-1)^k Δ^k a(head) / 2^{k+1}. If the
/// transform has not settled within `EULER_MAX_DIFFERENCES` differences the
/// head is lengthened; once the head would exceed `budget` the call fails
/// with `SlowConvergence`.
pub fn euler_alternating<F: FnMut(usize) -> f64>(a: F, tol: f64, budget: usize) -> Result<SeriesSum> {
    let mut terms = Terms::new(a);
    let mut head = 8usize;
    let mut best_err = f64::INFINITY;
    loop {
        if head + EULER_MAX_DIFFERENCES > budget.max(EULER_MAX_DIFFERENCES + 8) {
            return Err(Error::SlowConvergence { terms: terms.cache.len(), tol, err: best_err });
        }
        let mut direct = CompensatedSum::default();
        let mut mag = 0.0f64;
        for n in 0..head {
            let t = terms.get(n)?;
            mag = mag.max(t.abs());
            direct.add(if n.is_multiple_of(2) { t } else { -t });
        }
        let sign = if head.is_multiple_of(2) { 1.0 } else { -1.0 };

        let mut diag: Vec<f64> = Vec::with_capacity(EULER_MAX_DIFFERENCES);
        let mut tail = CompensatedSum::default();
        let mut scale = 0.5;
        let mut prev = f64::INFINITY;
        for k in 0..EULER_MAX_DIFFERENCES {
            let x = terms.get(head + k)?;
            mag = mag.max(x.abs());
            // diag[j] holds Δ^j a(head + k - j)
            let mut next = Vec::with_capacity(k + 1);
            next.push(x);
            for j in 1..=k {
                let v = next[j - 1] - diag[j - 1];
                next.push(v);
            }
            diag = next;
            let dk = diag[k];
            let term = if k % 2 == 0 { dk * scale } else { -dk * scale };
            scale *= 0.5;
            tail.add(term);
            let total = direct.value() + sign * tail.value();
            let roundoff = 4.0 * f64::EPSILON * (mag + direct.value().abs());
            let trunc = term.abs().max(prev);
            let err = trunc + roundoff;
            prev = term.abs();
            if k >= 6 && trunc <= (tol * total.abs()).max(roundoff) {
                return Ok(SeriesSum { value: total, err, terms: head + k + 1 });
            }
            best_err = best_err.min(err);
        }
        head *= 4;
    }
}

/// Σ_{n≥0} t(n) for positive-type series with t(n) ~ n^{-q} Σ_k c_k n^{-k},
/// q > 1.
///
/// Partial sums at N = n0·2^j are extrapolated with the known remainder
/// exponents q-1, q, q+1, ... .
pub fn richardson_power_sum<F: FnMut(usize) -> f64>(
    t: F,
    q: f64,
    n0: usize,
    tol: f64,
    budget: usize,
) -> Result<SeriesSum> {
    if !(q > 1.0) {
        return Err(Error::DivergentSeries(format!("terms decay like n^-{q}")));
    }
    let mut t = t;
    let n0 = n0.max(4);
    let mut acc = CompensatedSum::default();
    let mut mag = 0.0f64;
    let mut n = 0usize;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut best = (f64::NAN, f64::INFINITY);
    let mut target = n0;
    while target <= budget.max(n0) {
        while n < target {
            let v = t(n);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("series term {n} is {v}")));
            }
            mag = mag.max(v.abs());
            acc.add(v);
            n += 1;
        }
        let mut row = vec![acc.value()];
        if let Some(prev) = rows.last() {
            for k in 0..prev.len() {
                let r = 2f64.powf(q - 1.0 + k as f64);
                row.push((r * row[k] - prev[k]) / (r - 1.0));
            }
        }
        let j = row.len() - 1;
        if j >= 2 {
            let est = row[j];
            let roundoff = 8.0 * f64::EPSILON * (mag + est.abs());
            let trunc = (row[j] - row[j - 1]).abs().max((row[j] - rows[j - 1][j - 1]).abs());
            let err = trunc + roundoff;
            if err < best.1 {
                best = (est, err);
            }
            if trunc <= (tol * est.abs()).max(roundoff) {
                return Ok(SeriesSum { value: est, err, terms: n });
            }
        }
        rows.push(row);
        target *= 2;
    }
    Err(Error::SlowConvergence { terms: n, tol, err: best.1 })
}

/// Σ_{n≥0} t(n) for a series whose term ratio eventually stays below
/// `ratio_bound` < 1. Stops when the geometric tail bound falls below
/// `tol` relative to the running sum.
pub fn geometric_sum<F: FnMut(usize) -> f64>(t: F, ratio_bound: f64, tol: f64, budget: usize) -> Result<SeriesSum> {
    let mut t = t;
    let mut acc = CompensatedSum::default();
    let mut prev = 0.0f64;
    let mut mag = 0.0f64;
    for n in 0..budget {
        let v = t(n);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("series term {n} is {v}")));
        }
        acc.add(v);
        mag = mag.max(v.abs());
        if n > 0 && prev != 0.0 {
            let r = (v / prev).abs().max(ratio_bound);
            if r < 1.0 {
                let tail = v.abs() * r / (1.0 - r);
                let total = acc.value();
                let err = tail + 2.0 * f64::EPSILON * mag;
                if tail <= tol * total.abs().max(f64::MIN_POSITIVE) {
                    return Ok(SeriesSum { value: total, err, terms: n + 1 });
                }
            }
        }
        if v == 0.0 && n > 0 {
            return Ok(SeriesSum { value: acc.value(), err: 2.0 * f64::EPSILON * mag, terms: n + 1 });
        }
        prev = v;
    }
    Err(Error::SlowConvergence { terms: budget, tol, err: prev.abs() })
}

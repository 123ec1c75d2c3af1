//! Double-precision checks of the series representations valid for `0 < q < 1`.
//!
//! Exact numbers and polynomial values are evaluated from `Q(q)` at the
//! rational nearest to the float `q`, so the only error on that side is the
//! final rounding; the series side carries explicit geometric tail bounds.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::RatFuncQ;
use crate::qbern;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("|lhs - rhs| = {abs_error:e} exceeds tolerance {tolerance:e}")]
    ToleranceNotMet { abs_error: f64, tolerance: f64, result: Box<SeriesCheckResult> },
    #[error("truncation too short: tail bound {tail_bound:e} is not below {required:e}")]
    TruncationTooShort { tail_bound: f64, required: f64 },
    #[error("outside the domain: {0}")]
    DomainError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StatementId {
    /// `-b_n/n` as a pair of q-series
    T2,
    /// generating function of the numbers (`x = 0`)
    C3,
    /// generating function of the polynomials at integer `x`
    #[serde(rename = "GF-poly")]
    GfPoly,
    /// the generating function exactly as typeset, without `q^(alpha x)` on the first sum
    #[serde(rename = "GF-printed")]
    GfPrinted,
    /// forward difference of the generating function at `t = 0`
    #[serde(rename = "GF-fd")]
    GfFiniteDifference,
}

impl StatementId {
    pub fn as_str(&self) -> &'static str {
        match self {
            StatementId::T2 => "T2",
            StatementId::C3 => "C3",
            StatementId::GfPoly => "GF-poly",
            StatementId::GfPrinted => "GF-printed",
            StatementId::GfFiniteDifference => "GF-fd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCheckResult {
    pub statement: StatementId,
    pub alpha: u32,
    pub q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<i64>,
    pub m_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_terms: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    pub tail_bound: f64,
    pub tolerance: f64,
}

impl SeriesCheckResult {
    pub fn passed(&self) -> bool {
        self.abs_error <= self.tolerance
    }

    fn finish(self) -> Result<Self, AnalyticError> {
        if self.passed() {
            Ok(self)
        } else {
            Err(AnalyticError::ToleranceNotMet {
                abs_error: self.abs_error,
                tolerance: self.tolerance,
                result: Box::new(self),
            })
        }
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

fn bracket(m: i64, base: f64) -> f64 {
    (1.0 - base.powi(m as i32)) / (1.0 - base)
}

fn check_q(q: f64) -> Result<(), AnalyticError> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(AnalyticError::DomainError(format!("need 0 < q < 1, got {q}")))
    }
}

fn exact_f64(r: &RatFuncQ, q: f64) -> Result<f64, AnalyticError> {
    r.eval_f64(q).map_err(|e| AnalyticError::DomainError(e.to_string()))
}

/// `-b_n/n = (alpha/[alpha]_q) sum_m q^(m alpha + m) [m]^(n-1)_{q^alpha} - ((1-q)/n) sum_m q^m [m]^n_{q^alpha}`
/// truncated after `m_terms` terms.
pub fn series_number_check(
    n: u32,
    alpha: u32,
    q: f64,
    m_terms: usize,
    tolerance: f64,
) -> Result<SeriesCheckResult, AnalyticError> {
    check_q(q)?;
    if n == 0 || alpha == 0 {
        return Err(AnalyticError::DomainError("n and alpha must be positive".into()));
    }
    let qa = q.powi(alpha as i32);
    // [m]_{q^alpha} < 1/(1 - q^alpha), so both tails are geometric in q.
    let big = 1.0 / (1.0 - qa);
    let weight = alpha as f64 / bracket(alpha as i64, q);
    let tail_bound = q.powi(m_terms as i32) / (1.0 - q) * (weight * big.powi(n as i32 - 1) + big.powi(n as i32));
    if tail_bound >= tolerance / 10.0 {
        return Err(AnalyticError::TruncationTooShort { tail_bound, required: tolerance / 10.0 });
    }
    let mut first = 0.0;
    let mut second = 0.0;
    for m in 0..m_terms {
        let b = bracket(m as i64, qa);
        first += q.powi((m as i32) * (alpha as i32 + 1)) * b.powi(n as i32 - 1);
        second += q.powi(m as i32) * b.powi(n as i32);
    }
    let rhs = weight * first - (1.0 - q) / n as f64 * second;
    let lhs = -exact_f64(&qbern::weighted_number_closed(n, alpha).value, q)? / n as f64;
    SeriesCheckResult {
        statement: StatementId::T2,
        alpha,
        q,
        n: Some(n),
        t: None,
        x: None,
        m_terms,
        n_terms: None,
        lhs,
        rhs,
        abs_error: (lhs - rhs).abs(),
        tail_bound,
        tolerance,
    }
    .finish()
}

/// The generating function summed over `m < m_terms`:
/// `-t (alpha/[alpha]_q) sum_m q^(m alpha + m + alpha x) e^([m+x] t) + (1-q) sum_m q^m e^([m+x] t)`.
/// With `with_shift = false` the factor `q^(alpha x)` is dropped.
pub fn generating_function(alpha: u32, q: f64, t: f64, x: i64, m_terms: usize, with_shift: bool) -> f64 {
    let qa = q.powi(alpha as i32);
    let weight = alpha as f64 / bracket(alpha as i64, q);
    let shift = if with_shift { qa.powi(x as i32) } else { 1.0 };
    let mut first = 0.0;
    let mut second = 0.0;
    for m in 0..m_terms {
        let e = (bracket(m as i64 + x, qa) * t).exp();
        first += q.powi((m as i32) * (alpha as i32 + 1)) * e;
        second += q.powi(m as i32) * e;
    }
    -t * weight * shift * first + (1.0 - q) * second
}

fn polynomial_value(n: u32, alpha: u32, x: i64) -> RatFuncQ {
    static MEMO: OnceLock<Mutex<HashMap<(u32, u32, i64), RatFuncQ>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(v) = memo.lock().unwrap().get(&(n, alpha, x)) {
        return v.clone();
    }
    let v = qbern::polynomial_value_at_integer(n, alpha, x);
    memo.lock().unwrap().insert((n, alpha, x), v.clone());
    v
}

/// `sum_{n <= n_terms} b_n(x) t^n / n!` from the exact polynomial values.
pub fn generating_function_coefficients(alpha: u32, q: f64, t: f64, x: i64, n_terms: usize) -> Result<f64, AnalyticError> {
    let mut sum = 0.0;
    let mut scale = 1.0;
    for n in 0..=n_terms {
        if n > 0 {
            scale *= t / n as f64;
        }
        let b = exact_f64(&polynomial_value(n as u32, alpha, x), q)?;
        sum += b * scale;
    }
    Ok(sum)
}

fn gf_tail_bounds(alpha: u32, q: f64, t: f64, x: i64, m_terms: usize, n_terms: usize) -> (f64, f64) {
    let qa = q.powi(alpha as i32);
    let radius = (1.0 / (1.0 - qa)).max(bracket(x, qa).abs());
    let growth = (t.abs() * radius).exp();
    let amplitude = (1.0 + t.abs() * alpha as f64 * qa.powi(x as i32).max(1.0)) / (1.0 - q);
    let series_tail = amplitude * growth * q.powi(m_terms as i32);
    let mut taylor = amplitude * growth;
    for k in 1..=n_terms + 1 {
        taylor *= t.abs() * radius / k as f64;
    }
    (series_tail, taylor)
}

fn gf_check(
    alpha: u32,
    q: f64,
    t: f64,
    x: i64,
    m_terms: usize,
    n_terms: usize,
    tolerance: f64,
    printed: bool,
) -> Result<SeriesCheckResult, AnalyticError> {
    check_q(q)?;
    if alpha == 0 {
        return Err(AnalyticError::DomainError("alpha must be positive".into()));
    }
    if t.abs() > 0.5 {
        return Err(AnalyticError::DomainError(format!("need |t| <= 0.5, got {t}")));
    }
    let (series_tail, taylor_tail) = gf_tail_bounds(alpha, q, t, x, m_terms, n_terms);
    let tail_bound = series_tail + taylor_tail;
    if tail_bound >= tolerance / 10.0 {
        return Err(AnalyticError::TruncationTooShort { tail_bound, required: tolerance / 10.0 });
    }
    let lhs = generating_function(alpha, q, t, x, m_terms, !printed);
    let rhs = generating_function_coefficients(alpha, q, t, x, n_terms)?;
    let statement = match (printed, x) {
        (true, _) => StatementId::GfPrinted,
        (false, 0) => StatementId::C3,
        (false, _) => StatementId::GfPoly,
    };
    SeriesCheckResult {
        statement,
        alpha,
        q,
        n: None,
        t: Some(t),
        x: Some(x),
        m_terms,
        n_terms: Some(n_terms),
        lhs,
        rhs,
        abs_error: (lhs - rhs).abs(),
        tail_bound,
        tolerance,
    }
    .finish()
}

/// Series form of the generating function against `sum_n b_n(x) t^n/n!`.
pub fn generating_function_check(
    alpha: u32,
    q: f64,
    t: f64,
    x: i64,
    m_terms: usize,
    n_terms: usize,
    tolerance: f64,
) -> Result<SeriesCheckResult, AnalyticError> {
    gf_check(alpha, q, t, x, m_terms, n_terms, tolerance, false)
}

/// As [`generating_function_check`] but with the first sum missing `q^(alpha x)`;
/// agrees only at `x = 0`.
pub fn generating_function_check_printed(
    alpha: u32,
    q: f64,
    t: f64,
    x: i64,
    m_terms: usize,
    n_terms: usize,
    tolerance: f64,
) -> Result<SeriesCheckResult, AnalyticError> {
    gf_check(alpha, q, t, x, m_terms, n_terms, tolerance, true)
}

/// `(F(h) - F(0))/h` against `b_1(x)`.
pub fn finite_difference_check(
    alpha: u32,
    q: f64,
    x: i64,
    m_terms: usize,
    step: f64,
    tolerance: f64,
) -> Result<SeriesCheckResult, AnalyticError> {
    check_q(q)?;
    let lhs = (generating_function(alpha, q, step, x, m_terms, true) - generating_function(alpha, q, 0.0, x, m_terms, true)) / step;
    let rhs = exact_f64(&qbern::polynomial_value_at_integer(1, alpha, x), q)?;
    SeriesCheckResult {
        statement: StatementId::GfFiniteDifference,
        alpha,
        q,
        n: Some(1),
        t: Some(step),
        x: Some(x),
        m_terms,
        n_terms: None,
        lhs,
        rhs,
        abs_error: (lhs - rhs).abs(),
        tail_bound: step,
        tolerance,
    }
    .finish()
}

/// Smallest number of `m` terms whose geometric tail is below `tolerance / 100`.
pub fn default_m_terms(q: f64, alpha: u32, tolerance: f64) -> usize {
    let qa = q.powi(alpha as i32);
    let amplitude = 4.0 / ((1.0 - q) * (1.0 - qa).powi(12));
    ((tolerance / (100.0 * amplitude)).ln() / q.ln()).ceil().max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_series_examples() {
        let r = series_number_check(1, 1, 0.5, 60, 1e-12).unwrap();
        assert!((r.lhs - 1.0 / 1.5).abs() < 1e-15);
        let r = series_number_check(2, 1, 0.5, 80, 1e-12).unwrap();
        assert!((r.lhs + 0.5 / (1.5 * 1.75) / 2.0).abs() < 1e-15);
        series_number_check(1, 3, 0.25, 60, 1e-12).unwrap();
        assert!(matches!(series_number_check(1, 1, 0.5, 5, 1e-12), Err(AnalyticError::TruncationTooShort { .. })));
        assert!(matches!(series_number_check(1, 1, 1.5, 60, 1e-12), Err(AnalyticError::DomainError(_))));
    }

    #[test]
    fn generating_function_examples() {
        generating_function_check(1, 0.5, 0.1, 0, 80, 12, 1e-10).unwrap();
        let r = generating_function_check(3, 0.5, 0.0, 0, 80, 12, 1e-10).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        generating_function_check(2, 0.3, 0.2, 1, 80, 14, 1e-10).unwrap();
    }

    #[test]
    fn printed_form_fails_off_zero() {
        assert!(generating_function_check_printed(2, 0.3, 0.2, 0, 80, 14, 1e-10).is_ok());
        let err = generating_function_check_printed(2, 0.3, 0.2, 1, 80, 14, 1e-10).unwrap_err();
        let AnalyticError::ToleranceNotMet { abs_error, .. } = err else { panic!("{err:?}") };
        assert!(abs_error > 0.1);
    }

    #[test]
    fn finite_difference_recovers_b1() {
        for x in [0, 1] {
            finite_difference_check(2, 0.5, x, 100, 1e-6, 1e-4).unwrap();
        }
    }

    #[test]
    fn truncation_monotone() {
        let errs: Vec<f64> = [20usize, 40, 60, 80]
            .iter()
            .map(|&m| {
                let lhs = generating_function(1, 0.5, 0.2, 1, m, true);
                (lhs - generating_function_coefficients(1, 0.5, 0.2, 1, 14).unwrap()).abs()
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{errs:?}");
    }
}

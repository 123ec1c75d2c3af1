//! Executable forms of the identities satisfied by the weighted q-Bernoulli
//! numbers and polynomials.
//!
//! Every check produces both sides as canonical elements of `Q(q)`; a check
//! passes exactly when they are equal (and, for checks with auxiliary
//! equalities, when those are equal too). Values at a few rational points are
//! recorded alongside as redundant evidence.
//!
//! Arguments `x` are integers throughout: for non-integer `x`, `q^(alpha x)`
//! is not an element of `Q(q)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{self, RatFuncQ};
use crate::qbern::{self, q_bracket, weight_factor, QBernCache, QBernError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("{identity} requires {param} >= {min}, got {value}")]
    InvalidIndex { identity: IdentityId, param: &'static str, min: i64, value: i64 },
    #[error(transparent)]
    QBern(#[from] QBernError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    /// shifted values `q^n b_m(n) - b_m` as finite sums
    T5,
    /// `q b_n(1) - b_n = (alpha/[alpha]_q) [n == 1]`
    T6,
    /// umbral recurrence `q (q^alpha b + 1)^n - b_n`
    C7,
    /// distribution relation over base `q^d`
    T8,
    /// reflection `b_{n,1/q}(1-x) = (-1)^n q^(alpha n) b_{n,q}(x)`
    T9,
    /// alternating binomial sum chain and the bracket kernel `[1-x]_{1/q^alpha} = 1 - [x]_{q^alpha}`
    C10,
    /// `q^2 b_n(2)` for `n >= 2`
    T11,
    /// closed form versus Y-basis evaluation of the polynomials
    #[serde(rename = "T4-consistency")]
    T4Consistency,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::T5,
        IdentityId::T6,
        IdentityId::C7,
        IdentityId::T8,
        IdentityId::T9,
        IdentityId::C10,
        IdentityId::T11,
        IdentityId::T4Consistency,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::T5 => "T5",
            IdentityId::T6 => "T6",
            IdentityId::C7 => "C7",
            IdentityId::T8 => "T8",
            IdentityId::T9 => "T9",
            IdentityId::C10 => "C10",
            IdentityId::T11 => "T11",
            IdentityId::T4Consistency => "T4-consistency",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        Self::ALL.into_iter().find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxEquality {
    pub label: String,
    pub lhs: RatFuncQ,
    pub rhs: RatFuncQ,
    pub passed: bool,
}

impl AuxEquality {
    fn new(label: impl Into<String>, lhs: RatFuncQ, rhs: RatFuncQ) -> Self {
        let passed = lhs == rhs;
        AuxEquality { label: label.into(), lhs, rhs, passed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    #[serde(with = "exactq::rational_string")]
    pub q: BigRational,
    #[serde(with = "exactq::opt_rational_string")]
    pub lhs: Option<BigRational>,
    #[serde(with = "exactq::opt_rational_string")]
    pub rhs: Option<BigRational>,
}

/// Sample points for the numeric spot checks.
pub fn spot_points() -> [BigRational; 3] {
    [
        BigRational::from_integer(2.into()),
        BigRational::new(1.into(), 2.into()),
        BigRational::new((-1).into(), 3.into()),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub params: BTreeMap<String, i64>,
    pub lhs: RatFuncQ,
    pub rhs: RatFuncQ,
    /// `lhs == rhs`, and every auxiliary equality holds.
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub auxiliary: Vec<AuxEquality>,
    pub spot_checks: Vec<SpotCheck>,
}

impl IdentityReport {
    fn new(
        identity_id: IdentityId,
        params: &[(&str, i64)],
        lhs: RatFuncQ,
        rhs: RatFuncQ,
        auxiliary: Vec<AuxEquality>,
    ) -> Self {
        let passed = lhs == rhs && auxiliary.iter().all(|a| a.passed);
        let spot_checks = spot_points()
            .into_iter()
            .map(|q| SpotCheck { lhs: lhs.eval_at(&q).ok(), rhs: rhs.eval_at(&q).ok(), q })
            .collect();
        IdentityReport {
            identity_id,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            passed,
            auxiliary,
            spot_checks,
        }
    }

    /// Parameters rendered as `k=v` pairs in key order.
    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Runs identity checks against a shared number/polynomial memo.
#[derive(Debug, Default)]
pub struct IdentityChecker {
    cache: QBernCache,
}

fn rf(c: i64) -> RatFuncQ {
    RatFuncQ::from_int(c)
}

fn sign(n: u32) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

impl IdentityChecker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cache(&self) -> &QBernCache {
        &self.cache
    }

    fn require(id: IdentityId, param: &'static str, value: i64, min: i64) -> Result<(), IdentityError> {
        if value < min {
            return Err(IdentityError::InvalidIndex { identity: id, param, min, value });
        }
        Ok(())
    }

    /// `q^n b_m(n) - b_m = (q-1) sum_{l<n} q^l [l]^m + (m alpha/[alpha]_q) sum_{l<n} q^(alpha l + l) [l]^(m-1)`
    /// with `[0]^0 = 1`.
    pub fn check_theorem5(&self, m: u32, n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::T5, "n", n as i64, 1)?;
        Self::require(IdentityId::T5, "alpha", alpha as i64, 1)?;
        let shifted = qbern::polynomial_value_at_integer(m, alpha, n as i64).mul_q_pow(n as i64);
        let lhs = &shifted - &self.cache.number(m, alpha);

        let brackets: Vec<RatFuncQ> = (0..n as i64).map(|l| q_bracket(l, alpha)).collect();
        let first: RatFuncQ = brackets
            .iter()
            .enumerate()
            .map(|(l, b)| b.pow(m as i64).unwrap().mul_q_pow(l as i64))
            .sum();
        let mut rhs = &first * &(&RatFuncQ::q_pow(1) - &RatFuncQ::one());
        if m > 0 {
            let second: RatFuncQ = brackets
                .iter()
                .enumerate()
                .map(|(l, b)| b.pow(m as i64 - 1).unwrap().mul_q_pow((alpha as i64 + 1) * l as i64))
                .sum();
            rhs = &rhs + &(&second * &weight_factor(alpha).scale_by(&BigRational::from_integer(m.into())));
        }
        let params = [("m", m as i64), ("n", n as i64), ("alpha", alpha as i64)];
        Ok(IdentityReport::new(IdentityId::T5, &params, lhs, rhs, Vec::new()))
    }

    /// `b_0 = 1` and `q b_n(1) - b_n = (alpha/[alpha]_q) [n == 1]` for `n >= 1`.
    pub fn check_recurrence(&self, n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::T6, "alpha", alpha as i64, 1)?;
        let params = [("n", n as i64), ("alpha", alpha as i64)];
        let (lhs, rhs) = if n == 0 {
            (self.cache.number(0, alpha), RatFuncQ::one())
        } else {
            let at_one = qbern::polynomial_value_at_integer(n, alpha, 1).mul_q_pow(1);
            let lhs = &at_one - &self.cache.number(n, alpha);
            let rhs = if n == 1 { weight_factor(alpha) } else { RatFuncQ::zero() };
            (lhs, rhs)
        };
        Ok(IdentityReport::new(IdentityId::T6, &params, lhs, rhs, Vec::new()))
    }

    /// Umbral form `q sum_l C(n,l) q^(alpha l) b_l - b_n = (alpha/[alpha]_q) [n == 1]`.
    pub fn check_umbral(&self, n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::C7, "alpha", alpha as i64, 1)?;
        let params = [("n", n as i64), ("alpha", alpha as i64)];
        let numbers = self.cache.numbers(n, alpha);
        let (lhs, rhs) = if n == 0 {
            (numbers[0].clone(), RatFuncQ::one())
        } else {
            let expanded: RatFuncQ = numbers
                .iter()
                .enumerate()
                .map(|(l, b)| {
                    let c = BigRational::from_integer(qbern::binomial(n as u64, l as u64));
                    b.scale_by(&c).mul_q_pow(alpha as i64 * l as i64 + 1)
                })
                .sum();
            let lhs = &expanded - &numbers[n as usize];
            let rhs = if n == 1 { weight_factor(alpha) } else { RatFuncQ::zero() };
            (lhs, rhs)
        };
        Ok(IdentityReport::new(IdentityId::C7, &params, lhs, rhs, Vec::new()))
    }

    /// `b_{n,q}(x) = ([d]_{q^alpha}^n / [d]_q) sum_{a<d} q^a b_{n,q^d}((x+a)/d)`.
    pub fn check_distribution(&self, n: u32, alpha: u32, d: u32, x: i64) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::T8, "alpha", alpha as i64, 1)?;
        Self::require(IdentityId::T8, "d", d as i64, 1)?;
        let lhs = qbern::polynomial_value_at_integer(n, alpha, x);
        let over_qd = self.cache.polynomial(n, alpha).subst_power(d as i64)?;
        let mut sum = RatFuncQ::zero();
        for a in 0..d as i64 {
            let term = over_qd.eval_at_rational(x + a, d)?.mul_q_pow(a);
            sum = &sum + &term;
        }
        let factor = &q_bracket(d as i64, alpha).pow(n as i64).unwrap() / &q_bracket(d as i64, 1);
        let rhs = &factor * &sum;
        let params = [("n", n as i64), ("alpha", alpha as i64), ("d", d as i64), ("x", x)];
        Ok(IdentityReport::new(IdentityId::T8, &params, lhs, rhs, Vec::new()))
    }

    /// `b_{n,1/q}(1-x) = (-1)^n q^(alpha n) b_{n,q}(x)`.
    pub fn check_reflection(&self, n: u32, alpha: u32, x: i64) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::T9, "alpha", alpha as i64, 1)?;
        let inverted = self.cache.polynomial(n, alpha).subst_power(-1)?;
        let lhs = inverted.eval_at_integer(1 - x);
        let rhs = qbern::polynomial_value_at_integer(n, alpha, x)
            .mul_q_pow(alpha as i64 * n as i64)
            .scale_by(&BigRational::from_integer(sign(n).into()));
        let params = [("n", n as i64), ("alpha", alpha as i64), ("x", x)];
        Ok(IdentityReport::new(IdentityId::T9, &params, lhs, rhs, Vec::new()))
    }

    /// `sum_l C(n,l) (-1)^l b_l = (-1)^n q^(alpha n) b_n(-1) = b_{n,1/q}(2)`, together with
    /// the kernel `[1-x]_{q^-alpha} = 1 - [x]_{q^alpha}` both symbolically in `Y` and at
    /// the integers of [`DEFAULT_X`].
    pub fn check_corollary10(&self, n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::C10, "alpha", alpha as i64, 1)?;
        let a = alpha as i64;
        let numbers = self.cache.numbers(n, alpha);
        let lhs: RatFuncQ = numbers
            .iter()
            .enumerate()
            .map(|(l, b)| {
                let c = qbern::binomial(n as u64, l as u64) * sign(l as u32);
                b.scale_by(&BigRational::from_integer(c))
            })
            .sum();
        let rhs = self.cache.polynomial(n, alpha).subst_power(-1)?.eval_at_integer(2);
        let middle = qbern::polynomial_value_at_integer(n, alpha, -1)
            .mul_q_pow(a * n as i64)
            .scale_by(&BigRational::from_integer(sign(n).into()));

        let mut aux = vec![
            AuxEquality::new("sum = (-1)^n q^(alpha n) b_n(-1)", lhs.clone(), middle.clone()),
            AuxEquality::new("(-1)^n q^(alpha n) b_n(-1) = b_{n,1/q}(2)", middle, rhs.clone()),
        ];
        // [1-x]_{q^-alpha} with q^(alpha x) = 1 + (q^alpha - 1) Y is
        // (1 - q^-alpha) / (1 - q^-alpha) - q^-alpha (q^alpha - 1) / (1 - q^-alpha) * Y.
        let inv_base = &RatFuncQ::one() - &RatFuncQ::q_pow(-a);
        let c0 = &inv_base / &inv_base;
        let c1 = -(&(&RatFuncQ::q_pow(a) - &RatFuncQ::one()).mul_q_pow(-a) / &inv_base);
        aux.push(AuxEquality::new("kernel Y^0", c0, RatFuncQ::one()));
        aux.push(AuxEquality::new("kernel Y^1", c1, rf(-1)));
        for x in DEFAULT_X {
            let kernel = q_bracket(1 - x, alpha).subst_power(-1).map_err(QBernError::from)?;
            let expected = &RatFuncQ::one() - &q_bracket(x, alpha);
            aux.push(AuxEquality::new(format!("kernel x={x}"), kernel, expected));
        }
        let params = [("n", n as i64), ("alpha", a)];
        Ok(IdentityReport::new(IdentityId::C10, &params, lhs, rhs, aux))
    }

    /// `q^2 b_n(2) = n q^(1+alpha) alpha/[alpha]_q + q^2 - q + b_n` for `n >= 2`.
    pub fn check_theorem11(&self, n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::T11, "n", n as i64, 2)?;
        Self::require(IdentityId::T11, "alpha", alpha as i64, 1)?;
        let a = alpha as i64;
        let lhs = qbern::polynomial_value_at_integer(n, alpha, 2).mul_q_pow(2);
        let linear = weight_factor(alpha)
            .mul_q_pow(1 + a)
            .scale_by(&BigRational::from_integer(n.into()));
        let quadratic = &RatFuncQ::q_pow(2) - &RatFuncQ::q_pow(1);
        let rhs = &(&linear + &quadratic) + &self.cache.number(n, alpha);
        let params = [("n", n as i64), ("alpha", a)];
        Ok(IdentityReport::new(IdentityId::T11, &params, lhs, rhs, Vec::new()))
    }

    /// Closed-form value at integer `x` against the Y-basis polynomial at `Y = [x]_{q^alpha}`.
    pub fn check_t4_consistency(&self, n: u32, alpha: u32, x: i64) -> Result<IdentityReport, IdentityError> {
        Self::require(IdentityId::T4Consistency, "alpha", alpha as i64, 1)?;
        let lhs = qbern::polynomial_value_at_integer(n, alpha, x);
        let rhs = self.cache.polynomial(n, alpha).eval_at_integer(x);
        let params = [("n", n as i64), ("alpha", alpha as i64), ("x", x)];
        Ok(IdentityReport::new(IdentityId::T4Consistency, &params, lhs, rhs, Vec::new()))
    }

    /// Every check on the grid, ordered by identity then parameters.
    pub fn run_grid(&self, grid: &GridSpec) -> Result<Vec<IdentityReport>, IdentityError> {
        let mut reports = Vec::new();
        for &id in &grid.ids {
            for &alpha in grid.alpha.iter().filter(|&&a| a >= 1) {
                match id {
                    IdentityId::T5 => {
                        for &m in &grid.m {
                            for &n in grid.n.iter().filter(|&&n| n >= 1) {
                                reports.push(self.check_theorem5(m, n, alpha)?);
                            }
                        }
                    }
                    IdentityId::T6 | IdentityId::C7 | IdentityId::C10 | IdentityId::T11 => {
                        for &n in &grid.n {
                            let report = match id {
                                IdentityId::T6 => self.check_recurrence(n, alpha)?,
                                IdentityId::C7 => self.check_umbral(n, alpha)?,
                                IdentityId::C10 => self.check_corollary10(n, alpha)?,
                                _ if n < 2 => continue,
                                _ => self.check_theorem11(n, alpha)?,
                            };
                            reports.push(report);
                        }
                    }
                    IdentityId::T8 => {
                        for &n in &grid.n {
                            for &d in grid.d.iter().filter(|&&d| d >= 1) {
                                for &x in &grid.x {
                                    reports.push(self.check_distribution(n, alpha, d, x)?);
                                }
                            }
                        }
                    }
                    IdentityId::T9 | IdentityId::T4Consistency => {
                        for &n in &grid.n {
                            for &x in &grid.x {
                                reports.push(if id == IdentityId::T9 {
                                    self.check_reflection(n, alpha, x)?
                                } else {
                                    self.check_t4_consistency(n, alpha, x)?
                                });
                            }
                        }
                    }
                }
            }
        }
        reports.sort_by(|a, b| (a.identity_id, &a.params).cmp(&(b.identity_id, &b.params)));
        reports.dedup_by(|a, b| a.identity_id == b.identity_id && a.params == b.params);
        Ok(reports)
    }
}

pub const DEFAULT_X: [i64; 6] = [-2, -1, 0, 1, 2, 3];

/// Parameter ranges for [`IdentityChecker::run_grid`]. Each identity draws the
/// parameters it uses; the others are ignored for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub ids: Vec<IdentityId>,
    pub n: Vec<u32>,
    pub m: Vec<u32>,
    pub alpha: Vec<u32>,
    pub d: Vec<u32>,
    pub x: Vec<i64>,
}

impl Default for GridSpec {
    /// `n <= 8, m <= 6, alpha <= 4, d <= 4, x in -2..=3`, all identities.
    fn default() -> Self {
        GridSpec {
            ids: IdentityId::ALL.to_vec(),
            n: (0..=8).collect(),
            m: (0..=6).collect(),
            alpha: (1..=4).collect(),
            d: (1..=4).collect(),
            x: DEFAULT_X.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GridSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

pub fn summarize(reports: &[IdentityReport]) -> GridSummary {
    let passed = reports.iter().filter(|r| r.passed).count();
    GridSummary { total: reports.len(), passed, failed: reports.len() - passed }
}

pub fn run_grid(grid: &GridSpec) -> Result<Vec<IdentityReport>, IdentityError> {
    IdentityChecker::new().run_grid(grid)
}

pub fn check_theorem5(m: u32, n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
    IdentityChecker::new().check_theorem5(m, n, alpha)
}

pub fn check_recurrence(n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
    IdentityChecker::new().check_recurrence(n, alpha)
}

pub fn check_distribution(n: u32, alpha: u32, d: u32, x: i64) -> Result<IdentityReport, IdentityError> {
    IdentityChecker::new().check_distribution(n, alpha, d, x)
}

pub fn check_reflection(n: u32, alpha: u32, x: i64) -> Result<IdentityReport, IdentityError> {
    IdentityChecker::new().check_reflection(n, alpha, x)
}

pub fn check_corollary10(n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
    IdentityChecker::new().check_corollary10(n, alpha)
}

pub fn check_theorem11(n: u32, alpha: u32) -> Result<IdentityReport, IdentityError> {
    IdentityChecker::new().check_theorem11(n, alpha)
}

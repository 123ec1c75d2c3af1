//! Finite-precision p-adic arithmetic and the Riemann sums
//! `(1/[p^N]_q) sum_{x < p^N} q^x f(x)` whose limit defines the p-adic q-integral.
//!
//! A nonzero [`PadicNumber`] is `p^v * u` with `u` a unit known modulo
//! `p^prec`. Values known only to be divisible by `p^a` are carried as a zero
//! flag with absolute precision `a`. Dividing by `[p^N]_q`, which has valuation
//! exactly `N` when `q = 1 (mod p)`, therefore only shifts the valuation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq;
use crate::qbern::{self, QBernError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("division by a p-adic zero")]
    DivisionByZero,
    #[error("no significant p-adic digits left")]
    PrecisionExhausted,
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("operands live in Q_{0} and Q_{1}")]
    PrimeMismatch(u32, u32),
    #[error("{0} is not an odd prime")]
    InvalidPrime(u32),
}

impl From<QBernError> for PadicError {
    fn from(e: QBernError) -> Self {
        PadicError::DomainError(e.to_string())
    }
}

pub fn is_odd_prime(p: u32) -> bool {
    p > 2 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_prime(p: u32) -> Result<(), PadicError> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(PadicError::InvalidPrime(p))
    }
}

fn p_pow(p: u32, k: i64) -> BigInt {
    num_traits::pow(BigInt::from(p), k.max(0) as usize)
}

/// Splits off the largest power of `p` dividing a nonzero integer.
fn split_p(x: &BigInt, p: u32) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// `v_p` of a nonzero rational.
pub fn rational_valuation(r: &BigRational, p: u32) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(split_p(r.numer(), p).0 - split_p(r.denom(), p).0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    /// Divisible by `p^abs_prec`; `None` marks an exact zero.
    Zero { abs_prec: Option<i64> },
    Unit { valuation: i64, unit: BigInt, prec: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PadicRepr", try_from = "PadicRepr")]
pub struct PadicNumber {
    p: u32,
    kind: Kind,
}

impl PadicNumber {
    /// Exact zero.
    pub fn zero(p: u32) -> Self {
        PadicNumber { p, kind: Kind::Zero { abs_prec: None } }
    }

    /// An element known only to lie in `p^abs_prec Z_p`.
    pub fn zero_mod(p: u32, abs_prec: i64) -> Self {
        PadicNumber { p, kind: Kind::Zero { abs_prec: Some(abs_prec) } }
    }

    /// `p^valuation * unit` with `unit` known modulo `p^prec`. Factors of `p`
    /// in `unit` are moved into the valuation, consuming precision.
    pub fn from_parts(p: u32, valuation: i64, unit: &BigInt, prec: u32) -> Result<Self, PadicError> {
        check_prime(p)?;
        if prec == 0 {
            return Err(PadicError::PrecisionExhausted);
        }
        let modulus = p_pow(p, prec as i64);
        let u = unit.mod_floor(&modulus);
        if u.is_zero() {
            return Ok(Self::zero_mod(p, valuation + prec as i64));
        }
        let (k, rest) = split_p(&u, p);
        let prec = prec - k as u32;
        let unit = rest.mod_floor(&p_pow(p, prec as i64));
        Ok(PadicNumber { p, kind: Kind::Unit { valuation: valuation + k, unit, prec } })
    }

    pub fn from_integer(n: &BigInt, p: u32, prec: u32) -> Result<Self, PadicError> {
        Self::from_rational(&BigRational::from_integer(n.clone()), p, prec)
    }

    /// Expansion of `r` to `prec` significant digits.
    pub fn from_rational(r: &BigRational, p: u32, prec: u32) -> Result<Self, PadicError> {
        check_prime(p)?;
        if r.is_zero() {
            return Ok(Self::zero(p));
        }
        if prec == 0 {
            return Err(PadicError::PrecisionExhausted);
        }
        let (vn, un) = split_p(r.numer(), p);
        let (vd, ud) = split_p(r.denom(), p);
        let modulus = p_pow(p, prec as i64);
        let inv = ud.mod_floor(&modulus).modinv(&modulus).expect("unit is invertible");
        let unit = (un * inv).mod_floor(&modulus);
        Ok(PadicNumber { p, kind: Kind::Unit { valuation: vn - vd, unit, prec } })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// True for the zero flag, exact or not.
    pub fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero { abs_prec: None })
    }

    /// `None` for the zero flag.
    pub fn valuation(&self) -> Option<i64> {
        match self.kind {
            Kind::Unit { valuation, .. } => Some(valuation),
            Kind::Zero { .. } => None,
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        match &self.kind {
            Kind::Unit { unit, .. } => Some(unit),
            Kind::Zero { .. } => None,
        }
    }

    /// Significant digits of the unit; zero for the zero flag.
    pub fn precision(&self) -> u32 {
        match self.kind {
            Kind::Unit { prec, .. } => prec,
            Kind::Zero { .. } => 0,
        }
    }

    /// The value is known modulo `p^abs_precision`; `None` for an exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match self.kind {
            Kind::Unit { valuation, prec, .. } => Some(valuation + prec as i64),
            Kind::Zero { abs_prec } => abs_prec,
        }
    }

    /// The rational `p^v * u` with `u` the stored residue.
    pub fn to_rational(&self) -> BigRational {
        match &self.kind {
            Kind::Zero { .. } => BigRational::zero(),
            Kind::Unit { valuation, unit, .. } => {
                let pv = p_pow(self.p, valuation.abs());
                if *valuation >= 0 {
                    BigRational::from_integer(unit * pv)
                } else {
                    BigRational::new(unit.clone(), pv)
                }
            }
        }
    }

    /// Truncates to at most `prec` significant digits.
    pub fn with_precision(&self, prec: u32) -> Result<Self, PadicError> {
        match &self.kind {
            Kind::Unit { valuation, unit, prec: own } if prec < *own => {
                Self::from_parts(self.p, *valuation, unit, prec)
            }
            _ => Ok(self.clone()),
        }
    }

    /// Forgets everything below `p^abs`.
    fn truncate_abs(&self, abs: i64) -> Self {
        match &self.kind {
            Kind::Zero { abs_prec } => {
                let a = abs_prec.map_or(abs, |a| a.min(abs));
                Self::zero_mod(self.p, a)
            }
            Kind::Unit { valuation, unit, prec } => {
                if abs <= *valuation {
                    Self::zero_mod(self.p, abs)
                } else if abs - valuation < *prec as i64 {
                    let prec = (abs - valuation) as u32;
                    let unit = unit.mod_floor(&p_pow(self.p, prec as i64));
                    PadicNumber { p: self.p, kind: Kind::Unit { valuation: *valuation, unit, prec } }
                } else {
                    self.clone()
                }
            }
        }
    }

    fn same_prime(&self, other: &Self) -> Result<(), PadicError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(PadicError::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        match (&self.kind, &other.kind) {
            (Kind::Zero { abs_prec: None }, _) => Ok(other.clone()),
            (_, Kind::Zero { abs_prec: None }) => Ok(self.clone()),
            (Kind::Zero { abs_prec: Some(a) }, _) => Ok(other.truncate_abs(*a)),
            (_, Kind::Zero { abs_prec: Some(b) }) => Ok(self.truncate_abs(*b)),
            (
                Kind::Unit { valuation: va, unit: ua, prec: pa },
                Kind::Unit { valuation: vb, unit: ub, prec: pb },
            ) => {
                let v = *va.min(vb);
                let abs = (va + *pa as i64).min(vb + *pb as i64);
                let sum = ua * p_pow(self.p, va - v) + ub * p_pow(self.p, vb - v);
                Self::from_parts(self.p, v, &sum, (abs - v) as u32)
            }
        }
    }

    pub fn try_neg(&self) -> Result<Self, PadicError> {
        Ok(match &self.kind {
            Kind::Zero { .. } => self.clone(),
            Kind::Unit { valuation, unit, prec } => {
                let unit = (-unit).mod_floor(&p_pow(self.p, *prec as i64));
                PadicNumber { p: self.p, kind: Kind::Unit { valuation: *valuation, unit, prec: *prec } }
            }
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        let p = self.p;
        Ok(match (&self.kind, &other.kind) {
            (Kind::Zero { abs_prec: None }, _) | (_, Kind::Zero { abs_prec: None }) => Self::zero(p),
            (Kind::Zero { abs_prec: Some(a) }, Kind::Zero { abs_prec: Some(b) }) => Self::zero_mod(p, a + b),
            (Kind::Zero { abs_prec: Some(a) }, Kind::Unit { valuation, .. })
            | (Kind::Unit { valuation, .. }, Kind::Zero { abs_prec: Some(a) }) => Self::zero_mod(p, a + valuation),
            (
                Kind::Unit { valuation: va, unit: ua, prec: pa },
                Kind::Unit { valuation: vb, unit: ub, prec: pb },
            ) => {
                let prec = *pa.min(pb);
                let unit = (ua * ub).mod_floor(&p_pow(p, prec as i64));
                PadicNumber { p, kind: Kind::Unit { valuation: va + vb, unit, prec } }
            }
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        let p = self.p;
        let Kind::Unit { valuation: vb, unit: ub, prec: pb } = &other.kind else {
            return Err(PadicError::DivisionByZero);
        };
        Ok(match &self.kind {
            Kind::Zero { abs_prec: None } => Self::zero(p),
            Kind::Zero { abs_prec: Some(a) } => Self::zero_mod(p, a - vb),
            Kind::Unit { valuation: va, unit: ua, prec: pa } => {
                let prec = *pa.min(pb);
                let modulus = p_pow(p, prec as i64);
                let inv = ub.mod_floor(&modulus).modinv(&modulus).expect("unit is invertible");
                let unit = (ua * inv).mod_floor(&modulus);
                PadicNumber { p, kind: Kind::Unit { valuation: va - vb, unit, prec } }
            }
        })
    }

    pub fn try_pow(&self, k: u32) -> Result<Self, PadicError> {
        let mut acc = Self::from_integer(&BigInt::one(), self.p, self.precision().max(1))?;
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Valuation of `self - other`: how far the two agree.
    pub fn agreement(&self, other: &Self) -> Result<Defect, PadicError> {
        Ok(Defect::of(&self.try_sub(other)?))
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match &self.kind {
            Kind::Zero { abs_prec: None } => write!(f, "0"),
            Kind::Zero { abs_prec: Some(a) } => write!(f, "O({p}^{a})"),
            Kind::Unit { valuation, unit, prec } => {
                write!(f, "{unit}*{p}^{valuation} + O({p}^{})", valuation + *prec as i64)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PadicRepr {
    p: u32,
    zero: bool,
    valuation: Option<i64>,
    unit: Option<String>,
    precision: u32,
    abs_precision: Option<i64>,
}

impl From<PadicNumber> for PadicRepr {
    fn from(x: PadicNumber) -> Self {
        PadicRepr {
            p: x.p,
            zero: x.is_zero(),
            valuation: x.valuation(),
            unit: x.unit().map(|u| u.to_string()),
            precision: x.precision(),
            abs_precision: x.abs_precision(),
        }
    }
}

impl TryFrom<PadicRepr> for PadicNumber {
    type Error = String;

    fn try_from(r: PadicRepr) -> Result<Self, String> {
        if r.zero {
            return Ok(PadicNumber { p: r.p, kind: Kind::Zero { abs_prec: r.abs_precision } });
        }
        let (Some(valuation), Some(unit)) = (r.valuation, r.unit) else {
            return Err("nonzero p-adic number needs valuation and unit".into());
        };
        let unit: BigInt = unit.parse().map_err(|e| format!("{e}"))?;
        PadicNumber::from_parts(r.p, valuation, &unit, r.precision).map_err(|e| e.to_string())
    }
}

/// `embed_rational`: the image of `r` in `Q_p` to `prec` digits.
pub fn embed_rational(r: &BigRational, p: u32, prec: u32) -> Result<PadicNumber, PadicError> {
    PadicNumber::from_rational(r, p, prec)
}

/// `log(q) = sum_k (-1)^(k+1) (q-1)^k / k`, correct to `prec` significant digits
/// (fewer if `q` itself carries fewer).
pub fn padic_log(q: &PadicNumber, prec: u32) -> Result<PadicNumber, PadicError> {
    let p = q.p;
    check_prime(p)?;
    let one = PadicNumber::from_integer(&BigInt::one(), p, q.precision().max(prec) + 1)?;
    let y = q.try_sub(&one)?;
    let Some(v) = y.valuation() else {
        // q == 1 to the precision q is known.
        return Ok(y);
    };
    if v < 1 {
        return Err(PadicError::DomainError(format!("v_{p}(q - 1) = {v} < 1")));
    }
    // Each term keeps y's relative precision; the series is summed to absolute
    // precision v + prec and then trimmed.
    let target = v + prec as i64;
    let y = y.with_precision(prec + 1)?;
    let mut sum = PadicNumber::zero(p);
    let mut power = y.clone();
    let mut k: i64 = 1;
    loop {
        let log_k = (k as f64).log(p as f64).floor() as i64;
        if k > 1 && k * v - log_k >= target {
            break;
        }
        let kk = PadicNumber::from_integer(&BigInt::from(k), p, prec + 1)?;
        let term = power.try_div(&kk)?;
        sum = if k % 2 == 1 { sum.try_add(&term)? } else { sum.try_sub(&term)? };
        power = power.try_mul(&y)?;
        k += 1;
    }
    Ok(sum.truncate_abs(target))
}

/// `v_p` of a difference, or the absolute precision when the difference is
/// indistinguishable from zero (`saturated`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub valuation: i64,
    pub saturated: bool,
}

impl Defect {
    pub fn of(diff: &PadicNumber) -> Self {
        match (diff.valuation(), diff.abs_precision()) {
            (Some(v), _) => Defect { valuation: v, saturated: false },
            (None, Some(a)) => Defect { valuation: a, saturated: true },
            (None, None) => Defect { valuation: i64::MAX, saturated: true },
        }
    }

    /// Whether the defect is at least `k` (a saturated defect counts as exact).
    pub fn at_least(&self, k: i64) -> bool {
        self.saturated || self.valuation >= k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiemannSumResult {
    pub n: u32,
    pub alpha: u32,
    pub p: u32,
    #[serde(with = "exactq::rational_string")]
    pub q: BigRational,
    pub level: u32,
    pub precision: u32,
    pub value: PadicNumber,
    pub reference: PadicNumber,
    pub defect: Defect,
}

/// Guard digits used when no precision is given.
pub const GUARD_DIGITS: u32 = 8;

pub fn default_precision(level: u32) -> u32 {
    level + GUARD_DIGITS
}

fn validate(p: u32, alpha: u32, q: &BigRational, level: u32, precision: u32) -> Result<(), PadicError> {
    check_prime(p)?;
    if alpha == 0 {
        return Err(PadicError::DomainError("alpha must be positive".into()));
    }
    if level == 0 {
        return Err(PadicError::DomainError("level must be positive".into()));
    }
    if precision <= level {
        return Err(PadicError::PrecisionExhausted);
    }
    match rational_valuation(&(q - BigRational::one()), p) {
        Some(v) if v >= 1 => Ok(()),
        _ => Err(PadicError::DomainError(format!("need q = 1 (mod {p}), got q = {q}"))),
    }
}

/// Residue of a p-integral rational modulo `m`.
fn residue(r: &BigRational, m: &BigInt) -> BigInt {
    let inv = r.denom().mod_floor(m).modinv(m).expect("p-integral");
    (r.numer() * inv).mod_floor(m)
}

/// Sums `sum_{x < p^N} q^x [x + shift]^n_{q^alpha}` and `[p^N]_q` modulo `p^M`.
fn level_sums(n: u32, alpha: u32, p: u32, q: &BigRational, level: u32, precision: u32, shift: u32) -> (BigInt, BigInt) {
    let m = p_pow(p, precision as i64);
    let qr = residue(q, &m);
    let qa = qr.modpow(&BigInt::from(alpha), &m);
    let mut bracket = BigInt::zero();
    let mut qax = BigInt::one();
    for _ in 0..shift {
        bracket = (bracket + &qax).mod_floor(&m);
        qax = (qax * &qa).mod_floor(&m);
    }
    let terms = p_pow(p, level as i64).to_u64().expect("desk-scale level");
    let exponent = BigInt::from(n);
    let mut qx = BigInt::one();
    let mut sum = BigInt::zero();
    let mut norm = BigInt::zero();
    for _ in 0..terms {
        sum = (sum + &qx * bracket.modpow(&exponent, &m)).mod_floor(&m);
        norm = (norm + &qx).mod_floor(&m);
        bracket = (bracket + &qax).mod_floor(&m);
        qax = (qax * &qa).mod_floor(&m);
        qx = (qx * &qr).mod_floor(&m);
    }
    (sum, norm)
}

/// `I_N(f) = (1/[p^N]_q) sum_{x < p^N} q^x f(x)` for `f(x) = [x + shift]^n_{q^alpha}`.
fn level_integral(
    n: u32,
    alpha: u32,
    p: u32,
    q: &BigRational,
    level: u32,
    precision: u32,
    shift: u32,
) -> Result<PadicNumber, PadicError> {
    let (sum, norm) = level_sums(n, alpha, p, q, level, precision, shift);
    let sum = PadicNumber::from_parts(p, 0, &sum, precision)?;
    let norm = PadicNumber::from_parts(p, 0, &norm, precision)?;
    sum.try_div(&norm)
}

/// The level-`N` Riemann sum for `[x]^n_{q^alpha}` against the exact number
/// at `q`, working modulo `p^precision`.
pub fn riemann_sum(
    n: u32,
    alpha: u32,
    p: u32,
    q: &BigRational,
    level: u32,
    precision: u32,
) -> Result<RiemannSumResult, PadicError> {
    validate(p, alpha, q, level, precision)?;
    let value = level_integral(n, alpha, p, q, level, precision, 0)?;
    let exact = qbern::weighted_number_closed(n, alpha)
        .value
        .eval_at(q)
        .map_err(|e| PadicError::DomainError(e.to_string()))?;
    let reference = embed_rational(&exact, p, precision)?;
    let defect = value.agreement(&reference)?;
    Ok(RiemannSumResult { n, alpha, p, q: q.clone(), level, precision, value, reference, defect })
}

/// Defects over consecutive levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceProfile {
    pub rows: Vec<RiemannSumResult>,
}

impl ConvergenceProfile {
    pub fn defects(&self) -> Vec<Defect> {
        self.rows.iter().map(|r| r.defect).collect()
    }

    /// No level loses agreement. A saturated defect is treated as exact.
    pub fn nondecreasing(&self) -> bool {
        self.defects().windows(2).all(|w| w[1].saturated || (!w[0].saturated && w[1].valuation >= w[0].valuation))
    }

    /// Every level gains at least one digit of agreement.
    pub fn increases_each_level(&self) -> bool {
        self.defects()
            .windows(2)
            .all(|w| w[1].saturated || (!w[0].saturated && w[1].valuation > w[0].valuation))
    }

    /// Smallest `c >= 0` with `defect >= N - c` at every level.
    pub fn envelope_constant(&self) -> i64 {
        self.rows
            .iter()
            .filter(|r| !r.defect.saturated)
            .map(|r| r.level as i64 - r.defect.valuation)
            .max()
            .unwrap_or(0)
            .max(0)
    }
}

/// Riemann sums at each level, each with `level + GUARD_DIGITS` digits unless
/// `precision` is given.
pub fn convergence_profile(
    n: u32,
    alpha: u32,
    p: u32,
    q: &BigRational,
    levels: &[u32],
    precision: Option<u32>,
) -> Result<ConvergenceProfile, PadicError> {
    let rows = levels
        .iter()
        .map(|&l| riemann_sum(n, alpha, p, q, l, precision.unwrap_or_else(|| default_precision(l))))
        .collect::<Result<_, _>>()?;
    Ok(ConvergenceProfile { rows })
}

/// Agreement (in digits) required between the two evaluations of the
/// derivative term, relative to the working precision.
pub const LOG_ROUTE_MARGIN: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralEquationResult {
    pub n: u32,
    pub alpha: u32,
    pub p: u32,
    #[serde(with = "exactq::rational_string")]
    pub q: BigRational,
    pub level: u32,
    pub precision: u32,
    /// `q I_N(f(x+1)) - I_N(f)`
    pub lhs: PadicNumber,
    /// `(q-1) f(0) + (q-1)/log q * f'(0)` with the logarithm cancelled symbolically
    pub rhs_closed: PadicNumber,
    /// the same with `log q` and `log q^alpha` evaluated as p-adic series
    pub rhs_log: PadicNumber,
    pub defect: Defect,
    /// `None` when `f'(0) = 0` and no logarithm enters
    pub route_agreement: Option<Defect>,
    pub passed: bool,
}

/// `q I(f_1) - I(f) = (q-1) f(0) + (q-1)/log(q) f'(0)` at finite level `N` for
/// `f(x) = [x]^n_{q^alpha}`, where `f'(x) = n [x]^(n-1) alpha log(q) q^(alpha x)/(q^alpha - 1)`.
/// Passes when the defect is at least `N - 1` and the two evaluations of the
/// right side agree to within [`LOG_ROUTE_MARGIN`] digits of the precision.
pub fn check_integral_equation(
    n: u32,
    alpha: u32,
    p: u32,
    q: &BigRational,
    level: u32,
    precision: u32,
) -> Result<IntegralEquationResult, PadicError> {
    validate(p, alpha, q, level, precision)?;
    let qp = embed_rational(q, p, precision)?;
    let shifted = level_integral(n, alpha, p, q, level, precision, 1)?;
    let plain = level_integral(n, alpha, p, q, level, precision, 0)?;
    let lhs = qp.try_mul(&shifted)?.try_sub(&plain)?;

    let one = BigRational::one();
    let q_minus_one = q - &one;
    let f0 = if n == 0 { q_minus_one.clone() } else { BigRational::zero() };
    let rhs_closed = if n == 1 {
        let weight = qbern::weight_factor(alpha)
            .eval_at(q)
            .map_err(|e| PadicError::DomainError(e.to_string()))?;
        embed_rational(&(&f0 + weight), p, precision)?
    } else {
        embed_rational(&f0, p, precision)?
    };

    let rhs_log = if n == 1 {
        let qa = num_traits::pow(q.clone(), alpha as usize);
        let log_q = padic_log(&qp, precision)?;
        let log_qa = padic_log(&embed_rational(&qa, p, precision)?, precision)?;
        let derivative = log_qa.try_div(&embed_rational(&(&qa - &one), p, precision)?)?;
        let factor = embed_rational(&q_minus_one, p, precision)?.try_div(&log_q)?;
        embed_rational(&f0, p, precision)?.try_add(&factor.try_mul(&derivative)?)?
    } else {
        embed_rational(&f0, p, precision)?
    };

    let defect = lhs.agreement(&rhs_closed)?;
    let route_agreement = if n == 1 { Some(rhs_closed.agreement(&rhs_log)?) } else { None };
    let route_floor = rhs_closed.valuation().unwrap_or(0) + precision as i64 - LOG_ROUTE_MARGIN;
    let passed = defect.at_least(level as i64 - 1) && route_agreement.map_or(true, |a| a.at_least(route_floor));
    Ok(IntegralEquationResult {
        n,
        alpha,
        p,
        q: q.clone(),
        level,
        precision,
        lhs,
        rhs_closed,
        rhs_log,
        defect,
        route_agreement,
        passed,
    })
}

impl PartialOrd for Defect {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Defect {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.saturated, self.valuation).cmp(&(other.saturated, other.valuation))
    }
}

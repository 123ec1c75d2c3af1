//! Weighted q-Bernoulli numbers and polynomials.
//!
//! Numbers are built two ways: from the closed-form alternating sum over the
//! weighted integrals of `q^(alpha*l*x)`, and from the umbral recurrence
//! `q (q^alpha b + 1)^n - b_n = (alpha / [alpha]_q) * [n == 1]`. Both land in
//! canonical form, so agreement is plain equality.
//!
//! Polynomials are stored in the basis `Y = [x]_{q^alpha}`. The exponential
//! factors `q^(alpha*l*x)` are rewritten with `q^(alpha*x) = 1 + (q^alpha - 1) Y`,
//! which keeps every integer-argument evaluation exact.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{ExactError, RatFuncQ};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QBernError {
    #[error("weight alpha must be positive")]
    ZeroWeight,
    #[error("argument {num}/{den} gives a non-integral exponent for base q^{base}")]
    NonIntegralExponent { num: i64, den: u32, base: i64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `[m]_{q^w} = (1 - q^(w m)) / (1 - q^w)` for any integer `m`.
pub fn q_bracket(m: i64, w: u32) -> RatFuncQ {
    assert!(w > 0, "q_bracket base exponent must be positive");
    let k = m.unsigned_abs() as usize;
    let mut coeffs = vec![0i64; (k.max(1) - 1) * w as usize + 1];
    if k == 0 {
        return RatFuncQ::zero();
    }
    for j in 0..k {
        coeffs[j * w as usize] = 1;
    }
    let geometric = RatFuncQ::from_poly(&crate::exactq::PolyQ::from_ints(&coeffs));
    if m > 0 {
        geometric
    } else {
        // [-k] = -q^(-w k) [k]
        -geometric.mul_q_pow(-(w as i64) * m.abs())
    }
}

/// `alpha / [alpha]_q`, the right-hand side of the n = 1 recurrence step.
pub fn weight_factor(alpha: u32) -> RatFuncQ {
    let bracket = q_bracket(alpha as i64, 1);
    RatFuncQ::from_int(alpha as i64)
        .checked_div(&bracket)
        .expect("[alpha]_q is nonzero")
}

fn one_minus_q_pow(k: u64) -> RatFuncQ {
    &RatFuncQ::one() - &RatFuncQ::q_pow(k as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WqBernNumber {
    pub n: u32,
    pub alpha: u32,
    pub value: RatFuncQ,
}

impl WqBernNumber {
    /// Value at `q = 1`; the classical Bernoulli number `B_n`.
    pub fn value_at_one(&self) -> BigRational {
        self.value
            .eval_at(&BigRational::one())
            .expect("weighted q-Bernoulli numbers are finite at q = 1")
    }
}

/// `(1-q)/(1-q^a)^n * sum_l C(n,l) (-1)^l q^(a l x) (a l + 1)/(1 - q^(a l + 1))`.
fn closed_form_sum(n: u32, alpha: u32, x: i64) -> RatFuncQ {
    let a = alpha as u64;
    let mut sum = RatFuncQ::zero();
    for l in 0..=n as u64 {
        let mut c = BigInt::from(a * l + 1) * binomial(n as u64, l);
        if l % 2 == 1 {
            c = -c;
        }
        let term = RatFuncQ::from_bigint(c)
            .mul_q_pow(a as i64 * l as i64 * x)
            .checked_div(&one_minus_q_pow(a * l + 1))
            .expect("1 - q^k is nonzero for k >= 1");
        sum = &sum + &term;
    }
    let prefactor = one_minus_q_pow(1)
        .checked_div(&one_minus_q_pow(a).pow(n as i64).expect("nonnegative power"))
        .expect("1 - q^alpha is nonzero");
    &prefactor * &sum
}

pub fn weighted_number_closed(n: u32, alpha: u32) -> WqBernNumber {
    assert!(alpha > 0, "weight alpha must be positive");
    WqBernNumber { n, alpha, value: closed_form_sum(n, alpha, 0) }
}

/// All of `b_0 .. b_{n_max}` from the umbral recurrence. Each step solves
/// `q sum_{l<n} C(n,l) q^(alpha l) b_l + (q^(alpha n + 1) - 1) b_n = rhs_n`.
pub fn weighted_numbers_recurrence(n_max: u32, alpha: u32) -> Vec<RatFuncQ> {
    assert!(alpha > 0, "weight alpha must be positive");
    let mut table = vec![RatFuncQ::one()];
    extend_recurrence(&mut table, n_max, alpha);
    table
}

fn extend_recurrence(table: &mut Vec<RatFuncQ>, n_max: u32, alpha: u32) {
    let a = alpha as i64;
    for n in table.len() as u32..=n_max {
        let mut known = RatFuncQ::zero();
        for (l, b) in table.iter().enumerate() {
            let c = RatFuncQ::from_bigint(binomial(n as u64, l as u64));
            known = &known + &(&c * b).mul_q_pow(a * l as i64 + 1);
        }
        let rhs = if n == 1 { weight_factor(alpha) } else { RatFuncQ::zero() };
        let pivot = &RatFuncQ::q_pow(a * n as i64 + 1) - &RatFuncQ::one();
        let value = (&rhs - &known)
            .checked_div(&pivot)
            .expect("q^(alpha n + 1) - 1 is nonzero");
        table.push(value);
    }
}

pub fn weighted_number_recurrence(n: u32, alpha: u32) -> WqBernNumber {
    let mut table = weighted_numbers_recurrence(n, alpha);
    WqBernNumber { n, alpha, value: table.swap_remove(n as usize) }
}

/// Carlitz's q-Bernoulli numbers `b_0 .. b_{k_max}` from
/// `b_0 = 1, q (q b + 1)^k - b_k = [k == 1]`.
pub fn carlitz_bernoulli(k_max: u32) -> Vec<RatFuncQ> {
    let q = RatFuncQ::q_pow(1);
    let mut betas: Vec<RatFuncQ> = vec![RatFuncQ::one()];
    for k in 1..=k_max as u64 {
        // Expand q (q b + 1)^k and move the b_k term to the left.
        let lower: RatFuncQ = (0..k)
            .map(|l| {
                let qpow = q.pow(l as i64 + 1).unwrap();
                &(&qpow * &betas[l as usize]) * &RatFuncQ::from_bigint(binomial(k, l))
            })
            .sum();
        let delta = if k == 1 { RatFuncQ::one() } else { RatFuncQ::zero() };
        let coeff = &q.pow(k as i64 + 1).unwrap() - &RatFuncQ::one();
        betas.push((&delta - &lower) / coeff);
    }
    betas
}

/// Weighted q-Bernoulli polynomial in the basis `Y = [x]_{Q^alpha}` where
/// `Q = q^base` (base 1 unless the coefficients were substituted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WqBernPoly {
    pub n: u32,
    pub alpha: u32,
    pub base: i64,
    coeffs: Vec<RatFuncQ>,
}

impl WqBernPoly {
    /// Coefficients of `Y^0 .. Y^n`.
    pub fn coeffs(&self) -> &[RatFuncQ] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &RatFuncQ {
        &self.coeffs[0]
    }

    /// Horner evaluation at an arbitrary field element `Y`.
    pub fn eval_y(&self, y: &RatFuncQ) -> RatFuncQ {
        self.coeffs
            .iter()
            .rev()
            .fold(RatFuncQ::zero(), |acc, c| &(&acc * y) + c)
    }

    /// The basis variable `[num/den]_{Q^alpha}` for a rational argument,
    /// defined when `base * alpha * num / den` is an integer.
    pub fn basis_at(&self, num: i64, den: u32) -> Result<RatFuncQ, QBernError> {
        let scaled = self.base * self.alpha as i64 * num;
        if den == 0 || scaled % den as i64 != 0 {
            return Err(QBernError::NonIntegralExponent { num, den, base: self.base });
        }
        let top = &RatFuncQ::one() - &RatFuncQ::q_pow(scaled / den as i64);
        let bottom = &RatFuncQ::one() - &RatFuncQ::q_pow(self.base * self.alpha as i64);
        Ok(top.checked_div(&bottom)?)
    }

    /// Value at `x = num / den`.
    pub fn eval_at_rational(&self, num: i64, den: u32) -> Result<RatFuncQ, QBernError> {
        Ok(self.eval_y(&self.basis_at(num, den)?))
    }

    pub fn eval_at_integer(&self, x: i64) -> RatFuncQ {
        self.eval_at_rational(x, 1)
            .expect("integer arguments always give integral exponents")
    }

    /// Replaces `q` by `q^d` in every coefficient, so the result is the same
    /// polynomial over base `q^(base*d)`.
    pub fn subst_power(&self, d: i64) -> Result<WqBernPoly, QBernError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.subst_power(d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WqBernPoly { n: self.n, alpha: self.alpha, base: self.base * d, coeffs })
    }

    /// Coefficients at `q = 1`, where `Y` becomes `x`: the classical Bernoulli polynomial.
    pub fn classical_limit(&self) -> Result<Vec<BigRational>, QBernError> {
        Ok(self
            .coeffs
            .iter()
            .map(|c| c.eval_at(&BigRational::one()))
            .collect::<Result<Vec<_>, _>>()?)
    }
}

/// Builds the Y-basis polynomial from the numbers `b_0 .. b_n`.
fn polynomial_from_numbers(n: u32, alpha: u32, numbers: &[RatFuncQ]) -> WqBernPoly {
    let n64 = n as u64;
    // q^(alpha x) = 1 + c Y
    let c = &RatFuncQ::q_pow(alpha as i64) - &RatFuncQ::one();
    let c_pows: Vec<RatFuncQ> = std::iter::successors(Some(RatFuncQ::one()), |p| Some(p * &c))
        .take(n as usize + 1)
        .collect();
    // sum_l C(n,l) Y^(n-l) (1 + cY)^l b_l; the Y^j coefficient collects k = j - n + l.
    let coeffs = (0..=n64)
        .map(|j| {
            (n64 - j..=n64)
                .map(|l| {
                    let k = j + l - n64;
                    let integer = binomial(n64, l) * binomial(l, k);
                    &(&numbers[l as usize] * &c_pows[k as usize]) * &RatFuncQ::from_bigint(integer)
                })
                .sum()
        })
        .collect();
    WqBernPoly { n, alpha, base: 1, coeffs }
}

pub fn weighted_polynomial(n: u32, alpha: u32) -> WqBernPoly {
    let numbers: Vec<RatFuncQ> = (0..=n).map(|l| weighted_number_closed(l, alpha).value).collect();
    polynomial_from_numbers(n, alpha, &numbers)
}

/// Closed-form value at an integer argument, straight from the alternating sum.
pub fn polynomial_value_at_integer(n: u32, alpha: u32, x: i64) -> RatFuncQ {
    assert!(alpha > 0, "weight alpha must be positive");
    closed_form_sum(n, alpha, x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalBernoulli {
    table: Vec<BigRational>,
}

impl ClassicalBernoulli {
    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.table.get(n)
    }

    pub fn table(&self) -> &[BigRational] {
        &self.table
    }
}

/// `B_0 .. B_{n_max}` (with `B_1 = -1/2`) from `sum_{k<n} C(n,k) B_k = 0`.
pub fn classical_bernoulli(n_max: u32) -> ClassicalBernoulli {
    let mut table = vec![BigRational::one()];
    for m in 1..=n_max as u64 {
        let s: BigRational = table
            .iter()
            .enumerate()
            .map(|(k, b)| b * BigRational::from_integer(binomial(m + 1, k as u64)))
            .sum();
        table.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    ClassicalBernoulli { table }
}

/// Shared memo of closed-form numbers and Y-basis polynomials.
///
/// Lock-protected; every entry is a pure function of its key, so the cache
/// never changes observable results.
#[derive(Debug, Default)]
pub struct QBernCache {
    numbers: Mutex<HashMap<u32, Vec<RatFuncQ>>>,
    polys: Mutex<HashMap<(u32, u32), Arc<WqBernPoly>>>,
}

impl QBernCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `b_0 .. b_n` for weight `alpha`.
    pub fn numbers(&self, n: u32, alpha: u32) -> Vec<RatFuncQ> {
        let mut guard = self.numbers.lock().unwrap();
        let table = guard.entry(alpha).or_default();
        while table.len() <= n as usize {
            let l = table.len() as u32;
            table.push(weighted_number_closed(l, alpha).value);
        }
        table[..=n as usize].to_vec()
    }

    pub fn number(&self, n: u32, alpha: u32) -> RatFuncQ {
        self.numbers(n, alpha).swap_remove(n as usize)
    }

    pub fn polynomial(&self, n: u32, alpha: u32) -> Arc<WqBernPoly> {
        if let Some(p) = self.polys.lock().unwrap().get(&(n, alpha)) {
            return Arc::clone(p);
        }
        let poly = Arc::new(polynomial_from_numbers(n, alpha, &self.numbers(n, alpha)));
        self.polys
            .lock()
            .unwrap()
            .entry((n, alpha))
            .or_insert(poly)
            .clone()
    }
}

//! Exact arithmetic kernel: rational-coefficient polynomials in `q` and the
//! rational function field `Q(q)` in canonical form.
//!
//! Canonical strings list terms in ascending powers of `q` joined by `" + "`.
//! A coefficient that is a nonnegative integer is written bare, anything else
//! in parentheses, and a unit coefficient is omitted in front of a power of
//! `q`: `(-1) + (1/2)q + q^3`. A rational function renders as `num / den`, or
//! as `num` alone when the monic denominator is `1`.

mod modgcd;
mod poly;
mod ratfunc;
mod zpoly;

use std::fmt;
use std::str::FromStr;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use poly::{poly_gcd, PolyQ};
pub use ratfunc::RatFuncQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("substitution exponent must be nonzero")]
    ZeroExponent,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// `ratfunc_normalize`: the canonical element equal to `num / den`.
pub fn ratfunc_normalize(num: &PolyQ, den: &PolyQ) -> Result<RatFuncQ, ExactError> {
    RatFuncQ::new(num, den)
}

/// Canonical rendering of a single rational coefficient.
pub fn render_rational(c: &BigRational) -> String {
    if c.is_integer() && !c.is_negative() {
        c.numer().to_string()
    } else {
        format!("({c})")
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let t = s.trim();
    let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
    BigRational::from_str(t.trim()).map_err(|_| ExactError::Parse(s.to_string()))
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{i}"),
            };
            if i > 0 && c.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}{}", render_rational(c), mono)?;
            }
        }
        Ok(())
    }
}

fn parse_term(term: &str) -> Result<(usize, BigRational), ExactError> {
    let err = || ExactError::Parse(term.to_string());
    let s = term.trim();
    let (coeff, rest) = if let Some(inner) = s.strip_prefix('(') {
        let close = inner.find(')').ok_or_else(err)?;
        (parse_rational(&inner[..close])?, &inner[close + 1..])
    } else {
        let end = s.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(s.len());
        if end == 0 {
            (BigRational::one(), s)
        } else {
            (parse_rational(&s[..end])?, &s[end..])
        }
    };
    let power = match rest {
        "" => 0,
        "q" => 1,
        _ => rest
            .strip_prefix("q^")
            .and_then(|k| k.parse::<usize>().ok())
            .ok_or_else(err)?,
    };
    Ok((power, coeff))
}

impl FromStr for PolyQ {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(ExactError::Parse(s.to_string()));
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        for term in s.split(" + ") {
            let (k, c) = parse_term(term)?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] += c;
        }
        Ok(PolyQ::new(coeffs))
    }
}

impl fmt::Display for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.denominator();
        if den.is_one() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{} / {}", self.numerator(), den)
        }
    }
}

impl FromStr for RatFuncQ {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(" / ") {
            Some((n, d)) => RatFuncQ::new(&n.parse()?, &d.parse()?),
            None => Ok(RatFuncQ::from_poly(&s.parse()?)),
        }
    }
}

macro_rules! serde_via_string {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}
serde_via_string!(PolyQ, RatFuncQ);

/// Serde helpers for `BigRational` as a `"p/q"` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        BigRational::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Same as [`rational_string`] for optional values.
pub mod opt_rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.collect_str(r),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| BigRational::from_str(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> PolyQ {
        PolyQ::from_ints(v)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFuncQ {
        RatFuncQ::new(&p(n), &p(d)).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(rf(&[-1, 0, 1], &[-1, 1]), RatFuncQ::from_poly(&p(&[1, 1])));
        let z = rf(&[0], &[3, 3]);
        assert!(z.is_zero());
        assert_eq!(z.numerator(), PolyQ::zero());
        assert_eq!(z.denominator(), p(&[1]));
        let r = rf(&[0, 2], &[0, 2, 2]);
        assert_eq!(r.numerator(), p(&[1]));
        assert_eq!(r.denominator(), p(&[1, 1]));
        assert_eq!(ratfunc_normalize(&p(&[1]), &PolyQ::zero()), Err(ExactError::ZeroDenominator));
    }

    #[test]
    fn monic_denominator_with_rational_numerator() {
        let r = rf(&[1], &[1, 2]);
        assert_eq!(r.denominator().coeffs(), &[rat(1, 2), rat(1, 1)]);
        assert_eq!(r.numerator().coeffs(), &[rat(1, 2)]);
        assert_eq!(r.to_string(), "(1/2) / (1/2) + q");
    }

    #[test]
    fn field_op_examples() {
        let q = RatFuncQ::q_pow(1);
        assert!((rf(&[1], &[1, 1]) + rf(&[0, 1], &[1, 1])).is_one());
        assert_eq!(q.pow(-1).unwrap(), rf(&[1], &[0, 1]));
        assert!((rf(&[-1, 1], &[1]) * rf(&[1], &[-1, 1])).is_one());
        assert_eq!(RatFuncQ::zero().inv(), Err(ExactError::DivisionByZero));
        assert_eq!(RatFuncQ::zero().pow(-2), Err(ExactError::DivisionByZero));
        assert_eq!(q.checked_div(&RatFuncQ::zero()), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn subst_power_examples() {
        assert_eq!(rf(&[1, 1], &[1]).subst_power(2).unwrap(), rf(&[1, 0, 1], &[1]));
        assert_eq!(rf(&[0, 1], &[1]).subst_power(-1).unwrap(), rf(&[1], &[0, 1]));
        assert_eq!(rf(&[1], &[1, 1]).subst_power(-1).unwrap(), rf(&[0, 1], &[1, 1]));
        assert_eq!(rf(&[1], &[1, 1]).subst_power(0), Err(ExactError::ZeroExponent));
    }

    #[test]
    fn eval_examples() {
        let one = rat(1, 1);
        assert_eq!(rf(&[-1, 0, 1], &[-1, 1]).eval_at(&one).unwrap(), rat(2, 1));
        assert_eq!(rf(&[1], &[1, 1]).eval_at(&one).unwrap(), rat(1, 2));
        assert_eq!(rf(&[1], &[-1, 1]).eval_at(&one), Err(ExactError::PoleAtPoint));
        assert_eq!(RatFuncQ::q_pow(-3).eval_at(&rat(1, 2)).unwrap(), rat(8, 1));
    }

    #[test]
    fn mul_q_pow_cancels_q_factors() {
        let r = rf(&[1], &[0, 0, 1, 1]);
        assert_eq!(r.mul_q_pow(3), rf(&[0, 1], &[1, 1]));
        assert_eq!(r.mul_q_pow(-1), rf(&[1], &[0, 0, 0, 1, 1]));
        assert_eq!(r.mul_q_pow(2).mul_q_pow(-2), r);
    }

    #[test]
    fn rendering() {
        let poly = PolyQ::new(vec![rat(-1, 1), rat(1, 2), rat(0, 1), rat(1, 1)]);
        assert_eq!(poly.to_string(), "(-1) + (1/2)q + q^3");
        assert_eq!(p(&[0, -1, 2]).to_string(), "(-1)q + 2q^2");
        assert_eq!(PolyQ::zero().to_string(), "0");
        assert_eq!(RatFuncQ::one().to_string(), "1");
        assert_eq!(rf(&[-1], &[1, 1]).to_string(), "(-1) / 1 + q");
    }

    #[test]
    fn parsing() {
        let poly: PolyQ = "(-1) + (1/2)q + q^3".parse().unwrap();
        assert_eq!(poly, PolyQ::new(vec![rat(-1, 1), rat(1, 2), rat(0, 1), rat(1, 1)]));
        let r: RatFuncQ = "q / 1 + 2q + 2q^2 + q^3".parse().unwrap();
        assert_eq!(r, rf(&[0, 1], &[1, 2, 2, 1]));
        assert!("q^x".parse::<PolyQ>().is_err());
        assert!("".parse::<PolyQ>().is_err());
        assert!("(1/2".parse::<PolyQ>().is_err());
    }

    #[test]
    fn serde_string_form() {
        let r = rf(&[0, 1], &[1, 1]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"q / 1 + q\"");
        let back: RatFuncQ = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}

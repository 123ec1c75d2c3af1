//! Dense integer polynomials, the working representation behind [`RatFuncQ`].
//!
//! Everything here operates on plain `Vec<BigInt>` (index `i` is the coefficient
//! of `q^i`, no trailing zeros). The rational-coefficient types in the parent
//! module convert into this form, do their arithmetic over `Z[q]`, and convert
//! back only when a caller asks for a `PolyQ`.
//!
//! [`RatFuncQ`]: super::RatFuncQ

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn one() -> ZPoly {
    vec![BigInt::one()]
}

pub(crate) fn is_one(p: &[BigInt]) -> bool {
    p.len() == 1 && p[0].is_one()
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[BigInt], c: &BigInt) -> ZPoly {
    if c.is_zero() {
        return Vec::new();
    }
    if c.is_one() {
        return a.to_vec();
    }
    a.iter().map(|x| x * c).collect()
}

/// Multiplies by `q^k`.
pub(crate) fn shift(a: &[BigInt], k: usize) -> ZPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); k];
    out.extend_from_slice(a);
    out
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() == 1 {
        return scale(b, &a[0]);
    }
    if b.len() == 1 {
        return scale(a, &b[0]);
    }
    if a.len().min(b.len()) >= KRONECKER_THRESHOLD {
        return kronecker_mul(a, b);
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

const KRONECKER_THRESHOLD: usize = 24;

/// Kronecker substitution: pack each operand into one big integer with a
/// fixed number of 32-bit digits per coefficient and let the bigint
/// multiplier (Karatsuba/Toom) do the work. Signs are handled by splitting
/// into nonnegative parts.
fn kronecker_mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let bits = |p: &[BigInt]| p.iter().map(|c| c.bits()).max().unwrap_or(0);
    let n = a.len().min(b.len()) as u64;
    let bound_bits = bits(a) + bits(b) + 64 - n.leading_zeros() as u64 + 1;
    let digits = bound_bits.div_ceil(32) as usize;

    let (ap, an) = split_signs(a);
    let (bp, bn) = split_signs(b);
    let len = a.len() + b.len() - 1;
    let mut out = vec![BigInt::zero(); len];
    for (x, y, sign) in [(&ap, &bp, 1), (&an, &bn, 1), (&ap, &bn, -1), (&an, &bp, -1)] {
        if x.iter().all(Zero::is_zero) || y.iter().all(Zero::is_zero) {
            continue;
        }
        let prod = pack(x, digits) * pack(y, digits);
        let words = prod.to_u32_digits().1;
        for (i, o) in out.iter_mut().enumerate() {
            let lo = i * digits;
            if lo >= words.len() {
                break;
            }
            let hi = (lo + digits).min(words.len());
            let c = BigInt::from_slice(Sign::Plus, &words[lo..hi]);
            if sign > 0 {
                *o += c;
            } else {
                *o -= c;
            }
        }
    }
    trim(&mut out);
    out
}

fn split_signs(p: &[BigInt]) -> (ZPoly, ZPoly) {
    let mut pos = Vec::with_capacity(p.len());
    let mut neg = Vec::with_capacity(p.len());
    for c in p {
        if c.is_negative() {
            pos.push(BigInt::zero());
            neg.push(-c);
        } else {
            pos.push(c.clone());
            neg.push(BigInt::zero());
        }
    }
    (pos, neg)
}

fn pack(p: &[BigInt], digits: usize) -> BigInt {
    let mut words = vec![0u32; p.len() * digits];
    for (i, c) in p.iter().enumerate() {
        let (_, ds) = c.to_u32_digits();
        words[i * digits..i * digits + ds.len()].copy_from_slice(&ds);
    }
    BigInt::from_slice(Sign::Plus, &words)
}

/// Positive gcd of all coefficients (zero for the zero polynomial).
pub(crate) fn content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Splits `a` into `c * p` where `p` is primitive with positive leading
/// coefficient. Zero maps to `(0, [])`.
pub(crate) fn primitive_part(a: &[BigInt]) -> (BigInt, ZPoly) {
    let Some(lc) = a.last() else {
        return (BigInt::zero(), Vec::new());
    };
    let mut c = content(a);
    if lc.is_negative() {
        c = -c;
    }
    if c.is_one() {
        return (c, a.to_vec());
    }
    let p = a.iter().map(|x| x / &c).collect();
    (c, p)
}

/// Exact quotient `a / b` over `Z`, or `None` if `b` does not divide `a`.
pub(crate) fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    assert!(!b.is_empty(), "exact_div by zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    if b.len() == 1 {
        let mut out = Vec::with_capacity(a.len());
        for c in a {
            let (q, r) = c.div_rem(&b[0]);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        return Some(out);
    }
    // Cheap rejection before the full division: compare values at q = 1 and q = -1.
    let at = |p: &[BigInt], x: i32| -> BigInt {
        p.iter()
            .enumerate()
            .map(|(i, c)| if x < 0 && i % 2 == 1 { -c } else { c.clone() })
            .sum()
    };
    for x in [1, -1] {
        let bv = at(b, x);
        if !bv.is_zero() && !at(a, x).is_multiple_of(&bv) {
            return None;
        }
    }

    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lc = &b[db];
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let top = &rem[k + db];
        if top.is_zero() {
            continue;
        }
        let (qk, r) = top.div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &qk * bj;
        }
        quot[k] = qk;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut quot);
    Some(quot)
}

pub(crate) fn trailing_zeros(a: &[BigInt]) -> usize {
    a.iter().take_while(|c| c.is_zero()).count()
}

/// Coefficient reversal `q^deg * a(1/q)`, trimmed.
pub(crate) fn reverse(a: &[BigInt]) -> ZPoly {
    let mut r: ZPoly = a.iter().rev().cloned().collect();
    trim(&mut r);
    r
}

/// `a(q^d)` for `d >= 1`.
pub(crate) fn spread(a: &[BigInt], d: usize) -> ZPoly {
    if a.is_empty() || d == 1 {
        return a.to_vec();
    }
    let mut out = vec![BigInt::zero(); (a.len() - 1) * d + 1];
    for (i, c) in a.iter().enumerate() {
        out[i * d] = c.clone();
    }
    out
}

/// Homogeneous evaluation `sum c_i a^i b^(deg - i)`, i.e. `b^deg * p(a/b)`.
pub(crate) fn eval_homogeneous(p: &[BigInt], a: &BigInt, b: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    for c in p.iter().rev() {
        acc = acc * a + c * &bpow;
        bpow *= b;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        let mut p: ZPoly = v.iter().map(|&c| BigInt::from(c)).collect();
        trim(&mut p);
        p
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a: ZPoly = (0..40).map(|i| BigInt::from((i * 7919 % 113) - 56) << (i % 5 * 20)).collect();
        let b: ZPoly = (0..33).map(|i| BigInt::from(-(i * 31 % 17) + 8)).collect();
        let fast = kronecker_mul(&a, &b);
        let mut slow = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                slow[i + j] += x * y;
            }
        }
        trim(&mut slow);
        assert_eq!(fast, slow);
    }

    #[test]
    fn exact_division() {
        let a = z(&[-1, 0, 1]);
        assert_eq!(exact_div(&a, &z(&[-1, 1])), Some(z(&[1, 1])));
        assert_eq!(exact_div(&a, &z(&[0, 1])), None);
        assert_eq!(exact_div(&z(&[2, 4]), &z(&[2])), Some(z(&[1, 2])));
        assert_eq!(exact_div(&z(&[2, 4]), &z(&[3])), None);
        assert_eq!(exact_div(&z(&[1, 2, 1]), &z(&[2, 2])), None);
    }

    #[test]
    fn primitive_split() {
        let (c, p) = primitive_part(&z(&[4, -6]));
        assert_eq!(c, BigInt::from(-2));
        assert_eq!(p, z(&[-2, 3]));
    }

    #[test]
    fn homogeneous_eval() {
        // (1 + q^2) at q = 2/3 scaled by 3^2: 9 + 4
        let v = eval_homogeneous(&z(&[1, 0, 1]), &BigInt::from(2), &BigInt::from(3));
        assert_eq!(v, BigInt::from(13));
    }
}

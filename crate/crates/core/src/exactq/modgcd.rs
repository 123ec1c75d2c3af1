//! Multi-modular gcd over `Z[q]`.
//!
//! Images are computed modulo 62-bit primes, combined by CRT, and a candidate
//! is accepted only after it divides both inputs exactly over `Z`. The trial
//! division makes the answer unconditional; unlucky primes only cost time.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::zpoly::{self, ZPoly};

const PRIME_COUNT: usize = 256;

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut c: u64 = (1 << 62) - 1;
        while out.len() < PRIME_COUNT {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    let r = (c.magnitude() % p).to_u64().expect("residue fits u64");
    if c.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

fn reduce_poly(a: &[BigInt], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|c| reduce(c, p)).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Monic gcd over `F_p`.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        rem_mod(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = invmod(lc, p);
        for c in a.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    a
}

/// In-place remainder of `a` modulo `b` over `F_p`.
fn rem_mod(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let db = b.len() - 1;
    let inv = invmod(b[db], p);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let f = mulmod(top, inv, p);
            let off = a.len() - 1 - db;
            for (j, &bj) in b.iter().enumerate() {
                let t = mulmod(f, bj, p);
                let slot = &mut a[off + j];
                *slot = if *slot >= t { *slot - t } else { *slot + p - t };
            }
        }
        a.pop();
        while a.last() == Some(&0) {
            a.pop();
        }
    }
}

/// Gcd of two nonzero primitive polynomials together with the cofactors
/// `a / g` and `b / g`. The gcd is primitive with positive leading coefficient.
pub(crate) fn gcd_with_cofactors(a: &[BigInt], b: &[BigInt]) -> (ZPoly, ZPoly, ZPoly) {
    debug_assert!(!a.is_empty() && !b.is_empty());
    if a.len() == 1 || b.len() == 1 {
        return (zpoly::one(), a.to_vec(), b.to_vec());
    }
    if a == b {
        return (a.to_vec(), zpoly::one(), zpoly::one());
    }

    // Common power of q comes out for free.
    let shift = zpoly::trailing_zeros(a).min(zpoly::trailing_zeros(b));
    if shift > 0 {
        let (g, ca, cb) = gcd_with_cofactors(&a[shift..], &b[shift..]);
        return (zpoly::shift(&g, shift), ca, cb);
    }

    let lc_a = a.last().unwrap();
    let lc_b = b.last().unwrap();
    let lc_g = lc_a.gcd(lc_b);

    let mut best_deg = usize::MAX;
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = Vec::new();
    let mut last_candidate: Option<ZPoly> = None;

    for &p in primes() {
        if reduce(lc_a, p) == 0 || reduce(lc_b, p) == 0 {
            continue;
        }
        let g = gcd_mod(reduce_poly(a, p), reduce_poly(b, p), p);
        let deg = g.len() - 1;
        if deg == 0 {
            return (zpoly::one(), a.to_vec(), b.to_vec());
        }
        if deg > best_deg {
            continue;
        }
        let s = reduce(&lc_g, p);
        let image: Vec<u64> = g.iter().map(|&c| mulmod(c, s, p)).collect();
        let pb = BigInt::from(p);
        if deg < best_deg {
            best_deg = deg;
            modulus = pb;
            residues = image.into_iter().map(BigInt::from).collect();
            last_candidate = None;
            continue;
        }
        // CRT: x = r (mod m), x = s (mod p)
        let m_inv = invmod(reduce(&modulus, p), p);
        for (r, &s) in residues.iter_mut().zip(&image) {
            let diff = (s + p - reduce(r, p)) % p;
            let k = mulmod(diff, m_inv, p);
            *r += &modulus * BigInt::from(k);
        }
        modulus *= &pb;

        let half: BigInt = &modulus >> 1;
        let mut lifted: ZPoly = residues
            .iter()
            .map(|r| if r > &half { r - &modulus } else { r.clone() })
            .collect();
        zpoly::trim(&mut lifted);
        if last_candidate.as_ref() == Some(&lifted) {
            let (_, cand) = zpoly::primitive_part(&lifted);
            if let Some(ca) = zpoly::exact_div(a, &cand) {
                if let Some(cb) = zpoly::exact_div(b, &cand) {
                    return (cand, ca, cb);
                }
            }
        }
        last_candidate = Some(lifted);
    }
    unreachable!("exhausted {PRIME_COUNT} primes without a verified gcd")
}

/// Gcd of two primitive integer polynomials (primitive, positive leading coefficient).
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() {
        return zpoly::primitive_part(b).1;
    }
    if b.is_empty() {
        return zpoly::primitive_part(a).1;
    }
    gcd_with_cofactors(a, b).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        let mut p: ZPoly = v.iter().map(|&c| BigInt::from(c)).collect();
        zpoly::trim(&mut p);
        p
    }

    #[test]
    fn miller_rabin_small() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn gcd_of_products() {
        // (q - 1)(2q + 3) and (q - 1)(q + 5)
        let a = z(&[-3, 1, 2]);
        let b = z(&[-5, 4, 1]);
        let (g, ca, cb) = gcd_with_cofactors(&a, &b);
        assert_eq!(g, z(&[-1, 1]));
        assert_eq!(ca, z(&[3, 2]));
        assert_eq!(cb, z(&[5, 1]));
    }

    #[test]
    fn gcd_non_monic_common_factor() {
        // (3q + 2)^2 (q + 1) and (3q + 2)(q - 7)
        let f = z(&[2, 3]);
        let a = zpoly::mul(&zpoly::mul(&f, &f), &z(&[1, 1]));
        let b = zpoly::mul(&f, &z(&[-7, 1]));
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn gcd_with_power_of_q() {
        assert_eq!(gcd(&z(&[0, 0, 0, 1]), &z(&[0, 0, 1])), z(&[0, 0, 1]));
    }
}

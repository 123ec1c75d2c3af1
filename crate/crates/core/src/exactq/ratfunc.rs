use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::modgcd;
use super::zpoly::{self, ZPoly};
use super::{ExactError, PolyQ};

/// Element of the rational function field `Q(q)` in canonical form.
///
/// Stored as `scale * num / den` with `num` and `den` coprime primitive
/// integer polynomials with positive leading coefficients (zero is
/// `0 * [] / [1]`). This is a bijective re-encoding of the reduced quotient
/// with monic denominator returned by [`numerator`](Self::numerator) and
/// [`denominator`](Self::denominator), so derived equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFuncQ {
    scale: BigRational,
    num: ZPoly,
    den: ZPoly,
}

impl RatFuncQ {
    /// Canonical form of `num / den`.
    pub fn new(num: &PolyQ, den: &PolyQ) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        let (sn, zn) = num.to_primitive();
        let (sd, zd) = den.to_primitive();
        Ok(Self::reduce(sn / sd, zn, zd))
    }

    pub fn zero() -> Self {
        RatFuncQ { scale: BigRational::zero(), num: Vec::new(), den: zpoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFuncQ { scale: c, num: zpoly::one(), den: zpoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Self::constant(BigRational::from_integer(c))
    }

    pub fn from_poly(p: &PolyQ) -> Self {
        let (s, z) = p.to_primitive();
        if s.is_zero() {
            return Self::zero();
        }
        RatFuncQ { scale: s, num: z, den: zpoly::one() }
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let mono = zpoly::shift(&zpoly::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFuncQ { scale: BigRational::one(), num: mono, den: zpoly::one() }
        } else {
            RatFuncQ { scale: BigRational::one(), num: zpoly::one(), den: mono }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && zpoly::is_one(&self.num) && zpoly::is_one(&self.den)
    }

    /// True when the denominator is constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    /// Numerator of the reduced quotient whose denominator is monic.
    pub fn numerator(&self) -> PolyQ {
        let lc = BigRational::from_integer(self.den.last().unwrap().clone());
        PolyQ::from_z(&(&self.scale / lc), &self.num)
    }

    /// Monic denominator of the reduced quotient.
    pub fn denominator(&self) -> PolyQ {
        let lc = BigRational::from_integer(self.den.last().unwrap().clone());
        PolyQ::from_z(&lc.recip(), &self.den)
    }

    pub fn num_degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    /// Normalizes `scale * num / den` for arbitrary integer polynomials.
    fn reduce(scale: BigRational, num: ZPoly, den: ZPoly) -> Self {
        debug_assert!(!den.is_empty());
        if scale.is_zero() || num.is_empty() {
            return Self::zero();
        }
        let (cn, pn) = zpoly::primitive_part(&num);
        let (cd, pd) = zpoly::primitive_part(&den);
        let scale = scale * BigRational::new(cn, cd);
        let (_, n, d) = modgcd::gcd_with_cofactors(&pn, &pd);
        RatFuncQ { scale, num: n, den: d }
    }

    /// Builds from parts already known to be coprime; only fixes content and signs.
    fn coprime(scale: BigRational, num: ZPoly, den: ZPoly) -> Self {
        if scale.is_zero() || num.is_empty() {
            return Self::zero();
        }
        let (cn, pn) = zpoly::primitive_part(&num);
        let (cd, pd) = zpoly::primitive_part(&den);
        RatFuncQ { scale: scale * BigRational::new(cn, cd), num: pn, den: pd }
    }

    pub fn scale_by(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFuncQ { scale: &self.scale * c, num: self.num.clone(), den: self.den.clone() }
    }

    /// Multiplies by `q^k`.
    pub fn mul_q_pow(&self, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let (num_tz, den_tz) = (zpoly::trailing_zeros(&self.num), zpoly::trailing_zeros(&self.den));
        // Exactly one of num, den can carry a factor q.
        let net = k + num_tz as i64 - den_tz as i64;
        let (n, d) = (&self.num[num_tz..], &self.den[den_tz..]);
        let (num, den) = if net >= 0 {
            (zpoly::shift(n, net as usize), d.to_vec())
        } else {
            (n.to_vec(), zpoly::shift(d, (-net) as usize))
        };
        RatFuncQ { scale: self.scale.clone(), num, den }
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(RatFuncQ { scale: self.scale.recip(), num: self.den.clone(), den: self.num.clone() })
    }

    pub fn checked_div(&self, rhs: &RatFuncQ) -> Result<Self, ExactError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self, ExactError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut base = self.clone();
        let mut acc = RatFuncQ::one();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// `f(q^d)` for a nonzero integer `d`.
    pub fn subst_power(&self, d: i64) -> Result<Self, ExactError> {
        if d == 0 {
            return Err(ExactError::ZeroExponent);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let k = d.unsigned_abs() as usize;
        // Substitution is a field automorphism, so spread polynomials stay coprime.
        let num = zpoly::spread(&self.num, k);
        let den = zpoly::spread(&self.den, k);
        if d > 0 {
            return Ok(RatFuncQ { scale: self.scale.clone(), num, den });
        }
        // f(1/q) = q^(deg den - deg num) * rev(num) / rev(den)
        let exp = den.len() as i64 - num.len() as i64;
        let rn = zpoly::reverse(&num);
        let rd = zpoly::reverse(&den);
        let (n, dd) = if exp >= 0 {
            (zpoly::shift(&rn, exp as usize), rd)
        } else {
            (rn, zpoly::shift(&rd, (-exp) as usize))
        };
        Ok(Self::coprime(self.scale.clone(), n, dd))
    }

    /// Exact value at a rational point.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational, ExactError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let (a, b) = (q0.numer(), q0.denom());
        let dv = zpoly::eval_homogeneous(&self.den, a, b);
        if dv.is_zero() {
            return Err(ExactError::PoleAtPoint);
        }
        let nv = zpoly::eval_homogeneous(&self.num, a, b);
        let shift = self.den.len() as i64 - self.num.len() as i64;
        let bpow = BigRational::from_integer(num_traits::pow(b.clone(), shift.unsigned_abs() as usize));
        let ratio = BigRational::new(nv, dv) * &self.scale;
        Ok(if shift >= 0 { ratio * bpow } else { ratio / bpow })
    }

    /// Value at a floating-point point (for numerical cross-checks).
    pub fn eval_f64(&self, q0: f64) -> Result<f64, ExactError> {
        use num_traits::ToPrimitive;
        let exact = BigRational::from_float(q0).ok_or(ExactError::PoleAtPoint)?;
        let v = self.eval_at(&exact)?;
        Ok(v.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add<&RatFuncQ> for &RatFuncQ {
    type Output = RatFuncQ;
    fn add(self, rhs: &RatFuncQ) -> RatFuncQ {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (p1, r1) = (self.scale.numer(), self.scale.denom());
        let (p2, r2) = (rhs.scale.numer(), rhs.scale.denom());
        let (g, e1, e2) = modgcd::gcd_with_cofactors(&self.den, &rhs.den);
        let t1 = zpoly::mul(&self.num, &e2);
        let t2 = zpoly::mul(&rhs.num, &e1);
        let sum = zpoly::add(&zpoly::scale(&t1, &(p1 * r2)), &zpoly::scale(&t2, &(p2 * r1)));
        if sum.is_empty() {
            return RatFuncQ::zero();
        }
        let denom = r1 * r2;
        let (c, psum) = zpoly::primitive_part(&sum);
        let scale = BigRational::new(c, denom);
        // gcd(sum, g*e1*e2) = gcd(sum, g)
        let (_, num, g_rest) = modgcd::gcd_with_cofactors(&psum, &g);
        let den = zpoly::mul(&zpoly::mul(&g_rest, &e1), &e2);
        RatFuncQ { scale, num, den }
    }
}

impl Neg for &RatFuncQ {
    type Output = RatFuncQ;
    fn neg(self) -> RatFuncQ {
        RatFuncQ { scale: -&self.scale, num: self.num.clone(), den: self.den.clone() }
    }
}

impl Neg for RatFuncQ {
    type Output = RatFuncQ;
    fn neg(mut self) -> RatFuncQ {
        self.scale = -self.scale;
        self
    }
}

impl Sub<&RatFuncQ> for &RatFuncQ {
    type Output = RatFuncQ;
    fn sub(self, rhs: &RatFuncQ) -> RatFuncQ {
        self + &(-rhs)
    }
}

impl Mul<&RatFuncQ> for &RatFuncQ {
    type Output = RatFuncQ;
    fn mul(self, rhs: &RatFuncQ) -> RatFuncQ {
        if self.is_zero() || rhs.is_zero() {
            return RatFuncQ::zero();
        }
        let (_, n1, d2) = modgcd::gcd_with_cofactors(&self.num, &rhs.den);
        let (_, n2, d1) = modgcd::gcd_with_cofactors(&rhs.num, &self.den);
        RatFuncQ {
            scale: &self.scale * &rhs.scale,
            num: zpoly::mul(&n1, &n2),
            den: zpoly::mul(&d1, &d2),
        }
    }
}

/// Panics on division by zero; use [`RatFuncQ::checked_div`] for a fallible version.
impl Div<&RatFuncQ> for &RatFuncQ {
    type Output = RatFuncQ;
    fn div(self, rhs: &RatFuncQ) -> RatFuncQ {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RatFuncQ> for RatFuncQ {
            type Output = RatFuncQ;
            fn $m(self, rhs: RatFuncQ) -> RatFuncQ { (&self).$m(&rhs) }
        }
        impl $tr<&RatFuncQ> for RatFuncQ {
            type Output = RatFuncQ;
            fn $m(self, rhs: &RatFuncQ) -> RatFuncQ { (&self).$m(rhs) }
        }
        impl $tr<RatFuncQ> for &RatFuncQ {
            type Output = RatFuncQ;
            fn $m(self, rhs: RatFuncQ) -> RatFuncQ { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for RatFuncQ {
    fn sum<I: Iterator<Item = RatFuncQ>>(iter: I) -> Self {
        iter.fold(RatFuncQ::zero(), |acc, x| &acc + &x)
    }
}

impl From<&PolyQ> for RatFuncQ {
    fn from(p: &PolyQ) -> Self {
        RatFuncQ::from_poly(p)
    }
}


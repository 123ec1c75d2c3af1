use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::modgcd;
use super::zpoly::{self, ZPoly};
use super::ExactError;

/// Dense univariate polynomial in `q` over the rationals.
///
/// `coeffs[i]` is the coefficient of `q^i`; there are never trailing zeros,
/// so the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<BigRational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(BigRational::one());
        PolyQ { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PolyQ { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Divides through by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn eval(&self, q0: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * q0 + c)
    }

    /// `p(q^d)` for `d >= 1`.
    pub fn subst_power(&self, d: usize) -> Result<Self, ExactError> {
        if d == 0 {
            return Err(ExactError::ZeroExponent);
        }
        if self.is_zero() || d == 1 {
            return Ok(self.clone());
        }
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * d] = c.clone();
        }
        Ok(PolyQ { coeffs })
    }

    /// Euclidean division over `Q`.
    pub fn div_rem(&self, divisor: &PolyQ) -> Result<(PolyQ, PolyQ), ExactError> {
        let Some(db) = divisor.degree() else {
            return Err(ExactError::DivisionByZero);
        };
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((PolyQ::zero(), self.clone()));
        }
        let inv = divisor.coeffs[db].recip();
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let f = &rem[k + db] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, bj) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &f * bj;
            }
            quot[k] = f;
        }
        rem.truncate(db);
        Ok((PolyQ::new(quot), PolyQ::new(rem)))
    }

    /// Splits into `scale * p` with `p` a primitive integer polynomial with
    /// positive leading coefficient.
    pub(crate) fn to_primitive(&self) -> (BigRational, ZPoly) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: ZPoly = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let (content, prim) = zpoly::primitive_part(&ints);
        (BigRational::new(content, lcm), prim)
    }

    pub(crate) fn from_z(scale: &BigRational, p: &[BigInt]) -> Self {
        if scale.is_zero() {
            return Self::zero();
        }
        Self::new(
            p.iter()
                .map(|c| scale * BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

/// Monic greatest common divisor over `Q`.
pub fn poly_gcd(a: &PolyQ, b: &PolyQ) -> Result<PolyQ, ExactError> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(ExactError::BothZero),
        (true, false) => Ok(b.monic()),
        (false, true) => Ok(a.monic()),
        (false, false) => {
            let (_, za) = a.to_primitive();
            let (_, zb) = b.to_primitive();
            let g = modgcd::gcd(&za, &zb);
            let lc = BigRational::from_integer(g.last().unwrap().clone());
            Ok(PolyQ::from_z(&lc.recip(), &g))
        }
    }
}

fn add_coeffs(a: &[BigRational], b: &[BigRational]) -> PolyQ {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    PolyQ::new(out)
}

impl Add<&PolyQ> for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        add_coeffs(&self.coeffs, &rhs.coeffs)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        -&self
    }
}

impl Sub<&PolyQ> for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        add_coeffs(&self.coeffs, &(-rhs).coeffs)
    }
}

impl Mul<&PolyQ> for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let (sa, za) = self.to_primitive();
        let (sb, zb) = rhs.to_primitive();
        PolyQ::from_z(&(sa * sb), &zpoly::mul(&za, &zb))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ { (&self).$m(&rhs) }
        }
        impl $tr<&PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: &PolyQ) -> PolyQ { (&self).$m(rhs) }
        }
        impl $tr<PolyQ> for &PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

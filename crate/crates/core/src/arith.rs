//! Exact coefficient arithmetic: canonical rationals and single-word prime fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit the supported word size")]
    ModulusTooLarge(u64),
    #[error("value {value} cannot be interpreted in {field}")]
    DomainMismatch { value: String, field: String },
    #[error("cannot parse rational literal `{0}`")]
    BadLiteral(String),
}

/// Arbitrary-precision rational, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

/// Canonical rational `n/d`.
pub fn rat_canonical(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Rational, ArithError> {
    let d = d.into();
    if d.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    Ok(Rational(BigRational::new(n.into(), d)))
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            Err(ArithError::ZeroInverse)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer value if this is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Residue of this rational modulo `field`, failing when the denominator
    /// vanishes there.
    pub fn reduce_mod(&self, field: PrimeField) -> Result<u64, ArithError> {
        let p = BigInt::from(field.modulus());
        let num = self.numer().mod_floor(&p).to_u64().unwrap_or(0);
        let den = self.denom().mod_floor(&p).to_u64().unwrap_or(0);
        if den == 0 {
            return Err(ArithError::DomainMismatch {
                value: self.to_string(),
                field: field.to_string(),
            });
        }
        Ok(field.mul(num, field.inv(den)?))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ArithError::BadLiteral(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                rat_canonical(n, d)
            }
            None => Ok(Rational::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division by zero panics, as for the underlying BigRational; use `inv` for a
// checked path.
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// A prime field F_p with a single-word modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

/// An element of a prime field; `residue` is always in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    pub residue: u64,
    pub modulus: u64,
}

impl PrimeField {
    /// Largest supported modulus; products are formed in `u128`.
    pub const MAX_MODULUS: u64 = 1 << 62;

    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p > Self::MAX_MODULUS {
            return Err(ArithError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn element(&self, v: u64) -> Fp {
        Fp {
            residue: v % self.p,
            modulus: self.p,
        }
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, ArithError> {
        let a = a % self.p;
        if a == 0 {
            return Err(ArithError::ZeroInverse);
        }
        // extended Euclid on signed 128-bit values
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fp:{}", self.p)
    }
}

/// Inverse of a prime-field element.
pub fn fp_inverse(a: Fp) -> Result<Fp, ArithError> {
    let field = PrimeField::new(a.modulus)?;
    Ok(field.element(field.inv(a.residue)?))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Field descriptor used by evaluation and the command line: `fp:<p>`, `q`, or
/// `qbar`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rational,
    AlgebraicClosure,
    Prime(PrimeField),
}

impl FromStr for Field {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "q" => Ok(Field::Rational),
            "qbar" => Ok(Field::AlgebraicClosure),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| ArithError::BadLiteral(other.to_string()))?;
                Ok(Field::Prime(PrimeField::new(p)?))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::AlgebraicClosure => write!(f, "qbar"),
            Field::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// A scalar in one of the supported coefficient domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Rational(Rational),
    Fp(Fp),
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rational(r) => r.is_zero(),
            Value::Fp(a) => a.residue == 0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(r) => write!(f, "{r}"),
            Value::Fp(a) => write!(f, "{}", a.residue),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        rat_canonical(n, d).unwrap()
    }

    #[test]
    fn fp_inverse_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(fp_inverse(f7.element(3)).unwrap().residue, 5);
        let big = PrimeField::new(2_147_483_647).unwrap();
        assert_eq!(fp_inverse(big.element(1)).unwrap().residue, 1);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(fp_inverse(f5.element(0)), Err(ArithError::ZeroInverse));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(q(2, 4).to_string(), "1/2");
        assert_eq!(q(3, -6).to_string(), "-1/2");
        let z = q(0, 5);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(rat_canonical(1, 0), Err(ArithError::ZeroDenominator));
    }

    #[test]
    fn primality() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert_eq!(PrimeField::new(1), Err(ArithError::NotPrime(1)));
        assert_eq!(PrimeField::new(91), Err(ArithError::NotPrime(91)));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn reduce_mod_rejects_bad_denominator() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(q(1, 2).reduce_mod(f3).unwrap(), 2);
        assert!(matches!(
            q(1, 3).reduce_mod(f3),
            Err(ArithError::DomainMismatch { .. })
        ));
        assert_eq!(q(-1, 1).reduce_mod(f3).unwrap(), 2);
    }

    #[test]
    fn parses_field_descriptors() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("qbar".parse::<Field>().unwrap(), Field::AlgebraicClosure);
        assert_eq!(
            "fp:5".parse::<Field>().unwrap(),
            Field::Prime(PrimeField::new(5).unwrap())
        );
        assert!("fp:6".parse::<Field>().is_err());
        assert!("r".parse::<Field>().is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn canonical_is_idempotent(n in -1000i64..1000, d in 1i64..1000) {
            let r = q(n, d);
            let again = rat_canonical(r.numer().clone(), r.denom().clone()).unwrap();
            prop_assert_eq!(r, again);
        }

        #[test]
        fn prime_field_axioms(a in 0u64..101, b in 0u64..101, c in 0u64..101) {
            let f = PrimeField::new(101).unwrap();
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}

//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Poly, PolyError};
use crate::arith::Rational;

/// Coefficients from the constant term upward; never has a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// `x - a`
    pub fn linear_root(a: &Rational) -> Self {
        UPoly(vec![-a, Rational::one()])
    }

    pub fn x() -> Self {
        UPoly(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Rational::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::from_coeffs(c.iter().map(|&v| Rational::from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree; zero for constants including the zero polynomial.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.lc().inv().expect("nonzero"))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * &Rational::from_int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Quotient and remainder over the rationals.
    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly), PolyError> {
        if d.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if self.0.len() < d.0.len() {
            return Ok((UPoly::zero(), self.clone()));
        }
        let inv = d.lc().inv().expect("nonzero");
        let mut r = self.0.clone();
        let dn = d.0.len() - 1;
        let mut q = vec![Rational::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let c = &r[k + dn] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &(&c * dj);
            }
            q[k] = c;
        }
        r.truncate(dn);
        Ok((UPoly::from_coeffs(q), UPoly::from_coeffs(r)))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Exact quotient, `None` if `d` does not divide.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`. Runs a primitive remainder sequence on
    /// integer coefficients to keep the rational growth down.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let mut a = to_primitive_ints(self);
        let mut b = to_primitive_ints(o);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = prem_ints(&a, &b);
            a = b;
            b = primitive_ints(r);
        }
        UPoly::from_coeffs(a.into_iter().map(Rational::from_int).collect()).monic()
    }

    /// `(g, s, t)` with `g = s·self + t·o`, `g` monic (or zero).
    pub fn ext_gcd(&self, o: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo `m`, if `self` is a unit there.
    pub fn inv_mod(&self, m: &UPoly) -> Option<UPoly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        (g.degree() == 0 && !g.is_zero()).then(|| s.rem(m))
    }

    pub fn squarefree(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Rational roots, ascending, by the rational root test on the integer
    /// primitive form.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let mut f = self.squarefree();
        if f.coeff(0).is_zero() {
            out.push(Rational::zero());
            f = f.div_exact(&UPoly::x()).expect("root 0");
        }
        if f.degree() == 0 {
            return out;
        }
        let ints = to_primitive_ints(&f);
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let nd = divisors(&a0);
        let dd = divisors(&an);
        let mut cands = Vec::new();
        for n in &nd {
            for d in &dd {
                let r = Rational::from_int(n.clone()) / Rational::from_int(d.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            if f.eval(&c).is_zero() {
                out.push(c);
            }
        }
        out.sort();
        out
    }

    pub fn to_poly(&self, var: &str) -> Poly {
        let coeffs: Vec<Poly> = self.0.iter().map(|c| Poly::constant(c.clone())).collect();
        Poly::from_coeffs_in(var, &coeffs)
    }

    /// Dense form of a polynomial in at most the single variable `var`.
    pub fn from_poly(p: &Poly, var: &str) -> Result<UPoly, PolyError> {
        if p.vars().iter().any(|v| v != var) {
            return Err(PolyError::NotUnivariate(p.vars().to_vec()));
        }
        Ok(UPoly::from_coeffs(
            p.coeffs_in(var)
                .iter()
                .map(|c| c.constant_value().expect("constant coefficient"))
                .collect(),
        ))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // only used on desk-scale coefficients
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

fn to_primitive_ints(p: &UPoly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in &p.0 {
        lcm = lcm.lcm(c.denom());
    }
    primitive_ints(p.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
}

fn primitive_ints(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return v;
    }
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.iter().map(|c| c / &g).collect()
}

/// Integer pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem_ints(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly("x"))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

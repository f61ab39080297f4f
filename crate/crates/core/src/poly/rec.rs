//! Recursive view of a polynomial as univariate in one main variable with
//! polynomial coefficients in the remaining variables.

use super::{Poly, PolyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecPoly {
    pub var: String,
    /// Coefficient of `var^i` at index `i`; no trailing zeros.
    pub coeffs: Vec<Poly>,
}

impl RecPoly {
    pub fn new(p: &Poly, var: &str) -> Self {
        RecPoly {
            var: var.to_string(),
            coeffs: p.coeffs_in(var),
        }
    }

    fn from_vec(var: &str, mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        RecPoly {
            var: var.to_string(),
            coeffs,
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs_in(&self.var, &self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in the main variable; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Poly {
        self.coeffs.last().cloned().unwrap_or_else(Poly::zero)
    }

    /// Drops the leading term.
    pub fn reductum(&self) -> RecPoly {
        let mut c = self.coeffs.clone();
        c.pop();
        RecPoly::from_vec(&self.var, c)
    }

    pub fn scale(&self, c: &Poly) -> RecPoly {
        RecPoly::from_vec(&self.var, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn sub(&self, o: &RecPoly) -> RecPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Poly::zero();
        RecPoly::from_vec(
            &self.var,
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z).sub(o.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn mul(&self, o: &RecPoly) -> RecPoly {
        if self.is_zero() || o.is_zero() {
            return RecPoly::from_vec(&self.var, Vec::new());
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        RecPoly::from_vec(&self.var, out)
    }

    fn shifted(&self, k: usize) -> RecPoly {
        let mut c = vec![Poly::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        RecPoly::from_vec(&self.var, c)
    }

    /// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`, computed without
    /// division in the coefficient ring.
    pub fn prem(&self, b: &RecPoly) -> Result<RecPoly, PolyError> {
        let db = b.degree().ok_or(PolyError::ZeroDivisor)?;
        let Some(da) = self.degree() else {
            return Ok(self.clone());
        };
        if da < db {
            return Ok(self.clone());
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc();
            r = r.scale(&lb).sub(&b.scale(&lr).shifted(dr - db));
            e -= 1;
        }
        if e > 0 {
            r = r.scale(&lb.pow(e as u32));
        }
        Ok(r)
    }

    /// Sparse pseudo-remainder: like [`RecPoly::prem`] but skips the final
    /// power of `lc(b)`. Only the zero pattern is meaningful where `lc(b) ≠ 0`.
    pub fn sprem(&self, b: &RecPoly) -> Result<RecPoly, PolyError> {
        let db = b.degree().ok_or(PolyError::ZeroDivisor)?;
        let lb = b.lc();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc();
            r = r.scale(&lb).sub(&b.scale(&lr).shifted(dr - db));
        }
        Ok(r)
    }

    /// Divides every coefficient exactly by `c`.
    pub fn div_coeffs(&self, c: &Poly) -> Result<RecPoly, PolyError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                a.div_exact(c)?
                    .ok_or(PolyError::InexactDivision)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RecPoly::from_vec(&self.var, coeffs))
    }
}

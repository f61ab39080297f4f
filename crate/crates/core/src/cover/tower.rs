//! Finite point sets of the plane as triangular towers `u(x) = 0, h(x, y) = 0`
//! over ℚ[x]/(u), with `u` squarefree. ℚ[x]/(u) is a product of fields, so gcds
//! in `y` are computed by dynamic evaluation: whenever a leading coefficient is
//! a zero divisor, `u` is split into the factor where it vanishes and the
//! factor where it is a unit, and both branches continue independently.

use std::fmt;

use crate::poly::{resultant, Poly, PolyError, UPoly};

/// Polynomial in `y` with coefficients in ℚ[x]/(u), low degree first.
pub(crate) type YPoly = Vec<UPoly>;

/// The points `{(α, β) : u(α) = 0, h(α, β) = 0}` over ℚ̄; `u` monic squarefree,
/// `h` monic of positive degree in `y` and squarefree at every root of `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tower {
    pub(crate) u: UPoly,
    pub(crate) h: YPoly,
    pub(crate) x: String,
    pub(crate) y: String,
}

impl Tower {
    /// Number of points over ℚ̄.
    pub fn point_count(&self) -> u64 {
        (self.u.degree() * (self.h.len() - 1)) as u64
    }

    pub fn base(&self) -> Poly {
        self.u.to_poly(&self.x)
    }

    pub fn fiber(&self) -> Poly {
        to_poly(&self.h, &self.x, &self.y)
    }

    /// The finite set `Z(c) ∩ Z(q)` for coprime `c`, `q` in `x`, `y`.
    pub fn from_pair(c: &Poly, q: &Poly, x: &str, y: &str) -> Result<Vec<Tower>, PolyError> {
        let r = resultant(c, q, y)?;
        if r.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        let u = UPoly::from_poly(&r, x)?.squarefree();
        if u.degree() == 0 {
            return Ok(Vec::new());
        }
        let a = from_poly(c, x, y, &u)?;
        let b = from_poly(q, x, y, &u)?;
        let mut out = Vec::new();
        for (ui, g) in split_gcd(&u, a, b) {
            if g.is_empty() {
                // c and q both vanish on a whole vertical line
                return Err(PolyError::ZeroInput);
            }
            for (uj, h) in squarefree(&ui, g) {
                if h.len() > 1 {
                    out.push(Tower {
                        u: uj,
                        h,
                        x: x.to_string(),
                        y: y.to_string(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Splits the tower by a piece `{p = 0 ∀p ∈ pos, q ≠ 0 ∀q ∈ neg}`: returns
    /// the number of points the piece contains and the towers of the points it
    /// misses. `neg_product` is the product of the negated polynomials.
    pub fn discharge(&self, pos: &[Poly], neg_product: &Poly) -> Result<(u64, Vec<Tower>), PolyError> {
        // branches (u_i, h mod u_i, g_i) with g_i the part of h on which all of pos vanish
        let mut branches = vec![(self.u.clone(), self.h.clone(), self.h.clone())];
        for p in pos {
            let mut next = Vec::new();
            for (ui, hi, gi) in branches {
                let pi = from_poly(p, &self.x, &self.y, &ui)?;
                for (uj, gj) in split_gcd(&ui, gi, pi) {
                    next.push((uj.clone(), reduce(&hi, &uj), gj));
                }
            }
            branches = next;
        }
        let mut covered_points = 0;
        let mut rest = Vec::new();
        for (ui, hi, gi) in branches {
            let q = from_poly(neg_product, &self.x, &self.y, &ui)?;
            for (uj, dj) in split_gcd(&ui, reduce(&gi, &ui), q) {
                let gj = reduce(&gi, &uj);
                let hj = reduce(&hi, &uj);
                let covered = div_monic(&gj, &dj, &uj).0;
                covered_points += (uj.degree() * (covered.len() - 1)) as u64;
                let left = div_monic(&hj, &covered, &uj).0;
                if left.len() > 1 {
                    rest.push(Tower {
                        u: uj,
                        h: left,
                        x: self.x.clone(),
                        y: self.y.clone(),
                    });
                }
            }
        }
        Ok((covered_points, rest))
    }

    /// Rational points of the tower (those with `u` and `h` having rational
    /// roots), used to exhibit uncovered points.
    pub fn rational_points(&self) -> Vec<(crate::arith::Rational, crate::arith::Rational)> {
        let mut out = Vec::new();
        for a in self.u.rational_roots() {
            let coeffs: Vec<_> = self.h.iter().map(|c| c.eval(&a)).collect();
            for b in UPoly::from_coeffs(coeffs).rational_roots() {
                out.push((a.clone(), b));
            }
        }
        out
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "points({} = 0, {} = 0)", self.base(), self.fiber())
    }
}

fn trim(mut a: YPoly) -> YPoly {
    while a.last().is_some_and(UPoly::is_zero) {
        a.pop();
    }
    a
}

pub(crate) fn reduce(a: &YPoly, u: &UPoly) -> YPoly {
    trim(a.iter().map(|c| c.rem(u)).collect())
}

pub(crate) fn from_poly(p: &Poly, x: &str, y: &str, u: &UPoly) -> Result<YPoly, PolyError> {
    let coeffs = p
        .coeffs_in(y)
        .iter()
        .map(|c| UPoly::from_poly(c, x).map(|c| c.rem(u)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(trim(coeffs))
}

pub(crate) fn to_poly(a: &YPoly, x: &str, y: &str) -> Poly {
    let coeffs: Vec<Poly> = a.iter().map(|c| c.to_poly(x)).collect();
    Poly::from_coeffs_in(y, &coeffs)
}

fn split(u: &UPoly, g: &UPoly) -> (UPoly, UPoly) {
    let other = u.div_exact(g).expect("factor of u").monic();
    (g.clone(), other)
}

/// Splits `u` until `a` is monic or zero on every branch.
fn make_monic(u: &UPoly, a: YPoly) -> Vec<(UPoly, YPoly)> {
    let mut a = reduce(&a, u);
    while let Some(lc) = a.last() {
        let g = lc.gcd(u);
        if g.degree() == 0 {
            let inv = lc.inv_mod(u).expect("unit");
            let a = a.iter().map(|c| c.mul(&inv).rem(u)).collect();
            return vec![(u.clone(), a)];
        }
        if g.degree() == u.degree() {
            a.pop();
            a = trim(a);
            continue;
        }
        let (u1, u2) = split(u, &g);
        let mut out = make_monic(&u1, a.clone());
        out.extend(make_monic(&u2, a));
        return out;
    }
    vec![(u.clone(), Vec::new())]
}

/// Quotient and remainder by a monic divisor over ℚ[x]/(u).
fn div_monic(a: &YPoly, b: &YPoly, u: &UPoly) -> (YPoly, YPoly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![UPoly::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&c.mul(bj)).rem(u);
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic gcd of `a` and `b` on each branch of a splitting of `u` (empty when
/// both vanish on the branch).
pub(crate) fn split_gcd(u: &UPoly, a: YPoly, b: YPoly) -> Vec<(UPoly, YPoly)> {
    let mut out = Vec::new();
    for (ui, bi) in make_monic(u, b) {
        let ai = reduce(&a, &ui);
        if bi.is_empty() {
            out.extend(make_monic(&ui, ai));
        } else {
            let r = div_monic(&ai, &bi, &ui).1;
            out.extend(split_gcd(&ui, bi, r));
        }
    }
    out
}

fn derivative(a: &YPoly) -> YPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&crate::arith::Rational::from_int(k as i64)))
            .collect(),
    )
}

/// Squarefree part of a monic `h` on each branch (characteristic 0).
fn squarefree(u: &UPoly, h: YPoly) -> Vec<(UPoly, YPoly)> {
    let d = derivative(&h);
    split_gcd(u, h.clone(), d)
        .into_iter()
        .map(|(ui, g)| {
            let hi = reduce(&h, &ui);
            let s = div_monic(&hi, &g, &ui).0;
            (ui, s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::formula::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn axes_meet_at_origin() {
        let t = Tower::from_pair(&p("y"), &p("x"), "x", "y").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].point_count(), 1);
        assert_eq!(t[0].to_string(), "points(x = 0, y = 0)");
    }

    #[test]
    fn circle_and_line_split_into_irrational_points() {
        // y = x meets x^2 + y^2 = 1 at two points with x^2 = 1/2
        let t = Tower::from_pair(&p("x^2 + y^2 - 1"), &p("y - x"), "x", "y").unwrap();
        let total: u64 = t.iter().map(Tower::point_count).sum();
        assert_eq!(total, 2);
        assert!(t.iter().all(|t| t.rational_points().is_empty()));
    }

    #[test]
    fn zero_divisors_split_the_base() {
        // the leading coefficient x - 2 vanishes at one root of x^2 - 4
        let c = p("(x - 2)*y - 1");
        let t = Tower::from_pair(&c, &p("x^2 - 4"), "x", "y").unwrap();
        let pts: Vec<_> = t.iter().flat_map(Tower::rational_points).collect();
        assert_eq!(pts, vec![(Rational::from_int(-2), "-1/4".parse().unwrap())]);
    }

    #[test]
    fn discharge_counts_points() {
        // the four points (±1, ±1)
        let t = Tower::from_pair(&p("x^2 - 1"), &p("y^2 - 1"), "x", "y").unwrap();
        assert_eq!(t.iter().map(Tower::point_count).sum::<u64>(), 4);
        // {x = 1, y ≠ -1} covers exactly (1, 1)
        let mut covered = 0;
        let mut left = 0;
        for tw in &t {
            let (c, rest) = tw.discharge(&[p("x - 1")], &p("y + 1")).unwrap();
            covered += c;
            left += rest.iter().map(Tower::point_count).sum::<u64>();
        }
        assert_eq!((covered, left), (1, 3));
    }

    #[test]
    fn degenerate_fiber_is_rejected() {
        // x divides both: a whole line in common
        assert!(Tower::from_pair(&p("x*y"), &p("x"), "x", "y").is_err());
    }
}

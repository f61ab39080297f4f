//! Gcd, resultant and square-free reduction for polynomials over ℚ in at most
//! two variables (resultants in any number).

use std::collections::BTreeSet;

use super::{Poly, PolyError, RecPoly, UPoly};

fn union_vars(f: &Poly, g: &Poly) -> Vec<String> {
    let set: BTreeSet<&String> = f.vars().iter().chain(g.vars()).collect();
    set.into_iter().cloned().collect()
}

/// Exact divisibility test: `(true, Some(q))` iff `f = q·g`.
pub fn poly_divides(g: &Poly, f: &Poly) -> Result<(bool, Option<Poly>), PolyError> {
    match f.div_exact(g)? {
        Some(q) => Ok((true, Some(q))),
        None => Ok((false, None)),
    }
}

/// Monic gcd of two univariate polynomials over ℚ.
pub fn gcd_univariate(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    let vars = union_vars(f, g);
    if vars.len() > 1 {
        return Err(PolyError::NotUnivariate(vars));
    }
    let var = vars.first().map(String::as_str).unwrap_or("x");
    let a = UPoly::from_poly(f, var)?;
    let b = UPoly::from_poly(g, var)?;
    Ok(a.gcd(&b).to_poly(var))
}

/// Monic gcd of the coefficients of `f` seen as a polynomial in `main`.
fn content(f: &RecPoly) -> Result<Poly, PolyError> {
    let mut g = Poly::zero();
    for c in &f.coeffs {
        g = gcd_univariate(&g, c)?;
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    Ok(g)
}

fn primitive_part(f: &RecPoly) -> Result<RecPoly, PolyError> {
    if f.is_zero() {
        return Ok(f.clone());
    }
    let c = content(f)?;
    f.div_coeffs(&c)
}

/// Gcd of two polynomials in at most two variables, via a subresultant
/// remainder sequence in `main_var` and content extraction in the other
/// variable. The result is normalized to leading coefficient 1.
pub fn gcd_bivariate(f: &Poly, g: &Poly, main_var: &str) -> Result<Poly, PolyError> {
    let vars = union_vars(f, g);
    if vars.len() > 2 {
        return Err(PolyError::TooManyVariables(vars));
    }
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if f.is_zero() {
        return Ok(g.monic());
    }
    if g.is_zero() {
        return Ok(f.monic());
    }
    if !f.involves(main_var) && !g.involves(main_var) {
        // both live in the other variable (or are constants)
        return gcd_univariate(f, g);
    }
    let a = RecPoly::new(f, main_var);
    let b = RecPoly::new(g, main_var);
    let ca = content(&a)?;
    let cb = content(&b)?;
    let c = gcd_univariate(&ca, &cb)?;
    let mut a = a.div_coeffs(&ca)?;
    let mut b = b.div_coeffs(&cb)?;
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    let last = subresultant_last(a, b)?;
    let pp = primitive_part(&last)?;
    Ok(pp.to_poly().mul(&c).monic())
}

/// Last nonzero element of the subresultant remainder sequence of `a`, `b`
/// (deg a ≥ deg b, both nonzero). Returns a constant when the sequence ends
/// in degree zero.
fn subresultant_last(mut a: RecPoly, mut b: RecPoly) -> Result<RecPoly, PolyError> {
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let db = b.degree().expect("nonzero");
        if db == 0 {
            return Ok(RecPoly::new(&Poly::one(), &a.var));
        }
        let delta = a.degree().expect("nonzero") - db;
        let r = a.prem(&b)?;
        if r.is_zero() {
            return Ok(b);
        }
        a = b;
        b = r.div_coeffs(&g.mul(&h.pow(delta as u32)))?;
        g = a.lc();
        h = next_h(&h, &g, delta)?;
    }
}

fn next_h(h: &Poly, g: &Poly, delta: usize) -> Result<Poly, PolyError> {
    if delta == 0 {
        return Ok(h.clone());
    }
    g.pow(delta as u32)
        .div_exact(&h.pow(delta as u32 - 1))?
        .ok_or(PolyError::InexactDivision)
}

/// Resultant of `f` and `g` with respect to `var`, a polynomial in the
/// remaining variables.
pub fn resultant(f: &Poly, g: &Poly, var: &str) -> Result<Poly, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let mut a = RecPoly::new(f, var);
    let mut b = RecPoly::new(g, var);
    let mut da = a.degree().expect("nonzero");
    let mut db = b.degree().expect("nonzero");
    let mut sign_negative = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        sign_negative = (da * db) % 2 == 1;
    }
    if db == 0 {
        let r = b.lc().pow(da as u32);
        return Ok(if sign_negative { r.neg() } else { r });
    }
    let mut g_ = Poly::one();
    let mut h = Poly::one();
    loop {
        let da = a.degree().expect("nonzero");
        let db = b.degree().expect("nonzero");
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = a.prem(&b)?;
        a = b;
        b = r.div_coeffs(&g_.mul(&h.pow(delta as u32)))?;
        g_ = a.lc();
        h = next_h(&h, &g_, delta)?;
        if b.is_zero() {
            return Ok(Poly::zero());
        }
        if b.degree() == Some(0) {
            break;
        }
    }
    let da = a.degree().expect("nonzero") as u32;
    let r = b
        .lc()
        .pow(da)
        .div_exact(&h.pow(da - 1))?
        .ok_or(PolyError::InexactDivision)?;
    Ok(if sign_negative { r.neg() } else { r })
}

/// `f / gcd(f, ∂f/∂var)`, monic. For univariate `f` this is the usual
/// square-free part; for bivariate `f` it removes repeated factors that
/// involve `var`.
pub fn squarefree_part(f: &Poly, var: &str) -> Result<Poly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if f.vars().iter().all(|v| v == var) {
        let u = UPoly::from_poly(f, var)?;
        return Ok(u.squarefree().to_poly(var));
    }
    if f.vars().len() > 2 {
        return Err(PolyError::TooManyVariables(f.vars().to_vec()));
    }
    let d = f.derivative(var);
    let g = gcd_bivariate(f, &d, var)?;
    Ok(f.div_exact(&g)?.ok_or(PolyError::InexactDivision)?.monic())
}

/// Square-free reduction of a polynomial in at most two variables: divides out
/// `gcd(f, ∂f/∂x, ∂f/∂y)`, so the result has the same zero locus and no
/// repeated factors (characteristic 0).
pub fn reduced_bivariate(f: &Poly) -> Result<Poly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let vars = f.vars().to_vec();
    match vars.len() {
        0 => Ok(Poly::one()),
        1 => squarefree_part(f, &vars[0]),
        2 => {
            let mut g = f.clone();
            for v in &vars {
                g = gcd_bivariate(&g, &f.derivative(v), &vars[0])?;
            }
            Ok(f.div_exact(&g)?.ok_or(PolyError::InexactDivision)?.monic())
        }
        _ => Err(PolyError::TooManyVariables(vars)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::poly::test_util::*;
    use proptest::prelude::*;

    fn c(v: i64) -> Poly {
        Poly::int(v)
    }

    #[test]
    fn divides_examples() {
        let (ok, q) = poly_divides(&x().sub(&c(1)), &x().pow(2).sub(&c(1))).unwrap();
        assert!(ok);
        assert_eq!(q.unwrap(), x().add(&c(1)));
        // x² + 1 = (x − 1)(x + 1) + 2
        let (ok, q) = poly_divides(&x().sub(&c(1)), &x().pow(2).add(&c(1))).unwrap();
        assert!(!ok && q.is_none());
        assert_eq!(poly_divides(&x(), &Poly::zero()).unwrap(), (true, Some(Poly::zero())));
        assert_eq!(poly_divides(&Poly::zero(), &x()), Err(PolyError::ZeroDivisor));
    }

    #[test]
    fn univariate_gcd_examples() {
        let f = x().pow(2).sub(&c(1));
        let g = x().pow(2).sub(&x().scale(&Rational::from_int(2))).add(&c(1));
        assert_eq!(gcd_univariate(&f, &g).unwrap(), x().sub(&c(1)));
        let f = x().pow(2).add(&c(1));
        let g = x().pow(2).add(&x());
        assert_eq!(gcd_univariate(&f, &g).unwrap(), c(1));
        let f = x().scale(&Rational::from_int(3)).add(&c(6));
        assert_eq!(gcd_univariate(&f, &Poly::zero()).unwrap(), x().add(&c(2)));
        assert!(gcd_univariate(&Poly::zero(), &Poly::zero()).unwrap().is_zero());
        assert!(matches!(
            gcd_univariate(&x(), &y()),
            Err(PolyError::NotUnivariate(_))
        ));
    }

    #[test]
    fn bivariate_gcd_examples() {
        let f = x().pow(2).sub(&y().pow(2));
        assert_eq!(gcd_bivariate(&f, &x().sub(&y()), "x").unwrap(), x().sub(&y()));
        let xy = x().mul(&y());
        assert_eq!(gcd_bivariate(&xy, &xy.add(&x()), "x").unwrap(), x());
        assert_eq!(gcd_bivariate(&xy, &xy.add(&x()), "y").unwrap(), x());
        assert_eq!(gcd_bivariate(&x().add(&y()), &x().sub(&y()), "x").unwrap(), c(1));
        let z = Poly::var("z");
        assert!(matches!(
            gcd_bivariate(&x().mul(&z), &y(), "x"),
            Err(PolyError::TooManyVariables(_))
        ));
    }

    #[test]
    fn resultant_examples() {
        let f = y().pow(2).add(&x().pow(2)).sub(&c(1));
        assert_eq!(resultant(&f, &y(), "y").unwrap(), x().pow(2).sub(&c(1)));
        let a = Poly::var("a");
        let b = Poly::var("b");
        let r = resultant(&x().sub(&a), &x().sub(&b), "x").unwrap();
        assert!(r == a.sub(&b) || r == b.sub(&a));
        assert!(resultant(&y(), &y(), "y").unwrap().is_zero());
        assert_eq!(resultant(&Poly::zero(), &y(), "y"), Err(PolyError::ZeroInput));
    }

    #[test]
    fn resultant_matches_sylvester_for_quadratics() {
        // res_x(x² + p x + q, x − r) = r² + p r + q
        let (p, q, r) = (Poly::var("p"), Poly::var("q"), Poly::var("r"));
        let f = x().pow(2).add(&p.mul(&x())).add(&q);
        let res = resultant(&f, &x().sub(&r), "x").unwrap();
        assert_eq!(res, r.pow(2).add(&p.mul(&r)).add(&q));
        // res(x²−2, x²−3) = ∏ (α² − 3) over α = ±√2 = 1
        let g = x().pow(2).sub(&c(2));
        let h = x().pow(2).sub(&c(3));
        assert_eq!(resultant(&g, &h, "x").unwrap(), c(1));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&x().sub(&c(1)).pow(2), "x").unwrap(), x().sub(&c(1)));
        let f = x().pow(2).sub(&c(1));
        assert_eq!(squarefree_part(&f, "x").unwrap(), f);
        let f = x().pow(3).add(&x().pow(2));
        assert_eq!(squarefree_part(&f, "x").unwrap(), x().pow(2).add(&x()));
        assert_eq!(squarefree_part(&Poly::zero(), "x"), Err(PolyError::ZeroInput));
    }

    #[test]
    fn reduced_keeps_all_components() {
        // x·y² has locus x = 0 ∪ y = 0
        let f = x().mul(&y().pow(2));
        assert_eq!(reduced_bivariate(&f).unwrap(), x().mul(&y()));
        let g = x().sub(&y()).pow(3).mul(&x().add(&c(1)));
        assert_eq!(
            reduced_bivariate(&g).unwrap(),
            x().sub(&y()).mul(&x().add(&c(1))).monic()
        );
    }

    fn upoly_strategy() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-3i64..4, 0..5)
            .prop_map(|c| UPoly::from_ints(&c).to_poly("x"))
    }

    fn bipoly_strategy() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u32..3, 0u32..3), -3i64..4), 0..5).prop_map(|terms| {
            let vars = vec!["x".to_string(), "y".to_string()];
            Poly::from_terms(&vars, terms.into_iter().map(|((a, b), c)| (vec![a, b], Rational::from_int(c))))
        })
    }

    proptest! {
        #[test]
        fn univariate_gcd_laws(f in upoly_strategy(), g in upoly_strategy()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let d = gcd_univariate(&f, &g).unwrap();
            prop_assert!(poly_divides(&d, &f).unwrap().0);
            prop_assert!(poly_divides(&d, &g).unwrap().0);
            let r = resultant(&f, &g, "x").unwrap();
            let both_involve = f.involves("x") && g.involves("x");
            if both_involve {
                prop_assert_eq!(r.is_zero(), d.total_degree() >= 1);
            }
        }

        #[test]
        fn eval_is_ring_homomorphism(f in bipoly_strategy(), g in bipoly_strategy(), a in -5i64..5, b in -5i64..5) {
            let pt = [("x".to_string(), Rational::from_int(a)), ("y".to_string(), Rational::from_int(b))].into();
            let ev = |p: &Poly| p.eval_rational(&pt).unwrap();
            prop_assert_eq!(ev(&f.add(&g)), &ev(&f) + &ev(&g));
            prop_assert_eq!(ev(&f.mul(&g)), &ev(&f) * &ev(&g));
        }

        #[test]
        fn bivariate_gcd_divides(f in bipoly_strategy(), g in bipoly_strategy(), h in bipoly_strategy()) {
            let ff = f.mul(&h);
            let gg = g.mul(&h);
            prop_assume!(!ff.is_zero() || !gg.is_zero());
            let d = gcd_bivariate(&ff, &gg, "x").unwrap();
            prop_assert!(poly_divides(&d, &ff).unwrap().0);
            prop_assert!(poly_divides(&d, &gg).unwrap().0);
            if !ff.is_zero() && !gg.is_zero() && !h.is_zero() {
                prop_assert!(poly_divides(&h.monic(), &d).unwrap().0, "h={h} d={d}");
            }
        }

        #[test]
        fn squarefree_part_laws(f in upoly_strategy(), g in upoly_strategy()) {
            let f = f.mul(&g.pow(2));
            prop_assume!(!f.is_zero());
            let s = squarefree_part(&f, "x").unwrap();
            prop_assert!(poly_divides(&s, &f).unwrap().0);
            let d = gcd_univariate(&s, &s.derivative("x")).unwrap();
            prop_assert_eq!(d, Poly::one());
        }
    }
}

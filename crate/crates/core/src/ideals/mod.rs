//! Ideal membership with explicit lifts, unit certificates and Koszul
//! division in localized rings.

mod groebner;
mod ring;

pub use groebner::{groebner, GroebnerBasis};
pub use ring::LocalRing;

use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::LocElem;
use crate::error::Error;

/// Gröbner basis of the ideal generated by `gens` plus the unit relations,
/// with the generator order the ring asks for. Returns the basis and, for
/// each original generator, its index in the list handed to the engine.
fn ext_basis(ring: &LocalRing, gens: &[LocElem]) -> Result<(GroebnerBasis, Vec<usize>), Error> {
    let ext: Vec<_> = gens.iter().map(|g| ring.to_ext(g)).collect::<Result<_, _>>()?;
    let rels = ring.relations();
    let (all, slots): (Vec<_>, Vec<usize>) = if ring.reversed_generators() {
        let k = rels.len();
        let n = ext.len();
        let mut all = rels;
        all.extend(ext.into_iter().rev());
        (all, (0..n).map(|m| k + n - 1 - m).collect())
    } else {
        let n = ext.len();
        let mut all = ext;
        all.extend(rels);
        (all, (0..n).collect())
    };
    let all = if all.is_empty() { alloc::vec![crate::algebra::Poly::zero(ring.ext_nvars())] } else { all };
    Ok((groebner(&all), slots))
}

/// Coefficients `c` with `p = sum(c[m] * gens[m])` in the localized ring.
pub fn lift(ring: &LocalRing, p: &LocElem, gens: &[LocElem]) -> Result<Vec<LocElem>, Error> {
    if p.is_zero() {
        return Ok(gens.iter().map(|_| ring.zero()).collect());
    }
    let (gb, slots) = ext_basis(ring, gens)?;
    let (rem, cof) = gb.reduce_with_cofactors(&ring.to_ext(p)?);
    if !rem.is_zero() {
        return Err(Error::NotInIdeal);
    }
    Ok(slots.iter().map(|&k| ring.from_ext(&cof[k])).collect())
}

pub fn contains(ring: &LocalRing, p: &LocElem, gens: &[LocElem]) -> Result<bool, Error> {
    if p.is_zero() {
        return Ok(true);
    }
    let (gb, _) = ext_basis(ring, gens)?;
    Ok(gb.contains(&ring.to_ext(p)?))
}

/// `(u, v)` with `u f + v g = 1`.
pub fn unit_certificate(ring: &LocalRing, f: &LocElem, g: &LocElem) -> Result<(LocElem, LocElem), Error> {
    match lift(ring, &ring.one(), &[f.clone(), g.clone()]) {
        Ok(c) => {
            let mut it = c.into_iter();
            Ok((it.next().unwrap(), it.next().unwrap()))
        }
        Err(Error::NotInIdeal) => Err(Error::NotCoprime),
        Err(e) => Err(e),
    }
}

/// `(a, b)` with `p = a f + b g`.
pub fn lift_pair(ring: &LocalRing, p: &LocElem, f: &LocElem, g: &LocElem) -> Result<(LocElem, LocElem), Error> {
    let c = lift(ring, p, &[f.clone(), g.clone()])?;
    let mut it = c.into_iter();
    Ok((it.next().unwrap(), it.next().unwrap()))
}

/// True iff every syzygy of `(f, g)` is a multiple of `(g, -f)`.
pub fn regular_pair(ring: &LocalRing, f: &LocElem, g: &LocElem) -> Result<bool, Error> {
    let unit = |x: &LocElem| contains(ring, &ring.one(), core::slice::from_ref(x));
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Ok(false),
        (false, true) => return unit(f),
        (true, false) => return unit(g),
        _ => {}
    }
    // (g) : f = (g), read off the syzygies of (f, g, relations)
    let n = ring.ext_nvars();
    let mut all = alloc::vec![ring.to_ext(f)?, ring.to_ext(g)?];
    all.extend(ring.relations());
    let syz = groebner(&all).syzygies();
    let mut g_rel = Vec::with_capacity(all.len() - 1);
    g_rel.push(all[1].clone());
    g_rel.extend(ring.relations());
    let quotient_target = groebner(&g_rel);
    for s in syz {
        debug_assert_eq!(s[0].nvars(), n);
        if !quotient_target.contains(&s[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `w` with `u = w g` and `v = w f`, given `u f = v g` and a regular pair.
pub fn koszul_divide(ring: &LocalRing, u: &LocElem, v: &LocElem, f: &LocElem, g: &LocElem) -> Result<LocElem, Error> {
    if u * f != v * g {
        return Err(Error::PreconditionViolated(String::from("u*f != v*g")));
    }
    if !regular_pair(ring, f, g)? {
        return Err(Error::NotRegularPair);
    }
    let w = if !g.is_zero() {
        lift(ring, u, core::slice::from_ref(g))
    } else {
        lift(ring, v, core::slice::from_ref(f))
    };
    let w = w.map_err(|_| Error::NotRegularPair)?.remove(0);
    debug_assert!(&(&w * g) == u && &(&w * f) == v);
    Ok(w)
}

/// Whether two generator lists span the same ideal of the localized ring.
pub fn ideal_equal(ring: &LocalRing, a: &[LocElem], b: &[LocElem]) -> Result<bool, Error> {
    let (ga, _) = ext_basis(ring, a)?;
    let (gb, _) = ext_basis(ring, b)?;
    Ok(ga.basis() == gb.basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_loc, Poly};

    fn aff(units: &[&str]) -> LocalRing {
        LocalRing::affine(2, units.iter().map(|u| crate::algebra::parse_poly(u, 2).unwrap()))
    }

    fn e(s: &str) -> LocElem {
        parse_loc(s, 2).unwrap()
    }

    #[test]
    fn certificates() {
        let r = aff(&[]);
        assert_eq!(unit_certificate(&r, &e("x0"), &e("x0+1")).unwrap(), (e("-1"), e("1")));
        assert_eq!(unit_certificate(&r, &e("1"), &e("0")).unwrap(), (e("1"), e("0")));
        assert_eq!(unit_certificate(&r, &e("x0"), &e("x1")), Err(Error::NotCoprime));
        let loc = aff(&["x0"]);
        let (u, v) = unit_certificate(&loc, &e("x0"), &e("x1")).unwrap();
        assert_eq!(&(&u * &e("x0")) + &(&v * &e("x1")), e("1"));
    }

    #[test]
    fn lifts() {
        let r = aff(&[]);
        assert_eq!(lift_pair(&r, &e("3*x0 + x1^2"), &e("x0"), &e("x1")).unwrap(), (e("3"), e("x1")));
        assert_eq!(lift_pair(&r, &e("0"), &e("x0"), &e("x1")).unwrap(), (e("0"), e("0")));
        let (f, g) = (e("x0^2 + x1"), e("x1^3 - x0"));
        let p = &(&e("x0") * &g) - &(&e("x1") * &f);
        let (a, b) = lift_pair(&r, &p, &f, &g).unwrap();
        assert_eq!(&(&a * &f) + &(&b * &g), p);
        assert_eq!(lift_pair(&r, &e("1"), &e("x0"), &e("x1")), Err(Error::NotInIdeal));
    }

    #[test]
    fn koszul() {
        let r = aff(&[]);
        let (x, y) = (e("x0"), e("x1"));
        assert_eq!(koszul_divide(&r, &y, &x, &x, &y).unwrap(), e("1"));
        assert_eq!(koszul_divide(&r, &e("x1^2"), &e("x0*x1"), &x, &y).unwrap(), y);
        assert!(matches!(koszul_divide(&r, &e("1"), &e("1"), &x, &y), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn regularity() {
        let r = aff(&[]);
        assert!(regular_pair(&r, &e("x0"), &e("x1")).unwrap());
        assert!(!regular_pair(&r, &e("x0"), &e("x0")).unwrap());
        assert!(regular_pair(&r, &e("1"), &e("0")).unwrap());
        assert!(!regular_pair(&r, &e("x0*x1"), &e("x0^2")).unwrap());
        let loc = aff(&["x0"]);
        assert!(regular_pair(&loc, &e("x0*x1"), &e("x0^2")).unwrap());
    }

    #[test]
    fn ideal_equality() {
        let r = aff(&["x0 + 1"]);
        assert!(ideal_equal(&r, &[e("x0"), e("x1")], &[e("x1"), e("x0")]).unwrap());
        assert!(!ideal_equal(&r, &[e("x0"), e("x1")], &[e("x0^2"), e("x1")]).unwrap());
        assert!(ideal_equal(&r, &[e("x0*(x0+1)"), e("x1")], &[e("x0"), e("x1")]).unwrap());
    }

    #[test]
    fn projective_overlap_lift() {
        // chart 0 of P^2 with x1 inverted: (x1/x0, x2/x0) contains 1
        let r = LocalRing::projective(3, 0, [Poly::var(3, 1)]);
        let f = parse_loc("x1/x0", 3).unwrap();
        let g = parse_loc("x2/x0", 3).unwrap();
        let (u, v) = unit_certificate(&r, &f, &g).unwrap();
        assert_eq!(&(&u * &f) + &(&v * &g), LocElem::one(3));
        assert!(u.degree() == Some(0) || u.is_zero());
    }
}

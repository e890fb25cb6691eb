//! Elements of localized polynomial rings: a numerator over a product of
//! powers of designated unit polynomials.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{rat, Monomial, Poly, Rational};

/// `num / prod(unit^exp)`. Unit keys are monic and non-constant; the
/// canonical form cancels every unit factor that divides the numerator.
#[derive(Clone, Debug)]
pub struct LocElem {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl LocElem {
    pub fn zero(nvars: usize) -> Self {
        LocElem { num: Poly::zero(nvars), den: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::from_poly(Poly::int(nvars, c))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn sign(nvars: usize, exponent: usize) -> Self {
        Self::int(nvars, if exponent % 2 == 0 { 1 } else { -1 })
    }

    pub fn from_poly(num: Poly) -> Self {
        LocElem { num, den: BTreeMap::new() }
    }

    /// Builds `num / prod(u^e)` and brings it into canonical form.
    pub fn new(num: Poly, den: impl IntoIterator<Item = (Poly, u32)>) -> Self {
        let mut out = LocElem::from_poly(num);
        for (u, e) in den {
            out = out.div_unit(&u, e);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<Poly, u32> {
        &self.den
    }

    pub fn den_poly(&self) -> Poly {
        let mut d = Poly::one(self.nvars());
        for (u, &e) in &self.den {
            d = &d * &u.pow(e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Divides by `u^e`. A constant `u` is absorbed into the numerator; a
    /// non-constant one is made monic and recorded as a denominator unit.
    pub fn div_unit(&self, u: &Poly, e: u32) -> Self {
        assert!(!u.is_zero(), "division by the zero polynomial");
        if e == 0 {
            return self.clone();
        }
        if let Some(c) = u.as_constant() {
            let k = c.recip();
            let mut f = Rational::one();
            for _ in 0..e {
                f *= &k;
            }
            return LocElem { num: self.num.scale(&f), den: self.den.clone() };
        }
        if let Some((m, c)) = u.as_monomial() {
            if m.degree() > 1 {
                let nv = self.nvars();
                let mut out = self.scale(&c.recip().pow(e as i32));
                for (k, &a) in m.exps().iter().enumerate() {
                    if a > 0 {
                        out = out.div_unit(&Poly::var(nv, k), a * e);
                    }
                }
                return out;
            }
        }
        let (monic, lc) = u.monic();
        let mut f = Rational::one();
        let inv = lc.recip();
        for _ in 0..e {
            f *= &inv;
        }
        let mut den = self.den.clone();
        *den.entry(monic).or_insert(0) += e;
        LocElem { num: self.num.scale(&f), den }.normalized()
    }

    /// Cancels designated-unit factors dividing the numerator.
    pub fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<Poly> = self.den.keys().cloned().collect();
        for u in keys {
            let mut e = self.den[&u];
            while e > 0 {
                match self.num.div_exact(&u) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e == 0 {
                self.den.remove(&u);
            } else {
                self.den.insert(u, e);
            }
        }
        self
    }

    fn common_denominator(&self, other: &LocElem) -> BTreeMap<Poly, u32> {
        let mut den = self.den.clone();
        for (u, &e) in &other.den {
            let entry = den.entry(u.clone()).or_insert(0);
            *entry = (*entry).max(e);
        }
        den
    }

    /// Numerator of `self` rewritten over the (larger) denominator `den`.
    fn lift_numerator(&self, den: &BTreeMap<Poly, u32>) -> Poly {
        let mut n = self.num.clone();
        for (u, &e) in den {
            let have = self.den.get(u).copied().unwrap_or(0);
            if e > have {
                n = &n * &u.pow(e - have);
            }
        }
        n
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LocElem::zero(self.nvars());
        }
        LocElem { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        LocElem { num: &self.num * p, den: self.den.clone() }.normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = LocElem::one(self.nvars());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Inverse when the numerator factors as a constant times powers of the
    /// given units (which must be designated wherever the result is used).
    pub fn inverse_via_units(&self, units: &[Poly]) -> Option<LocElem> {
        if self.num.is_zero() {
            return None;
        }
        let mut rest = self.num.clone();
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        for u in units {
            if u.is_constant() {
                continue;
            }
            let mut k = 0;
            while let Some(q) = rest.div_exact(u) {
                rest = q;
                k += 1;
            }
            if k > 0 {
                factors.push((u.clone(), k));
            }
        }
        let c = rest.as_constant()?;
        let mut inv = LocElem::constant(self.nvars(), c.recip()).mul_poly(&self.den_poly());
        for (u, k) in factors {
            inv = inv.div_unit(&u, k);
        }
        Some(inv)
    }

    /// Degree of a homogeneous element (numerator degree minus denominator
    /// degree), `None` for zero or non-homogeneous numerators.
    pub fn degree(&self) -> Option<i64> {
        if self.num.is_zero() || !self.num.is_homogeneous() {
            return None;
        }
        let mut d = self.num.degree()? as i64;
        for (u, &e) in &self.den {
            if !u.is_homogeneous() {
                return None;
            }
            d -= (u.degree()? as i64) * e as i64;
        }
        Some(d)
    }

    /// True when every denominator unit is a single variable.
    pub fn has_monomial_denominator(&self) -> bool {
        self.den.keys().all(|u| u.as_monomial().is_some())
    }

    pub fn to_string_with(&self, names: &dyn Fn(usize) -> String) -> String {
        let n = self.num.to_string_with(names);
        if self.den.is_empty() {
            return n;
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(u, &e)| {
                let us = u.to_string_with(names);
                if e == 1 {
                    alloc::format!("({})", us)
                } else {
                    alloc::format!("({})^{}", us, e)
                }
            })
            .collect();
        alloc::format!("({})/{}", n, parts.join("/"))
    }

    /// Monomial `x^e` for a Laurent exponent vector; negative entries go to
    /// the denominator.
    pub fn laurent_monomial(exps: &[i64], coeff: Rational) -> Self {
        let nvars = exps.len();
        let pos: Vec<u32> = exps.iter().map(|&e| e.max(0) as u32).collect();
        let mut out = LocElem::from_poly(Poly::term(Monomial::from_exps(pos), coeff));
        for (k, &e) in exps.iter().enumerate() {
            if e < 0 {
                out = out.div_unit(&Poly::var(nvars, k), (-e) as u32);
            }
        }
        out
    }
}

impl PartialEq for LocElem {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        let den = self.common_denominator(other);
        self.lift_numerator(&den) == other.lift_numerator(&den)
    }
}

impl Eq for LocElem {}

impl fmt::Display for LocElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&|k| alloc::format!("x{}", k)))
    }
}

impl Add for &LocElem {
    type Output = LocElem;
    fn add(self, rhs: &LocElem) -> LocElem {
        if self.den == rhs.den {
            return LocElem { num: &self.num + &rhs.num, den: self.den.clone() }.normalized();
        }
        let den = self.common_denominator(rhs);
        let num = &self.lift_numerator(&den) + &rhs.lift_numerator(&den);
        LocElem { num, den }.normalized()
    }
}

impl Sub for &LocElem {
    type Output = LocElem;
    fn sub(self, rhs: &LocElem) -> LocElem {
        self + &(-rhs)
    }
}

impl Mul for &LocElem {
    type Output = LocElem;
    fn mul(self, rhs: &LocElem) -> LocElem {
        if self.is_zero() || rhs.is_zero() {
            return LocElem::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (u, &e) in &rhs.den {
            *den.entry(u.clone()).or_insert(0) += e;
        }
        LocElem { num: &self.num * &rhs.num, den }.normalized()
    }
}

impl Neg for &LocElem {
    type Output = LocElem;
    fn neg(self) -> LocElem {
        self.scale(&rat(-1))
    }
}

impl Add for LocElem {
    type Output = LocElem;
    fn add(self, rhs: LocElem) -> LocElem {
        &self + &rhs
    }
}

impl Sub for LocElem {
    type Output = LocElem;
    fn sub(self, rhs: LocElem) -> LocElem {
        &self - &rhs
    }
}

impl Mul for LocElem {
    type Output = LocElem;
    fn mul(self, rhs: LocElem) -> LocElem {
        &self * &rhs
    }
}

impl Neg for LocElem {
    type Output = LocElem;
    fn neg(self) -> LocElem {
        -&self
    }
}

impl From<Poly> for LocElem {
    fn from(p: Poly) -> Self {
        LocElem::from_poly(p)
    }
}

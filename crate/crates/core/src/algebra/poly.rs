//! Sparse multivariate polynomials over the rationals in graded reverse
//! lexicographic order.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary precision rational coefficient.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector. Ordered by grevlex: total degree first, then the
/// monomial with the smaller exponent in the last differing variable wins.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, k: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[k] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| {
                for (a, b) in self.0.iter().zip(&other.0).rev() {
                    if a != b {
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables. Zero is the empty term map and no
/// stored coefficient is zero, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        Self::term(Monomial::var(nvars, k, 1), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Single term with coefficient, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest exponent of variable `k` over all terms.
    pub fn max_exp(&self, k: usize) -> u32 {
        self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_arity(&self, other: &Poly) -> Result<(), Error> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::ArityMismatch { left: self.nvars, right: other.nvars })
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, Error> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, Error> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, Error> {
        self.check_arity(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// `self += c * m * other`, the inner step of every reduction.
    pub fn add_scaled(&mut self, c: &Rational, m: &Monomial, other: &Poly) {
        if c.is_zero() {
            return;
        }
        for (mo, co) in &other.terms {
            self.add_term(m.mul(mo), c * co);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> (Poly, Rational) {
        match self.leading_coeff() {
            None => (self.clone(), Rational::one()),
            Some(lc) => {
                let lc = lc.clone();
                (self.scale(&lc.recip()), lc)
            }
        }
    }

    /// Substitutes `x_k = 1`.
    pub fn set_var_one(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[k] = 0;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Homogenizes with respect to variable `k`, which must not occur.
    /// Returns the homogenized polynomial and its degree.
    pub fn homogenize(&self, k: usize) -> (Poly, u32) {
        let d = self.degree().unwrap_or(0);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[k] += d - m.degree();
            out.add_term(Monomial(e), c.clone());
        }
        (out, d)
    }

    /// Pads exponent vectors with zeros up to `nvars` variables.
    pub fn embed(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(nvars, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        Poly { nvars, terms }
    }

    /// Rational substitution-free evaluation helper: maps each term through `f`.
    pub fn map_terms(&self, nvars: usize, mut f: impl FnMut(&Monomial) -> Monomial) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. A single polynomial is its own Gröbner basis, so a zero
    /// remainder is equivalent to divisibility.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lm, lc) = divisor.leading()?;
        if let Some((m, c)) = divisor.as_monomial() {
            if !self.terms.keys().all(|t| m.divides(t)) {
                return None;
            }
            let inv = c.recip();
            return Some(Poly {
                nvars: self.nvars,
                terms: self.terms.iter().map(|(t, v)| (m.quotient_of(t), v * &inv)).collect(),
            });
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let q = lm.quotient_of(m);
            let k = c / lc;
            rem.add_scaled(&-k.clone(), &q, divisor);
            quot.add_term(q, k);
        }
        Some(quot)
    }

    /// Least common denominator of coefficients times the content sign, used
    /// to move to integer rows in elimination.
    pub fn coeff_denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn to_string_with(&self, names: &dyn Fn(usize) -> String) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(alloc::format!("{}", a));
            }
            for (k, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names(k)),
                    _ => factors.push(alloc::format!("{}^{}", names(k), e)),
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&|k| alloc::format!("x{}", k)))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn x(k: usize) -> Poly {
        Poly::var(2, k)
    }

    #[test]
    fn cancellation() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &x(1);
        assert_eq!(&a + &b, x(0).scale(&rat(2)));
    }

    #[test]
    fn zero_absorbs() {
        let p = &(&x(0) * &x(1)) + &Poly::int(2, 3);
        assert!((&p * &Poly::zero(2)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one(2);
        let prod = &(&x(0) + &one) * &(&x(0) - &one);
        let expect = &(&x(0) * &x(0)) - &one;
        assert_eq!(prod, expect);
        assert_eq!(prod.to_string(), "x0^2 - 1");
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let err = Poly::var(2, 0).checked_add(&Poly::var(3, 0)).unwrap_err();
        assert_eq!(err, Error::ArityMismatch { left: 2, right: 3 });
    }

    #[test]
    fn grevlex_order() {
        // x0^2 > x0*x1 > x1^2 > x0 in grevlex with x0 > x1.
        let n = 2;
        let a = Monomial::from_exps(vec![2, 0]);
        let b = Monomial::from_exps(vec![1, 1]);
        let c = Monomial::from_exps(vec![0, 2]);
        let d = Monomial::var(n, 0, 1);
        assert!(a > b && b > c && c > d);
        let m1 = Monomial::from_exps(vec![1, 1, 0]);
        let m2 = Monomial::from_exps(vec![2, 0, 0]);
        let m3 = Monomial::from_exps(vec![1, 0, 1]);
        assert!(m2 > m1 && m1 > m3);
    }

    #[test]
    fn exact_division() {
        let one = Poly::one(2);
        let u = &x(0) + &one;
        let p = &u * &(&x(1) - &x(0));
        assert_eq!(p.div_exact(&u), Some(&x(1) - &x(0)));
        assert_eq!((&p + &one).div_exact(&u), None);
    }
}

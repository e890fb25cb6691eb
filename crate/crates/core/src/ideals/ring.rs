//! Localized coordinate rings of charts and overlaps.
//!
//! Elements are stored homogeneously (degree zero in `x0..xn`) for
//! projective charts. Ideal questions are answered in the dehomogenized
//! polynomial ring extended by one variable `z_k` per designated unit `u_k`
//! together with the relations `1 - z_k * u_k`.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{LocElem, Monomial, Poly, Rational};
use crate::error::Error;

/// A polynomial ring with finitely many inverted polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRing {
    nvars: usize,
    home: Option<usize>,
    units: Vec<Poly>,
    reverse_generators: bool,
}

impl LocalRing {
    /// Ring of a projective chart (or overlap) whose coordinates are
    /// dehomogenized at `home`. `units` are homogeneous; the home
    /// coordinate itself is always invertible.
    pub fn projective(nvars: usize, home: usize, units: impl IntoIterator<Item = Poly>) -> Self {
        let mut r = LocalRing { nvars, home: Some(home), units: Vec::new(), reverse_generators: false };
        for u in units {
            r.add_unit(u);
        }
        r
    }

    /// Ring of an affine chart: polynomials in `nvars` variables with the
    /// given units inverted.
    pub fn affine(nvars: usize, units: impl IntoIterator<Item = Poly>) -> Self {
        let mut r = LocalRing { nvars, home: None, units: Vec::new(), reverse_generators: false };
        for u in units {
            r.add_unit(u);
        }
        r
    }

    /// Reverses generator order in every lift, which changes which
    /// (non-canonical) cofactors come out.
    pub fn with_reversed_generators(mut self, on: bool) -> Self {
        self.reverse_generators = on;
        self
    }

    pub fn reversed_generators(&self) -> bool {
        self.reverse_generators
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn home(&self) -> Option<usize> {
        self.home
    }

    pub fn units(&self) -> &[Poly] {
        &self.units
    }

    /// Designates `u` as a unit. Monomials are split into their variables
    /// and constants are ignored.
    pub fn add_unit(&mut self, u: Poly) {
        assert_eq!(u.nvars(), self.nvars);
        if u.is_zero() || u.is_constant() {
            return;
        }
        if let Some((m, _)) = u.as_monomial() {
            for (k, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    self.push_unit(Poly::var(self.nvars, k));
                }
            }
            return;
        }
        self.push_unit(u.monic().0);
    }

    fn push_unit(&mut self, u: Poly) {
        if Some(&u) == self.home.map(|h| Poly::var(self.nvars, h)).as_ref() {
            return;
        }
        if !self.units.contains(&u) {
            self.units.push(u);
        }
    }

    /// The ring with the units of `other` added.
    pub fn join(&self, other: &LocalRing) -> LocalRing {
        let mut r = self.clone();
        for u in &other.units {
            r.add_unit(u.clone());
        }
        if let Some(h) = other.home {
            r.add_unit(Poly::var(self.nvars, h));
        }
        r
    }

    pub fn ext_nvars(&self) -> usize {
        self.nvars + self.units.len()
    }

    fn dehom(&self, p: &Poly) -> Poly {
        match self.home {
            Some(h) => p.set_var_one(h),
            None => p.clone(),
        }
    }

    fn z(&self, k: usize) -> Monomial {
        Monomial::var(self.ext_nvars(), self.nvars + k, 1)
    }

    /// `1 - z_k * u_k` for every unit.
    pub fn relations(&self) -> Vec<Poly> {
        let n = self.ext_nvars();
        self.units
            .iter()
            .enumerate()
            .map(|(k, u)| {
                let zu = self.dehom(u).embed(n).mul_monomial(&self.z(k));
                &Poly::one(n) - &zu
            })
            .collect()
    }

    /// Writes a denominator polynomial as constant times a product of
    /// designated units, returned as exponents of the `z` variables.
    fn factor_denominator(&self, d: &Poly) -> Result<(Rational, Vec<u32>), Error> {
        let mut rest = self.dehom(d);
        let mut exps = vec![0u32; self.units.len()];
        for (k, u) in self.units.iter().enumerate() {
            let du = self.dehom(u);
            if du.is_constant() {
                continue;
            }
            while let Some(q) = rest.div_exact(&du) {
                rest = q;
                exps[k] += 1;
            }
        }
        match rest.as_constant() {
            Some(c) if !c.is_zero() => Ok((c, exps)),
            _ => Err(Error::UnitNotDesignated(d.to_string())),
        }
    }

    /// Image in the extended polynomial ring.
    pub fn to_ext(&self, e: &LocElem) -> Result<Poly, Error> {
        assert_eq!(e.nvars(), self.nvars);
        let n = self.ext_nvars();
        let mut out = self.dehom(e.num()).embed(n);
        for (u, &k) in e.den() {
            let (c, exps) = self.factor_denominator(u)?;
            let mut exps_n = vec![0u32; n];
            for (j, &a) in exps.iter().enumerate() {
                exps_n[self.nvars + j] = a * k;
            }
            out = out.mul_monomial(&Monomial::from_exps(exps_n)).scale(&c.recip().pow(k as i32));
        }
        Ok(out)
    }

    /// Element of the localized ring represented by an extended polynomial.
    pub fn from_ext(&self, p: &Poly) -> LocElem {
        assert_eq!(p.nvars(), self.ext_nvars());
        let nv = self.nvars;
        if p.is_zero() {
            return LocElem::zero(nv);
        }
        let nu = self.units.len();
        let mut zmax = vec![0u32; nu];
        for (m, _) in p.terms() {
            for k in 0..nu {
                zmax[k] = zmax[k].max(m.exps()[nv + k]);
            }
        }
        let unit_deg: Vec<i64> = self.units.iter().map(|u| u.degree().unwrap_or(0) as i64).collect();
        // per-term power of the home coordinate needed for degree zero
        let home_exp = |m: &Monomial| -> i64 {
            let xdeg: i64 = m.exps()[..nv].iter().map(|&e| e as i64).sum();
            let zdeg: i64 = (0..nu).map(|k| m.exps()[nv + k] as i64 * unit_deg[k]).sum();
            zdeg - xdeg
        };
        let base = match self.home {
            Some(_) => p.terms().map(|(m, _)| home_exp(m)).min().unwrap(),
            None => 0,
        };
        let mut powers: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut num = Poly::zero(nv);
        for (m, c) in p.terms() {
            let mut exps: Vec<u32> = m.exps()[..nv].to_vec();
            if let Some(h) = self.home {
                exps[h] += (home_exp(m) - base) as u32;
            }
            let mut t = Poly::term(Monomial::from_exps(exps), c.clone());
            for k in 0..nu {
                let e = zmax[k] - m.exps()[nv + k];
                if e > 0 {
                    let up = powers.entry((k, e)).or_insert_with(|| self.units[k].pow(e)).clone();
                    t = &t * &up;
                }
            }
            num = &num + &t;
        }
        let mut out = LocElem::new(num, self.units.iter().cloned().zip(zmax.iter().copied()));
        if let Some(h) = self.home {
            let x = Poly::var(nv, h);
            if base < 0 {
                out = out.div_unit(&x, (-base) as u32);
            } else if base > 0 {
                out = out.mul_poly(&x.pow(base as u32));
            }
        }
        out
    }

    pub fn one(&self) -> LocElem {
        LocElem::one(self.nvars)
    }

    pub fn zero(&self) -> LocElem {
        LocElem::zero(self.nvars)
    }

    /// Whether `e` is a unit of this ring: its numerator factors into
    /// designated units up to a constant.
    pub fn is_unit(&self, e: &LocElem) -> bool {
        !e.is_zero() && self.factor_denominator(e.num()).is_ok()
    }

    /// Inverse of a unit of this ring.
    pub fn inverse(&self, e: &LocElem) -> Option<LocElem> {
        if !self.is_unit(e) {
            return None;
        }
        let mut units: Vec<Poly> = self.units.clone();
        if let Some(h) = self.home {
            units.push(Poly::var(self.nvars, h));
        }
        e.inverse_via_units(&units)
    }
}

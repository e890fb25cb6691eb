//! Čech cochains of `(r-1)` copies of `L*` over the standard cover.
//!
//! A value on the overlap `(i_0, ..., i_p)` is a tuple of functions in the
//! trivialization of the last index. The differential is
//!
//! ```text
//! (δc)_{i_0..i_{p+1}} = sum_{m<=p} (-1)^m c_{..î_m..}
//!                       + (-1)^{p+1} h_{i_p i_{p+1}} c_{i_0..i_p}
//! ```
//!
//! Multiplying a value by `x_last^{-d}` turns it into a Laurent section of
//! `O(-d)`, and the twisted differential into the plain alternating one.
//! The solver works in that picture.

mod cohomology;
mod linalg;

pub use cohomology::cohomology_dim;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{LocElem, Monomial, Poly, Rational};
use crate::cover::{tuples, Atlas, LineBundle};
use crate::error::{ClassComponent, Error};

#[derive(Clone, Debug)]
pub struct CechCochain {
    degree: usize,
    mult: usize,
    nvars: usize,
    values: BTreeMap<Vec<usize>, Vec<LocElem>>,
}

impl CechCochain {
    pub fn zero(degree: usize, mult: usize, nvars: usize) -> Self {
        CechCochain { degree, mult, nvars, values: BTreeMap::new() }
    }

    /// Builds a cochain from `(tuple, values)` pairs. Tuples must be strictly
    /// increasing with `degree + 1` entries.
    pub fn from_values(
        degree: usize,
        mult: usize,
        nvars: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Vec<LocElem>)>,
    ) -> Result<Self, Error> {
        let mut c = CechCochain::zero(degree, mult, nvars);
        for (tuple, vals) in entries {
            if tuple.len() != degree + 1 || tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::DimensionMismatch(format!("tuple {:?} for a degree {} cochain", tuple, degree)));
            }
            if vals.len() != mult || vals.iter().any(|v| v.nvars() != nvars) {
                return Err(Error::DimensionMismatch(format!("value on {:?} has the wrong shape", tuple)));
            }
            c.set(tuple, vals);
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mult(&self) -> usize {
        self.mult
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Value on a sorted tuple; zero where nothing is stored.
    pub fn get(&self, tuple: &[usize]) -> Vec<LocElem> {
        match self.values.get(tuple) {
            Some(v) => v.clone(),
            None => vec![LocElem::zero(self.nvars); self.mult],
        }
    }

    pub fn set(&mut self, tuple: Vec<usize>, vals: Vec<LocElem>) {
        assert_eq!(tuple.len(), self.degree + 1);
        assert_eq!(vals.len(), self.mult);
        if vals.iter().all(LocElem::is_zero) {
            self.values.remove(&tuple);
        } else {
            self.values.insert(tuple, vals);
        }
    }

    /// Nonzero values in tuple order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<LocElem>)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.iter().all(LocElem::is_zero))
    }

    /// True when every denominator is a monomial in the coordinates.
    pub fn has_monomial_denominators(&self) -> bool {
        self.values.values().flatten().all(LocElem::has_monomial_denominator)
    }

    pub fn sub(&self, other: &CechCochain) -> CechCochain {
        assert_eq!((self.degree, self.mult), (other.degree, other.mult));
        let mut out = self.clone();
        for (t, v) in &other.values {
            let mine = out.get(t);
            out.set(t.clone(), mine.iter().zip(v).map(|(a, b)| a - b).collect());
        }
        out
    }
}

impl PartialEq for CechCochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.mult == other.mult && self.sub(other).is_zero()
    }
}

/// Knobs of the bounded search used outside the monomial regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest numerator degree in the ansatz.
    pub max_degree: u32,
    /// Largest exponent of any unit in an ansatz denominator.
    pub max_den_exp: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_degree: 8, max_den_exp: 4 }
    }
}

/// The Čech complex of `L*` on an atlas.
#[derive(Clone, Copy, Debug)]
pub struct CechComplex<'a> {
    atlas: &'a Atlas,
    line: &'a LineBundle,
}

type Laurent = BTreeMap<Vec<i64>, Rational>;

impl<'a> CechComplex<'a> {
    pub fn new(atlas: &'a Atlas, line: &'a LineBundle) -> Self {
        CechComplex { atlas, line }
    }

    fn nvars(&self) -> usize {
        self.atlas.nvars()
    }

    fn last_power(&self, tuple: &[usize], sign: i64) -> LocElem {
        let nv = self.nvars();
        let d = self.line.twist() * sign;
        if d == 0 || self.atlas.num_charts() == 1 {
            return LocElem::one(nv);
        }
        let mut e = vec![0i64; nv];
        e[*tuple.last().unwrap()] = d;
        LocElem::laurent_monomial(&e, Rational::from_integer(1.into()))
    }

    /// Function value on `tuple` of a Laurent section of `O(-d)`.
    pub fn from_twisted(&self, tuple: &[usize], section: &LocElem) -> LocElem {
        section * &self.last_power(tuple, 1)
    }

    /// Laurent section of `O(-d)` of a function value on `tuple`.
    pub fn twisted(&self, tuple: &[usize], value: &LocElem) -> LocElem {
        value * &self.last_power(tuple, -1)
    }

    pub fn differential(&self, c: &CechCochain) -> CechCochain {
        let p = c.degree;
        let nv = c.nvars;
        let mut out = CechCochain::zero(p + 1, c.mult, nv);
        for k in tuples(self.atlas.num_charts(), p + 2) {
            let mut acc = vec![LocElem::zero(nv); c.mult];
            for m in 0..=p + 1 {
                let mut face = k.clone();
                face.remove(m);
                let Some(vals) = c.values.get(&face) else { continue };
                let sign = LocElem::sign(nv, m);
                let factor = if m == p + 1 { &sign * &self.line.h(k[p], k[p + 1]) } else { sign };
                for (a, v) in acc.iter_mut().zip(vals) {
                    *a = &*a + &(&factor * v);
                }
            }
            out.set(k, acc);
        }
        out
    }

    pub fn is_cocycle(&self, c: &CechCochain) -> bool {
        self.differential(c).is_zero()
    }

    /// A cochain `x` with `δx = c`.
    ///
    /// With monomial denominators the problem splits by Laurent exponent and
    /// is solved completely; unsolvable exponents are reported as
    /// [`Error::Obstructed`]. Otherwise a bounded ansatz is tried and
    /// failure is [`Error::Inconclusive`].
    pub fn coboundary_solve(&self, c: &CechCochain, opts: &SolveOptions) -> Result<CechCochain, Error> {
        if c.degree == 0 {
            return Err(Error::PreconditionViolated("coboundary_solve needs degree >= 1".into()));
        }
        if !self.is_cocycle(c) {
            return Err(Error::NotACocycle);
        }
        if c.is_zero() {
            return Ok(CechCochain::zero(c.degree - 1, c.mult, c.nvars));
        }
        let x = if c.has_monomial_denominators() { self.solve_monomial(c)? } else { self.solve_bounded(c, opts)? };
        debug_assert!(self.differential(&x) == *c);
        Ok(x)
    }

    fn to_laurent(&self, tuple: &[usize], v: &LocElem) -> Result<Laurent, Error> {
        let s = self.twisted(tuple, v);
        let nv = self.nvars();
        let mut shift = vec![0i64; nv];
        for (u, &e) in s.den() {
            let (m, _) = u.as_monomial().expect("monomial denominator");
            let k = m.exps().iter().position(|&a| a > 0).unwrap();
            if !tuple.contains(&k) {
                return Err(Error::UnitNotDesignated(format!("x{} on {:?}", k, tuple)));
            }
            shift[k] += e as i64;
        }
        Ok(s
            .num()
            .terms()
            .map(|(m, coef)| (m.exps().iter().zip(&shift).map(|(&a, &b)| a as i64 - b).collect(), coef.clone()))
            .collect())
    }

    fn solve_monomial(&self, c: &CechCochain) -> Result<CechCochain, Error> {
        let p = c.degree;
        let n = self.atlas.num_charts();
        let nv = self.nvars();
        // (slot, exponent) -> rhs per target tuple
        let mut parts: BTreeMap<(usize, Vec<i64>), BTreeMap<Vec<usize>, Rational>> = BTreeMap::new();
        for (k, vals) in &c.values {
            for (slot, v) in vals.iter().enumerate() {
                for (a, coef) in self.to_laurent(k, v)? {
                    parts.entry((slot, a)).or_default().insert(k.clone(), coef);
                }
            }
        }
        let mut systems: BTreeMap<u64, SubsetComplex> = BTreeMap::new();
        let mut sol: BTreeMap<(Vec<usize>, usize), Laurent> = BTreeMap::new();
        let mut obstructed = Vec::new();
        for ((slot, a), rhs) in parts {
            let neg = negative_support(&a);
            let sys = systems.entry(neg).or_insert_with(|| SubsetComplex::new(n, neg, p - 1));
            let b: Vec<Rational> = sys.rows.iter().map(|k| rhs.get(k).cloned().unwrap_or_else(Rational::zero)).collect();
            match linalg::solve(&sys.matrix, &b, sys.cols.len()) {
                Some(x) => {
                    for (j, coef) in sys.cols.iter().zip(x) {
                        if !coef.is_zero() {
                            sol.entry((j.clone(), slot)).or_default().insert(a.clone(), coef);
                        }
                    }
                }
                None => obstructed.push(ClassComponent { slot, exponents: a }),
            }
        }
        if !obstructed.is_empty() {
            return Err(Error::Obstructed(obstructed));
        }
        let mut out = CechCochain::zero(p - 1, c.mult, nv);
        let mut acc: BTreeMap<Vec<usize>, Vec<LocElem>> = BTreeMap::new();
        for ((j, slot), terms) in sol {
            let mut e = LocElem::zero(nv);
            for (a, coef) in terms {
                e = &e + &LocElem::laurent_monomial(&a, coef);
            }
            let vals = acc.entry(j.clone()).or_insert_with(|| vec![LocElem::zero(nv); c.mult]);
            vals[slot] = self.from_twisted(&j, &e);
        }
        for (j, vals) in acc {
            out.set(j, vals);
        }
        Ok(out)
    }

    /// Ansatz `x_J = N_J / D_J` with `D_J` a product of the units of the
    /// overlap `J`, raised to the largest exponents seen in `c` (capped),
    /// and `N_J` homogeneous of degree `deg D_J`.
    fn solve_bounded(&self, c: &CechCochain, opts: &SolveOptions) -> Result<CechCochain, Error> {
        let p = c.degree;
        let nv = self.nvars();
        let n = self.atlas.num_charts();
        let mut seen: BTreeMap<Poly, u32> = BTreeMap::new();
        for v in c.values.values().flatten() {
            for (u, &e) in v.den() {
                let slot = seen.entry(u.clone()).or_insert(0);
                *slot = (*slot).max(e).min(opts.max_den_exp);
            }
        }
        let sources = tuples(n, p);
        let mut dens: Vec<(Poly, u32)> = Vec::with_capacity(sources.len());
        for j in &sources {
            let ring = self.atlas.ring(j);
            let mut units: Vec<Poly> = ring.units().to_vec();
            if let Some(h) = ring.home() {
                units.push(Poly::var(nv, h));
            }
            let mut d = Poly::one(nv);
            for u in units {
                if let Some(&e) = seen.get(&u) {
                    d = &d * &u.pow(e);
                }
            }
            let deg = d.degree().unwrap_or(0);
            if deg > opts.max_degree {
                return Err(Error::Inconclusive);
            }
            dens.push((d, deg));
        }
        let index: BTreeMap<&Vec<usize>, usize> = sources.iter().enumerate().map(|(i, j)| (j, i)).collect();
        let monos: Vec<Vec<Monomial>> = dens.iter().map(|(_, deg)| monomials_of_degree(nv, *deg)).collect();
        let mut offset = Vec::with_capacity(sources.len());
        let mut total = 0;
        for m in &monos {
            offset.push(total);
            total += m.len();
        }
        let mut out = CechCochain::zero(p - 1, c.mult, nv);
        let mut solved: Vec<Vec<LocElem>> = vec![vec![LocElem::zero(nv); c.mult]; sources.len()];
        for slot in 0..c.mult {
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            let mut rhs: Vec<Rational> = Vec::new();
            for k in tuples(n, p + 1) {
                let mut terms: Vec<(usize, LocElem)> = Vec::new();
                for m in 0..=p {
                    let mut face = k.clone();
                    face.remove(m);
                    let sign = LocElem::sign(nv, m);
                    let factor = if m == p { &sign * &self.line.h(k[p - 1], k[p]) } else { sign };
                    let src = index[&face];
                    terms.push((src, factor.div_unit(&dens[src].0, 1)));
                }
                let target = c.get(&k).swap_remove(slot);
                let mut common: BTreeMap<Poly, u32> = BTreeMap::new();
                for e in terms.iter().map(|(_, e)| e).chain(core::iter::once(&target)) {
                    for (u, &x) in e.den() {
                        let s = common.entry(u.clone()).or_insert(0);
                        *s = (*s).max(x);
                    }
                }
                let l = common.iter().fold(Poly::one(nv), |acc, (u, &x)| &acc * &u.pow(x));
                let mut eqs: BTreeMap<Monomial, (BTreeMap<usize, Rational>, Rational)> = BTreeMap::new();
                for (src, e) in &terms {
                    let mult = e.mul_poly(&l);
                    debug_assert!(mult.is_polynomial());
                    for (col, mono) in monos[*src].iter().enumerate() {
                        for (m, coef) in mult.num().mul_monomial(mono).terms() {
                            let entry = eqs.entry(m.clone()).or_insert_with(|| (BTreeMap::new(), Rational::zero()));
                            *entry.0.entry(offset[*src] + col).or_insert_with(Rational::zero) += coef;
                        }
                    }
                }
                let t = target.mul_poly(&l);
                debug_assert!(t.is_polynomial());
                for (m, coef) in t.num().terms() {
                    eqs.entry(m.clone()).or_insert_with(|| (BTreeMap::new(), Rational::zero())).1 += coef;
                }
                for (_, (lhs, b)) in eqs {
                    let mut row = vec![Rational::zero(); total];
                    for (col, v) in lhs {
                        row[col] = v;
                    }
                    rows.push(row);
                    rhs.push(b);
                }
            }
            let x = linalg::solve(&rows, &rhs, total).ok_or(Error::Inconclusive)?;
            for (src, (d, _)) in dens.iter().enumerate() {
                let num = Poly::from_terms(
                    nv,
                    monos[src].iter().enumerate().map(|(col, m)| (m.clone(), x[offset[src] + col].clone())),
                );
                solved[src][slot] = LocElem::from_poly(num).div_unit(d, 1);
            }
        }
        for (j, vals) in sources.into_iter().zip(solved) {
            out.set(j, vals);
        }
        if self.differential(&out) != *c {
            return Err(Error::Inconclusive);
        }
        Ok(out)
    }
}

fn negative_support(a: &[i64]) -> u64 {
    a.iter().enumerate().filter(|(_, &e)| e < 0).fold(0, |acc, (k, _)| acc | (1 << k))
}

fn contains_mask(tuple: &[usize], mask: u64) -> bool {
    let t = tuple.iter().fold(0u64, |acc, &k| acc | (1 << k));
    t & mask == mask
}

/// The plain alternating differential from degree `p` to `p + 1`,
/// restricted to tuples containing a fixed index set.
pub(crate) struct SubsetComplex {
    pub rows: Vec<Vec<usize>>,
    pub cols: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<Rational>>,
}

impl SubsetComplex {
    pub fn new(n: usize, mask: u64, p: usize) -> Self {
        let rows: Vec<Vec<usize>> = tuples(n, p + 2).into_iter().filter(|k| contains_mask(k, mask)).collect();
        let cols: Vec<Vec<usize>> = tuples(n, p + 1).into_iter().filter(|j| contains_mask(j, mask)).collect();
        let pos: BTreeMap<&Vec<usize>, usize> = cols.iter().enumerate().map(|(i, j)| (j, i)).collect();
        let matrix = rows
            .iter()
            .map(|k| {
                let mut row = vec![Rational::zero(); cols.len()];
                for m in 0..k.len() {
                    let mut face = k.clone();
                    face.remove(m);
                    if let Some(&c) = pos.get(&face) {
                        row[c] = if m % 2 == 0 { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
                    }
                }
                row
            })
            .collect();
        SubsetComplex { rows, cols, matrix }
    }
}

fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if k + 1 == cur.len() {
            cur[k] = left;
            out.push(Monomial::from_exps(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[k] = e;
            rec(k + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}

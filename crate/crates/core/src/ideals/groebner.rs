//! Buchberger's algorithm over Q with cofactor tracking.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::{Monomial, Poly, Rational};

/// A reduced Gröbner basis together with, for every basis element, its
/// expression in terms of the original generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    generators: Vec<Poly>,
    basis: Vec<Poly>,
    cofactors: Vec<Vec<Poly>>,
}

/// Polynomial with its cofactor row over the generators.
#[derive(Clone, Debug)]
struct Tracked {
    poly: Poly,
    cof: Vec<Poly>,
}

impl Tracked {
    fn lm(&self) -> &Monomial {
        self.poly.leading_monomial().expect("tracked polynomials are nonzero")
    }

    fn make_monic(&mut self) {
        let lc = self.poly.leading_coeff().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            self.poly = self.poly.scale(&inv);
            for c in &mut self.cof {
                *c = c.scale(&inv);
            }
        }
    }
}

fn add_scaled_row(row: &mut [Poly], c: &Rational, m: &Monomial, other: &[Poly]) {
    for (a, b) in row.iter_mut().zip(other) {
        a.add_scaled(c, m, b);
    }
}

/// Full reduction of `p` by `basis`; returns the remainder and, per basis
/// element, the quotient.
fn divide(p: &Poly, basis: &[Tracked]) -> (Poly, Vec<Poly>) {
    let nv = p.nvars();
    let mut rem = Poly::zero(nv);
    let mut work = p.clone();
    let mut quot = vec![Poly::zero(nv); basis.len()];
    while let Some((m, c)) = work.leading() {
        let (m, c) = (m.clone(), c.clone());
        match basis.iter().position(|b| b.lm().divides(&m)) {
            Some(k) => {
                let b = &basis[k];
                let q = b.lm().quotient_of(&m);
                let k_c = &c / b.poly.leading_coeff().unwrap();
                work.add_scaled(&-k_c.clone(), &q, &b.poly);
                quot[k].add_term(q, k_c);
            }
            None => {
                work.add_term(m.clone(), -c.clone());
                rem.add_term(m, c);
            }
        }
    }
    (rem, quot)
}

/// Reduces `p` by `basis`, folding the quotients into a cofactor row.
fn reduce_tracked(p: Tracked, basis: &[Tracked]) -> Tracked {
    let (rem, quot) = divide(&p.poly, basis);
    let mut cof = p.cof;
    for (q, b) in quot.iter().zip(basis) {
        if q.is_zero() {
            continue;
        }
        for (c, bc) in cof.iter_mut().zip(&b.cof) {
            *c = &*c - &(q * bc);
        }
    }
    Tracked { poly: rem, cof }
}

fn s_poly(a: &Tracked, b: &Tracked) -> Tracked {
    let l = a.lm().lcm(b.lm());
    let ma = a.lm().quotient_of(&l);
    let mb = b.lm().quotient_of(&l);
    let ca = a.poly.leading_coeff().unwrap().recip();
    let cb = -b.poly.leading_coeff().unwrap().recip();
    let nv = a.poly.nvars();
    let mut poly = Poly::zero(nv);
    poly.add_scaled(&ca, &ma, &a.poly);
    poly.add_scaled(&cb, &mb, &b.poly);
    let mut cof = vec![Poly::zero(nv); a.cof.len()];
    add_scaled_row(&mut cof, &ca, &ma, &a.cof);
    add_scaled_row(&mut cof, &cb, &mb, &b.cof);
    Tracked { poly, cof }
}

impl GroebnerBasis {
    /// Computes the reduced Gröbner basis of `gens` (grevlex), using the
    /// normal selection strategy and the coprime leading-term criterion.
    pub fn new(gens: &[Poly]) -> Self {
        assert!(!gens.is_empty(), "groebner basis of an empty generator list");
        let nv = gens[0].nvars();
        let m = gens.len();
        let mut basis: Vec<Tracked> = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            assert_eq!(g.nvars(), nv, "generators must share their arity");
            let mut cof = vec![Poly::zero(nv); m];
            cof[k] = Poly::one(nv);
            let t = reduce_tracked(Tracked { poly: g.clone(), cof }, &basis);
            if !t.poly.is_zero() {
                let mut t = t;
                t.make_monic();
                basis.push(t);
            }
        }
        // pairs keyed by (lcm, i, j) so the smallest lcm is processed first
        let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
        for j in 0..basis.len() {
            for i in 0..j {
                pairs.insert((basis[i].lm().lcm(basis[j].lm()), i, j));
            }
        }
        while let Some(key) = pairs.iter().next().cloned() {
            pairs.remove(&key);
            let (_, i, j) = key;
            if basis[i].lm().coprime(basis[j].lm()) {
                continue;
            }
            let s = reduce_tracked(s_poly(&basis[i], &basis[j]), &basis);
            if s.poly.is_zero() {
                continue;
            }
            let mut s = s;
            s.make_monic();
            let k = basis.len();
            for i in 0..k {
                pairs.insert((basis[i].lm().lcm(s.lm()), i, k));
            }
            basis.push(s);
        }
        let basis = interreduce(basis);
        let (basis, cofactors) = basis.into_iter().map(|t| (t.poly, t.cof)).unzip();
        GroebnerBasis { generators: gens.to_vec(), basis, cofactors }
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    /// `cofactors()[k][m]` is the coefficient of generator `m` in basis element `k`.
    pub fn cofactors(&self) -> &[Vec<Poly>] {
        &self.cofactors
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    fn tracked(&self) -> Vec<Tracked> {
        self.basis
            .iter()
            .zip(&self.cofactors)
            .map(|(p, c)| Tracked { poly: p.clone(), cof: c.clone() })
            .collect()
    }

    /// Returns `(remainder, cofactors)` with
    /// `p = sum(cofactors[m] * generators[m]) + remainder`.
    pub fn reduce_with_cofactors(&self, p: &Poly) -> (Poly, Vec<Poly>) {
        let basis = self.tracked();
        let (rem, quot) = divide(p, &basis);
        let nv = p.nvars();
        let mut cof = vec![Poly::zero(nv); self.generators.len()];
        for (q, b) in quot.iter().zip(&basis) {
            if q.is_zero() {
                continue;
            }
            for (c, bc) in cof.iter_mut().zip(&b.cof) {
                *c = &*c + &(q * bc);
            }
        }
        (rem, cof)
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        divide(p, &self.tracked()).0
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Generators of the syzygy module of the original generators: the
    /// Schreyer syzygies of every basis pair pulled back through the
    /// cofactor matrix, plus `e_m - D_m * C` for each generator.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        let nv = self.generators[0].nvars();
        let basis = self.tracked();
        let mut out: Vec<Vec<Poly>> = Vec::new();
        let mut push = |row: Vec<Poly>| {
            if row.iter().any(|p| !p.is_zero()) {
                out.push(row);
            }
        };
        for j in 0..basis.len() {
            for i in 0..j {
                let s = s_poly(&basis[i], &basis[j]);
                let r = reduce_tracked(s, &basis);
                debug_assert!(r.poly.is_zero());
                push(r.cof);
            }
        }
        for (k, g) in self.generators.iter().enumerate() {
            let (rem, cof) = self.reduce_with_cofactors(g);
            debug_assert!(rem.is_zero());
            let mut row: Vec<Poly> = cof.into_iter().map(|c| -c).collect();
            row[k] = &row[k] + &Poly::one(nv);
            push(row);
        }
        out
    }
}

/// Drops redundant elements, fully reduces the rest and sorts by leading
/// monomial, largest first.
fn interreduce(mut basis: Vec<Tracked>) -> Vec<Tracked> {
    let mut keep: Vec<Tracked> = Vec::new();
    basis.sort_by(|a, b| a.lm().cmp(b.lm()));
    for t in basis {
        if keep.iter().any(|k| k.lm().divides(t.lm())) {
            continue;
        }
        keep.retain(|k| !t.lm().divides(k.lm()));
        keep.push(t);
    }
    let n = keep.len();
    for k in 0..n {
        let others: Vec<Tracked> =
            keep.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, t)| t.clone()).collect();
        let t = keep[k].clone();
        let lm = t.lm().clone();
        let lc = t.poly.leading_coeff().unwrap().clone();
        let mut tail = t.clone();
        tail.poly.add_term(lm.clone(), -lc.clone());
        let mut reduced = reduce_tracked(tail, &others);
        reduced.poly.add_term(lm, lc);
        reduced.make_monic();
        keep[k] = reduced;
    }
    keep.sort_by(|a, b| b.lm().cmp(a.lm()));
    keep
}

/// Convenience wrapper for [`GroebnerBasis::new`].
pub fn groebner(gens: &[Poly]) -> GroebnerBasis {
    GroebnerBasis::new(gens)
}

//! Isomorphisms between two bundles built on the same data.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::frames::{sign, tprime_apply, tprime_apply_inverse};
use super::transitions::{annihilator, TransitionSet};
use super::Construction;
use crate::algebra::{LocElem, MatrixL};
use crate::cech::{CechCochain, SolveOptions};
use crate::error::Error;
use crate::ideals::koszul_divide;

/// `N_i` with `Z_ij N_j = N_i Z'_ij` on every overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismData {
    /// `x_ij` with `Z' = Z + x`-correction.
    pub x: BTreeMap<(usize, usize), Vec<LocElem>>,
    /// `y_i1..y_i,r-1`.
    pub y: Vec<Vec<LocElem>>,
    pub n: Vec<MatrixL>,
}

/// `x_ij` with `Z'_ij = Z_ij` corrected by `x_ij`, or `FormMismatch` when
/// the difference does not have that shape.
fn difference(cx: &Construction, a: &MatrixL, b: &MatrixL, i: usize, j: usize) -> Result<Vec<LocElem>, Error> {
    let r = cx.sec.rank;
    let ring = cx.atlas.ring(&[i, j]);
    let d = b.sub(a)?;
    if !d.submatrix(0..r, 0..r - 2).is_zero() {
        return Err(Error::FormMismatch);
    }
    let (f_j, g_j) = cx.sub.pair(j);
    let (f_i, g_i) = cx.sub.pair(i);
    let mut gamma = Vec::with_capacity(r);
    for row in 0..r {
        let w = koszul_divide(&ring, d.get(row, r - 2), &-d.get(row, r - 1), f_j, g_j).map_err(|_| Error::FormMismatch)?;
        gamma.push(w);
    }
    let last = koszul_divide(&ring, &gamma[r - 1], &gamma[r - 2], f_i, g_i).map_err(|_| Error::FormMismatch)?;
    let ti = cx.sec.t[i] - 1;
    let mut it = gamma.into_iter().take(r - 2);
    Ok((0..r - 1).map(|t| if t == ti { last.clone() } else { it.next().unwrap() }).collect())
}

/// `[[I, y_hat (g_i, -f_i)], [0, I + y_{t_i} (f_i; g_i)(g_i, -f_i)]]`.
pub fn automorphism(cx: &Construction, i: usize, y: &[LocElem]) -> Result<MatrixL, Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    let ti = cx.sec.t[i] - 1;
    let (f, g) = cx.sub.pair(i);
    let mut v: Vec<LocElem> = y.iter().enumerate().filter(|(t, _)| *t != ti).map(|(_, e)| e.clone()).collect();
    v.push(&y[ti] * f);
    v.push(&y[ti] * g);
    MatrixL::identity(r, nv).add(&MatrixL::column(v, nv).mul(&annihilator(cx, i))?)
}

/// Finds `N_i` relating `a` (as `Z`) to `b` (as `Z'`).
pub fn compare_bundles(
    cx: &Construction,
    a: &TransitionSet,
    b: &TransitionSet,
    opts: &SolveOptions,
) -> Result<IsomorphismData, Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    if a.rank != b.rank || a.rank != r || a.z.keys().ne(b.z.keys()) {
        return Err(Error::FormMismatch);
    }
    let mut x = BTreeMap::new();
    let mut entries = Vec::new();
    for (&(i, j), za) in &a.z {
        let zb = &b.z[&(i, j)];
        if a.p(i, j) != b.p(i, j) || a.r_block(i, j) != b.r_block(i, j) {
            return Err(Error::FormMismatch);
        }
        let xij = difference(cx, za, zb, i, j)?;
        let e = sign(nv, cx.sec.t[j]);
        let zeta: Vec<LocElem> = tprime_apply_inverse(&cx.sec, i, &xij).iter().map(|v| &e * v).collect();
        entries.push((vec![i, j], zeta));
        x.insert((i, j), xij);
    }
    let zeta = CechCochain::from_values(1, r - 1, nv, entries)?;
    let cx_complex = cx.complex();
    if !cx_complex.is_cocycle(&zeta) {
        return Err(Error::NotACocycle);
    }
    let eta = if zeta.is_zero() {
        CechCochain::zero(0, r - 1, nv)
    } else {
        match cx_complex.coboundary_solve(&zeta, opts) {
            Err(Error::Obstructed(_)) => return Err(Error::H1Obstruction),
            other => other?,
        }
    };
    let mut y = Vec::with_capacity(cx.atlas.num_charts());
    let mut n = Vec::with_capacity(cx.atlas.num_charts());
    for i in 0..cx.atlas.num_charts() {
        let e = sign(nv, cx.sec.t[i]);
        let yi: Vec<LocElem> = tprime_apply(&cx.sec, i, &eta.get(&[i])).iter().map(|v| &e * v).collect();
        let ni = automorphism(cx, i, &yi)?;
        if ni.det()? != LocElem::one(nv) {
            return Err(Error::VerificationFailed(alloc::format!("det N_{} = 1", i)));
        }
        if ni.mul(&cx.frames.m[i])? != cx.frames.m[i] {
            return Err(Error::VerificationFailed(alloc::format!("N_{} M = M", i)));
        }
        y.push(yi);
        n.push(ni);
    }
    for (&(i, j), za) in &a.z {
        if za.mul(&n[j])? != n[i].mul(&b.z[&(i, j)])? {
            return Err(Error::VerificationFailed(alloc::format!("Z N_j = N_i Z' on ({},{})", i, j)));
        }
    }
    Ok(IsomorphismData { x, y, n })
}

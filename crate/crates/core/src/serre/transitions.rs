//! Transition matrices `Z_ij` with `M_i = Z_ij M_j` and `det Z_ij = h_ij`,
//! the defect of the cocycle condition, and its correction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::frames::{sign, tprime_apply, tprime_apply_inverse, FrameData};
use super::Construction;
use crate::algebra::{LocElem, MatrixL};
use crate::cech::{CechCochain, CechComplex, SolveOptions};
use crate::error::Error;
use crate::ideals::{koszul_divide, lift, lift_pair};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionStatus {
    Raw,
    Corrected,
}

impl TransitionStatus {
    pub fn name(self) -> &'static str {
        match self {
            TransitionStatus::Raw => "raw",
            TransitionStatus::Corrected => "corrected",
        }
    }
}

/// `Z_ij` for sorted `i < j`; the other orders are derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSet {
    pub rank: usize,
    pub nvars: usize,
    pub z: BTreeMap<(usize, usize), MatrixL>,
    /// `x_ij1..x_ij,r-1` applied by the correction.
    pub corrections: BTreeMap<(usize, usize), Vec<LocElem>>,
    pub status: TransitionStatus,
}

impl TransitionSet {
    pub fn new(rank: usize, nvars: usize, z: BTreeMap<(usize, usize), MatrixL>, status: TransitionStatus) -> Self {
        TransitionSet { rank, nvars, z, corrections: BTreeMap::new(), status }
    }

    /// `Z_ij` in any order: the identity for `i = j`, `adj(Z_ji) / h_ji`
    /// for `i > j`.
    pub fn get(&self, cx: &Construction, i: usize, j: usize) -> Result<MatrixL, Error> {
        if i == j {
            return Ok(MatrixL::identity(self.rank, self.nvars));
        }
        if i < j {
            return Ok(self.z[&(i, j)].clone());
        }
        Ok(self.z[&(j, i)].adjugate()?.scale(&cx.line.h(i, j)))
    }

    pub fn p(&self, i: usize, j: usize) -> MatrixL {
        let r = self.rank;
        self.z[&(i, j)].submatrix(0..r - 2, 0..r - 2)
    }

    pub fn q(&self, i: usize, j: usize) -> MatrixL {
        let r = self.rank;
        self.z[&(i, j)].submatrix(0..r - 2, r - 2..r)
    }

    pub fn r_block(&self, i: usize, j: usize) -> MatrixL {
        let r = self.rank;
        self.z[&(i, j)].submatrix(r - 2..r, 0..r - 2)
    }

    pub fn s(&self, i: usize, j: usize) -> MatrixL {
        let r = self.rank;
        self.z[&(i, j)].submatrix(r - 2..r, r - 2..r)
    }
}

/// `(0, ..., 0, g_i, -f_i)` of length `r`.
pub fn annihilator(cx: &Construction, i: usize) -> MatrixL {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    let (f, g) = cx.sub.pair(i);
    let mut v = vec![LocElem::zero(nv); r];
    v[r - 2] = g.clone();
    v[r - 1] = -f;
    MatrixL::row_vector(v, nv)
}

fn transition(cx: &Construction, i: usize, j: usize) -> Result<MatrixL, Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    let ring = cx.atlas.ring(&[i, j]);
    let frames = &cx.frames;
    let (ti, tj) = (cx.sec.t[i], cx.sec.t[j]);
    let (f_j, g_j) = cx.sub.pair(j);
    let upper_i = frames.upper(i);
    let p = upper_i.delete_col(tj - 1);
    let rb = frames.t_second[i].delete_col(tj - 1);
    let targets = upper_i.mul(&cx.sec.column(j))?.scale(&sign(nv, tj));
    let mut q = MatrixL::zeros(r - 2, 2, nv);
    for row in 0..r - 2 {
        let (a, b) = lift_pair(&ring, targets.get(row, 0), f_j, g_j)?;
        q.set(row, 0, a);
        q.set(row, 1, b);
    }
    let sigma = &sign(nv, tj) * cx.sec.s(j, ti);
    let s = cx.sub.glue(i, j).a.scale(&sigma);
    let mut z = MatrixL::blocks(&p, &q, &rb, &s)?;
    let h = cx.line.h(i, j);
    let det = z.det()?;
    if det != h {
        // every matrix with M_i = Z M_j is Z + v * (0, .., g_j, -f_j)
        let lam = annihilator(cx, j);
        let mu = lam.mul(&z.adjugate()?)?;
        let v = lift(&ring, &(&h - &det), &mu.row(0)).map_err(|_| Error::NotInIdeal)?;
        z = z.add(&MatrixL::column(v, nv).mul(&lam)?)?;
    }
    check_transition(cx, &z, i, j)?;
    Ok(z)
}

fn check_transition(cx: &Construction, z: &MatrixL, i: usize, j: usize) -> Result<(), Error> {
    if cx.frames.m[i] != z.mul(&cx.frames.m[j])? {
        return Err(Error::VerificationFailed(alloc::format!("M_i = Z_ij M_j on ({},{})", i, j)));
    }
    if z.det()? != cx.line.h(i, j) {
        return Err(Error::VerificationFailed(alloc::format!("det Z_ij = h_ij on ({},{})", i, j)));
    }
    Ok(())
}

/// Assembles `Z_ij = [[P, Q], [R, S]]` on every sorted overlap.
pub fn build_transitions(cx: &Construction) -> Result<TransitionSet, Error> {
    let mut z = BTreeMap::new();
    for pair in cx.atlas.overlaps(2) {
        z.insert((pair[0], pair[1]), transition(cx, pair[0], pair[1])?);
    }
    Ok(TransitionSet::new(cx.sec.rank, cx.atlas.nvars(), z, TransitionStatus::Raw))
}

/// Defect of the cocycle condition on one sorted triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleDefect {
    /// `β_ijk1..β_ijk,r-1`.
    pub beta: Vec<LocElem>,
    /// The last two columns of `Z_ik - Z_ij Z_jk`.
    pub b: MatrixL,
}

#[derive(Clone, Debug)]
pub struct ObstructionData {
    pub triples: BTreeMap<(usize, usize, usize), TripleDefect>,
    /// `(-1)^{t_k} T'_i^{-1} β_ijk` on `(i, j, k)`.
    pub cochain: CechCochain,
}

/// Writes the rows of an `m x 2` block `B` with `B (f; g) = 0` as
/// `γ_row (g, -f)`.
fn factor_rows(
    ring: &crate::ideals::LocalRing,
    b: &MatrixL,
    f: &LocElem,
    g: &LocElem,
) -> Result<Vec<LocElem>, Error> {
    (0..b.rows())
        .map(|row| koszul_divide(ring, b.get(row, 0), &-b.get(row, 1), f, g))
        .collect::<Result<_, _>>()
        .map_err(|e| shape(alloc::format!("row factoring: {}", e)))
}

fn shape(msg: alloc::string::String) -> Error {
    Error::ShapeViolation(msg)
}

/// Reads `β` off a block `B = (β_hat; β_{t_i} f_i; β_{t_i} g_i)(g_k, -f_k)`.
pub(crate) fn extract_beta(cx: &Construction, b: &MatrixL, tuple: &[usize]) -> Result<Vec<LocElem>, Error> {
    let (i, k) = (tuple[0], *tuple.last().unwrap());
    let r = cx.sec.rank;
    let ring = cx.atlas.ring(tuple);
    let (f_k, g_k) = cx.sub.pair(k);
    let gamma = factor_rows(&ring, b, f_k, g_k)?;
    let (f_i, g_i) = cx.sub.pair(i);
    let last = koszul_divide(&ring, &gamma[r - 1], &gamma[r - 2], f_i, g_i)
        .map_err(|e| shape(alloc::format!("last rows: {}", e)))?;
    let ti = cx.sec.t[i] - 1;
    let mut beta = Vec::with_capacity(r - 1);
    let mut it = gamma.into_iter().take(r - 2);
    for t in 0..r - 1 {
        beta.push(if t == ti { last.clone() } else { it.next().unwrap() });
    }
    Ok(beta)
}

/// `Z_ik - Z_ij Z_jk` on every sorted triple, factored into `β_ijk`, and
/// the induced 2-cochain.
pub fn obstruction(cx: &Construction, ts: &TransitionSet) -> Result<ObstructionData, Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    let mut triples = BTreeMap::new();
    let mut entries = Vec::new();
    for tuple in cx.atlas.overlaps(3) {
        let (i, j, k) = (tuple[0], tuple[1], tuple[2]);
        let d = ts.z[&(i, k)].sub(&ts.z[&(i, j)].mul(&ts.z[&(j, k)])?)?;
        if !d.submatrix(0..r, 0..r - 2).is_zero() {
            return Err(shape(alloc::format!("first columns of the defect on ({},{},{})", i, j, k)));
        }
        let b = d.submatrix(0..r, r - 2..r);
        let beta = extract_beta(cx, &b, &tuple)?;
        let e = sign(nv, cx.sec.t[k]);
        let value: Vec<LocElem> = tprime_apply_inverse(&cx.sec, i, &beta).iter().map(|x| &e * x).collect();
        entries.push((tuple.clone(), value));
        triples.insert((i, j, k), TripleDefect { beta, b });
    }
    let cochain = CechCochain::from_values(2, r - 1, nv, entries)?;
    if !cx.complex().is_cocycle(&cochain) {
        return Err(Error::NotACocycle);
    }
    Ok(ObstructionData { triples, cochain })
}

/// Adds `x_hat (g_j, -f_j)` to `Q_ij` and `x_{t_i} (f_i; g_i)(g_j, -f_j)`
/// to `S_ij`.
pub(crate) fn apply_correction(cx: &Construction, z: &MatrixL, i: usize, j: usize, x: &[LocElem]) -> Result<MatrixL, Error> {
    let nv = cx.atlas.nvars();
    let ti = cx.sec.t[i] - 1;
    let (f_i, g_i) = cx.sub.pair(i);
    let mut v: Vec<LocElem> = x.iter().enumerate().filter(|(t, _)| *t != ti).map(|(_, e)| e.clone()).collect();
    v.push(&x[ti] * f_i);
    v.push(&x[ti] * g_i);
    z.add(&MatrixL::column(v, nv).mul(&annihilator(cx, j))?)
}

/// Kills the obstruction: solves `δξ = c`, sets
/// `x_ij = (-1)^{t_j} T'_i ξ_ij` and updates `Q` and `S`.
pub fn correct(
    cx: &Construction,
    ts: &TransitionSet,
    obs: &ObstructionData,
    opts: &SolveOptions,
) -> Result<(TransitionSet, CechCochain), Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    let xi = if obs.cochain.is_zero() {
        CechCochain::zero(1, r - 1, nv)
    } else {
        cx.complex().coboundary_solve(&obs.cochain, opts)?
    };
    let mut out = ts.clone();
    out.status = TransitionStatus::Corrected;
    for (&(i, j), z) in ts.z.iter() {
        let vals = xi.get(&[i, j]);
        if vals.iter().all(LocElem::is_zero) {
            continue;
        }
        let e = sign(nv, cx.sec.t[j]);
        let x: Vec<LocElem> = tprime_apply(&cx.sec, i, &vals).iter().map(|v| &e * v).collect();
        let nz = apply_correction(cx, z, i, j, &x)?;
        check_transition(cx, &nz, i, j)?;
        out.z.insert((i, j), nz);
        out.corrections.insert((i, j), x);
    }
    for tuple in cx.atlas.overlaps(3) {
        let (i, j, k) = (tuple[0], tuple[1], tuple[2]);
        if out.z[&(i, k)] != out.z[&(i, j)].mul(&out.z[&(j, k)])? {
            return Err(Error::VerificationFailed(alloc::format!("corrected cocycle on ({},{},{})", i, j, k)));
        }
    }
    Ok((out, xi))
}

impl Construction {
    pub fn complex(&self) -> CechComplex<'_> {
        CechComplex::new(&self.atlas, &self.line)
    }

    pub fn frames(&self) -> &FrameData {
        &self.frames
    }
}

//! Rescaling the local equations so that `s_{i t_i} = (-1)^{t_i}`, and
//! adjusting the gluing matrices to the prescribed determinant.

use alloc::vec::Vec;

use super::frames::sign;
use crate::algebra::{LocElem, MatrixL};
use crate::cover::{Atlas, LineBundle, SectionData, SubschemeData};
use crate::error::Error;
use crate::ideals::{contains, lift, lift_pair};

/// `f_i <- f_i / s_{i t_i}`, `g_i <- (-1)^{t_i} g_i`,
/// `s_it <- (-1)^{t_i} s_it / s_{i t_i}`, with the gluing matrices
/// conjugated accordingly.
pub fn normalize_generators(
    atlas: &Atlas,
    sub: &SubschemeData,
    sec: &SectionData,
) -> Result<(SubschemeData, SectionData), Error> {
    let nv = atlas.nvars();
    let mut nsub = sub.clone();
    let mut nsec = sec.clone();
    for (i, p) in nsub.pairs.iter_mut().enumerate() {
        let e = sign(nv, sec.t[i]);
        let inv = &sec.unit_inverse[i];
        p.f = &p.f * inv;
        p.g = &e * &p.g;
        for (k, s) in nsec.reps[i].iter_mut().enumerate() {
            *s = if k + 1 == sec.t[i] { e.clone() } else { &(&e * s) * inv };
        }
        nsec.unit_inverse[i] = e;
    }
    for ((i, j), glue) in nsub.glue.iter_mut() {
        let (i, j) = (*i, *j);
        let a = &glue.a;
        let (ei, ej) = (sign(nv, sec.t[i]), sign(nv, sec.t[j]));
        let (ui, uj) = (&sec.unit_inverse[i], sec.unit(j));
        let rows = alloc::vec![
            alloc::vec![&(a.get(0, 0) * uj) * ui, &(a.get(0, 1) * &ej) * ui],
            alloc::vec![&(a.get(1, 0) * &ei) * uj, &(a.get(1, 1) * &ei) * &ej],
        ];
        glue.a = MatrixL::from_rows(nv, rows)?;
    }
    for &(i, j) in nsub.glue.keys() {
        if !nsub.glue_defect(i, j)?.is_zero() {
            return Err(Error::VerificationFailed(alloc::format!("gluing relation on ({},{}) after normalization", i, j)));
        }
    }
    for (i, s) in nsec.reps.iter().enumerate() {
        if s[nsec.t[i] - 1] != sign(nv, nsec.t[i]) {
            return Err(Error::VerificationFailed(alloc::format!("unit section on chart {} not normalized", i)));
        }
    }
    Ok((nsub, nsec))
}

/// Inverse of `s` on the overlap ring, if it is a unit there.
fn overlap_inverse(atlas: &Atlas, pair: &[usize], s: &LocElem) -> Option<LocElem> {
    let ring = atlas.ring(pair);
    if s.is_zero() {
        return None;
    }
    ring.inverse(s).or_else(|| lift(&ring, &ring.one(), core::slice::from_ref(s)).ok().map(|mut w| w.remove(0)))
}

/// Makes `det A_ij = (-1)^{t_i} h_ij / s_{j t_i}` on every sorted overlap
/// where `s_{j t_i}` is a unit; elsewhere the overlap is marked deferred
/// and the determinant is fixed while assembling `Z_ij`.
pub fn adjust_glue(
    atlas: &Atlas,
    sub: &SubschemeData,
    sec: &SectionData,
    line: &LineBundle,
) -> Result<SubschemeData, Error> {
    let nv = atlas.nvars();
    let mut out = sub.clone();
    let keys: Vec<(usize, usize)> = out.glue.keys().copied().collect();
    for (i, j) in keys {
        let pair = [i, j];
        let ring = atlas.ring(&pair);
        let Some(inv) = overlap_inverse(atlas, &pair, sec.s(j, sec.t[i])) else {
            out.glue.get_mut(&(i, j)).unwrap().deferred = true;
            continue;
        };
        let target = &(&sign(nv, sec.t[i]) * &line.h(i, j)) * &inv;
        let (f_i, g_i) = sub.pair(i);
        let (f_j, g_j) = sub.pair(j);
        let glue = out.glue.get_mut(&(i, j)).unwrap();
        let defect = &target - &glue.a.det()?;
        if defect.is_zero() {
            continue;
        }
        let (phi, psi) = lift_pair(&ring, &defect, f_i, g_i)?;
        let a = &glue.a;
        let rows = alloc::vec![
            alloc::vec![a.get(0, 0) + &(&psi * g_j), a.get(0, 1) - &(&psi * f_j)],
            alloc::vec![a.get(1, 0) - &(&phi * g_j), a.get(1, 1) + &(&phi * f_j)],
        ];
        glue.a = MatrixL::from_rows(nv, rows)?;
        glue.phi = phi;
        glue.psi = psi;
        if glue.a.det()? != target {
            return Err(Error::VerificationFailed(alloc::format!("adjusted determinant on ({},{})", i, j)));
        }
    }
    for &(i, j) in out.glue.keys() {
        if !out.glue_defect(i, j)?.is_zero() {
            return Err(Error::VerificationFailed(alloc::format!("gluing relation on ({},{}) after adjustment", i, j)));
        }
    }
    Ok(out)
}

/// Whether `s_it - det A_ij / h_ij * s_jt` lies in `(f_i, g_i)` on the
/// overlap, for every `t`.
pub fn sections_compatible(
    atlas: &Atlas,
    sub: &SubschemeData,
    sec: &SectionData,
    line: &LineBundle,
    i: usize,
    j: usize,
) -> Result<bool, Error> {
    let ring = atlas.ring(&[i, j]);
    let (f, g) = sub.pair(i);
    let factor = &sub.glue(i, j).a.det()? * &line.h_inv(i, j);
    for t in 1..sec.rank {
        let d = sec.s(i, t) - &(&factor * sec.s(j, t));
        if !contains(&ring, &d, &[f.clone(), g.clone()])? {
            return Ok(false);
        }
    }
    Ok(true)
}

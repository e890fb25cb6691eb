//! The local section matrices `M_i` and their building blocks `T'_i`,
//! `T''_i`.

use alloc::vec::Vec;

use crate::algebra::{LocElem, MatrixL};
use crate::cover::{SectionData, SubschemeData};
use crate::error::Error;

/// Per-chart frames. `t[i]` is one-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameData {
    pub t: Vec<usize>,
    /// `(r-1) x (r-1)`: the identity with column `t_i` replaced by
    /// `-(-1)^{t_i} s_i` and a 1 on the diagonal.
    pub t_prime: Vec<MatrixL>,
    /// `2 x (r-1)`: zero except column `t_i = (f_i; g_i)`.
    pub t_second: Vec<MatrixL>,
    /// `r x (r-1)`: `T'_i` without row `t_i`, over `T''_i`.
    pub m: Vec<MatrixL>,
}

impl FrameData {
    pub fn rank(&self) -> usize {
        self.t_prime.first().map_or(2, |t| t.rows() + 1)
    }

    pub fn num_charts(&self) -> usize {
        self.t.len()
    }

    /// `T'_i` without row `t_i`.
    pub fn upper(&self, i: usize) -> MatrixL {
        self.t_prime[i].delete_row(self.t[i] - 1)
    }
}

pub(crate) fn sign(nv: usize, t: usize) -> LocElem {
    LocElem::sign(nv, t)
}

/// Builds the frames from normalized data and checks the four block
/// identities on every chart.
pub fn build_frames(sub: &SubschemeData, sec: &SectionData) -> Result<FrameData, Error> {
    let n = sub.pairs.len();
    let r = sec.rank;
    let nv = sub.pairs[0].f.nvars();
    let mut out = FrameData { t: sec.t.clone(), t_prime: Vec::new(), t_second: Vec::new(), m: Vec::new() };
    for i in 0..n {
        let ti = sec.t[i] - 1;
        let (f, g) = sub.pair(i);
        let mut tp = MatrixL::identity(r - 1, nv);
        let minus_sign = -sign(nv, sec.t[i]);
        for k in 0..r - 1 {
            if k != ti {
                tp.set(k, ti, &minus_sign * sec.s(i, k + 1));
            }
        }
        let mut ts = MatrixL::zeros(2, r - 1, nv);
        ts.set(0, ti, f.clone());
        ts.set(1, ti, g.clone());
        let m = MatrixL::vstack(&tp.delete_row(ti), &ts)?;
        out.t_prime.push(tp);
        out.t_second.push(ts);
        out.m.push(m);
    }
    for i in 0..n {
        if let Some(name) = frame_identities(&out, sub, sec, i)?.iter().find(|(_, ok)| !ok).map(|(n, _)| *n) {
            return Err(Error::VerificationFailed(alloc::format!("{} on chart {}", name, i)));
        }
    }
    Ok(out)
}

/// The four frame identities on chart `i`, by name.
pub fn frame_identities(
    frames: &FrameData,
    sub: &SubschemeData,
    sec: &SectionData,
    i: usize,
) -> Result<[(&'static str, bool); 4], Error> {
    let nv = frames.m[i].nvars();
    let r = frames.rank();
    let ti = frames.t[i] - 1;
    let upper = frames.upper(i);
    let s = sec.column(i);
    let (f, g) = sub.pair(i);
    let e = sign(nv, frames.t[i]);
    let fg = MatrixL::column(alloc::vec![&e * f, &e * g], nv);
    Ok([
        ("upper_times_deletion_is_identity", upper.delete_col(ti) == MatrixL::identity(r - 2, nv)),
        ("lower_times_deletion_is_zero", frames.t_second[i].delete_col(ti).is_zero()),
        ("upper_kills_sections", upper.mul(&s)?.is_zero()),
        ("lower_on_sections", frames.t_second[i].mul(&s)? == fg),
    ])
}

/// `T'_i u`.
pub fn tprime_apply(sec: &SectionData, i: usize, u: &[LocElem]) -> Vec<LocElem> {
    let ti = sec.t[i] - 1;
    let nv = u[0].nvars();
    let c = &sign(nv, sec.t[i]) * &u[ti];
    u.iter()
        .enumerate()
        .map(|(k, x)| if k == ti { x.clone() } else { x - &(&c * sec.s(i, k + 1)) })
        .collect()
}

/// `T'_i^{-1} u`: `u` with entry `t_i` replaced by zero, plus
/// `(-1)^{t_i} u_{t_i} s_i`.
pub fn tprime_apply_inverse(sec: &SectionData, i: usize, u: &[LocElem]) -> Vec<LocElem> {
    let ti = sec.t[i] - 1;
    let nv = u[0].nvars();
    let c = &sign(nv, sec.t[i]) * &u[ti];
    u.iter()
        .enumerate()
        .map(|(k, x)| {
            let base = if k == ti { LocElem::zero(nv) } else { x.clone() };
            &base + &(&c * sec.s(i, k + 1))
        })
        .collect()
}

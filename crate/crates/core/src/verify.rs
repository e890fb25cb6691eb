//! Exact checks of every identity the construction relies on, collected
//! into a report.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{LocElem, MatrixL};
use crate::cover::GlueCase;
use crate::error::Error;
use crate::ideals::{contains, ideal_equal};
use crate::serre::{
    annihilator, frame_identities, sections_compatible, Construction, ObstructionData, TransitionSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    Global,
    Chart(usize),
    Overlap(usize, usize),
    Triple(usize, usize, usize),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Global => f.write_str("global"),
            Scope::Chart(i) => write!(f, "chart {}", i),
            Scope::Overlap(i, j) => write!(f, "overlap ({},{})", i, j),
            Scope::Triple(i, j, k) => write!(f, "triple ({},{},{})", i, j, k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub scope: Scope,
    pub passed: bool,
    /// The nonzero defect when the check fails.
    pub witness: Option<String>,
}

impl Check {
    pub fn describe(&self) -> String {
        match &self.witness {
            Some(w) => format!("{} on {}: {}", self.name, self.scope, w),
            None => format!("{} on {}", self.name, self.scope),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn count(&self, name: &str) -> usize {
        self.checks.iter().filter(|c| c.name == name).count()
    }

    /// Whether every check with this name passed (and at least one ran).
    pub fn all_passed(&self, name: &str) -> bool {
        self.count(name) > 0 && self.checks.iter().filter(|c| c.name == name).all(|c| c.passed)
    }

    fn flag(&mut self, name: &str, scope: Scope, ok: bool) {
        let witness = if ok { None } else { Some(String::from("identity fails")) };
        self.checks.push(Check { name: name.to_string(), scope, passed: ok, witness });
    }

    /// Records `lhs == rhs`, with the difference as witness.
    fn equal(&mut self, name: &str, scope: Scope, lhs: &MatrixL, rhs: &MatrixL) -> Result<(), Error> {
        let d = lhs.sub(rhs)?;
        let ok = d.is_zero();
        let witness = if ok { None } else { Some(d.to_string()) };
        self.checks.push(Check { name: name.to_string(), scope, passed: ok, witness });
        Ok(())
    }

    fn equal_elem(&mut self, name: &str, scope: Scope, lhs: &LocElem, rhs: &LocElem) {
        let d = lhs - rhs;
        let ok = d.is_zero();
        let witness = if ok { None } else { Some(d.to_string()) };
        self.checks.push(Check { name: name.to_string(), scope, passed: ok, witness });
    }
}

fn col(v: Vec<LocElem>, nv: usize) -> MatrixL {
    MatrixL::column(v, nv)
}

/// The gluing relation and, where it was adjusted, the gluing determinant.
pub fn verify_gluing(cx: &Construction, report: &mut Report) -> Result<(), Error> {
    let nv = cx.atlas.nvars();
    for (&(i, j), glue) in &cx.sub.glue {
        let scope = Scope::Overlap(i, j);
        let a = &glue.a;
        report.equal(&format!("gluing[{}]", glue.case.name()), scope, &cx.sub.column(i), &a.mul(&cx.sub.column(j))?)?;
        if !glue.deferred {
            let lhs = &a.det()? * cx.sec.s(j, cx.sec.t[i]);
            let rhs = &LocElem::sign(nv, cx.sec.t[i]) * &cx.line.h(i, j);
            report.equal_elem("gluing_determinant", scope, &lhs, &rhs);
        }
    }
    Ok(())
}

pub fn verify_section_compatibility(cx: &Construction, report: &mut Report) -> Result<(), Error> {
    for &(i, j) in cx.sub.glue.keys() {
        let ok = sections_compatible(&cx.atlas, &cx.sub, &cx.sec, &cx.line, i, j)?;
        report.flag("section_compatibility", Scope::Overlap(i, j), ok);
    }
    Ok(())
}

pub fn verify_frames(cx: &Construction, report: &mut Report) -> Result<(), Error> {
    for i in 0..cx.atlas.num_charts() {
        for (name, ok) in frame_identities(&cx.frames, &cx.sub, &cx.sec, i)? {
            report.flag(name, Scope::Chart(i), ok);
        }
    }
    Ok(())
}

/// `M_i s_i = (0, .., 0, (-1)^{t_i} f_i, (-1)^{t_i} g_i)`.
pub fn verify_section_relation(cx: &Construction, report: &mut Report) -> Result<(), Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    for i in 0..cx.atlas.num_charts() {
        let e = LocElem::sign(nv, cx.sec.t[i]);
        let (f, g) = cx.sub.pair(i);
        let mut want = vec![LocElem::zero(nv); r];
        want[r - 2] = &e * f;
        want[r - 1] = &e * g;
        report.equal("section_relation", Scope::Chart(i), &cx.frames.m[i].mul(&cx.sec.column(i))?, &col(want, nv))?;
    }
    Ok(())
}

/// The maximal minors of `M_i` generate `(f_i, g_i)`.
pub fn verify_dependency_locus(cx: &Construction, report: &mut Report) -> Result<(), Error> {
    for i in 0..cx.atlas.num_charts() {
        let ring = cx.atlas.ring(&[i]);
        let minors = cx.frames.m[i].maximal_minors();
        let p = &cx.sub.pairs[i];
        let ok = if p.on_y {
            ideal_equal(&ring, &minors, &[p.f.clone(), p.g.clone()])?
        } else {
            contains(&ring, &ring.one(), &minors)?
        };
        report.flag("dependency_locus", Scope::Chart(i), ok);
    }
    Ok(())
}

/// Block formulas for `P`, `R`, the conditions on `Q` and `S`, and
/// `M_i = Z_ij M_j`.
pub fn verify_transition_blocks(cx: &Construction, ts: &TransitionSet, report: &mut Report) -> Result<(), Error> {
    let nv = cx.atlas.nvars();
    for &(i, j) in ts.z.keys() {
        let scope = Scope::Overlap(i, j);
        let (ti, tj) = (cx.sec.t[i], cx.sec.t[j]);
        let upper = cx.frames.upper(i);
        report.equal("block_p", scope, &ts.p(i, j), &upper.delete_col(tj - 1))?;
        report.equal("block_r", scope, &ts.r_block(i, j), &cx.frames.t_second[i].delete_col(tj - 1))?;
        let ej = LocElem::sign(nv, tj);
        let fj = cx.sub.column(j);
        report.equal("block_q", scope, &ts.q(i, j).mul(&fj)?, &upper.mul(&cx.sec.column(j))?.scale(&ej))?;
        let sigma = &ej * cx.sec.s(j, ti);
        report.equal("block_s", scope, &ts.s(i, j).mul(&fj)?, &cx.sub.column(i).scale(&sigma))?;
        report.equal("sections_glue", scope, &cx.frames.m[i], &ts.z[&(i, j)].mul(&cx.frames.m[j])?)?;
    }
    Ok(())
}

pub fn verify_det(cx: &Construction, ts: &TransitionSet, report: &mut Report) -> Result<(), Error> {
    for (&(i, j), z) in &ts.z {
        report.equal_elem("det", Scope::Overlap(i, j), &z.det()?, &cx.line.h(i, j));
    }
    Ok(())
}

/// The four identities satisfied by any transition set of this form.
pub fn verify_annihilator_identities(cx: &Construction, ts: &TransitionSet, report: &mut Report) -> Result<(), Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    let rho = |i: usize| -> MatrixL {
        let (f, g) = cx.sub.pair(i);
        MatrixL::row_vector(vec![g.clone(), -f], nv)
    };
    for (&(i, j), z) in &ts.z {
        let scope = Scope::Overlap(i, j);
        let (ti, tj) = (cx.sec.t[i], cx.sec.t[j]);
        let eh = &LocElem::sign(nv, ti + tj) * &cx.line.h(i, j);
        report.equal("annihilator_s", scope, &rho(i).mul(&ts.s(i, j))?, &rho(j).scale(&eh))?;
        let selector: Vec<LocElem> = (1..r).filter(|&t| t != tj).map(|t| LocElem::int(nv, (t == ti) as i64)).collect();
        let want = cx.sub.column(i).mul(&MatrixL::row_vector(selector, nv))?;
        report.equal("block_r_selector", scope, &ts.r_block(i, j), &want)?;
        report.equal("annihilator_z", scope, &annihilator(cx, i).mul(z)?, &annihilator(cx, j).scale(&eh))?;
    }
    for tuple in cx.atlas.overlaps(3) {
        let (i, j, k) = (tuple[0], tuple[1], tuple[2]);
        let d = ts.z[&(i, j)].mul(&ts.z[&(j, k)])?.sub(&ts.z[&(i, k)])?;
        let lhs = annihilator(cx, i).mul(&d)?;
        report.equal("annihilator_defect", Scope::Triple(i, j, k), &lhs, &MatrixL::zeros(1, r, nv))?;
    }
    Ok(())
}

/// `Z_ik - Z_ij Z_jk = (0 | (β_hat; β_{t_i} f_i; β_{t_i} g_i)(g_k, -f_k))`.
pub fn verify_defect_shape(
    cx: &Construction,
    ts: &TransitionSet,
    obs: &ObstructionData,
    report: &mut Report,
) -> Result<(), Error> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    for tuple in cx.atlas.overlaps(3) {
        let (i, j, k) = (tuple[0], tuple[1], tuple[2]);
        let scope = Scope::Triple(i, j, k);
        let d = ts.z[&(i, k)].sub(&ts.z[&(i, j)].mul(&ts.z[&(j, k)])?)?;
        let Some(defect) = obs.triples.get(&(i, j, k)) else {
            report.flag("defect_shape", scope, false);
            continue;
        };
        let ti = cx.sec.t[i] - 1;
        let (f_i, g_i) = cx.sub.pair(i);
        let (f_k, g_k) = cx.sub.pair(k);
        let mut v: Vec<LocElem> = defect.beta.iter().enumerate().filter(|(t, _)| *t != ti).map(|(_, b)| b.clone()).collect();
        v.push(&defect.beta[ti] * f_i);
        v.push(&defect.beta[ti] * g_i);
        let b = col(v, nv).mul(&MatrixL::row_vector(vec![g_k.clone(), -f_k], nv))?;
        let want = MatrixL::hstack(&MatrixL::zeros(r, r - 2, nv), &b)?;
        report.equal("defect_shape", scope, &d, &want)?;
    }
    Ok(())
}

pub fn verify_obstruction_cocycle(cx: &Construction, obs: &ObstructionData, report: &mut Report) {
    report.flag("obstruction_cocycle", Scope::Global, cx.complex().is_cocycle(&obs.cochain));
}

/// `Z_ii = I`, `Z_ij Z_ji = I` and `Z_ik = Z_ij Z_jk` on all ordered
/// triples.
pub fn verify_cocycle(cx: &Construction, ts: &TransitionSet, report: &mut Report) -> Result<(), Error> {
    let n = cx.atlas.num_charts();
    let nv = cx.atlas.nvars();
    let id = MatrixL::identity(ts.rank, nv);
    let mut all = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            all.insert((i, j), ts.get(cx, i, j)?);
        }
    }
    for i in 0..n {
        report.equal("cocycle_identity", Scope::Chart(i), &all[&(i, i)], &id)?;
        for j in i + 1..n {
            report.equal("cocycle_inverse", Scope::Overlap(i, j), &all[&(i, j)].mul(&all[&(j, i)])?, &id)?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let lhs = &all[&(i, k)];
                let rhs = all[&(i, j)].mul(&all[&(j, k)])?;
                report.equal("cocycle", Scope::Triple(i, j, k), lhs, &rhs)?;
            }
        }
    }
    Ok(())
}

/// Every check, in a fixed order. Raw transitions skip the cocycle check.
pub fn verify_all(
    cx: &Construction,
    raw: Option<(&TransitionSet, &ObstructionData)>,
    corrected: &TransitionSet,
) -> Result<Report, Error> {
    let mut report = Report::default();
    verify_gluing(cx, &mut report)?;
    verify_section_compatibility(cx, &mut report)?;
    verify_frames(cx, &mut report)?;
    verify_section_relation(cx, &mut report)?;
    verify_dependency_locus(cx, &mut report)?;
    if let Some((raw, obs)) = raw {
        verify_transition_blocks(cx, raw, &mut report)?;
        verify_det(cx, raw, &mut report)?;
        verify_annihilator_identities(cx, raw, &mut report)?;
        verify_defect_shape(cx, raw, obs, &mut report)?;
        verify_obstruction_cocycle(cx, obs, &mut report);
    }
    verify_transition_blocks(cx, corrected, &mut report)?;
    verify_det(cx, corrected, &mut report)?;
    verify_annihilator_identities(cx, corrected, &mut report)?;
    verify_cocycle(cx, corrected, &mut report)?;
    Ok(report)
}

/// Cases used by the gluing matrices, for reporting.
pub fn glue_cases(cx: &Construction) -> BTreeMap<(usize, usize), GlueCase> {
    cx.sub.glue.iter().map(|(k, g)| (*k, g.case)).collect()
}

//! Local representatives `s_it` of the sections of the twisted
//! determinant of the normal bundle.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{AmbientKind, Atlas, LineBundle, SubschemeData};
use crate::algebra::{LocElem, MatrixL, Poly};
use crate::error::Error;
use crate::ideals::{contains, lift, LocalRing};

/// How the unit section `s_{i t_i}` of a chart was recognized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum UnitTier {
    Constant,
    DesignatedUnit,
    Invertible,
    /// Its numerator was designated as a new unit of the chart.
    Localized,
}

impl UnitTier {
    pub fn name(self) -> &'static str {
        match self {
            UnitTier::Constant => "constant",
            UnitTier::DesignatedUnit => "designated_unit",
            UnitTier::Invertible => "invertible",
            UnitTier::Localized => "localized",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SectionData {
    pub rank: usize,
    /// `reps[i][t - 1] = s_it`.
    pub reps: Vec<Vec<LocElem>>,
    /// One-based index `t_i` of the unit section on chart `i`.
    pub t: Vec<usize>,
    pub tiers: Vec<UnitTier>,
    /// Inverse of `s_{i t_i}` in the chart ring.
    pub unit_inverse: Vec<LocElem>,
}

impl SectionData {
    /// `s_it` with one-based `t`.
    pub fn s(&self, i: usize, t: usize) -> &LocElem {
        &self.reps[i][t - 1]
    }

    pub fn unit(&self, i: usize) -> &LocElem {
        self.s(i, self.t[i])
    }

    /// The column `(s_i1, ..., s_i,r-1)`.
    pub fn column(&self, i: usize) -> MatrixL {
        let nv = self.reps[i][0].nvars();
        MatrixL::column(self.reps[i].clone(), nv)
    }
}

/// Whether the charts, shrunk by their designated units, still cover the
/// ambient space: in every chart's plain coordinate ring the products
/// `x_k * prod(units of chart k)` must generate the unit ideal.
fn still_covers(atlas: &Atlas) -> Result<bool, Error> {
    let nv = atlas.nvars();
    let projective = atlas.cover().ambient().kind == AmbientKind::Projective;
    let gens: Vec<LocElem> = (0..atlas.num_charts())
        .map(|k| {
            let mut p = if projective { Poly::var(nv, k) } else { Poly::one(nv) };
            for u in atlas.chart_units(k) {
                p = &p * u;
            }
            LocElem::from_poly(p)
        })
        .collect();
    for j in 0..atlas.num_charts() {
        let ring = atlas.cover().ring(&[j]);
        let base = match ring.home() {
            Some(h) => LocalRing::projective(nv, h, []),
            None => LocalRing::affine(nv, []),
        };
        if !contains(&base, &base.one(), &gens)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Picks `t_i` by the first rule that applies, in order: a nonzero
/// constant, a product of designated units, an invertible element of the
/// chart ring, an element that is a unit near Y (whose numerator is then
/// designated). Returns the one-based index, the rule and the inverse.
fn choose_unit(
    atlas: &mut Atlas,
    chart: usize,
    reps: &[LocElem],
    f: &LocElem,
    g: &LocElem,
) -> Result<(usize, UnitTier, LocElem), Error> {
    let ring = atlas.ring(&[chart]);
    for (k, s) in reps.iter().enumerate() {
        if let Some(c) = s.as_constant().filter(|c| !num_traits::Zero::is_zero(c)) {
            return Ok((k + 1, UnitTier::Constant, LocElem::constant(s.nvars(), c.recip())));
        }
    }
    for (k, s) in reps.iter().enumerate() {
        if let Some(inv) = ring.inverse(s) {
            return Ok((k + 1, UnitTier::DesignatedUnit, inv));
        }
    }
    for (k, s) in reps.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        if let Ok(w) = lift(&ring, &ring.one(), core::slice::from_ref(s)) {
            return Ok((k + 1, UnitTier::Invertible, w.into_iter().next().unwrap()));
        }
    }
    for (k, s) in reps.iter().enumerate() {
        if s.is_zero() || !contains(&ring, &ring.one(), &[f.clone(), g.clone(), s.clone()])? {
            continue;
        }
        let mut trial = atlas.clone();
        trial.add_chart_unit(chart, s.num().monic().0);
        if !still_covers(&trial)? {
            continue;
        }
        *atlas = trial;
        let inv = atlas.ring(&[chart]).inverse(s).expect("numerator was just designated");
        return Ok((k + 1, UnitTier::Localized, inv));
    }
    Err(Error::RefinementRequired { chart })
}

/// Validates the section representatives: generation near Y, the
/// compatibility relation on every overlap, and a unit section per chart.
/// Charts missing Y default to `(1, 0, ..., 0)`.
pub fn load_sections(
    atlas: &mut Atlas,
    sub: &SubschemeData,
    line: &LineBundle,
    rank: usize,
    reps: &[(usize, Vec<LocElem>)],
) -> Result<SectionData, Error> {
    let nv = atlas.nvars();
    let n = atlas.num_charts();
    if rank < 2 {
        return Err(Error::PreconditionViolated(format!("rank {} < 2", rank)));
    }
    let mut given: Vec<Option<Vec<LocElem>>> = vec![None; n];
    for (c, vals) in reps {
        if *c >= n || given[*c].is_some() {
            return Err(Error::PreconditionViolated(format!("sections for chart {} listed twice or out of range", c)));
        }
        if vals.len() != rank - 1 {
            return Err(Error::DimensionMismatch(format!(
                "chart {}: {} section values for rank {}",
                c,
                vals.len(),
                rank
            )));
        }
        given[*c] = Some(vals.clone());
    }
    let mut all = Vec::with_capacity(n);
    for (i, g) in given.into_iter().enumerate() {
        let vals = match g {
            Some(v) => v,
            None if !sub.pairs[i].on_y => {
                let mut v = vec![LocElem::zero(nv); rank - 1];
                v[0] = LocElem::one(nv);
                v
            }
            None => return Err(Error::PreconditionViolated(format!("no section values for chart {}", i))),
        };
        let ring = atlas.ring(&[i]);
        for v in &vals {
            ring.to_ext(v)?;
        }
        all.push(vals);
    }
    for i in 0..n {
        let (f, g) = sub.pair(i);
        let ring = atlas.ring(&[i]);
        let mut gens = vec![f.clone(), g.clone()];
        gens.extend(all[i].iter().cloned());
        if !contains(&ring, &ring.one(), &gens)? {
            return Err(Error::NotGenerating { chart: i });
        }
    }
    let mut t = Vec::with_capacity(n);
    let mut tiers = Vec::with_capacity(n);
    let mut inverses = Vec::with_capacity(n);
    for i in 0..n {
        let (f, g) = sub.pair(i);
        let (ti, tier, inv) = choose_unit(atlas, i, &all[i], f, g)?;
        t.push(ti);
        tiers.push(tier);
        inverses.push(inv);
    }
    for pair in atlas.overlaps(2) {
        let (i, j) = (pair[0], pair[1]);
        let ring = atlas.ring(&pair);
        let (f, g) = sub.pair(i);
        let factor = &sub.glue(i, j).a.det()? * &line.h_inv(i, j);
        for k in 0..rank - 1 {
            let defect = &all[i][k] - &(&factor * &all[j][k]);
            if !contains(&ring, &defect, &[f.clone(), g.clone()])? {
                return Err(Error::CompatibilityFailure { i, j, t: k + 1 });
            }
        }
    }
    Ok(SectionData { rank, reps: all, t, tiers, unit_inverse: inverses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{extend_off_y, line_bundle, load_subscheme, projective_atlas, SubschemeInput};

    fn two_points() -> (Atlas, SubschemeData) {
        let atlas = projective_atlas(2);
        let c = |k: usize, a: &str, b: &str| (k, atlas.parse_chart(k, a).unwrap(), atlas.parse_chart(k, b).unwrap());
        let input = SubschemeInput::Charts(vec![c(0, "x1", "x2"), c(1, "x0", "x2")]);
        let sub = extend_off_y(&atlas, &load_subscheme(&atlas, &input).unwrap()).unwrap();
        (atlas, sub)
    }

    #[test]
    fn heterogeneous_units() {
        let (mut atlas, sub) = two_points();
        let l = line_bundle(atlas.cover(), 1).unwrap();
        let one = LocElem::one(3);
        let zero = LocElem::zero(3);
        let reps = vec![(0, vec![one.clone(), zero.clone()]), (1, vec![zero, one])];
        let sec = load_sections(&mut atlas, &sub, &l, 3, &reps).unwrap();
        assert_eq!(sec.t, vec![1, 2, 1]);
        assert_eq!(sec.tiers[0], UnitTier::Constant);
    }

    #[test]
    fn zero_section_does_not_generate() {
        let atlas0 = projective_atlas(3);
        let input = SubschemeInput::GlobalCi {
            f: crate::algebra::parse_poly("x0", 4).unwrap(),
            g: crate::algebra::parse_poly("x1", 4).unwrap(),
        };
        let sub = extend_off_y(&atlas0, &load_subscheme(&atlas0, &input).unwrap()).unwrap();
        let l = line_bundle(atlas0.cover(), 2).unwrap();
        let mut atlas = atlas0.clone();
        let reps = vec![(2, vec![LocElem::zero(4)]), (3, vec![LocElem::one(4)])];
        assert_eq!(load_sections(&mut atlas, &sub, &l, 2, &reps).unwrap_err(), Error::NotGenerating { chart: 2 });
        let mut atlas = atlas0.clone();
        let reps = vec![(2, vec![LocElem::one(4)]), (3, vec![LocElem::one(4)])];
        let sec = load_sections(&mut atlas, &sub, &l, 2, &reps).unwrap();
        assert_eq!(sec.t, vec![1; 4]);
        let mut atlas = atlas0;
        let reps = vec![(2, vec![LocElem::one(4)]), (3, vec![LocElem::int(4, 2)])];
        assert!(matches!(
            load_sections(&mut atlas, &sub, &l, 2, &reps).unwrap_err(),
            Error::CompatibilityFailure { i: 2, j: 3, t: 1 }
        ));
    }

    #[test]
    fn localized_unit_keeps_cover() {
        let (mut atlas, sub) = two_points();
        let l = line_bundle(atlas.cover(), 1).unwrap();
        // on chart 0, 1 + x1 is a unit near [1:0:0] but vanishes elsewhere
        let s0 = atlas.parse_chart(0, "1 + x1").unwrap();
        let reps = vec![(0, vec![s0, LocElem::zero(3)]), (1, vec![LocElem::zero(3), LocElem::one(3)])];
        let sec = load_sections(&mut atlas, &sub, &l, 3, &reps).unwrap();
        assert_eq!(sec.tiers[0], UnitTier::Localized);
        assert_eq!(atlas.chart_units(0).len(), 1);
    }
}

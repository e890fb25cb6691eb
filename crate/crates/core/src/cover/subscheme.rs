//! Local equations `(f_i, g_i)` of the subscheme and their gluing
//! matrices `A_ij` with `(f_i; g_i) = A_ij (f_j; g_j)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::Atlas;
use crate::algebra::{LocElem, MatrixL, Poly};
use crate::error::Error;
use crate::ideals::{contains, lift_pair, regular_pair, unit_certificate, LocalRing};

/// How the subscheme is specified.
#[derive(Clone, Debug)]
pub enum SubschemeInput {
    /// Two homogeneous global equations (or plain polynomials on affine space).
    GlobalCi { f: Poly, g: Poly },
    /// `(chart, f, g)` in the global representation for every chart meeting Y.
    Charts(Vec<(usize, LocElem, LocElem)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPair {
    pub f: LocElem,
    pub g: LocElem,
    pub on_y: bool,
}

/// Which rule produced a gluing matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GlueCase {
    /// Both charts meet Y on the overlap: lifted generator by generator.
    Lifted,
    /// Global equations: diagonal powers of `x_j / x_i`.
    ClosedForm,
    /// Neither chart meets Y: identity.
    BothOff,
    /// Only chart `j` meets Y: rows `(u_j, v_j)` and `(-g_j, f_j)`.
    FirstOff,
    /// Only chart `i` meets Y: columns `(f_i; g_i)` and `(-v_i; u_i)`.
    SecondOff,
    /// Both charts meet Y but not on their overlap: product of the two above.
    Disjoint,
}

impl GlueCase {
    pub fn name(self) -> &'static str {
        match self {
            GlueCase::Lifted => "lifted",
            GlueCase::ClosedForm => "closed_form",
            GlueCase::BothOff => "both_off",
            GlueCase::FirstOff => "first_off",
            GlueCase::SecondOff => "second_off",
            GlueCase::Disjoint => "disjoint",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GlueData {
    pub a: MatrixL,
    pub case: GlueCase,
    /// Determinant corrections `phi, psi`; zero until the determinant is adjusted.
    pub phi: LocElem,
    pub psi: LocElem,
    /// Set when the determinant could not be adjusted because `s_{j t_i}`
    /// is not a unit on the overlap.
    pub deferred: bool,
}

impl GlueData {
    fn new(a: MatrixL, case: GlueCase) -> Self {
        let nv = a.nvars();
        GlueData { a, case, phi: LocElem::zero(nv), psi: LocElem::zero(nv), deferred: false }
    }
}

/// Per-chart pairs and gluing matrices for every sorted overlap `(i, j)`.
#[derive(Clone, Debug)]
pub struct SubschemeData {
    pub pairs: Vec<ChartPair>,
    pub glue: BTreeMap<(usize, usize), GlueData>,
}

impl SubschemeData {
    pub fn pair(&self, i: usize) -> (&LocElem, &LocElem) {
        (&self.pairs[i].f, &self.pairs[i].g)
    }

    pub fn column(&self, i: usize) -> MatrixL {
        let (f, g) = self.pair(i);
        MatrixL::column(vec![f.clone(), g.clone()], f.nvars())
    }

    pub fn glue(&self, i: usize, j: usize) -> &GlueData {
        &self.glue[&(i, j)]
    }

    /// Defect `(f_i; g_i) - A_ij (f_j; g_j)`, zero when the gluing relation holds.
    pub fn glue_defect(&self, i: usize, j: usize) -> Result<MatrixL, Error> {
        let a = &self.glue(i, j).a;
        self.column(i).sub(&a.mul(&self.column(j))?)
    }
}

fn meets(ring: &LocalRing, f: &LocElem, g: &LocElem) -> Result<bool, Error> {
    Ok(!contains(ring, &ring.one(), &[f.clone(), g.clone()])?)
}

/// Reads the local equations, decides which charts meet Y, checks
/// regularity and computes `A_ij` on every overlap where Y is visible from
/// both charts.
pub fn load_subscheme(atlas: &Atlas, input: &SubschemeInput) -> Result<SubschemeData, Error> {
    let nv = atlas.nvars();
    let n = atlas.num_charts();
    let projective = atlas.cover().ambient().kind == super::AmbientKind::Projective;
    let mut pairs: Vec<ChartPair> =
        (0..n).map(|_| ChartPair { f: LocElem::one(nv), g: LocElem::zero(nv), on_y: false }).collect();
    let mut degrees = None;
    match input {
        SubschemeInput::GlobalCi { f, g } => {
            if f.nvars() != nv || g.nvars() != nv {
                return Err(Error::ArityMismatch { left: f.nvars(), right: nv });
            }
            if projective && !(f.is_homogeneous() && g.is_homogeneous()) {
                return Err(Error::PreconditionViolated(String::from("global equations must be homogeneous")));
            }
            let (df, dg) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
            degrees = Some((df, dg));
            for (i, p) in pairs.iter_mut().enumerate() {
                let (fi, gi) = if projective {
                    let x = Poly::var(nv, i);
                    (LocElem::from_poly(f.clone()).div_unit(&x, df), LocElem::from_poly(g.clone()).div_unit(&x, dg))
                } else {
                    (LocElem::from_poly(f.clone()), LocElem::from_poly(g.clone()))
                };
                p.f = fi;
                p.g = gi;
            }
            for (i, p) in pairs.iter_mut().enumerate() {
                p.on_y = meets(&atlas.ring(&[i]), &p.f, &p.g)?;
                if !p.on_y {
                    p.f = LocElem::one(nv);
                    p.g = LocElem::zero(nv);
                }
            }
        }
        SubschemeInput::Charts(list) => {
            let mut seen = vec![false; n];
            for (c, f, g) in list {
                if *c >= n || seen[*c] {
                    return Err(Error::PreconditionViolated(format!("chart {} listed twice or out of range", c)));
                }
                seen[*c] = true;
                let ring = atlas.ring(&[*c]);
                ring.to_ext(f)?;
                ring.to_ext(g)?;
                let on_y = meets(&ring, f, g)?;
                pairs[*c] = if on_y {
                    ChartPair { f: f.clone(), g: g.clone(), on_y }
                } else {
                    ChartPair { f: LocElem::one(nv), g: LocElem::zero(nv), on_y }
                };
            }
        }
    }
    for (i, p) in pairs.iter().enumerate() {
        if p.on_y && !regular_pair(&atlas.ring(&[i]), &p.f, &p.g)? {
            return Err(Error::NotCodimTwo { chart: i });
        }
    }
    let mut glue = BTreeMap::new();
    for t in atlas.overlaps(2) {
        let (i, j) = (t[0], t[1]);
        let ring = atlas.ring(&t);
        let (pi, pj) = (&pairs[i], &pairs[j]);
        let fail = |reason: &str| Error::GluingFailure { i, j, reason: reason.to_string() };
        let vis_i = pi.on_y && meets(&ring, &pi.f, &pi.g)?;
        let vis_j = pj.on_y && meets(&ring, &pj.f, &pj.g)?;
        if vis_i != vis_j {
            return Err(fail("the two charts disagree on whether Y meets the overlap"));
        }
        if !vis_i {
            continue;
        }
        if let Some((df, dg)) = degrees.filter(|_| projective) {
            let h = |d: u32| {
                let mut e = vec![0i64; nv];
                e[j] += d as i64;
                e[i] -= d as i64;
                LocElem::laurent_monomial(&e, crate::algebra::rat(1))
            };
            let z = LocElem::zero(nv);
            let a = MatrixL::from_rows(nv, vec![vec![h(df), z.clone()], vec![z, h(dg)]])?;
            glue.insert((i, j), GlueData::new(a, GlueCase::ClosedForm));
            continue;
        }
        let (a, b) = lift_pair(&ring, &pi.f, &pj.f, &pj.g).map_err(|_| fail("f_i is not in (f_j, g_j)"))?;
        let (c, d) = lift_pair(&ring, &pi.g, &pj.f, &pj.g).map_err(|_| fail("g_i is not in (f_j, g_j)"))?;
        lift_pair(&ring, &pj.f, &pi.f, &pi.g).map_err(|_| fail("f_j is not in (f_i, g_i)"))?;
        lift_pair(&ring, &pj.g, &pi.f, &pi.g).map_err(|_| fail("g_j is not in (f_i, g_i)"))?;
        let a = MatrixL::from_rows(nv, vec![vec![a, b], vec![c, d]])?;
        let det = a.det()?;
        if !ring.is_unit(&det) && !contains(&ring, &ring.one(), &[det, pi.f.clone(), pi.g.clone()])? {
            return Err(fail("gluing determinant vanishes on Y"));
        }
        glue.insert((i, j), GlueData::new(a, GlueCase::Lifted));
    }
    Ok(SubschemeData { pairs, glue })
}

/// Gives every chart missing Y the pair `(1, 0)` and fills in the gluing
/// matrices of all remaining overlaps.
pub fn extend_off_y(atlas: &Atlas, sub: &SubschemeData) -> Result<SubschemeData, Error> {
    let nv = atlas.nvars();
    let mut out = sub.clone();
    for p in out.pairs.iter_mut().filter(|p| !p.on_y) {
        p.f = LocElem::one(nv);
        p.g = LocElem::zero(nv);
    }
    for t in atlas.overlaps(2) {
        let (i, j) = (t[0], t[1]);
        if out.glue.contains_key(&(i, j)) {
            continue;
        }
        let ring = atlas.ring(&t);
        let (pi, pj) = (&out.pairs[i], &out.pairs[j]);
        // rows (u_j, v_j), (-g_j, f_j): sends (f_j; g_j) to (1; 0)
        let to_trivial = || -> Result<MatrixL, Error> {
            let (u, v) = unit_certificate(&ring, &pj.f, &pj.g)?;
            MatrixL::from_rows(nv, vec![vec![u, v], vec![-&pj.g, pj.f.clone()]])
        };
        // columns (f_i; g_i), (-v_i; u_i): sends (1; 0) to (f_i; g_i)
        let from_trivial = || -> Result<MatrixL, Error> {
            let (u, v) = unit_certificate(&ring, &pi.f, &pi.g)?;
            MatrixL::from_rows(nv, vec![vec![pi.f.clone(), -&v], vec![pi.g.clone(), u]])
        };
        let (a, case) = match (pi.on_y, pj.on_y) {
            (false, false) => (MatrixL::identity(2, nv), GlueCase::BothOff),
            (false, true) => (to_trivial()?, GlueCase::FirstOff),
            (true, false) => (from_trivial()?, GlueCase::SecondOff),
            (true, true) => (from_trivial()?.mul(&to_trivial()?)?, GlueCase::Disjoint),
        };
        out.glue.insert((i, j), GlueData::new(a, case));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::cover::projective_atlas;

    fn check_eq6(sub: &SubschemeData) {
        for &(i, j) in sub.glue.keys() {
            assert!(sub.glue_defect(i, j).unwrap().is_zero(), "({}, {})", i, j);
        }
    }

    #[test]
    fn global_line_in_p3() {
        let atlas = projective_atlas(3);
        let input = SubschemeInput::GlobalCi { f: parse_poly("x0", 4).unwrap(), g: parse_poly("x1", 4).unwrap() };
        let sub = load_subscheme(&atlas, &input).unwrap();
        assert!(!sub.pairs[0].on_y && !sub.pairs[1].on_y);
        assert_eq!(sub.pairs[2].f, atlas.parse_chart(2, "x0").unwrap());
        let a = &sub.glue(2, 3).a;
        let q = crate::algebra::parse_loc("x3/x2", 4).unwrap();
        assert_eq!(a.get(0, 0), &q);
        assert_eq!(a.get(1, 1), &q);
        assert!(a.get(0, 1).is_zero());
        let full = extend_off_y(&atlas, &sub).unwrap();
        assert_eq!(full.glue.len(), 6);
        check_eq6(&full);
        assert_eq!(full.glue(0, 1).case, GlueCase::BothOff);
        assert_eq!(full.glue(0, 2).case, GlueCase::FirstOff);
        for g in full.glue.values() {
            if g.case != GlueCase::ClosedForm {
                assert_eq!(g.a.det().unwrap(), LocElem::one(4));
            }
        }
    }

    #[test]
    fn point_in_p2() {
        let atlas = projective_atlas(2);
        let input = SubschemeInput::Charts(vec![(
            2,
            atlas.parse_chart(2, "x0").unwrap(),
            atlas.parse_chart(2, "x1").unwrap(),
        )]);
        let sub = extend_off_y(&atlas, &load_subscheme(&atlas, &input).unwrap()).unwrap();
        check_eq6(&sub);
        assert_eq!(sub.glue(0, 1).a, MatrixL::identity(2, 3));
        assert_eq!(sub.glue(0, 2).case, GlueCase::FirstOff);
        assert_eq!(sub.glue(1, 2).a.det().unwrap(), LocElem::one(3));
    }

    #[test]
    fn skew_lines_use_disjoint_rule() {
        let atlas = projective_atlas(3);
        let c = |k: usize, a: &str, b: &str| (k, atlas.parse_chart(k, a).unwrap(), atlas.parse_chart(k, b).unwrap());
        let input = SubschemeInput::Charts(vec![
            c(0, "x2", "x3"),
            c(1, "x2", "x3"),
            c(2, "x0", "x1"),
            c(3, "x0", "x1"),
        ]);
        let sub = extend_off_y(&atlas, &load_subscheme(&atlas, &input).unwrap()).unwrap();
        check_eq6(&sub);
        assert_eq!(sub.glue(0, 1).case, GlueCase::Lifted);
        assert_eq!(sub.glue(0, 2).case, GlueCase::Disjoint);
        assert_eq!(sub.glue(2, 3).case, GlueCase::Lifted);
    }

    #[test]
    fn degenerate_pair_rejected() {
        let atlas = projective_atlas(2);
        let f = atlas.parse_chart(2, "x0").unwrap();
        let input = SubschemeInput::Charts(vec![(2, f.clone(), f)]);
        assert_eq!(load_subscheme(&atlas, &input).unwrap_err(), Error::NotCodimTwo { chart: 2 });
    }

    #[test]
    fn affine_single_chart() {
        let atlas = super::super::Atlas::new(alloc::sync::Arc::new(super::super::AffineCover::new(2)));
        let input = SubschemeInput::GlobalCi { f: parse_poly("x0", 2).unwrap(), g: parse_poly("x1", 2).unwrap() };
        let sub = extend_off_y(&atlas, &load_subscheme(&atlas, &input).unwrap()).unwrap();
        assert!(sub.pairs[0].on_y);
        assert!(sub.glue.is_empty());
    }
}

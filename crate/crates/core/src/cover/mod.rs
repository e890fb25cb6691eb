//! Standard affine covers, line bundles and the subscheme/section data
//! attached to each chart.

mod sections;
mod subscheme;

pub use sections::{load_sections, SectionData, UnitTier};
pub use subscheme::{extend_off_y, load_subscheme, ChartPair, GlueCase, GlueData, SubschemeData, SubschemeInput};

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{LocElem, Poly};
use crate::error::Error;
use crate::ideals::LocalRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmbientKind {
    Projective,
    Affine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmbientSpec {
    pub kind: AmbientKind,
    pub dim: usize,
}

/// An affine open cover with a fixed coordinate system. Elements on every
/// chart and overlap are stored in one global representation; charts
/// differ only in which polynomials are invertible.
pub trait Cover: Send + Sync + core::fmt::Debug {
    fn ambient(&self) -> AmbientSpec;

    /// Variables of the global representation.
    fn nvars(&self) -> usize;

    fn num_charts(&self) -> usize;

    /// Coordinate ring of the intersection of the charts in `tuple`
    /// (sorted, nonempty), before any extra localization.
    fn ring(&self, tuple: &[usize]) -> LocalRing;

    /// Converts an element written in the chart's own coordinates to the
    /// global representation.
    fn from_chart(&self, chart: usize, e: &LocElem) -> LocElem;

    /// Writes a global element in the coordinates of `chart`.
    fn to_chart(&self, chart: usize, e: &LocElem) -> LocElem;

    /// Whether the intersection of the charts is nonempty.
    fn meets(&self, tuple: &[usize]) -> bool {
        let _ = tuple;
        true
    }
}

/// `U_i = {x_i != 0}` on `P^n`; the global representation is degree-zero
/// rational functions in `x0..xn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectiveCover {
    n: usize,
}

impl ProjectiveCover {
    pub fn new(n: usize) -> Self {
        ProjectiveCover { n }
    }
}

impl Cover for ProjectiveCover {
    fn ambient(&self) -> AmbientSpec {
        AmbientSpec { kind: AmbientKind::Projective, dim: self.n }
    }

    fn nvars(&self) -> usize {
        self.n + 1
    }

    fn num_charts(&self) -> usize {
        self.n + 1
    }

    fn ring(&self, tuple: &[usize]) -> LocalRing {
        let nv = self.nvars();
        LocalRing::projective(nv, tuple[0], tuple.iter().map(|&k| Poly::var(nv, k)))
    }

    fn from_chart(&self, chart: usize, e: &LocElem) -> LocElem {
        homogenize_at(e, chart)
    }

    fn to_chart(&self, chart: usize, e: &LocElem) -> LocElem {
        dehomogenize_at(e, chart)
    }
}

/// `A^n` as a single chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineCover {
    n: usize,
}

impl AffineCover {
    pub fn new(n: usize) -> Self {
        AffineCover { n }
    }
}

impl Cover for AffineCover {
    fn ambient(&self) -> AmbientSpec {
        AmbientSpec { kind: AmbientKind::Affine, dim: self.n }
    }

    fn nvars(&self) -> usize {
        self.n
    }

    fn num_charts(&self) -> usize {
        1
    }

    fn ring(&self, _tuple: &[usize]) -> LocalRing {
        LocalRing::affine(self.n, [])
    }

    fn from_chart(&self, _chart: usize, e: &LocElem) -> LocElem {
        e.clone()
    }

    fn to_chart(&self, _chart: usize, e: &LocElem) -> LocElem {
        e.clone()
    }
}

/// Degree-zero form of a chart-`k` expression: `x_k` is set to one first,
/// then every factor is homogenized with the matching power of `x_k`.
pub fn homogenize_at(e: &LocElem, k: usize) -> LocElem {
    let nv = e.nvars();
    let xk = Poly::var(nv, k);
    let (num, dn) = e.num().set_var_one(k).homogenize(k);
    let mut shift = -(dn as i64);
    let mut den = Vec::new();
    for (u, &m) in e.den() {
        let u1 = u.set_var_one(k);
        if u1.is_constant() {
            den.push((u1, m));
            continue;
        }
        let (hu, du) = u1.homogenize(k);
        shift += du as i64 * m as i64;
        den.push((hu, m));
    }
    let out = LocElem::new(num, den);
    if shift >= 0 {
        out.mul_poly(&xk.pow(shift as u32))
    } else {
        out.div_unit(&xk, (-shift) as u32)
    }
}

/// Substitutes `x_k = 1` in numerator and denominator.
pub fn dehomogenize_at(e: &LocElem, k: usize) -> LocElem {
    LocElem::new(e.num().set_var_one(k), e.den().iter().map(|(u, &m)| (u.set_var_one(k), m)))
}

/// Builds the standard cover of an ambient space.
pub fn standard_cover(ambient: AmbientSpec) -> Result<Arc<dyn Cover>, Error> {
    if ambient.dim < 2 {
        return Err(Error::InvalidAmbient(format!("dimension {} < 2", ambient.dim)));
    }
    Ok(match ambient.kind {
        AmbientKind::Projective => Arc::new(ProjectiveCover::new(ambient.dim)),
        AmbientKind::Affine => Arc::new(AffineCover::new(ambient.dim)),
    })
}

/// Sorted `size`-element subsets of `0..n`, in lexicographic order.
pub fn tuples(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(k + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// A cover plus the extra units designated on each chart and the lift
/// order used by every ideal computation.
#[derive(Clone, Debug)]
pub struct Atlas {
    cover: Arc<dyn Cover>,
    chart_units: Vec<Vec<Poly>>,
    reversed: bool,
}

impl Atlas {
    pub fn new(cover: Arc<dyn Cover>) -> Self {
        let n = cover.num_charts();
        Atlas { cover, chart_units: (0..n).map(|_| Vec::new()).collect(), reversed: false }
    }

    pub fn with_reversed_generators(mut self, on: bool) -> Self {
        self.reversed = on;
        self
    }

    pub fn reversed_generators(&self) -> bool {
        self.reversed
    }

    pub fn cover(&self) -> &dyn Cover {
        &*self.cover
    }

    pub fn cover_arc(&self) -> Arc<dyn Cover> {
        self.cover.clone()
    }

    pub fn nvars(&self) -> usize {
        self.cover.nvars()
    }

    pub fn num_charts(&self) -> usize {
        self.cover.num_charts()
    }

    pub fn chart_units(&self, chart: usize) -> &[Poly] {
        &self.chart_units[chart]
    }

    pub fn add_chart_unit(&mut self, chart: usize, u: Poly) {
        if !self.chart_units[chart].contains(&u) {
            self.chart_units[chart].push(u);
        }
    }

    /// Localized ring of the intersection of `tuple` (any order).
    pub fn ring(&self, tuple: &[usize]) -> LocalRing {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut r = self.cover.ring(&sorted);
        for &c in &sorted {
            for u in &self.chart_units[c] {
                r.add_unit(u.clone());
            }
        }
        r.with_reversed_generators(self.reversed)
    }

    /// Sorted tuples of `size` charts with nonempty intersection.
    pub fn overlaps(&self, size: usize) -> Vec<Vec<usize>> {
        tuples(self.num_charts(), size).into_iter().filter(|t| self.cover.meets(t)).collect()
    }

    /// Re-expresses a chart-`from` expression in the coordinates of chart
    /// `to`, checking that the result lives on the overlap.
    pub fn transport(&self, e: &LocElem, from: usize, to: usize) -> Result<LocElem, Error> {
        let global = self.cover.from_chart(from, e);
        let ring = self.ring(&[from, to]);
        ring.to_ext(&global)?;
        Ok(self.cover.to_chart(to, &global))
    }

    /// Parses a polynomial string written in the coordinates of `chart`.
    pub fn parse_chart(&self, chart: usize, src: &str) -> Result<LocElem, Error> {
        let e = crate::algebra::parse_loc(src, self.nvars())?;
        Ok(self.cover.from_chart(chart, &e))
    }

    /// Prints a global element in the coordinates of `chart`.
    pub fn show(&self, chart: usize, e: &LocElem) -> String {
        use alloc::string::ToString;
        self.cover.to_chart(chart, e).to_string()
    }
}

/// Transition functions `h_ij` of `O(d)` on the cover.
#[derive(Clone, Debug)]
pub struct LineBundle {
    twist: i64,
    nvars: usize,
    projective: bool,
}

impl LineBundle {
    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// `h_ij = (x_j / x_i)^d`; constant one on affine space.
    pub fn h(&self, i: usize, j: usize) -> LocElem {
        if !self.projective || i == j || self.twist == 0 {
            return LocElem::one(self.nvars);
        }
        let mut exps = alloc::vec![0i64; self.nvars];
        exps[j] += self.twist;
        exps[i] -= self.twist;
        LocElem::laurent_monomial(&exps, crate::algebra::rat(1))
    }

    pub fn h_inv(&self, i: usize, j: usize) -> LocElem {
        self.h(j, i)
    }
}

/// `O(d)` on the cover; affine ambients only admit `d = 0`.
pub fn line_bundle(cover: &dyn Cover, twist: i64) -> Result<LineBundle, Error> {
    let amb = cover.ambient();
    if amb.kind == AmbientKind::Affine && twist != 0 {
        return Err(Error::NonzeroAffineTwist(twist));
    }
    Ok(LineBundle { twist, nvars: cover.nvars(), projective: amb.kind == AmbientKind::Projective })
}

/// Shorthand used by tests and the CLI.
pub fn projective_atlas(n: usize) -> Atlas {
    let cover: Arc<dyn Cover> = Arc::new(ProjectiveCover::new(n));
    Atlas::new(cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_loc;

    #[test]
    fn combinatorics() {
        let p2 = projective_atlas(2);
        assert_eq!(p2.num_charts(), 3);
        assert_eq!(p2.overlaps(2).len(), 3);
        assert_eq!(p2.overlaps(3).len(), 1);
        let p3 = projective_atlas(3);
        assert_eq!(
            (p3.num_charts(), p3.overlaps(2).len(), p3.overlaps(3).len(), p3.overlaps(4).len()),
            (4, 6, 4, 1)
        );
        let a2 = Atlas::new(standard_cover(AmbientSpec { kind: AmbientKind::Affine, dim: 2 }).unwrap());
        assert_eq!((a2.num_charts(), a2.overlaps(2).len()), (1, 0));
        assert!(standard_cover(AmbientSpec { kind: AmbientKind::Projective, dim: 1 }).is_err());
    }

    #[test]
    fn transport_on_line() {
        let p1 = Atlas::new(Arc::new(ProjectiveCover::new(1)));
        let t = parse_loc("x1", 2).unwrap();
        let s_inv = p1.transport(&t, 0, 1).unwrap();
        assert_eq!(s_inv, parse_loc("1/x0", 2).unwrap());
        assert_eq!(&s_inv * &parse_loc("x0", 2).unwrap(), LocElem::one(2));
        assert_eq!(p1.transport(&s_inv, 1, 0).unwrap(), t);
        let five = LocElem::int(2, 5);
        assert_eq!(p1.transport(&five, 0, 1).unwrap(), five);
        assert!(p1.transport(&LocElem::zero(2), 0, 1).unwrap().is_zero());
    }

    #[test]
    fn line_bundle_cocycle() {
        let cover = ProjectiveCover::new(3);
        let l = line_bundle(&cover, 2).unwrap();
        assert_eq!(l.h(2, 3), parse_loc("x3^2/x2^2", 4).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(&l.h(i, j) * &l.h(j, i), LocElem::one(4));
                for k in 0..4 {
                    assert_eq!(&l.h(i, j) * &l.h(j, k), l.h(i, k));
                }
            }
        }
        let zero = line_bundle(&cover, 0).unwrap();
        assert_eq!(zero.h(0, 1), LocElem::one(4));
        assert_eq!(line_bundle(&AffineCover::new(2), 1).unwrap_err(), Error::NonzeroAffineTwist(1));
    }

    #[test]
    fn chart_coordinates() {
        let p2 = projective_atlas(2);
        let e = p2.parse_chart(2, "x0 + x1^2").unwrap();
        assert_eq!(e, parse_loc("x0/x2 + x1^2/x2^2", 3).unwrap());
        assert_eq!(p2.show(2, &e), "x1^2 + x0");
    }
}

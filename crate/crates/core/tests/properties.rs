use proptest::prelude::*;

use serre_core::algebra::{rat, LocElem, MatrixL, Monomial, Poly};
use serre_core::cech::{cohomology_dim, CechCochain, CechComplex, SolveOptions};
use serre_core::cover::{line_bundle, projective_atlas, tuples, SectionData, UnitTier};
use serre_core::ideals::{koszul_divide, lift_pair, LocalRing};
use serre_core::serre::tprime_apply_inverse;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 100, ..ProptestConfig::default() }
}

/// A degree-zero function on the overlap `tuple` of P^n: a sum of Laurent
/// monomials whose negative exponents sit on the tuple's coordinates.
fn value_on(nv: usize, tuple: &[usize], terms: &[(Vec<i64>, i64)]) -> LocElem {
    let last = *tuple.last().unwrap();
    let mut out = LocElem::zero(nv);
    for (raw, c) in terms {
        let mut e: Vec<i64> = raw.iter().enumerate().map(|(k, &a)| if tuple.contains(&k) { a } else { a.abs() }).collect();
        let deg: i64 = e.iter().sum();
        e[last] -= deg;
        out = &out + &LocElem::laurent_monomial(&e, rat(*c));
    }
    out
}

fn terms(nv: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-4i64..=4, nv), -5i64..=5), 0..3)
}

/// Random values for every tuple of a degree-`p` cochain on P^n.
fn cochain(n: usize, p: usize, mult: usize) -> impl Strategy<Value = CechCochain> {
    let nv = n + 1;
    let ts = tuples(nv, p + 1);
    let count = ts.len() * mult;
    prop::collection::vec(terms(nv), count).prop_map(move |raw| {
        let entries = ts.iter().enumerate().map(|(a, t)| {
            let vals = (0..mult).map(|b| value_on(nv, t, &raw[a * mult + b])).collect();
            (t.clone(), vals)
        });
        CechCochain::from_values(p, mult, nv, entries).unwrap()
    })
}

fn delta_squared_vanishes(n: usize, twist: i64, c: &CechCochain) {
    let atlas = projective_atlas(n);
    let line = line_bundle(atlas.cover(), twist).unwrap();
    let cx = CechComplex::new(&atlas, &line);
    assert!(cx.differential(&cx.differential(c)).is_zero());
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn delta_squared_degree_zero(c in cochain(2, 0, 2), d in -3i64..=3) {
        delta_squared_vanishes(2, d, &c);
    }

    #[test]
    fn delta_squared_degree_one(c in cochain(2, 1, 1), d in -3i64..=3) {
        delta_squared_vanishes(2, d, &c);
    }

    #[test]
    fn delta_squared_degree_two(c in cochain(3, 2, 1), d in -3i64..=3) {
        delta_squared_vanishes(3, d, &c);
    }

    #[test]
    fn coboundaries_are_solved(x in cochain(2, 1, 1), d in -4i64..=4) {
        let atlas = projective_atlas(2);
        let line = line_bundle(atlas.cover(), d).unwrap();
        let cx = CechComplex::new(&atlas, &line);
        let c = cx.differential(&x);
        let sol = cx.coboundary_solve(&c, &SolveOptions::default()).unwrap();
        prop_assert!(cx.differential(&sol) == c);
    }

    #[test]
    fn one_cochain_coboundaries_are_solved(y in cochain(3, 0, 2), d in -2i64..=2) {
        let atlas = projective_atlas(3);
        let line = line_bundle(atlas.cover(), d).unwrap();
        let cx = CechComplex::new(&atlas, &line);
        let c = cx.differential(&y);
        let sol = cx.coboundary_solve(&c, &SolveOptions::default()).unwrap();
        prop_assert!(cx.differential(&sol) == c);
    }
}

fn poly(nv: usize, terms: &[(Vec<u32>, i64)]) -> Poly {
    Poly::from_terms(nv, terms.iter().map(|(e, c)| (Monomial::from_exps(e.clone()), rat(*c))))
}

/// `sum c_k x1^k` in two variables.
fn in_x1(coeffs: &[i64]) -> Poly {
    let t: Vec<(Vec<u32>, i64)> = coeffs.iter().enumerate().map(|(k, &c)| (vec![0, k as u32], c)).collect();
    poly(2, &t)
}

fn poly_strategy(nv: usize, max_exp: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nv), -6i64..=6), 0..4)
        .prop_map(move |t| poly(nv, &t))
}

/// `T'` written out entrywise: the identity with column `t` replaced by
/// `-(-1)^t s` and a 1 in position `(t, t)`.
fn tprime_matrix(s: &[LocElem], t: usize) -> MatrixL {
    let nv = s[0].nvars();
    let n = s.len();
    let mut m = MatrixL::identity(n, nv);
    let sign = if t % 2 == 0 { LocElem::int(nv, -1) } else { LocElem::one(nv) };
    for (k, sk) in s.iter().enumerate() {
        if k + 1 != t {
            m.set(k, t - 1, &sign * sk);
        }
    }
    m
}

fn section_data(s: Vec<LocElem>, t: usize) -> SectionData {
    let nv = s[0].nvars();
    let rank = s.len() + 1;
    SectionData { rank, reps: vec![s], t: vec![t], tiers: vec![UnitTier::Constant], unit_inverse: vec![LocElem::one(nv)] }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn tprime_inverse_formula(
        len in 2usize..5,
        t_seed in 0usize..4,
        s in prop::collection::vec(poly_strategy(3, 2), 4),
        u in prop::collection::vec(poly_strategy(3, 2), 4),
    ) {
        let t = t_seed % len + 1;
        let mut s: Vec<LocElem> = s[..len].iter().cloned().map(LocElem::from_poly).collect();
        // normalized sections carry (-1)^t in the unit slot
        s[t - 1] = if t % 2 == 0 { LocElem::one(3) } else { LocElem::int(3, -1) };
        let u: Vec<LocElem> = u[..len].iter().cloned().map(LocElem::from_poly).collect();
        let sec = section_data(s.clone(), t);
        let v = tprime_apply_inverse(&sec, 0, &u);
        let back = tprime_matrix(&s, t).mul(&MatrixL::column(v, 3)).unwrap();
        prop_assert_eq!(back.col(0), u);
    }

    #[test]
    fn lift_pair_round_trip(a in poly_strategy(2, 3), b in poly_strategy(2, 3), q in prop::collection::vec(-4i64..=4, 0..4)) {
        let ring = LocalRing::affine(2, []);
        // x0 + q(x1) and x1^2 + 1 share no factor
        let f = LocElem::from_poly(&Poly::var(2, 0) + &in_x1(&q));
        let g = LocElem::from_poly(&Poly::var(2, 1).pow(2) + &Poly::one(2));
        let p = &(&LocElem::from_poly(a) * &f) + &(&LocElem::from_poly(b) * &g);
        let (a2, b2) = lift_pair(&ring, &p, &f, &g).unwrap();
        prop_assert_eq!(&(&a2 * &f) + &(&b2 * &g), p);
    }

    #[test]
    fn koszul_round_trip(w in poly_strategy(2, 3), q in prop::collection::vec(-4i64..=4, 0..3)) {
        let ring = LocalRing::affine(2, [Poly::var(2, 1) + Poly::int(2, 2)]);
        let f = LocElem::from_poly(&Poly::var(2, 0) + &in_x1(&q));
        let g = LocElem::from_poly(Poly::var(2, 1).pow(3));
        let w = LocElem::from_poly(w);
        let got = koszul_divide(&ring, &(&w * &g), &(&w * &f), &f, &g).unwrap();
        prop_assert_eq!(got, w);
    }
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[test]
fn cohomology_matches_closed_form() {
    for n in 1..=3usize {
        for m in -6i64..=6 {
            for q in 0..=n {
                let ni = n as i64;
                let expected = match q {
                    0 => binomial(m + ni, ni),
                    q if q == n => binomial(-m - 1, ni),
                    _ => 0,
                };
                assert_eq!(cohomology_dim(n, m, q), expected, "n={} m={} q={}", n, m, q);
            }
        }
    }
}

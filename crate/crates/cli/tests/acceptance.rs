//! End-to-end acceptance run: one line per criterion, pass or fail, with
//! its runtime against the limit.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;
use serre_core::algebra::{parse_loc, rat, LocElem, MatrixL, Monomial, Poly};
use serre_core::cech::{CechCochain, CechComplex, SolveOptions};
use serre_core::cover::{line_bundle, projective_atlas, tuples, SectionData, UnitTier};
use serre_core::ideals::{koszul_divide, lift_pair, LocalRing};
use serre_core::serre::tprime_apply_inverse;

type Outcome = Result<String, String>;

fn inputs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("inputs")
}

struct Run {
    code: i32,
    stdout: String,
}

fn serre(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_serre")).args(args).output().expect("serre runs");
    Run { code: out.status.code().unwrap_or(-1), stdout: String::from_utf8(out.stdout).unwrap() }
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn json(s: &str) -> Result<Value, String> {
    serde_json::from_str(s).map_err(|e| format!("bad json: {}", e))
}

struct Workdir(tempfile::TempDir);

impl Workdir {
    fn new() -> Self {
        Workdir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).display().to_string()
    }

    /// Builds `input` into `name`; returns the exit code.
    fn build(&self, input: &str, name: &str) -> i32 {
        serre(&["build", input, "-o", &self.path(name)]).code
    }

    fn read(&self, name: &str) -> Result<Value, String> {
        json(&std::fs::read_to_string(self.path(name)).map_err(|e| e.to_string())?)
    }

    fn write(&self, name: &str, v: &Value) -> String {
        let p = self.path(name);
        std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
        p
    }
}

fn input(name: &str) -> String {
    inputs().join(name).display().to_string()
}

fn matrix(v: &Value, nv: usize) -> Result<MatrixL, String> {
    let rows = v
        .as_array()
        .ok_or("matrix is not an array")?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or("row is not an array")?
                .iter()
                .map(|e| parse_loc(e.as_str().ok_or("entry is not a string")?, nv).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, String>>()
        })
        .collect::<Result<Vec<_>, String>>()?;
    MatrixL::from_rows(nv, rows).map_err(|e| e.to_string())
}

fn all_checks_pass(doc: &Value) -> Result<usize, String> {
    let checks = doc["verification"]["checks"].as_array().ok_or("no checks")?;
    let failed: Vec<&str> =
        checks.iter().filter(|c| c["passed"] != Value::Bool(true)).map(|c| c["name"].as_str().unwrap()).collect();
    ensure(failed.is_empty(), format!("failed checks: {:?}", failed))?;
    Ok(checks.len())
}

fn checks_named<'a>(doc: &'a Value, name: &str) -> Vec<&'a Value> {
    doc["verification"]["checks"].as_array().unwrap().iter().filter(|c| c["name"] == name).collect()
}

fn require_checks(doc: &Value, names: &[&str]) -> Result<(), String> {
    for n in names {
        let found = checks_named(doc, n);
        ensure(!found.is_empty(), format!("no {} checks", n))?;
        ensure(found.iter().all(|c| c["passed"] == Value::Bool(true)), format!("{} failed", n))?;
    }
    Ok(())
}

fn split_line() -> Outcome {
    let w = Workdir::new();
    ensure(w.build(&input("line.json"), "a.json") == 0, "build did not exit 0")?;
    let mut doc = w.read("a.json")?;
    // O(1)+O(1) is scalar x_j/x_i in the standard frame; G_i moves the
    // standard frame onto the one the chart's section matrix singles out
    let g = [
        [["1", "0"], ["x1/x0", "1"]],
        [["0", "-1"], ["1", "x0/x1"]],
        [["1", "0"], ["0", "1"]],
        [["1", "0"], ["0", "1"]],
    ];
    let gm: Vec<MatrixL> = g
        .iter()
        .map(|m| matrix(&serde_json::to_value(m).unwrap(), 4))
        .collect::<Result<_, _>>()?;
    let mut overlaps = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let s = parse_loc(&format!("x{}/x{}", j, i), 4).unwrap();
            let z = gm[i].scale(&s).mul(&gm[j].adjugate().unwrap()).unwrap();
            let rows: Vec<Vec<String>> = z.to_rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
            overlaps.push(serde_json::json!({"i": i, "j": j, "z": rows}));
        }
    }
    doc["transitions"] = serde_json::json!({"status": "corrected", "overlaps": overlaps});
    let b = w.write("hand.json", &doc);
    let run = serre(&["compare", &w.path("a.json"), &b]);
    ensure(run.code == 0, format!("compare exited {}", run.code))?;
    let iso = json(&run.stdout)?;
    for n in iso["n"].as_array().ok_or("no N")? {
        let det = matrix(&n["matrix"], 4)?.det().unwrap();
        ensure(det == LocElem::one(4), format!("det N_{} = {}", n["chart"], det))?;
    }
    Ok(String::from("hand-derived O(1)+O(1) transitions isomorphic, det N_i = 1 on 4 charts"))
}

fn off_y_point() -> Outcome {
    let w = Workdir::new();
    ensure(w.build(&input("point.json"), "p.json") == 0, "build did not exit 0")?;
    let doc = w.read("p.json")?;
    let n = all_checks_pass(&doc)?;
    require_checks(&doc, &["gluing[both_off]", "gluing[first_off]", "gluing_determinant"])?;
    let cases: Vec<&str> = doc["gluing"].as_array().unwrap().iter().map(|g| g["case"].as_str().unwrap()).collect();
    ensure(cases == ["both_off", "first_off", "first_off"], format!("gluing cases {:?}", cases))?;
    let verify = serre(&["verify", &w.path("p.json")]);
    ensure(verify.code == 0, "verify did not exit 0")?;
    Ok(format!("{} checks pass, gluing cases {:?}", n, cases))
}

fn cohomology(n: usize, m: i64, q: usize) -> Result<u64, String> {
    let run = serre(&["cohomology", "--ambient", &format!("P{}", n), "--twist", &m.to_string(), "--degree", &q.to_string()]);
    ensure(run.code == 0, "cohomology failed")?;
    json(&run.stdout)?["dimension"].as_u64().ok_or_else(|| String::from("no dimension"))
}

fn skew_lines() -> Outcome {
    let w = Workdir::new();
    ensure(w.build(&input("skew_lines.json"), "s.json") == 0, "build did not exit 0")?;
    let doc = w.read("s.json")?;
    all_checks_pass(&doc)?;
    ensure(cohomology(3, -2, 2)? == 0, "H^2(P3, O(-2)) != 0")?;
    ensure(cohomology(3, -2, 1)? == 0, "H^1(P3, O(-2)) != 0")?;
    let mut z = std::collections::BTreeMap::new();
    for o in doc["transitions"]["overlaps"].as_array().unwrap() {
        z.insert((o["i"].as_u64().unwrap(), o["j"].as_u64().unwrap()), matrix(&o["z"], 4)?);
    }
    let mut triples = 0;
    for t in tuples(4, 3) {
        let (i, j, k) = (t[0] as u64, t[1] as u64, t[2] as u64);
        let prod = z[&(i, j)].mul(&z[&(j, k)]).unwrap();
        ensure(z[&(i, k)] == prod, format!("Z_{}{} != Z_{}{} Z_{}{}", i, k, i, j, j, k))?;
        triples += 1;
    }
    ensure(triples == 4, "expected 4 triples")?;
    let raw_differs = doc["raw"]["overlaps"] != doc["transitions"]["overlaps"];
    Ok(format!("H^1 = H^2 = 0, cocycle exact on {} triples (correction applied: {})", triples, raw_differs))
}

fn two_points() -> Outcome {
    let w = Workdir::new();
    ensure(w.build(&input("two_points.json"), "t.json") == 0, "build did not exit 0")?;
    let doc = w.read("t.json")?;
    let n = all_checks_pass(&doc)?;
    let t: Vec<u64> = doc["charts"].as_array().unwrap().iter().map(|c| c["t"].as_u64().unwrap()).collect();
    ensure(t == [1, 2, 1], format!("t = {:?}", t))?;
    require_checks(
        &doc,
        &[
            "upper_times_deletion_is_identity",
            "lower_times_deletion_is_zero",
            "upper_kills_sections",
            "lower_on_sections",
            "annihilator_s",
            "block_r_selector",
            "annihilator_z",
            "annihilator_defect",
            "defect_shape",
        ],
    )?;
    Ok(format!("t = {:?}, {} checks pass", t, n))
}

/// Rank over Q of a small integer matrix.
fn rank(mut m: Vec<Vec<i128>>) -> usize {
    let mut r = 0;
    let cols = m.first().map_or(0, |row| row.len());
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for k in 0..cols {
                    m[i][k] = m[i][k] * a - m[r][k] * b;
                }
            }
        }
        r += 1;
    }
    r
}

/// `h^q` of the Čech complex of one Laurent monomial whose negative
/// exponents are `neg`: cochains on subsets of `{0..n}` containing `neg`.
fn monomial_cohomology(n: usize, neg: u32, q: usize) -> u64 {
    let subsets = |p: usize| -> Vec<u32> {
        (0u32..1 << (n + 1)).filter(|s| s.count_ones() as usize == p + 1 && s & neg == neg).collect()
    };
    let delta = |p: usize| -> Vec<Vec<i128>> {
        let (src, dst) = (subsets(p), subsets(p + 1));
        dst.iter()
            .map(|&t| {
                src.iter()
                    .map(|&s| {
                        if s & t != s {
                            return 0;
                        }
                        let missing = (t & !s).trailing_zeros();
                        if (t & ((1 << missing) - 1)).count_ones() % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let dim = subsets(q).len();
    let out = if q < n { rank(delta(q)) } else { 0 };
    let inc = if q > 0 { rank(delta(q - 1)) } else { 0 };
    (dim - out - inc) as u64
}

fn brute_force(n: usize, m: i64, q: usize) -> u64 {
    let bound = m.abs() + n as i64 + 1;
    let mut total = 0;
    let mut exps = vec![-bound; n];
    loop {
        let last = m - exps.iter().sum::<i64>();
        let mut neg = 0u32;
        for (k, &e) in exps.iter().chain(std::iter::once(&last)).enumerate() {
            if e < 0 {
                neg |= 1 << k;
            }
        }
        total += monomial_cohomology(n, neg, q);
        let Some(k) = (0..n).find(|&k| exps[k] < bound) else { break };
        exps[k] += 1;
        for e in &mut exps[..k] {
            *e = -bound;
        }
    }
    total
}

fn cech_oracle() -> Outcome {
    let mut cells = 0;
    for n in 1..=3usize {
        for m in -6i64..=6 {
            for q in 0..=n {
                let got = cohomology(n, m, q)?;
                let want = brute_force(n, m, q);
                ensure(got == want, format!("h^{}(P{}, O({})) = {}, enumeration says {}", q, n, m, got, want))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{} cells agree", cells))
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn laurent_value(nv: usize, tuple: &[usize], terms: &[(Vec<i64>, i64)]) -> LocElem {
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

fn cochains(n: usize, p: usize) -> impl Strategy<Value = CechCochain> {
    let nv = n + 1;
    let ts = tuples(nv, p + 1);
    let term = (prop::collection::vec(-4i64..=4, nv), -5i64..=5);
    prop::collection::vec(prop::collection::vec(term, 0..3), ts.len()).prop_map(move |raw| {
        let entries = ts.iter().zip(&raw).map(|(t, r)| (t.clone(), vec![laurent_value(nv, t, r)]));
        CechCochain::from_values(p, 1, nv, entries).unwrap()
    })
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn obstruction_detection() -> Outcome {
    let run = serre(&["build", &input("point_cubic.json"), "--replay-cochain", &input("top_class.json")]);
    ensure(run.code == 2, format!("replay exited {}", run.code))?;
    let doc = json(&run.stdout)?;
    ensure(doc["status"] == "obstructed", "status is not obstructed")?;
    ensure(doc["class"][0]["exponents"] == serde_json::json!([-1, -1, -1]), "wrong class")?;
    let atlas = projective_atlas(2);
    let line = line_bundle(atlas.cover(), 3).unwrap();
    let cx = CechComplex::new(&atlas, &line);
    run_property(100, cochains(2, 1), |x| {
        let c = cx.differential(&x);
        let sol = cx.coboundary_solve(&c, &SolveOptions::default()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(cx.differential(&sol) == c);
        Ok(())
    })?;
    Ok(String::from("x0^-1 x1^-1 x2^-1 obstructed (exit 2); 100 random coboundaries solved exactly"))
}

fn poly_in(nv: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, nv), -6i64..=6), 0..4).prop_map(move |t| {
        Poly::from_terms(nv, t.into_iter().map(|(e, c)| (Monomial::from_exps(e), rat(c))))
    })
}

fn in_x1(coeffs: &[i64]) -> Poly {
    Poly::from_terms(2, coeffs.iter().enumerate().map(|(k, &c)| (Monomial::from_exps(vec![0, k as u32]), rat(c))))
}

fn property_suites() -> Outcome {
    let tprime = (2usize..5, 0usize..4, prop::collection::vec(poly_in(3), 4), prop::collection::vec(poly_in(3), 4));
    run_property(100, tprime, |(len, seed, s, u)| {
        let t = seed % len + 1;
        let mut s: Vec<LocElem> = s[..len].iter().cloned().map(LocElem::from_poly).collect();
        s[t - 1] = if t % 2 == 0 { LocElem::one(3) } else { LocElem::int(3, -1) };
        let u: Vec<LocElem> = u[..len].iter().cloned().map(LocElem::from_poly).collect();
        let sec = SectionData {
            rank: len + 1,
            reps: vec![s.clone()],
            t: vec![t],
            tiers: vec![UnitTier::Constant],
            unit_inverse: vec![LocElem::one(3)],
        };
        let v = tprime_apply_inverse(&sec, 0, &u);
        let mut tp = MatrixL::identity(len, 3);
        let sign = if t % 2 == 0 { LocElem::int(3, -1) } else { LocElem::one(3) };
        for (k, sk) in s.iter().enumerate().filter(|(k, _)| k + 1 != t) {
            tp.set(k, t - 1, &sign * sk);
        }
        prop_assert_eq!(tp.mul(&MatrixL::column(v, 3)).unwrap().col(0), u);
        Ok(())
    })?;
    for (n, p) in [(2, 0), (2, 1), (3, 2)] {
        let atlas = projective_atlas(n);
        let line = line_bundle(atlas.cover(), 2).unwrap();
        let cx = CechComplex::new(&atlas, &line);
        run_property(100, cochains(n, p), |c| {
            prop_assert!(cx.differential(&cx.differential(&c)).is_zero());
            Ok(())
        })?;
    }
    let plain = LocalRing::affine(2, []);
    let lifts = (poly_in(2), poly_in(2), prop::collection::vec(-4i64..=4, 0..4));
    run_property(100, lifts, |(a, b, q)| {
        let f = LocElem::from_poly(&Poly::var(2, 0) + &in_x1(&q));
        let g = LocElem::from_poly(&Poly::var(2, 1).pow(2) + &Poly::one(2));
        let p = &(&LocElem::from_poly(a) * &f) + &(&LocElem::from_poly(b) * &g);
        let (a2, b2) = lift_pair(&plain, &p, &f, &g).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&(&a2 * &f) + &(&b2 * &g), p);
        Ok(())
    })?;
    let local = LocalRing::affine(2, [Poly::var(2, 1) + Poly::int(2, 2)]);
    run_property(100, (poly_in(2), prop::collection::vec(-4i64..=4, 0..3)), |(w, q)| {
        let f = LocElem::from_poly(&Poly::var(2, 0) + &in_x1(&q));
        let g = LocElem::from_poly(Poly::var(2, 1).pow(3));
        let w = LocElem::from_poly(w);
        let got = koszul_divide(&local, &(&w * &g), &(&w * &f), &f, &g).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(got, w);
        Ok(())
    })?;
    let w = Workdir::new();
    ensure(w.build(&input("line.json"), "l.json") == 0, "build did not exit 0")?;
    let run = serre(&["compare", &w.path("l.json"), &w.path("l.json")]);
    ensure(run.code == 0, "self compare failed")?;
    let iso = json(&run.stdout)?;
    for n in iso["n"].as_array().unwrap() {
        ensure(matrix(&n["matrix"], 4)? == MatrixL::identity(2, 4), "self compare is not the identity")?;
    }
    Ok(String::from("T' inverse, delta^2 = 0 (p = 0, 1, 2), lift_pair, koszul_divide: 100 cases each; self compare = I"))
}

fn lift_independence() -> Outcome {
    let w = Workdir::new();
    ensure(w.build(&input("line.json"), "a.json") == 0, "build did not exit 0")?;
    let mut permuted = json(&std::fs::read_to_string(input("line.json")).unwrap())?;
    permuted["options"] = serde_json::json!({"permute_generators": true});
    let p = w.write("permuted_input.json", &permuted);
    ensure(w.build(&p, "b.json") == 0, "permuted build did not exit 0")?;
    let (a, b) = (w.read("a.json")?, w.read("b.json")?);
    let run = serre(&["compare", &w.path("a.json"), &w.path("b.json")]);
    ensure(run.code == 0, format!("compare exited {}", run.code))?;
    let differ = a["transitions"] != b["transitions"];
    Ok(format!("permuted generator order compared isomorphic (transitions differ: {})", differ))
}

fn report(n: usize, name: &str, limit: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let res = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match res {
        Ok(d) if elapsed < limit => (true, d),
        Ok(d) => (false, format!("{} but took {:.2?}", d, elapsed)),
        Err(e) => (false, e),
    };
    let line = format!(
        "criterion {} [{}]: {} in {:.2?} (limit {:?}): {}",
        n,
        name,
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit,
        detail
    );
    writeln!(std::io::stderr(), "{}", line).unwrap();
    ok
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("split oracle", s(10), split_line),
        ("off-Y machinery", s(10), off_y_point),
        ("non-split skew lines", s(60), skew_lines),
        ("heterogeneous t_i", s(60), two_points),
        ("cech oracle", s(30), cech_oracle),
        ("obstruction detection", s(10), obstruction_detection),
        ("property suites", s(60), property_suites),
        ("lift independence", s(30), lift_independence),
    ];
    let results: Vec<bool> =
        criteria.iter().enumerate().map(|(k, (name, limit, f))| report(k + 1, name, *limit, *f)).collect();
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(k, _)| k + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}

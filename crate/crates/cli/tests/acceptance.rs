//! The ten acceptance criteria, each checked exactly and reported on one line.

use std::cell::Cell;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use hgarith::catalog::{orthogonal_case, orthogonal_cyclic_gram, orthogonal_cyclic_vector, symplectic_case, symplectic_shift_partner};
use hgarith::cyclo::{poly_from_parameters, PairMatch, ParameterPair, ParameterTuple};
use hgarith::exact::{IntPolynomial, QMatrix, Rational};
use hgarith::group::{cyclic_basis_form, invariant_form_space, presentation_from_pair, solve_invariant_form};
use hgarith::slp::{evaluate_certificate, Certificate, Word};
use hgarith::standard::{apply_basis_change, is_standard_shape, Membership, MembershipFailure};

/// Collects the checks of one criterion and prints a single PASS/FAIL line
/// when dropped, also when a check panicked.
struct Criterion {
    number: u32,
    title: &'static str,
    failed: Vec<String>,
    checks: usize,
}

impl Criterion {
    fn new(number: u32, title: &'static str) -> Criterion {
        Criterion {
            number,
            title,
            failed: Vec::new(),
            checks: 0,
        }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failed.push(label.into());
        }
    }

    fn finish(&self) {
        assert!(self.failed.is_empty(), "criterion {} failed: {:?}", self.number, self.failed);
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        let verdict = if self.failed.is_empty() && !std::thread::panicking() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!("acceptance {:>2} {verdict}: {} ({} checks)", self.number, self.title, self.checks);
        if !self.failed.is_empty() {
            line += &format!("; failed: {}", self.failed.join("; "));
        }
        // Written past the test harness capture so the line always shows.
        let _ = writeln!(std::io::stderr(), "{line}");
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn hgarith(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgarith"))
        .args(args)
        .output()
        .expect("run hgarith")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[test]
fn criterion_01_presentations() {
    let mut c = Criterion::new(1, "A, B, C of both pairs equal the published matrices");
    for case in [symplectic_case(), orthogonal_case()] {
        let (pres, t) = timed(|| presentation_from_pair(&case.pair).unwrap());
        c.check(format!("{} A", case.pair), pres.a == case.a);
        c.check(format!("{} B", case.pair), pres.b == case.b);
        c.check(format!("{} C", case.pair), pres.c == case.c);
        c.check(format!("{} f, g", case.pair), pres.f == case.f && pres.g == case.g);
        c.check(format!("{} under 1 s ({t:?})", case.pair), t < Duration::from_secs(1));
    }
    c.finish();
}

#[test]
fn criterion_02_invariant_forms() {
    let mut c = Criterion::new(2, "invariant forms are unique up to scalar and match the published forms");
    for case in [symplectic_case(), orthogonal_case()] {
        let pres = presentation_from_pair(&case.pair).unwrap();
        let space = invariant_form_space(&[&pres.a, &pres.b], pres.form_kind());
        c.check(format!("{} solution space dimension 1", case.pair), space.len() == 1);
        let (form, t) = timed(|| solve_invariant_form(&pres).unwrap());
        c.check(format!("{} matches up to scalar", case.pair), form.projectively_equal(&case.form));
        c.check(format!("{} under 1 s ({t:?})", case.pair), t < Duration::from_secs(1));
    }
    let omega = solve_invariant_form(&presentation_from_pair(&symplectic_case().pair).unwrap()).unwrap();
    let scaled = omega.matrix.scale(&(Rational::from_integer(1.into()) / omega.matrix.get(0, 1)));
    let expected: Vec<Rational> = ["0", "1", "-2/3", "1/3"].iter().map(|s| s.parse().unwrap()).collect();
    c.check("first row (0, 1, -2/3, 1/3)", scaled.row(0) == expected.as_slice());
    let q = solve_invariant_form(&presentation_from_pair(&orthogonal_case().pair).unwrap()).unwrap();
    let factor = orthogonal_case().form.projective_factor(&q.matrix);
    let q11 = factor.map(|k| q.matrix.get(0, 0) * k);
    c.check("Q11 = -19/9", q11 == Some("-19/9".parse().unwrap()));
    c.finish();
}

#[test]
fn criterion_03_cyclic_basis() {
    let mut c = Criterion::new(3, "cyclic vector, Gram matrix and independence for the orthogonal pair");
    let pres = presentation_from_pair(&orthogonal_case().pair).unwrap();
    let form = solve_invariant_form(&pres).unwrap();
    match cyclic_basis_form(&pres, &form) {
        Ok(cb) => {
            c.check("v = (-4, 6, -4, 2, -2)", cb.vector == orthogonal_cyclic_vector());
            c.check("gram equals q up to scalar", cb.gram.projectively_equal(&orthogonal_cyclic_gram()));
            c.check("basis has full rank", cb.basis.rank() == 5);
        }
        Err(e) => c.check(format!("independence check: {e}"), false),
    }
    c.finish();
}

#[test]
fn criterion_04_standard_forms() {
    let mut c = Criterion::new(4, "the published basis changes give the published standard forms");
    for case in [symplectic_case(), orthogonal_case()] {
        let pres = presentation_from_pair(&case.pair).unwrap();
        let form = solve_invariant_form(&pres).unwrap();
        let target = apply_basis_change(&case.basis_change, &form).unwrap();
        c.check(
            format!("{} matches up to scalar", case.pair),
            target.projectively_equal(&case.standard_form),
        );
        c.check(format!("{} standard shape", case.pair), is_standard_shape(&target.matrix));
    }
    c.finish();
}

fn unit_diagonal(m: &QMatrix) -> bool {
    (0..m.dim()).all(|i| *m.get(i, i) == Rational::from_integer(1.into()))
}

#[test]
fn criterion_05_first_certificate() {
    let mut c = Criterion::new(5, "symplectic certificate verifies with the published entries");
    let path = fixture("symplectic.cert.json");
    let (out, t) = timed(|| hgarith(&["verify", path.to_str().unwrap()]));
    c.check(format!("exit code 0 (got {:?})", out.status.code()), out.status.code() == Some(0));
    c.check("CertificateValid", stdout(&out).contains("verdict: CertificateValid"));
    c.check(format!("under 5 s ({t:?})"), t < Duration::from_secs(5));
    let cert = Certificate::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let values = evaluate_certificate(&cert).unwrap();
    let (e7, e9) = (&values["E7"], &values["E9"]);
    c.check("E7 (1,4) = 1008", *e7.get(0, 3) == Rational::from_integer(1008.into()));
    c.check("E9 (1,3) = -3024", *e9.get(0, 2) == Rational::from_integer((-3024).into()));
    c.check("E9 (2,4) = -54", *e9.get(1, 3) == Rational::from_integer((-54).into()));
    c.check("unit diagonals", unit_diagonal(e7) && unit_diagonal(e9));
    c.finish();
}

#[test]
fn criterion_06_second_certificate() {
    let mut c = Criterion::new(6, "orthogonal certificate verifies with the published matrices");
    let path = fixture("orthogonal.cert.json");
    let (out, t) = timed(|| hgarith(&["verify", path.to_str().unwrap()]));
    c.check(format!("exit code 0 (got {:?})", out.status.code()), out.status.code() == Some(0));
    c.check("CertificateValid", stdout(&out).contains("verdict: CertificateValid"));
    c.check(format!("under 10 s ({t:?})"), t < Duration::from_secs(10));
    let cert = Certificate::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let values = evaluate_certificate(&cert).unwrap();
    for (name, published) in orthogonal_case().witnesses {
        c.check(format!("{name} as published"), values.get(name) == Some(&published));
    }
    c.finish();
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config::with_cases(cases), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

#[test]
fn criterion_07_properties() {
    let mut c = Criterion::new(7, "random words preserve forms, fixture unipotents, companion round trip");
    for case in [symplectic_case(), orthogonal_case()] {
        let pres = presentation_from_pair(&case.pair).unwrap();
        let form = solve_invariant_form(&pres).unwrap();
        let inverses = [pres.a.inverse().unwrap(), pres.b.inverse().unwrap()];
        let gens = [&pres.a, &inverses[0], &pres.b, &inverses[1]];
        let count = Cell::new(0);
        let words = prop::collection::vec(0usize..4, 0..=12);
        let result = runner(100).run(&words, |w| {
            count.set(count.get() + 1);
            let m = w.iter().fold(QMatrix::identity(pres.degree()), |acc, &l| &acc * gens[l]);
            prop_assert!(form.is_preserved_by(&m), "word {:?}", w);
            Ok(())
        });
        c.check(format!("{}: {} words preserve the form", case.pair, count.get()), result.is_ok() && count.get() == 100);
        let n = pres.degree();
        for (name, e) in &case.witnesses {
            let nil = e - &QMatrix::identity(n);
            c.check(format!("({name} - I)^{n} = 0"), nil.pow_unsigned(n as u64).is_zero());
        }
    }
    let count = Cell::new(0);
    let polys = prop::collection::vec(-10i64..=10, 0..=8);
    let result = runner(200).run(&polys, |mut coeffs| {
        count.set(count.get() + 1);
        coeffs.push(1);
        let f = IntPolynomial::from_i64(&coeffs);
        prop_assert_eq!(f.companion().char_poly().to_int(), Some(f));
        Ok(())
    });
    c.check(format!("{} companion round trips", count.get()), result.is_ok() && count.get() == 200);
    c.finish();
}

/// Unions of full Galois orbits `{k/m : gcd(k, m) = 1}`.
fn galois_tuple() -> impl Strategy<Value = ParameterTuple> {
    prop::collection::vec(1usize..=12, 1..=3).prop_map(|ms| {
        let entries = ms
            .iter()
            .flat_map(|&m| (0..m).filter(move |k| k.gcd(&m) == 1).map(move |k| Rational::new(k.into(), m.into())))
            .collect();
        ParameterTuple::new(entries)
    })
}

fn shift_output_pair(text: &str) -> Option<ParameterPair> {
    let field = |key: &str| text.lines().find_map(|l| l.strip_prefix(key)).map(str::trim);
    ParameterPair::parse(field("alpha:")?, field("beta:")?).ok()
}

#[test]
fn criterion_08_scalar_shift() {
    let mut c = Criterion::new(8, "half shift negates the argument; shift of the symplectic pair");
    let count = Cell::new(0);
    let half = Rational::new(1.into(), 2.into());
    let result = runner(50).run(&galois_tuple(), |t| {
        count.set(count.get() + 1);
        let f = poly_from_parameters(&t).unwrap();
        let shifted = poly_from_parameters(&t.shift(&half)).unwrap();
        let expected = if f.degree().is_multiple_of(2) { f.compose_neg() } else { f.compose_neg().neg() };
        prop_assert_eq!(shifted, expected);
        Ok(())
    });
    c.check(format!("{} tuples satisfy the identity", count.get()), result.is_ok() && count.get() == 50);
    let out = hgarith(&["shift", "0,0,1/3,2/3", "1/2,1/2,1/4,3/4", "1/2"]);
    c.check("shift exits 0", out.status.code() == Some(0));
    let relation = shift_output_pair(&stdout(&out)).map(|p| p.compare_unordered(&symplectic_shift_partner()));
    c.check(
        format!("shifted pair is the partner pair ({relation:?})"),
        matches!(relation, Some(PairMatch::Same | PairMatch::Swapped)),
    );
    c.finish();
}

#[test]
fn criterion_09_search() {
    let mut c = Criterion::new(9, "default search on the symplectic pair emits a verifying certificate");
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("found.cert.json");
    let basis = fixture("symplectic.basis.txt");
    let (out, t) = timed(|| {
        hgarith(&[
            "search",
            "0,0,1/3,2/3",
            "1/2,1/2,1/4,3/4",
            "--basis-change",
            basis.to_str().unwrap(),
            "--out",
            cert_path.to_str().unwrap(),
        ])
    });
    c.check(format!("search exits 0 (got {:?})", out.status.code()), out.status.code() == Some(0));
    c.check(format!("under 10 minutes ({t:?})"), t < Duration::from_secs(600));
    match std::fs::read_to_string(&cert_path).ok().and_then(|s| Certificate::parse(&s).ok()) {
        Some(cert) => {
            let roots: Vec<String> = cert.claims.iter().map(|cl| cl.root.to_string()).collect();
            c.check(format!("claims include chi1^2 ({roots:?})"), roots.iter().any(|r| r == "chi1^2"));
        }
        None => c.check("certificate file parses", false),
    }
    let verify = hgarith(&["verify", cert_path.to_str().unwrap()]);
    c.check("verify exits 0", verify.status.code() == Some(0));
    c.check("CertificateValid", stdout(&verify).contains("verdict: CertificateValid"));
    c.finish();
}

fn verify_tampered(c: &mut Criterion, label: &str, cert: &Certificate, dir: &std::path::Path) -> String {
    let path = dir.join(format!("{label}.cert.json"));
    std::fs::write(&path, cert.to_json()).unwrap();
    let out = hgarith(&["verify", path.to_str().unwrap()]);
    let text = stdout(&out);
    c.check(format!("{label}: exit code 1 (got {:?})", out.status.code()), out.status.code() == Some(1));
    c.check(format!("{label}: ClaimFailed"), text.contains("verdict: ClaimFailed"));
    text
}

/// The bundled certificate rebuilt with extra literal matrices.
fn with_literals(cert: &Certificate, literals: IndexMap<String, QMatrix>) -> Certificate {
    let mut out = Certificate::new(cert.parameters.clone(), cert.basis_change.clone(), literals);
    for (name, word) in cert.slp.definitions() {
        out.define(name, word.clone()).unwrap();
    }
    out
}

#[test]
fn criterion_10_tampered_certificates() {
    let mut c = Criterion::new(10, "tampered certificates are rejected with exit code 1");
    let dir = tempfile::tempdir().unwrap();
    let original = Certificate::parse(&std::fs::read_to_string(fixture("symplectic.cert.json")).unwrap()).unwrap();
    let values = evaluate_certificate(&original).unwrap();

    let mut renamed = original.clone();
    renamed.claims[0].name = "E1".into();
    let text = verify_tampered(&mut c, "wrong-target", &renamed, dir.path());
    c.check("wrong-target: E1 fails", text.contains("claim E1 in U_chi1^2: FAILED"));

    let mut broken = values["E9"].clone().rows();
    broken[1][3] += Rational::from_integer(1.into());
    let broken = QMatrix::from_rows(broken).unwrap();
    let mut literals = IndexMap::new();
    literals.insert("Broken".to_string(), broken);
    let mut coupling = with_literals(&original, literals);
    coupling.define("Coupled", Word::symbol("Broken")).unwrap();
    coupling.claim("E7", "chi1^2".parse().unwrap());
    coupling.claim("Coupled", "chi1*chi2".parse().unwrap());
    let text = verify_tampered(&mut c, "broken-coupling", &coupling, dir.path());
    let expected = Membership::NotMember(MembershipFailure::Coupling).to_string();
    c.check("broken-coupling: coupling violation reported", text.contains(&expected));

    let n = 4;
    let mut x = QMatrix::identity(n).rows();
    x[0][1] = Rational::from_integer(1.into());
    let x = QMatrix::from_rows(x).unwrap();
    let form = apply_basis_change(
        &original.basis_change.clone().unwrap(),
        &solve_invariant_form(&presentation_from_pair(&original.parameters).unwrap()).unwrap(),
    )
    .unwrap();
    c.check("injected matrix does not preserve the form", !form.is_preserved_by(&x));
    let mut literals = IndexMap::new();
    literals.insert("X".to_string(), x);
    let mut injected = with_literals(&original, literals);
    injected.define("Tampered", "X E7 X^-1".parse().unwrap()).unwrap();
    injected.claim("Tampered", "chi1^2".parse().unwrap());
    injected.claim("E9", "chi1*chi2".parse().unwrap());
    verify_tampered(&mut c, "injected-matrix", &injected, dir.path());
    c.finish();
}

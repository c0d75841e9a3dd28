//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use rittcalc::fcalc::{self, PolySpan};
use rittcalc::linalg;
use rittcalc::operators;
use rittcalc::profile;
use rittcalc::report::BoundReport;
use rittcalc::special;
use rittcalc::sqfe;
use rittcalc::suites::{self, SuiteParams};
use rittcalc::ComplexMatrix;

fn verdict(id: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {id:2} {name:<28} {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn assert_reports(id: usize, name: &str, reports: &[BoundReport]) {
    let failed: Vec<&BoundReport> = reports.iter().filter(|r| !r.pass).collect();
    let detail = if failed.is_empty() {
        format!("{} checks", reports.len())
    } else {
        format!(
            "{}/{} failed, first: {} lhs={} rhs={} [{}]",
            failed.len(),
            reports.len(),
            failed[0].name,
            failed[0].lhs,
            failed[0].rhs,
            failed[0].inputs
        )
    };
    verdict(id, name, failed.is_empty(), &detail);
}

fn rand_span(rng: &mut ChaCha8Rng, m: usize, n: usize) -> PolySpan {
    PolySpan::new(
        m,
        (m..=n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect(),
    )
}

#[test]
fn criterion_01_calculus_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let theta = PI / 4.0;
    let mut worst = 0.0f64;
    for trial in 0..50u64 {
        let dim = 2 + (rng.gen::<u32>() % 15) as usize; // 2..=16
        let op = operators::random_tr(dim, theta, 20.0, 1000 + trial).unwrap();
        let m = (rng.gen::<u32>() % 16) as usize;
        let n = m + (rng.gen::<u32>() as usize % (65 - m.min(64)));
        let n = n.min(64);
        let p = rand_span(&mut rng, m, n);
        let (eta, r) = fcalc::default_keyhole(theta, p.degree());
        let (val, _) = fcalc::riesz_dunford(&op.matrix, |z| p.eval(z), eta, r, 1e-9).unwrap();
        let oracle = p.apply(&op.matrix);
        let rel = val.sub(&oracle).max_abs() / oracle.max_abs().max(1e-300);
        worst = worst.max(rel);
    }
    verdict(
        1,
        "calculus_oracle",
        worst <= 1e-7,
        &format!("worst relative deviation {worst:.3e} over 50 pairs"),
    );
}

#[test]
fn criterion_02_lemma2_grid() {
    let reports = suites::lemma2_suite(1e-8).unwrap();
    assert_eq!(reports.len(), 6 * 4 * 5);
    assert_reports(2, "lemma2_grid", &reports);
}

#[test]
fn criterion_03_ei_sandwich() {
    let lo = 1e-4f64;
    let hi = 50.0f64;
    let mut ok = true;
    let mut detail = String::from("200-point log grid");
    for i in 0..200 {
        let s = lo * (hi / lo).powf(i as f64 / 199.0);
        let ei = special::exp_integral(s).unwrap();
        let lower = 0.5 * (-s).exp() * (1.0 + 2.0 / s).ln();
        let upper = (-s).exp() * (1.0 + 1.0 / s).ln();
        let strict = lower < ei && ei < upper;
        let small_variant = s > 0.5 || ei < (1.0 / s).ln();
        if !(strict && small_variant) {
            ok = false;
            detail = format!("violation at s = {s}");
            break;
        }
    }
    verdict(3, "ei_sandwich", ok, &detail);
}

#[test]
fn criterion_04_thm2_empirical() {
    let reports = suites::thm2_suite(SuiteParams::full(), 104).unwrap();
    assert_reports(4, "thm2_empirical", &reports);
}

#[test]
fn criterion_05_corollary_power_bound() {
    let a = 4.0 * std::f64::consts::E / PI;
    let mut ok = true;
    let mut detail = String::new();
    for (name, t) in operators::standard_factory().unwrap() {
        let (c_tr, _) = profile::tadmor_ritt_constant(&t, 256).unwrap();
        let chars = profile::discrete_characteristics(&t, 8192).unwrap();
        let bound = a * c_tr * (2.0 * c_tr.ln() + 2.0 * 2.0f64.ln() + 6.0);
        if chars.pb > bound {
            ok = false;
            detail = format!("{name}: pb {} > bound {bound}", chars.pb);
            break;
        }
        detail = format!("{} operators", operators::standard_factory().unwrap().len());
    }
    verdict(5, "corollary_power_bound", ok, &detail);
}

#[test]
fn criterion_06_spijker_nikolski() {
    let reports = suites::kreiss_suite(SuiteParams::full(), 106).unwrap();
    assert_eq!(reports.len(), 4 * 20 + 4 * 5);
    assert_reports(6, "spijker_nikolski", &reports);
}

#[test]
fn criterion_07_square_function_lemma() {
    let reports = suites::sqfe_suite(100, 107).unwrap();
    assert_reports(7, "square_function_lemma", &reports);
}

#[test]
fn criterion_08_thm3_shape() {
    let t = operators::multiplier_operator(64).unwrap();
    let eigvals = operators::multiplier_eigvals(64);
    let (pb, c1) = profile::diagonal_characteristics(&eigvals).unwrap();
    let k_const = sqfe::sqfe_constant(&t, 0, 0).unwrap();
    let search_at = |k: u32| operators::ctm_search(&t, 0, 1usize << k, 40, 108).unwrap();
    let envelope_at =
        |k: u32| sqfe::thm3_envelope(k_const, pb, c1, 0, 1usize << k).unwrap();
    let scale = search_at(4) / envelope_at(4);
    let mut ok = true;
    let mut detail = format!("scale fitted at k=4: {scale:.4e}");
    for k in 5..=10u32 {
        let lhs = search_at(k);
        let rhs = scale * envelope_at(k) * (1.0 + 1e-6);
        if lhs > rhs {
            ok = false;
            detail = format!("k={k}: search {lhs} above envelope {rhs}");
            break;
        }
    }
    verdict(8, "thm3_shape", ok, &detail);
}

#[test]
fn criterion_09_bernstein() {
    let reports = suites::bernstein_suite(100, 109).unwrap();
    assert_reports(9, "bernstein", &reports);
}

#[test]
fn criterion_10_besov() {
    let reports = suites::besov_suite(SuiteParams::full(), 110).unwrap();
    assert_reports(10, "besov", &reports);
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let bin = env!("CARGO_BIN_EXE_rittcalc");
    for out in [&out_a, &out_b] {
        let status = std::process::Command::new(bin)
            .args([
                "verify",
                "bernstein",
                "--seed",
                "11",
                "--out",
                out.to_str().unwrap(),
                "--format",
                "csv",
            ])
            .status()
            .unwrap();
        assert!(status.success(), "verify run failed");
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    verdict(
        11,
        "determinism",
        a == b && !a.is_empty(),
        &format!("{} bytes, byte-identical: {}", a.len(), a == b),
    );
}

#[test]
fn matrix_poly_roundtrip_property() {
    // sanity net under the acceptance gate: random polynomial evaluation
    // against the scalar spectral mapping on random normal operators
    let mut rng = ChaCha8Rng::seed_from_u64(999);
    for trial in 0..10u64 {
        let op = operators::random_tr(6, PI / 3.0, 1.0, 2000 + trial).unwrap();
        let p = rand_span(&mut rng, 0, 12);
        let norm = linalg::op_norm2(&p.apply(&op.matrix)).unwrap();
        let spectral = op.eigvals.iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max);
        assert!((norm - spectral).abs() <= 1e-9 * (1.0 + spectral));
    }
    let _ = ComplexMatrix::identity(1);
}

//! Named verification suites. Each suite instantiates one family of
//! inequalities on the standard factory operators and returns one
//! `BoundReport` per checked instance or per aggregated family.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fcalc::{self, PolySpan};
use crate::linalg::{self, ComplexMatrix};
use crate::operators::{self, jordan_block};
use crate::profile;
use crate::report::BoundReport;
use crate::special::{self, Lemma2Inputs};
use crate::sqfe;

pub const SUITE_NAMES: &[&str] = &["lemma2", "thm1", "thm2", "bernstein", "sqfe", "besov", "kreiss"];

/// Grid sizes and sample counts for a suite run. `default()` is the CLI
/// setting; acceptance uses `full()`.
#[derive(Debug, Clone, Copy)]
pub struct SuiteParams {
    pub spans_per_config: usize,
    pub polys_per_alpha: usize,
    pub besov_polys: usize,
    pub sqfe_vectors: usize,
    pub ring_grid: usize,
    pub quad_tol: f64,
}

impl SuiteParams {
    pub fn default_params() -> Self {
        Self {
            spans_per_config: 40,
            polys_per_alpha: 25,
            besov_polys: 10,
            sqfe_vectors: 25,
            ring_grid: 192,
            quad_tol: 1e-8,
        }
    }

    pub fn full() -> Self {
        Self {
            spans_per_config: 200,
            polys_per_alpha: 100,
            besov_polys: 50,
            sqfe_vectors: 100,
            ring_grid: 256,
            quad_tol: 1e-8,
        }
    }
}

pub fn run_suite(name: &str, seed: u64, params: SuiteParams) -> Result<Vec<BoundReport>> {
    match name {
        "lemma2" => lemma2_suite(params.quad_tol),
        "thm1" => thm1_suite(params, seed),
        "thm2" => thm2_suite(params, seed),
        "bernstein" => bernstein_suite(params.polys_per_alpha, seed),
        "sqfe" => sqfe_suite(params.sqfe_vectors, seed),
        "besov" => besov_suite(params, seed),
        "kreiss" => kreiss_suite(params, seed),
        other => Err(Error::ConfigError(format!(
            "unknown suite {other:?}; known: {SUITE_NAMES:?}"
        ))),
    }
}

fn rand_coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
}

fn rand_span(rng: &mut ChaCha8Rng, m: usize, n: usize) -> PolySpan {
    PolySpan::new(m, (m..=n).map(|_| rand_coeff(rng)).collect())
}

/// Keyhole kernel integral against its analytic majorant on the full grid.
pub fn lemma2_suite(quad_tol: f64) -> Result<Vec<BoundReport>> {
    let ms = [0usize, 1, 2, 5, 10, 50];
    let etas = [PI / 8.0, PI / 4.0, PI / 3.0, 0.49 * PI];
    let rs = [0.01f64, 0.1, 0.3, 0.7, 0.95];
    let mut reports = Vec::new();
    for &m in &ms {
        for &eta in &etas {
            for &r in &rs {
                let inputs = Lemma2Inputs::new(r, m, eta)?;
                let g = special::keyhole_kernel_integral(inputs, quad_tol)?;
                let bound = special::lemma2_bound(inputs)?;
                reports.push(BoundReport::check(
                    "lemma2",
                    g,
                    bound,
                    quad_tol * (1.0 + bound.abs()),
                    format!("m={m} eta={eta:.6} r={r}"),
                ));
            }
        }
    }
    Ok(reports)
}

/// `||(f tau_m)(T)|| <= thm1_bound * sup_{contour} |f|` on diagonal test
/// operators.
pub fn thm1_suite(params: SuiteParams, seed: u64) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    let cases = [
        ComplexMatrix::diagonal(&[Complex64::new(0.9, 0.0), Complex64::new(0.5, 0.0)]),
        operators::multiplier_operator(8)?,
    ];
    for t in &cases {
        let (c_tr, _) = profile::tadmor_ritt_constant(t, params.ring_grid)?;
        let theta = (1.0 / c_tr).min(1.0).acos();
        let eta = (theta + PI / 2.0) / 2.0 + 0.1 * (PI / 2.0 - theta) / 2.0;
        let eta = eta.min(0.49 * PI).max(theta + 1e-3);
        let c_eta = profile::sector_constant(t, eta, params.ring_grid)?;
        for &m in &[0usize, 3] {
            let r = (1.0f64 / (m as f64 + 1.0)).min(0.5);
            let inputs = Lemma2Inputs::new(r, m, eta)?;
            let bound_coeff = fcalc::thm1_bound(c_eta, inputs)?;
            for _ in 0..4 {
                let f = rand_span(&mut rng, 0, 6);
                let (ft, _) = fcalc::riesz_dunford(
                    t,
                    |z| f.eval(z) * z.powu(m as u32),
                    eta,
                    r,
                    1e-10,
                )?;
                let lhs = linalg::op_norm2(&ft)?;
                let f_sup = fcalc::sup_on_keyhole(&|z| f.eval(z), eta, r, 128)?;
                let rhs = bound_coeff * f_sup;
                reports.push(BoundReport::check(
                    "thm1",
                    lhs,
                    rhs,
                    1e-6 * rhs.abs(),
                    format!("dim={} m={m} eta={eta:.4} r={r:.4} c_eta={c_eta:.4e}", t.dim()),
                ));
            }
        }
    }
    Ok(reports)
}

/// `||p(T)|| <= thm2_bound(C(T), m, n, 1/2) ||p||_inf` over random spans,
/// plus the dominance of the bound over `ctm_search` lower bounds.
pub fn thm2_suite(params: SuiteParams, seed: u64) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs = [(0usize, 8usize), (4, 64), (32, 64), (64, 64)];
    let mut reports = Vec::new();
    for (name, t) in operators::standard_factory()? {
        let (c_tr, _) = profile::tadmor_ritt_constant(&t, params.ring_grid)?;
        for &(m, n) in &configs {
            let bound_coeff = fcalc::thm2_bound(c_tr, m, n, 0.5);
            let mut worst_ratio = 0.0f64;
            for _ in 0..params.spans_per_config {
                let p = rand_span(&mut rng, m, n);
                let lhs = linalg::op_norm2(&p.apply(&t))?;
                let rhs = bound_coeff * fcalc::sup_norm_disc(&p);
                if rhs > 0.0 {
                    worst_ratio = worst_ratio.max(lhs / rhs);
                }
            }
            reports.push(BoundReport::check(
                "thm2_spans",
                worst_ratio,
                1.0,
                1e-6,
                format!("op={name} m={m} n={n} c_tr={c_tr:.6e} spans={}", params.spans_per_config),
            ));
            let search = operators::ctm_search(&t, m, n, 60, seed ^ 0x5eed)?;
            reports.push(BoundReport::check(
                "thm2_vs_ctm_search",
                search,
                bound_coeff,
                1e-6 * bound_coeff,
                format!("op={name} m={m} n={n}"),
            ));
        }
    }
    Ok(reports)
}

/// Bernstein growth lemma, parts (i) and (ii), aggregated per angle.
pub fn bernstein_suite(polys_per_alpha: usize, seed: u64) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas = [PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0];
    let mut reports = Vec::new();
    for &alpha in &alphas {
        let mut worst_i = 0.0f64;
        let mut worst_ii_left = 0.0f64;
        let mut worst_ii_right = 0.0f64;
        for _ in 0..polys_per_alpha {
            let deg = 1 + (rng.gen::<u32>() % 8) as usize;
            let p = rand_span(&mut rng, 0, deg);
            let base = fcalc::sup_norm_stolz(&p, alpha);
            if base == 0.0 {
                continue;
            }
            for &rho in &[1.0f64, 1.2] {
                let scaled = fcalc::sup_norm_scaled_stolz(&p, alpha, rho);
                let bound = (rho / alpha.sin()).powi(p.degree() as i32) * base;
                worst_i = worst_i.max(scaled / bound);
            }
            // part (ii): ||f tau_m|| <= ||f|| <= (sin alpha)^{-m} ||f tau_m||
            let m = 1 + (rng.gen::<u32>() % 4) as usize;
            let shifted = PolySpan::new(p.m + m, p.coeffs.clone());
            let with_tau = fcalc::sup_norm_stolz(&shifted, alpha);
            worst_ii_left = worst_ii_left.max(with_tau / base);
            worst_ii_right = worst_ii_right.max(base / (alpha.sin().powi(-(m as i32)) * with_tau));
        }
        reports.push(BoundReport::check(
            "bernstein_i",
            worst_i,
            1.0,
            1e-6,
            format!("alpha={alpha:.6} polys={polys_per_alpha}"),
        ));
        reports.push(BoundReport::check(
            "bernstein_ii_upper",
            worst_ii_left,
            1.0,
            1e-6,
            format!("alpha={alpha:.6}"),
        ));
        reports.push(BoundReport::check(
            "bernstein_ii_lower",
            worst_ii_right,
            1.0,
            1e-6,
            format!("alpha={alpha:.6}"),
        ));
    }
    Ok(reports)
}

/// Square-function lemma on diagonal and Jordan families plus the
/// closed-form consistency check.
pub fn sqfe_suite(vectors: usize, seed: u64) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    let diag_entries = vec![
        Complex64::new(0.1, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.9, 0.0),
        Complex64::new(0.99, 0.0),
    ];
    let diag = ComplexMatrix::diagonal(&diag_entries);
    let (pb_d, c1_d) = profile::diagonal_characteristics(&diag_entries)?;
    let jordan = jordan_block(Complex64::new(0.5, 0.0), 4);
    let chars = profile::discrete_characteristics(&jordan, 8192)?;
    let families = [("diagonal", &diag, pb_d, c1_d), ("jordan", &jordan, chars.pb, chars.c1)];
    for (family, t, pb, c1) in families {
        for &m in &[0usize, 1, 4, 16] {
            for &r in &[0.5f64, 0.9, 0.99] {
                let bound = sqfe::sfqe_lemma_bound(pb, c1, m, r)?;
                let rt = t.scale(Complex64::new(r, 0.0));
                let mut rtm = ComplexMatrix::identity(t.dim());
                for _ in 0..m {
                    rtm = rtm.mul(&rt);
                }
                let mut worst = 0.0f64;
                for _ in 0..vectors {
                    let x: Vec<Complex64> = (0..t.dim()).map(|_| rand_coeff(&mut rng)).collect();
                    let y = rtm.mul_vec(&x);
                    let measured = sqfe::square_norm(&rt, &y, 1e-12)?.value;
                    worst = worst.max(measured / (bound * linalg::vec_norm(&x)));
                }
                reports.push(BoundReport::check(
                    "sqfe_lemma",
                    worst,
                    1.0,
                    1e-9,
                    format!("family={family} m={m} r={r} pb={pb:.4e} c1={c1:.4e}"),
                ));
            }
        }
    }
    // closed form vs partial sums on the diagonal family
    let mut worst_dev = 0.0f64;
    for _ in 0..vectors {
        let x: Vec<Complex64> = (0..diag.dim()).map(|_| rand_coeff(&mut rng)).collect();
        let res = sqfe::square_norm(&diag, &x, 1e-14)?;
        let cf = res.closed_form.expect("diagonal closed form");
        worst_dev = worst_dev.max((res.value - cf).abs() / (1.0 + cf));
    }
    reports.push(BoundReport::check(
        "sqfe_closed_form",
        worst_dev,
        1e-8,
        0.0,
        format!("vectors={vectors}"),
    ));
    Ok(reports)
}

/// Besov window partition of unity, decomposition consistency, and the
/// log-bound on factory operators.
pub fn besov_suite(params: SuiteParams, seed: u64) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    // exact partition of unity in dyadic rational arithmetic
    let mut partition_fail = 0usize;
    for k in 0..=(1usize << 14) {
        let mut num = 0i64;
        let mut den_exp = 0u32;
        for n in 0..=16usize {
            let (p, q) = fcalc::besov_window_coeff_exact(n, k);
            if p == 0 {
                continue;
            }
            let common = den_exp.max(q);
            num = num * (1i64 << (common - den_exp)) + p * (1i64 << (common - q));
            den_exp = common;
        }
        if num != 1i64 << den_exp {
            partition_fail += 1;
        }
    }
    reports.push(BoundReport::check(
        "besov_partition_of_unity",
        partition_fail as f64,
        0.0,
        0.0,
        "k<=2^14 exact dyadic arithmetic".to_string(),
    ));

    for (name, t) in operators::standard_factory()? {
        let profile = profile::profile_operator(&t, params.ring_grid, 4096)?;
        let mut worst_ratio = 0.0f64;
        let mut worst_reassembly = 0.0f64;
        for _ in 0..params.besov_polys {
            let deg = 1 + (rng.gen::<u32>() as usize % 256);
            let f = rand_span(&mut rng, 0, deg);
            let (ft, report) = fcalc::besov_calculus(&t, &f, &profile)?;
            if report.rhs > 0.0 {
                worst_ratio = worst_ratio.max(report.lhs / report.rhs);
            }
            let direct = f.apply(&t);
            let dev = ft.sub(&direct).max_abs() / (1.0 + direct.max_abs());
            worst_reassembly = worst_reassembly.max(dev);
        }
        reports.push(BoundReport::check(
            "besov_bound",
            worst_ratio,
            1.0,
            1e-6,
            format!("op={name} polys={}", params.besov_polys),
        ));
        reports.push(BoundReport::check(
            "besov_reassembly",
            worst_reassembly,
            1e-10,
            0.0,
            format!("op={name}"),
        ));
    }
    Ok(reports)
}

/// Spijker's bound on random Tadmor--Ritt ensembles and Nikolski's
/// sublinear bound on unimodular-spectrum matrices with explicit eigenbases.
pub fn kreiss_suite(params: SuiteParams, seed: u64) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for &n in &[2usize, 4, 8, 16] {
        for trial in 0..20u64 {
            let op = operators::random_tr(n, PI / 4.0, 8.0, seed ^ (n as u64) << 8 ^ trial)?;
            let c_kreiss = profile::kreiss_constant(&op.matrix, params.ring_grid)?;
            let chars = profile::discrete_characteristics(&op.matrix, 4096)?;
            let mut report = profile::spijker_check(&op.matrix, c_kreiss, chars.pb);
            report.inputs = format!("{} n={n} trial={trial}", report.inputs);
            reports.push(report);
        }
    }
    for &n in &[4usize, 8, 16, 32] {
        for trial in 0..5u64 {
            let eigvals: Vec<Complex64> = (0..n)
                .map(|_| Complex64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>()))
                .collect();
            let mut v = ComplexMatrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    v[(i, j)] += rand_coeff(&mut rng) * 0.1;
                }
            }
            let vinv = linalg::inverse(&v)?;
            let t = v.mul(&ComplexMatrix::diagonal(&eigvals)).mul(&vinv);
            // spectrum unimodular by construction; the dyadic power-norm
            // precheck cannot certify it, so skip it
            let c_kreiss = profile::kreiss_constant_unchecked(&t, params.ring_grid)?;
            let mut report = profile::nikolski_check(&eigvals, &v, c_kreiss)?;
            report.inputs = format!("{} n={n} trial={trial}", report.inputs);
            reports.push(report);
        }
    }
    Ok(reports)
}

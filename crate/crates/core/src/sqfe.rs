//! Discrete square-function norms `||x||_T^2 = sum_k k ||T^k x - T^{k-1} x||^2`,
//! the shifted-norm lemma bound, the square-function constant, the sqrt-log
//! envelope, and the r -> 1 equivalence check.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::profile;
use crate::report::BoundReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailFlag {
    Converged,
    Truncated,
}

/// Result of a square-function norm evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SquareNormResult {
    /// `||x||_T` (square root of the accumulated series)
    pub value: f64,
    pub terms_used: usize,
    pub tail_flag: TailFlag,
    /// closed-form value when `T` is diagonal with real entries in `[0,1]`
    pub closed_form: Option<f64>,
}

const MAX_TERMS: usize = 1_000_000;
const SMALL_STREAK: usize = 100;

fn real_unit_interval_diag(t: &ComplexMatrix) -> Option<Vec<f64>> {
    if !t.is_diagonal() {
        return None;
    }
    let mut out = Vec::with_capacity(t.dim());
    for lam in t.diag() {
        if lam.im.abs() > 1e-14 || lam.re < 0.0 || lam.re > 1.0 {
            return None;
        }
        out.push(lam.re);
    }
    Some(out)
}

/// `||x||_T = sqrt(sum_{k>=1} k ||T^k x - T^{k-1} x||^2)`, accumulated until
/// the term stays below `eps * (sum + eps)` for 100 consecutive `k`.
pub fn square_norm(t: &ComplexMatrix, x: &[Complex64], eps: f64) -> Result<SquareNormResult> {
    assert_eq!(x.len(), t.dim());
    let x_norm2 = linalg::vec_norm(x).powi(2);
    assert!(x_norm2 > 0.0, "square_norm requires a nonzero vector");
    let closed_form = real_unit_interval_diag(t).map(|diag| {
        diag.iter()
            .zip(x)
            .filter(|(&lam, _)| lam < 1.0)
            .map(|(&lam, xj)| xj.norm_sqr() / (1.0 + lam).powi(2))
            .sum::<f64>()
            .sqrt()
    });
    let mut prev = x.to_vec();
    let mut sum = 0.0f64;
    let mut streak = 0usize;
    let mut terms_used = 0usize;
    let mut tail_flag = TailFlag::Truncated;
    for k in 1..=MAX_TERMS {
        let cur = t.mul_vec(&prev);
        let diff2: f64 = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm_sqr()).sum();
        let term = k as f64 * diff2;
        sum += term;
        terms_used = k;
        if sum > 1e12 * x_norm2 {
            return Err(Error::Divergence { partial: sum });
        }
        if term < eps * (sum + eps) {
            streak += 1;
            if streak >= SMALL_STREAK {
                tail_flag = TailFlag::Converged;
                break;
            }
        } else {
            streak = 0;
        }
        prev = cur;
    }
    Ok(SquareNormResult {
        value: sum.sqrt(),
        terms_used,
        tail_flag,
        closed_form,
    })
}

/// Shifted-norm lemma bound
/// `sqrt(2) c1 r^m sqrt(b + log(1 - 1/(2(m+1) log r)))`, `b = 1 + pb^2/c1^2`.
pub fn sfqe_lemma_bound(pb: f64, c1: f64, m: usize, r: f64) -> Result<f64> {
    if c1 <= 0.0 {
        return Err(Error::DegenerateC1);
    }
    assert!(r > 0.0 && r < 1.0, "r must lie in (0,1), got {r}");
    let b = 1.0 + (pb / c1).powi(2);
    let inner = 1.0 - 1.0 / (2.0 * (m as f64 + 1.0) * r.ln());
    Ok(2.0f64.sqrt() * c1 * r.powi(m as i32) * (b + inner.ln()).sqrt())
}

/// Square-function constant `K`: exact for real diagonal contractions
/// (`max_{lambda_j < 1} 1/(1+lambda_j)`), otherwise a sampled lower bound
/// over random unit vectors.
pub fn sqfe_constant(t: &ComplexMatrix, samples: usize, seed: u64) -> Result<f64> {
    if let Some(diag) = real_unit_interval_diag(t) {
        let k = diag
            .iter()
            .filter(|&&lam| lam < 1.0)
            .map(|&lam| 1.0 / (1.0 + lam))
            .fold(0.0f64, f64::max);
        return Ok(k);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = t.dim();
    let mut best = 0.0f64;
    for _ in 0..samples {
        let mut x: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = linalg::vec_norm(&x);
        if norm == 0.0 {
            continue;
        }
        for c in &mut x {
            *c /= norm;
        }
        best = best.max(square_norm(t, &x, 1e-14)?.value);
    }
    Ok(best)
}

/// Square-root-of-log envelope
/// `sqrt(2) c1 K e^{1/2} sqrt(b + log((n+2)/(m+1)))`, stated up to a
/// non-explicit absolute factor; a growth-shape comparator only.
pub fn thm3_envelope(k: f64, pb: f64, c1: f64, m: usize, n: usize) -> Result<f64> {
    if c1 <= 0.0 {
        return Err(Error::DegenerateC1);
    }
    assert!(n >= m);
    let b = 1.0 + (pb / c1).powi(2);
    let log_term = ((n as f64 + 2.0) / (m as f64 + 1.0)).ln();
    Ok(2.0f64.sqrt() * c1 * k * 0.5f64.exp() * (b + log_term).sqrt())
}

/// The `r` that makes the lemma's inner log term equal `log((n+2)/(m+1))`.
pub fn thm3_r_choice(m: usize, n: usize) -> f64 {
    assert!(n >= m);
    (-1.0 / (2.0 * (n - m) as f64 + 2.0)).exp()
}

/// Verifies the proof identity `(I-T)T^k x = (I-rT)T^k x - (1-r)T^{k+1} x`
/// coordinate-wise for `k <= 100`, then compares `||x||_{rT}` over `r_list`
/// against `||x||_T + (1-r) Pb(T) / (1-r^2) ||x||`.
pub fn r_equivalence_check(
    t: &ComplexMatrix,
    x: &[Complex64],
    r_list: &[f64],
) -> Result<BoundReport> {
    assert!(!r_list.is_empty());
    let dim = t.dim();
    let identity = ComplexMatrix::identity(dim);
    let mut residual = 0.0f64;
    for &r in r_list {
        let lhs_op = identity.sub(t); // I - T
        let rhs_a = identity.sub(&t.scale(Complex64::new(r, 0.0))); // I - rT
        let mut tk_x = t.mul_vec(x);
        for _k in 1..=100usize {
            let a = lhs_op.mul_vec(&tk_x);
            let next = t.mul_vec(&tk_x);
            let b = rhs_a.mul_vec(&tk_x);
            for j in 0..dim {
                residual = residual.max((a[j] - b[j] + (1.0 - r) * next[j]).norm());
            }
            tk_x = next;
        }
    }
    let base = square_norm(t, x, 1e-12)?.value;
    let pb = profile::discrete_characteristics(t, 4096)?.pb;
    let x_norm = linalg::vec_norm(x);
    let mut worst: Option<(f64, f64, f64)> = None;
    for &r in r_list {
        assert!(r > 0.0 && r < 1.0);
        let rt = t.scale(Complex64::new(r, 0.0));
        let lhs = square_norm(&rt, x, 1e-12)?.value;
        let rhs = base + (1.0 - r) * pb / (1.0 - r * r) * x_norm;
        let margin = rhs - lhs;
        if worst.map_or(true, |(_, _, m)| margin < m) {
            worst = Some((lhs, rhs, margin));
        }
    }
    let (lhs, rhs, _) = worst.unwrap();
    let mut report = BoundReport::check(
        "r_equivalence",
        lhs,
        rhs,
        1e-9 * (1.0 + rhs.abs()),
        format!("r_list={r_list:?} identity_residual={residual:.3e} pb={pb:.6e}"),
    );
    if residual > 1e-12 {
        report.pass = false;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rand_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
        (0..dim)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect()
    }

    #[test]
    fn zero_operator_gives_vector_norm() {
        let t = ComplexMatrix::zeros(3);
        let x = vec![c(1.0, 0.0), c(2.0, 0.0), c(-2.0, 1.0)];
        let res = square_norm(&t, &x, 1e-12).unwrap();
        let expect = linalg::vec_norm(&x);
        assert!((res.value - expect).abs() < 1e-12);
        assert_eq!(res.tail_flag, TailFlag::Converged);
        assert!((res.closed_form.unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn identity_operator_gives_zero() {
        let t = ComplexMatrix::identity(3);
        let x = vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, -1.0)];
        let res = square_norm(&t, &x, 1e-12).unwrap();
        assert_eq!(res.value, 0.0);
        assert_eq!(res.closed_form, Some(0.0));
    }

    #[test]
    fn scalar_geometric_series_closed_form() {
        // diag(lambda): ||x||_T = ||x|| / (1 + lambda)
        for &lam in &[0.1f64, 0.5, 0.9, 0.99] {
            let t = ComplexMatrix::diagonal(&[c(lam, 0.0)]);
            let x = vec![c(2.0, 0.0)];
            let res = square_norm(&t, &x, 1e-14).unwrap();
            let expect = 2.0 / (1.0 + lam);
            assert_eq!(res.tail_flag, TailFlag::Converged, "lambda = {lam}");
            assert!(
                (res.value - expect).abs() < 1e-8 * (1.0 + expect),
                "lambda = {lam}: value {} vs {expect}",
                res.value
            );
            assert!((res.closed_form.unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_partial_sums_match_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let diag: Vec<Complex64> = vec![c(0.0, 0.0), c(0.3, 0.0), c(0.75, 0.0), c(0.95, 0.0)];
        let t = ComplexMatrix::diagonal(&diag);
        for _ in 0..20 {
            let x = rand_vec(&mut rng, 4);
            let res = square_norm(&t, &x, 1e-14).unwrap();
            let cf = res.closed_form.unwrap();
            assert_eq!(res.tail_flag, TailFlag::Converged);
            assert!(
                (res.value - cf).abs() <= 1e-8 * (1.0 + cf),
                "value {} vs closed form {cf}",
                res.value
            );
        }
    }

    #[test]
    fn divergence_for_expanding_operator() {
        let t = ComplexMatrix::diagonal(&[c(2.0, 0.0)]);
        let x = vec![c(1.0, 0.0)];
        match square_norm(&t, &x, 1e-12) {
            Err(Error::Divergence { partial }) => assert!(partial > 1e12),
            other => panic!("expected Divergence, got {other:?}"),
        }
    }

    #[test]
    fn partial_sums_monotone() {
        // each term is nonnegative, so larger truncation never decreases value
        let t = ComplexMatrix::diagonal(&[c(0.9, 0.0), c(0.5, 0.0)]);
        let x = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let coarse = square_norm(&t, &x, 1e-4).unwrap();
        let fine = square_norm(&t, &x, 1e-14).unwrap();
        assert!(coarse.terms_used <= fine.terms_used);
        assert!(coarse.value <= fine.value + 1e-15);
    }

    #[test]
    fn lemma_bound_inner_term_at_special_r() {
        // m = 0, r = e^{-1/2}: inner log term = ln 2
        let r = (-0.5f64).exp();
        let got = sfqe_lemma_bound(1.0, 1.0, 0, r).unwrap();
        let want = 2.0f64.sqrt() * r.powi(0) * (2.0 + 2.0f64.ln()).sqrt();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn lemma_bound_finite_as_r_approaches_one() {
        let mut prev = 0.0f64;
        for &r in &[0.9f64, 0.99, 0.999, 0.999_9] {
            let v = sfqe_lemma_bound(1.0, 0.5, 0, r).unwrap();
            assert!(v.is_finite());
            assert!(v > prev, "grows like sqrt(log(1/(1-r)))");
            prev = v;
        }
    }

    #[test]
    fn degenerate_c1_rejected() {
        assert!(matches!(sfqe_lemma_bound(1.0, 0.0, 0, 0.5), Err(Error::DegenerateC1)));
        assert!(matches!(thm3_envelope(1.0, 1.0, 0.0, 0, 4), Err(Error::DegenerateC1)));
    }

    #[test]
    fn lemma_verification_on_diagonal_and_jordan() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let diag = vec![c(0.1, 0.0), c(0.5, 0.0), c(0.9, 0.0)];
        let t_diag = ComplexMatrix::diagonal(&diag);
        let (pb_d, c1_d) = profile::diagonal_characteristics(&diag).unwrap();
        let mut jordan = ComplexMatrix::zeros(4);
        for i in 0..4 {
            jordan[(i, i)] = c(0.5, 0.0);
            if i + 1 < 4 {
                jordan[(i, i + 1)] = c(1.0, 0.0);
            }
        }
        let chars = profile::discrete_characteristics(&jordan, 4096).unwrap();
        for (t, pb, c1) in [(&t_diag, pb_d, c1_d), (&jordan, chars.pb, chars.c1)] {
            for &m in &[0usize, 1, 4] {
                for &r in &[0.5f64, 0.9] {
                    let bound = sfqe_lemma_bound(pb, c1, m, r).unwrap();
                    let rt = t.scale(c(r, 0.0));
                    let mut rtm = ComplexMatrix::identity(t.dim());
                    for _ in 0..m {
                        rtm = rtm.mul(&rt);
                    }
                    for _ in 0..20 {
                        let x = rand_vec(&mut rng, t.dim());
                        let y = rtm.mul_vec(&x);
                        let measured = square_norm(&rt, &y, 1e-12).unwrap().value;
                        let rhs = bound * linalg::vec_norm(&x);
                        assert!(
                            measured <= rhs + 1e-9,
                            "m={m} r={r}: {measured} > {rhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sqfe_constant_diagonal_exact() {
        let t = ComplexMatrix::diagonal(&[c(0.25, 0.0), c(0.5, 0.0), c(1.0, 0.0)]);
        let k = sqfe_constant(&t, 0, 0).unwrap();
        assert!((k - 1.0 / 1.25).abs() < 1e-15);
        let zero = ComplexMatrix::zeros(2);
        assert!((sqfe_constant(&zero, 0, 0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sqfe_constant_sampled_is_lower_bound_under_conjugation() {
        // S diag(0.5, 0.25) S^{-1} with a mild similarity
        let diag = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(0.25, 0.0)]);
        let mut s = ComplexMatrix::identity(2);
        s[(0, 1)] = c(0.3, 0.1);
        let sinv = linalg::inverse(&s).unwrap();
        let t = s.mul(&diag).mul(&sinv);
        let k_diag = sqfe_constant(&diag, 0, 0).unwrap();
        let sampled = sqfe_constant(&t, 40, 7).unwrap();
        let kappa = linalg::op_norm2(&s).unwrap() * linalg::op_norm2(&sinv).unwrap();
        assert!(sampled <= kappa * k_diag + 1e-9, "{sampled} vs {}", kappa * k_diag);
        assert!(sampled > 0.0);
    }

    #[test]
    fn envelope_bounded_at_m_equals_n() {
        let b = 1.0 + (2.0f64 / 0.5).powi(2);
        let mut prev = f64::INFINITY;
        for &n in &[1usize, 4, 64, 1024] {
            let v = thm3_envelope(1.0, 2.0, 0.5, n, n).unwrap();
            assert!(v < prev);
            prev = v;
        }
        let limit = 2.0f64.sqrt() * 0.5 * 0.5f64.exp() * b.sqrt();
        assert!((prev - limit).abs() < 0.01 * limit);
    }

    #[test]
    fn r_choice_identity() {
        for &(m, n) in &[(0usize, 0usize), (0, 10), (3, 17), (64, 64)] {
            let r = thm3_r_choice(m, n);
            let inner = 1.0 - 1.0 / (2.0 * (m as f64 + 1.0) * r.ln());
            let want = (n as f64 + 2.0) / (m as f64 + 1.0);
            assert!((inner - want).abs() < 1e-12 * want, "(m,n)=({m},{n})");
        }
    }

    #[test]
    fn r_equivalence_identity_and_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let entries = rand_vec(&mut rng, 64)
            .into_iter()
            .map(|v| v * 0.1)
            .collect::<Vec<_>>();
        let t = ComplexMatrix::new(8, entries).unwrap();
        let x = rand_vec(&mut rng, 8);
        let report = r_equivalence_check(&t, &x, &[0.5, 0.9, 0.99]).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn r_equivalence_on_identity_operator() {
        // ||x||_{rI} = ||x|| / (1 + r), uniformly bounded in r
        let t = ComplexMatrix::identity(2);
        let x = vec![c(3.0, 0.0), c(4.0, 0.0)];
        for &r in &[0.5f64, 0.9, 0.99] {
            let rt = t.scale(c(r, 0.0));
            let v = square_norm(&rt, &x, 1e-14).unwrap().value;
            let expect = 5.0 / (1.0 + r);
            assert!((v - expect).abs() < 1e-6 * expect, "r={r}: {v} vs {expect}");
        }
        let report = r_equivalence_check(&t, &x, &[0.5, 0.9, 0.99]).unwrap();
        assert!(report.pass);
    }
}

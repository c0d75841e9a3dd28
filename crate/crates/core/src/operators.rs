//! Test-operator factory (multiplier diagonals, Jordan blocks, Cayley
//! transforms, random similarity-conjugated contractions) and randomized
//! lower-bound searches for `C(T,m,n)` and uniform basis constants.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fcalc::{self, PolySpan};
use crate::geometry::StolzDomain;
use crate::linalg::{self, ComplexMatrix};

/// Eigen-decomposition carried by construction (not computed a posteriori).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenData {
    pub eigvals: Vec<(f64, f64)>,
    /// columns are eigenvectors
    pub eigvecs_dim: usize,
    pub eigvecs_entries: Vec<(f64, f64)>,
}

impl EigenData {
    pub fn from_parts(eigvals: &[Complex64], eigvecs: &ComplexMatrix) -> Self {
        Self {
            eigvals: eigvals.iter().map(|z| (z.re, z.im)).collect(),
            eigvecs_dim: eigvecs.dim(),
            eigvecs_entries: eigvecs.entries().iter().map(|z| (z.re, z.im)).collect(),
        }
    }

    pub fn eigvals(&self) -> Vec<Complex64> {
        self.eigvals.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
    }

    pub fn eigvecs(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::new(
            self.eigvecs_dim,
            self.eigvecs_entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        )
    }
}

/// Construction record for a factory operator, serializable alongside reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    Multiplier { n: usize },
    Jordan { lambda: (f64, f64), n: usize },
    Cayley { input_dim: usize },
    RandomTr { n: usize, theta: f64, cond_cap: f64, seed: u64 },
    Diagonal { entries: Vec<(f64, f64)> },
}

/// `diag(1 - 2^{-1}, ..., 1 - 2^{-N})`.
pub fn multiplier_operator(n: usize) -> Result<ComplexMatrix> {
    if n == 0 || n > 64 {
        return Err(Error::PrecisionLoss { n });
    }
    let diag: Vec<Complex64> = (1..=n)
        .map(|k| Complex64::new(1.0 - 0.5f64.powi(k as i32), 0.0))
        .collect();
    Ok(ComplexMatrix::diagonal(&diag))
}

pub fn multiplier_eigvals(n: usize) -> Vec<Complex64> {
    (1..=n).map(|k| Complex64::new(1.0 - 0.5f64.powi(k as i32), 0.0)).collect()
}

/// Upper Jordan block of size `n` at `lambda`.
pub fn jordan_block(lambda: Complex64, n: usize) -> ComplexMatrix {
    assert!(n > 0);
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = lambda;
        if i + 1 < n {
            m[(i, i + 1)] = Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// Cayley transform `(I - A)(A + I)^{-1}`.
pub fn cayley(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    // (A + I)^{-1} = -R(-1, A)
    let res = linalg::resolvent(a, Complex64::new(-1.0, 0.0))?;
    let i_minus_a = ComplexMatrix::identity(n).sub(a);
    Ok(i_minus_a.mul(&res.value).scale(Complex64::new(-1.0, 0.0)))
}

/// A random operator with eigenvalues in the `0.98`-shrunk Stolz domain
/// `B_theta`, conjugated by `S = I + rho G` with `rho` tuned so that
/// `cond(S) <= cond_cap`. Deterministic in `seed`.
pub struct RandomTrOperator {
    pub matrix: ComplexMatrix,
    pub eigvals: Vec<Complex64>,
    pub basis: ComplexMatrix,
    pub basis_inv: ComplexMatrix,
    pub spec: OperatorSpec,
}

pub fn random_tr(n: usize, theta: f64, cond_cap: f64, seed: u64) -> Result<RandomTrOperator> {
    assert!(n > 0);
    assert!(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2);
    assert!(cond_cap >= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = StolzDomain::new(theta)?;
    let shrink = 0.98;
    let s_t = theta.sin();
    let mut eigvals = Vec::with_capacity(n);
    while eigvals.len() < n {
        let x = rng.gen::<f64>() * (1.0 + s_t) - s_t;
        let y = (rng.gen::<f64>() * 2.0 - 1.0) * s_t;
        let z = Complex64::new(shrink * x, shrink * y);
        if domain.contains(z / shrink) {
            eigvals.push(z);
        }
    }
    let d = ComplexMatrix::diagonal(&eigvals);
    if cond_cap == 1.0 {
        return Ok(RandomTrOperator {
            matrix: d,
            eigvals,
            basis: ComplexMatrix::identity(n),
            basis_inv: ComplexMatrix::identity(n),
            spec: OperatorSpec::RandomTr { n, theta, cond_cap, seed },
        });
    }
    let g_entries: Vec<Complex64> = (0..n * n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let g = ComplexMatrix::new(n, g_entries)?;
    let mut rho = 1.0f64;
    let (basis, basis_inv) = loop {
        let s = ComplexMatrix::identity(n).add(&g.scale(Complex64::new(rho, 0.0)));
        if let Ok(sinv) = linalg::inverse(&s) {
            let cond = linalg::op_norm2(&s)? * linalg::op_norm2(&sinv)?;
            if cond <= cond_cap {
                break (s, sinv);
            }
        }
        rho /= 2.0;
        if rho < 1e-12 {
            break (ComplexMatrix::identity(n), ComplexMatrix::identity(n));
        }
    };
    let matrix = basis.mul(&d).mul(&basis_inv);
    Ok(RandomTrOperator {
        matrix,
        eigvals,
        basis,
        basis_inv,
        spec: OperatorSpec::RandomTr { n, theta, cond_cap, seed },
    })
}

fn candidate_ratio(t: &ComplexMatrix, p: &PolySpan) -> Result<f64> {
    let sup = fcalc::sup_norm_disc(p);
    if sup <= 0.0 {
        return Ok(0.0);
    }
    Ok(linalg::op_norm2(&p.apply(t))? / sup)
}

/// Randomized lower bound for
/// `C(T,m,n) = sup { ||p(T)|| : p in H^inf[m,n], ||p||_inf <= 1 }`.
///
/// Candidates, in a fixed order so the search is monotone in `budget` for a
/// fixed seed: the monomial `z^m` first, then remaining monomials, dyadic
/// window slices shifted into `[m,n]`, and random complex-Gaussian spans.
pub fn ctm_search(t: &ComplexMatrix, m: usize, n: usize, budget: usize, seed: u64) -> Result<f64> {
    assert!(n >= m && n - m <= 4096);
    assert!(budget > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    let mut used = 0usize;
    let consider = |p: &PolySpan, used: &mut usize, best: &mut f64| -> Result<bool> {
        if *used >= budget {
            return Ok(true);
        }
        *used += 1;
        let ratio = candidate_ratio(t, p)?;
        if ratio > *best {
            *best = ratio;
        }
        Ok(false)
    };

    // monomials: z^m always first, then a spread across [m, n]
    let mut ks: Vec<usize> = vec![m];
    let width = n - m;
    let monomial_budget = (budget / 3).max(2);
    if width > 0 {
        if width + 1 <= monomial_budget {
            ks.extend(m + 1..=n);
        } else {
            for j in 1..monomial_budget {
                ks.push(m + j * width / (monomial_budget - 1));
            }
        }
    }
    ks.dedup();
    for k in ks {
        if consider(&PolySpan::new(k, vec![Complex64::new(1.0, 0.0)]), &mut used, &mut best)? {
            return Ok(best);
        }
    }

    // dyadic window slices shifted into [m, n]
    let mut w = 0usize;
    while (1usize << w) <= n.max(1) && w <= 12 {
        let window = fcalc::besov_window(w);
        if window.degree() <= n - m {
            let shifted = PolySpan::new(window.m + m, window.coeffs.clone());
            if consider(&shifted, &mut used, &mut best)? {
                return Ok(best);
            }
        }
        w += 1;
    }

    // random complex-Gaussian coefficient spans
    while used < budget {
        let len = n - m + 1;
        let coeffs: Vec<Complex64> = (0..len)
            .map(|_| {
                // Box-Muller standard complex Gaussian
                let u: f64 = rng.gen::<f64>().max(1e-300);
                let v: f64 = rng.gen();
                let mag = (-2.0 * u.ln()).sqrt();
                Complex64::from_polar(mag, 2.0 * std::f64::consts::PI * v)
            })
            .collect();
        if consider(&PolySpan::new(m, coeffs), &mut used, &mut best)? {
            break;
        }
    }
    Ok(best)
}

/// Lower bound on the uniform basis constant of the columns of `vectors`:
/// `sup { ||sum_k alpha_k x_k psi_k|| : |alpha_k| <= 1, ||sum_k x_k psi_k|| <= 1 }`,
/// searched over random coefficient vectors with phase-aligned multipliers.
pub fn uniform_basis_constant(vectors: &ComplexMatrix, budget: usize, seed: u64) -> Result<f64> {
    let n = vectors.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vh = vectors.conj_transpose();
    let mut best = 1.0f64; // alpha = 1 always attains 1
    for _ in 0..budget {
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let vx = vectors.mul_vec(&x);
        let base = linalg::vec_norm(&vx);
        if base == 0.0 {
            continue;
        }
        // dual directions: the image itself plus a random unit vector
        let mut duals: Vec<Vec<Complex64>> = vec![vx.iter().map(|z| z / base).collect()];
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let yn = linalg::vec_norm(&y);
        if yn > 0.0 {
            duals.push(y.iter().map(|z| z / yn).collect());
        }
        for dual in duals {
            // align each term of <V(alpha.x), dual> to the nonnegative axis
            let w = vh.mul_vec(&dual); // w_k = <psi_k, dual> conjugated
            let alpha: Vec<Complex64> = (0..n)
                .map(|k| {
                    let phase = x[k] * w[k].conj();
                    if phase.norm() == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        (phase / phase.norm()).conj()
                    }
                })
                .collect();
            let ax: Vec<Complex64> = (0..n).map(|k| alpha[k] * x[k]).collect();
            let val = linalg::vec_norm(&vectors.mul_vec(&ax)) / base;
            if val > best {
                best = val;
            }
        }
    }
    Ok(best)
}

/// The standard factory set used by verification suites: multiplier
/// diagonals, Jordan blocks, a Cayley transform of a positive matrix, and
/// seeded random similarity-conjugated contractions.
pub fn standard_factory() -> Result<Vec<(String, ComplexMatrix)>> {
    let mut out: Vec<(String, ComplexMatrix)> = Vec::new();
    out.push(("multiplier_8".into(), multiplier_operator(8)?));
    out.push(("multiplier_32".into(), multiplier_operator(32)?));
    out.push(("jordan_0.5_4".into(), jordan_block(Complex64::new(0.5, 0.0), 4)));
    out.push(("jordan_0.8i_3".into(), jordan_block(Complex64::new(0.0, 0.8), 3)));
    let a = ComplexMatrix::diagonal(&[
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(4.0, 0.0),
    ]);
    out.push(("cayley_diag".into(), cayley(&a)?));
    out.push((
        "random_tr_6".into(),
        random_tr(6, std::f64::consts::FRAC_PI_4, 10.0, 1)?.matrix,
    ));
    out.push((
        "random_tr_12".into(),
        random_tr(12, std::f64::consts::FRAC_PI_3, 20.0, 2)?.matrix,
    ));
    Ok(out)
}

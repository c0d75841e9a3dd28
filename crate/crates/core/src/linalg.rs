//! Dense complex matrix kernels: LU-based resolvent solves, operator 2-norm
//! by power iteration, and Horner evaluation of matrix polynomials.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Result of a resolvent solve together with its residual certificate
/// `‖(zI - T) M - I‖_max`.
#[derive(Debug, Clone)]
pub struct Resolvent {
    pub value: ComplexMatrix,
    pub residual: f64,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::ShapeError {
                rows: dim,
                cols: if dim == 0 { 0 } else { entries.len() / dim },
            });
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::DomainError("non-finite matrix entry".into()));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && self[(i, j)] != Complex64::new(0.0, 0.0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self { dim: self.dim, entries }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, x.len());
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Max absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// LU factorization with partial pivoting.
struct Lu {
    dim: usize,
    // combined L (unit lower) and U factors
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factor `m`, declaring numerical singularity when a pivot magnitude
    /// drops below `tol`.
    fn factor(m: &ComplexMatrix, tol: f64) -> std::result::Result<Self, f64> {
        let n = m.dim;
        let mut lu = m.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            // pivot search
            let mut best = col;
            let mut best_mag = lu[col * n + col].norm();
            for row in col + 1..n {
                let mag = lu[row * n + col].norm();
                if mag > best_mag {
                    best = row;
                    best_mag = mag;
                }
            }
            if best_mag < tol {
                return Err(best_mag);
            }
            if best != col {
                for j in 0..n {
                    lu.swap(col * n + j, best * n + j);
                }
                perm.swap(col, best);
            }
            let pivot = lu[col * n + col];
            for row in col + 1..n {
                let factor = lu[row * n + col] / pivot;
                lu[row * n + col] = factor;
                for j in col + 1..n {
                    let sub = factor * lu[col * n + j];
                    lu[row * n + j] -= sub;
                }
            }
        }
        Ok(Self { dim: n, lu, perm })
    }

    fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        // forward substitution (unit lower)
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        // back substitution
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    fn solve_identity(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for col in 0..n {
            e[col] = Complex64::new(1.0, 0.0);
            let x = self.solve_vec(&e);
            for row in 0..n {
                out[(row, col)] = x[row];
            }
            e[col] = Complex64::new(0.0, 0.0);
        }
        out
    }
}

/// Solve `M X = I` by LU with partial pivoting.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let tol = 1e-14 * m.max_abs().max(1e-300);
    let lu = Lu::factor(m, tol).map_err(|pivot| Error::SingularResolvent {
        z: Complex64::new(f64::NAN, f64::NAN),
        pivot,
    })?;
    Ok(lu.solve_identity())
}

/// Resolvent `R(z, T) = (zI - T)^{-1}` with a residual certificate.
///
/// Errors with `SingularResolvent` when a pivot magnitude falls below
/// `1e-14 * ‖zI - T‖_max`, signalling that `z` is numerically in the spectrum.
pub fn resolvent(t: &ComplexMatrix, z: Complex64) -> Result<Resolvent> {
    let n = t.dim;
    let mut a = t.scale(Complex64::new(-1.0, 0.0));
    for i in 0..n {
        a[(i, i)] += z;
    }
    let tol = 1e-14 * a.max_abs().max(1e-300);
    let lu = Lu::factor(&a, tol).map_err(|pivot| Error::SingularResolvent { z, pivot })?;
    let value = lu.solve_identity();
    let residual = a.mul(&value).sub(&ComplexMatrix::identity(n)).max_abs();
    Ok(Resolvent { value, residual })
}

/// Operator 2-norm (largest singular value) by power iteration on `M* M`.
///
/// Relative tolerance 1e-12, iteration cap 20_000, one restart on stagnation.
/// When the top two singular values are nearly equal the iteration plateaus
/// between them; the plateau value is then within the observed step size of
/// the true norm and is returned once the step is below 1e-9 relative.
pub fn op_norm2(m: &ComplexMatrix) -> Result<f64> {
    let n = m.dim;
    if n == 0 {
        return Ok(0.0);
    }
    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    if m.is_diagonal() {
        return Ok(m.diag().iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let mh = m.conj_transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f70_6e6f_726d);
    let cap = 20_000usize;
    let mut plateau: Option<f64> = None;
    for _restart in 0..2 {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        normalize(&mut v);
        let mut last = 0.0f64;
        for _it in 0..cap {
            let w = mh.mul_vec(&m.mul_vec(&v));
            let lambda = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if lambda == 0.0 {
                return Ok(0.0);
            }
            v = w;
            normalize(&mut v);
            if (lambda - last).abs() <= 1e-12 * lambda.max(1e-300) {
                return Ok(lambda.sqrt());
            }
            last = lambda;
        }
        if (last - mh.mul_vec(&m.mul_vec(&v)).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .abs()
            <= 1e-9 * last.max(1e-300)
        {
            plateau = Some(plateau.map_or(last, |p: f64| p.max(last)));
        }
    }
    match plateau {
        Some(lambda) => Ok(lambda.sqrt()),
        None => Err(Error::NoConvergence { iterations: cap }),
    }
}

fn normalize(v: &mut [Complex64]) {
    let norm = vec_norm(v);
    if norm > 0.0 {
        for c in v.iter_mut() {
            *c /= norm;
        }
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Evaluate `p(T) = T^m p0(T)` by Horner recurrence on matrices, where
/// `p(z) = z^m p0(z)` and `coeffs[j]` is the coefficient of `z^{m+j}`.
///
/// Diagonal matrices take a scalar fast path.
pub fn mat_poly(m: usize, coeffs: &[Complex64], t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.dim;
    if coeffs.is_empty() {
        return ComplexMatrix::zeros(n);
    }
    if t.is_diagonal() {
        let diag: Vec<Complex64> = t
            .diag()
            .iter()
            .map(|&lambda| horner_scalar(m, coeffs, lambda))
            .collect();
        return ComplexMatrix::diagonal(&diag);
    }
    // Horner on p0, then multiply by T^m
    let mut acc = ComplexMatrix::zeros(n);
    for i in 0..n {
        acc[(i, i)] = coeffs[coeffs.len() - 1];
    }
    for &c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(t);
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    let mut power = m;
    let mut base = t.clone();
    while power > 0 {
        if power & 1 == 1 {
            acc = base.mul(&acc);
        }
        power >>= 1;
        if power > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

/// Scalar Horner for `z^m * sum_j coeffs[j] z^j`.
pub fn horner_scalar(m: usize, coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc * z.powu(m as u32)
}

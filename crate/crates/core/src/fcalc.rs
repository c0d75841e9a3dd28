//! Functional calculus: Riesz--Dunford evaluation of f(T) over keyhole
//! boundaries, polynomial sup-norms on discs and Stolz domains, the explicit
//! calculus bound formulas, and the dyadic Besov window calculus.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{self, Measure};
use crate::linalg::{self, ComplexMatrix};
use crate::profile::OperatorProfile;
use crate::report::BoundReport;
use crate::special::{self, Lemma2Inputs};

/// A polynomial `p(z) = sum_{k=m}^{n} a_k z^k` stored as the lowest degree
/// and the coefficient list (`coeffs[j]` is the coefficient of `z^{m+j}`).
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpan {
    pub m: usize,
    pub coeffs: Vec<Complex64>,
}

impl PolySpan {
    pub fn new(m: usize, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty());
        Self { m, coeffs }
    }

    /// Highest degree.
    pub fn degree(&self) -> usize {
        self.m + self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        linalg::horner_scalar(self.m, &self.coeffs, z)
    }

    /// Apply to a matrix via the Horner kernel.
    pub fn apply(&self, t: &ComplexMatrix) -> ComplexMatrix {
        linalg::mat_poly(self.m, &self.coeffs, t)
    }

    /// Coefficient of `z^k`, zero outside the span.
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k < self.m || k > self.degree() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[k - self.m]
        }
    }

    /// Trim zero coefficients at both ends (keeping at least one).
    pub fn normalized(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
        while self.coeffs.len() > 1 && self.coeffs[0] == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(0);
            self.m += 1;
        }
        self
    }

    /// `p(s z)` as a span (coefficients scaled by `s^k`).
    pub fn dilated(&self, s: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| a * s.powi((self.m + j) as i32))
            .collect();
        Self { m: self.m, coeffs }
    }
}

/// Riesz--Dunford evaluation `f(T) = (2 pi i)^{-1} ∮ f(z) R(z,T) dz` over the
/// keyhole boundary with parameters `(eta, r)`. Returns the matrix and the
/// quadrature error estimate.
pub fn riesz_dunford<F>(
    t: &ComplexMatrix,
    f: F,
    eta: f64,
    r: f64,
    tol: f64,
) -> Result<(ComplexMatrix, f64)>
where
    F: Fn(Complex64) -> Complex64,
{
    let radius = crate::profile::spectral_radius_bound(t)?;
    if radius > 1.0 + 1e-8 {
        return Err(Error::SpectrumOutsideDisc { bound: radius });
    }
    let contour = geometry::keyhole_contour(eta, r)?;
    let (value, err) = geometry::contour_quadrature(
        &contour.panels,
        |z| match linalg::resolvent(t, z) {
            Ok(res) => Ok(res.value.scale(f(z))),
            Err(Error::SingularResolvent { z, .. }) => Err(Error::SpectrumTouchesContour { z }),
            Err(e) => Err(e),
        },
        tol,
        Measure::Dz,
    )?;
    Ok((value.scale(Complex64::new(0.0, -1.0 / (2.0 * PI))), err))
}

/// Default keyhole parameters: `eta` halfway between the type angle and
/// `pi/2`, `r = 1/(n+1)` for a degree-`n` input (clamped into `(0, 0.9]`).
pub fn default_keyhole(theta: f64, degree: usize) -> (f64, f64) {
    let eta = (theta + PI / 2.0) / 2.0;
    let r = (1.0 / (degree as f64 + 1.0)).min(0.9);
    (eta, r)
}

fn refine_max_1d<F>(f: &F, t0: f64, half_width: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut best_t = t0;
    let mut best = f(t0);
    let mut width = half_width;
    for pass in 0..80 {
        let prev = best;
        for i in 0..17 {
            let t = (best_t - width + 2.0 * width * i as f64 / 16.0).clamp(lo, hi);
            let v = f(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        width /= 2.0;
        if pass >= 6 && (best - prev).abs() <= 1e-12 * best.max(1e-300) {
            break;
        }
    }
    best
}

/// Max of `f` over `[lo, hi]`: sample `samples + 1` points, then refine
/// around every sampled local maximum (the global max of a polynomial
/// modulus can sit on any of several humps of comparable height).
fn sampled_max_1d<F>(f: &F, lo: f64, hi: f64, samples: usize, wrap: bool) -> f64
where
    F: Fn(f64) -> f64,
{
    let vals: Vec<f64> = (0..=samples)
        .map(|i| f(lo + (hi - lo) * i as f64 / samples as f64))
        .collect();
    let at = |i: isize| -> f64 {
        if wrap {
            vals[(i.rem_euclid(samples as isize)) as usize]
        } else {
            vals[i.clamp(0, samples as isize) as usize]
        }
    };
    let half_width = (hi - lo) / samples as f64;
    let mut best = 0.0f64;
    for i in 0..=samples {
        let v = vals[i];
        if v >= at(i as isize - 1) && v >= at(i as isize + 1) {
            let t = lo + (hi - lo) * i as f64 / samples as f64;
            let (rlo, rhi) = if wrap {
                (t - half_width, t + half_width)
            } else {
                ((t - half_width).max(lo), (t + half_width).min(hi))
            };
            best = best.max(refine_max_1d(f, t, half_width, rlo, rhi));
        }
    }
    best
}

/// `sup_{|z| <= 1} |p(z)|`, reduced to the circle by the maximum principle:
/// discrete max over `16 (n+1)` equispaced angles, then local refinement.
pub fn sup_norm_disc(p: &PolySpan) -> f64 {
    let n = p.degree();
    let samples = 16 * (n + 1);
    let eval = |phi: f64| p.eval(Complex64::from_polar(1.0, phi)).norm();
    sampled_max_1d(&eval, 0.0, 2.0 * PI, samples, true)
}

/// `sup |p|` over the Stolz domain boundary `∂B_alpha`, refined near the
/// discrete argmax on each panel.
pub fn sup_norm_stolz(p: &PolySpan, alpha: f64) -> f64 {
    let panels = geometry::stolz_boundary(alpha);
    let n = p.degree();
    let samples = 16 * (n + 1);
    let mut overall = 0.0f64;
    for panel in &panels {
        let eval = |t: f64| p.eval(panel.point(t)).norm();
        overall = overall.max(sampled_max_1d(&eval, 0.0, 1.0, samples, false));
    }
    overall
}

/// Max of `|f|` over the quadrature-style node set of a keyhole boundary;
/// the maximum principle puts the sup of a holomorphic function on the
/// boundary.
pub fn sup_on_keyhole<F>(f: &F, eta: f64, r: f64, samples_per_panel: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let contour = geometry::keyhole_contour(eta, r)?;
    let mut best = 0.0f64;
    for panel in &contour.panels {
        let eval = |t: f64| f(panel.point(t)).norm();
        best = best.max(sampled_max_1d(&eval, 0.0, 1.0, samples_per_panel, false));
    }
    Ok(best)
}

/// Keyhole calculus coefficient: `c(T, m, r, eta) <= C_eta(T) / (2 pi) * C(r, m, eta)`.
pub fn thm1_bound(c_eta: f64, inputs: Lemma2Inputs) -> Result<f64> {
    Ok(c_eta * special::lemma2_bound(inputs)? / (2.0 * PI))
}

/// `C log C` calculus bound
/// `a C (2 log C + b + log((n+1)/(m+1)))` with `a = 2e/(pi(1-s))`,
/// `b = -2 log s + 6`.
pub fn thm2_bound(c_tr: f64, m: usize, n: usize, s: f64) -> f64 {
    assert!(s > 0.0 && s < 1.0);
    let a = 2.0 * std::f64::consts::E / (PI * (1.0 - s));
    let b = -2.0 * s.ln() + 6.0;
    a * c_tr * (2.0 * c_tr.ln() + b + ((n as f64 + 1.0) / (m as f64 + 1.0)).ln())
}

/// Dyadic Besov window `W_n`: triangular Fourier coefficients supported in
/// `[2^{n-1}, 2^{n+1}]` with peak 1 at `2^n`; `W_0(z) = 1 + z`.
///
/// Coefficients are dyadic rationals, exact in binary64.
pub fn besov_window(n: usize) -> PolySpan {
    if n == 0 {
        return PolySpan::new(0, vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
    }
    let lo = 1usize << (n - 1);
    let mid = 1usize << n;
    let hi = 1usize << (n + 1);
    let coeffs = (lo..=hi)
        .map(|k| {
            let v = if k <= mid {
                (k - lo) as f64 / lo as f64
            } else {
                (hi - k) as f64 / mid as f64
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    PolySpan::new(lo, coeffs)
}

/// Exact rational value of the window coefficient, as (numerator, 2^exponent
/// denominator). Used by the partition-of-unity check.
pub fn besov_window_coeff_exact(n: usize, k: usize) -> (i64, u32) {
    if n == 0 {
        return if k <= 1 { (1, 0) } else { (0, 0) };
    }
    let lo = 1i64 << (n - 1);
    let mid = 1i64 << n;
    let hi = 1i64 << (n + 1);
    let k = k as i64;
    if k < lo || k > hi {
        (0, 0)
    } else if k <= mid {
        (k - lo, n as u32 - 1)
    } else {
        (hi - k, n as u32)
    }
}

/// `W_n * f`: Fourier-coefficient product with the window.
pub fn besov_convolve(n: usize, f: &PolySpan) -> PolySpan {
    let w = besov_window(n);
    let lo = w.m.max(f.m);
    let hi = w.degree().min(f.degree());
    if lo > hi {
        return PolySpan::new(0, vec![Complex64::new(0.0, 0.0)]);
    }
    let coeffs = (lo..=hi).map(|k| w.coeff(k) * f.coeff(k)).collect();
    PolySpan::new(lo, coeffs)
}

/// Window indices with possibly nonzero overlap for a degree-`d` polynomial.
pub fn besov_window_range(degree: usize) -> usize {
    let mut n = 0usize;
    while (1usize << n.saturating_sub(1)) <= degree || n == 0 {
        n += 1;
        if 1usize << (n - 1) > degree {
            break;
        }
    }
    n
}

/// Besov calculus: `f(T) = sum_n (W_n * f)(T)` together with the report
/// comparing `||f(T)||` against `a C (2 log C + b + log 5) ||f||_*`.
pub fn besov_calculus(
    t: &ComplexMatrix,
    f: &PolySpan,
    profile: &OperatorProfile,
) -> Result<(ComplexMatrix, BoundReport)> {
    let windows = besov_window_range(f.degree());
    let mut sum = ComplexMatrix::zeros(t.dim());
    let mut besov_norm = 0.0f64;
    for n in 0..windows {
        let piece = besov_convolve(n, f);
        if piece.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            continue;
        }
        sum = sum.add(&piece.apply(t));
        besov_norm += sup_norm_disc(&piece);
    }
    let norm = linalg::op_norm2(&sum)?;
    let c = profile.c_tr;
    // thm2_bound constants at s = 1/2; the dyadic span ratio is at most 5
    let a = 4.0 * std::f64::consts::E / PI;
    let b = 2.0 * 2.0f64.ln() + 6.0;
    let rhs = a * c * (2.0 * c.ln() + b + 5.0f64.ln()) * besov_norm;
    let report = BoundReport::check(
        "besov_calculus",
        norm,
        rhs,
        1e-9 * rhs.abs(),
        format!("deg={} windows={} besov_norm={:.6e} c_tr={:.6e}", f.degree(), windows, besov_norm, c),
    );
    Ok((sum, report))
}

/// Boundary panels of the scaled Stolz domain `rho * B_alpha` are not needed:
/// `sup_{rho B_alpha} |p| = sup_{B_alpha} |p(rho z)|`, evaluated by dilation.
pub fn sup_norm_scaled_stolz(p: &PolySpan, alpha: f64, rho: f64) -> f64 {
    sup_norm_stolz(&p.dilated(rho), alpha)
}

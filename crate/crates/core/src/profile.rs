//! Scalar constants attached to an operator: the Tadmor--Ritt constant C(T),
//! the Kreiss constant, sector constants, the type angle, power bounds, and
//! the finite-dimensional Spijker/Nikolski checks.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::report::BoundReport;

/// Bundle of computed constants with provenance of the grids used.
#[derive(Debug, Clone)]
pub struct OperatorProfile {
    /// C(T), the Tadmor--Ritt constant estimate
    pub c_tr: f64,
    pub c_kreiss: f64,
    /// type angle, arccos(1/C(T))
    pub theta: f64,
    /// sup_n ||T^n|| estimate
    pub pb: f64,
    /// sup_n ||n(T^n - T^{n-1})|| estimate
    pub c1: f64,
    pub spectral_radius_bound: f64,
    pub grid_size: usize,
    pub n_max: usize,
    /// maximizer location for C(T)
    pub argmax_z: Complex64,
    pub power_scan_converged: bool,
}

/// Upper bound on the spectral radius: `min_k ||T^k||^{1/k}` over dyadic `k`.
pub fn spectral_radius_bound(t: &ComplexMatrix) -> Result<f64> {
    let mut bound = f64::INFINITY;
    let mut power = t.clone();
    let mut k = 1usize;
    loop {
        let norm = linalg::op_norm2(&power)?;
        if !norm.is_finite() {
            break;
        }
        bound = bound.min(norm.powf(1.0 / k as f64));
        if k >= 256 || norm == 0.0 {
            break;
        }
        power = power.mul(&power);
        k *= 2;
    }
    Ok(bound)
}

fn check_spectrum_in_disc(t: &ComplexMatrix) -> Result<f64> {
    let bound = spectral_radius_bound(t)?;
    if bound > 1.0 + 1e-8 {
        return Err(Error::SpectrumOutsideDisc { bound });
    }
    Ok(bound)
}

fn tr_value(t: &ComplexMatrix, z: Complex64) -> Result<f64> {
    let r = linalg::resolvent(t, z)?;
    Ok((z - Complex64::new(1.0, 0.0)).norm() * linalg::op_norm2(&r.value)?)
}

fn kreiss_value(t: &ComplexMatrix, z: Complex64) -> Result<f64> {
    let r = linalg::resolvent(t, z)?;
    Ok((z.norm() - 1.0) * linalg::op_norm2(&r.value)?)
}

/// Base angular grid: `grid` equispaced angles plus geometric clustering at
/// arg z = 0, where the Tadmor--Ritt maximizer accumulates.
fn angular_grid(grid: usize) -> Vec<f64> {
    let mut angles = Vec::with_capacity(grid + 65);
    for i in 0..grid {
        angles.push(-PI + 2.0 * PI * (i as f64 + 0.5) / grid as f64);
    }
    for j in 1..=32 {
        let a = PI * 0.5f64.powi(j);
        angles.push(a);
        angles.push(-a);
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles
}

/// Sweep one ring `|z| = radius`, returning the max and its angle. Samples
/// that hit the spectrum are skipped (the sup is approached, not attained,
/// there).
fn ring_sweep<F>(eval: &F, radius: f64, angles: &[f64]) -> Result<(f64, f64)>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let mut best = (0.0f64, 0.0f64);
    for &phi in angles {
        let z = Complex64::from_polar(radius, phi);
        match eval(z) {
            Ok(v) => {
                if v > best.0 {
                    best = (v, phi);
                }
            }
            Err(Error::SingularResolvent { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Refine angularly around `phi0` on a fixed ring until successive passes
/// differ by less than 1e-4 relative.
fn refine_on_ring<F>(eval: &F, radius: f64, phi0: f64, v0: f64) -> Result<(f64, f64)>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let mut best = (v0, phi0);
    let mut width = PI / 16.0;
    for _pass in 0..40 {
        let prev = best.0;
        for i in 0..33 {
            let phi = best.1 - width + 2.0 * width * i as f64 / 32.0;
            let z = Complex64::from_polar(radius, phi);
            match eval(z) {
                Ok(v) => {
                    if v > best.0 {
                        best = (v, phi);
                    }
                }
                Err(Error::SingularResolvent { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        width /= 4.0;
        if (best.0 - prev).abs() <= 1e-4 * prev.max(1e-300) {
            break;
        }
    }
    Ok(best)
}

/// `C(T) = sup_{|z| > 1} ||(z - 1) R(z, T)||`, estimated on rings just
/// outside the unit circle; returns the estimate and the maximizer location.
///
/// The far-field limit contributes the floor value 1.
pub fn tadmor_ritt_constant(t: &ComplexMatrix, grid: usize) -> Result<(f64, Complex64)> {
    check_spectrum_in_disc(t)?;
    let eval = |z| tr_value(t, z);
    let angles = angular_grid(grid);
    let mut best_val = 1.0f64;
    let mut best_z = Complex64::new(f64::INFINITY, 0.0);
    for &delta in &[1e-6, 1e-4, 1e-2] {
        let radius = 1.0 + delta;
        let (v, phi) = ring_sweep(&eval, radius, &angles)?;
        let (v, phi) = refine_on_ring(&eval, radius, phi, v)?;
        if v > best_val {
            best_val = v;
            best_z = Complex64::from_polar(radius, phi);
        }
    }
    Ok((best_val, best_z))
}

/// `C_Kreiss(T) = sup_{|z| > 1} ||(|z| - 1) R(z, T)||` over a log-spaced
/// family of rings.
pub fn kreiss_constant(t: &ComplexMatrix, grid: usize) -> Result<f64> {
    check_spectrum_in_disc(t)?;
    kreiss_constant_unchecked(t, grid)
}

/// `kreiss_constant` without the power-norm spectral precheck, for operators
/// whose spectrum lies in the closed disc by construction (e.g. a known
/// unimodular eigenvalue set under a similarity). The power-norm certificate
/// `min_k ||T^k||^{1/k}` over bounded `k` cannot fall below the basis
/// condition number's `k`-th root, so it rejects such operators spuriously.
pub fn kreiss_constant_unchecked(t: &ComplexMatrix, grid: usize) -> Result<f64> {
    let eval = |z| kreiss_value(t, z);
    let angles = angular_grid(grid);
    let mut best = 1.0f64;
    // log-spaced delta in [1e-6, 10]
    let rings = 22usize;
    for j in 0..rings {
        let delta = 1e-6 * (1e7f64).powf(j as f64 / (rings - 1) as f64);
        let radius = 1.0 + delta;
        let (v, phi) = ring_sweep(&eval, radius, &angles)?;
        let (v, _) = refine_on_ring(&eval, radius, phi, v)?;
        best = best.max(v);
    }
    Ok(best)
}

/// `C_eta(T)`: sup of `||(z - 1) R(z, T)||` over the exterior of the Stolz
/// domain `B_eta`, reduced to its boundary by the maximum principle.
///
/// `grid` controls the boundary sampling density. Errors with `EtaTooSmall`
/// when `eta` does not exceed the type angle derived from C(T).
pub fn sector_constant(t: &ComplexMatrix, eta: f64, grid: usize) -> Result<f64> {
    check_spectrum_in_disc(t)?;
    let (c_tr, _) = tadmor_ritt_constant(t, grid)?;
    let theta = (1.0 / c_tr).acos();
    if eta <= theta {
        return Err(Error::EtaTooSmall { eta, theta });
    }
    sector_constant_with_theta(t, eta, theta, grid)
}

/// Sector constant sweep with the type angle supplied by the caller (used
/// when C(T) has already been profiled).
pub fn sector_constant_with_theta(
    t: &ComplexMatrix,
    eta: f64,
    theta: f64,
    grid: usize,
) -> Result<f64> {
    if eta <= theta {
        return Err(Error::EtaTooSmall { eta, theta });
    }
    let eval = |z| tr_value(t, z);
    let mut best = 0.0f64;
    let n_seg = grid.max(64);
    // tangent segments z = 1 - t e^{+-i eta}: geometric t-grid toward z = 1
    for sign in [1.0f64, -1.0] {
        let dir = Complex64::from_polar(1.0, sign * eta);
        for i in 0..n_seg {
            // log-spaced from 1e-9 to cos(eta)
            let frac = i as f64 / (n_seg - 1) as f64;
            let tval = 1e-9 * (eta.cos() / 1e-9).powf(frac);
            let z = Complex64::new(1.0, 0.0) - dir * tval;
            match eval(z) {
                Ok(v) => best = best.max(v),
                Err(Error::SingularResolvent { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    // circular arc of radius sin(eta), angles |d| in [pi/2 - eta, pi]
    let n_arc = 2 * grid.max(64);
    for i in 0..n_arc {
        let span = 2.0 * (PI - (PI / 2.0 - eta));
        let phi = (PI / 2.0 - eta) + span * (i as f64 + 0.5) / n_arc as f64;
        let z = Complex64::from_polar(eta.sin(), phi);
        match eval(z) {
            Ok(v) => best = best.max(v),
            Err(Error::SingularResolvent { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Result of the power scan.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteCharacteristics {
    pub pb: f64,
    pub c1: f64,
    /// true when the decay criterion (not the cap) terminated the scan
    pub converged: bool,
    pub terms: usize,
}

/// Scan `||T^n||` and `n ||T^n - T^{n-1}||` up to `n_max`, stopping early
/// once both sequences have stayed below half their running max for 50
/// consecutive steps.
pub fn discrete_characteristics(t: &ComplexMatrix, n_max: usize) -> Result<DiscreteCharacteristics> {
    let mut pb = 0.0f64;
    let mut c1 = 0.0f64;
    let mut prev = ComplexMatrix::identity(t.dim());
    let mut decayed_streak = 0usize;
    let mut n = 0usize;
    let mut converged = false;
    while n < n_max {
        n += 1;
        let cur = prev.mul(t);
        let norm = linalg::op_norm2(&cur)?;
        if norm > 1e12 {
            return Err(Error::Overflow { n, norm });
        }
        let diff = n as f64 * linalg::op_norm2(&cur.sub(&prev))?;
        pb = pb.max(norm);
        c1 = c1.max(diff);
        if norm < pb / 2.0 && diff < c1 / 2.0 {
            decayed_streak += 1;
            if decayed_streak >= 50 {
                converged = true;
                break;
            }
        } else {
            decayed_streak = 0;
        }
        prev = cur;
    }
    Ok(DiscreteCharacteristics { pb, c1, converged, terms: n })
}

/// Closed-form power characteristics for a diagonal operator: per eigenvalue,
/// `pb = max |lambda|` and `c1 = max_j sup_n n |lambda_j|^{n-1} |lambda_j - 1|`,
/// the inner sup evaluated at the integer neighbors of `-1/log|lambda|`.
pub fn diagonal_characteristics(diag: &[Complex64]) -> Result<(f64, f64)> {
    let mut pb = 0.0f64;
    let mut c1 = 0.0f64;
    for &lambda in diag {
        let modulus = lambda.norm();
        if modulus > 1.0 + 1e-12 {
            return Err(Error::SpectrumOutsideDisc { bound: modulus });
        }
        if (lambda - Complex64::new(1.0, 0.0)).norm() < 1e-15 {
            pb = pb.max(1.0);
            continue;
        }
        if modulus >= 1.0 {
            // unimodular, not 1: n |lambda - 1| is unbounded
            return Err(Error::DomainError(
                "closed-form c1 undefined for unimodular eigenvalue != 1".into(),
            ));
        }
        pb = pb.max(modulus);
        let gap = (lambda - Complex64::new(1.0, 0.0)).norm();
        if modulus == 0.0 {
            c1 = c1.max(gap); // only n = 1 survives
            continue;
        }
        let n_star = -1.0 / modulus.ln();
        let mut best = 0.0f64;
        for cand in [n_star.floor(), n_star.ceil(), 1.0, 2.0] {
            if cand >= 1.0 && cand.is_finite() {
                best = best.max(cand * modulus.powf(cand - 1.0));
            }
        }
        c1 = c1.max(best * gap);
    }
    Ok((pb, c1))
}

/// Spijker's finite-dimensional bound `Pb(T) <= e C_Kreiss(T) N`.
pub fn spijker_check(t: &ComplexMatrix, c_kreiss: f64, pb: f64) -> BoundReport {
    let n = t.dim() as f64;
    BoundReport::check(
        "spijker",
        pb,
        std::f64::consts::E * c_kreiss * n,
        0.0,
        format!("N={} c_kreiss={:.6e}", t.dim(), c_kreiss),
    )
}

/// Nikolski's sublinear bound for Kreiss operators with unimodular spectrum
/// and an explicit eigenbasis: `Pb(T) <= 2 pi C_Kreiss(T) N^{1 - eps}` with
/// `eps = 0.32 / b(X_N)^2` and `b` the basis constant (max coordinate
/// projection norm over contiguous index ranges).
pub fn nikolski_check(
    eigvals: &[Complex64],
    eigvecs: &ComplexMatrix,
    c_kreiss: f64,
) -> Result<BoundReport> {
    let n = eigvals.len();
    if n != eigvecs.dim() {
        return Err(Error::ShapeError { rows: eigvecs.dim(), cols: n });
    }
    for &v in eigvals {
        let deviation = (v.norm() - 1.0).abs();
        if deviation > 1e-10 {
            return Err(Error::SpectrumNotUnimodular { value: v, deviation });
        }
    }
    let vinv = linalg::inverse(eigvecs)?;
    let b = basis_constant(eigvecs, &vinv)?;
    let eps = 0.32 / (b * b);
    // T = V diag(lambda) V^{-1}; the power scan cannot converge for
    // unimodular spectrum, so it reports a bounded-window lower bound
    let t = eigvecs.mul(&ComplexMatrix::diagonal(eigvals)).mul(&vinv);
    let pb = discrete_characteristics(&t, 2048)?.pb;
    let rhs = 2.0 * PI * c_kreiss * (n as f64).powf(1.0 - eps);
    Ok(BoundReport::check(
        "nikolski",
        pb,
        rhs,
        0.0,
        format!("N={n} b={b:.6} eps={eps:.6} c_kreiss={c_kreiss:.6e}"),
    ))
}

/// Basis constant `b(X_N) = sup_{l <= k} ||P_{l..k}||` where `P_{l..k}` is the
/// coordinate projection onto span of basis columns `l..=k`.
pub fn basis_constant(v: &ComplexMatrix, vinv: &ComplexMatrix) -> Result<f64> {
    let n = v.dim();
    let mut best = 0.0f64;
    for l in 0..n {
        for k in l..n {
            // P = V[:, l..=k] * Vinv[l..=k, :]
            let mut p = ComplexMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in l..=k {
                        acc += v[(i, c)] * vinv[(c, j)];
                    }
                    p[(i, j)] = acc;
                }
            }
            best = best.max(linalg::op_norm2(&p)?);
        }
    }
    Ok(best)
}

/// Full profile: constants, type angle, power scan.
pub fn profile_operator(t: &ComplexMatrix, grid: usize, n_max: usize) -> Result<OperatorProfile> {
    let spectral_radius = check_spectrum_in_disc(t)?;
    let (c_tr, argmax_z) = tadmor_ritt_constant(t, grid)?;
    let c_kreiss = kreiss_constant(t, grid)?.min(c_tr);
    let theta = (1.0 / c_tr).acos();
    let chars = match discrete_characteristics(t, n_max) {
        Ok(c) => c,
        Err(Error::Overflow { n, norm }) => return Err(Error::Overflow { n, norm }),
        Err(e) => return Err(e),
    };
    Ok(OperatorProfile {
        c_tr,
        c_kreiss,
        theta,
        pb: chars.pb,
        c1: chars.c1,
        spectral_radius_bound: spectral_radius,
        grid_size: grid,
        n_max,
        argmax_z,
        power_scan_converged: chars.converged,
    })
}

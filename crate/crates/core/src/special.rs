//! Exponential integral `Ei(s) = ∫_s^∞ e^{-x}/x dx` (elsewhere written E1),
//! the analytic keyhole majorant, and the numeric keyhole kernel integral.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{self, Measure};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Argument triple of the keyhole kernel bound.
#[derive(Debug, Clone, Copy)]
pub struct Lemma2Inputs {
    pub r: f64,
    pub m: usize,
    pub eta: f64,
}

impl Lemma2Inputs {
    pub fn new(r: f64, m: usize, eta: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0 && eta > 0.0 && eta < std::f64::consts::FRAC_PI_2) {
            return Err(Error::BadParameters { eta, r });
        }
        Ok(Self { r, m, eta })
    }
}

/// `∫_s^∞ e^{-x}/x dx` for `s > 0`, relative error below 1e-12.
///
/// Power series for `s < 1`, continued fraction (modified Lentz) for `s >= 1`.
pub fn exp_integral(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::DomainError(format!("exp_integral requires s > 0, got {s}")));
    }
    if s < 1.0 {
        // E1(s) = -gamma - ln s + sum_{k>=1} (-1)^{k+1} s^k / (k * k!)
        let mut sum = 0.0f64;
        let mut term = 1.0f64; // s^k / k!
        for k in 1..=200 {
            term *= s / k as f64;
            let contribution = if k % 2 == 1 { term / k as f64 } else { -term / k as f64 };
            sum += contribution;
            if contribution.abs() < 1e-15 * (sum.abs() + 1e-300) {
                break;
            }
        }
        Ok(-EULER_GAMMA - s.ln() + sum)
    } else {
        // E1(s) = e^{-s} / (s + 1 - 1/(s + 3 - 4/(s + 5 - 9/(...))))
        let tiny = 1e-300;
        let mut d = 1.0 / (s + 1.0);
        let mut f = d;
        let mut c = f / tiny;
        for k in 1..=500u32 {
            let a = -((k * k) as f64);
            let b = s + (2 * k + 1) as f64;
            d = b + a * d;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + a / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-15 {
                break;
            }
        }
        Ok((-s).exp() * f)
    }
}

/// The analytic majorant
/// `4 (sin η)^{m+1} log(4/cos η) + 4 Ei(r (m+1)/2 cos η) + 2π (1+r)^m`.
pub fn lemma2_bound(inputs: Lemma2Inputs) -> Result<f64> {
    let Lemma2Inputs { r, m, eta } = inputs;
    let mf = m as f64;
    let ei = exp_integral(r * (mf + 1.0) / 2.0 * eta.cos())?;
    Ok(4.0 * eta.sin().powi(m as i32 + 1) * (4.0 / eta.cos()).ln()
        + 4.0 * ei
        + 2.0 * std::f64::consts::PI * (1.0 + r).powi(m as i32))
}

/// Simplified majorant valid for `r <= 1/(m+1)`:
/// `-8 log cos η - 4 log(r(m+1)) + 2π(1+r)^m + 12 log 2`.
pub fn lemma2_bound_small_r(inputs: Lemma2Inputs) -> Result<f64> {
    let Lemma2Inputs { r, m, eta } = inputs;
    let mf = m as f64;
    if r > 1.0 / (mf + 1.0) {
        return Err(Error::DomainError(format!(
            "simplified majorant requires r <= 1/(m+1), got r = {r}, m = {m}"
        )));
    }
    Ok(-8.0 * eta.cos().ln() - 4.0 * (r * (mf + 1.0)).ln()
        + 2.0 * std::f64::consts::PI * (1.0 + r).powi(m as i32)
        + 12.0 * 2.0f64.ln())
}

/// Arclength integral `∫_{∂Ω_{η,r}} |z|^m / |z-1| |dz|` by panel quadrature.
pub fn keyhole_kernel_integral(inputs: Lemma2Inputs, tol: f64) -> Result<f64> {
    let contour = geometry::keyhole_contour(inputs.eta, inputs.r)?;
    let m = inputs.m as i32;
    let (value, _err) = geometry::contour_quadrature(
        &contour.panels,
        |z: Complex64| {
            let d = (z - Complex64::new(1.0, 0.0)).norm();
            Ok(Complex64::new(z.norm().powi(m) / d, 0.0))
        },
        tol,
        Measure::ArcLength,
    )?;
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: composite Simpson after the substitution
    /// x = e^u, which turns the integrand into the smooth bounded e^{-e^u}
    /// on u in [ln s, ln U].
    fn ei_oracle(s: f64) -> f64 {
        let upper = (s + 750.0).min(800.0).ln();
        let lower = s.ln();
        let n = 400_000usize; // even
        let h = (upper - lower) / n as f64;
        let f = |u: f64| (-u.exp()).exp();
        let mut sum = f(lower) + f(upper);
        for i in 1..n {
            let u = lower + i as f64 * h;
            sum += if i % 2 == 1 { 4.0 * f(u) } else { 2.0 * f(u) };
        }
        sum * h / 3.0
    }

    #[test]
    fn ei_reference_values() {
        // frozen from the Simpson oracle (matches published E1 tables)
        let e1 = exp_integral(1.0).unwrap();
        assert!((e1 - 0.219_383_934_395_520_27).abs() < 1e-12, "Ei(1) = {e1}");
        let e05 = exp_integral(0.5).unwrap();
        assert!((e05 - 0.559_773_594_776_160_17).abs() < 1e-12, "Ei(0.5) = {e05}");
    }

    #[test]
    fn ei_matches_quadrature_oracle() {
        for &s in &[1e-3, 0.1, 0.25, 0.5, 0.9, 1.0, 1.5, 3.0, 10.0] {
            let got = exp_integral(s).unwrap();
            let want = ei_oracle(s);
            assert!(
                (got - want).abs() < 1e-10 * want.abs().max(1e-12),
                "s = {s}: got {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn ei_small_argument_log_bound() {
        // Ei(s) < log(1/s) for s in (0, 1/2]
        for &s in &[1e-4, 1e-2, 0.25, 0.5] {
            assert!(exp_integral(s).unwrap() < (1.0 / s).ln());
        }
    }

    #[test]
    fn ei_two_sided_sandwich() {
        // (1/2) e^{-s} log(1 + 2/s) < Ei(s) < e^{-s} log(1 + 1/s)
        let mut s = 1e-4f64;
        while s <= 50.0 {
            let ei = exp_integral(s).unwrap();
            let lower = 0.5 * (-s).exp() * (1.0 + 2.0 / s).ln();
            let upper = (-s).exp() * (1.0 + 1.0 / s).ln();
            assert!(lower < ei && ei < upper, "sandwich fails at s = {s}");
            s *= 1.3;
        }
    }

    #[test]
    fn ei_decreasing_and_log_convex() {
        let grid: Vec<f64> = (0..60).map(|i| 1e-3 * 1.2f64.powi(i)).collect();
        let vals: Vec<f64> = grid.iter().map(|&s| exp_integral(s).unwrap().ln()).collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0], "Ei must be decreasing");
        }
        // log-convexity on a uniform grid: midpoint below average
        for i in 0..40 {
            let s0 = 0.05 + 0.1 * i as f64;
            let l0 = exp_integral(s0).unwrap().ln();
            let l1 = exp_integral(s0 + 0.1).unwrap().ln();
            let lm = exp_integral(s0 + 0.05).unwrap().ln();
            assert!(lm <= (l0 + l1) / 2.0 + 1e-12);
        }
    }

    #[test]
    fn ei_domain_error() {
        assert!(exp_integral(0.0).is_err());
        assert!(exp_integral(-1.0).is_err());
    }

    #[test]
    fn majorant_direct_formula() {
        // (r=0.1, m=0, eta=pi/3) -> 4 (sqrt(3)/2) ln 8 + 4 Ei(0.025) + 2 pi
        let inputs = Lemma2Inputs::new(0.1, 0, std::f64::consts::FRAC_PI_3).unwrap();
        let got = lemma2_bound(inputs).unwrap();
        let want = 4.0 * (3.0f64.sqrt() / 2.0) * 8.0f64.ln()
            + 4.0 * exp_integral(0.025).unwrap()
            + 2.0 * std::f64::consts::PI;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn majorant_dominated_by_simplified_form() {
        for &(r, m, eta) in &[
            (0.05f64, 10usize, 0.5f64),
            (0.01, 50, 1.0),
            (0.2, 4, std::f64::consts::FRAC_PI_3),
        ] {
            let inputs = Lemma2Inputs::new(r, m, eta).unwrap();
            assert!(r <= 1.0 / (m as f64 + 1.0));
            let full = lemma2_bound(inputs).unwrap();
            let simplified = lemma2_bound_small_r(inputs).unwrap();
            assert!(full <= simplified + 1e-12, "r={r} m={m} eta={eta}");
        }
    }

    #[test]
    fn kernel_integral_below_majorant_spot_checks() {
        for &(r, m, eta) in &[
            (0.1f64, 0usize, std::f64::consts::FRAC_PI_3),
            (0.5, 0, std::f64::consts::FRAC_PI_4),
            (0.6, 2, std::f64::consts::FRAC_PI_3), // degenerate r >= cos eta
        ] {
            let inputs = Lemma2Inputs::new(r, m, eta).unwrap();
            let g = keyhole_kernel_integral(inputs, 1e-8).unwrap();
            let bound = lemma2_bound(inputs).unwrap();
            assert!(g > 0.0);
            assert!(g <= bound, "G = {g} exceeds majorant {bound} at r={r} m={m} eta={eta}");
        }
    }

    #[test]
    fn kernel_arc_around_one_contribution_bound() {
        // the arc around 1 contributes 2 * int_0^{pi - eta} |1 + r e^{i d}|^m dd
        // which is at most 2 pi (1 + r)^m; for m = 0 exactly 2 (pi - eta)
        let eta = std::f64::consts::FRAC_PI_4;
        let r = 0.5f64;
        let contour = geometry::keyhole_contour(eta, r).unwrap();
        // first panel is the arc around 1
        let (val, _) = geometry::contour_quadrature(
            &contour.panels[0..1],
            |z: Complex64| {
                let d = (z - Complex64::new(1.0, 0.0)).norm();
                Ok(Complex64::new(1.0 / d, 0.0))
            },
            1e-10,
            Measure::ArcLength,
        )
        .unwrap();
        let expected = 2.0 * (std::f64::consts::PI - eta);
        assert!((val.re - expected).abs() < 1e-8);
        assert!(val.re <= 2.0 * std::f64::consts::PI);
    }
}

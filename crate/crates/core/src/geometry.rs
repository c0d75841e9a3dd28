//! Stolz domains, keyhole contours, and composite Gauss--Legendre contour
//! quadrature with recursive panel halving.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Stolz domain: interior of the convex hull of `{1}` and the disc of
/// radius `sin(theta)` around the origin.
#[derive(Debug, Clone, Copy)]
pub struct StolzDomain {
    pub theta: f64,
}

impl StolzDomain {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::BadParameters { eta: theta, r: f64::NAN });
        }
        Ok(Self { theta })
    }

    /// Strict interior membership test.
    ///
    /// The hull is the union of the open disc of radius `sin(theta)` and the
    /// open triangle spanned by 1 and the two tangent points; the chord
    /// between the tangent points lies inside the disc, so the two pieces
    /// cover the interior.
    pub fn contains(&self, z: Complex64) -> bool {
        let s = self.theta.sin();
        if z.norm() < s {
            return true;
        }
        // tangent points of the tangent lines from 1 to the circle |z| = s
        let upper = Complex64::from_polar(s, std::f64::consts::FRAC_PI_2 - self.theta);
        let lower = upper.conj();
        let one = Complex64::new(1.0, 0.0);
        strictly_inside_triangle(z, one, upper, lower)
    }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn strictly_inside_triangle(z: Complex64, a: Complex64, b: Complex64, c: Complex64) -> bool {
    let d1 = cross(a, b, z);
    let d2 = cross(b, c, z);
    let d3 = cross(c, a, z);
    (d1 > 0.0 && d2 > 0.0 && d3 > 0.0) || (d1 < 0.0 && d2 < 0.0 && d3 < 0.0)
}

/// One parametrized piece of a contour, `t` in `[0, 1]`.
#[derive(Debug, Clone)]
pub enum Panel {
    Arc {
        center: Complex64,
        radius: f64,
        /// angle at `t = 0`
        angle_start: f64,
        /// angle at `t = 1`; `angle_end > angle_start` is counterclockwise
        angle_end: f64,
    },
    Segment {
        start: Complex64,
        end: Complex64,
    },
}

impl Panel {
    pub fn point(&self, t: f64) -> Complex64 {
        match self {
            Panel::Arc { center, radius, angle_start, angle_end } => {
                let angle = angle_start + t * (angle_end - angle_start);
                center + Complex64::from_polar(*radius, angle)
            }
            Panel::Segment { start, end } => start + (end - start) * t,
        }
    }

    pub fn derivative(&self, t: f64) -> Complex64 {
        match self {
            Panel::Arc { radius, angle_start, angle_end, .. } => {
                let sweep = angle_end - angle_start;
                let angle = angle_start + t * sweep;
                Complex64::i() * sweep * Complex64::from_polar(*radius, angle)
            }
            Panel::Segment { start, end } => end - start,
        }
    }
}

/// Positively oriented boundary of the keyhole domain, the union of a Stolz
/// domain of angle `eta` and the disc of radius `r` around 1.
#[derive(Debug, Clone)]
pub struct KeyholeContour {
    pub eta: f64,
    pub r: f64,
    pub panels: Vec<Panel>,
}

/// Build the keyhole boundary.
///
/// For `r < cos(eta)` this is the three-piece decomposition: arc of radius
/// `sin(eta)` around 0, two tangent segments, and an arc of radius `r` around
/// 1 (4 panels). For `r >= cos(eta)` the tangent segments vanish and the
/// boundary degenerates to two circular arcs joined at the circle-circle
/// intersections.
pub fn keyhole_contour(eta: f64, r: f64) -> Result<KeyholeContour> {
    use std::f64::consts::PI;
    if !(eta > 0.0 && eta < PI / 2.0 && r > 0.0 && r < 1.0) {
        return Err(Error::BadParameters { eta, r });
    }
    let s = eta.sin();
    let one = Complex64::new(1.0, 0.0);
    let panels = if r < eta.cos() {
        let upper_tangent = one - Complex64::from_polar(eta.cos(), -eta);
        let lower_tangent = one - Complex64::from_polar(eta.cos(), eta);
        vec![
            // arc around 1, from -(pi - eta) through 0 to +(pi - eta)
            Panel::Arc { center: one, radius: r, angle_start: -(PI - eta), angle_end: PI - eta },
            // upper segment toward the big circle; the corner belongs to the segment
            Panel::Segment { start: one - Complex64::from_polar(r, -eta), end: upper_tangent },
            // big arc, from pi/2 - eta through pi to 3pi/2 + eta
            Panel::Arc {
                center: Complex64::new(0.0, 0.0),
                radius: s,
                angle_start: PI / 2.0 - eta,
                angle_end: 3.0 * PI / 2.0 + eta,
            },
            // lower segment back toward the small circle
            Panel::Segment { start: lower_tangent, end: one - Complex64::from_polar(r, eta) },
        ]
    } else {
        // circle-circle intersection of |z| = sin(eta) and |z - 1| = r
        let x = (1.0 + s * s - r * r) / 2.0;
        let y_sq = s * s - x * x;
        if y_sq <= 0.0 {
            // one disc swallows the other; cannot happen for r < 1, eta < pi/2
            return Err(Error::BadParameters { eta, r });
        }
        let y = y_sq.sqrt();
        let alpha = y.atan2(x); // junction angle on the big circle
        let beta = y.atan2(x - 1.0); // junction angle on the small circle, in (pi/2, pi)
        vec![
            Panel::Arc { center: one, radius: r, angle_start: -beta, angle_end: beta },
            Panel::Arc {
                center: Complex64::new(0.0, 0.0),
                radius: s,
                angle_start: alpha,
                angle_end: 2.0 * PI - alpha,
            },
        ]
    };
    let contour = KeyholeContour { eta, r, panels };
    debug_assert!(closure_mismatch(&contour.panels) < 1e-12);
    Ok(contour)
}

/// Largest endpoint gap between consecutive panels (including wrap-around).
pub fn closure_mismatch(panels: &[Panel]) -> f64 {
    let mut worst = 0.0f64;
    for (i, p) in panels.iter().enumerate() {
        let next = &panels[(i + 1) % panels.len()];
        worst = worst.max((p.point(1.0) - next.point(0.0)).norm());
    }
    worst
}

/// Positively oriented boundary of the Stolz domain `B_alpha`, as panels.
pub fn stolz_boundary(alpha: f64) -> Vec<Panel> {
    use std::f64::consts::PI;
    let s = alpha.sin();
    let one = Complex64::new(1.0, 0.0);
    if (alpha - PI / 2.0).abs() < 1e-12 {
        // B_{pi/2} is the unit disc
        return vec![Panel::Arc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            angle_start: 0.0,
            angle_end: 2.0 * PI,
        }];
    }
    let upper = one - Complex64::from_polar(alpha.cos(), -alpha);
    let lower = one - Complex64::from_polar(alpha.cos(), alpha);
    vec![
        Panel::Segment { start: one, end: upper },
        Panel::Arc {
            center: Complex64::new(0.0, 0.0),
            radius: s,
            angle_start: PI / 2.0 - alpha,
            angle_end: 3.0 * PI / 2.0 + alpha,
        },
        Panel::Segment { start: lower, end: one },
    ]
}

/// Integration measure along a panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `dz` (complex line integral)
    Dz,
    /// `|dz|` (arclength)
    ArcLength,
}

/// Values a contour integral can accumulate.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    fn accumulate(&mut self, other: &Self);
    fn scaled(&self, s: Complex64) -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, s: Complex64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for ComplexMatrix {
    fn zero_like(&self) -> Self {
        ComplexMatrix::zeros(self.dim())
    }
    fn accumulate(&mut self, other: &Self) {
        *self = self.add(other);
    }
    fn scaled(&self, s: Complex64) -> Self {
        self.scale(s)
    }
    fn magnitude(&self) -> f64 {
        self.frobenius()
    }
}

const MAX_HALVINGS: usize = 14;

fn gl16() -> &'static ([f64; 16], [f64; 16]) {
    static NODES: OnceLock<([f64; 16], [f64; 16])> = OnceLock::new();
    NODES.get_or_init(|| {
        // Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_16.
        let n = 16usize;
        let mut nodes = [0.0f64; 16];
        let mut weights = [0.0f64; 16];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn panel_level<V, F>(panel: &Panel, f: &F, measure: Measure, level: usize) -> Result<V>
where
    V: QuadValue,
    F: Fn(Complex64) -> Result<V>,
{
    let (nodes, weights) = gl16();
    let pieces = 1usize << level;
    let h = 1.0 / pieces as f64;
    let mut total: Option<V> = None;
    for piece in 0..pieces {
        let a = piece as f64 * h;
        for (&x, &w) in nodes.iter().zip(weights.iter()) {
            let t = a + h * (x + 1.0) / 2.0;
            let z = panel.point(t);
            let dz = panel.derivative(t);
            let weight = match measure {
                Measure::Dz => dz * (w * h / 2.0),
                Measure::ArcLength => Complex64::new(dz.norm() * w * h / 2.0, 0.0),
            };
            let term = f(z)?.scaled(weight);
            match &mut total {
                Some(acc) => acc.accumulate(&term),
                None => total = Some(term),
            }
        }
    }
    Ok(total.expect("at least one node"))
}

/// Composite Gauss--Legendre of order 16 per panel with recursive halving
/// until two successive refinement levels agree within
/// `tol * (1 + |value|)`. Returns the integral and the last inter-level
/// difference summed over panels.
pub fn contour_quadrature<V, F>(
    panels: &[Panel],
    f: F,
    tol: f64,
    measure: Measure,
) -> Result<(V, f64)>
where
    V: QuadValue,
    F: Fn(Complex64) -> Result<V>,
{
    let per_panel_tol = tol / panels.len().max(1) as f64;
    let mut total: Option<V> = None;
    let mut error_estimate = 0.0f64;
    for panel in panels {
        let mut prev = panel_level(panel, &f, measure, 0)?;
        let mut converged = false;
        let mut last_diff = f64::INFINITY;
        for level in 1..=MAX_HALVINGS {
            let cur = panel_level(panel, &f, measure, level)?;
            let mut diff = cur.clone();
            diff.accumulate(&prev.scaled(Complex64::new(-1.0, 0.0)));
            last_diff = diff.magnitude();
            prev = cur;
            if last_diff <= per_panel_tol * (1.0 + prev.magnitude()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureStall { depth: MAX_HALVINGS, error: last_diff });
        }
        error_estimate += last_diff;
        match &mut total {
            Some(acc) => acc.accumulate(&prev),
            None => total = Some(prev),
        }
    }
    Ok((total.expect("at least one panel"), error_estimate))
}

/// Total arclength of a panel list.
pub fn arclength(panels: &[Panel]) -> f64 {
    panels
        .iter()
        .map(|p| match p {
            Panel::Arc { radius, angle_start, angle_end, .. } => {
                radius * (angle_end - angle_start).abs()
            }
            Panel::Segment { start, end } => (end - start).norm(),
        })
        .sum()
}

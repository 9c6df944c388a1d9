//! The truncated-cone upper bound for ∫φ(f) and its closed forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conesolver::{max_slope, median_t, solve_r};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, gauss_legendre};
use crate::roots::golden_max;
use crate::symmetrize::kappa;

/// Number of slopes in the coarse scan.
pub const GRID_SLOPES: usize = 257;
/// Golden-section tolerance in m.
pub const SLOPE_TOL: f64 = 1e-10;
/// Gauss–Legendre order for the inner integrals.
pub const INNER_NODES: usize = 64;

/// A convex φ: [0, ∞) → [0, ∞) with φ(0) = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ConvexGauge {
    /// t^α with α ≥ 1.
    #[serde(rename = "power")]
    Power { alpha: f64 },
    /// e^t − 1.
    #[serde(rename = "exp")]
    ExpMinusOne,
    /// e^{t²} − 1.
    #[serde(rename = "exp-square")]
    ExpSquareMinusOne,
    /// Linear interpolation of the knots, extended linearly past the last.
    #[serde(rename = "pwl-convex")]
    PiecewiseLinearConvex { knots: Vec<(f64, f64)> },
}

impl ConvexGauge {
    pub fn power(alpha: f64) -> Result<Self> {
        let g = ConvexGauge::Power { alpha };
        g.validate()?;
        Ok(g)
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        let g = ConvexGauge::PiecewiseLinearConvex { knots };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexGauge::Power { alpha } => {
                if !(alpha.is_finite() && *alpha >= 1.0) {
                    return Err(Error::InvalidGauge(format!("power exponent must be ≥ 1 (got {alpha})")));
                }
            }
            ConvexGauge::ExpMinusOne | ConvexGauge::ExpSquareMinusOne => {}
            ConvexGauge::PiecewiseLinearConvex { knots } => {
                if knots.len() < 2 {
                    return Err(Error::InvalidGauge("need at least two knots".into()));
                }
                if knots[0] != (0.0, 0.0) {
                    return Err(Error::InvalidGauge("first knot must be (0, 0)".into()));
                }
                if knots.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
                    return Err(Error::InvalidGauge("non-finite knot".into()));
                }
                let mut prev = f64::NEG_INFINITY;
                for w in knots.windows(2) {
                    let dt = w[1].0 - w[0].0;
                    if dt <= 0.0 {
                        return Err(Error::InvalidGauge("knot abscissae must increase".into()));
                    }
                    let slope = (w[1].1 - w[0].1) / dt;
                    if slope < prev - 1e-10 * prev.abs().max(1.0) {
                        return Err(Error::InvalidGauge("slopes must be nondecreasing".into()));
                    }
                    prev = slope;
                }
                let first = (knots[1].1 - knots[0].1) / (knots[1].0 - knots[0].0);
                if first < -1e-12 {
                    return Err(Error::InvalidGauge("gauge must be nonnegative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            ConvexGauge::Power { alpha } => {
                if *alpha == 1.0 {
                    t
                } else {
                    t.powf(*alpha)
                }
            }
            ConvexGauge::ExpMinusOne => t.exp_m1(),
            ConvexGauge::ExpSquareMinusOne => (t * t).exp_m1(),
            ConvexGauge::PiecewiseLinearConvex { knots } => {
                let i = match knots.iter().position(|k| k.0 > t) {
                    Some(0) => 0,
                    Some(i) => i - 1,
                    None => knots.len() - 2,
                };
                let (a, b) = (knots[i], knots[i + 1]);
                a.1 + (t - a.0) * (b.1 - a.1) / (b.0 - a.0)
            }
        }
    }

    /// Arguments where φ is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            ConvexGauge::PiecewiseLinearConvex { knots } => knots[1..].iter().map(|k| k.0).collect(),
            _ => Vec::new(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ConvexGauge::Power { alpha } => format!("power({alpha})"),
            ConvexGauge::ExpMinusOne => "exp".into(),
            ConvexGauge::ExpSquareMinusOne => "exp-square".into(),
            ConvexGauge::PiecewiseLinearConvex { knots } => format!("pwl-convex({} knots)", knots.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Generic,
    ClosedForm2d,
    ClosedForm3d,
    Conjecture,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: f64,
    pub argmax_m: f64,
    pub t_m: f64,
    pub r_m: f64,
    pub m0: f64,
    pub n: usize,
    pub c: f64,
    pub f0: f64,
    pub method: BoundMethod,
}

impl BoundReport {
    pub fn per_volume(&self) -> f64 {
        self.bound / self.c
    }
}

/// (2/√π)∫₀ˣ e^{t²} dt for 0 ≤ x ≤ 8.
pub fn erfi(x: f64) -> Result<f64> {
    if !(0.0..=8.0).contains(&x) {
        return Err(Error::OutOfRange(format!("erfi argument {x} outside [0, 8]")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let integral = adaptive(|t| (t * t).exp(), 0.0, x, 1e-13, 40);
    Ok(2.0 / std::f64::consts::PI.sqrt() * integral)
}

fn check_inputs(n: usize, c: f64, f0: f64, phi: &ConvexGauge) -> Result<()> {
    phi.validate()?;
    if n < 2 {
        return Err(Error::OutOfRange(format!("dimension must be ≥ 2 (got {n})")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::OutOfRange(format!("volume must be positive (got {c})")));
    }
    if !(f0 >= 0.0 && f0.is_finite()) {
        return Err(Error::OutOfRange(format!("f0 must be finite and ≥ 0 (got {f0})")));
    }
    Ok(())
}

/// ∫₀¹ φ(scale·s)·w(s) ds with the integration split where φ has kinks.
fn gauge_integral<W: Fn(f64) -> f64>(phi: &ConvexGauge, scale: f64, weight: W) -> f64 {
    let mut breaks = vec![0.0];
    for k in phi.kinks() {
        let s = k / scale;
        if s > 0.0 && s < 1.0 {
            breaks.push(s);
        }
    }
    breaks.push(1.0);
    gauss_legendre(INNER_NODES).integrate_composite(&breaks, |s| phi.eval(scale * s) * weight(s))
}

/// The objective at one slope: (value, r_m, t_m).
fn objective(n: usize, c: f64, f0: f64, phi: &ConvexGauge, m: f64) -> Result<(f64, f64, f64)> {
    let r = solve_r(n, c, m, 1.0)?;
    let t = median_t(n, r, m)?;
    let k = kappa(n - 1);
    let e = (n - 1) as i32;
    let v = gauge_integral(phi, f0 / t, |s| k * (r + m * s).max(0.0).powi(e));
    Ok((v, r, t))
}

fn method_for(n: usize) -> BoundMethod {
    match n {
        2 => BoundMethod::ClosedForm2d,
        3 => BoundMethod::ClosedForm3d,
        _ => BoundMethod::Generic,
    }
}

/// The objective on the coarse slope grid, as (m, F(m)) pairs.
pub fn reduced_bound_trace(n: usize, c: f64, f0: f64, phi: &ConvexGauge) -> Result<Vec<(f64, f64)>> {
    check_inputs(n, c, f0, phi)?;
    let m0 = max_slope(n, c, 1.0);
    let slopes: Vec<f64> = (0..GRID_SLOPES)
        .map(|i| {
            if i == GRID_SLOPES - 1 {
                m0
            } else {
                -m0 + 2.0 * m0 * i as f64 / (GRID_SLOPES - 1) as f64
            }
        })
        .collect();
    slopes
        .par_iter()
        .map(|&m| objective(n, c, f0, phi, m).map(|(v, _, _)| (m, v)))
        .collect()
}

/// Maximizes the reduced objective over m ∈ [−m0, m0] for a cone of volume
/// `c` over the unit interval.
pub fn reduced_bound(n: usize, c: f64, f0: f64, phi: &ConvexGauge) -> Result<BoundReport> {
    check_inputs(n, c, f0, phi)?;
    let m0 = max_slope(n, c, 1.0);
    let report = |bound: f64, m: f64| -> Result<BoundReport> {
        let r = solve_r(n, c, m, 1.0)?;
        Ok(BoundReport {
            bound,
            argmax_m: m,
            t_m: median_t(n, r, m)?,
            r_m: r,
            m0,
            n,
            c,
            f0,
            method: method_for(n),
        })
    };
    if f0 == 0.0 {
        return report(0.0, -m0);
    }
    let trace = reduced_bound_trace(n, c, f0, phi)?;
    if trace.iter().any(|(_, v)| !v.is_finite()) {
        return Err(Error::OutOfRange("bound overflows for this gauge and f0".into()));
    }
    // Endpoints are the incumbents; interior candidates must beat them by
    // more than rounding noise, since the objective is often flat there.
    let last = trace.len() - 1;
    let better = |v: f64, incumbent: f64| v > incumbent + 1e-14 * incumbent.abs();
    let (mut best_m, mut best_v) = trace[0];
    if better(trace[last].1, best_v) {
        (best_m, best_v) = trace[last];
    }
    let best_i = (0..trace.len()).fold(0, |b, i| if trace[i].1 > trace[b].1 { i } else { b });
    if better(trace[best_i].1, best_v) {
        (best_m, best_v) = trace[best_i];
    }
    let lo = trace[best_i.saturating_sub(1)].0;
    let hi = trace[(best_i + 1).min(last)].0;
    let (gm, gv) = golden_max(
        |m| objective(n, c, f0, phi, m).map_or(f64::NEG_INFINITY, |x| x.0),
        lo,
        hi,
        SLOPE_TOL * m0.max(1.0),
    );
    if better(gv, best_v) {
        (best_m, best_v) = (gm, gv);
    }
    report(best_v, best_m)
}

/// Closed form of the two-dimensional bound for φ(t) = t^α.
pub fn power_bound_2d(alpha: f64, c: f64, f0: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::InvalidGauge(format!("power exponent must be ≥ 1 (got {alpha})")));
    }
    if !(c > 0.0) || !(f0 >= 0.0) {
        return Err(Error::OutOfRange("need c > 0 and f0 ≥ 0".into()));
    }
    let s2 = std::f64::consts::SQRT_2;
    Ok(c * f0.powf(alpha) * 2.0 / ((alpha + 1.0) * (alpha + 2.0)) * (s2 / (s2 - 1.0)).powf(alpha))
}

/// n∫₀¹ φ(f0·a·t)(1−t)^{n−1} dt with a = 2^{1/n}/(2^{1/n}−1): the bound per
/// unit volume evaluated on the cone with its vertex at the far end.
pub fn conjecture_bound(n: usize, f0: f64, phi: &ConvexGauge) -> Result<f64> {
    check_inputs(n, 1.0, f0, phi)?;
    if f0 == 0.0 {
        return Ok(0.0);
    }
    let q = 2f64.powf(1.0 / n as f64);
    let a = q / (q - 1.0);
    let e = (n - 1) as i32;
    Ok(n as f64 * gauge_integral(phi, f0 * a, |t| (1.0 - t).powi(e)))
}

/// Cone parameters (r_m, t_m) in the plane for volume `c` on the unit interval.
pub fn params_2d(c: f64, m: f64) -> Result<(f64, f64)> {
    if !(c > 0.0) || m.abs() > c * (1.0 + 1e-12) {
        return Err(Error::SlopeOutOfRange { m, m0: c });
    }
    let m = m.clamp(-c, c);
    let r = (c - m) / 2.0;
    // (√(c²+m²) − (c−m)) / (2m), rationalized
    let t = c / ((c * c + m * m).sqrt() + c - m);
    Ok((r, t))
}

/// Cone parameters (r_m, t_m) in space for volume `c` on the unit interval.
pub fn params_3d(c: f64, m: f64) -> Result<(f64, f64)> {
    let m0 = max_slope(3, c, 1.0);
    if !(c > 0.0) || m.abs() > m0 * (1.0 + 1e-12) {
        return Err(Error::SlopeOutOfRange { m, m0 });
    }
    let m = m.clamp(-m0, m0);
    let pi = std::f64::consts::PI;
    let r = 0.5 * (-m + (4.0 * c / pi - m * m / 3.0).max(0.0).sqrt());
    let r = r.max((-m).max(0.0));
    Ok((r, median_t(3, r, m)?))
}

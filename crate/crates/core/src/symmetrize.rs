//! Schwarz symmetrization profiles: the radius function of the rotationally
//! symmetric body whose sections have the same measure as the original.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Direction};
use crate::quadrature::gauss_legendre;

/// Default number of profile samples.
pub const DEFAULT_KNOTS: usize = 4097;
/// Smallest accepted sample count.
pub const MIN_KNOTS: usize = 33;

/// Volume of the `d`-dimensional unit ball.
pub fn kappa(d: usize) -> f64 {
    let mut k = if d.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut j = if d.is_multiple_of(2) { 2 } else { 3 };
    while j <= d {
        k *= 2.0 * std::f64::consts::PI / j as f64;
        j += 2;
    }
    k
}

/// Concave radius function `v(t)` on `[t0, t1]`, piecewise linear between
/// knots, describing a body of revolution in `dim` dimensions about the
/// first axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileData", into = "ProfileData")]
pub struct Profile {
    dim: usize,
    knots: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct ProfileData {
    dim: usize,
    t0: f64,
    t1: f64,
    knots: Vec<[f64; 2]>,
}

impl TryFrom<ProfileData> for Profile {
    type Error = Error;

    fn try_from(d: ProfileData) -> Result<Self> {
        let p = Profile::new(d.dim, d.knots.into_iter().map(|k| (k[0], k[1])).collect())?;
        let tol = 1e-12 * (1.0 + d.t0.abs().max(d.t1.abs()));
        if (p.t0() - d.t0).abs() > tol || (p.t1() - d.t1).abs() > tol {
            return Err(Error::InvalidProfile(
                "t0/t1 must equal the first and last knot abscissae".into(),
            ));
        }
        Ok(p)
    }
}

impl From<Profile> for ProfileData {
    fn from(p: Profile) -> Self {
        ProfileData {
            dim: p.dim,
            t0: p.t0(),
            t1: p.t1(),
            knots: p.knots.iter().map(|&(t, v)| [t, v]).collect(),
        }
    }
}

impl Profile {
    /// Validates dimension, ordering, sign and concavity (midpoint test at
    /// every interior knot, tolerance 1e-9 relative to the largest radius).
    pub fn new(dim: usize, knots: Vec<(f64, f64)>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidProfile(format!("dimension {dim} < 2")));
        }
        if knots.len() < 2 {
            return Err(Error::InvalidProfile("need at least two knots".into()));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidProfile("knot abscissae must increase strictly".into()));
        }
        let vmax = knots.iter().fold(0.0f64, |m, k| m.max(k.1));
        if knots.iter().any(|k| k.1 < -1e-12 * vmax.max(1.0)) {
            return Err(Error::InvalidProfile("negative radius".into()));
        }
        let knots: Vec<(f64, f64)> = knots.into_iter().map(|(t, v)| (t, v.max(0.0))).collect();
        let tol = 1e-9 * vmax.max(f64::MIN_POSITIVE);
        for w in knots.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let chord = a.1 + (c.1 - a.1) * (b.0 - a.0) / (c.0 - a.0);
            if b.1 < chord - tol {
                return Err(Error::InvalidProfile(format!("radius not concave near t = {}", b.0)));
            }
        }
        if vmax <= 0.0 {
            return Err(Error::DegenerateBody("profile has zero radius everywhere".into()));
        }
        Ok(Profile { dim, knots })
    }

    /// Samples `f` at `count` Chebyshev–Lobatto points of `[t0, t1]`, which
    /// cluster towards the ends where square-root behaviour is common.
    pub fn from_fn<F: Fn(f64) -> f64>(dim: usize, t0: f64, t1: f64, count: usize, f: F) -> Result<Self> {
        let pts = cosine_points(t0, t1, count.max(2));
        Profile::new(dim, pts.into_iter().map(|t| (t, f(t))).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn t0(&self) -> f64 {
        self.knots[0].0
    }

    pub fn t1(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    pub fn length(&self) -> f64 {
        self.t1() - self.t0()
    }

    pub fn max_radius(&self) -> f64 {
        self.knots.iter().fold(0.0f64, |m, k| m.max(k.1))
    }

    /// Linear interpolation; zero outside `[t0, t1]`.
    pub fn eval(&self, t: f64) -> f64 {
        if t < self.t0() || t > self.t1() {
            return 0.0;
        }
        let i = self.knots.partition_point(|k| k.0 <= t);
        if i == 0 {
            return self.knots[0].1;
        }
        if i >= self.knots.len() {
            return self.knots[self.knots.len() - 1].1;
        }
        let (a, b) = (self.knots[i - 1], self.knots[i]);
        a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
    }

    /// Section measure κ_{n−1} v(t)^{n−1}.
    pub fn section(&self, t: f64) -> f64 {
        kappa(self.dim - 1) * self.eval(t).powi(self.dim as i32 - 1)
    }

    /// The same body reflected through t ↦ −t.
    pub fn reflected(&self) -> Profile {
        let knots = self.knots.iter().rev().map(|&(t, v)| (-t, v)).collect();
        Profile { dim: self.dim, knots }
    }

    /// κ_{n−1} ∫ t v(t)^{n−1} dt (first moment along the axis).
    pub(crate) fn first_moment(&self) -> f64 {
        let rule = gauss_legendre(self.dim.div_ceil(2) + 1);
        let e = (self.dim - 1) as i32;
        let k = kappa(self.dim - 1);
        self.knots
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                rule.integrate(a.0, b.0, |t| {
                    let v = a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0);
                    k * t * v.powi(e)
                })
            })
            .sum()
    }
}

/// Volume of the body of revolution described by `p`, composite
/// Gauss–Legendre on every knot interval (exact for the linear pieces).
pub fn profile_volume(p: &Profile) -> f64 {
    let rule = gauss_legendre(p.dim.div_ceil(2) + 1);
    let e = (p.dim - 1) as i32;
    let k = kappa(p.dim - 1);
    p.knots
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            rule.integrate(a.0, b.0, |t| {
                let v = a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0);
                k * v.powi(e)
            })
        })
        .sum()
}

pub(crate) fn cosine_points(a: f64, b: f64, count: usize) -> Vec<f64> {
    let n = count - 1;
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| {
            let th = std::f64::consts::PI * i as f64 / n as f64;
            a + 0.5 * (b - a) * (1.0 - th.cos())
        })
        .collect();
    pts[0] = a;
    pts[n] = b;
    pts
}

/// Sample abscissae for a polytope profile: every vertex height is a knot,
/// and the remaining budget is spread over the pieces in proportion to
/// their length with cosine clustering inside each piece.
fn polytope_knots(breaks: &[f64], count: usize) -> Vec<f64> {
    let (t0, t1) = (breaks[0], breaks[breaks.len() - 1]);
    let len = t1 - t0;
    let pieces = breaks.len() - 1;
    let budget = count.saturating_sub(1).max(pieces);
    let mut out = vec![t0];
    for w in breaks.windows(2) {
        let share = ((w[1] - w[0]) / len * budget as f64).round() as usize;
        let intervals = share.max(2);
        let pts = cosine_points(w[0], w[1], intervals + 1);
        out.extend_from_slice(&pts[1..]);
    }
    out
}

/// Greedy knot placement for curved profiles: start from the breakpoints
/// (each piece halved) and repeatedly split the interval whose midpoint
/// section differs most from the linear interpolant, weighted by length.
fn refine_knots<F: Fn(f64) -> Result<f64>>(
    breaks: &[f64],
    count: usize,
    n: usize,
    radius: F,
) -> Result<Vec<(f64, f64)>> {
    struct Gap {
        a: (f64, f64),
        b: (f64, f64),
        mid: (f64, f64),
        err: f64,
    }
    let e = (n - 1) as i32;
    let gap = |a: (f64, f64), b: (f64, f64)| -> Result<Gap> {
        let t = 0.5 * (a.0 + b.0);
        let v = radius(t)?;
        let lin = 0.5 * (a.1 + b.1);
        let err = (v.powi(e) - lin.powi(e)).abs() * (b.0 - a.0);
        Ok(Gap { a, b, mid: (t, v), err })
    };
    let mut gaps: Vec<Gap> = Vec::new();
    let mut prev = (breaks[0], radius(breaks[0])?);
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let m = (mid, radius(mid)?);
        let end = (w[1], radius(w[1])?);
        gaps.push(gap(prev, m)?);
        gaps.push(gap(m, end)?);
        prev = end;
    }
    let mut heap: BinaryHeap<(OrderedFloat<f64>, Reverse<usize>)> = gaps
        .iter()
        .enumerate()
        .map(|(i, g)| (OrderedFloat(g.err), Reverse(i)))
        .collect();
    let mut alive = vec![true; gaps.len()];
    let mut knots_now = gaps.len() + 1;
    while knots_now < count {
        let Some((_, Reverse(i))) = heap.pop() else { break };
        if !alive[i] {
            continue;
        }
        alive[i] = false;
        let (a, b, m) = (gaps[i].a, gaps[i].b, gaps[i].mid);
        for g in [gap(a, m)?, gap(m, b)?] {
            heap.push((OrderedFloat(g.err), Reverse(gaps.len())));
            gaps.push(g);
            alive.push(true);
        }
        knots_now += 1;
    }
    let mut knots: Vec<(f64, f64)> = gaps
        .iter()
        .zip(&alive)
        .filter(|(_, &live)| live)
        .map(|(g, _)| g.a)
        .collect();
    knots.sort_by(|x, y| x.0.total_cmp(&y.0));
    knots.push((breaks[breaks.len() - 1], radius(breaks[breaks.len() - 1])?));
    Ok(knots)
}

/// Schwarz profile of `body` along `u`: v(t) = (|body ∩ {⟨x,u⟩ = t}| /
/// κ_{n−1})^{1/(n−1)}.
pub fn schwarz_profile(body: &ConvexBody, u: &Direction, knot_count: usize) -> Result<Profile> {
    if knot_count < MIN_KNOTS {
        return Err(Error::OutOfRange(format!("knot_count {knot_count} < {MIN_KNOTS}")));
    }
    if u.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: u.dim(),
        });
    }
    if let ConvexBody::Profile(p) = body {
        return p.profile_along(u);
    }
    let n = body.dim();
    let (t0, t1) = body.support_interval(u)?;
    if t1 - t0 <= 1e-12 * body.scale() {
        return Err(Error::DegenerateBody("zero width along direction".into()));
    }
    let mut breaks: Vec<f64> = body.vertex_heights(u);
    breaks.sort_by(f64::total_cmp);
    let merge = 1e-9 * (t1 - t0);
    let mut clean: Vec<f64> = vec![t0];
    for b in breaks {
        if b - clean[clean.len() - 1] > merge && t1 - b > merge {
            clean.push(b);
        }
    }
    clean.push(t1);
    let k = kappa(n - 1);
    let inv = 1.0 / (n as f64 - 1.0);
    let radius = |t: f64| -> Result<f64> { Ok((body.section_measure(u, t)? / k).max(0.0).powf(inv)) };
    let mut knots = Vec::with_capacity(knot_count);
    if n == 2 {
        // chords are piecewise linear, so the vertex heights make it exact
        for t in polytope_knots(&clean, knot_count) {
            knots.push((t, radius(t)?));
        }
    } else {
        knots = refine_knots(&clean, knot_count, n, radius)?;
    }
    Profile::new(n, knots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polygon;

    #[test]
    fn unit_ball_volumes() {
        let pi = std::f64::consts::PI;
        assert_eq!(kappa(0), 1.0);
        assert_eq!(kappa(1), 2.0);
        assert!((kappa(2) - pi).abs() < 1e-15);
        assert!((kappa(3) - 4.0 * pi / 3.0).abs() < 1e-14);
        assert!((kappa(4) - pi * pi / 2.0).abs() < 1e-14);
        assert!((kappa(5) - 8.0 * pi * pi / 15.0).abs() < 1e-13);
    }

    #[test]
    fn disc_profile_volume() {
        let disc = Profile::from_fn(2, -1.0, 1.0, 4097, |t| (1.0 - t * t).max(0.0).sqrt()).unwrap();
        let v = profile_volume(&disc);
        assert!((v - std::f64::consts::PI).abs() / std::f64::consts::PI < 1e-6, "{v}");
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(Profile::new(1, vec![(0.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(Profile::new(2, vec![(0.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(Profile::new(2, vec![(0.0, 1.0), (0.5, 0.2), (1.0, 1.0)]).is_err());
        assert!(Profile::new(2, vec![(0.0, -1.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn square_and_triangle_profiles() {
        let sq = ConvexBody::Polygon(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap());
        let e1 = Direction::new(vec![1.0, 0.0]).unwrap();
        let p = schwarz_profile(&sq, &e1, 65).unwrap();
        assert!(p.knots().iter().all(|k| (k.1 - 0.5).abs() < 1e-15));
        assert!((profile_volume(&p) - 1.0).abs() < 1e-14);

        let tri = ConvexBody::Polygon(Polygon::new(vec![[0.0, -0.5], [1.0, 0.0], [0.0, 0.5]]).unwrap());
        let p = schwarz_profile(&tri, &e1, 65).unwrap();
        for &(t, v) in p.knots() {
            assert!((v - (1.0 - t) / 2.0).abs() < 1e-14);
        }
        assert!((profile_volume(&p) - 0.5).abs() < 1e-14);
        assert!(schwarz_profile(&tri, &e1, 8).is_err());
    }
}
